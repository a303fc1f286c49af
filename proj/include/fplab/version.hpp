// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fplab {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace fplab
