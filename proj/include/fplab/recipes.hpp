// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fplab {

// A recipe bundles one or more complete experiment configs under a name.
// Parts run independently into sibling output directories; the recipe
// passes when every part's assertions pass.
struct RecipePart {
    std::string label;
    std::string config_json;
};

struct Recipe {
    std::string name;
    std::string description;  // one line, shown by `recipes`
    std::string explanation;  // paragraph, shown by `explain`
    std::vector<RecipePart> parts;
};

const std::vector<Recipe>& recipe_catalog();

// nullptr when no recipe has that name.
const Recipe* find_recipe(std::string_view name);

}  // namespace fplab
