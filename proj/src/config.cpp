// SPDX-License-Identifier: Apache-2.0

#include "fplab/config.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <json.hpp>

#include "fplab/errors.hpp"

namespace fplab {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Collector {
    std::vector<std::string> errors;

    void add(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }

    void raise_if_any() const {
        if (errors.empty()) {
            return;
        }
        std::string msg = "invalid config:";
        for (const auto& e : errors) {
            msg += "\n  - " + e;
        }
        throw config_error(msg);
    }
};

const std::set<std::string>& known_metric_names() {
    static const std::set<std::string> names = {
        "mean-z",          "cross-term",       "cross-term-table", "decompose",
        "bound-rhs",       "tail-probability", "sweep",            "enumerate-exact",
        "normalization-check", "scalar-sign-mean-tail", "cosine-demo",
    };
    return names;
}

// check name -> metric name it reads
const std::map<std::string, std::string>& known_checks() {
    static const std::map<std::string, std::string> checks = {
        {"diagonal-unit", "cross-term-table"},
        {"normalization-pass", "normalization-check"},
        {"mean-z-equals", "mean-z"},
        {"mean-z-consistent-with-zero", "mean-z"},
        {"sweep-constant", "sweep"},
        {"sweep-slope-at-most", "sweep"},
        {"sweep-decay-beyond-error", "sweep"},
        {"sweep-consistent-with-zero", "sweep"},
        {"counterexample-enum-exact", "enumerate-exact"},
        {"tail-at-least", "tail-probability"},
        {"mean-tail-separation", "scalar-sign-mean-tail"},
        {"bound-im-significant", "bound-rhs"},
        {"bound-im-negligible", "bound-rhs"},
        {"decompose-total-matches", "decompose"},
        {"cosine-cases-exact", "cosine-demo"},
    };
    return checks;
}

std::string join_path(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed,
                Collector& errs) {
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            errs.add(join_path(path, item.key().c_str()), "unknown key");
        }
    }
}

bool get_uint(const json& j, const std::string& path, const char* key, std::uint64_t& out,
              Collector& errs, bool required) {
    if (!j.contains(key)) {
        if (required) {
            errs.add(join_path(path, key), "required field is missing");
        }
        return false;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        errs.add(join_path(path, key), "expected a non-negative integer");
        return false;
    }
    if (v.is_number_integer() && v.get<long long>() < 0) {
        errs.add(join_path(path, key), "expected a non-negative integer");
        return false;
    }
    out = v.get<std::uint64_t>();
    return true;
}

bool get_double(const json& j, const std::string& path, const char* key, double& out,
                Collector& errs, bool required) {
    if (!j.contains(key)) {
        if (required) {
            errs.add(join_path(path, key), "required field is missing");
        }
        return false;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        errs.add(join_path(path, key), "expected a number");
        return false;
    }
    out = v.get<double>();
    return true;
}

bool get_string(const json& j, const std::string& path, const char* key, std::string& out,
                Collector& errs, bool required) {
    if (!j.contains(key)) {
        if (required) {
            errs.add(join_path(path, key), "required field is missing");
        }
        return false;
    }
    const json& v = j.at(key);
    if (!v.is_string()) {
        errs.add(join_path(path, key), "expected a string");
        return false;
    }
    out = v.get<std::string>();
    return true;
}

bool get_bool(const json& j, const std::string& path, const char* key, bool& out, Collector& errs) {
    if (!j.contains(key)) {
        return false;
    }
    const json& v = j.at(key);
    if (!v.is_boolean()) {
        errs.add(join_path(path, key), "expected a boolean");
        return false;
    }
    out = v.get<bool>();
    return true;
}

std::complex<double> parse_complex(const json& j, const std::string& path, Collector& errs) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        errs.add(path, "expected a [re, im] number pair");
        return {0.0, 0.0};
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<std::complex<double>> parse_complex_list(const json& j, const std::string& path,
                                                     Collector& errs) {
    std::vector<std::complex<double>> out;
    if (!j.is_array()) {
        errs.add(path, "expected a list of [re, im] pairs");
        return out;
    }
    out.reserve(j.size());
    for (std::size_t idx = 0; idx < j.size(); ++idx) {
        out.push_back(parse_complex(j[idx], path + "[" + std::to_string(idx) + "]", errs));
    }
    return out;
}

ArrayGeometry parse_geometry(const json& j, const std::string& path, Collector& errs) {
    ArrayGeometry g;
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return g;
    }
    std::string kind;
    if (!get_string(j, path, "kind", kind, errs, true)) {
        return g;
    }

    if (kind == "uniform-linear") {
        check_keys(j, path, {"kind", "elements", "spacing"}, errs);
        g.kind = GeometryKind::UniformLinear;
        std::uint64_t elements = 0;
        if (get_uint(j, path, "elements", elements, errs, true)) {
            g.element_count = elements;
        }
        double spacing = 0.5;
        get_double(j, path, "spacing", spacing, errs, false);
        g.spacing_h = spacing;
    } else if (kind == "uniform-planar") {
        check_keys(j, path, {"kind", "rows", "cols", "spacing"}, errs);
        g.kind = GeometryKind::UniformPlanar;
        std::uint64_t rows = 0;
        std::uint64_t cols = 0;
        get_uint(j, path, "rows", rows, errs, true);
        get_uint(j, path, "cols", cols, errs, true);
        g.rows = rows;
        g.cols = cols;
        g.element_count = rows * cols;
        if (j.contains("spacing")) {
            const json& sp = j.at("spacing");
            if (sp.is_number()) {
                g.spacing_h = g.spacing_v = sp.get<double>();
            } else if (sp.is_array() && sp.size() == 2 && sp[0].is_number() && sp[1].is_number()) {
                g.spacing_h = sp[0].get<double>();
                g.spacing_v = sp[1].get<double>();
            } else {
                errs.add(path + ".spacing", "expected a number or a [horizontal, vertical] pair");
            }
        }
    } else if (kind == "explicit-positions") {
        check_keys(j, path, {"kind", "positions"}, errs);
        g.kind = GeometryKind::ExplicitPositions;
        if (!j.contains("positions") || !j.at("positions").is_array()) {
            errs.add(path + ".positions", "expected a list of [x, y, z] triples (wavelengths)");
            return g;
        }
        const json& positions = j.at("positions");
        g.positions.reserve(positions.size());
        for (std::size_t idx = 0; idx < positions.size(); ++idx) {
            const json& p = positions[idx];
            if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
                !p[2].is_number()) {
                errs.add(path + ".positions[" + std::to_string(idx) + "]",
                         "expected an [x, y, z] number triple");
                continue;
            }
            g.positions.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
        g.element_count = g.positions.size();
    } else {
        errs.add(path + ".kind", "unknown geometry kind '" + kind +
                                     "' (expected uniform-linear, uniform-planar or "
                                     "explicit-positions)");
    }
    return g;
}

void parse_aoas(const json& j, const std::string& path, ChannelEnsemble& e, Collector& errs) {
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return;
    }
    std::string kind;
    if (!get_string(j, path, "kind", kind, errs, true)) {
        return;
    }
    if (kind == "fixed") {
        check_keys(j, path, {"kind", "values_rad", "values_deg"}, errs);
        e.aoa_model = AoaModel::FixedList;
        const bool has_rad = j.contains("values_rad");
        const bool has_deg = j.contains("values_deg");
        if (has_rad == has_deg) {
            errs.add(path, "fixed angles need exactly one of values_rad or values_deg");
            return;
        }
        const json& values = has_rad ? j.at("values_rad") : j.at("values_deg");
        if (!values.is_array() || values.empty()) {
            errs.add(path + (has_rad ? ".values_rad" : ".values_deg"),
                     "expected a nonempty list of numbers");
            return;
        }
        e.fixed_aoas.clear();
        for (std::size_t idx = 0; idx < values.size(); ++idx) {
            if (!values[idx].is_number()) {
                errs.add(path + (has_rad ? ".values_rad[" : ".values_deg[") + std::to_string(idx) +
                             "]",
                         "expected a number");
                continue;
            }
            double v = values[idx].get<double>();
            if (has_deg) {
                v *= std::numbers::pi / 180.0;
            }
            e.fixed_aoas.push_back(v);
        }
    } else if (kind == "uniform-random") {
        check_keys(j, path, {"kind"}, errs);
        e.aoa_model = AoaModel::UniformRandom;
    } else {
        errs.add(path + ".kind",
                 "unknown angle model '" + kind + "' (expected fixed or uniform-random)");
    }
}

UserFactorDistribution parse_user_factor(const json& j, const std::string& path, Collector& errs) {
    UserFactorDistribution d;
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return d;
    }
    check_keys(j, path, {"kind", "variance", "value"}, errs);
    std::string kind;
    if (!get_string(j, path, "kind", kind, errs, true)) {
        return d;
    }
    if (kind == "rademacher") {
        d.kind = UserFactorDistribution::Kind::Rademacher;
    } else if (kind == "complex-gaussian") {
        d.kind = UserFactorDistribution::Kind::ComplexGaussian;
        get_double(j, path, "variance", d.variance, errs, false);
    } else if (kind == "uniform-phase") {
        d.kind = UserFactorDistribution::Kind::UniformPhase;
    } else if (kind == "constant") {
        d.kind = UserFactorDistribution::Kind::Constant;
        if (j.contains("value")) {
            d.value = parse_complex(j.at("value"), path + ".value", errs);
        }
    } else {
        errs.add(path + ".kind", "unknown user factor distribution '" + kind +
                                     "' (expected rademacher, complex-gaussian, uniform-phase or "
                                     "constant)");
    }
    return d;
}

void parse_gains(const json& j, const std::string& path, ChannelEnsemble& e, Collector& errs) {
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return;
    }
    std::string kind;
    if (!get_string(j, path, "kind", kind, errs, true)) {
        return;
    }
    if (kind == "iid-complex-gaussian") {
        check_keys(j, path, {"kind", "variance"}, errs);
        e.gain_model = GainModel::IidComplexGaussian;
        get_double(j, path, "variance", e.iid_variance, errs, false);
    } else if (kind == "factorized") {
        check_keys(j, path, {"kind", "path_factors", "user_factor"}, errs);
        e.gain_model = GainModel::Factorized;
        if (j.contains("path_factors")) {
            e.path_factors = parse_complex_list(j.at("path_factors"), path + ".path_factors", errs);
        }
        if (j.contains("user_factor")) {
            e.user_factor = parse_user_factor(j.at("user_factor"), path + ".user_factor", errs);
        }
    } else if (kind == "rademacher") {
        check_keys(j, path, {"kind"}, errs);
        e.gain_model = GainModel::Rademacher;
    } else if (kind == "correlated-users") {
        check_keys(j, path, {"kind", "common_weights", "differential_weights"}, errs);
        e.gain_model = GainModel::CorrelatedUsers;
        if (j.contains("common_weights")) {
            e.common_weights =
                parse_complex_list(j.at("common_weights"), path + ".common_weights", errs);
        }
        if (j.contains("differential_weights")) {
            e.differential_weights = parse_complex_list(j.at("differential_weights"),
                                                        path + ".differential_weights", errs);
        }
    } else if (kind == "fixed-matrix") {
        check_keys(j, path, {"kind", "entries"}, errs);
        e.gain_model = GainModel::FixedMatrix;
        if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").empty()) {
            errs.add(path + ".entries", "expected a nonempty list of gain rows");
            return;
        }
        const json& rows = j.at("entries");
        std::size_t cols = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].empty()) {
                errs.add(path + ".entries[" + std::to_string(r) + "]",
                         "expected a nonempty list of [re, im] pairs");
                return;
            }
            if (r == 0) {
                cols = rows[r].size();
                e.fixed_gains.set_size(rows.size(), cols);
            } else if (rows[r].size() != cols) {
                errs.add(path + ".entries[" + std::to_string(r) + "]",
                         "all gain rows must have the same length");
                return;
            }
            for (std::size_t c = 0; c < cols; ++c) {
                e.fixed_gains(r, c) = parse_complex(
                    rows[r][c],
                    path + ".entries[" + std::to_string(r) + "][" + std::to_string(c) + "]", errs);
            }
        }
    } else if (kind == "counterexample") {
        check_keys(j, path, {"kind"}, errs);
        e.gain_model = GainModel::Counterexample;
    } else {
        errs.add(path + ".kind",
                 "unknown gain model '" + kind +
                     "' (expected iid-complex-gaussian, factorized, rademacher, correlated-users, "
                     "fixed-matrix or counterexample)");
    }
}

ChannelEnsemble parse_ensemble(const json& j, const std::string& path, Collector& errs) {
    ChannelEnsemble e;
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return e;
    }
    check_keys(j, path, {"geometry", "paths", "users", "aoas", "gains", "coupling"}, errs);

    if (j.contains("geometry")) {
        e.geometry = parse_geometry(j.at("geometry"), path + ".geometry", errs);
    } else {
        errs.add(path + ".geometry", "required field is missing");
    }

    std::uint64_t paths = 0;
    if (get_uint(j, path, "paths", paths, errs, true)) {
        if (paths < 1) {
            errs.add(path + ".paths", "must be >= 1");
        }
        e.paths = paths;
    }
    std::uint64_t users = 2;
    if (get_uint(j, path, "users", users, errs, false)) {
        if (users < 2) {
            errs.add(path + ".users", "must be >= 2");
        }
        e.users = users;
    }

    if (j.contains("aoas")) {
        parse_aoas(j.at("aoas"), path + ".aoas", e, errs);
    } else {
        e.aoa_model = AoaModel::UniformRandom;
    }

    if (j.contains("gains")) {
        parse_gains(j.at("gains"), path + ".gains", e, errs);
    } else {
        errs.add(path + ".gains", "required field is missing");
    }

    std::string coupling;
    if (get_string(j, path, "coupling", coupling, errs, false)) {
        if (coupling == "independent") {
            e.coupling = Coupling::Independent;
        } else if (coupling == "shared-aoa") {
            e.coupling = Coupling::SharedAoa;
        } else if (coupling == "counterexample-coupled") {
            e.coupling = Coupling::CounterexampleCoupled;
        } else {
            errs.add(path + ".coupling",
                     "unknown coupling '" + coupling +
                         "' (expected independent, shared-aoa or counterexample-coupled)");
        }
    } else if (e.gain_model == GainModel::Counterexample) {
        e.coupling = Coupling::CounterexampleCoupled;
    }
    return e;
}

MetricSpec parse_metric(const json& j, const std::string& path, Collector& errs) {
    MetricSpec m;
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return m;
    }
    check_keys(j, path, {"name", "i", "k", "r", "s", "c_alpha", "trials", "metric", "tol"}, errs);
    if (!get_string(j, path, "name", m.name, errs, true)) {
        return m;
    }
    if (!known_metric_names().contains(m.name)) {
        std::string names;
        for (const auto& n : known_metric_names()) {
            names += names.empty() ? n : ", " + n;
        }
        errs.add(path + ".name", "unknown metric '" + m.name + "' (expected one of: " + names + ")");
        return m;
    }
    std::uint64_t v = 0;
    if (get_uint(j, path, "i", v, errs, false)) m.user_i = v;
    if (get_uint(j, path, "k", v, errs, false)) m.user_k = v;
    if (get_uint(j, path, "r", v, errs, false)) m.path_r = v;
    if (get_uint(j, path, "s", v, errs, false)) m.path_s = v;
    double d = 0.0;
    if (get_double(j, path, "c_alpha", d, errs, false)) m.c_alpha = d;
    if (get_uint(j, path, "trials", v, errs, false)) m.trials = v;
    get_string(j, path, "metric", m.sweep_metric, errs, false);
    if (m.name == "sweep" && m.sweep_metric != "mean_z" && m.sweep_metric != "cross_term" &&
        m.sweep_metric != "tail_prob") {
        errs.add(path + ".metric", "unknown sweep metric '" + m.sweep_metric +
                                       "' (expected mean_z, cross_term or tail_prob)");
    }
    get_double(j, path, "tol", m.tol, errs, false);
    return m;
}

AssertionSpec parse_assertion(const json& j, const std::string& path, Collector& errs) {
    AssertionSpec a;
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return a;
    }
    check_keys(j, path,
               {"check", "metric_index", "tol", "k_se", "value", "require_zero_se", "p_min", "eps",
                "slope_max", "m_low", "m_high"},
               errs);
    if (!get_string(j, path, "check", a.check, errs, true)) {
        return a;
    }
    if (!known_checks().contains(a.check)) {
        std::string names;
        for (const auto& [name, metric] : known_checks()) {
            names += names.empty() ? name : ", " + name;
        }
        errs.add(path + ".check", "unknown check '" + a.check + "' (expected one of: " + names + ")");
        return a;
    }
    if (a.check == "diagonal-unit") a.tol = 1e-9;
    if (a.check == "decompose-total-matches" || a.check == "cosine-cases-exact") a.tol = 1e-12;
    if (a.check == "bound-im-negligible") a.tol = 1e-12;

    std::uint64_t v = 0;
    if (get_uint(j, path, "metric_index", v, errs, false)) a.metric_index = v;
    get_double(j, path, "tol", a.tol, errs, false);
    get_double(j, path, "k_se", a.k_se, errs, false);
    if (j.contains("value")) {
        a.value = parse_complex(j.at("value"), path + ".value", errs);
    }
    get_bool(j, path, "require_zero_se", a.require_zero_se, errs);
    get_double(j, path, "p_min", a.p_min, errs, false);
    get_double(j, path, "eps", a.eps, errs, false);
    get_double(j, path, "slope_max", a.slope_max, errs, false);
    if (get_uint(j, path, "m_low", v, errs, false)) a.m_low = v;
    if (get_uint(j, path, "m_high", v, errs, false)) a.m_high = v;
    return a;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }

    Collector errs;
    ExperimentConfig cfg;
    if (!root.is_object()) {
        errs.add("config", "expected a JSON object");
        errs.raise_if_any();
    }
    check_keys(root, "",
               {"experiment", "master_seed", "trials", "ensemble", "metrics", "m_values", "eps",
                "assertions", "output_dir"},
               errs);

    if (!root.contains("experiment")) {
        errs.add("experiment", "required field is missing");
    } else if (get_string(root, "", "experiment", cfg.experiment, errs, true) &&
               cfg.experiment.empty()) {
        errs.add("experiment", "must be a nonempty string");
    }

    if (!root.contains("master_seed")) {
        errs.add("master_seed", "required field is missing (wall-clock seeding is not supported)");
    } else {
        std::uint64_t seed = 0;
        if (get_uint(root, "", "master_seed", seed, errs, true)) {
            cfg.master_seed = seed;
        }
    }

    std::uint64_t trials = 0;
    if (!root.contains("trials")) {
        errs.add("trials", "required field is missing");
    } else if (get_uint(root, "", "trials", trials, errs, true)) {
        if (trials < 2) {
            errs.add("trials", "must be >= 2, got " + std::to_string(trials));
        }
        cfg.trials = trials;
    }

    if (root.contains("ensemble")) {
        cfg.ensemble = parse_ensemble(root.at("ensemble"), "ensemble", errs);
    } else {
        errs.add("ensemble", "required field is missing");
    }

    if (!root.contains("metrics") || !root.at("metrics").is_array() ||
        root.at("metrics").empty()) {
        errs.add("metrics", "expected a nonempty list of metric requests");
    } else {
        const json& metrics = root.at("metrics");
        for (std::size_t idx = 0; idx < metrics.size(); ++idx) {
            cfg.metrics.push_back(
                parse_metric(metrics[idx], "metrics[" + std::to_string(idx) + "]", errs));
        }
    }

    if (root.contains("m_values")) {
        const json& mv = root.at("m_values");
        if (!mv.is_array() || mv.empty()) {
            errs.add("m_values", "expected a nonempty list of element counts");
        } else {
            for (std::size_t idx = 0; idx < mv.size(); ++idx) {
                if (!mv[idx].is_number_unsigned() && !mv[idx].is_number_integer()) {
                    errs.add("m_values[" + std::to_string(idx) + "]", "expected an integer >= 1");
                    continue;
                }
                const auto value = mv[idx].get<long long>();
                if (value < 1) {
                    errs.add("m_values[" + std::to_string(idx) + "]", "expected an integer >= 1");
                    continue;
                }
                cfg.m_values.push_back(static_cast<std::size_t>(value));
            }
            for (std::size_t idx = 1; idx < cfg.m_values.size(); ++idx) {
                if (cfg.m_values[idx] <= cfg.m_values[idx - 1]) {
                    errs.add("m_values", "must be strictly increasing");
                    break;
                }
            }
        }
    }

    if (root.contains("eps")) {
        const json& eps = root.at("eps");
        if (!eps.is_array() || eps.empty()) {
            errs.add("eps", "expected a nonempty list of positive thresholds");
        } else {
            for (std::size_t idx = 0; idx < eps.size(); ++idx) {
                if (!eps[idx].is_number() || !(eps[idx].get<double>() > 0.0)) {
                    errs.add("eps[" + std::to_string(idx) + "]", "expected a number > 0");
                    continue;
                }
                cfg.eps_values.push_back(eps[idx].get<double>());
            }
        }
    }
    if (cfg.eps_values.empty()) {
        cfg.eps_values = {0.5};
    }

    if (root.contains("assertions")) {
        const json& asserts = root.at("assertions");
        if (!asserts.is_array()) {
            errs.add("assertions", "expected a list of checks");
        } else {
            for (std::size_t idx = 0; idx < asserts.size(); ++idx) {
                cfg.assertions.push_back(
                    parse_assertion(asserts[idx], "assertions[" + std::to_string(idx) + "]", errs));
            }
        }
    }

    get_string(root, "", "output_dir", cfg.output_dir, errs, false);

    // Cross-field checks. Metric names already validated above.
    for (std::size_t idx = 0; idx < cfg.metrics.size(); ++idx) {
        const MetricSpec& m = cfg.metrics[idx];
        const std::string path = "metrics[" + std::to_string(idx) + "]";
        if (m.name == "sweep" && cfg.m_values.empty()) {
            errs.add(path, "sweep metrics require a top-level m_values list");
        }
        if (m.name == "enumerate-exact" && cfg.ensemble.gain_model != GainModel::Counterexample) {
            errs.add(path, "enumerate-exact applies only to the counterexample gain model");
        }
        if (m.c_alpha && !(*m.c_alpha > 0.0)) {
            errs.add(path + ".c_alpha", "must be > 0");
        }
        if (m.trials && *m.trials < 2) {
            errs.add(path + ".trials", "must be >= 2");
        }
    }
    for (std::size_t idx = 0; idx < cfg.assertions.size(); ++idx) {
        const AssertionSpec& a = cfg.assertions[idx];
        const std::string path = "assertions[" + std::to_string(idx) + "]";
        const auto it = known_checks().find(a.check);
        if (it == known_checks().end()) {
            continue;  // already reported
        }
        const std::string& wanted = it->second;
        if (a.metric_index) {
            if (*a.metric_index >= cfg.metrics.size()) {
                errs.add(path + ".metric_index", "out of range");
            } else if (cfg.metrics[*a.metric_index].name != wanted) {
                errs.add(path + ".metric_index", "check '" + a.check + "' reads metric '" + wanted +
                                                     "' but metrics[" +
                                                     std::to_string(*a.metric_index) + "] is '" +
                                                     cfg.metrics[*a.metric_index].name + "'");
            }
        } else {
            bool found = false;
            for (const auto& m : cfg.metrics) {
                if (m.name == wanted) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                errs.add(path, "check '" + a.check + "' needs a '" + wanted +
                                   "' metric in the metrics list");
            }
        }
    }

    if (errs.errors.empty()) {
        try {
            cfg.ensemble.validate();
        } catch (const config_error& e) {
            errs.add("ensemble", e.what());
        }
    }
    errs.raise_if_any();
    return cfg;
}

namespace {

ordered_json complex_to_json(const std::complex<double>& v) {
    return ordered_json::array({v.real(), v.imag()});
}

ordered_json complex_list_to_json(const std::vector<std::complex<double>>& values) {
    ordered_json out = ordered_json::array();
    for (const auto& v : values) {
        out.push_back(complex_to_json(v));
    }
    return out;
}

ordered_json geometry_to_json(const ArrayGeometry& g) {
    ordered_json out;
    switch (g.kind) {
        case GeometryKind::UniformLinear:
            out["kind"] = "uniform-linear";
            out["elements"] = g.element_count;
            out["spacing"] = g.spacing_h;
            break;
        case GeometryKind::UniformPlanar:
            out["kind"] = "uniform-planar";
            out["rows"] = g.rows;
            out["cols"] = g.cols;
            out["spacing"] = ordered_json::array({g.spacing_h, g.spacing_v});
            break;
        case GeometryKind::ExplicitPositions: {
            out["kind"] = "explicit-positions";
            ordered_json positions = ordered_json::array();
            for (const auto& p : g.positions) {
                positions.push_back(ordered_json::array({p[0], p[1], p[2]}));
            }
            out["positions"] = positions;
            break;
        }
    }
    return out;
}

ordered_json user_factor_to_json(const UserFactorDistribution& d) {
    ordered_json out;
    switch (d.kind) {
        case UserFactorDistribution::Kind::Rademacher:
            out["kind"] = "rademacher";
            break;
        case UserFactorDistribution::Kind::ComplexGaussian:
            out["kind"] = "complex-gaussian";
            out["variance"] = d.variance;
            break;
        case UserFactorDistribution::Kind::UniformPhase:
            out["kind"] = "uniform-phase";
            break;
        case UserFactorDistribution::Kind::Constant:
            out["kind"] = "constant";
            out["value"] = complex_to_json(d.value);
            break;
    }
    return out;
}

ordered_json gains_to_json(const ChannelEnsemble& e) {
    ordered_json out;
    out["kind"] = to_string(e.gain_model);
    switch (e.gain_model) {
        case GainModel::IidComplexGaussian:
            out["variance"] = e.iid_variance;
            break;
        case GainModel::Factorized:
            out["path_factors"] = complex_list_to_json(e.path_factors);
            out["user_factor"] = user_factor_to_json(e.user_factor);
            break;
        case GainModel::CorrelatedUsers:
            out["common_weights"] = complex_list_to_json(e.effective_common_weights());
            out["differential_weights"] = complex_list_to_json(e.effective_differential_weights());
            break;
        case GainModel::FixedMatrix: {
            ordered_json rows = ordered_json::array();
            for (std::size_t r = 0; r < e.fixed_gains.n_rows; ++r) {
                ordered_json row = ordered_json::array();
                for (std::size_t c = 0; c < e.fixed_gains.n_cols; ++c) {
                    row.push_back(complex_to_json(e.fixed_gains(r, c)));
                }
                rows.push_back(row);
            }
            out["entries"] = rows;
            break;
        }
        case GainModel::Rademacher:
        case GainModel::Counterexample:
            break;
    }
    return out;
}

ordered_json ensemble_to_json(const ChannelEnsemble& e) {
    ordered_json out;
    out["geometry"] = geometry_to_json(e.geometry);
    out["paths"] = e.paths;
    out["users"] = e.users;
    ordered_json aoas;
    if (e.aoa_model == AoaModel::FixedList) {
        aoas["kind"] = "fixed";
        aoas["values_rad"] = e.fixed_aoas;
    } else {
        aoas["kind"] = "uniform-random";
    }
    out["aoas"] = aoas;
    out["gains"] = gains_to_json(e);
    out["coupling"] = to_string(e.coupling);
    return out;
}

ordered_json metric_to_json(const MetricSpec& m) {
    ordered_json out;
    out["name"] = m.name;
    if (m.name == "mean-z" || m.name == "decompose" || m.name == "tail-probability") {
        out["i"] = m.user_i;
        out["k"] = m.user_k;
    }
    if (m.name == "cross-term") {
        out["r"] = m.path_r;
        out["s"] = m.path_s;
    }
    if (m.name == "sweep") {
        out["metric"] = m.sweep_metric;
        if (m.sweep_metric == "mean_z" || m.sweep_metric == "tail_prob") {
            out["i"] = m.user_i;
            out["k"] = m.user_k;
        }
        if (m.sweep_metric == "cross_term") {
            out["r"] = m.path_r;
            out["s"] = m.path_s;
        }
    }
    if (m.name == "bound-rhs" && m.c_alpha) {
        out["c_alpha"] = *m.c_alpha;
    }
    if (m.name == "normalization-check") {
        out["tol"] = m.tol;
    }
    if (m.trials) {
        out["trials"] = *m.trials;
    }
    return out;
}

ordered_json assertion_to_json(const AssertionSpec& a) {
    ordered_json out;
    out["check"] = a.check;
    if (a.metric_index) {
        out["metric_index"] = *a.metric_index;
    }
    if (a.check == "diagonal-unit" || a.check == "decompose-total-matches" ||
        a.check == "cosine-cases-exact" || a.check == "bound-im-negligible") {
        out["tol"] = a.tol;
    }
    if (a.check == "mean-z-equals" || a.check == "sweep-constant") {
        out["value"] = complex_to_json(a.value);
        out["tol"] = a.tol;
        out["require_zero_se"] = a.require_zero_se;
    }
    if (a.check == "mean-z-consistent-with-zero" || a.check == "sweep-consistent-with-zero" ||
        a.check == "bound-im-significant") {
        out["k_se"] = a.k_se;
    }
    if (a.check == "sweep-slope-at-most") {
        out["slope_max"] = a.slope_max;
    }
    if (a.check == "sweep-decay-beyond-error") {
        out["m_low"] = a.m_low;
        out["m_high"] = a.m_high;
        out["k_se"] = a.k_se;
    }
    if (a.check == "tail-at-least") {
        out["eps"] = a.eps;
        out["p_min"] = a.p_min;
    }
    if (a.check == "mean-tail-separation") {
        out["k_se"] = a.k_se;
        out["eps"] = a.eps;
        out["p_min"] = a.p_min;
    }
    return out;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& config) {
    ordered_json out;
    out["experiment"] = config.experiment;
    out["master_seed"] = config.master_seed;
    out["trials"] = config.trials;
    out["ensemble"] = ensemble_to_json(config.ensemble);
    ordered_json metrics = ordered_json::array();
    for (const auto& m : config.metrics) {
        metrics.push_back(metric_to_json(m));
    }
    out["metrics"] = metrics;
    if (!config.m_values.empty()) {
        out["m_values"] = config.m_values;
    }
    out["eps"] = config.eps_values;
    if (!config.assertions.empty()) {
        ordered_json asserts = ordered_json::array();
        for (const auto& a : config.assertions) {
            asserts.push_back(assertion_to_json(a));
        }
        out["assertions"] = asserts;
    }
    if (!config.output_dir.empty()) {
        out["output_dir"] = config.output_dir;
    }
    return out.dump(2) + "\n";
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace fplab
