// SPDX-License-Identifier: Apache-2.0

#include "fplab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>

#include <json.hpp>

#include "fplab/convergence.hpp"
#include "fplab/csv.hpp"
#include "fplab/errors.hpp"
#include "fplab/fp_metrics.hpp"
#include "fplab/version.hpp"

namespace fplab {

namespace {

using ordered_json = nlohmann::ordered_json;

struct MetricOutcome {
    MetricSpec spec;
    std::string csv_name;
    CsvTable table;
    ordered_json section;

    std::optional<MeanEstimate> mean_z;
    std::optional<CrossTermTable> cross_table;
    std::optional<SweepResult> sweep;
    std::optional<Decomposition> decomposition;
    std::optional<std::complex<double>> decomposition_reference;
    std::optional<BoundEstimate> bound;
    std::vector<std::pair<double, TailEstimate>> tails;

    struct EnumRow {
        std::size_t paths = 0;
        std::size_t elements = 0;
        double mean_z = 0.0;
        double bound_rhs = 0.0;
        double margin = 0.0;
    };
    std::vector<EnumRow> enum_rows;

    std::optional<MeanEstimate> scalar_sign_mean;
    std::vector<std::pair<double, TailEstimate>> scalar_sign_tails;

    struct CosineCase {
        std::string name;
        double value = 0.0;
        double expected = 0.0;
    };
    std::vector<CosineCase> cosine_cases;

    std::optional<NormalizationReport> normalization;
    std::size_t normalization_trials = 0;
};

ordered_json estimate_to_json(const MeanEstimate& est) {
    ordered_json out;
    out["mean"] = ordered_json::array({est.value.real(), est.value.imag()});
    out["se_re"] = est.se_re;
    out["se_im"] = est.se_im;
    out["trials"] = est.trials;
    return out;
}

std::vector<std::string> estimate_cells(const MeanEstimate& est) {
    return {format_double(est.value.real()), format_double(est.value.imag()),
            format_double(est.se_re), format_double(est.se_im)};
}

MetricOutcome run_mean_z(const ExperimentConfig& cfg, const MetricSpec& spec, std::size_t trials,
                         std::uint64_t seed, const RunContext& ctx) {
    MetricOutcome out;
    const MeanEstimate est = estimate_mean_z(cfg.ensemble, spec.user_i, spec.user_k, trials, seed, ctx);
    out.mean_z = est;
    out.table.header = {"i", "k", "mean_re", "mean_im", "se_re", "se_im", "trials"};
    std::vector<std::string> row = {format_index(spec.user_i), format_index(spec.user_k)};
    const auto cells = estimate_cells(est);
    row.insert(row.end(), cells.begin(), cells.end());
    row.push_back(format_index(est.trials));
    out.table.rows.push_back(row);
    out.section["i"] = spec.user_i;
    out.section["k"] = spec.user_k;
    out.section["estimate"] = estimate_to_json(est);
    return out;
}

MetricOutcome run_cross_term(const ExperimentConfig& cfg, const MetricSpec& spec,
                             std::size_t trials, std::uint64_t seed, const RunContext& ctx) {
    MetricOutcome out;
    const CrossTermEstimate est =
        steering_cross_term(cfg.ensemble, spec.path_r, spec.path_s, trials, seed, ctx);
    out.table.header = {"r", "s", "t_re", "t_im", "se_re", "se_im"};
    std::vector<std::string> row = {format_index(spec.path_r), format_index(spec.path_s)};
    const auto cells = estimate_cells(est.value);
    row.insert(row.end(), cells.begin(), cells.end());
    out.table.rows.push_back(row);
    out.section["r"] = spec.path_r;
    out.section["s"] = spec.path_s;
    out.section["deterministic"] = est.deterministic;
    out.section["estimate"] = estimate_to_json(est.value);
    return out;
}

MetricOutcome run_cross_term_table(const ExperimentConfig& cfg, std::size_t trials,
                                   std::uint64_t seed, const RunContext& ctx) {
    MetricOutcome out;
    const CrossTermTable table = steering_cross_term_table(cfg.ensemble, trials, seed, ctx);
    out.cross_table = table;
    out.table.header = {"r", "s", "t_re", "t_im", "se_re", "se_im"};
    double max_diag_dev = 0.0;
    for (std::size_t r = 0; r < table.values.n_rows; ++r) {
        for (std::size_t s = 0; s < table.values.n_cols; ++s) {
            out.table.rows.push_back({format_index(r), format_index(s),
                                      format_double(table.values(r, s).real()),
                                      format_double(table.values(r, s).imag()),
                                      format_double(table.se_re(r, s)),
                                      format_double(table.se_im(r, s))});
            if (r == s) {
                max_diag_dev = std::max(max_diag_dev, std::abs(table.values(r, r) - 1.0));
            }
        }
    }
    out.section["deterministic"] = table.deterministic;
    out.section["trials"] = table.trials;
    out.section["max_diagonal_deviation"] = max_diag_dev;
    return out;
}

MetricOutcome run_decompose(const ExperimentConfig& cfg, const MetricSpec& spec,
                            std::size_t trials, std::uint64_t seed, const RunContext& ctx) {
    MetricOutcome out;
    const Decomposition d =
        decompose_mean_z(cfg.ensemble, spec.user_i, spec.user_k, trials, seed, ctx);
    const MeanEstimate ref =
        estimate_mean_z(cfg.ensemble, spec.user_i, spec.user_k, trials, seed, ctx);
    out.decomposition = d;
    out.decomposition_reference = ref.value;

    out.table.header = {"term", "value_re", "value_im", "se_re", "se_im"};
    const auto add_row = [&](const char* term, const MeanEstimate& est) {
        std::vector<std::string> row = {term};
        const auto cells = estimate_cells(est);
        row.insert(row.end(), cells.begin(), cells.end());
        out.table.rows.push_back(row);
    };
    add_row("same_path", d.diag_part);
    add_row("cross_path", d.offdiag_part);
    out.table.rows.push_back({"total", format_double(d.total.real()),
                              format_double(d.total.imag()), "0", "0"});
    out.table.rows.push_back({"mean_z_reference", format_double(ref.value.real()),
                              format_double(ref.value.imag()), format_double(ref.se_re),
                              format_double(ref.se_im)});

    const double mismatch = std::abs(d.total - ref.value) /
                            std::max({1.0, std::abs(d.total), std::abs(ref.value)});
    out.section["same_path"] = estimate_to_json(d.diag_part);
    out.section["cross_path"] = estimate_to_json(d.offdiag_part);
    out.section["total"] = ordered_json::array({d.total.real(), d.total.imag()});
    out.section["mean_z_reference"] = estimate_to_json(ref);
    out.section["total_vs_reference_rel"] = mismatch;
    return out;
}

MetricOutcome run_bound_rhs(const ExperimentConfig& cfg, const MetricSpec& spec,
                            std::size_t trials, std::uint64_t seed, const RunContext& ctx) {
    double c_alpha = 0.0;
    if (spec.c_alpha) {
        c_alpha = *spec.c_alpha;
    } else {
        c_alpha = cfg.ensemble.amplitude_bound();
        if (!std::isfinite(c_alpha) || !(c_alpha > 0.0)) {
            throw config_error(
                "bound-rhs: the ensemble has no finite amplitude bound; set c_alpha explicitly");
        }
    }

    MetricOutcome out;
    const BoundEstimate b = bound_rhs_21(cfg.ensemble, c_alpha, trials, seed, ctx);
    out.bound = b;
    out.table.header = {"c_alpha",      "bound_re", "bound_im", "se_re",
                        "se_im",        "same_path_re", "same_path_im", "trials"};
    out.table.rows.push_back(
        {format_double(b.c_alpha), format_double(b.value.value.real()),
         format_double(b.value.value.imag()), format_double(b.value.se_re),
         format_double(b.value.se_im), format_double(b.same_path_part.value.real()),
         format_double(b.same_path_part.value.imag()), format_index(b.value.trials)});
    out.section["c_alpha"] = b.c_alpha;
    out.section["estimate"] = estimate_to_json(b.value);
    out.section["same_path_part"] = estimate_to_json(b.same_path_part);
    // The same-path part alone already equals c_alpha^2 * L under the norm
    // convention, so the bound side cannot vanish with M.
    out.section["same_path_floor"] =
        b.c_alpha * b.c_alpha * static_cast<double>(cfg.ensemble.paths);
    return out;
}

MetricOutcome run_tail_probability(const ExperimentConfig& cfg, const MetricSpec& spec,
                                   std::size_t trials, std::uint64_t seed, const RunContext& ctx) {
    MetricOutcome out;
    out.table.header = {"eps", "probability", "se", "trials"};
    ordered_json rows = ordered_json::array();
    for (const double eps : cfg.eps_values) {
        const TailEstimate t =
            tail_probability(cfg.ensemble, spec.user_i, spec.user_k, eps, trials, seed, ctx);
        out.tails.emplace_back(eps, t);
        out.table.rows.push_back({format_double(eps), format_double(t.probability),
                                  format_double(t.se), format_index(t.trials)});
        ordered_json row;
        row["eps"] = eps;
        row["probability"] = t.probability;
        row["se"] = t.se;
        row["trials"] = t.trials;
        rows.push_back(row);
    }
    out.section["i"] = spec.user_i;
    out.section["k"] = spec.user_k;
    out.section["tails"] = rows;
    return out;
}

MetricOutcome run_sweep(const ExperimentConfig& cfg, const MetricSpec& spec, std::size_t trials,
                        std::uint64_t seed, const RunContext& ctx) {
    SweepRequest request;
    request.base = cfg.ensemble;
    request.m_values = cfg.m_values;
    request.user_i = spec.user_i;
    request.user_k = spec.user_k;
    request.path_r = spec.path_r;
    request.path_s = spec.path_s;
    request.eps = cfg.eps_values.front();
    request.trials = trials;
    if (spec.sweep_metric == "mean_z") {
        request.metric = SweepMetric::MeanZ;
    } else if (spec.sweep_metric == "cross_term") {
        request.metric = SweepMetric::CrossTerm;
    } else {
        request.metric = SweepMetric::TailProb;
    }

    MetricOutcome out;
    const SweepResult result = sweep_over_m(request, seed, ctx);
    out.sweep = result;
    out.table.header = {"M", "metric_re", "metric_im", "se_re", "se_im", "trials"};
    ordered_json points = ordered_json::array();
    for (const auto& p : result.points) {
        std::vector<std::string> row = {format_index(p.m_value)};
        const auto cells = estimate_cells(p.estimate);
        row.insert(row.end(), cells.begin(), cells.end());
        row.push_back(format_index(p.estimate.trials));
        out.table.rows.push_back(row);

        ordered_json jp;
        jp["M"] = p.m_value;
        jp["estimate"] = estimate_to_json(p.estimate);
        jp["usable_for_fit"] = p.usable_for_fit;
        points.push_back(jp);
    }
    out.section["metric"] = to_string(result.metric);
    out.section["points"] = points;
    if (result.fitted_log_slope) {
        out.section["fitted_log_slope"] = *result.fitted_log_slope;
    } else {
        out.section["fitted_log_slope"] = nullptr;
    }
    return out;
}

MetricOutcome run_enumerate_exact(const ExperimentConfig& cfg) {
    MetricOutcome out;
    out.table.header = {"L", "M", "mean_z_exact", "bound_rhs_exact", "margin"};
    std::vector<std::size_t> m_values = cfg.m_values;
    if (m_values.empty()) {
        m_values.push_back(cfg.ensemble.geometry.element_count);
    }
    ordered_json rows = ordered_json::array();
    for (const std::size_t m : m_values) {
        const ExactEnumeration e = enumerate_exact_mean(cfg.ensemble.paths, m);
        MetricOutcome::EnumRow row;
        row.paths = cfg.ensemble.paths;
        row.elements = m;
        row.mean_z = e.mean_z;
        row.bound_rhs = e.bound_rhs;
        row.margin = e.mean_z - e.bound_rhs;
        out.enum_rows.push_back(row);
        out.table.rows.push_back({format_index(row.paths), format_index(row.elements),
                                  format_double(row.mean_z), format_double(row.bound_rhs),
                                  format_double(row.margin)});
        ordered_json jr;
        jr["L"] = row.paths;
        jr["M"] = row.elements;
        jr["mean_z_exact"] = row.mean_z;
        jr["bound_rhs_exact"] = row.bound_rhs;
        jr["margin"] = row.margin;
        rows.push_back(jr);
    }
    out.section["rows"] = rows;
    return out;
}

MetricOutcome run_normalization_check(const ExperimentConfig& cfg, const MetricSpec& spec,
                                      std::size_t trials, std::uint64_t seed) {
    const bool deterministic = cfg.ensemble.aoa_model == AoaModel::FixedList &&
                               cfg.ensemble.coupling != Coupling::CounterexampleCoupled;
    const std::size_t used = deterministic ? 1 : trials;

    NormalizationReport worst;
    worst.tol = spec.tol;
    worst.deviations.assign(cfg.ensemble.paths, 0.0);
    worst.pass = true;
    for (std::size_t n = 0; n < used; ++n) {
        const SteeringMatrix w = sample_steering(cfg.ensemble, seed, n);
        const NormalizationReport r = check_normalization(w, spec.tol);
        for (std::size_t l = 0; l < r.deviations.size(); ++l) {
            worst.deviations[l] = std::max(worst.deviations[l], r.deviations[l]);
        }
        worst.max_deviation = std::max(worst.max_deviation, r.max_deviation);
        worst.pass = worst.pass && r.pass;
    }

    MetricOutcome out;
    out.normalization = worst;
    out.normalization_trials = used;
    out.table.header = {"r", "max_deviation", "tol", "pass"};
    for (std::size_t l = 0; l < worst.deviations.size(); ++l) {
        out.table.rows.push_back({format_index(l), format_double(worst.deviations[l]),
                                  format_double(spec.tol),
                                  worst.deviations[l] <= spec.tol ? "1" : "0"});
    }
    out.section["tol"] = spec.tol;
    out.section["max_deviation"] = worst.max_deviation;
    out.section["pass"] = worst.pass;
    out.section["trials"] = used;
    return out;
}

MetricOutcome run_scalar_sign(const ExperimentConfig& cfg, std::size_t trials, std::uint64_t seed,
                           const RunContext& ctx) {
    MetricOutcome out;
    const MeanEstimate mean = scalar_sign_mean_z(trials, seed, ctx);
    out.scalar_sign_mean = mean;
    out.table.header = {"eps", "mean_re", "mean_im", "se_re", "se_im", "probability", "tail_se",
                        "trials"};
    ordered_json tails = ordered_json::array();
    for (const double eps : cfg.eps_values) {
        const TailEstimate t = scalar_sign_tail_probability(eps, trials, seed, ctx);
        out.scalar_sign_tails.emplace_back(eps, t);
        out.table.rows.push_back({format_double(eps), format_double(mean.value.real()),
                                  format_double(mean.value.imag()), format_double(mean.se_re),
                                  format_double(mean.se_im), format_double(t.probability),
                                  format_double(t.se), format_index(t.trials)});
        ordered_json row;
        row["eps"] = eps;
        row["probability"] = t.probability;
        row["se"] = t.se;
        tails.push_back(row);
    }
    out.section["mean"] = estimate_to_json(mean);
    out.section["tails"] = tails;
    return out;
}

MetricOutcome run_cosine_demo() {
    MetricOutcome out;
    out.table.header = {"case", "cosine", "expected"};
    const auto add_case = [&](const char* name, std::vector<double> a, std::vector<double> b,
                              double expected) {
        const double c = cosine_similarity(a, b);
        out.cosine_cases.push_back({name, c, expected});
        out.table.rows.push_back({name, format_double(c), format_double(expected)});
    };
    // Alignment is scale-free, orthogonality is exact, and a 45-degree
    // pair lands at 1/sqrt(2).
    add_case("aligned", {1.0, 1.0, 1.0, 1.0}, {2.0, 2.0, 2.0, 2.0}, 1.0);
    add_case("orthogonal", {1.0, 0.0}, {0.0, 1.0}, 0.0);
    add_case("diagonal", {1.0, 0.0}, {1.0, 1.0}, std::sqrt(0.5));

    ordered_json cases = ordered_json::array();
    for (const auto& c : out.cosine_cases) {
        ordered_json jc;
        jc["case"] = c.name;
        jc["cosine"] = c.value;
        jc["expected"] = c.expected;
        cases.push_back(jc);
    }
    out.section["cases"] = cases;
    return out;
}

MetricOutcome execute_metric(const ExperimentConfig& cfg, const MetricSpec& spec,
                             std::uint64_t seed, const RunContext& ctx) {
    const std::size_t trials = spec.trials.value_or(cfg.trials);
    if (spec.name == "mean-z") return run_mean_z(cfg, spec, trials, seed, ctx);
    if (spec.name == "cross-term") return run_cross_term(cfg, spec, trials, seed, ctx);
    if (spec.name == "cross-term-table") return run_cross_term_table(cfg, trials, seed, ctx);
    if (spec.name == "decompose") return run_decompose(cfg, spec, trials, seed, ctx);
    if (spec.name == "bound-rhs") return run_bound_rhs(cfg, spec, trials, seed, ctx);
    if (spec.name == "tail-probability") return run_tail_probability(cfg, spec, trials, seed, ctx);
    if (spec.name == "sweep") return run_sweep(cfg, spec, trials, seed, ctx);
    if (spec.name == "enumerate-exact") return run_enumerate_exact(cfg);
    if (spec.name == "normalization-check")
        return run_normalization_check(cfg, spec, trials, seed);
    if (spec.name == "scalar-sign-mean-tail") return run_scalar_sign(cfg, trials, seed, ctx);
    if (spec.name == "cosine-demo") return run_cosine_demo();
    throw config_error("unknown metric '" + spec.name + "'");
}

std::vector<const MetricOutcome*> matching_outcomes(const std::vector<MetricOutcome>& outcomes,
                                                    const std::string& metric_name,
                                                    const std::optional<std::size_t>& index) {
    std::vector<const MetricOutcome*> found;
    if (index) {
        if (*index < outcomes.size() && outcomes[*index].spec.name == metric_name) {
            found.push_back(&outcomes[*index]);
        }
        return found;
    }
    for (const auto& o : outcomes) {
        if (o.spec.name == metric_name) {
            found.push_back(&o);
        }
    }
    return found;
}

const std::map<std::string, std::string>& check_to_metric() {
    static const std::map<std::string, std::string> table = {
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
    return table;
}

Verdict evaluate_assertion(const AssertionSpec& a, const std::vector<MetricOutcome>& outcomes) {
    Verdict v;
    v.check = a.check;
    const auto metric_it = check_to_metric().find(a.check);
    if (metric_it == check_to_metric().end()) {
        v.metric = "?";
        v.observed = "unknown check";
        return v;
    }
    v.metric = metric_it->second;
    const auto matches = matching_outcomes(outcomes, metric_it->second, a.metric_index);
    if (matches.empty()) {
        v.observed = "no matching metric result";
        return v;
    }

    if (a.check == "diagonal-unit") {
        double worst = 0.0;
        for (const auto* o : matches) {
            worst = std::max(worst, o->section.at("max_diagonal_deviation").get<double>());
        }
        v.pass = worst <= a.tol;
        v.observed = "max |T_rr - 1| = " + format_double(worst);
        v.threshold = "<= " + format_double(a.tol);
    } else if (a.check == "normalization-pass") {
        double worst = 0.0;
        bool pass = true;
        for (const auto* o : matches) {
            worst = std::max(worst, o->normalization->max_deviation);
            pass = pass && o->normalization->pass;
        }
        v.pass = pass;
        v.observed = "max column deviation = " + format_double(worst);
        v.threshold = "per-metric tol";
    } else if (a.check == "mean-z-equals") {
        bool pass = true;
        double worst = 0.0;
        bool se_zero = true;
        for (const auto* o : matches) {
            const MeanEstimate& est = *o->mean_z;
            worst = std::max(worst, std::abs(est.value - a.value));
            se_zero = se_zero && est.se_re == 0.0 && est.se_im == 0.0;
        }
        pass = worst <= a.tol && (!a.require_zero_se || se_zero);
        v.pass = pass;
        v.observed = "|mean - target| = " + format_double(worst) +
                     (a.require_zero_se ? (se_zero ? ", se = 0" : ", se != 0") : "");
        v.threshold = "<= " + format_double(a.tol) + (a.require_zero_se ? " and zero se" : "");
    } else if (a.check == "mean-z-consistent-with-zero") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            const MeanEstimate& est = *o->mean_z;
            const double mag = std::abs(est.value);
            pass = pass && mag <= a.k_se * est.se_max();
            obs = "|mean| = " + format_double(mag) + ", max se = " + format_double(est.se_max());
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "|mean| <= " + format_double(a.k_se) + " * max se";
    } else if (a.check == "sweep-constant") {
        bool pass = true;
        double worst = 0.0;
        bool se_zero = true;
        for (const auto* o : matches) {
            for (const auto& p : o->sweep->points) {
                worst = std::max(worst, std::abs(p.estimate.value - a.value));
                se_zero = se_zero && p.estimate.se_re == 0.0 && p.estimate.se_im == 0.0;
            }
        }
        pass = worst <= a.tol && (!a.require_zero_se || se_zero);
        v.pass = pass;
        v.observed = "max |point - target| = " + format_double(worst) +
                     (a.require_zero_se ? (se_zero ? ", se = 0" : ", se != 0") : "");
        v.threshold = "<= " + format_double(a.tol) + (a.require_zero_se ? " and zero se" : "");
    } else if (a.check == "sweep-slope-at-most") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            if (!o->sweep->fitted_log_slope) {
                pass = false;
                obs = "slope not fitted (fewer than 3 usable points)";
                continue;
            }
            const double slope = *o->sweep->fitted_log_slope;
            pass = pass && slope <= a.slope_max;
            obs = "slope = " + format_double(slope);
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "<= " + format_double(a.slope_max);
    } else if (a.check == "sweep-decay-beyond-error") {
        bool pass = true;
        std::string obs = "points not found";
        for (const auto* o : matches) {
            const SweepPoint* low = nullptr;
            const SweepPoint* high = nullptr;
            for (const auto& p : o->sweep->points) {
                if (p.m_value == a.m_low) low = &p;
                if (p.m_value == a.m_high) high = &p;
            }
            if (low == nullptr || high == nullptr) {
                pass = false;
                continue;
            }
            const double gap = std::abs(low->estimate.value) - std::abs(high->estimate.value);
            const double err = std::hypot(low->estimate.se_max(), high->estimate.se_max());
            pass = pass && gap > a.k_se * err;
            obs = "|low| - |high| = " + format_double(gap) +
                  ", combined se = " + format_double(err);
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "gap > " + format_double(a.k_se) + " * combined se";
    } else if (a.check == "sweep-consistent-with-zero") {
        bool pass = true;
        double worst_ratio = 0.0;
        for (const auto* o : matches) {
            for (const auto& p : o->sweep->points) {
                const double mag = std::abs(p.estimate.value);
                const double se = p.estimate.se_max();
                pass = pass && mag <= a.k_se * se;
                if (mag > 0.0) {
                    // mag / 0 is +inf: a nonzero mean with zero se must not
                    // report a zero ratio as if it passed with margin.
                    worst_ratio = std::max(worst_ratio, mag / se);
                }
            }
        }
        v.pass = pass;
        v.observed = "max |mean| / se = " + format_double(worst_ratio);
        v.threshold = "<= " + format_double(a.k_se);
    } else if (a.check == "counterexample-enum-exact") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            for (const auto& row : o->enum_rows) {
                const double l = static_cast<double>(row.paths);
                const bool ok =
                    row.mean_z == l * l && row.bound_rhs == l && row.margin > 0.0;
                pass = pass && ok;
                obs = "mean = " + format_double(row.mean_z) +
                      ", bound = " + format_double(row.bound_rhs) +
                      ", margin = " + format_double(row.margin);
            }
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "mean = L^2 exactly, bound = L exactly, margin > 0";
    } else if (a.check == "tail-at-least") {
        bool pass = true;
        std::string obs = "threshold not evaluated";
        for (const auto* o : matches) {
            for (const auto& [eps, t] : o->tails) {
                if (eps != a.eps) continue;
                pass = pass && t.probability >= a.p_min;
                obs = "P(|z| > " + format_double(eps) + ") = " + format_double(t.probability);
            }
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = ">= " + format_double(a.p_min);
    } else if (a.check == "mean-tail-separation") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            const MeanEstimate& mean = *o->scalar_sign_mean;
            const double mag = std::abs(mean.value);
            bool tail_ok = false;
            double p = 0.0;
            for (const auto& [eps, t] : o->scalar_sign_tails) {
                if (eps != a.eps) continue;
                p = t.probability;
                tail_ok = t.probability >= a.p_min;
            }
            pass = pass && mag <= a.k_se * mean.se_max() && tail_ok;
            obs = "|mean| = " + format_double(mag) + ", max se = " + format_double(mean.se_max()) +
                  ", P(|z| > " + format_double(a.eps) + ") = " + format_double(p);
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "|mean| <= " + format_double(a.k_se) + " * max se and tail >= " +
                      format_double(a.p_min);
    } else if (a.check == "bound-im-significant") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            const MeanEstimate& est = o->bound->value;
            const double im = std::abs(est.value.imag());
            pass = pass && im > a.k_se * est.se_im;
            obs = "|im| = " + format_double(im) + ", se_im = " + format_double(est.se_im);
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "|im| > " + format_double(a.k_se) + " * se_im";
    } else if (a.check == "bound-im-negligible") {
        bool pass = true;
        std::string obs;
        for (const auto* o : matches) {
            const MeanEstimate& est = o->bound->value;
            const double im = std::abs(est.value.imag());
            pass = pass && im <= a.tol && est.se_im <= a.tol;
            obs = "|im| = " + format_double(im) + ", se_im = " + format_double(est.se_im);
        }
        v.pass = pass;
        v.observed = obs;
        v.threshold = "|im| <= " + format_double(a.tol) + " and se_im <= " + format_double(a.tol);
    } else if (a.check == "decompose-total-matches") {
        bool pass = true;
        double worst = 0.0;
        for (const auto* o : matches) {
            worst = std::max(worst, o->section.at("total_vs_reference_rel").get<double>());
        }
        pass = worst <= a.tol;
        v.pass = pass;
        v.observed = "relative mismatch = " + format_double(worst);
        v.threshold = "<= " + format_double(a.tol);
    } else if (a.check == "cosine-cases-exact") {
        bool pass = true;
        double worst = 0.0;
        for (const auto* o : matches) {
            for (const auto& c : o->cosine_cases) {
                worst = std::max(worst, std::abs(c.value - c.expected));
            }
        }
        pass = worst <= a.tol;
        v.pass = pass;
        v.observed = "max |cosine - expected| = " + format_double(worst);
        v.threshold = "<= " + format_double(a.tol);
    }
    return v;
}

std::string csv_file_name(std::size_t index, const std::string& metric_name) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02zu", index);
    return std::string(buf) + "_" + metric_name + ".csv";
}

void print_verdict(const Verdict& v) {
    std::printf("[%s] %s (%s): %s (%s)\n", v.pass ? "PASS" : "FAIL", v.check.c_str(),
                v.metric.c_str(), v.observed.c_str(), v.threshold.c_str());
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::string& config_bytes,
                         const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();

    RunContext ctx;
    ctx.threads = options.threads;
    const std::uint64_t seed = options.seed_override.value_or(config.master_seed);

    std::string out_dir = options.out_dir_override.value_or(
        !config.output_dir.empty() ? config.output_dir : "out/" + config.experiment);

    std::vector<MetricOutcome> outcomes;
    outcomes.reserve(config.metrics.size());
    for (std::size_t idx = 0; idx < config.metrics.size(); ++idx) {
        MetricOutcome outcome = execute_metric(config, config.metrics[idx], seed, ctx);
        outcome.spec = config.metrics[idx];
        outcome.csv_name = csv_file_name(idx, config.metrics[idx].name);
        outcomes.push_back(std::move(outcome));
    }

    RunResult result;
    result.out_dir = out_dir;
    result.config_digest = fnv1a_hex(config_bytes);

    for (const auto& a : config.assertions) {
        result.verdicts.push_back(evaluate_assertion(a, outcomes));
    }
    result.all_passed = true;
    for (const auto& v : result.verdicts) {
        result.all_passed = result.all_passed && v.pass;
    }

    ordered_json summary;
    summary["experiment"] = config.experiment;
    summary["toolkit_version"] = kToolkitVersion;
    summary["config_digest"] = result.config_digest;
    summary["master_seed"] = seed;
    summary["trials"] = config.trials;
    summary["config"] = ordered_json::parse(serialize_config(config));
    ordered_json sections = ordered_json::array();
    for (const auto& o : outcomes) {
        ordered_json section;
        section["name"] = o.spec.name;
        section["csv"] = o.csv_name;
        section["data"] = o.section;
        sections.push_back(section);
    }
    summary["metrics"] = sections;
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : result.verdicts) {
        ordered_json jv;
        jv["check"] = v.check;
        jv["metric"] = v.metric;
        jv["pass"] = v.pass;
        jv["observed"] = v.observed;
        jv["threshold"] = v.threshold;
        verdicts.push_back(jv);
    }
    summary["verdicts"] = verdicts;
    summary["all_passed"] = result.all_passed;

    for (const auto& o : outcomes) {
        write_file(out_dir + "/" + o.csv_name, o.table.to_string());
        result.output_files.push_back(o.csv_name);
    }
    write_file(out_dir + "/summary.json", summary.dump(2) + "\n");
    result.output_files.push_back("summary.json");
    std::sort(result.output_files.begin(), result.output_files.end());

    const auto end = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(end - start).count();

    // Wall time lives only here; summary.json and the CSVs stay
    // byte-identical for a fixed (config, seed) pair.
    ordered_json manifest;
    manifest["config_digest"] = result.config_digest;
    manifest["toolkit_version"] = kToolkitVersion;
    ordered_json files = ordered_json::array();
    for (const auto& f : result.output_files) {
        files.push_back(f);
    }
    manifest["output_files"] = files;
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["all_passed"] = result.all_passed;
    write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    result.output_files.push_back("manifest.json");
    std::sort(result.output_files.begin(), result.output_files.end());

    if (!options.quiet) {
        for (const auto& v : result.verdicts) {
            print_verdict(v);
        }
        std::size_t passed = 0;
        for (const auto& v : result.verdicts) {
            passed += v.pass ? 1 : 0;
        }
        std::printf("experiment '%s': %zu/%zu checks passed; outputs in %s\n",
                    config.experiment.c_str(), passed, result.verdicts.size(), out_dir.c_str());
    }
    return result;
}

RunResult run_config_text(const std::string& config_text, const RunOptions& options) {
    const ExperimentConfig config = parse_config(config_text);
    return run_experiment(config, config_text, options);
}

RecipeRunResult run_recipe(const Recipe& recipe, const RunOptions& options) {
    RecipeRunResult result;
    result.out_dir = options.out_dir_override.value_or("out/" + recipe.name);

    for (const auto& part : recipe.parts) {
        RunOptions part_options = options;
        part_options.out_dir_override = result.out_dir + "/" + part.label;
        if (!options.quiet) {
            std::printf("--- %s/%s ---\n", recipe.name.c_str(), part.label.c_str());
        }
        RunResult part_result = run_config_text(part.config_json, part_options);
        result.all_passed = result.all_passed && part_result.all_passed;
        result.part_labels.push_back(part.label);
        result.parts.push_back(std::move(part_result));
    }

    ordered_json summary;
    summary["recipe"] = recipe.name;
    summary["toolkit_version"] = kToolkitVersion;
    ordered_json parts = ordered_json::array();
    for (std::size_t idx = 0; idx < result.parts.size(); ++idx) {
        ordered_json part;
        part["label"] = result.part_labels[idx];
        part["all_passed"] = result.parts[idx].all_passed;
        std::size_t passed = 0;
        for (const auto& v : result.parts[idx].verdicts) {
            passed += v.pass ? 1 : 0;
        }
        part["checks_passed"] = passed;
        part["checks_total"] = result.parts[idx].verdicts.size();
        parts.push_back(part);
    }
    summary["parts"] = parts;
    summary["all_passed"] = result.all_passed;
    write_file(result.out_dir + "/summary.json", summary.dump(2) + "\n");

    if (!options.quiet) {
        std::printf("recipe '%s': %s\n", recipe.name.c_str(),
                    result.all_passed ? "all checks passed" : "CHECKS FAILED");
    }
    return result;
}

}  // namespace fplab
