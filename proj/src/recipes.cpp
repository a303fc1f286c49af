// SPDX-License-Identifier: Apache-2.0

#include "fplab/recipes.hpp"

namespace fplab {

namespace {

// Recipe configs are complete experiment files: every expected outcome is
// an assertion in the config itself, so `run <recipe>` exits nonzero
// exactly when a statistical claim fails.

Recipe make_theorem1_diagonal_gap() {
    Recipe r;
    r.name = "theorem1-diagonal-gap";
    r.description =
        "Diagonal steering cross-terms equal 1 at every element count, for every geometry";
    r.explanation =
        "Each part sweeps the same-path cross-term T_rr = (1/M) w_r^H w_r over element counts\n"
        "1, 16, 256 and 4096 for a different normalized steering family: fixed-angle linear,\n"
        "random-angle linear, random-angle planar and explicit element positions. Under the\n"
        "column norm convention norm(w)^2 = M the diagonal is identically 1 no matter how\n"
        "large the array grows, so any vanishing claim about the full cross-term matrix is\n"
        "false on the diagonal. Passing means every diagonal entry is 1 within 1e-9 at every\n"
        "M, with exactly zero spread for the deterministic parts.";

    r.parts.push_back({"ula-fixed", R"json({
  "experiment": "theorem1-ula-fixed",
  "master_seed": 1001,
  "trials": 2,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 4096, "spacing": 0.5},
    "paths": 4,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [-0.4, -0.1, 0.2, 0.5]},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "m_values": [1, 16, 256, 4096],
  "metrics": [
    {"name": "sweep", "metric": "cross_term", "r": 0, "s": 0},
    {"name": "sweep", "metric": "cross_term", "r": 1, "s": 1},
    {"name": "sweep", "metric": "cross_term", "r": 2, "s": 2},
    {"name": "sweep", "metric": "cross_term", "r": 3, "s": 3},
    {"name": "cross-term-table"}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [1.0, 0.0], "tol": 1e-9, "require_zero_se": true},
    {"check": "diagonal-unit", "tol": 1e-9}
  ]
})json"});

    r.parts.push_back({"ula-random", R"json({
  "experiment": "theorem1-ula-random",
  "master_seed": 1001,
  "trials": 500,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 4096, "spacing": 0.5},
    "paths": 4,
    "users": 2,
    "aoas": {"kind": "uniform-random"},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "m_values": [1, 16, 256, 4096],
  "metrics": [
    {"name": "sweep", "metric": "cross_term", "r": 0, "s": 0},
    {"name": "sweep", "metric": "cross_term", "r": 1, "s": 1},
    {"name": "sweep", "metric": "cross_term", "r": 2, "s": 2},
    {"name": "sweep", "metric": "cross_term", "r": 3, "s": 3}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [1.0, 0.0], "tol": 1e-9, "require_zero_se": false}
  ]
})json"});

    r.parts.push_back({"upa-random", R"json({
  "experiment": "theorem1-upa-random",
  "master_seed": 1001,
  "trials": 500,
  "ensemble": {
    "geometry": {"kind": "uniform-planar", "rows": 4, "cols": 4, "spacing": [0.5, 0.7]},
    "paths": 3,
    "users": 2,
    "aoas": {"kind": "uniform-random"},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "m_values": [1, 16, 256, 4096],
  "metrics": [
    {"name": "sweep", "metric": "cross_term", "r": 0, "s": 0},
    {"name": "sweep", "metric": "cross_term", "r": 1, "s": 1},
    {"name": "sweep", "metric": "cross_term", "r": 2, "s": 2}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [1.0, 0.0], "tol": 1e-9, "require_zero_se": false}
  ]
})json"});

    r.parts.push_back({"explicit-positions", R"json({
  "experiment": "theorem1-explicit-positions",
  "master_seed": 1001,
  "trials": 2,
  "ensemble": {
    "geometry": {"kind": "explicit-positions", "positions": [
      [0.0, 0.0, 0.0],  [0.5, 0.05, 0.0],  [1.02, 0.0, 0.11], [1.5, 0.2, 0.07],
      [0.1, 0.5, 0.3],  [0.6, 0.55, 0.24], [1.1, 0.6, 0.4],   [1.62, 0.5, 0.33],
      [0.05, 1.0, 0.62],[0.55, 1.1, 0.5],  [1.05, 1.02, 0.71],[1.55, 1.0, 0.6],
      [0.2, 1.5, 0.9],  [0.7, 1.55, 0.8],  [1.2, 1.5, 1.02],  [1.7, 1.62, 0.95]
    ]},
    "paths": 3,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [-0.3, 0.1, 0.4]},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "metrics": [
    {"name": "cross-term-table"},
    {"name": "normalization-check", "tol": 1e-9}
  ],
  "assertions": [
    {"check": "diagonal-unit", "tol": 1e-9},
    {"check": "normalization-pass"}
  ]
})json"});
    return r;
}

Recipe make_counterexample_audit() {
    Recipe r;
    r.name = "counterexample-audit";
    r.description =
        "Coupled sign ensemble: mean inner product is L^2 > bound L, exactly, at every M";
    r.explanation =
        "The l2/l3/l5 parts build the coupled ensemble whose steering entries and gains are\n"
        "the same Rademacher signs. Monte Carlo over any element count gives z = L^2 in every\n"
        "single draw (zero spread), and exact enumeration over all 2^L sign patterns confirms\n"
        "mean z = L^2 while the bound-side average is L, a strictly positive violation margin\n"
        "that grows with L. The complex-ordering part estimates the bound side on an\n"
        "uncoupled random-angle ensemble, carrying complex arithmetic end to end, and checks\n"
        "that the imaginary part comes out exactly negligible: the double path sum pairs\n"
        "every (r, s) term with its conjugate (s, r) term, so the bound side is a real\n"
        "quantity even though its per-pair cross-terms are genuinely complex. An inequality\n"
        "between complex quantities is only meaningful because of that hidden conjugate\n"
        "pairing; the individual cross-terms it is assembled from admit no such ordering.";

    const auto counterexample_part = [](const char* label, const char* config) {
        return RecipePart{label, config};
    };
    r.parts.push_back(counterexample_part("l2", R"json({
  "experiment": "counterexample-l2",
  "master_seed": 2002,
  "trials": 400,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 1, "spacing": 0.5},
    "paths": 2,
    "users": 2,
    "gains": {"kind": "counterexample"},
    "coupling": "counterexample-coupled"
  },
  "m_values": [1, 7, 64],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1},
    {"name": "enumerate-exact"}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [4.0, 0.0], "tol": 0.0, "require_zero_se": true},
    {"check": "counterexample-enum-exact"}
  ]
})json"));
    r.parts.push_back(counterexample_part("l3", R"json({
  "experiment": "counterexample-l3",
  "master_seed": 2002,
  "trials": 400,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 1, "spacing": 0.5},
    "paths": 3,
    "users": 2,
    "gains": {"kind": "counterexample"},
    "coupling": "counterexample-coupled"
  },
  "m_values": [1, 7, 64],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1},
    {"name": "enumerate-exact"}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [9.0, 0.0], "tol": 0.0, "require_zero_se": true},
    {"check": "counterexample-enum-exact"}
  ]
})json"));
    r.parts.push_back(counterexample_part("l5", R"json({
  "experiment": "counterexample-l5",
  "master_seed": 2002,
  "trials": 400,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 1, "spacing": 0.5},
    "paths": 5,
    "users": 2,
    "gains": {"kind": "counterexample"},
    "coupling": "counterexample-coupled"
  },
  "m_values": [1, 7, 64],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1},
    {"name": "enumerate-exact"}
  ],
  "assertions": [
    {"check": "sweep-constant", "value": [25.0, 0.0], "tol": 0.0, "require_zero_se": true},
    {"check": "counterexample-enum-exact"}
  ]
})json"));

    r.parts.push_back({"complex-ordering", R"json({
  "experiment": "counterexample-complex-ordering",
  "master_seed": 2002,
  "trials": 4000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 24, "spacing": 0.5},
    "paths": 6,
    "users": 2,
    "aoas": {"kind": "uniform-random"},
    "gains": {"kind": "rademacher"},
    "coupling": "independent"
  },
  "metrics": [
    {"name": "bound-rhs", "c_alpha": 1.0}
  ],
  "assertions": [
    {"check": "bound-im-negligible", "tol": 1e-12}
  ]
})json"});
    return r;
}

Recipe make_prop1_sweep() {
    Recipe r;
    r.name = "prop1-sweep";
    r.description =
        "Mean inner product decays with M through cross-path correlation times cross-terms";
    r.explanation =
        "The correlated part uses two-user gains whose per-path user cross-moment is exactly\n"
        "zero while cross-path moments are not, so the mean inner product is carried entirely\n"
        "by gain cross-moments multiplied by steering cross-terms. Sweeping M over 16 to 1024\n"
        "shows |mean z| collapsing from about 0.6 to noise level (checked beyond four combined\n"
        "standard errors), and the off-diagonal cross-term magnitude fits a log-log slope\n"
        "steeper than -0.9. The iid baseline part shows the degenerate version of the same\n"
        "statement: with all gain cross-moments zero the mean is statistically zero at every\n"
        "M, and the same-path/cross-path decomposition reproduces the plain estimate on the\n"
        "very same samples to 1e-12.";

    r.parts.push_back({"correlated", R"json({
  "experiment": "prop1-correlated",
  "master_seed": 3003,
  "trials": 20000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 16, "spacing": 0.5},
    "paths": 4,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [-0.4, -0.1, 0.2, 0.5]},
    "gains": {"kind": "correlated-users"},
    "coupling": "independent"
  },
  "m_values": [16, 64, 256, 1024],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1},
    {"name": "sweep", "metric": "cross_term", "r": 0, "s": 1}
  ],
  "assertions": [
    {"check": "sweep-decay-beyond-error", "metric_index": 0, "m_low": 16, "m_high": 1024, "k_se": 4.0},
    {"check": "sweep-slope-at-most", "metric_index": 1, "slope_max": -0.9}
  ]
})json"});

    r.parts.push_back({"iid-baseline", R"json({
  "experiment": "prop1-iid-baseline",
  "master_seed": 3003,
  "trials": 20000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 16, "spacing": 0.5},
    "paths": 4,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [-0.4, -0.1, 0.2, 0.5]},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "m_values": [16, 64, 256, 1024],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1},
    {"name": "decompose", "i": 0, "k": 1}
  ],
  "assertions": [
    {"check": "sweep-consistent-with-zero", "metric_index": 0, "k_se": 4.0},
    {"check": "decompose-total-matches", "metric_index": 1, "tol": 1e-12}
  ]
})json"});
    return r;
}

Recipe make_prop2_zero_mean() {
    Recipe r;
    r.name = "prop2-zero-mean";
    r.description =
        "Factorized gains with zero-mean user factors: mean z is zero at every M";
    r.explanation =
        "Gains factor as alpha_{r,i} = a_r * b_i with the path factor tied to the random\n"
        "angle (shared-aoa coupling) and independent zero-mean complex Gaussian user factors.\n"
        "Because distinct-user b factors are independent and zero-mean, the mean inner\n"
        "product is exactly zero for any element count, steering correlation or not. The\n"
        "sweep over M in {8, 64, 512} checks that every estimate is within four standard\n"
        "errors of zero. This holds at finite M; nothing needs to grow for the mean to\n"
        "vanish, which is exactly why a mean statement is too weak to carry a favorable\n"
        "propagation claim.";

    r.parts.push_back({"shared-aoa", R"json({
  "experiment": "prop2-shared-aoa",
  "master_seed": 4004,
  "trials": 10000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 8, "spacing": 0.5},
    "paths": 4,
    "users": 2,
    "aoas": {"kind": "uniform-random"},
    "gains": {"kind": "factorized", "user_factor": {"kind": "complex-gaussian", "variance": 1.0}},
    "coupling": "shared-aoa"
  },
  "m_values": [8, 64, 512],
  "metrics": [
    {"name": "sweep", "metric": "mean_z", "i": 0, "k": 1}
  ],
  "assertions": [
    {"check": "sweep-consistent-with-zero", "k_se": 4.0}
  ]
})json"});
    return r;
}

Recipe make_footnote1_separation() {
    Recipe r;
    r.name = "footnote1-separation";
    r.description =
        "Zero mean with |z| = 1 always: mean orthogonality is weaker than vanishing z";
    r.explanation =
        "The scalar-signs part draws z = +-1: its mean is statistically zero while |z| = 1 in\n"
        "every realization, so P(|z| > 0.5) = 1. The unit-modulus-channel part realizes the\n"
        "same separation through an actual channel: a single path with unit path factor and\n"
        "Rademacher user factors gives z = b_0 b_1 with |z| = 1. Both parts check that the\n"
        "mean is within four standard errors of zero while the exceedance probability at 0.5\n"
        "stays at least 0.99: convergence of the mean says nothing about the inner product\n"
        "itself vanishing.";

    r.parts.push_back({"scalar-signs", R"json({
  "experiment": "footnote1-scalar-signs",
  "master_seed": 5005,
  "trials": 10000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 4, "spacing": 0.5},
    "paths": 1,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [0.0]},
    "gains": {"kind": "factorized", "path_factors": [[1.0, 0.0]],
              "user_factor": {"kind": "rademacher"}},
    "coupling": "independent"
  },
  "eps": [0.5],
  "metrics": [
    {"name": "scalar-sign-mean-tail"}
  ],
  "assertions": [
    {"check": "mean-tail-separation", "k_se": 4.0, "eps": 0.5, "p_min": 0.99}
  ]
})json"});

    r.parts.push_back({"unit-modulus-channel", R"json({
  "experiment": "footnote1-unit-modulus-channel",
  "master_seed": 5005,
  "trials": 10000,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 32, "spacing": 0.5},
    "paths": 1,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [0.2]},
    "gains": {"kind": "factorized", "path_factors": [[1.0, 0.0]],
              "user_factor": {"kind": "rademacher"}},
    "coupling": "independent"
  },
  "eps": [0.5],
  "metrics": [
    {"name": "mean-z", "i": 0, "k": 1},
    {"name": "tail-probability", "i": 0, "k": 1}
  ],
  "assertions": [
    {"check": "mean-z-consistent-with-zero", "metric_index": 0, "k_se": 4.0},
    {"check": "tail-at-least", "metric_index": 1, "eps": 0.5, "p_min": 0.99}
  ]
})json"});
    return r;
}

Recipe make_cosine_demo() {
    Recipe r;
    r.name = "cosine-demo";
    r.description = "Cosine-similarity fixtures plus the normalization facts they illustrate";
    r.explanation =
        "Evaluates cosine similarity on three fixed cases (aligned vectors give 1 regardless\n"
        "of scale, orthogonal vectors give 0, a 45-degree pair gives 1/sqrt(2)) and, on a\n"
        "small fixed-angle array, re-checks the column normalization convention and the unit\n"
        "diagonal of the cross-term table. The point of the pairing: a normalized diagonal is\n"
        "a statement about vector lengths, orthogonality is a statement about angles, and\n"
        "neither implies the other.";

    r.parts.push_back({"main", R"json({
  "experiment": "cosine-demo-main",
  "master_seed": 6006,
  "trials": 2,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 4, "spacing": 0.5},
    "paths": 2,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [0.0, 0.5235987755982988]},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "metrics": [
    {"name": "cosine-demo"},
    {"name": "cross-term-table"},
    {"name": "normalization-check", "tol": 1e-9}
  ],
  "assertions": [
    {"check": "cosine-cases-exact", "metric_index": 0, "tol": 1e-12},
    {"check": "diagonal-unit", "metric_index": 1, "tol": 1e-9},
    {"check": "normalization-pass", "metric_index": 2}
  ]
})json"});
    return r;
}

}  // namespace

const std::vector<Recipe>& recipe_catalog() {
    static const std::vector<Recipe> catalog = {
        make_theorem1_diagonal_gap(), make_counterexample_audit(), make_prop1_sweep(),
        make_prop2_zero_mean(),       make_footnote1_separation(), make_cosine_demo(),
    };
    return catalog;
}

const Recipe* find_recipe(std::string_view name) {
    for (const auto& r : recipe_catalog()) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

}  // namespace fplab
