// config.hpp — Experiment configuration: strict JSON parsing with typo
// rejection, distribution specs, and defaults.
//
// Top-level schema (unknown keys are rejected):
//   {"experiment":   "mean_identity" | "variance_decay" | "chernoff_convergence"
//                  | "exceedance" | "cptp_audit" | "norm_bounds",
//    "distribution": <distribution spec>,
//    "n_list":       [strictly increasing positive integers],
//    "grid":         {"T": 1.0, "points": 41},       // optional, these defaults
//    "trials":       1000,
//    "epsilon":      0.05,                            // exceedance only
//    "observable":   {"pauli": "x"} | {"dim": N, "entries": [[re,im], ...]},
//    "seed":         42,
//    "output_dir":   "out"}                           // optional
//
// Distribution specs:
//   {"type": "discrete", "atoms": [{"weight": w, "generator": {...}}
//                                  | {"weight": w, "generator_file": "path"}]}
//   {"type": "parametric", "dim": N, "kossakowski_scale": s,
//    "hamiltonian_scale": h, "wishart_dof": d, "norm_cap": lambda}
//   {"type": "parametric_snapshot", "base": {parametric fields}, "atoms": m}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qds/distributions.hpp"
#include "qds/lln.hpp"

namespace qds::harness {

enum class ExperimentKind {
    MeanIdentity,
    VarianceDecay,
    ChernoffConvergence,
    Exceedance,
    CptpAudit,
    NormBounds,
};

const char* experiment_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment;
    dist::GeneratorDistribution distribution;
    std::vector<int> n_list;
    lln::GridSpec grid;
    int trials;
    std::optional<double> epsilon;
    std::optional<linalg::ComplexMatrix> observable;
    std::uint64_t seed;
    std::string output_dir;
    std::string config_hash; // FNV-1a of the canonicalized source document
};

// Parses and validates a config document. `seed_override` replaces the
// document's seed before the distribution is built; `base_dir` anchors
// relative generator_file paths.
ExperimentConfig parse_config(const std::string& document,
                              std::optional<std::uint64_t> seed_override = std::nullopt,
                              const std::string& base_dir = ".");

std::string fnv1a_hex(const std::string& bytes);

} // namespace qds::harness
