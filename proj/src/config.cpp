// config.cpp — Strict experiment-config parsing

#include "qds/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "qds/gkls_json.hpp"

namespace qds::harness {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool known = false;
        for (const char* candidate : allowed) {
            if (key == candidate) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(std::string(where) + " has unknown key '" + key + "'");
        }
    }
}

const json& require_field(const json& doc, const char* key, const char* where) {
    if (!doc.contains(key)) {
        throw ConfigError(std::string(where) + " missing required field '" + key + "'");
    }
    return doc[key];
}

double positive_number(const json& value, const char* key) {
    if (!value.is_number()) {
        throw ConfigError(std::string("'") + key + "' must be a number");
    }
    const double v = value.get<double>();
    if (v <= 0.0) {
        throw ConfigError(std::string("'") + key + "' must be positive");
    }
    return v;
}

ExperimentKind parse_experiment_kind(const json& value) {
    if (!value.is_string()) {
        throw ConfigError("'experiment' must be a string");
    }
    const std::string name = value.get<std::string>();
    if (name == "mean_identity") return ExperimentKind::MeanIdentity;
    if (name == "variance_decay") return ExperimentKind::VarianceDecay;
    if (name == "chernoff_convergence") return ExperimentKind::ChernoffConvergence;
    if (name == "exceedance") return ExperimentKind::Exceedance;
    if (name == "cptp_audit") return ExperimentKind::CptpAudit;
    if (name == "norm_bounds") return ExperimentKind::NormBounds;
    throw ConfigError("unknown experiment name '" + name + "'");
}

std::vector<int> parse_n_list(const json& value) {
    if (!value.is_array() || value.empty()) {
        throw ConfigError("'n_list' must be a non-empty array of positive integers");
    }
    std::vector<int> n_list;
    for (const auto& entry : value) {
        if (!entry.is_number_integer() || entry.get<long long>() < 1) {
            throw ConfigError("'n_list' entries must be positive integers");
        }
        n_list.push_back(entry.get<int>());
    }
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw ConfigError("n_list not increasing");
        }
    }
    return n_list;
}

lln::GridSpec parse_grid(const json& value) {
    if (!value.is_object()) {
        throw ConfigError("'grid' must be an object");
    }
    reject_unknown_keys(value, {"T", "points"}, "grid");
    lln::GridSpec defaults;
    const double T = value.contains("T") ? positive_number(value["T"], "grid.T") : defaults.T;
    int points = defaults.points;
    if (value.contains("points")) {
        if (!value["points"].is_number_integer() || value["points"].get<long long>() < 2) {
            throw ConfigError("'grid.points' must be an integer >= 2");
        }
        points = value["points"].get<int>();
    }
    return lln::GridSpec(T, points);
}

dist::Parametric parse_parametric_fields(const json& doc, const char* where) {
    reject_unknown_keys(
        doc, {"type", "dim", "kossakowski_scale", "hamiltonian_scale", "wishart_dof", "norm_cap"},
        where);
    dist::Parametric p;
    const auto& dim = require_field(doc, "dim", where);
    if (!dim.is_number_integer() || dim.get<long long>() < 2) {
        throw ConfigError("'dim' must be an integer >= 2");
    }
    p.dim = dim.get<Eigen::Index>();
    p.kossakowski_scale = positive_number(require_field(doc, "kossakowski_scale", where),
                                          "kossakowski_scale");
    p.hamiltonian_scale = require_field(doc, "hamiltonian_scale", where).get<double>();
    if (p.hamiltonian_scale < 0.0) {
        throw ConfigError("'hamiltonian_scale' must be nonnegative");
    }
    const auto& dof = require_field(doc, "wishart_dof", where);
    if (!dof.is_number_integer() || dof.get<long long>() < 1) {
        throw ConfigError("'wishart_dof' must be a positive integer");
    }
    p.wishart_dof = dof.get<int>();
    p.norm_cap = positive_number(require_field(doc, "norm_cap", where), "norm_cap");
    return p;
}

dist::GeneratorDistribution parse_distribution(const json& doc, std::uint64_t seed,
                                               const std::string& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("'distribution' must be an object");
    }
    const std::string type = require_field(doc, "type", "distribution").get<std::string>();
    if (type == "discrete") {
        reject_unknown_keys(doc, {"type", "atoms"}, "distribution");
        const auto& atoms_doc = require_field(doc, "atoms", "distribution");
        if (!atoms_doc.is_array() || atoms_doc.empty()) {
            throw ConfigError("'atoms' must be a non-empty array");
        }
        dist::DiscreteMixture mixture;
        for (const auto& atom_doc : atoms_doc) {
            reject_unknown_keys(atom_doc, {"weight", "generator", "generator_file"},
                                "mixture atom");
            const double weight = positive_number(require_field(atom_doc, "weight", "atom"),
                                                  "weight");
            if (atom_doc.contains("generator") == atom_doc.contains("generator_file")) {
                throw ConfigError(
                    "each atom needs exactly one of 'generator' or 'generator_file'");
            }
            json gen_doc;
            if (atom_doc.contains("generator")) {
                gen_doc = atom_doc["generator"];
            } else {
                const std::filesystem::path path =
                    std::filesystem::path(base_dir) /
                    atom_doc["generator_file"].get<std::string>();
                std::ifstream in(path);
                if (!in) {
                    throw ConfigError("cannot open generator_file '" + path.string() + "'");
                }
                std::stringstream buffer;
                buffer << in.rdbuf();
                gen_doc = json::parse(buffer.str(), nullptr, false);
                if (gen_doc.is_discarded()) {
                    throw ConfigError("generator_file '" + path.string() + "' is not valid JSON");
                }
            }
            mixture.atoms.push_back({gkls::generator_from_json(gen_doc), weight});
        }
        return {std::move(mixture), seed};
    }
    if (type == "parametric") {
        return {parse_parametric_fields(doc, "distribution"), seed};
    }
    if (type == "parametric_snapshot") {
        reject_unknown_keys(doc, {"type", "base", "atoms"}, "distribution");
        const auto& atoms = require_field(doc, "atoms", "distribution");
        if (!atoms.is_number_integer() || atoms.get<long long>() < 1) {
            throw ConfigError("'atoms' must be a positive integer for parametric_snapshot");
        }
        const dist::GeneratorDistribution base(
            parse_parametric_fields(require_field(doc, "base", "distribution"), "base"), seed);
        return dist::snapshot(base, atoms.get<int>());
    }
    throw ConfigError("unknown distribution type '" + type + "'");
}

linalg::ComplexMatrix parse_observable(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("'observable' must be an object");
    }
    if (doc.contains("pauli")) {
        reject_unknown_keys(doc, {"pauli"}, "observable");
        const std::string which = doc["pauli"].get<std::string>();
        if (which == "x") return linalg::pauli_x();
        if (which == "y") return linalg::pauli_y();
        if (which == "z") return linalg::pauli_z();
        throw ConfigError("observable 'pauli' must be one of x, y, z");
    }
    reject_unknown_keys(doc, {"dim", "entries"}, "observable");
    const auto& dim = require_field(doc, "dim", "observable");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        throw ConfigError("observable 'dim' must be a positive integer");
    }
    const auto n = dim.get<Eigen::Index>();
    return gkls::matrix_from_json(require_field(doc, "entries", "observable"), n, n,
                                  "observable.entries");
}

} // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::MeanIdentity: return "mean_identity";
        case ExperimentKind::VarianceDecay: return "variance_decay";
        case ExperimentKind::ChernoffConvergence: return "chernoff_convergence";
        case ExperimentKind::Exceedance: return "exceedance";
        case ExperimentKind::CptpAudit: return "cptp_audit";
        case ExperimentKind::NormBounds: return "norm_bounds";
    }
    return "unknown";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

ExperimentConfig parse_config(const std::string& document,
                              std::optional<std::uint64_t> seed_override,
                              const std::string& base_dir) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("config is not valid JSON");
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    reject_unknown_keys(doc,
                        {"experiment", "distribution", "n_list", "grid", "trials", "epsilon",
                         "observable", "seed", "output_dir"},
                        "config");

    const ExperimentKind kind = parse_experiment_kind(require_field(doc, "experiment", "config"));
    const std::vector<int> n_list = parse_n_list(require_field(doc, "n_list", "config"));
    const lln::GridSpec grid = doc.contains("grid") ? parse_grid(doc["grid"]) : lln::GridSpec{};

    const auto& trials_doc = require_field(doc, "trials", "config");
    if (!trials_doc.is_number_integer() || trials_doc.get<long long>() < 1) {
        throw ConfigError("'trials' must be an integer >= 1");
    }
    const int trials = trials_doc.get<int>();

    const auto& seed_doc = require_field(doc, "seed", "config");
    if (!seed_doc.is_number_integer()) {
        throw ConfigError("'seed' must be an integer");
    }
    const std::uint64_t seed =
        seed_override.value_or(seed_doc.get<std::uint64_t>());

    std::optional<double> epsilon;
    if (kind == ExperimentKind::Exceedance) {
        epsilon = positive_number(require_field(doc, "epsilon", "config"), "epsilon");
    } else if (doc.contains("epsilon")) {
        throw ConfigError("'epsilon' is only valid for the exceedance experiment");
    }

    dist::GeneratorDistribution distribution =
        parse_distribution(require_field(doc, "distribution", "config"), seed, base_dir);

    std::optional<linalg::ComplexMatrix> observable;
    if (doc.contains("observable")) {
        observable = parse_observable(doc["observable"]);
        if (observable->rows() != distribution.dim()) {
            throw ConfigError("'observable' dimension does not match the distribution");
        }
    } else if (kind == ExperimentKind::Exceedance) {
        if (distribution.dim() != 2) {
            throw ConfigError("config missing required field 'observable' (needed when dim != 2)");
        }
        observable = linalg::pauli_x();
    }

    const std::string output_dir =
        doc.contains("output_dir") ? doc["output_dir"].get<std::string>() : std::string("out");

    return ExperimentConfig{kind,
                            std::move(distribution),
                            n_list,
                            grid,
                            trials,
                            epsilon,
                            std::move(observable),
                            seed,
                            output_dir,
                            fnv1a_hex(doc.dump())};
}

} // namespace qds::harness
