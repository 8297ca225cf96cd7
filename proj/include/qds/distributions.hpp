// distributions.hpp — Probability laws over GKLS generators: discrete
// mixtures with exact means, and a parametric family (Wishart Kossakowski
// matrix + GUE Hamiltonian) kept inside a spectral-norm ball by rejection.
// Sampling is a pure function of (master_seed, trial_id, sub_id).

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qds/gkls.hpp"
#include "qds/rng.hpp"

namespace qds::dist {

using gkls::GklsGenerator;

struct Atom {
    GklsGenerator generator;
    double weight;
};

struct DiscreteMixture {
    std::vector<Atom> atoms;
};

struct Parametric {
    Eigen::Index dim = 2;
    double kossakowski_scale = 1.0;
    double hamiltonian_scale = 1.0;
    int wishart_dof = 3;
    double norm_cap = 10.0; // ball radius for the Heisenberg superoperator norm
};

class GeneratorDistribution {
  public:
    GeneratorDistribution(DiscreteMixture mixture, std::uint64_t master_seed);
    GeneratorDistribution(Parametric parametric, std::uint64_t master_seed);

    bool is_discrete() const { return std::holds_alternative<DiscreteMixture>(law_); }
    const DiscreteMixture& discrete() const { return std::get<DiscreteMixture>(law_); }
    const Parametric& parametric() const { return std::get<Parametric>(law_); }
    std::uint64_t master_seed() const { return master_seed_; }
    Eigen::Index dim() const;

  private:
    std::variant<DiscreteMixture, Parametric> law_;
    std::uint64_t master_seed_;
};

// Identical (master_seed, trial_id) always yields the identical generator,
// independent of call order or thread count.
GklsGenerator sample_generator(const GeneratorDistribution& dist, std::uint64_t trial_id);

// Sub-stream draw used by iterate compositions: step i of trial `trial_id`
// samples at (trial_id, i), i = 1..n.
GklsGenerator sample_generator_at(const GeneratorDistribution& dist, std::uint64_t trial_id,
                                  std::uint64_t sub_id);

// Draw from an explicit RNG domain; keeps Monte Carlo mean-map and
// snapshot draws out of the trial key space.
GklsGenerator sample_generator_stream(const GeneratorDistribution& dist, rng::Domain domain,
                                      std::uint64_t trial_id, std::uint64_t sub_id);

// Fast path for discrete mixtures: the atom indices that
// sample_generator_at(trial_id, 1..n) would pick.
std::vector<std::size_t> sample_atom_indices(const GeneratorDistribution& dist,
                                             std::uint64_t trial_id, int n);

// Exact component-wise mean for discrete mixtures (Kossakowski matrices and
// Hamiltonians average linearly when every atom carries the same basis;
// otherwise the superoperator matrices are averaged and the result carries
// no jump-operator form). Parametric: analytic mean, E[k] = scale * I, E[H] = 0.
GklsGenerator mean_generator(const GeneratorDistribution& dist);

// Ball radius: max atom norm for discrete mixtures, the configured cap for
// parametric families.
double norm_bound(const GeneratorDistribution& dist);

// Freeze a parametric family into a uniform discrete mixture over
// `atom_count` fixed-seed draws.
GeneratorDistribution snapshot(const GeneratorDistribution& dist, int atom_count);

} // namespace qds::dist
