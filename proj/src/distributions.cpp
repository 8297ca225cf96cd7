// distributions.cpp — Mixture and parametric-family sampling

#include "qds/distributions.hpp"

#include <cmath>
#include <utility>

namespace qds::dist {

using gkls::Picture;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using rng::Domain;
using rng::Stream;

namespace {

constexpr long kMaxRejectionAttempts = 1'000'000;

std::size_t inverse_cdf_pick(const DiscreteMixture& mixture, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < mixture.atoms.size(); ++i) {
        cumulative += mixture.atoms[i].weight;
        if (u < cumulative) {
            return i;
        }
    }
    return mixture.atoms.size() - 1;
}

ComplexMatrix draw_wishart(Stream& stream, Eigen::Index side, int dof, double scale) {
    ComplexMatrix g(side, dof);
    for (Eigen::Index r = 0; r < side; ++r) {
        for (Eigen::Index c = 0; c < dof; ++c) {
            g(r, c) = stream.next_complex_gaussian();
        }
    }
    return (g * g.adjoint()) * (scale / static_cast<double>(dof));
}

ComplexMatrix draw_gue(Stream& stream, Eigen::Index dim, double scale) {
    ComplexMatrix a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            a(r, c) = stream.next_complex_gaussian();
        }
    }
    return (a + a.adjoint().eval()) * (scale / std::sqrt(2.0));
}

GklsGenerator draw_parametric(const Parametric& p, Stream& stream) {
    const auto basis = gkls::gell_mann_basis(p.dim);
    for (long attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        const ComplexMatrix k = draw_wishart(stream, p.dim * p.dim - 1, p.wishart_dof,
                                             p.kossakowski_scale);
        const ComplexMatrix h = draw_gue(stream, p.dim, p.hamiltonian_scale);
        GklsGenerator gen =
            gkls::make_kossakowski(HermitianMatrix(k), HermitianMatrix(h), basis);
        if (linalg::spectral_norm(gen.superop(Picture::Heisenberg).matrix) <= p.norm_cap) {
            return gen;
        }
    }
    throw ConfigError("parametric rejection sampling exhausted 10^6 redraws; norm_cap too small");
}

} // namespace

GeneratorDistribution::GeneratorDistribution(DiscreteMixture mixture, std::uint64_t master_seed)
    : law_(std::move(mixture)), master_seed_(master_seed) {
    const auto& atoms = std::get<DiscreteMixture>(law_).atoms;
    if (atoms.empty()) {
        throw ValidationError("discrete mixture needs at least one atom");
    }
    double total = 0.0;
    for (const auto& atom : atoms) {
        if (atom.weight <= 0.0) {
            throw ValidationError("mixture weights must be positive");
        }
        if (atom.generator.dim() != atoms.front().generator.dim()) {
            throw DimensionError("mixture atoms must share one dimension");
        }
        total += atom.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("mixture weights must sum to 1");
    }
}

GeneratorDistribution::GeneratorDistribution(Parametric parametric, std::uint64_t master_seed)
    : law_(parametric), master_seed_(master_seed) {
    if (parametric.dim < 2) {
        throw ValidationError("parametric family requires dim >= 2");
    }
    if (parametric.norm_cap <= 0.0) {
        throw ValidationError("parametric norm_cap must be positive");
    }
    if (parametric.wishart_dof < 1) {
        throw ValidationError("parametric wishart_dof must be positive");
    }
    if (parametric.kossakowski_scale < 0.0 || parametric.hamiltonian_scale < 0.0) {
        throw ValidationError("parametric scales must be nonnegative");
    }
}

Eigen::Index GeneratorDistribution::dim() const {
    if (is_discrete()) {
        return discrete().atoms.front().generator.dim();
    }
    return parametric().dim;
}

GklsGenerator sample_generator(const GeneratorDistribution& dist, std::uint64_t trial_id) {
    return sample_generator_at(dist, trial_id, 0);
}

GklsGenerator sample_generator_at(const GeneratorDistribution& dist, std::uint64_t trial_id,
                                  std::uint64_t sub_id) {
    return sample_generator_stream(dist, Domain::Sample, trial_id, sub_id);
}

GklsGenerator sample_generator_stream(const GeneratorDistribution& dist, rng::Domain domain,
                                      std::uint64_t trial_id, std::uint64_t sub_id) {
    Stream stream(dist.master_seed(), domain, trial_id, sub_id);
    if (dist.is_discrete()) {
        return dist.discrete().atoms[inverse_cdf_pick(dist.discrete(), stream.next_double())]
            .generator;
    }
    return draw_parametric(dist.parametric(), stream);
}

std::vector<std::size_t> sample_atom_indices(const GeneratorDistribution& dist,
                                             std::uint64_t trial_id, int n) {
    if (!dist.is_discrete()) {
        throw ValidationError("atom indices are only defined for discrete mixtures");
    }
    std::vector<std::size_t> indices(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Stream stream(dist.master_seed(), Domain::Sample, trial_id,
                      static_cast<std::uint64_t>(i));
        indices[static_cast<std::size_t>(i - 1)] =
            inverse_cdf_pick(dist.discrete(), stream.next_double());
    }
    return indices;
}

GklsGenerator mean_generator(const GeneratorDistribution& dist) {
    if (!dist.is_discrete()) {
        const auto& p = dist.parametric();
        const Eigen::Index m = p.dim * p.dim - 1;
        const HermitianMatrix k_mean(ComplexMatrix::Identity(m, m) * p.kossakowski_scale);
        const HermitianMatrix h_mean(ComplexMatrix::Zero(p.dim, p.dim));
        return gkls::make_kossakowski(k_mean, h_mean, gkls::gell_mann_basis(p.dim));
    }

    const auto& atoms = dist.discrete().atoms;
    if (atoms.size() == 1) {
        return atoms.front().generator;
    }

    const bool all_kossakowski = [&] {
        for (const auto& atom : atoms) {
            if (!atom.generator.kossakowski()) {
                return false;
            }
        }
        // Component-wise averaging needs one shared basis.
        const auto& ref = atoms.front().generator.kossakowski()->basis();
        for (const auto& atom : atoms) {
            const auto& basis = atom.generator.kossakowski()->basis();
            for (std::size_t b = 0; b < ref.size(); ++b) {
                if ((basis[b] - ref[b]).norm() > 1e-12) {
                    return false;
                }
            }
        }
        return true;
    }();

    const Eigen::Index n = dist.dim();
    if (all_kossakowski) {
        ComplexMatrix k_mean = ComplexMatrix::Zero(n * n - 1, n * n - 1);
        ComplexMatrix h_mean = ComplexMatrix::Zero(n, n);
        for (const auto& atom : atoms) {
            const auto& kf = *atom.generator.kossakowski();
            k_mean += atom.weight * kf.kossakowski().matrix();
            h_mean += atom.weight * kf.hamiltonian().matrix();
        }
        return gkls::make_kossakowski(HermitianMatrix(k_mean), HermitianMatrix(h_mean),
                                      atoms.front().generator.kossakowski()->basis());
    }

    // Lindblad-only atoms: average the superoperator matrices; no refit.
    ComplexMatrix mean = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& atom : atoms) {
        mean += atom.weight * atom.generator.superop(Picture::Heisenberg).matrix;
    }
    return GklsGenerator::from_superoperator({mean, n, Picture::Heisenberg});
}

double norm_bound(const GeneratorDistribution& dist) {
    if (!dist.is_discrete()) {
        return dist.parametric().norm_cap;
    }
    double bound = 0.0;
    for (const auto& atom : dist.discrete().atoms) {
        bound = std::max(bound,
                         linalg::spectral_norm(atom.generator.superop(Picture::Heisenberg).matrix));
    }
    return bound;
}

GeneratorDistribution snapshot(const GeneratorDistribution& dist, int atom_count) {
    if (dist.is_discrete()) {
        throw ValidationError("snapshot is only defined for parametric families");
    }
    if (atom_count < 1) {
        throw ValidationError("snapshot needs at least one atom");
    }
    DiscreteMixture mixture;
    mixture.atoms.reserve(static_cast<std::size_t>(atom_count));
    for (int j = 0; j < atom_count; ++j) {
        Stream stream(dist.master_seed(), Domain::Snapshot, static_cast<std::uint64_t>(j), 0);
        mixture.atoms.push_back(
            {draw_parametric(dist.parametric(), stream), 1.0 / atom_count});
    }
    return GeneratorDistribution(std::move(mixture), dist.master_seed());
}

} // namespace qds::dist
