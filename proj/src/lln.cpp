// lln.cpp — Random composition engine

#include "qds/lln.hpp"

#include <cmath>
#include <string>

namespace qds::lln {

using linalg::ComplexVector;
using linalg::mat_exp;
using linalg::spectral_norm;
using linalg::vec;
using rng::Domain;

namespace {

// One m^n leaf per atom sequence; partial products are shared along the
// tree but the weighted sum is never factored, so this stays an
// independent oracle for the mean identity.
void enumerate_compositions(const std::vector<ComplexMatrix>& atom_exps,
                            const std::vector<double>& weights, int depth_left,
                            const ComplexMatrix& partial, double weight,
                            ComplexMatrix& accumulator) {
    if (depth_left == 0) {
        accumulator += weight * partial;
        return;
    }
    for (std::size_t a = 0; a < atom_exps.size(); ++a) {
        enumerate_compositions(atom_exps, weights, depth_left - 1, atom_exps[a] * partial,
                               weight * weights[a], accumulator);
    }
}

std::vector<ComplexMatrix> atom_step_maps(const GeneratorDistribution& dist, double tau,
                                          Picture picture) {
    std::vector<ComplexMatrix> exps;
    exps.reserve(dist.discrete().atoms.size());
    for (const auto& atom : dist.discrete().atoms) {
        exps.push_back(mat_exp(tau * atom.generator.superop(picture).matrix));
    }
    return exps;
}

} // namespace

GridSpec::GridSpec(double T_in, int points_in) : T(T_in), points(points_in) {
    if (T <= 0.0) {
        throw ValidationError("grid T must be positive");
    }
    if (points < 2) {
        throw ValidationError("grid needs at least 2 points");
    }
}

Superoperator semigroup_map(const GklsGenerator& gen, double t, Picture picture) {
    if (t < 0.0) {
        throw ValidationError("semigroup_map requires t >= 0");
    }
    return {mat_exp(t * gen.superop(picture).matrix), gen.dim(), picture};
}

CompositionResult compose_random_iterates(const GeneratorDistribution& dist, int n, double t,
                                          std::uint64_t trial_id, Picture picture) {
    if (n < 1) {
        throw ValidationError("compose_random_iterates requires n >= 1");
    }
    if (t < 0.0) {
        throw ValidationError("compose_random_iterates requires t >= 0");
    }
    const double tau = t / n;
    const Eigen::Index d2 = dist.dim() * dist.dim();
    ComplexMatrix product = ComplexMatrix::Identity(d2, d2);
    if (dist.is_discrete()) {
        const auto exps = atom_step_maps(dist, tau, picture);
        for (std::size_t index : dist::sample_atom_indices(dist, trial_id, n)) {
            product = exps[index] * product;
        }
    } else {
        for (int i = 1; i <= n; ++i) {
            const GklsGenerator gen =
                dist::sample_generator_at(dist, trial_id, static_cast<std::uint64_t>(i));
            product = mat_exp(tau * gen.superop(picture).matrix) * product;
        }
    }
    return {n, t, Superoperator{std::move(product), dist.dim(), picture}, trial_id};
}

Superoperator mean_map(const GeneratorDistribution& dist, double tau, Picture picture,
                       int mc_trials) {
    if (tau < 0.0) {
        throw ValidationError("mean_map requires tau >= 0");
    }
    if (!dist.is_discrete()) {
        return mean_map_mc(dist, tau, mc_trials, picture).superop;
    }
    const Eigen::Index d2 = dist.dim() * dist.dim();
    ComplexMatrix mean = ComplexMatrix::Zero(d2, d2);
    for (const auto& atom : dist.discrete().atoms) {
        mean += atom.weight * mat_exp(tau * atom.generator.superop(picture).matrix);
    }
    return {std::move(mean), dist.dim(), picture};
}

MeanMapEstimate mean_map_mc(const GeneratorDistribution& dist, double tau, int trials,
                            Picture picture) {
    if (trials < 1) {
        throw ValidationError("mean_map_mc requires trials >= 1");
    }
    const Eigen::Index d2 = dist.dim() * dist.dim();
    std::vector<ComplexMatrix> samples;
    samples.reserve(static_cast<std::size_t>(trials));
    ComplexMatrix mean = ComplexMatrix::Zero(d2, d2);
    for (int j = 0; j < trials; ++j) {
        const GklsGenerator gen = dist::sample_generator_stream(
            dist, Domain::MeanMap, static_cast<std::uint64_t>(j), 0);
        samples.push_back(mat_exp(tau * gen.superop(picture).matrix));
        mean += samples.back();
    }
    mean /= static_cast<double>(trials);
    double squared_dev = 0.0;
    for (const auto& sample : samples) {
        squared_dev += (sample - mean).squaredNorm();
    }
    const double se = trials > 1
                          ? std::sqrt(squared_dev / (static_cast<double>(trials) * (trials - 1)))
                          : 0.0;
    return {Superoperator{std::move(mean), dist.dim(), picture}, se, trials};
}

Superoperator chernoff_iterate(const GeneratorDistribution& dist, double t, int n,
                               Picture picture, int mc_trials) {
    if (n < 1) {
        throw ValidationError("chernoff_iterate requires n >= 1");
    }
    const Superoperator step = mean_map(dist, t / n, picture, mc_trials);
    ComplexMatrix product = ComplexMatrix::Identity(step.matrix.rows(), step.matrix.cols());
    for (int i = 0; i < n; ++i) {
        product = step.matrix * product;
    }
    return {std::move(product), step.dim, picture};
}

Superoperator expected_composition(const GeneratorDistribution& dist, int n, double t,
                                   Picture picture) {
    if (!dist.is_discrete()) {
        throw ValidationError("expected_composition requires a discrete mixture");
    }
    if (n < 1 || t < 0.0) {
        throw ValidationError("expected_composition requires n >= 1 and t >= 0");
    }
    const std::size_t m = dist.discrete().atoms.size();
    double paths = 1.0;
    for (int i = 0; i < n; ++i) {
        paths *= static_cast<double>(m);
        if (paths > 1e6) {
            throw SizeError("expected_composition would enumerate more than 10^6 paths");
        }
    }
    const auto exps = atom_step_maps(dist, t / n, picture);
    std::vector<double> weights;
    weights.reserve(m);
    for (const auto& atom : dist.discrete().atoms) {
        weights.push_back(atom.weight);
    }
    const Eigen::Index d2 = dist.dim() * dist.dim();
    ComplexMatrix accumulator = ComplexMatrix::Zero(d2, d2);
    enumerate_compositions(exps, weights, n, ComplexMatrix::Identity(d2, d2), 1.0, accumulator);
    return {std::move(accumulator), dist.dim(), picture};
}

VarianceEstimate variance_estimate(const GeneratorDistribution& dist, int n, double t,
                                   int trials, std::uint64_t base_trial_id, Picture picture) {
    if (trials < 2) {
        throw ValidationError("variance_estimate requires trials >= 2");
    }
    const Superoperator mean = chernoff_iterate(dist, t, n, picture);
    const Eigen::Index d2 = dist.dim() * dist.dim();
    ComplexMatrix d_sum = ComplexMatrix::Zero(d2, d2);
    std::vector<double> per_trial_norms(static_cast<std::size_t>(trials));
    for (int j = 0; j < trials; ++j) {
        const CompositionResult psi =
            compose_random_iterates(dist, n, t, base_trial_id + static_cast<std::uint64_t>(j),
                                    picture);
        const ComplexMatrix deviation = psi.superop.matrix - mean.matrix;
        const ComplexMatrix gram = deviation.adjoint() * deviation;
        d_sum += gram;
        per_trial_norms[static_cast<std::size_t>(j)] = spectral_norm(gram);
    }
    d_sum /= static_cast<double>(trials);

    double norm_mean = 0.0;
    for (double v : per_trial_norms) {
        norm_mean += v;
    }
    norm_mean /= trials;
    double norm_var = 0.0;
    for (double v : per_trial_norms) {
        norm_var += (v - norm_mean) * (v - norm_mean);
    }
    norm_var /= (trials - 1);
    const double se = std::sqrt(norm_var / trials);

    return {n, t, trials, HermitianMatrix(d_sum), spectral_norm(d_sum), se};
}

std::pair<double, double> sup_over_grid(const std::function<double(double)>& f,
                                        const GridSpec& grid) {
    double best_t = grid.time_at(0);
    double best_value = f(best_t);
    for (int i = 1; i < grid.points; ++i) {
        const double t = grid.time_at(i);
        const double value = f(t);
        if (value > best_value) {
            best_value = value;
            best_t = t;
        }
    }
    return {best_t, best_value};
}

double exceedance_probability(const GeneratorDistribution& dist, const ComplexMatrix& x, int n,
                              double epsilon, const GridSpec& grid, int trials, Picture picture,
                              std::uint64_t base_trial_id) {
    if (epsilon <= 0.0) {
        throw ValidationError("exceedance_probability requires epsilon > 0");
    }
    if (trials < 1) {
        throw ValidationError("exceedance_probability requires trials >= 1");
    }
    if (x.rows() != dist.dim() || x.cols() != dist.dim()) {
        throw DimensionError("observable dimension does not match the distribution");
    }
    const ComplexVector x_vec = vec(x);
    std::vector<ComplexVector> mean_applied(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        mean_applied[static_cast<std::size_t>(i)] =
            chernoff_iterate(dist, grid.time_at(i), n, picture).apply(x_vec);
    }

    int exceed_count = 0;
    if (dist.is_discrete()) {
        const StepTable table(dist, n, grid, picture);
        for (int j = 0; j < trials; ++j) {
            const auto indices = dist::sample_atom_indices(
                dist, base_trial_id + static_cast<std::uint64_t>(j), n);
            const auto curve = composition_curve(table, indices);
            for (int i = 0; i < grid.points; ++i) {
                const double deviation =
                    (curve[static_cast<std::size_t>(i)] * x_vec -
                     mean_applied[static_cast<std::size_t>(i)])
                        .norm();
                if (deviation > epsilon) {
                    ++exceed_count;
                    break;
                }
            }
        }
    } else {
        for (int j = 0; j < trials; ++j) {
            const std::uint64_t trial = base_trial_id + static_cast<std::uint64_t>(j);
            for (int i = 0; i < grid.points; ++i) {
                const auto psi = compose_random_iterates(dist, n, grid.time_at(i), trial, picture);
                const double deviation =
                    (psi.superop.apply(x_vec) - mean_applied[static_cast<std::size_t>(i)]).norm();
                if (deviation > epsilon) {
                    ++exceed_count;
                    break;
                }
            }
        }
    }
    return static_cast<double>(exceed_count) / trials;
}

LagrangeReport lagrange_bounds_check(const GklsGenerator& gen, double t, double lambda) {
    if (t < 0.0) {
        throw ValidationError("lagrange_bounds_check requires t >= 0");
    }
    const ComplexMatrix& l = gen.superop(Picture::Heisenberg).matrix;
    const double norm = spectral_norm(l);
    if (norm > lambda * (1.0 + 1e-12) + 1e-12) {
        throw ValidationError("generator norm " + std::to_string(norm) +
                              " exceeds the stated lambda " + std::to_string(lambda));
    }
    const ComplexMatrix id = ComplexMatrix::Identity(l.rows(), l.cols());
    const ComplexMatrix exp_tl = mat_exp(t * l);
    const double growth = std::exp(lambda * t);
    constexpr double slack = 1e-8;

    LagrangeReport report;
    const double first_actual = spectral_norm(exp_tl - id);
    const double first_bound = t * lambda * growth;
    report.first_order_margin = first_bound - first_actual;
    report.first_order_ok = first_actual <= first_bound + slack;

    const double second_actual = spectral_norm(exp_tl - id - t * l);
    const double second_bound = 0.5 * t * t * lambda * lambda * growth;
    report.second_order_margin = second_bound - second_actual;
    report.second_order_ok = second_actual <= second_bound + slack;
    return report;
}

StepTable::StepTable(const GeneratorDistribution& dist, int n, const GridSpec& grid,
                     Picture picture)
    : grid_(grid), n_(n), dim_(dist.dim()) {
    if (!dist.is_discrete()) {
        throw ValidationError("StepTable requires a discrete mixture");
    }
    if (n < 1) {
        throw ValidationError("StepTable requires n >= 1");
    }
    steps_.reserve(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        steps_.push_back(atom_step_maps(dist, grid.time_at(i) / n, picture));
    }
}

std::vector<ComplexMatrix> composition_curve(const StepTable& table,
                                             const std::vector<std::size_t>& atom_indices) {
    const Eigen::Index d2 = table.dim() * table.dim();
    std::vector<ComplexMatrix> curve;
    curve.reserve(static_cast<std::size_t>(table.grid().points));
    for (int i = 0; i < table.grid().points; ++i) {
        ComplexMatrix product = ComplexMatrix::Identity(d2, d2);
        for (std::size_t index : atom_indices) {
            product = table.step(i, index) * product;
        }
        curve.push_back(std::move(product));
    }
    return curve;
}

} // namespace qds::lln
