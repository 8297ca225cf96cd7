// lln.hpp — Random iterate compositions, mean maps, Chernoff iterates,
// operator-valued variance and remainder bounds.

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qds/distributions.hpp"
#include "qds/gkls.hpp"

namespace qds::lln {

using dist::GeneratorDistribution;
using gkls::GklsGenerator;
using gkls::Picture;
using gkls::Superoperator;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

// Uniform grid on [0, T] including both endpoints; stands in for the
// sup over compact time intervals.
struct GridSpec {
    double T = 1.0;
    int points = 41;

    GridSpec() = default;
    GridSpec(double T_in, int points_in);

    double time_at(int i) const { return T * static_cast<double>(i) / (points - 1); }
};

struct CompositionResult {
    int n = 0;
    double t = 0.0;
    Superoperator superop; // exp((t/n) L_n) ... exp((t/n) L_1), index 1 applied first
    std::uint64_t trial_id = 0;
};

struct VarianceEstimate {
    int n;
    double t;
    int trials;
    HermitianMatrix d_matrix; // estimate of the operator-valued variance
    double d_norm;
    double standard_error;
};

struct LagrangeReport {
    bool first_order_ok = false;
    bool second_order_ok = false;
    double first_order_margin = 0.0;
    double second_order_margin = 0.0;
};

struct MeanMapEstimate {
    Superoperator superop;
    double standard_error;
    int trials;
};

// exp(t L) in the requested picture.
Superoperator semigroup_map(const GklsGenerator& gen, double t, Picture picture);

// Draws generators at sub-trial ids (trial_id, 1..n) and composes the
// (t/n)-step maps, ascending index applied first.
CompositionResult compose_random_iterates(const GeneratorDistribution& dist, int n, double t,
                                          std::uint64_t trial_id,
                                          Picture picture = Picture::Heisenberg);

// Mean map at time tau: exact weighted sum of exponentials for discrete
// mixtures; Monte Carlo (declared trial count) for parametric families.
Superoperator mean_map(const GeneratorDistribution& dist, double tau,
                       Picture picture = Picture::Heisenberg, int mc_trials = 2048);

MeanMapEstimate mean_map_mc(const GeneratorDistribution& dist, double tau, int trials,
                            Picture picture = Picture::Heisenberg);

// (mean_map(t/n))^n by repeated matrix product.
Superoperator chernoff_iterate(const GeneratorDistribution& dist, double t, int n,
                               Picture picture = Picture::Heisenberg, int mc_trials = 2048);

// Exact enumeration of E[Psi_n(t)] over all m^n atom sequences of a
// discrete mixture; refuses when m^n exceeds 10^6.
Superoperator expected_composition(const GeneratorDistribution& dist, int n, double t,
                                   Picture picture = Picture::Heisenberg);

// Monte Carlo estimate of D_{Psi_n}(t) around the exact mean
// chernoff_iterate(t, n).
VarianceEstimate variance_estimate(const GeneratorDistribution& dist, int n, double t,
                                   int trials, std::uint64_t base_trial_id,
                                   Picture picture = Picture::Heisenberg);

// Maximum of f over the grid; earliest grid point wins ties.
std::pair<double, double> sup_over_grid(const std::function<double(double)>& f,
                                        const GridSpec& grid);

// Empirical P[sup_t ||Psi_n(t) vec(X) - mean_iterate(t) vec(X)||_2 > eps].
double exceedance_probability(const GeneratorDistribution& dist, const ComplexMatrix& x, int n,
                              double epsilon, const GridSpec& grid, int trials,
                              Picture picture = Picture::Heisenberg,
                              std::uint64_t base_trial_id = 0);

// Mean-value-theorem remainder bounds for a single generator:
//   ||e^{tL} - I||     <= t lambda e^{lambda t} + 1e-8
//   ||e^{tL} - I - tL|| <= (t^2 lambda^2 / 2) e^{lambda t} + 1e-8.
LagrangeReport lagrange_bounds_check(const GklsGenerator& gen, double t, double lambda);

// Shared per-(n, grid) exponential table for discrete mixtures:
// step(i, a) = exp((t_i / n) L_a).
class StepTable {
  public:
    StepTable(const GeneratorDistribution& dist, int n, const GridSpec& grid, Picture picture);

    const ComplexMatrix& step(int t_index, std::size_t atom) const {
        return steps_[static_cast<std::size_t>(t_index)][atom];
    }
    const GridSpec& grid() const { return grid_; }
    int n() const { return n_; }
    Eigen::Index dim() const { return dim_; }

  private:
    std::vector<std::vector<ComplexMatrix>> steps_;
    GridSpec grid_;
    int n_;
    Eigen::Index dim_;
};

// Psi_n(t_i) for one trial at every grid point (one shared draw across t).
std::vector<ComplexMatrix> composition_curve(const StepTable& table,
                                             const std::vector<std::size_t>& atom_indices);

} // namespace qds::lln
