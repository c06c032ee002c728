#pragma once

#include "levyt/levyops.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

// Ensemble layer: deterministic per-path seeding, schedule-independent
// reduction, and the verification experiments built on the operator layer.
// Every estimate is reproducible bit for bit from (seed, config) regardless
// of the worker count.

namespace levyt {

struct ExperimentConfig {
    FamilySpec family;
    std::vector<double> x;  // base point; empty means the origin
    int steps = 1024;
    int paths = 200;
    std::vector<int> modes = {8, 16, 32, 64, 128};
    Scheme scheme = Scheme::GeometricMidpoint;
    double epsilon = 1e-4;
    std::uint64_t seed = 2024;
    int workers = 0;              // 0 picks the hardware concurrency
    double proposal_sigma = 1.25;  // spatial importance proposal width

    Coord base_point() const;
    int mode_max() const { return modes.empty() ? 0 : modes.back(); }
    // Checks every field and constructs the connection, so callers validate
    // and build in one step. Throws std::invalid_argument with a diagnostic.
    std::unique_ptr<ConnectionField> validate() const;
};

// Runs fn(path_index, path_seed) for every index on a small thread pool and
// returns the rows in path order. Per-path seeds derive from the master seed
// alone, and reduction order is fixed, so the output does not depend on the
// schedule. If workers fail, the exception of the lowest path index wins.
std::vector<std::vector<double>> ensemble_rows(
    int paths, std::uint64_t master_seed, int workers,
    const std::function<std::vector<double>(int, std::uint64_t)>& fn);

struct ScalarEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int paths = 0;
};

// mean and stderr (sample variance / paths, square-rooted) of one column
ScalarEstimate column_estimate(const std::vector<std::vector<double>>& rows,
                               std::size_t col);

// Registered scalar functionals: "one", "endpoint_coordinate" (first
// coordinate of b at t = 1), "mode_square" ((int h_1 o db^0)^2), and
// "transport_trace_re" (Re tr U(b, 1)).
ScalarEstimate mc_run(const std::string& functional, const ExperimentConfig& cfg);

struct SweepPoint {
    int n = 0;
    double rms = 0.0;      // sqrt(E ||partial(n) - closed||_F^2)
    double stderr_ = 0.0;  // delta-method error bar on the rms
};
struct SweepSummary {
    std::vector<SweepPoint> points;
    double closed_rms = 0.0;  // sqrt(E ||closed||_F^2), same paths
    double closed_stderr = 0.0;
    int paths = 0;
};
// Common random numbers: the same path drives the partial sums and the
// closed form, so the curves measure Cesàro truncation, not path noise.
SweepSummary theorem1_sweep(const ExperimentConfig& cfg);
SweepSummary divergence_sweep(const ExperimentConfig& cfg);

struct EquivalenceReport {
    ScalarEstimate partial_sq;  // E ||divergence_partial(mode_max)||_F^2
    ScalarEstimate closed_sq;   // E ||divergence_closed||_F^2
    double quadrature = 0.0;    // deterministic heat-kernel value
};
EquivalenceReport ym_equivalence_report(const ExperimentConfig& cfg);

// int_0^1 int ||ym residual||_F^2 (x + y) p_t(y) dy dt with a Gauss-Hermite
// rule in y and a trapezoid rule in t.
double heat_kernel_divergence_quadrature(const ConnectionField& field, const Coord& x,
                                         int t_points, int hermite_nodes);
// Nodes and weights for int f(z) exp(-z^2) dz.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

struct Prop6Report {
    ScalarEstimate lhs;     // mode-averaged pairings at n = mode_max
    ScalarEstimate rhs;     // -int tr(F F)(x + b_t) dt along the same paths
    ScalarEstimate diff;    // pathwise lhs - rhs under common random numbers
    double max_imag = 0.0;  // largest |Im| of a per-path pairing average
};
Prop6Report prop6_check(const ExperimentConfig& cfg);

struct LemmaCurve {
    int lemma = 1;
    std::vector<int> n_values;
    std::vector<double> l2;       // sqrt(E ||R_n||_F^2)
    std::vector<double> stderr_;  // delta-method error bars
    int paths = 0;
};
// Double-integral remainders against the concentrating kernel l_n, driven by
// fixed bounded processes off the L/J grids:
//   1: (int H l_n db) against M db      2: (int K l_n ds) against M db
//   3: (int H l_n db) against K dt      4: (int R l_n ds) against K dt
// with H_mu = M_mu = L_{mu,(mu+1)%d}, K = J_001, R = J_101.
LemmaCurve lemma_decay_check(int lemma, const ExperimentConfig& cfg,
                             const std::vector<int>& n_values);

struct ActionReport {
    ScalarEstimate lhs;         // importance-sampled space integral of the
                                // mode-averaged pairings, one path per site
    ScalarEstimate density_is;  // same sites on the exact action density
    double quadrature = 0.0;    // deterministic radial integral
};
// Joint (site, path) sampling with a centered Gaussian proposal of width
// proposal_sigma per coordinate. Needs an integrable action density.
ActionReport action_functional_check(const ExperimentConfig& cfg);
// -int tr(F F) dx for the instanton family: radial quadrature, any rho.
double instanton_action_quadrature(double rho);

struct CalibrationResult {
    int trials = 0;
    int covered = 0;  // exact value within three standard errors
};
// Repeated-seed coverage of the error bars on a known discrete expectation.
CalibrationResult calibration_check(std::uint64_t master_seed, int trials, int paths,
                                    int steps);

}  // namespace levyt
