#pragma once

#include "levyt/gauge.hpp"
#include "levyt/paths.hpp"

#include <stdexcept>
#include <string>
#include <vector>

// Stochastic parallel transport U(b,t) solving
//     dU = -A_mu(x + b_t) U o db^mu,  U(0) = I,
// together with the conjugated curvature processes along the path and the
// discrete Stratonovich / Ito / time integral rules shared by every module.

namespace levyt {

enum class Scheme { GeometricMidpoint, HeunProjected };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

// Raised when an iterate leaves the unitary group beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int step, std::uint64_t seed)
        : std::runtime_error(what), step(step), seed(seed) {}
    int step;
    std::uint64_t seed;
};

// Compact storage for a sequence of N x N complex matrices.
struct MatStore {
    int n = 0;
    std::size_t count = 0;
    std::vector<Complex> buf;

    void init(std::size_t cnt, int rank) {
        n = rank;
        count = cnt;
        buf.assign(cnt * std::size_t(rank) * rank, Complex(0, 0));
    }
    Eigen::Map<Eigen::MatrixXcd> at(std::size_t i) {
        return {buf.data() + i * std::size_t(n) * n, n, n};
    }
    Eigen::Map<const Eigen::MatrixXcd> at(std::size_t i) const {
        return {buf.data() + i * std::size_t(n) * n, n, n};
    }
};

struct TransportGrid {
    Coord x{};
    Scheme scheme = Scheme::GeometricMidpoint;
    const ConnectionField* field = nullptr;
    const BrownianPath* path = nullptr;
    int steps = 0;
    std::vector<CMat> u;     // u[i] = U(b, t_i), unitary
    std::vector<CMat> uinv;  // cached adjoints
    double max_unitarity_defect = 0.0;
};

// geometric_midpoint: U_{i+1} = exp(-A_mu(x + (b_i+b_{i+1})/2) db^mu) U_i,
// unitary by construction. heun_projected: Stratonovich predictor-corrector
// re-projected to the unitary factor of the polar decomposition each step.
TransportGrid solve_transport(const ConnectionField& field, const Coord& x,
                              const BrownianPath& path, Scheme scheme);

struct ProcessGrid {
    int d = 0;
    int n = 0;
    int steps = 0;
    bool has_j = false;
    MatStore l;  // (M+1) * d * d,     L_munu = U^{-1} F_munu(x+b) U
    MatStore j;  // (M+1) * d * d * d, J_lamunu = U^{-1} (nabla_la F)_munu U

    Eigen::Map<const Eigen::MatrixXcd> lat(int i, int mu, int nu) const {
        return l.at((std::size_t(i) * d + mu) * d + nu);
    }
    Eigen::Map<const Eigen::MatrixXcd> jat(int i, int la, int mu, int nu) const {
        return j.at(((std::size_t(i) * d + la) * d + mu) * d + nu);
    }
};

ProcessGrid process_grids(const TransportGrid& tg, bool with_j);

// sum_mu J_{mu mu nu}(i): conjugated Yang-Mills residual along the path.
CMat j_div_contraction(const ProcessGrid& pg, int i, int nu);
// sum_nu J_{nu mu nu}(i): the quadratic covariation density of dL against db.
CMat j_cov_contraction(const ProcessGrid& pg, int i, int mu);

// Integral rules on the shared grid. `values` holds M+1 grid samples.
// Stratonovich: midpoint (endpoint average), Ito: left endpoint,
// time: trapezoid.
CMat strat_integral(const std::vector<CMat>& values, const BrownianPath& path, int nu);
CMat ito_integral(const std::vector<CMat>& values, const BrownianPath& path, int nu);
CMat time_integral(const std::vector<CMat>& values, double dt);

// || int L_munu u^mu o db^nu - (int L_munu u^mu db^nu
//    + 1/2 int sum_nu J_{nu mu nu} u^mu dt) ||_F.
// The left difference is the discrete covariation sum of the L grid; the
// correction uses the analytic J grid, so the two routes are independent.
double prop1_residual(const TransportGrid& tg, const ProcessGrid& pg, const Direction& u);

// || int sum_mu J_{mu mu nu} o db^nu - same with Ito rule ||_F; vanishes in
// the limit because nabla_mu nabla_nu F^{mu nu} = 0.
double divergence_integrand_strat_ito_gap(const ProcessGrid& pg, const BrownianPath& path);

}  // namespace levyt
