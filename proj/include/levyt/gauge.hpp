#pragma once

#include "levyt/liealg.hpp"

#include <array>
#include <memory>
#include <string>

// Connection fields A_mu: R^d -> u(N) with analytic first and second
// derivatives, plus pointwise curvature machinery built on top of them.

namespace levyt {

using Coord = std::array<double, kMaxDim>;

struct FieldSample {
    std::array<CMat, kMaxDim> a;  // a[mu] = A_mu(x)
};

struct FieldJacobian {
    // d[mu][la] = dA_mu/dx^la
    std::array<std::array<CMat, kMaxDim>, kMaxDim> d;
};

struct FieldHessian {
    // h[mu][la][ka] = d^2 A_mu / dx^la dx^ka, symmetric in (la, ka)
    std::array<std::array<std::array<CMat, kMaxDim>, kMaxDim>, kMaxDim> h;
};

// Immutable after construction; evaluation is pure and safe to share
// across path workers.
class ConnectionField {
public:
    virtual ~ConnectionField() = default;

    int dim() const { return d_; }
    int rank() const { return n_; }
    // Documentation value: a sup-norm bound on ||A_mu(x)||_F, infinite for
    // the linearly growing family.
    double bound() const { return bound_; }
    const std::string& name() const { return name_; }

    virtual void eval(const Coord& x, FieldSample& out) const = 0;
    virtual void deval(const Coord& x, FieldJacobian& out) const = 0;
    virtual void ddeval(const Coord& x, FieldHessian& out) const = 0;

protected:
    ConnectionField(int d, int n, double bound, std::string name)
        : d_(d), n_(n), bound_(bound), name_(std::move(name)) {}

    int d_;
    int n_;
    double bound_;
    std::string name_;
};

// Family selector used by the config layer. Unused parameters are ignored.
struct FamilySpec {
    std::string name = "zero";
    double f = 1.0;          // constant_abelian field strength
    double rho = 1.0;        // bpst instanton scale
    double amplitude = 1.0;  // pure_gauge / sine_nonym / custom amplitude
    std::uint64_t seed = 1;  // custom family coefficient seed
    int dim = 0;             // 0 means family default
    int matrix_size = 0;     // 0 means family default
};

std::unique_ptr<ConnectionField> make_zero(int d, int n);
// d=2, N=1: A_1 = -(i f/2) x^2, A_2 = (i f/2) x^1, so F_12 = i f. Unbounded.
std::unique_ptr<ConnectionField> make_constant_abelian(double f);
// d=2, N=2: A = g^{-1} dg for g(x) = exp(i a sin(x^1) s3) exp(i a sin(x^2) s1).
std::unique_ptr<ConnectionField> make_pure_gauge(double amplitude);
// d=4, N=2 instanton: A_mu = -i eta_{a mu nu} x^nu sigma_a / (|x|^2 + rho^2).
std::unique_ptr<ConnectionField> make_bpst(double rho);
// d=2, N=1: A_1 = i a sin(x^2), A_2 = 0. Not a Yang-Mills solution.
std::unique_ptr<ConnectionField> make_sine_nonym(double amplitude);
// Seeded random affine coefficients under a Gaussian mollifier; generic
// noncommutative bounded field for property tests, any d <= 4, N <= 4.
std::unique_ptr<ConnectionField> make_custom(int d, int n, double amplitude, std::uint64_t seed);

std::unique_ptr<ConnectionField> make_connection(const FamilySpec& spec);

// Group element g(x) of the pure_gauge family, so transport runs can be
// compared against g(x + b_t)^{-1} g(x).
CMat pure_gauge_element(double amplitude, const Coord& x);

struct CurvatureAtPoint {
    // f[mu][nu] = F_munu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]
    std::array<std::array<CMat, kMaxDim>, kMaxDim> f;
};

struct CovCurvatureAtPoint {
    // g[la][mu][nu] = (nabla_la F)_munu = d_la F_munu + [A_la, F_munu]
    std::array<std::array<std::array<CMat, kMaxDim>, kMaxDim>, kMaxDim> g;
};

void curvature(const ConnectionField& field, const Coord& x, CurvatureAtPoint& out);
void cov_deriv_curvature(const ConnectionField& field, const Coord& x, CovCurvatureAtPoint& out);

// out[nu] = sum_mu (nabla_mu F)_munu; identically zero iff A solves the
// Yang-Mills equations at x.
void ym_residual(const ConnectionField& field, const Coord& x, std::array<CMat, kMaxDim>& out);
double ym_residual_norm(const ConnectionField& field, const Coord& x);

// max over (la, mu, nu) of || nabla_la F_munu + nabla_nu F_lamu + nabla_mu F_nula ||_F
double bianchi_residual(const ConnectionField& field, const Coord& x);

// Totally antisymmetric symbols, eps(0,1,2) = 1 and eps(0,1,2,3) = 1.
int levi_civita3(int a, int b, int c);
int levi_civita4(int a, int b, int c, int d);

}  // namespace levyt
