#include "levyt/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace levyt {

namespace {

// exp(i theta s_k) = cos(theta) I + i sin(theta) s_k
CMat su2_exp(double theta, int k) {
    return std::cos(theta) * CMat::Identity(2, 2) + Complex(0, std::sin(theta)) * pauli(k);
}

void fill_zero(int d, int n, FieldSample& out) {
    for (int mu = 0; mu < d; ++mu) out.a[mu] = CMat::Zero(n, n);
}

void fill_zero(int d, int n, FieldJacobian& out) {
    for (int mu = 0; mu < d; ++mu)
        for (int la = 0; la < d; ++la) out.d[mu][la] = CMat::Zero(n, n);
}

void fill_zero(int d, int n, FieldHessian& out) {
    for (int mu = 0; mu < d; ++mu)
        for (int la = 0; la < d; ++la)
            for (int ka = 0; ka < d; ++ka) out.h[mu][la][ka] = CMat::Zero(n, n);
}

class ZeroField final : public ConnectionField {
public:
    ZeroField(int d, int n) : ConnectionField(d, n, 0.0, "zero") {
        if (d < 1 || d > kMaxDim || n < 1 || n > kMaxRank)
            throw std::invalid_argument("zero: dimension out of range");
    }
    void eval(const Coord&, FieldSample& out) const override { fill_zero(d_, n_, out); }
    void deval(const Coord&, FieldJacobian& out) const override { fill_zero(d_, n_, out); }
    void ddeval(const Coord&, FieldHessian& out) const override { fill_zero(d_, n_, out); }
};

class ConstantAbelianField final : public ConnectionField {
public:
    explicit ConstantAbelianField(double f)
        : ConnectionField(2, 1, std::numeric_limits<double>::infinity(),
                          "constant_abelian(f=" + std::to_string(f) + ")"),
          f_(f) {}

    void eval(const Coord& x, FieldSample& out) const override {
        fill_zero(d_, n_, out);
        out.a[0](0, 0) = Complex(0, -0.5 * f_ * x[1]);
        out.a[1](0, 0) = Complex(0, 0.5 * f_ * x[0]);
    }
    void deval(const Coord&, FieldJacobian& out) const override {
        fill_zero(d_, n_, out);
        out.d[0][1](0, 0) = Complex(0, -0.5 * f_);
        out.d[1][0](0, 0) = Complex(0, 0.5 * f_);
    }
    void ddeval(const Coord&, FieldHessian& out) const override { fill_zero(d_, n_, out); }

private:
    double f_;
};

class SineField final : public ConnectionField {
public:
    explicit SineField(double amp)
        : ConnectionField(2, 1, amp, "sine_nonym(a=" + std::to_string(amp) + ")"), amp_(amp) {}

    void eval(const Coord& x, FieldSample& out) const override {
        fill_zero(d_, n_, out);
        out.a[0](0, 0) = Complex(0, amp_ * std::sin(x[1]));
    }
    void deval(const Coord& x, FieldJacobian& out) const override {
        fill_zero(d_, n_, out);
        out.d[0][1](0, 0) = Complex(0, amp_ * std::cos(x[1]));
    }
    void ddeval(const Coord& x, FieldHessian& out) const override {
        fill_zero(d_, n_, out);
        out.h[0][1][1](0, 0) = Complex(0, -amp_ * std::sin(x[1]));
    }

private:
    double amp_;
};

// g(x) = P(x^1) Q(x^2) with P = exp(i a sin(x^1) s3), Q = exp(i a sin(x^2) s1).
// Since s3 commutes with P and s1 with Q:
//   A_1 = i a cos(x^1) Q^{-1} s3 Q,   A_2 = i a cos(x^2) s1,
// and with W = Q^{-1} s3 Q, W2 = Q^{-1} s2 Q:
//   dW/dx^2 = -2 a cos(x^2) W2,   dW2/dx^2 = 2 a cos(x^2) W.
class PureGaugeField final : public ConnectionField {
public:
    explicit PureGaugeField(double amp)
        : ConnectionField(2, 2, amp * std::sqrt(2.0),
                          "pure_gauge(a=" + std::to_string(amp) + ")"),
          a_(amp) {}

    void eval(const Coord& x, FieldSample& out) const override {
        Frame fr(*this, x);
        out.a[0] = Complex(0, a_ * fr.c1) * fr.w;
        out.a[1] = Complex(0, a_ * fr.c2) * pauli(1);
    }
    void deval(const Coord& x, FieldJacobian& out) const override {
        Frame fr(*this, x);
        const CMat s1 = pauli(1);
        out.d[0][0] = Complex(0, -a_ * fr.s1) * fr.w;
        out.d[0][1] = Complex(0, -2.0 * a_ * a_ * fr.c1 * fr.c2) * fr.w2;
        out.d[1][0] = CMat::Zero(2, 2);
        out.d[1][1] = Complex(0, -a_ * fr.s2) * s1;
    }
    void ddeval(const Coord& x, FieldHessian& out) const override {
        Frame fr(*this, x);
        const double a = a_;
        out.h[0][0][0] = Complex(0, -a * fr.c1) * fr.w;
        out.h[0][0][1] = Complex(0, 2.0 * a * a * fr.s1 * fr.c2) * fr.w2;
        out.h[0][1][0] = out.h[0][0][1];
        out.h[0][1][1] = Complex(0, 2.0 * a * a * fr.c1 * fr.s2) * fr.w2 +
                         Complex(0, -4.0 * a * a * a * fr.c1 * fr.c2 * fr.c2) * fr.w;
        const CMat z = CMat::Zero(2, 2);
        out.h[1][0][0] = z;
        out.h[1][0][1] = z;
        out.h[1][1][0] = z;
        out.h[1][1][1] = Complex(0, -a * fr.c2) * pauli(1);
    }

private:
    struct Frame {
        double c1, s1, c2, s2;
        CMat w, w2;
        Frame(const PureGaugeField& f, const Coord& x) {
            c1 = std::cos(x[0]);
            s1 = std::sin(x[0]);
            c2 = std::cos(x[1]);
            s2 = std::sin(x[1]);
            const CMat q = su2_exp(f.a_ * s2, 1);
            const CMat qi = q.adjoint();
            w = qi * pauli(3) * q;
            w2 = qi * pauli(2) * q;
        }
    };

    double a_;
};

// 't Hooft symbol, zero based, self-dual: eta(a,i,j) = eps_{aij} on the
// first three indices, eta(a,i,3) = delta_{ai}, eta(a,3,i) = -delta_{ai}.
double eta_symbol(int a, int mu, int nu) {
    if (mu < 3 && nu < 3) return double(levi_civita3(a, mu, nu));
    if (nu == 3 && mu < 3) return a == mu ? 1.0 : 0.0;
    if (mu == 3 && nu < 3) return a == nu ? -1.0 : 0.0;
    return 0.0;
}

class BpstField final : public ConnectionField {
public:
    explicit BpstField(double rho)
        : ConnectionField(4, 2, std::sqrt(6.0) / (2.0 * rho),
                          "bpst(rho=" + std::to_string(rho) + ")"),
          rho2_(rho * rho) {
        if (!(rho > 0)) throw std::invalid_argument("bpst: rho must be positive");
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                CMat m = CMat::Zero(2, 2);
                for (int a = 0; a < 3; ++a) {
                    const double e = eta_symbol(a, mu, nu);
                    if (e != 0.0) m += Complex(0, -e) * pauli(a + 1);
                }
                m_[mu][nu] = m;
            }
    }

    void eval(const Coord& x, FieldSample& out) const override {
        const double inv = 1.0 / s(x);
        for (int mu = 0; mu < 4; ++mu) {
            CMat acc = CMat::Zero(2, 2);
            for (int nu = 0; nu < 4; ++nu) acc += x[nu] * m_[mu][nu];
            out.a[mu] = inv * acc;
        }
    }
    void deval(const Coord& x, FieldJacobian& out) const override {
        const double inv = 1.0 / s(x);
        const double inv2 = inv * inv;
        std::array<CMat, 4> mx;  // mx[mu] = sum_nu M_{mu nu} x^nu
        for (int mu = 0; mu < 4; ++mu) {
            CMat acc = CMat::Zero(2, 2);
            for (int nu = 0; nu < 4; ++nu) acc += x[nu] * m_[mu][nu];
            mx[mu] = acc;
        }
        for (int mu = 0; mu < 4; ++mu)
            for (int la = 0; la < 4; ++la)
                out.d[mu][la] = inv * m_[mu][la] - (2.0 * x[la] * inv2) * mx[mu];
    }
    void ddeval(const Coord& x, FieldHessian& out) const override {
        const double inv = 1.0 / s(x);
        const double inv2 = inv * inv;
        const double inv3 = inv2 * inv;
        std::array<CMat, 4> mx;
        for (int mu = 0; mu < 4; ++mu) {
            CMat acc = CMat::Zero(2, 2);
            for (int nu = 0; nu < 4; ++nu) acc += x[nu] * m_[mu][nu];
            mx[mu] = acc;
        }
        for (int mu = 0; mu < 4; ++mu)
            for (int la = 0; la < 4; ++la)
                for (int ka = 0; ka < 4; ++ka) {
                    CMat v = (-2.0 * inv2) *
                             (x[ka] * m_[mu][la] + x[la] * m_[mu][ka]);
                    if (ka == la) v -= (2.0 * inv2) * mx[mu];
                    v += (8.0 * x[la] * x[ka] * inv3) * mx[mu];
                    out.h[mu][la][ka] = v;
                }
    }

private:
    double s(const Coord& x) const {
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + rho2_;
    }

    double rho2_;
    std::array<std::array<CMat, 4>, 4> m_;
};

// A_mu(x) = amp (B_mu + sum_nu C_{mu nu} x^nu) exp(-|x|^2/2) with seeded
// anti-Hermitian coefficients. Bounded, generic, noncommutative for N >= 2.
class MollifiedAffineField final : public ConnectionField {
public:
    MollifiedAffineField(int d, int n, double amp, std::uint64_t seed)
        : ConnectionField(d, n, 0.0, "custom(seed=" + std::to_string(seed) + ")"),
          amp_(amp) {
        if (d < 1 || d > kMaxDim || n < 1 || n > kMaxRank)
            throw std::invalid_argument("custom: dimension out of range");
        double mags = 0.0;
        for (int mu = 0; mu < d; ++mu) {
            b_[mu] = 0.5 * random_anti_hermitian(n, seed * 1000003ull + std::uint64_t(mu));
            mags = std::max(mags, b_[mu].norm());
            for (int nu = 0; nu < d; ++nu) {
                c_[mu][nu] = 0.5 * random_anti_hermitian(
                                       n, seed * 1000003ull + 101ull + std::uint64_t(mu * kMaxDim + nu));
                mags = std::max(mags, c_[mu][nu].norm());
            }
        }
        bound_ = amp * mags * (1.0 + double(d) * std::exp(-0.5));
    }

    void eval(const Coord& x, FieldSample& out) const override {
        const double g = amp_ * mollifier(x);
        for (int mu = 0; mu < d_; ++mu) out.a[mu] = g * affine(mu, x);
    }
    void deval(const Coord& x, FieldJacobian& out) const override {
        const double g = amp_ * mollifier(x);
        for (int mu = 0; mu < d_; ++mu) {
            const CMat p = affine(mu, x);
            for (int la = 0; la < d_; ++la)
                out.d[mu][la] = g * (c_[mu][la] - x[la] * p);
        }
    }
    void ddeval(const Coord& x, FieldHessian& out) const override {
        const double g = amp_ * mollifier(x);
        for (int mu = 0; mu < d_; ++mu) {
            const CMat p = affine(mu, x);
            for (int la = 0; la < d_; ++la)
                for (int ka = 0; ka < d_; ++ka) {
                    CMat v = -x[ka] * c_[mu][la] - x[la] * c_[mu][ka] +
                             (x[la] * x[ka]) * p;
                    if (ka == la) v -= p;
                    out.h[mu][la][ka] = g * v;
                }
        }
    }

private:
    double mollifier(const Coord& x) const {
        double r2 = 0.0;
        for (int k = 0; k < d_; ++k) r2 += x[k] * x[k];
        return std::exp(-0.5 * r2);
    }
    CMat affine(int mu, const Coord& x) const {
        CMat p = b_[mu];
        for (int nu = 0; nu < d_; ++nu) p += x[nu] * c_[mu][nu];
        return p;
    }

    double amp_;
    std::array<CMat, kMaxDim> b_;
    std::array<std::array<CMat, kMaxDim>, kMaxDim> c_;
};

}  // namespace

std::unique_ptr<ConnectionField> make_zero(int d, int n) {
    return std::make_unique<ZeroField>(d, n);
}
std::unique_ptr<ConnectionField> make_constant_abelian(double f) {
    return std::make_unique<ConstantAbelianField>(f);
}
std::unique_ptr<ConnectionField> make_pure_gauge(double amplitude) {
    return std::make_unique<PureGaugeField>(amplitude);
}
std::unique_ptr<ConnectionField> make_bpst(double rho) {
    return std::make_unique<BpstField>(rho);
}
std::unique_ptr<ConnectionField> make_sine_nonym(double amplitude) {
    return std::make_unique<SineField>(amplitude);
}
std::unique_ptr<ConnectionField> make_custom(int d, int n, double amplitude, std::uint64_t seed) {
    return std::make_unique<MollifiedAffineField>(d, n, amplitude, seed);
}

std::unique_ptr<ConnectionField> make_connection(const FamilySpec& spec) {
    auto check_fixed = [&](int d, int n) {
        if ((spec.dim && spec.dim != d) || (spec.matrix_size && spec.matrix_size != n))
            throw std::invalid_argument("family " + spec.name + " is fixed to d=" +
                                        std::to_string(d) + ", N=" + std::to_string(n));
    };
    if (spec.name == "zero")
        return make_zero(spec.dim ? spec.dim : 2, spec.matrix_size ? spec.matrix_size : 2);
    if (spec.name == "constant_abelian") {
        check_fixed(2, 1);
        return make_constant_abelian(spec.f);
    }
    if (spec.name == "pure_gauge") {
        check_fixed(2, 2);
        return make_pure_gauge(spec.amplitude);
    }
    if (spec.name == "bpst") {
        check_fixed(4, 2);
        return make_bpst(spec.rho);
    }
    if (spec.name == "sine_nonym") {
        check_fixed(2, 1);
        return make_sine_nonym(spec.amplitude);
    }
    if (spec.name == "custom")
        return make_custom(spec.dim ? spec.dim : 2, spec.matrix_size ? spec.matrix_size : 2,
                           spec.amplitude, spec.seed);
    throw std::invalid_argument("unknown connection family: " + spec.name);
}

CMat pure_gauge_element(double amplitude, const Coord& x) {
    return su2_exp(amplitude * std::sin(x[0]), 3) * su2_exp(amplitude * std::sin(x[1]), 1);
}

void curvature(const ConnectionField& field, const Coord& x, CurvatureAtPoint& out) {
    const int d = field.dim();
    FieldSample a;
    FieldJacobian ja;
    field.eval(x, a);
    field.deval(x, ja);
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
            out.f[mu][nu] = ja.d[nu][mu] - ja.d[mu][nu] + commutator(a.a[mu], a.a[nu]);
}

void cov_deriv_curvature(const ConnectionField& field, const Coord& x, CovCurvatureAtPoint& out) {
    const int d = field.dim();
    FieldSample a;
    FieldJacobian ja;
    FieldHessian ha;
    field.eval(x, a);
    field.deval(x, ja);
    field.ddeval(x, ha);
    CurvatureAtPoint f;
    curvature(field, x, f);
    for (int la = 0; la < d; ++la)
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) {
                // d_la F_munu = dd A_nu - dd A_mu + [dA_mu, A_nu] + [A_mu, dA_nu]
                CMat df = ha.h[nu][mu][la] - ha.h[mu][nu][la] +
                          commutator(ja.d[mu][la], a.a[nu]) +
                          commutator(a.a[mu], ja.d[nu][la]);
                out.g[la][mu][nu] = df + commutator(a.a[la], f.f[mu][nu]);
            }
}

void ym_residual(const ConnectionField& field, const Coord& x, std::array<CMat, kMaxDim>& out) {
    const int d = field.dim();
    CovCurvatureAtPoint g;
    cov_deriv_curvature(field, x, g);
    for (int nu = 0; nu < d; ++nu) {
        CMat acc = CMat::Zero(field.rank(), field.rank());
        for (int mu = 0; mu < d; ++mu) acc += g.g[mu][mu][nu];
        out[nu] = acc;
    }
}

double ym_residual_norm(const ConnectionField& field, const Coord& x) {
    std::array<CMat, kMaxDim> r;
    ym_residual(field, x, r);
    double m = 0.0;
    for (int nu = 0; nu < field.dim(); ++nu) m = std::max(m, r[nu].norm());
    return m;
}

double bianchi_residual(const ConnectionField& field, const Coord& x) {
    const int d = field.dim();
    CovCurvatureAtPoint g;
    cov_deriv_curvature(field, x, g);
    double m = 0.0;
    for (int la = 0; la < d; ++la)
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) {
                const CMat cyc = g.g[la][mu][nu] + g.g[nu][la][mu] + g.g[mu][nu][la];
                m = std::max(m, cyc.norm());
            }
    return m;
}

int levi_civita3(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    // parity of the permutation (a b c) of (0 1 2)
    int p = 1;
    int v[3] = {a, b, c};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (v[i] > v[j]) {
                std::swap(v[i], v[j]);
                p = -p;
            }
    return p;
}

int levi_civita4(int a, int b, int c, int d) {
    int v[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (v[i] == v[j]) return 0;
    int p = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (v[i] > v[j]) {
                std::swap(v[i], v[j]);
                p = -p;
            }
    return p;
}

}  // namespace levyt
