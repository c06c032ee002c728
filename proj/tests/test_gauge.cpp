#include "doctest.h"
#include "levyt/gauge.hpp"

#include <cmath>
#include <random>

using namespace levyt;

namespace {

const Complex kI(0.0, 1.0);

Coord random_point(std::mt19937_64& rng, int d, double box) {
    std::uniform_real_distribution<double> u(-box, box);
    Coord x{};
    for (int mu = 0; mu < d; ++mu) x[mu] = u(rng);
    return x;
}

CMat fd_eval(const ConnectionField& f, const Coord& x, int mu, int la, double h) {
    Coord xp = x, xm = x;
    xp[la] += h;
    xm[la] -= h;
    FieldSample p, m;
    f.eval(xp, p);
    f.eval(xm, m);
    return (p.a[mu] - m.a[mu]) / (2.0 * h);
}

CMat fd_deval(const ConnectionField& f, const Coord& x, int mu, int la, int ka, double h) {
    Coord xp = x, xm = x;
    xp[ka] += h;
    xm[ka] -= h;
    FieldJacobian p, m;
    f.deval(xp, p);
    f.deval(xm, m);
    return (p.d[mu][la] - m.d[mu][la]) / (2.0 * h);
}

// relative on order-one values, absolute below that
double rel_err(const CMat& got, const CMat& want) {
    return frob_norm(got - want) / std::max(1.0, frob_norm(want));
}

std::vector<std::unique_ptr<ConnectionField>> all_families() {
    std::vector<std::unique_ptr<ConnectionField>> fams;
    fams.push_back(make_zero(2, 2));
    fams.push_back(make_constant_abelian(1.0));
    fams.push_back(make_pure_gauge(0.8));
    fams.push_back(make_bpst(1.0));
    fams.push_back(make_sine_nonym(1.0));
    fams.push_back(make_custom(3, 2, 0.7, 42));
    fams.push_back(make_custom(4, 3, 0.5, 7));
    return fams;
}

}  // namespace

TEST_CASE("zero family evaluates to zero and has zero curvature") {
    auto f = make_zero(3, 2);
    FieldSample s;
    CurvatureAtPoint c;
    const Coord x{0.3, -1.2, 0.5, 0.0};
    f->eval(x, s);
    for (int mu = 0; mu < 3; ++mu) CHECK(frob_norm(s.a[mu]) == 0.0);
    curvature(*f, x, c);
    CHECK(frob_norm(c.f[0][1]) == 0.0);
    CHECK(ym_residual_norm(*f, x) == 0.0);
}

TEST_CASE("constant abelian field values and curvature") {
    auto f = make_constant_abelian(1.0);
    FieldSample s;
    f->eval(Coord{1.0, 0.0}, s);
    CHECK(std::abs(s.a[0](0, 0)) < 1e-15);              // A_1 = -(i f/2) x^2 = 0
    CHECK(std::abs(s.a[1](0, 0) - 0.5 * kI) < 1e-15);   // A_2 = (i f/2) x^1 = i/2

    CurvatureAtPoint c;
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 20; ++rep) {
        const Coord x = random_point(rng, 2, 3.0);
        curvature(*f, x, c);
        CHECK(std::abs(c.f[0][1](0, 0) - kI) < 1e-14);  // F_12 = i f everywhere
        CHECK(frob_norm(c.f[0][0]) == 0.0);
        // flat derivative: nabla F = 0
        CovCurvatureAtPoint g;
        cov_deriv_curvature(*f, x, g);
        for (int la = 0; la < 2; ++la)
            CHECK(frob_norm(g.g[la][0][1]) < 1e-14);
        CHECK(ym_residual_norm(*f, x) < 1e-14);
    }
}

TEST_CASE("pure gauge family is flat and matches the hand value at 0") {
    auto f = make_pure_gauge(1.0);
    FieldSample s;
    f->eval(Coord{0.0, 0.0}, s);
    CHECK(frob_norm(s.a[0] - kI * pauli(3)) < 1e-14);  // g^-1 d_1 g at 0 = i s3

    auto f2 = make_pure_gauge(0.8);
    CurvatureAtPoint c;
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        const Coord x = random_point(rng, 2, 4.0);
        curvature(*f2, x, c);
        CHECK(frob_norm(c.f[0][1]) < 1e-10);
        CHECK(ym_residual_norm(*f2, x) < 1e-10);
    }
}

TEST_CASE("pure gauge element generates the connection") {
    // A_mu = g^-1 d_mu g via central differences of the group element
    const double a = 0.8;
    auto f = make_pure_gauge(a);
    std::mt19937_64 rng(7);
    const double h = 1e-5;
    for (int rep = 0; rep < 10; ++rep) {
        const Coord x = random_point(rng, 2, 3.0);
        const CMat g = pure_gauge_element(a, x);
        CHECK(unitarity_defect(g) < 1e-13);
        FieldSample s;
        f->eval(x, s);
        for (int mu = 0; mu < 2; ++mu) {
            Coord xp = x, xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            const CMat dg = (pure_gauge_element(a, xp) - pure_gauge_element(a, xm)) / (2.0 * h);
            CHECK(frob_norm(CMat(g.adjoint() * dg) - s.a[mu]) < 1e-8);
        }
    }
}

TEST_CASE("sine test field: curvature, covariant derivative, ym residual") {
    auto f = make_sine_nonym(1.0);
    const Coord x{0.0, M_PI / 2.0};
    CurvatureAtPoint c;
    curvature(*f, x, c);
    CHECK(std::abs(c.f[0][1](0, 0)) < 1e-15);  // F_12 = -i cos(x^2) = 0 here

    CovCurvatureAtPoint g;
    cov_deriv_curvature(*f, x, g);
    CHECK(std::abs(g.g[1][1][0](0, 0) + kI) < 1e-15);  // nabla_2 F_21 = -i sin(x^2) = -i

    std::array<CMat, kMaxDim> r;
    ym_residual(*f, x, r);
    CHECK(std::abs(r[0](0, 0) + kI) < 1e-15);  // nu = 1 component
    CHECK(frob_norm(r[1]) < 1e-15);

    // bounded away from zero on x^2 in [pi/4, 3pi/4]
    for (double t = M_PI / 4.0; t <= 3.0 * M_PI / 4.0; t += 0.1)
        CHECK(ym_residual_norm(*f, Coord{0.3, t}) > 0.5);
}

TEST_CASE("bpst instanton: value at origin, self-duality, Yang-Mills") {
    auto f = make_bpst(1.0);
    CurvatureAtPoint c;
    curvature(*f, Coord{0.0, 0.0, 0.0, 0.0}, c);
    CHECK(frob_norm(c.f[0][1] - 2.0 * kI * pauli(3)) < 1e-13);
    CHECK(frob_norm(c.f[0][3] - 2.0 * kI * pauli(1)) < 1e-13);

    // action density -tr(F_munu F_munu) = 96 rho^4 / (|x|^2 + rho^2)^4
    std::mt19937_64 rng(314);
    for (int rep = 0; rep < 50; ++rep) {
        const Coord x = random_point(rng, 4, 2.0);
        curvature(*f, x, c);
        double density = 0.0;
        double sd = 0.0;  // self-duality defect
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                density -= trace(c.f[mu][nu] * c.f[mu][nu]).real();
                CMat dual = zero_mat(2);
                for (int la = 0; la < 4; ++la)
                    for (int si = 0; si < 4; ++si) {
                        const int e = levi_civita4(mu, nu, la, si);
                        if (e != 0) dual += 0.5 * double(e) * c.f[la][si];
                    }
                sd = std::max(sd, frob_norm(c.f[mu][nu] - dual));
            }
        double s = 1.0;
        for (int mu = 0; mu < 4; ++mu) s += x[mu] * x[mu];
        CHECK(density == doctest::Approx(96.0 / (s * s * s * s)).epsilon(1e-10));
        CHECK(sd < 1e-12);
        CHECK(ym_residual_norm(*f, x) < 1e-10);
    }
}

TEST_CASE("bianchi identity holds for every family at random points") {
    std::mt19937_64 rng(555);
    for (const auto& f : all_families()) {
        CAPTURE(f->name());
        for (int rep = 0; rep < 200; ++rep) {
            const Coord x = random_point(rng, f->dim(), 2.5);
            CHECK(bianchi_residual(*f, x) < 1e-10);
        }
    }
}

TEST_CASE("values are anti-hermitian and curvature is antisymmetric") {
    std::mt19937_64 rng(661);
    for (const auto& f : all_families()) {
        CAPTURE(f->name());
        FieldSample s;
        CurvatureAtPoint c;
        for (int rep = 0; rep < 20; ++rep) {
            const Coord x = random_point(rng, f->dim(), 2.0);
            f->eval(x, s);
            for (int mu = 0; mu < f->dim(); ++mu) CHECK(is_anti_hermitian(s.a[mu], 1e-10));
            curvature(*f, x, c);
            for (int mu = 0; mu < f->dim(); ++mu)
                for (int nu = 0; nu < f->dim(); ++nu) {
                    CHECK(is_anti_hermitian(c.f[mu][nu], 1e-10));
                    CHECK(frob_norm(c.f[mu][nu] + c.f[nu][mu]) < 1e-12);
                }
        }
    }
}

TEST_CASE("analytic derivatives match central differences") {
    std::mt19937_64 rng(777);
    const double h = 1e-4;
    for (const auto& f : all_families()) {
        CAPTURE(f->name());
        const int d = f->dim();
        FieldJacobian jac;
        FieldHessian hes;
        for (int rep = 0; rep < 10; ++rep) {
            const Coord x = random_point(rng, d, 2.0);
            f->deval(x, jac);
            f->ddeval(x, hes);
            for (int mu = 0; mu < d; ++mu)
                for (int la = 0; la < d; ++la) {
                    CHECK(rel_err(jac.d[mu][la], fd_eval(*f, x, mu, la, h)) < 1e-6);
                    for (int ka = 0; ka <= la; ++ka) {
                        CHECK(rel_err(hes.h[mu][la][ka], fd_deval(*f, x, mu, la, ka, h)) < 1e-6);
                        // hessian symmetry
                        CHECK(frob_norm(hes.h[mu][la][ka] - hes.h[mu][ka][la]) < 1e-13);
                    }
                }
        }
    }
}

TEST_CASE("family factory validates its configuration") {
    CHECK_THROWS_AS((void)make_bpst(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)make_bpst(-1.0), std::invalid_argument);

    FamilySpec spec;
    spec.name = "no_such_family";
    CHECK_THROWS_AS((void)make_connection(spec), std::invalid_argument);

    spec.name = "bpst";
    spec.dim = 3;  // family is fixed at d = 4
    CHECK_THROWS_AS((void)make_connection(spec), std::invalid_argument);

    spec = FamilySpec{};
    spec.name = "constant_abelian";
    spec.matrix_size = 2;  // family is fixed at N = 1
    CHECK_THROWS_AS((void)make_connection(spec), std::invalid_argument);

    spec = FamilySpec{};
    spec.name = "custom";
    spec.dim = 5;
    CHECK_THROWS_AS((void)make_connection(spec), std::invalid_argument);

    spec = FamilySpec{};
    spec.name = "bpst";
    spec.rho = 0.5;
    auto f = make_connection(spec);
    CHECK(f->dim() == 4);
    CHECK(f->rank() == 2);
}

TEST_CASE("levi-civita symbols") {
    CHECK(levi_civita3(0, 1, 2) == 1);
    CHECK(levi_civita3(0, 2, 1) == -1);
    CHECK(levi_civita3(1, 1, 2) == 0);
    CHECK(levi_civita4(0, 1, 2, 3) == 1);
    CHECK(levi_civita4(1, 0, 2, 3) == -1);
    CHECK(levi_civita4(0, 3, 1, 2) == 1);
    CHECK(levi_civita4(0, 0, 1, 2) == 0);
}
