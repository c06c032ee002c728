#include "levyt/transport.hpp"

namespace levyt {

Scheme parse_scheme(const std::string& name) {
    if (name == "geometric_midpoint") return Scheme::GeometricMidpoint;
    if (name == "heun_projected") return Scheme::HeunProjected;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string scheme_name(Scheme s) {
    return s == Scheme::GeometricMidpoint ? "geometric_midpoint" : "heun_projected";
}

TransportGrid solve_transport(const ConnectionField& field, const Coord& x,
                              const BrownianPath& path, Scheme scheme) {
    if (field.dim() != path.d)
        throw std::invalid_argument("solve_transport: field and path dimension mismatch");
    const int d = field.dim();
    const int n = field.rank();
    const int m = path.steps;

    TransportGrid tg;
    tg.x = x;
    tg.scheme = scheme;
    tg.field = &field;
    tg.path = &path;
    tg.steps = m;
    tg.u.resize(m + 1);
    tg.uinv.resize(m + 1);
    tg.u[0] = CMat::Identity(n, n);

    FieldSample a0, a1;
    Coord y{};
    const double drift_tol = 1e-6;

    // NaN-safe gate: a non-finite defect must also raise.
    const auto check_step = [&](int i) {
        const double defect = unitarity_defect(tg.u[i + 1]);
        tg.max_unitarity_defect = std::max(tg.max_unitarity_defect, defect);
        if (!(defect <= drift_tol))
            throw NumericalError("transport left the unitary group", i, path.seed);
    };

    if (scheme == Scheme::GeometricMidpoint) {
        for (int i = 0; i < m; ++i) {
            for (int mu = 0; mu < d; ++mu)
                y[mu] = x[mu] + 0.5 * (path.at(i, mu) + path.at(i + 1, mu));
            field.eval(y, a0);
            CMat step = CMat::Zero(n, n);
            for (int mu = 0; mu < d; ++mu) step -= path.incr(i, mu) * a0.a[mu];
            if (!step.allFinite())
                throw NumericalError("connection value is not finite", i, path.seed);
            tg.u[i + 1] = mat_exp(step) * tg.u[i];
            check_step(i);
        }
    } else {
        for (int i = 0; i < m; ++i) {
            for (int mu = 0; mu < d; ++mu) y[mu] = x[mu] + path.at(i, mu);
            field.eval(y, a0);
            for (int mu = 0; mu < d; ++mu) y[mu] = x[mu] + path.at(i + 1, mu);
            field.eval(y, a1);
            CMat drift0 = CMat::Zero(n, n);
            for (int mu = 0; mu < d; ++mu) drift0 -= path.incr(i, mu) * a0.a[mu];
            const CMat pred = tg.u[i] + drift0 * tg.u[i];
            CMat incr = drift0 * tg.u[i];
            for (int mu = 0; mu < d; ++mu) incr -= path.incr(i, mu) * (a1.a[mu] * pred);
            if (!incr.allFinite())
                throw NumericalError("connection value is not finite", i, path.seed);
            tg.u[i + 1] = polar_unitary(tg.u[i] + 0.5 * incr);
            check_step(i);
        }
    }
    for (int i = 0; i <= m; ++i) tg.uinv[i] = tg.u[i].adjoint();
    return tg;
}

ProcessGrid process_grids(const TransportGrid& tg, bool with_j) {
    const ConnectionField& field = *tg.field;
    const BrownianPath& path = *tg.path;
    const int d = field.dim();
    const int n = field.rank();
    const int m = tg.steps;

    ProcessGrid pg;
    pg.d = d;
    pg.n = n;
    pg.steps = m;
    pg.has_j = with_j;
    pg.l.init(std::size_t(m + 1) * d * d, n);
    if (with_j) pg.j.init(std::size_t(m + 1) * d * d * d, n);

    CurvatureAtPoint f;
    CovCurvatureAtPoint g;
    Coord y{};
    for (int i = 0; i <= m; ++i) {
        for (int mu = 0; mu < d; ++mu) y[mu] = tg.x[mu] + path.at(i, mu);
        curvature(field, y, f);
        const CMat& ui = tg.u[i];
        const CMat& vi = tg.uinv[i];
        for (int mu = 0; mu < d; ++mu)
            for (int nu = mu + 1; nu < d; ++nu) {
                const CMat c = vi * f.f[mu][nu] * ui;
                pg.l.at((std::size_t(i) * d + mu) * d + nu) = c;
                pg.l.at((std::size_t(i) * d + nu) * d + mu) = -c;
            }
        if (!with_j) continue;
        cov_deriv_curvature(field, y, g);
        for (int la = 0; la < d; ++la)
            for (int mu = 0; mu < d; ++mu)
                for (int nu = mu + 1; nu < d; ++nu) {
                    const CMat c = vi * g.g[la][mu][nu] * ui;
                    pg.j.at(((std::size_t(i) * d + la) * d + mu) * d + nu) = c;
                    pg.j.at(((std::size_t(i) * d + la) * d + nu) * d + mu) = -c;
                }
    }
    return pg;
}

CMat j_div_contraction(const ProcessGrid& pg, int i, int nu) {
    CMat acc = CMat::Zero(pg.n, pg.n);
    for (int mu = 0; mu < pg.d; ++mu) acc += pg.jat(i, mu, mu, nu);
    return acc;
}

CMat j_cov_contraction(const ProcessGrid& pg, int i, int mu) {
    CMat acc = CMat::Zero(pg.n, pg.n);
    for (int nu = 0; nu < pg.d; ++nu) acc += pg.jat(i, nu, mu, nu);
    return acc;
}

CMat strat_integral(const std::vector<CMat>& values, const BrownianPath& path, int nu) {
    const int n = int(values[0].rows());
    CMat acc = CMat::Zero(n, n);
    for (int i = 0; i < path.steps; ++i)
        acc += (0.5 * path.incr(i, nu)) * (values[i] + values[i + 1]);
    return acc;
}

CMat ito_integral(const std::vector<CMat>& values, const BrownianPath& path, int nu) {
    const int n = int(values[0].rows());
    CMat acc = CMat::Zero(n, n);
    for (int i = 0; i < path.steps; ++i) acc += path.incr(i, nu) * values[i];
    return acc;
}

CMat time_integral(const std::vector<CMat>& values, double dt) {
    const int n = int(values[0].rows());
    CMat acc = CMat::Zero(n, n);
    const int m = int(values.size()) - 1;
    for (int i = 0; i < m; ++i) acc += (0.5 * dt) * (values[i] + values[i + 1]);
    return acc;
}

double prop1_residual(const TransportGrid& tg, const ProcessGrid& pg, const Direction& u) {
    const BrownianPath& path = *tg.path;
    const int d = pg.d;
    const int n = pg.n;
    const int m = pg.steps;
    double uv[kMaxDim];

    // per-component integrand W_nu(i) = sum_mu L_munu(i) u^mu(t_i)
    CMat lhs = CMat::Zero(n, n), ito = CMat::Zero(n, n);
    std::vector<CMat> w(m + 1);
    for (int nu = 0; nu < d; ++nu) {
        for (int i = 0; i <= m; ++i) {
            u.u(path.t(i), uv);
            CMat acc = CMat::Zero(n, n);
            for (int mu = 0; mu < d; ++mu)
                if (uv[mu] != 0.0) acc += uv[mu] * pg.lat(i, mu, nu);
            w[i] = acc;
        }
        lhs += strat_integral(w, path, nu);
        ito += ito_integral(w, path, nu);
    }

    // correction integrand T(i) = sum_mu (sum_nu J_{nu mu nu})(i) u^mu(t_i)
    std::vector<CMat> corr(m + 1);
    for (int i = 0; i <= m; ++i) {
        u.u(path.t(i), uv);
        CMat acc = CMat::Zero(n, n);
        for (int mu = 0; mu < d; ++mu)
            if (uv[mu] != 0.0) acc += uv[mu] * j_cov_contraction(pg, i, mu);
        corr[i] = acc;
    }
    const CMat rhs = ito + 0.5 * time_integral(corr, path.dt());
    return (lhs - rhs).norm();
}

double divergence_integrand_strat_ito_gap(const ProcessGrid& pg, const BrownianPath& path) {
    const int n = pg.n;
    const int m = pg.steps;
    CMat gap = CMat::Zero(n, n);
    std::vector<CMat> w(m + 1);
    for (int nu = 0; nu < pg.d; ++nu) {
        for (int i = 0; i <= m; ++i) w[i] = j_div_contraction(pg, i, nu);
        gap += strat_integral(w, path, nu) - ito_integral(w, path, nu);
    }
    return gap.norm();
}

}  // namespace levyt
