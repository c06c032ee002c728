#include "levyt/variation.hpp"

namespace levyt {

namespace {

void require_endpoint_zero(const Direction& u, const char* who) {
    double uv[kMaxDim];
    u.u(1.0, uv);
    for (int mu = 0; mu < u.d; ++mu)
        if (std::abs(uv[mu]) > 1e-12)
            throw std::invalid_argument(std::string(who) + ": direction must vanish at t = 1");
}

// A_mu(x + b_1) u^mu(1)
CMat boundary_field_term(const TransportGrid& tg, const Direction& u) {
    const int d = tg.field->dim();
    const int n = tg.field->rank();
    double uv[kMaxDim];
    u.u(1.0, uv);
    CMat acc = CMat::Zero(n, n);
    bool any = false;
    for (int mu = 0; mu < d; ++mu) any = any || uv[mu] != 0.0;
    if (!any) return acc;
    Coord y{};
    for (int mu = 0; mu < d; ++mu) y[mu] = tg.x[mu] + tg.path->at(tg.steps, mu);
    FieldSample s;
    tg.field->eval(y, s);
    for (int mu = 0; mu < d; ++mu)
        if (uv[mu] != 0.0) acc += uv[mu] * s.a[mu];
    return acc;
}

// W_nu(i) = sum_mu L_munu(i) u^mu(t_i) for all nu at one grid point
void integrand_row(const ProcessGrid& pg, const BrownianPath& path, const Direction& u,
                   int i, std::array<CMat, kMaxDim>& w) {
    double uv[kMaxDim];
    u.u(path.t(i), uv);
    for (int nu = 0; nu < pg.d; ++nu) {
        CMat acc = CMat::Zero(pg.n, pg.n);
        for (int mu = 0; mu < pg.d; ++mu)
            if (uv[mu] != 0.0) acc += uv[mu] * pg.lat(i, mu, nu);
        w[nu] = acc;
    }
}

// 1/2 int (J_numula + J_munula) u^mu v^nu o db^la
CMat symmetrized_j_term(const ProcessGrid& pg, const BrownianPath& path,
                        const Direction& u, const Direction& v) {
    const int d = pg.d, n = pg.n, m = pg.steps;
    const auto row = [&](int i, std::array<CMat, kMaxDim>& g) {
        double uv[kMaxDim], vv[kMaxDim];
        u.u(path.t(i), uv);
        v.u(path.t(i), vv);
        for (int la = 0; la < d; ++la) {
            CMat acc = CMat::Zero(n, n);
            for (int mu = 0; mu < d; ++mu)
                for (int nu = 0; nu < d; ++nu) {
                    const double c = 0.5 * uv[mu] * vv[nu];
                    if (c != 0.0) acc += c * (pg.jat(i, nu, mu, la) + pg.jat(i, mu, nu, la));
                }
            g[la] = acc;
        }
    };
    std::array<CMat, kMaxDim> g0, g1;
    row(0, g0);
    CMat acc = CMat::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        row(i + 1, g1);
        for (int la = 0; la < d; ++la)
            acc += (0.5 * path.incr(i, la)) * (g0[la] + g1[la]);
        g0.swap(g1);
    }
    return acc;
}

// 1/2 int L_munu (udot^nu v^mu + vdot^nu u^mu) dt
CMat l_time_term(const ProcessGrid& pg, const BrownianPath& path,
                 const Direction& u, const Direction& v) {
    const int d = pg.d, n = pg.n, m = pg.steps;
    const auto at = [&](int i) {
        double uv[kMaxDim], vv[kMaxDim], ud[kMaxDim], vd[kMaxDim];
        u.u(path.t(i), uv);
        v.u(path.t(i), vv);
        u.udot(path.t(i), ud);
        v.udot(path.t(i), vd);
        CMat acc = CMat::Zero(n, n);
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) {
                const double c = 0.5 * (ud[nu] * vv[mu] + vd[nu] * uv[mu]);
                if (c != 0.0) acc += c * pg.lat(i, mu, nu);
            }
        return acc;
    };
    CMat prev = at(0);
    CMat acc = CMat::Zero(n, n);
    const double dt = path.dt();
    for (int i = 0; i < m; ++i) {
        CMat next = at(i + 1);
        acc += (0.5 * dt) * (prev + next);
        prev.swap(next);
    }
    return acc;
}

}  // namespace

std::vector<CMat> strat_prefix(const ProcessGrid& pg, const BrownianPath& path,
                               const Direction& u) {
    const int m = pg.steps;
    std::vector<CMat> x(m + 1);
    x[0] = CMat::Zero(pg.n, pg.n);
    std::array<CMat, kMaxDim> w0, w1;
    integrand_row(pg, path, u, 0, w0);
    for (int i = 0; i < m; ++i) {
        integrand_row(pg, path, u, i + 1, w1);
        CMat incr = CMat::Zero(pg.n, pg.n);
        for (int nu = 0; nu < pg.d; ++nu)
            incr += (0.5 * path.incr(i, nu)) * (w0[nu] + w1[nu]);
        x[i + 1] = x[i] + incr;
        w0.swap(w1);
    }
    return x;
}

VariationResult first_variation_u(const TransportGrid& tg, const ProcessGrid& pg,
                                  const Direction& u) {
    const std::vector<CMat> x = strat_prefix(pg, *tg.path, u);
    VariationResult r;
    r.stochastic = -tg.u[tg.steps] * x[tg.steps];
    r.temporal = CMat::Zero(pg.n, pg.n);
    r.boundary = -boundary_field_term(tg, u) * tg.u[tg.steps];
    r.value = r.stochastic + r.temporal + r.boundary;
    return r;
}

VariationResult first_variation_uinv(const TransportGrid& tg, const ProcessGrid& pg,
                                     const Direction& u) {
    const std::vector<CMat> x = strat_prefix(pg, *tg.path, u);
    VariationResult r;
    r.stochastic = x[tg.steps] * tg.uinv[tg.steps];
    r.temporal = CMat::Zero(pg.n, pg.n);
    r.boundary = tg.uinv[tg.steps] * boundary_field_term(tg, u);
    r.value = r.stochastic + r.temporal + r.boundary;
    return r;
}

VariationResult second_variation_u(const TransportGrid& tg, const ProcessGrid& pg,
                                   const Direction& u, const Direction& v) {
    require_endpoint_zero(u, "second_variation_u");
    require_endpoint_zero(v, "second_variation_u");
    if (!pg.has_j) throw std::invalid_argument("second_variation_u: J grid missing");
    const BrownianPath& path = *tg.path;
    const int m = pg.steps;

    const std::vector<CMat> xu = strat_prefix(pg, path, u);
    const std::vector<CMat> xv = strat_prefix(pg, path, v);
    CMat t12 = CMat::Zero(pg.n, pg.n);
    for (int i = 0; i < m; ++i) {
        const CMat du = xu[i + 1] - xu[i];
        const CMat dv = xv[i + 1] - xv[i];
        const CMat au = 0.5 * (xu[i] + xu[i + 1]);
        const CMat av = 0.5 * (xv[i] + xv[i + 1]);
        t12 += du * av + dv * au;
    }

    VariationResult r;
    r.stochastic = tg.u[m] * (t12 - symmetrized_j_term(pg, path, u, v));
    r.temporal = -tg.u[m] * l_time_term(pg, path, u, v);
    r.boundary = CMat::Zero(pg.n, pg.n);
    r.value = r.stochastic + r.temporal + r.boundary;
    return r;
}

CMat b_apply(const TransportGrid& tg, const ProcessGrid& pg, const Direction& u) {
    const std::vector<CMat> x = strat_prefix(pg, *tg.path, u);
    CMat b = -x[tg.steps];
    const CMat bf = boundary_field_term(tg, u);
    if (bf.squaredNorm() != 0.0) b -= tg.uinv[tg.steps] * bf * tg.u[tg.steps];
    return b;
}

CMat b_variation(const TransportGrid& tg, const ProcessGrid& pg,
                 const Direction& u, const Direction& v) {
    require_endpoint_zero(u, "b_variation");
    require_endpoint_zero(v, "b_variation");
    if (!pg.has_j) throw std::invalid_argument("b_variation: J grid missing");
    const BrownianPath& path = *tg.path;
    const int m = pg.steps;

    const std::vector<CMat> xu = strat_prefix(pg, path, u);
    const std::vector<CMat> xv = strat_prefix(pg, path, v);
    CMat comm = CMat::Zero(pg.n, pg.n);
    for (int i = 0; i < m; ++i) {
        const CMat dv = xv[i + 1] - xv[i];
        const CMat au = 0.5 * (xu[i] + xu[i + 1]);
        comm += dv * au - au * dv;
    }
    return comm - symmetrized_j_term(pg, path, u, v) - l_time_term(pg, path, u, v);
}

CMat malliavin_kernel_z(const TransportGrid& tg, int nu, int t_index, int s_index) {
    const ConnectionField& field = *tg.field;
    const BrownianPath& path = *tg.path;
    const int d = field.dim();
    const int n = field.rank();
    if (s_index > t_index) return CMat::Zero(n, n);

    Coord y{};
    FieldJacobian jac;
    // P_mu(r) = U(r)^{-1} (d_nu A_mu)(x + b_r) U(r)
    const auto p_row = [&](int r, std::array<CMat, kMaxDim>& p) {
        for (int la = 0; la < d; ++la) y[la] = tg.x[la] + path.at(r, la);
        field.deval(y, jac);
        for (int mu = 0; mu < d; ++mu) p[mu] = tg.uinv[r] * jac.d[mu][nu] * tg.u[r];
    };
    std::array<CMat, kMaxDim> p0, p1;
    p_row(s_index, p0);
    CMat inner = CMat::Zero(n, n);
    for (int r = s_index; r < t_index; ++r) {
        p_row(r + 1, p1);
        for (int mu = 0; mu < d; ++mu)
            inner += (0.5 * path.incr(r, mu)) * (p0[mu] + p1[mu]);
        p0.swap(p1);
    }

    for (int la = 0; la < d; ++la) y[la] = tg.x[la] + path.at(s_index, la);
    FieldSample a;
    field.eval(y, a);
    return -tg.u[t_index] * tg.uinv[s_index] * a.a[nu] * tg.u[s_index] -
           tg.u[t_index] * inner;
}

CMat malliavin_reconstruct(const TransportGrid& tg, const Direction& u) {
    const ConnectionField& field = *tg.field;
    const BrownianPath& path = *tg.path;
    const int d = field.dim();
    const int n = field.rank();
    const int m = tg.steps;

    Coord y{};
    FieldJacobian jac;
    FieldSample a;
    // p[nu][mu](r) = U(r)^{-1} (d_nu A_mu)(x + b_r) U(r)
    using PRow = std::array<std::array<CMat, kMaxDim>, kMaxDim>;
    const auto p_row = [&](int r, PRow& p) {
        for (int la = 0; la < d; ++la) y[la] = tg.x[la] + path.at(r, la);
        field.deval(y, jac);
        for (int nu = 0; nu < d; ++nu)
            for (int mu = 0; mu < d; ++mu)
                p[nu][mu] = tg.uinv[r] * jac.d[mu][nu] * tg.u[r];
    };

    // backward suffix q_nu(r) = int_r^1 U^{-1}(d_nu A_mu)U o db^mu, then
    // g(r) = sum_nu (U(r)^{-1} A_nu(x+b_r) U(r) + q_nu(r)) udot^nu(t_r)
    std::vector<CMat> g(m + 1);
    std::array<CMat, kMaxDim> q;
    for (int nu = 0; nu < d; ++nu) q[nu] = CMat::Zero(n, n);
    PRow hi, lo;
    p_row(m, hi);
    double ud[kMaxDim];
    const auto emit = [&](int r) {
        for (int la = 0; la < d; ++la) y[la] = tg.x[la] + path.at(r, la);
        field.eval(y, a);
        u.udot(path.t(r), ud);
        CMat acc = CMat::Zero(n, n);
        for (int nu = 0; nu < d; ++nu)
            if (ud[nu] != 0.0)
                acc += ud[nu] * CMat(tg.uinv[r] * a.a[nu] * tg.u[r] + q[nu]);
        g[r] = acc;
    };
    emit(m);
    for (int r = m - 1; r >= 0; --r) {
        p_row(r, lo);
        for (int nu = 0; nu < d; ++nu)
            for (int mu = 0; mu < d; ++mu)
                q[nu] += (0.5 * path.incr(r, mu)) * (lo[nu][mu] + hi[nu][mu]);
        emit(r);
        hi.swap(lo);
    }
    return -tg.u[m] * time_integral(g, path.dt());
}

BrownianPath shift_path(const BrownianPath& path, const Direction& u, double eps) {
    if (u.d != path.d) throw std::invalid_argument("shift_path: dimension mismatch");
    BrownianPath q = path;
    double uv[kMaxDim];
    for (int i = 0; i <= path.steps; ++i) {
        u.u(path.t(i), uv);
        for (int mu = 0; mu < path.d; ++mu) q.at(i, mu) += eps * uv[mu];
    }
    return q;
}

namespace {

CMat central_diff_u(const ConnectionField& field, const Coord& x, const BrownianPath& path,
                    Scheme scheme, const Direction& u, double eps, bool inverse) {
    const BrownianPath pp = shift_path(path, u, eps);
    const BrownianPath pm = shift_path(path, u, -eps);
    const TransportGrid tp = solve_transport(field, x, pp, scheme);
    const TransportGrid tm = solve_transport(field, x, pm, scheme);
    const CMat& up = inverse ? tp.uinv[path.steps] : tp.u[path.steps];
    const CMat& um = inverse ? tm.uinv[path.steps] : tm.u[path.steps];
    return (up - um) / (2.0 * eps);
}

bool richardson_agrees(const CMat& full, const CMat& half) {
    return frob_norm(full - half) <= std::max(2e-4 * frob_norm(half), 1e-9);
}

}  // namespace

CMat fd_variation_oracle(const ConnectionField& field, const Coord& x,
                         const BrownianPath& path, Scheme scheme, const Direction& u,
                         double eps, bool* richardson_ok) {
    const CMat full = central_diff_u(field, x, path, scheme, u, eps, false);
    if (richardson_ok) {
        const CMat half = central_diff_u(field, x, path, scheme, u, 0.5 * eps, false);
        *richardson_ok = richardson_agrees(full, half);
    }
    return full;
}

CMat fd_variation_uinv_oracle(const ConnectionField& field, const Coord& x,
                              const BrownianPath& path, Scheme scheme, const Direction& u,
                              double eps, bool* richardson_ok) {
    const CMat full = central_diff_u(field, x, path, scheme, u, eps, true);
    if (richardson_ok) {
        const CMat half = central_diff_u(field, x, path, scheme, u, 0.5 * eps, true);
        *richardson_ok = richardson_agrees(full, half);
    }
    return full;
}

CMat fd_second_variation_oracle(const ConnectionField& field, const Coord& x,
                                const BrownianPath& path, Scheme scheme,
                                const Direction& u, const Direction& v, double eps) {
    const int m = path.steps;
    const auto solve_at = [&](double su, double sv) {
        const BrownianPath p = shift_path(shift_path(path, u, su), v, sv);
        return solve_transport(field, x, p, scheme).u[m];
    };
    const CMat pp = solve_at(eps, eps);
    const CMat pm = solve_at(eps, -eps);
    const CMat mp = solve_at(-eps, eps);
    const CMat mm = solve_at(-eps, -eps);
    return (pp - pm - mp + mm) / (4.0 * eps * eps);
}

CMat fd_b_variation_oracle(const ConnectionField& field, const Coord& x,
                          const BrownianPath& path, Scheme scheme,
                          const Direction& u, const Direction& v, double eps) {
    const auto b_at = [&](double s) {
        const BrownianPath p = shift_path(path, u, s);
        const TransportGrid tg = solve_transport(field, x, p, scheme);
        const ProcessGrid pg = process_grids(tg, false);
        return b_apply(tg, pg, v);
    };
    return (b_at(eps) - b_at(-eps)) / (2.0 * eps);
}

}  // namespace levyt
