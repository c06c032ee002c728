#include "levyt/levyops.hpp"

namespace levyt {

namespace {

// Per-direction increment contractions shared by every mode:
//   dlo(mu, i) = sum_la L_mula(i)   db^la_i,  dhi: right endpoint,
//   jlo(mu, i) = sum_la J_mumula(i) db^la_i,  jhi: right endpoint.
void contraction_rows(const ProcessGrid& pg, const BrownianPath& path, bool with_j,
                      MatStore& dlo, MatStore& dhi, MatStore& jlo, MatStore& jhi) {
    const int d = pg.d, m = pg.steps;
    const std::size_t cnt = std::size_t(d) * m;
    dlo.init(cnt, pg.n);
    dhi.init(cnt, pg.n);
    if (with_j) {
        jlo.init(cnt, pg.n);
        jhi.init(cnt, pg.n);
    }
    for (int mu = 0; mu < d; ++mu)
        for (int i = 0; i < m; ++i) {
            const std::size_t ix = std::size_t(mu) * m + i;
            auto a = dlo.at(ix);
            auto b = dhi.at(ix);
            for (int la = 0; la < d; ++la) {
                const double w = path.incr(i, la);
                a += w * pg.lat(i, mu, la);
                b += w * pg.lat(i + 1, mu, la);
                if (with_j) {
                    jlo.at(ix) += w * pg.jat(i, mu, mu, la);
                    jhi.at(ix) += w * pg.jat(i + 1, mu, mu, la);
                }
            }
        }
}

}  // namespace

ModeCache::ModeCache(const TransportGrid& tg, const ProcessGrid& pg, int n_max,
                     bool with_s_rows) {
    if (n_max < 1) throw std::invalid_argument("ModeCache: mode count must be positive");
    if (!pg.has_j) throw std::invalid_argument("ModeCache: J grid missing");
    if (with_s_rows && pg.d != 3)
        throw std::invalid_argument("ModeCache: antisymmetric contraction needs dimension 3");
    n_max_ = n_max;
    d_ = pg.d;
    nn_ = pg.n;
    with_s_ = with_s_rows;
    u_final_ = tg.u[tg.steps];

    const BrownianPath& path = *tg.path;
    const int m = pg.steps;
    const double dt = path.dt();
    MatStore dlo, dhi, jlo, jhi;
    contraction_rows(pg, path, true, dlo, dhi, jlo, jhi);

    const std::size_t total = std::size_t(n_max_) * d_;
    second_.resize(total);
    bder_.resize(total);
    pairing_.resize(total);
    if (with_s_) sterm_.resize(total);

    std::vector<double> h(m + 1);
    CMat x(nn_, nn_), dx(nn_, nn_), av(nn_, nn_), p(nn_, nn_);
    CMat t12(nn_, nn_), comm(nn_, nn_), i3(nn_, nn_);
    CMat sacc(nn_, nn_), gprev(nn_, nn_), g(nn_, nn_);
    for (int k = 1; k <= n_max_; ++k) {
        for (int i = 0; i <= m; ++i) h[i] = sine_mode(k, path.t(i));
        for (int mu = 0; mu < d_; ++mu) {
            const std::size_t base = std::size_t(mu) * m;
            x.setZero();
            t12.setZero();
            comm.setZero();
            i3.setZero();
            const int sa = (mu + 1) % 3, sb = (mu + 2) % 3;
            if (with_s_) {
                sacc.setZero();
                gprev.setZero();  // h_k(0) = 0 and the prefix starts at zero
            }
            for (int i = 0; i < m; ++i) {
                dx = (0.5 * h[i]) * dlo.at(base + i) + (0.5 * h[i + 1]) * dhi.at(base + i);
                av = x + 0.5 * dx;
                p.noalias() = dx * av;
                t12 += p;
                comm += p;
                comm.noalias() -= av * dx;
                i3 += (0.5 * h[i] * h[i]) * jlo.at(base + i) +
                      (0.5 * h[i + 1] * h[i + 1]) * jhi.at(base + i);
                x += dx;
                if (with_s_) {
                    const auto lab = pg.lat(i + 1, sa, sb);
                    g = (2.0 * h[i + 1] * h[i + 1]) * pg.jat(i + 1, mu, sa, sb);
                    g.noalias() -= (2.0 * h[i + 1]) * (lab * x);
                    g.noalias() += (2.0 * h[i + 1]) * (x * lab);
                    sacc += (0.5 * dt) * (gprev + g);
                    gprev.swap(g);
                }
            }
            const std::size_t ix = idx(k, mu);
            second_[ix] = u_final_ * CMat(2.0 * t12 - i3);
            bder_[ix] = comm - i3;
            pairing_[ix] = -(x * x).trace();
            if (with_s_) sterm_[ix] = sacc;
        }
    }
}

std::vector<Complex> mode_pairings(const ProcessGrid& pg, const BrownianPath& path,
                                   int n_max) {
    if (n_max < 1) throw std::invalid_argument("mode_pairings: mode count must be positive");
    const int m = pg.steps, d = pg.d;
    MatStore dlo, dhi, junused;
    contraction_rows(pg, path, false, dlo, dhi, junused, junused);
    std::vector<Complex> out(std::size_t(n_max) * d);
    std::vector<double> h(m + 1);
    CMat x(pg.n, pg.n);
    for (int k = 1; k <= n_max; ++k) {
        for (int i = 0; i <= m; ++i) h[i] = sine_mode(k, path.t(i));
        for (int mu = 0; mu < d; ++mu) {
            const std::size_t base = std::size_t(mu) * m;
            x.setZero();
            for (int i = 0; i < m; ++i)
                x += (0.5 * h[i]) * dlo.at(base + i) + (0.5 * h[i + 1]) * dhi.at(base + i);
            out[std::size_t(k - 1) * d + mu] = -(x * x).trace();
        }
    }
    return out;
}

std::size_t ModeCache::idx(int k, int mu) const {
    if (k < 1 || k > n_max_ || mu < 0 || mu >= d_)
        throw std::invalid_argument("ModeCache: mode index out of range");
    return std::size_t(k - 1) * d_ + mu;
}

const CMat& ModeCache::s_term(int k, int mu) const {
    if (!with_s_) throw std::invalid_argument("ModeCache: s rows were not tabulated");
    return sterm_[idx(k, mu)];
}

namespace {

void check_partial_n(const ModeCache& c, int n) {
    if (n < 1 || n > c.n_max())
        throw std::invalid_argument("partial sum: mode count outside the cached range");
}

}  // namespace

CMat laplacian_partial(const ModeCache& cache, int n) {
    check_partial_n(cache, n);
    CMat acc = CMat::Zero(cache.matrix_size(), cache.matrix_size());
    for (int k = 1; k <= n; ++k)
        for (int mu = 0; mu < cache.dim(); ++mu) acc += cache.second_u(k, mu);
    return (1.0 / n) * acc;
}

CMat divergence_partial(const ModeCache& cache, int n) {
    check_partial_n(cache, n);
    CMat acc = CMat::Zero(cache.matrix_size(), cache.matrix_size());
    for (int k = 1; k <= n; ++k)
        for (int mu = 0; mu < cache.dim(); ++mu) acc += cache.b_derivative(k, mu);
    return (1.0 / n) * acc;
}

CMat dalembertian_partial(const ModeCache& cache, int n) {
    if (cache.dim() < 2)
        throw std::invalid_argument("dalembertian_partial: needs at least two dimensions");
    check_partial_n(cache, n);
    CMat acc = CMat::Zero(cache.matrix_size(), cache.matrix_size());
    for (int k = 1; k <= n; ++k) {
        acc += cache.second_u(k, 0);
        for (int mu = 1; mu < cache.dim(); ++mu) acc -= cache.second_u(k, mu);
    }
    return (1.0 / n) * acc;
}

CMat s_divergence_partial(const ModeCache& cache, int n) {
    check_partial_n(cache, n);
    CMat acc = CMat::Zero(cache.matrix_size(), cache.matrix_size());
    for (int k = 1; k <= n; ++k)
        for (int mu = 0; mu < cache.dim(); ++mu) acc += cache.s_term(k, mu);
    return (1.0 / n) * acc;
}

CMat laplacian_closed(const TransportGrid& tg, const ProcessGrid& pg) {
    if (!pg.has_j) throw std::invalid_argument("laplacian_closed: J grid missing");
    const BrownianPath& path = *tg.path;
    const int m = pg.steps, n = pg.n, d = pg.d;
    std::vector<CMat> rows(m + 1);
    for (int i = 0; i <= m; ++i) {
        CMat acc = CMat::Zero(n, n);
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu)
                if (mu != nu) acc += pg.lat(i, mu, nu) * pg.lat(i, mu, nu);
        rows[i] = acc;
    }
    CMat core = time_integral(rows, path.dt());
    for (int nu = 0; nu < d; ++nu) {
        for (int i = 0; i <= m; ++i) rows[i] = j_div_contraction(pg, i, nu);
        core -= strat_integral(rows, path, nu);
    }
    return tg.u[m] * core;
}

namespace {

CMat divergence_closed_impl(const ProcessGrid& pg, const BrownianPath& path, bool strat) {
    if (!pg.has_j) throw std::invalid_argument("divergence_closed: J grid missing");
    std::vector<CMat> rows(pg.steps + 1);
    CMat acc = CMat::Zero(pg.n, pg.n);
    for (int nu = 0; nu < pg.d; ++nu) {
        for (int i = 0; i <= pg.steps; ++i) rows[i] = j_div_contraction(pg, i, nu);
        acc += strat ? strat_integral(rows, path, nu) : ito_integral(rows, path, nu);
    }
    return -acc;
}

}  // namespace

CMat divergence_closed(const ProcessGrid& pg, const BrownianPath& path) {
    return divergence_closed_impl(pg, path, false);
}

CMat divergence_closed_strat(const ProcessGrid& pg, const BrownianPath& path) {
    return divergence_closed_impl(pg, path, true);
}

CMat s_divergence_closed(const ProcessGrid& pg, double dt) {
    if (!pg.has_j) throw std::invalid_argument("s_divergence_closed: J grid missing");
    if (pg.d != 3)
        throw std::invalid_argument("s_divergence_closed: needs dimension 3");
    std::vector<CMat> rows(pg.steps + 1);
    for (int i = 0; i <= pg.steps; ++i)
        rows[i] = 2.0 * CMat(pg.jat(i, 0, 1, 2) + pg.jat(i, 1, 2, 0) + pg.jat(i, 2, 0, 1));
    return time_integral(rows, dt);
}

}  // namespace levyt
