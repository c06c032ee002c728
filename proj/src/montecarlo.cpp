#include "levyt/montecarlo.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace levyt {

namespace {

double sq(double v) { return v * v; }

struct PathWork {
    BrownianPath path;
    TransportGrid tg;
    ProcessGrid pg;
    PathWork(const ConnectionField& f, const ExperimentConfig& cfg, std::uint64_t seed,
             bool with_j)
        : path(sample_path(seed, cfg.steps, f.dim())) {
        tg = solve_transport(f, cfg.base_point(), path, cfg.scheme);
        pg = process_grids(tg, with_j);
    }
};

// sqrt of a mean-of-squares column with a delta-method error bar
SweepPoint rms_point(int n, const ScalarEstimate& msq) {
    SweepPoint p;
    p.n = n;
    p.rms = msq.mean > 0.0 ? std::sqrt(msq.mean) : 0.0;
    p.stderr_ = p.rms > 0.0 ? msq.stderr_ / (2.0 * p.rms) : 0.0;
    return p;
}

// -sum tr(F_munu F_munu) at a point, evaluated straight off the field
double action_density(const ConnectionField& field, const Coord& y, CurvatureAtPoint& f) {
    curvature(field, y, f);
    double v = 0.0;
    for (int mu = 0; mu < field.dim(); ++mu)
        for (int nu = 0; nu < field.dim(); ++nu)
            if (mu != nu) v -= (f.f[mu][nu] * f.f[mu][nu]).trace().real();
    return v;
}

}  // namespace

Coord ExperimentConfig::base_point() const {
    Coord p{};
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i];
    return p;
}

std::unique_ptr<ConnectionField> ExperimentConfig::validate() const {
    auto field = make_connection(family);
    if (steps < 2 || steps > (1 << 22))
        throw std::invalid_argument("config: steps must lie in [2, 2^22]");
    if (paths < 1 || paths > 2000000)
        throw std::invalid_argument("config: paths must lie in [1, 2e6]");
    if (modes.empty()) throw std::invalid_argument("config: modes list is empty");
    int prev = 0;
    for (int n : modes) {
        if (n <= prev)
            throw std::invalid_argument("config: modes must be positive and increasing");
        prev = n;
    }
    if (modes.back() > 4096) throw std::invalid_argument("config: mode cap is 4096");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("config: epsilon must be positive");
    if (workers < 0 || workers > 512)
        throw std::invalid_argument("config: workers must lie in [0, 512]");
    if (!(proposal_sigma > 0.0) || !std::isfinite(proposal_sigma))
        throw std::invalid_argument("config: proposal width must be positive");
    if (!x.empty() && x.size() != std::size_t(field->dim()))
        throw std::invalid_argument("config: base point size differs from the field dimension");
    for (double c : x)
        if (!std::isfinite(c)) throw std::invalid_argument("config: base point must be finite");
    return field;
}

std::vector<std::vector<double>> ensemble_rows(
    int paths, std::uint64_t master_seed, int workers,
    const std::function<std::vector<double>(int, std::uint64_t)>& fn) {
    if (paths < 1) throw std::invalid_argument("ensemble_rows: need at least one path");
    std::vector<std::vector<double>> rows(paths);
    std::vector<std::exception_ptr> errors(paths);
    int w = workers > 0 ? workers : int(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    w = std::min(w, paths);

    std::atomic<int> cursor{0};
    const auto work = [&]() {
        for (int i = cursor.fetch_add(1); i < paths; i = cursor.fetch_add(1)) {
            try {
                rows[i] = fn(i, stable_hash(master_seed, std::uint64_t(i)));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (w == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(w);
        for (int i = 0; i < w; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < paths; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return rows;
}

ScalarEstimate column_estimate(const std::vector<std::vector<double>>& rows,
                               std::size_t col) {
    ScalarEstimate e;
    e.paths = int(rows.size());
    if (rows.empty()) return e;
    double acc = 0.0;
    for (const auto& r : rows) acc += r.at(col);
    e.mean = acc / double(rows.size());
    if (rows.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rows) ss += sq(r.at(col) - e.mean);
        e.stderr_ = std::sqrt(ss / (double(rows.size() - 1) * double(rows.size())));
    }
    return e;
}

ScalarEstimate mc_run(const std::string& functional, const ExperimentConfig& cfg) {
    auto field = cfg.validate();
    const int d = field->dim();
    std::function<std::vector<double>(int, std::uint64_t)> fn;
    if (functional == "one") {
        fn = [](int, std::uint64_t) { return std::vector<double>{1.0}; };
    } else if (functional == "endpoint_coordinate") {
        fn = [&, d](int, std::uint64_t s) {
            const BrownianPath p = sample_path(s, cfg.steps, d);
            return std::vector<double>{p.at(cfg.steps, 0)};
        };
    } else if (functional == "mode_square") {
        fn = [&, d](int, std::uint64_t s) {
            const BrownianPath p = sample_path(s, cfg.steps, d);
            double acc = 0.0;
            for (int i = 0; i < cfg.steps; ++i)
                acc += 0.5 * (sine_mode(1, p.t(i)) + sine_mode(1, p.t(i + 1))) *
                       p.incr(i, 0);
            return std::vector<double>{acc * acc};
        };
    } else if (functional == "transport_trace_re") {
        fn = [&](int, std::uint64_t s) {
            const PathWork w(*field, cfg, s, false);
            return std::vector<double>{w.tg.u[cfg.steps].trace().real()};
        };
    } else {
        throw std::invalid_argument("mc_run: unknown functional '" + functional + "'");
    }
    return column_estimate(ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn), 0);
}

namespace {

SweepSummary operator_sweep(const ExperimentConfig& cfg, bool divergence) {
    auto field = cfg.validate();
    const auto fn = [&](int, std::uint64_t seed) {
        const PathWork w(*field, cfg, seed, true);
        const ModeCache mc(w.tg, w.pg, cfg.mode_max());
        const CMat closed = divergence ? divergence_closed(w.pg, w.path)
                                       : laplacian_closed(w.tg, w.pg);
        std::vector<double> row;
        row.reserve(cfg.modes.size() + 1);
        for (int n : cfg.modes) {
            const CMat part =
                divergence ? divergence_partial(mc, n) : laplacian_partial(mc, n);
            row.push_back(CMat(part - closed).squaredNorm());
        }
        row.push_back(closed.squaredNorm());
        return row;
    };
    const auto rows = ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn);
    SweepSummary s;
    s.paths = cfg.paths;
    for (std::size_t j = 0; j < cfg.modes.size(); ++j)
        s.points.push_back(rms_point(cfg.modes[j], column_estimate(rows, j)));
    const SweepPoint cp = rms_point(0, column_estimate(rows, cfg.modes.size()));
    s.closed_rms = cp.rms;
    s.closed_stderr = cp.stderr_;
    return s;
}

}  // namespace

SweepSummary theorem1_sweep(const ExperimentConfig& cfg) {
    return operator_sweep(cfg, false);
}

SweepSummary divergence_sweep(const ExperimentConfig& cfg) {
    return operator_sweep(cfg, true);
}

EquivalenceReport ym_equivalence_report(const ExperimentConfig& cfg) {
    auto field = cfg.validate();
    const int nmax = cfg.mode_max();
    const auto fn = [&](int, std::uint64_t seed) {
        const PathWork w(*field, cfg, seed, true);
        const ModeCache mc(w.tg, w.pg, nmax);
        return std::vector<double>{divergence_partial(mc, nmax).squaredNorm(),
                                   divergence_closed(w.pg, w.path).squaredNorm()};
    };
    const auto rows = ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn);
    EquivalenceReport r;
    r.partial_sq = column_estimate(rows, 0);
    r.closed_sq = column_estimate(rows, 1);
    const int d = field->dim();
    const int nodes = d <= 2 ? 40 : (d == 3 ? 16 : 10);
    const int t_points = d <= 2 ? 96 : 48;
    r.quadrature =
        heat_kernel_divergence_quadrature(*field, cfg.base_point(), t_points, nodes);
    return r;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_hermite: order out of range");
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(i / 2.0);
        t(i, i - 1) = b;
        t(i - 1, i) = b;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    std::vector<double> z(n), w(n);
    const double spi = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        z[i] = es.eigenvalues()(i);
        w[i] = spi * sq(es.eigenvectors()(0, i));
    }
    return {z, w};
}

double heat_kernel_divergence_quadrature(const ConnectionField& field, const Coord& x,
                                         int t_points, int hermite_nodes) {
    if (t_points < 1)
        throw std::invalid_argument("heat_kernel_quadrature: need a time grid");
    const int d = field.dim();
    const auto [z, w] = gauss_hermite(hermite_nodes);
    std::array<CMat, kMaxDim> res;
    const auto density = [&](const Coord& y) {
        ym_residual(field, y, res);
        double acc = 0.0;
        for (int nu = 0; nu < d; ++nu) acc += res[nu].squaredNorm();
        return acc;
    };
    const double wnorm = std::pow(std::numbers::pi, -0.5 * d);
    const auto spatial = [&](double t) {
        if (t == 0.0) return density(x);
        const double s = std::sqrt(2.0 * t);
        std::array<int, kMaxDim> ix{};
        double acc = 0.0;
        while (true) {
            double ww = 1.0;
            Coord y = x;
            for (int mu = 0; mu < d; ++mu) {
                ww *= w[ix[mu]];
                y[mu] += s * z[ix[mu]];
            }
            acc += ww * density(y);
            int mu = 0;
            while (mu < d && ++ix[mu] == hermite_nodes) {
                ix[mu] = 0;
                ++mu;
            }
            if (mu == d) break;
        }
        return wnorm * acc;
    };
    const double dt = 1.0 / t_points;
    double acc = 0.0, prev = spatial(0.0);
    for (int j = 1; j <= t_points; ++j) {
        const double next = spatial(j * dt);
        acc += 0.5 * dt * (prev + next);
        prev = next;
    }
    return acc;
}

Prop6Report prop6_check(const ExperimentConfig& cfg) {
    auto field = cfg.validate();
    const int nmax = cfg.mode_max();
    const int d = field->dim();
    const auto fn = [&](int, std::uint64_t seed) {
        const PathWork w(*field, cfg, seed, false);
        const auto pair = mode_pairings(w.pg, w.path, nmax);
        Complex lhs(0, 0);
        for (const Complex& c : pair) lhs += c;
        lhs /= double(nmax);

        CurvatureAtPoint f;
        const double dt = w.path.dt();
        const auto dens = [&](int i) {
            Coord y = cfg.base_point();
            for (int mu = 0; mu < d; ++mu) y[mu] += w.path.at(i, mu);
            return action_density(*field, y, f);
        };
        double acc = 0.0, prev = dens(0);
        for (int i = 0; i < cfg.steps; ++i) {
            const double next = dens(i + 1);
            acc += 0.5 * dt * (prev + next);
            prev = next;
        }
        return std::vector<double>{lhs.real(), std::abs(lhs.imag()), acc,
                                   lhs.real() - acc};
    };
    const auto rows = ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn);
    Prop6Report r;
    r.lhs = column_estimate(rows, 0);
    r.rhs = column_estimate(rows, 2);
    r.diff = column_estimate(rows, 3);
    for (const auto& row : rows) r.max_imag = std::max(r.max_imag, row[1]);
    return r;
}

LemmaCurve lemma_decay_check(int lemma, const ExperimentConfig& cfg,
                             const std::vector<int>& n_values) {
    if (lemma < 1 || lemma > 4)
        throw std::invalid_argument("lemma_decay_check: lemma must be 1..4");
    if (n_values.empty())
        throw std::invalid_argument("lemma_decay_check: empty mode list");
    int prev = 0;
    for (int n : n_values) {
        if (n <= prev)
            throw std::invalid_argument("lemma_decay_check: mode list must increase");
        prev = n;
    }
    auto field = cfg.validate();
    if (field->dim() < 2)
        throw std::invalid_argument("lemma_decay_check: needs at least two dimensions");
    const int nmax = n_values.back();

    const auto fn = [&](int, std::uint64_t seed) {
        const PathWork w(*field, cfg, seed, true);
        const int m = cfg.steps, d = field->dim(), nn = field->rank();
        const double dt = w.path.dt();
        std::vector<CMat> hrow(m);  // sum_mu L_{mu,(mu+1)%d}(i) db^mu_i
        for (int i = 0; i < m; ++i) {
            CMat acc = CMat::Zero(nn, nn);
            for (int mu = 0; mu < d; ++mu)
                acc += w.path.incr(i, mu) * w.pg.lat(i, mu, (mu + 1) % d);
            hrow[i] = acc;
        }
        const auto kproc = [&](int i) { return w.pg.jat(i, 0, 0, 1); };
        const auto rproc = [&](int i) { return w.pg.jat(i, 1, 0, 1); };

        std::vector<double> h(m + 1), row(n_values.size());
        CMat run = CMat::Zero(nn, nn);
        CMat ph(nn, nn), pt(nn, nn), ck(nn, nn), gprev(nn, nn), gnext(nn, nn);
        std::size_t out = 0;
        for (int k = 1; k <= nmax; ++k) {
            for (int i = 0; i <= m; ++i) h[i] = sine_mode(k, w.path.t(i));
            ph.setZero();
            pt.setZero();
            ck.setZero();
            gprev.setZero();
            for (int i = 0; i < m; ++i) {
                switch (lemma) {
                    case 1:
                        ck.noalias() += h[i] * (ph * hrow[i]);
                        ph += h[i] * hrow[i];
                        break;
                    case 2:
                        ck.noalias() += h[i] * (pt * hrow[i]);
                        pt += (0.5 * dt) * (h[i] * kproc(i) + h[i + 1] * kproc(i + 1));
                        break;
                    case 3:
                        ph += h[i] * hrow[i];
                        gnext.noalias() = h[i + 1] * (ph * kproc(i + 1));
                        ck += (0.5 * dt) * (gprev + gnext);
                        gprev.swap(gnext);
                        break;
                    default:
                        pt += (0.5 * dt) * (h[i] * rproc(i) + h[i + 1] * rproc(i + 1));
                        gnext.noalias() = h[i + 1] * (pt * kproc(i + 1));
                        ck += (0.5 * dt) * (gprev + gnext);
                        gprev.swap(gnext);
                        break;
                }
            }
            run += ck;
            if (out < n_values.size() && k == n_values[out]) {
                row[out] = CMat(run / double(k)).squaredNorm();
                ++out;
            }
        }
        return row;
    };
    const auto rows = ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn);
    LemmaCurve c;
    c.lemma = lemma;
    c.n_values = n_values;
    c.paths = cfg.paths;
    for (std::size_t j = 0; j < n_values.size(); ++j) {
        const SweepPoint p = rms_point(n_values[j], column_estimate(rows, j));
        c.l2.push_back(p.rms);
        c.stderr_.push_back(p.stderr_);
    }
    return c;
}

ActionReport action_functional_check(const ExperimentConfig& cfg) {
    auto field = cfg.validate();
    if (cfg.family.name != "bpst" && cfg.family.name != "zero")
        throw std::invalid_argument(
            "action_functional_check: family action density is not integrable");
    const int d = field->dim();
    const int nmax = cfg.mode_max();
    const double sig = cfg.proposal_sigma;
    const auto fn = [&](int, std::uint64_t seed) {
        std::mt19937_64 rng(stable_hash(seed, 0x51));
        std::normal_distribution<double> gauss(0.0, sig);
        Coord site{};
        double q2 = 0.0;
        for (int mu = 0; mu < d; ++mu) {
            site[mu] = gauss(rng);
            q2 += sq(site[mu]);
        }
        const double weight = std::pow(2.0 * std::numbers::pi * sig * sig, 0.5 * d) *
                              std::exp(q2 / (2.0 * sig * sig));
        const BrownianPath path = sample_path(stable_hash(seed, 0x52), cfg.steps, d);
        const TransportGrid tg = solve_transport(*field, site, path, cfg.scheme);
        const ProcessGrid pg = process_grids(tg, false);
        const auto pair = mode_pairings(pg, path, nmax);
        Complex lhs(0, 0);
        for (const Complex& c : pair) lhs += c;
        lhs /= double(nmax);
        CurvatureAtPoint f;
        return std::vector<double>{weight * lhs.real(),
                                   weight * action_density(*field, site, f)};
    };
    const auto rows = ensemble_rows(cfg.paths, cfg.seed, cfg.workers, fn);
    ActionReport r;
    r.lhs = column_estimate(rows, 0);
    r.density_is = column_estimate(rows, 1);
    r.quadrature =
        cfg.family.name == "zero" ? 0.0 : instanton_action_quadrature(cfg.family.rho);
    return r;
}

double instanton_action_quadrature(double rho) {
    if (!(rho > 0.0))
        throw std::invalid_argument("instanton_action_quadrature: rho must be positive");
    // -tr(F F) dx over R^4 reduces to 2 pi^2 int 96 rho^4 r^3 (r^2+rho^2)^-4 dr;
    // substitute r = rho u/(1-u) and integrate with a Simpson rule.
    const auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double r = rho * u / (1.0 - u);
        const double s = r * r + rho * rho;
        const double dr = rho / sq(1.0 - u);
        return 96.0 * rho * rho * rho * rho * r * r * r / (s * s * s * s) * dr;
    };
    const int n = 4096;
    const double du = 1.0 / n;
    double acc = g(0.0) + g(1.0);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(i * du);
    return 2.0 * std::numbers::pi * std::numbers::pi * acc * du / 3.0;
}

CalibrationResult calibration_check(std::uint64_t master_seed, int trials, int paths,
                                    int steps) {
    if (trials < 1 || paths < 2 || steps < 2)
        throw std::invalid_argument("calibration_check: sizes must allow error bars");
    // One-mode pairing for the constant abelian field: both direction sums are
    // independent Gaussians of variance cos^2(pi/(2 steps)), exactly, so the
    // discrete mean is known in closed form and the whole pipeline is cheap.
    ExperimentConfig cfg;
    cfg.family.name = "constant_abelian";
    cfg.family.f = 1.0;
    cfg.steps = steps;
    auto field = make_connection(cfg.family);
    const double c = std::cos(0.5 * std::numbers::pi / steps);
    const double exact = 2.0 * c * c;

    CalibrationResult r;
    r.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t ms = stable_hash(master_seed, std::uint64_t(t));
        const auto rows = ensemble_rows(paths, ms, 0, [&](int, std::uint64_t s) {
            const PathWork w(*field, cfg, s, false);
            const auto pair = mode_pairings(w.pg, w.path, 1);
            return std::vector<double>{pair[0].real() + pair[1].real()};
        });
        const ScalarEstimate e = column_estimate(rows, 0);
        if (std::abs(e.mean - exact) <= 3.0 * e.stderr_) ++r.covered;
    }
    return r;
}

}  // namespace levyt
