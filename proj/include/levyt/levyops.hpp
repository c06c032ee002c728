#pragma once

#include "levyt/transport.hpp"

#include <vector>

// Cesàro-mean differential operators over the mode directions u = p_mu h_k.
// Partial sums average per-mode derivative addends computed once into a cache;
// closed forms integrate the L/J grids directly, so the two routes share no
// quadrature beyond the grids themselves.

namespace levyt {

// Per-mode addends for k = 1..n_max and every spatial direction. h_k(1) = 0,
// so no boundary addends appear in any table. Cost O(n_max * d * M) on top of
// the shared process grids.
class ModeCache {
public:
    // with_s_rows tabulates the antisymmetric-contraction divergence addends
    // as well; that contraction needs exactly three dimensions.
    ModeCache(const TransportGrid& tg, const ProcessGrid& pg, int n_max,
              bool with_s_rows = false);

    int n_max() const { return n_max_; }
    int dim() const { return d_; }
    int matrix_size() const { return nn_; }
    bool has_s_rows() const { return with_s_; }
    const CMat& endpoint_transport() const { return u_final_; }

    // second derivative of the endpoint transport along p_mu h_k, taken twice
    const CMat& second_u(int k, int mu) const { return second_[idx(k, mu)]; }
    // derivative of B along p_mu h_k, applied to the same direction
    const CMat& b_derivative(int k, int mu) const { return bder_[idx(k, mu)]; }
    // -tr(X^2) for the stochastic prefix X at t = 1; real up to drift defect
    Complex pairing(int k, int mu) const { return pairing_[idx(k, mu)]; }
    // addend of the divergence of S h = int eps L h dt (three dimensions)
    const CMat& s_term(int k, int mu) const;

private:
    std::size_t idx(int k, int mu) const;

    int n_max_ = 0;
    int d_ = 0;
    int nn_ = 0;
    bool with_s_ = false;
    CMat u_final_;
    std::vector<CMat> second_;
    std::vector<CMat> bder_;
    std::vector<CMat> sterm_;
    std::vector<Complex> pairing_;
};

// -tr(X^2) for X = int sum_nu L_munu h_k db^nu at t = 1, for every k <= n_max
// and direction mu, k-major layout. Needs only the L grid, so callers that
// want pairings alone can skip tabulating J.
std::vector<Complex> mode_pairings(const ProcessGrid& pg, const BrownianPath& path,
                                   int n_max);

// (1/n) sum_{k<=n} sum_mu of the cached addends, 1 <= n <= cache.n_max().
CMat laplacian_partial(const ModeCache& cache, int n);
CMat divergence_partial(const ModeCache& cache, int n);
// first-direction sum minus the sum over the remaining directions; dim >= 2
CMat dalembertian_partial(const ModeCache& cache, int n);
// Cesàro partial of the divergence of S; cache must carry the s rows
CMat s_divergence_partial(const ModeCache& cache, int n);

// U(b,1) (int sum L_munu L_munu dt - int (sum_mu J_mumunu) o db^nu)
CMat laplacian_closed(const TransportGrid& tg, const ProcessGrid& pg);
// -int (sum_mu J_mumunu) db^nu, Ito rule. The Stratonovich variant agrees up
// to the covariation of the integrand, which cancels by index antisymmetry.
CMat divergence_closed(const ProcessGrid& pg, const BrownianPath& path);
CMat divergence_closed_strat(const ProcessGrid& pg, const BrownianPath& path);
// int eps_{mu nu la} J^{mu nu la} dt; the cyclic sum under eps vanishes
// pointwise, so this is ~0 on every grid. Three dimensions only.
CMat s_divergence_closed(const ProcessGrid& pg, double dt);

}  // namespace levyt
