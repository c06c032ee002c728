#pragma once

#include "levyt/transport.hpp"

// Directional derivatives of the transport along Cameron-Martin shifts of
// the driving path, the conjugated derivative operator B, the two-parameter
// derivative kernel Z, and finite-difference oracles for all of them.
//
// Discretization rule used throughout: in iterated Stratonovich integrals
// every factor of the integrand is replaced by its per-step endpoint
// average. Under that rule the discrete product rule
//   X_M Y_M = sum_i (dX_i avg(Y)_i + avg(X)_i dY_i)
// is an exact telescoping identity, so the product-rule and symmetry
// identities below hold to roundoff on every grid, not just in the limit.

namespace levyt {

struct VariationResult {
    CMat value;       // stochastic + temporal + boundary, exactly
    CMat stochastic;  // o db addends
    CMat temporal;    // dt addends
    CMat boundary;    // endpoint addend, zero when u(1) = 0
};

// Stratonovich prefix X_u(t_i) = int_0^{t_i} sum_{mu nu} L_munu u^mu o db^nu.
std::vector<CMat> strat_prefix(const ProcessGrid& pg, const BrownianPath& path,
                               const Direction& u);

// dU in direction u: -U(1) X_u(1) - A_mu(x+b_1) u^mu(1) U(1).
VariationResult first_variation_u(const TransportGrid& tg, const ProcessGrid& pg,
                                  const Direction& u);

// dU^{-1} in direction u: X_u(1) U(1)^{-1} + U(1)^{-1} A_mu(x+b_1) u^mu(1).
VariationResult first_variation_uinv(const TransportGrid& tg, const ProcessGrid& pg,
                                     const Direction& u);

// Second derivative for endpoint-vanishing directions (u(1) = v(1) = 0):
//   U(1) [ int (L u) X_v o db + int (L v) X_u o db ]
// - U(1) [ 1/2 int (J_numula + J_munula) u^mu v^nu o db^la
//        + 1/2 int L_munu (udot^nu v^mu + vdot^nu u^mu) dt ].
// Requires pg.has_j. Symmetric in (u, v) exactly.
VariationResult second_variation_u(const TransportGrid& tg, const ProcessGrid& pg,
                                   const Direction& u, const Direction& v);

// B(u) = U(1)^{-1} dU(1) = -X_u(1) - U^{-1} A_mu(x+b_1) u^mu(1) U; u(N)-valued.
CMat b_apply(const TransportGrid& tg, const ProcessGrid& pg, const Direction& u);

// Derivative of b |-> B(b)v in direction u, for u(1) = v(1) = 0:
//   int [ (L v), X_u ] o db - (J term) - (L time term).
// Equals dU^{-1}(u) dU(v) + U^{-1} d^2U(u,v) assembled from the ops above.
CMat b_variation(const TransportGrid& tg, const ProcessGrid& pg,
                 const Direction& u, const Direction& v);

// Two-parameter kernel of the derivative: for s <= t
//   Z_nu(b,t,s) = -U(t) U(s)^{-1} A_nu(x+b_s) U(s)
//                 -U(t) int_s^t U^{-1} (d_nu A_mu)(x+b_r) U o db^mu_r,
// and 0 for s > t. Indices are grid points.
CMat malliavin_kernel_z(const TransportGrid& tg, int nu, int t_index, int s_index);

// int_0^1 Z_mu(b,1,s) udot^mu(s) ds by trapezoid; reconstructs the first
// variation of U(1) from the kernel alone.
CMat malliavin_reconstruct(const TransportGrid& tg, const Direction& u);

// Deterministic Cameron-Martin shift of the driving path: b + eps * u.
BrownianPath shift_path(const BrownianPath& path, const Direction& u, double eps);

// Central differences of re-solved transports along shifted paths. If
// richardson_ok is given, it is set to false when the eps and eps/2
// estimates disagree beyond truncation scale (cancellation warning).
CMat fd_variation_oracle(const ConnectionField& field, const Coord& x,
                         const BrownianPath& path, Scheme scheme, const Direction& u,
                         double eps, bool* richardson_ok = nullptr);
CMat fd_variation_uinv_oracle(const ConnectionField& field, const Coord& x,
                              const BrownianPath& path, Scheme scheme, const Direction& u,
                              double eps, bool* richardson_ok = nullptr);
CMat fd_second_variation_oracle(const ConnectionField& field, const Coord& x,
                                const BrownianPath& path, Scheme scheme,
                                const Direction& u, const Direction& v, double eps);
CMat fd_b_variation_oracle(const ConnectionField& field, const Coord& x,
                          const BrownianPath& path, Scheme scheme,
                          const Direction& u, const Direction& v, double eps);

}  // namespace levyt
