#pragma once

#include "levyt/liealg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

// Brownian driving paths on the uniform grid t_i = i/M of [0,1], plus
// Cameron-Martin directions and the averaged sine kernel.

namespace levyt {

struct BrownianPath {
    int d = 0;
    int steps = 0;  // M; the grid stores M+1 points
    std::uint64_t seed = 0;
    std::vector<double> v;  // (M+1) x d, row major, v[0..d-1] = 0

    double dt() const { return 1.0 / steps; }
    double t(int i) const { return double(i) / steps; }
    double at(int i, int mu) const { return v[std::size_t(i) * d + mu]; }
    double& at(int i, int mu) { return v[std::size_t(i) * d + mu]; }
    double incr(int i, int mu) const { return at(i + 1, mu) - at(i, mu); }
};

// Gaussian increments of variance 1/M from a generator seeded only by
// `seed`, so a path is reproducible independent of scheduling.
BrownianPath sample_path(std::uint64_t seed, int steps, int d);

// splitmix64 mix of (master, index); the per-path seed derivation.
std::uint64_t stable_hash(std::uint64_t master, std::uint64_t index);

// h_k(t) = sqrt(2) sin(k pi t); exact zero at t = 1.
double sine_mode(int k, double t);
double sine_mode_dot(int k, double t);

// Direction u: [0,1] -> R^d with derivative; writes d components.
struct Direction {
    int d = 0;
    int tag_mu = -1;  // >= 0 for the coordinate sine basis p_mu h_k
    int tag_k = 0;
    std::function<void(double, double*)> u;
    std::function<void(double, double*)> udot;
};

// p_mu h_k: component mu carries h_k, the others vanish. mu is zero based.
Direction basis_direction(int mu, int k, int d);

// l_n(s,t) = (1/n) sum_{k<=n} h_k(s) h_k(t); |l_n| <= 2.
double levy_kernel(int n, double s, double t);

}  // namespace levyt
