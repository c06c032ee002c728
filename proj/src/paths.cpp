#include "levyt/paths.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace levyt {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t stable_hash(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x6a09e667f3bcc909ull));
}

BrownianPath sample_path(std::uint64_t seed, int steps, int d) {
    if (steps < 1 || d < 1 || d > kMaxDim)
        throw std::invalid_argument("sample_path: bad steps or dimension");
    BrownianPath p;
    p.d = d;
    p.steps = steps;
    p.seed = seed;
    p.v.assign(std::size_t(steps + 1) * d, 0.0);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(1.0 / steps));
    for (int i = 0; i < steps; ++i)
        for (int mu = 0; mu < d; ++mu)
            p.at(i + 1, mu) = p.at(i, mu) + gauss(gen);
    return p;
}

double sine_mode(int k, double t) {
    if (t == 1.0) return 0.0;
    return std::sqrt(2.0) * std::sin(k * kPi * t);
}

double sine_mode_dot(int k, double t) {
    return std::sqrt(2.0) * k * kPi * std::cos(k * kPi * t);
}

Direction basis_direction(int mu, int k, int d) {
    if (mu < 0 || mu >= d || k < 1) throw std::invalid_argument("basis_direction: bad indices");
    Direction dir;
    dir.d = d;
    dir.tag_mu = mu;
    dir.tag_k = k;
    dir.u = [mu, k, d](double t, double* out) {
        for (int j = 0; j < d; ++j) out[j] = 0.0;
        out[mu] = sine_mode(k, t);
    };
    dir.udot = [mu, k, d](double t, double* out) {
        for (int j = 0; j < d; ++j) out[j] = 0.0;
        out[mu] = sine_mode_dot(k, t);
    };
    return dir;
}

double levy_kernel(int n, double s, double t) {
    if (n < 1) throw std::invalid_argument("levy_kernel: n must be positive");
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += sine_mode(k, s) * sine_mode(k, t);
    return acc / n;
}

}  // namespace levyt
