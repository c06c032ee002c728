#include "levyt/liealg.hpp"

#include <random>
#include <stdexcept>

namespace levyt {

CMat zero_mat(int n) {
    if (n < 1 || n > kMaxRank) throw std::invalid_argument("matrix size out of range");
    return CMat::Zero(n, n);
}

CMat identity_mat(int n) {
    if (n < 1 || n > kMaxRank) throw std::invalid_argument("matrix size out of range");
    return CMat::Identity(n, n);
}

CMat commutator(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

Complex trace(const CMat& a) { return a.trace(); }

double frob_norm(const CMat& a) { return a.norm(); }

bool is_anti_hermitian(const CMat& m, double tol) {
    const double scale = std::max(1.0, m.norm());
    return (m + m.adjoint()).norm() <= tol * scale;
}

double unitarity_defect(const CMat& m) {
    const int n = int(m.rows());
    return (m.adjoint() * m - CMat::Identity(n, n)).norm();
}

bool is_unitary(const CMat& m, double tol) { return unitarity_defect(m) <= tol; }

CMat mat_exp(const CMat& x) {
    if (x.rows() != x.cols()) throw std::invalid_argument("mat_exp: not square");
    if (!is_anti_hermitian(x, 1e-12)) throw std::invalid_argument("mat_exp: input not anti-Hermitian");
    const int n = int(x.rows());
    if (n == 1) {
        CMat r(1, 1);
        r(0, 0) = std::exp(x(0, 0));
        return r;
    }
    // i*x is Hermitian: i*x = V diag(lam) V^dagger, exp(x) = V diag(e^{-i lam}) V^dagger.
    const CMat h = Complex(0, 1) * x;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("mat_exp: eigensolver failed");
    CMat phases = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k)
        phases(k, k) = std::exp(Complex(0, -es.eigenvalues()[k]));
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

CMat polar_unitary(const CMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("polar_unitary: not square");
    const int n = int(m.rows());
    // m = u p with p = (m^dagger m)^{1/2}; u = m p^{-1}.
    const CMat g = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<CMat> es(g);
    if (es.info() != Eigen::Success) throw std::runtime_error("polar_unitary: eigensolver failed");
    CMat inv_sqrt = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double ev = es.eigenvalues()[k];
        if (ev <= 0.0) throw std::invalid_argument("polar_unitary: singular input");
        inv_sqrt(k, k) = 1.0 / std::sqrt(ev);
    }
    return m * es.eigenvectors() * inv_sqrt * es.eigenvectors().adjoint();
}

CMat pauli(int k) {
    CMat s(2, 2);
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
    }
    return s;
}

CMat random_anti_hermitian(int n, std::uint64_t seed) {
    if (n < 1 || n > kMaxRank) throw std::invalid_argument("matrix size out of range");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CMat m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = Complex(0, dist(gen));
        for (int j = i + 1; j < n; ++j) {
            const Complex z(dist(gen), dist(gen));
            m(i, j) = z;
            m(j, i) = -std::conj(z);
        }
    }
    return m;
}

}  // namespace levyt
