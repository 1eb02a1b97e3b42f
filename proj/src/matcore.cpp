#include "qoslab/matcore.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qoslab {

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double schatten_norm(const ComplexMatrix& m, const Exponent& p) {
    if (!all_finite(m)) throw std::invalid_argument("schatten_norm: non-finite entries");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (p.is_inf()) return s.size() > 0 ? s(0) : 0.0;
    double pv = p.value();
    if (pv == 2.0) {
        // Frobenius; no SVD needed but singular values are already here.
        long double acc = 0.0L;
        for (Eigen::Index i = 0; i < s.size(); ++i) acc += (long double)s(i) * s(i);
        return (double)std::sqrt(acc);
    }
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow((long double)s(i), (long double)pv);
    return (double)std::pow(acc, 1.0L / pv);
}

Complex trace_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || b.cols() != a.rows())
        throw std::invalid_argument("trace_pair: shape mismatch");
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, i);
    return acc;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index rows = a.rows() * b.rows();
    const Eigen::Index cols = a.cols() * b.cols();
    if (a.size() > 0 && b.size() > 0 && (rows > (1 << 16) || cols > (1 << 16)))
        throw resource_error("kron: requested shape too large");
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix haar_orthogonal(int d, RngStream& rng) {
    if (d < 1) throw std::invalid_argument("haar_orthogonal: d must be >= 1");
    if (d == 1) {
        ComplexMatrix q(1, 1);
        q(0, 0) = (rng.bits() & 1) ? 1.0 : -1.0;
        return q;
    }
    Eigen::MatrixXd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q.cast<Complex>();
}

ComplexMatrix haar_unitary(int d, RngStream& rng) {
    if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
    if (d == 1) {
        ComplexMatrix u(1, 1);
        double a = 6.283185307179586476925286766559 * rng.uniform();
        u(0, 0) = Complex(std::cos(a), std::sin(a));
        return u;
    }
    ComplexMatrix g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        Complex rjj = r(j, j);
        double mod = std::abs(rjj);
        if (mod > 0.0) q.col(j) *= rjj / mod;
    }
    return q;
}

ComplexMatrix gaussian_matrix(int d, RngStream& rng) {
    if (d < 1) throw std::invalid_argument("gaussian_matrix: d must be >= 1");
    const double scale = 1.0 / std::sqrt((double)d);
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = scale * rng.gaussian();
    return g;
}

}  // namespace qoslab
