#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "qoslab/exponent.hpp"
#include "qoslab/rng.hpp"

namespace qoslab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Thrown when a requested (p, E) norm combination has no implemented
/// definition. Deliberately distinct from invalid_argument: the input is
/// well-formed, the norm just is not computable here.
class unsupported_norm_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool all_finite(const ComplexMatrix& m);

/// Schatten p-norm: ell^p norm of the singular values; p = inf gives the
/// operator norm. Works for rectangular inputs.
double schatten_norm(const ComplexMatrix& m, const Exponent& p);

/// tr(AB). Shapes must be compatible both ways (A: r x c, B: c x r).
Complex trace_pair(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product, shape (rA*rB) x (cA*cB).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Haar-distributed Q in O(d). Gaussian + QR with the diagonal sign
/// correction; without the correction the QR convention biases the result.
ComplexMatrix haar_orthogonal(int d, RngStream& rng);

/// Haar-distributed U in U(d). Complex Gaussian + QR with the phase
/// correction of the triangular factor's diagonal.
ComplexMatrix haar_unitary(int d, RngStream& rng);

/// d x d matrix of i.i.d. N(0,1) real entries scaled by 1/sqrt(d).
ComplexMatrix gaussian_matrix(int d, RngStream& rng);

}  // namespace qoslab
