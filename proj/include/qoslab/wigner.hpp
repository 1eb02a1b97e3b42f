#pragma once

#include "qoslab/matcore.hpp"
#include "qoslab/rng.hpp"

namespace qoslab {

/// Element of SU(2) stored by its first row: [[a, b], [-conj(b), conj(a)]].
struct Su2Element {
    Complex a;
    Complex b;
};

/// Haar-uniform SU(2) element via a normalized 4-dimensional Gaussian
/// (uniform unit quaternion); exact, no rejection.
Su2Element haar_su2(RngStream& rng);

/// Wigner D-matrix of the spin-j irrep (j = twoj/2), size (twoj+1) square,
/// rows and columns ordered by decreasing magnetic index. The twoj = 1 block
/// is the SU(2) matrix itself.
ComplexMatrix wigner_d(int twoj, const Su2Element& g);

}  // namespace qoslab
