#include "qoslab/wigner.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qoslab {

namespace {

// Factorials through 13! cover twoj <= 12 (j <= 6).
constexpr int kMaxTwoJ = 12;

double factorial(int n) {
    static const std::array<double, kMaxTwoJ + 2> table = [] {
        std::array<double, kMaxTwoJ + 2> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxTwoJ + 1; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table[n];
}

Complex ipow(Complex z, int n) {
    Complex r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace

Su2Element haar_su2(RngStream& rng) {
    double w, x, y, z, n2;
    do {
        w = rng.gaussian();
        x = rng.gaussian();
        y = rng.gaussian();
        z = rng.gaussian();
        n2 = w * w + x * x + y * y + z * z;
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    // q = w + xi + yj + zk  ->  [[w+ix, y+iz], [-y+iz, w-ix]]
    return {Complex(w * inv, x * inv), Complex(y * inv, z * inv)};
}

ComplexMatrix wigner_d(int twoj, const Su2Element& g) {
    if (twoj < 0 || twoj > kMaxTwoJ) throw resource_error("wigner_d: twoj out of [0, 12]");
    const int dim = twoj + 1;
    const Complex a = g.a, b = g.b;
    const Complex c = -std::conj(b), d = std::conj(a);
    ComplexMatrix out(dim, dim);
    // Row i is magnetic index m' = j - i (A' = twoj - i = j + m'),
    // column n is m = j - n (A = twoj - n = j + m). Matrix element from the
    // action on the monomial basis x^(j+m) y^(j-m) / sqrt((j+m)!(j-m)!).
    for (int i = 0; i < dim; ++i) {
        const int B = twoj - i;  // j + m'
        for (int n = 0; n < dim; ++n) {
            const int A = twoj - n;  // j + m
            const double pref = std::sqrt(factorial(B) * factorial(twoj - B) *
                                          factorial(A) * factorial(twoj - A));
            Complex sum = 0.0;
            const int klo = std::max(0, A + B - twoj);
            const int khi = std::min(A, B);
            for (int k = klo; k <= khi; ++k) {
                Complex term = ipow(a, k) * ipow(c, A - k) * ipow(b, B - k) *
                               ipow(d, twoj - A - B + k);
                term /= factorial(k) * factorial(A - k) * factorial(B - k) *
                        factorial(twoj - A - B + k);
                sum += term;
            }
            out(i, n) = pref * sum;
        }
    }
    return out;
}

}  // namespace qoslab
