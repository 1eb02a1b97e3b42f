#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstring>

#include "qoslab/matcore.hpp"

using namespace qoslab;

namespace {

ComplexMatrix random_complex(int r, int c, RngStream& rng) {
    ComplexMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
    return m;
}

// Independent oracle: trace norm from the eigenvalues of M* M.
double trace_norm_via_eig(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        acc += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    return acc;
}

}  // namespace

TEST_CASE("schatten_norm basics") {
    CHECK(schatten_norm(ComplexMatrix::Identity(4, 4), Exponent(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    ComplexMatrix d(2, 2);
    d << 3.0, 0.0, 0.0, 4.0;
    CHECK(schatten_norm(d, Exponent::inf()) == doctest::Approx(4.0).epsilon(1e-12));

    RngStream rng(42, 7);
    ComplexMatrix m = random_complex(3, 3, rng);
    CHECK(schatten_norm(m, Exponent(1.0)) == doctest::Approx(trace_norm_via_eig(m)).epsilon(1e-10));
}

TEST_CASE("schatten_norm rejects non-finite input") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(schatten_norm(m, Exponent(2.0)), std::invalid_argument);
}

TEST_CASE("schatten_norm is monotone in 1/p and unitarily invariant") {
    RngStream rng(1, 2);
    const double ps[] = {1.0, 1.5, 2.0, 3.0, 7.0};
    for (int trial = 0; trial < 100; ++trial) {
        ComplexMatrix m = random_complex(4, 4, rng);
        double prev = schatten_norm(m, Exponent(ps[0]));
        for (int k = 1; k < 5; ++k) {
            double cur = schatten_norm(m, Exponent(ps[k]));
            CHECK(cur <= prev + 1e-10);
            prev = cur;
        }
        CHECK(schatten_norm(m, Exponent::inf()) <= prev + 1e-10);
    }
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix m = random_complex(4, 4, rng);
        ComplexMatrix u = haar_unitary(4, rng);
        ComplexMatrix v = haar_unitary(4, rng);
        for (double p : {1.0, 1.7, 2.0, 4.0})
            CHECK(schatten_norm(u * m * v, Exponent(p)) ==
                  doctest::Approx(schatten_norm(m, Exponent(p))).epsilon(1e-10));
    }
}

TEST_CASE("haar_orthogonal") {
    SUBCASE("invalid dimension") {
        RngStream rng(0);
        CHECK_THROWS_AS(haar_orthogonal(0, rng), std::invalid_argument);
    }
    SUBCASE("orthogonality residual") {
        RngStream rng(3, 0);
        for (int d : {1, 2, 3, 5, 8}) {
            for (int t = 0; t < 20; ++t) {
                ComplexMatrix q = haar_orthogonal(d, rng);
                CHECK((q.transpose() * q - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
                      1e-12);
                CHECK(q.imag().cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
    SUBCASE("d=1 sign frequency") {
        RngStream rng(11, 0);
        int plus = 0;
        const int n = 10000;
        for (int t = 0; t < n; ++t) {
            double v = haar_orthogonal(1, rng)(0, 0).real();
            CHECK(std::abs(std::abs(v) - 1.0) == 0.0);
            if (v > 0) ++plus;
        }
        CHECK(std::abs((double)plus / n - 0.5) <= 0.02);
    }
    SUBCASE("second moment E q11^2 = 1/3 at d=3") {
        RngStream rng(12, 0);
        const int n = 100000;
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < n; ++t) {
            double v = haar_orthogonal(3, rng)(0, 0).real();
            sum += v * v;
            sumsq += v * v * v * v;
        }
        double mean = sum / n;
        double stderr_ = std::sqrt((sumsq / n - mean * mean) / n);
        CHECK(std::abs(mean - 1.0 / 3.0) <= 3.0 * stderr_);
    }
}

TEST_CASE("haar_unitary") {
    SUBCASE("unitarity residual") {
        RngStream rng(4, 0);
        for (int d : {1, 2, 4, 6}) {
            for (int t = 0; t < 20; ++t) {
                ComplexMatrix u = haar_unitary(d, rng);
                CHECK((u.adjoint() * u - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
                      1e-12);
            }
        }
    }
    SUBCASE("d=1 uniform on the circle") {
        RngStream rng(5, 0);
        const int n = 100000;
        double sr = 0.0, si = 0.0;
        for (int t = 0; t < n; ++t) {
            Complex u = haar_unitary(1, rng)(0, 0);
            CHECK(std::abs(std::abs(u) - 1.0) <= 1e-12);
            sr += u.real();
            si += u.imag();
        }
        const double stderr_ = std::sqrt(0.5 / n);
        CHECK(std::abs(sr / n) <= 3.0 * stderr_);
        CHECK(std::abs(si / n) <= 3.0 * stderr_);
    }
    SUBCASE("second moment E |u11|^2 = 1/2 at d=2") {
        RngStream rng(6, 0);
        const int n = 100000;
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < n; ++t) {
            double v = std::norm(haar_unitary(2, rng)(0, 0));
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n;
        double stderr_ = std::sqrt((sumsq / n - mean * mean) / n);
        CHECK(std::abs(mean - 0.5) <= 3.0 * stderr_);
    }
}

TEST_CASE("gaussian_matrix") {
    SUBCASE("d=1 variance") {
        RngStream rng(7, 0);
        const int n = 100000;
        double s = 0.0, s2 = 0.0;
        for (int t = 0; t < n; ++t) {
            double v = gaussian_matrix(1, rng)(0, 0).real();
            s += v;
            s2 += v * v;
        }
        CHECK(std::abs(s2 / n - (s / n) * (s / n) - 1.0) <= 0.02);
    }
    SUBCASE("E ||gamma||_S2^2 = d") {
        RngStream rng(8, 0);
        const int d = 3, n = 100000;
        double s = 0.0, s2 = 0.0;
        for (int t = 0; t < n; ++t) {
            double v = gaussian_matrix(d, rng).squaredNorm();
            s += v;
            s2 += v * v;
        }
        double mean = s / n;
        double stderr_ = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - (double)d) <= 3.0 * stderr_);
    }
    SUBCASE("fixed seed reproduces byte for byte") {
        RngStream a(99, 3), b(99, 3);
        ComplexMatrix ma = gaussian_matrix(2, a);
        ComplexMatrix mb = gaussian_matrix(2, b);
        CHECK(std::memcmp(ma.data(), mb.data(), sizeof(Complex) * 4) == 0);
    }
}

TEST_CASE("trace_pair") {
    CHECK(trace_pair(ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(3, 3)).real() ==
          doctest::Approx(3.0));
    ComplexMatrix e12 = ComplexMatrix::Zero(2, 2), e21 = ComplexMatrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    e21(1, 0) = 1.0;
    CHECK(trace_pair(e12, e21).real() == doctest::Approx(1.0));
    CHECK(std::abs(trace_pair(e12, e12)) == doctest::Approx(0.0));

    RngStream rng(9, 0);
    ComplexMatrix a(2, 3), b(3, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) {
            a(i, j) = Complex(rng.gaussian(), rng.gaussian());
            b(j, i) = Complex(rng.gaussian(), rng.gaussian());
        }
    Complex oracle = 0.0;  // direct entry summation
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) oracle += a(i, j) * b(j, i);
    CHECK(std::abs(trace_pair(a, b) - oracle) <= 1e-12);
    CHECK_THROWS_AS(trace_pair(a, a), std::invalid_argument);
}

TEST_CASE("kron") {
    RngStream rng(10, 0);
    ComplexMatrix m = random_complex(2, 2, rng);
    ComplexMatrix k = kron(ComplexMatrix::Identity(2, 2), m);
    CHECK((k.block(0, 0, 2, 2) - m).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((k.block(2, 2, 2, 2) - m).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(k.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);

    ComplexMatrix a = random_complex(3, 2, rng), b = random_complex(2, 4, rng);
    CHECK(schatten_norm(kron(a, b), Exponent(2.0)) ==
          doctest::Approx(schatten_norm(a, Exponent(2.0)) * schatten_norm(b, Exponent(2.0)))
              .epsilon(1e-10));

    ComplexMatrix one(1, 1);
    one(0, 0) = 2.0;
    CHECK((kron(one, b) - 2.0 * b).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("RngStream determinism and substreams") {
    RngStream a(1234, 5), b(1234, 5);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    // substream identity does not depend on draws already made
    RngStream c(1234, 5);
    c.uniform();
    RngStream s1 = RngStream(1234, 5).substream(3);
    RngStream s2 = c.substream(3);
    for (int i = 0; i < 10; ++i) CHECK(s1.uniform() == s2.uniform());
}

TEST_CASE("Exponent conjugation") {
    CHECK(Exponent(2.0).conjugate().value() == doctest::Approx(2.0));
    CHECK(Exponent(1.0).conjugate().is_inf());
    CHECK(Exponent::inf().conjugate().value() == doctest::Approx(1.0));
    CHECK(Exponent(4.0 / 3.0).conjugate().value() == doctest::Approx(4.0));
    CHECK_THROWS_AS(Exponent(0.5), std::invalid_argument);
}
