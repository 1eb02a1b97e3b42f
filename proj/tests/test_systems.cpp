#include <doctest.h>

#include <cmath>

#include "qoslab/systems.hpp"
#include "qoslab/wigner.hpp"

using namespace qoslab;

namespace {

int dim_square_sum(const QSystemInstance& sys) {
    int acc = 0;
    for (int d : sys.params.dims) acc += d * d;
    return acc;
}

}  // namespace

TEST_CASE("finite group duals: dimension counts") {
    auto s3 = build_finite_group_dual("s3");
    CHECK(s3.params.dims == std::vector<int>{1, 1, 2});
    CHECK(dim_square_sum(s3) == 6);
    CHECK(s3.space->size() == 6);
    CHECK(s3.is_complete);
    CHECK(s3.declared_bound.value() == 1.0);

    auto d4 = build_finite_group_dual("d4");
    CHECK(d4.params.dims == std::vector<int>{1, 1, 1, 1, 2});
    CHECK(dim_square_sum(d4) == 8);

    auto q8 = build_finite_group_dual("q8");
    CHECK(q8.params.dims == std::vector<int>{1, 1, 1, 1, 2});
    CHECK(dim_square_sum(q8) == 8);

    auto z4 = build_finite_group_dual("z4");
    CHECK(z4.params.dims == std::vector<int>(4, 1));
    // characters chi_k(m) = exp(2 pi i k m / 4)
    for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) {
            Complex expect = std::polar(1.0, 2.0 * M_PI * k * m / 4.0);
            CHECK(std::abs(z4.eval[k][m](0, 0) - expect) <= 1e-12);
        }

    CHECK_THROWS_AS(build_finite_group_dual("e8"), std::invalid_argument);
}

TEST_CASE("finite group duals: representation property and Schur orthogonality") {
    for (const char* name : {"s3", "d4", "q8", "z16"}) {
        auto sys = build_finite_group_dual(name);
        CAPTURE(name);
        REQUIRE(sys.group);
        CHECK(representation_defect(*sys.group) <= 1e-10);
        auto rep = verify_orthonormality(sys);
        CHECK(rep.max_defect <= 1e-12);
        CHECK(uniform_bound(sys) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("wigner d-matrices") {
    RngStream rng(31, 0);
    SUBCASE("j=0 and j=1/2 blocks") {
        for (int t = 0; t < 10; ++t) {
            Su2Element g = haar_su2(rng);
            CHECK(std::abs(wigner_d(0, g)(0, 0) - Complex(1.0, 0.0)) <= 1e-14);
            ComplexMatrix d = wigner_d(1, g);
            CHECK(std::abs(d(0, 0) - g.a) <= 1e-14);
            CHECK(std::abs(d(0, 1) - g.b) <= 1e-14);
            CHECK(std::abs(d(1, 0) + std::conj(g.b)) <= 1e-14);
            CHECK(std::abs(d(1, 1) - std::conj(g.a)) <= 1e-14);
        }
    }
    SUBCASE("unitarity") {
        for (int twoj = 0; twoj <= 6; ++twoj)
            for (int t = 0; t < 10; ++t) {
                ComplexMatrix d = wigner_d(twoj, haar_su2(rng));
                CHECK((d.adjoint() * d - ComplexMatrix::Identity(twoj + 1, twoj + 1))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-12);
            }
    }
    SUBCASE("homomorphism under quaternion composition") {
        for (int twoj = 0; twoj <= 4; ++twoj)
            for (int t = 0; t < 10; ++t) {
                Su2Element g = haar_su2(rng), h = haar_su2(rng);
                Su2Element gh{g.a * h.a - g.b * std::conj(h.b),
                              g.a * h.b + g.b * std::conj(h.a)};
                CHECK((wigner_d(twoj, gh) - wigner_d(twoj, g) * wigner_d(twoj, h))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-10);
            }
    }
}

TEST_CASE("su2 dual") {
    const std::size_t n = 20000;
    auto sys = build_su2_dual(3, n, RngStream(2024, 1));
    REQUIRE(sys.params.dims == std::vector<int>{1, 2, 3, 4});
    CHECK(sys.space->kind == SpaceKind::MonteCarlo);
    CHECK(sys.declared_bound.value() == 1.0);

    // trivial representation is the constant 1
    for (std::size_t pt = 0; pt < 50; ++pt)
        CHECK(std::abs(sys.eval[0][pt](0, 0) - Complex(1.0, 0.0)) <= 1e-14);

    // defining representation stays unitary
    for (std::size_t pt = 0; pt < 200; ++pt) {
        const ComplexMatrix& d = sys.eval[1][pt];
        CHECK((d.adjoint() * d - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // Peter-Weyl second moment E |D^{1/2}_{11}|^2 = 1/2
    double acc = 0.0;
    for (std::size_t pt = 0; pt < n; ++pt) acc += std::norm(sys.eval[1][pt](0, 0));
    CHECK(std::abs(acc / n - 0.5) <= 3.0 / std::sqrt((double)n));

    auto rep = verify_orthonormality(sys);
    CHECK(rep.max_defect <= 4.0 / std::sqrt((double)n));

    CHECK_THROWS_AS(build_su2_dual(13, n, RngStream(0)), resource_error);
    CHECK_THROWS_AS(build_su2_dual(2, 10, RngStream(0)), std::invalid_argument);
}

TEST_CASE("rademacher system") {
    const std::size_t n = 10000;
    SystemParams params{{0, 1, 2}, {1, 2, 3}};
    auto sys = build_rademacher(params, n, RngStream(5, 0));
    CHECK(sys.exactly_orthonormal);
    CHECK(sys.declared_bound.value() == 1.0);
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t pt = 0; pt < 100; ++pt) {
            const ComplexMatrix& r = sys.eval[s][pt];
            CHECK((r.transpose() * r - ComplexMatrix::Identity(r.rows(), r.rows()))
                      .cwiseAbs()
                      .maxCoeff() <= 1e-12);
        }
    CHECK(verify_orthonormality(sys).max_defect <= 4.0 / std::sqrt((double)n));
    CHECK(uniform_bound(sys) == doctest::Approx(1.0).epsilon(1e-12));

    // O(1) = {+-1}
    SystemParams scalar{{0}, {1}};
    auto signs = build_rademacher(scalar, 2000, RngStream(6, 0));
    for (std::size_t pt = 0; pt < 2000; ++pt) {
        double v = signs.eval[0][pt](0, 0).real();
        CHECK(std::abs(std::abs(v) - 1.0) <= 1e-15);
    }
}

TEST_CASE("steinhaus system") {
    const std::size_t n = 10000;
    SystemParams params{{0, 1}, {1, 2}};
    auto sys = build_steinhaus(params, n, RngStream(7, 0));
    for (std::size_t pt = 0; pt < 100; ++pt) {
        const ComplexMatrix& u = sys.eval[1][pt];
        CHECK((u.adjoint() * u - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(std::abs(std::abs(sys.eval[0][pt](0, 0)) - 1.0) <= 1e-12);
    }
    CHECK(verify_orthonormality(sys).max_defect <= 4.0 / std::sqrt((double)n));
}

TEST_CASE("gaussian system") {
    const std::size_t n = 100000;
    SystemParams params{{0}, {3}};
    auto sys = build_gaussian(params, n, RngStream(8, 0));
    CHECK(!sys.declared_bound.has_value());

    double s = 0.0, s2 = 0.0;
    for (std::size_t pt = 0; pt < n; ++pt) {
        double v = sys.eval[0][pt].squaredNorm();
        s += v;
        s2 += v * v;
    }
    double mean = s / n;
    double stderr_ = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 3.0) <= 3.0 * stderr_);
    CHECK(verify_orthonormality(sys).max_defect <= 4.0 / std::sqrt((double)n));

    // unbounded: max of 1e5 standard normals comfortably exceeds 3
    SystemParams scalar{{0}, {1}};
    auto g1 = build_gaussian(scalar, n, RngStream(9, 0));
    CHECK(uniform_bound(g1) > 3.0);
}

TEST_CASE("blocked scalar systems") {
    SUBCASE("all 1x1 walsh blocks recover the walsh system") {
        SystemParams params{{0, 1, 2, 3}, {1, 1, 1, 1}};
        auto sys = build_blocked_scalar(BlockedBase::Walsh, params, 4);
        CHECK(sys.is_complete);  // flag describes the underlying base
        CHECK(sys.basis_used == 4);
        CHECK(sys.grid_size == 16);
        for (std::size_t pt = 0; pt < sys.space->size(); ++pt) {
            double t = sys.space->coords[pt];
            // base starts at w_1 = delta_1, then w_2 = delta_2
            CHECK(std::abs(sys.eval[0][pt](0, 0) - (double)dyadic_delta(1, t)) <= 1e-14);
            CHECK(std::abs(sys.eval[1][pt](0, 0) - (double)dyadic_delta(2, t)) <= 1e-14);
        }
        CHECK(verify_orthonormality(sys).max_defect <= 1e-12);
    }
    SUBCASE("d=2 walsh block normalization") {
        SystemParams params{{0}, {2}};
        auto sys = build_blocked_scalar(BlockedBase::Walsh, params, 4);
        // diagonal of Def-style orthonormality: <phi_11, phi_11> = 1/2
        long double acc = 0.0L;
        for (std::size_t pt = 0; pt < sys.space->size(); ++pt)
            acc += sys.space->weights[pt] * std::norm(sys.eval[0][pt](0, 0));
        CHECK((double)acc == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(verify_orthonormality(sys).max_defect <= 1e-12);
    }
    SUBCASE("trig base, mixed dims, complete when sizes match") {
        // 1 + 1 + 4 + 4 + 4 + 2 blocks of squared dims... pick sum = 16
        SystemParams params{{0, 1, 2, 3}, {1, 1, 2, 1}};  // 1+1+4+1 = 7 < 16
        auto sys = build_blocked_scalar(BlockedBase::Trig, params, 4);
        CHECK(sys.basis_used == 7);
        CHECK(sys.grid_size == 16);
        CHECK(verify_orthonormality(sys).max_defect <= 1e-12);

        SystemParams full{{0, 1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 2, 2, 2}};  // 4 + 12 = 16
        auto c = build_blocked_scalar(BlockedBase::Trig, full, 4);
        CHECK(c.basis_used == 16);
        CHECK(c.is_complete);
        CHECK(verify_orthonormality(c).max_defect <= 1e-12);
    }
    SUBCASE("basis exhaustion") {
        SystemParams big{{0}, {5}};  // needs 25 > 2^4 base functions
        CHECK_THROWS_AS(build_blocked_scalar(BlockedBase::Walsh, big, 4), std::invalid_argument);
    }
}

TEST_CASE("gaussian sign invariance") {
    // D1 gamma D2 has the same first and second moments as gamma for fixed
    // orthogonal D1, D2
    const std::size_t n = 20000;
    const int d = 2;
    SystemParams params{{0}, {d}};
    auto sys = build_gaussian(params, n, RngStream(17, 0));
    RngStream drng(18, 0);
    ComplexMatrix d1 = haar_orthogonal(d, drng), d2 = haar_orthogonal(d, drng);

    double m_raw = 0.0, m_rot = 0.0, v_raw = 0.0, v_rot = 0.0;
    for (std::size_t pt = 0; pt < n; ++pt) {
        const ComplexMatrix& g = sys.eval[0][pt];
        ComplexMatrix r = d1 * g * d2;
        m_raw += g(0, 0).real();
        m_rot += r(0, 0).real();
        v_raw += g(0, 0).real() * g(0, 0).real();
        v_rot += r(0, 0).real() * r(0, 0).real();
    }
    const double se = 1.0 / std::sqrt((double)d * n);
    CHECK(std::abs(m_raw / n - m_rot / n) <= 8.0 * se);
    CHECK(std::abs(v_raw / n - v_rot / n) <= 8.0 * se);
}
