#include "qoslab/groups.hpp"

#include <cmath>
#include <stdexcept>

namespace qoslab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

ComplexMatrix rot2(double theta) {
    ComplexMatrix m(2, 2);
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return m;
}

ComplexMatrix flip2() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

/// Dihedral group of order 2n: elements r^a s^b, index a + n*b.
/// one_dim: per 1-d irrep the pair (chi(r), chi(s)).
FiniteGroupPtr make_dihedral(const std::string& name, int n,
                             const std::vector<std::pair<double, double>>& one_dim,
                             const std::vector<int>& two_dim_freqs) {
    auto g = std::make_shared<FiniteGroup>();
    g->name = name;
    g->order = 2 * n;
    g->mult.assign(g->order, std::vector<int>(g->order, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < 2; ++d) {
                    int aa = ((b ? a - c : a + c) % n + n) % n;
                    int bb = (b + d) % 2;
                    g->mult[a + n * b][c + n * d] = aa + n * bb;
                }
    for (auto [cr, cs] : one_dim) {
        g->irrep_dims.push_back(1);
        std::vector<ComplexMatrix> rep(g->order, ComplexMatrix(1, 1));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < 2; ++b)
                rep[a + n * b](0, 0) = std::pow(cr, a) * std::pow(cs, b);
        g->irreps.push_back(std::move(rep));
    }
    for (int f : two_dim_freqs) {
        g->irrep_dims.push_back(2);
        std::vector<ComplexMatrix> rep(g->order);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < 2; ++b) {
                ComplexMatrix m = rot2(kTwoPi * f * a / n);
                if (b) m = m * flip2();
                rep[a + n * b] = m;
            }
        g->irreps.push_back(std::move(rep));
    }
    return g;
}

}  // namespace

FiniteGroupPtr make_cyclic_group(int n) {
    if (n < 1 || n > 4096) throw std::invalid_argument("make_cyclic_group: n out of range");
    auto g = std::make_shared<FiniteGroup>();
    g->name = "z" + std::to_string(n);
    g->order = n;
    g->mult.assign(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g->mult[a][b] = (a + b) % n;
    for (int k = 0; k < n; ++k) {
        g->irrep_dims.push_back(1);
        std::vector<ComplexMatrix> rep(n, ComplexMatrix(1, 1));
        for (int m = 0; m < n; ++m) {
            double th = kTwoPi * k * m / n;
            rep[m](0, 0) = Complex(std::cos(th), std::sin(th));
        }
        g->irreps.push_back(std::move(rep));
    }
    return g;
}

FiniteGroupPtr make_s3() {
    // S_3 as the dihedral group of the triangle.
    return make_dihedral("s3", 3, {{1.0, 1.0}, {1.0, -1.0}}, {1});
}

FiniteGroupPtr make_d4() {
    return make_dihedral("d4", 4, {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}, {1});
}

FiniteGroupPtr make_q8() {
    auto g = std::make_shared<FiniteGroup>();
    g->name = "q8";
    g->order = 8;
    const Complex I(0.0, 1.0);
    // units 1, i, j, k as 2x2 matrices; element (s, u) -> (-1)^s M[u], index u + 4*s
    std::vector<ComplexMatrix> unit(4, ComplexMatrix(2, 2));
    unit[0] << 1, 0, 0, 1;
    unit[1] << I, 0, 0, -I;
    unit[2] << 0, 1, -1, 0;
    unit[3] << 0, I, I, 0;
    auto mat_of = [&](int e) -> ComplexMatrix {
        ComplexMatrix m = unit[e % 4];
        return (e / 4) ? ComplexMatrix(-m) : m;
    };
    g->mult.assign(8, std::vector<int>(8, -1));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            ComplexMatrix p = mat_of(a) * mat_of(b);
            for (int c = 0; c < 8; ++c)
                if ((p - mat_of(c)).cwiseAbs().maxCoeff() < 1e-12) {
                    g->mult[a][b] = c;
                    break;
                }
        }
    // four 1-d irreps factor through Q8 / {+-1} = Z2 x Z2
    const int sign_i[4] = {1, 1, -1, -1};
    const int sign_j[4] = {1, -1, 1, -1};
    for (int r = 0; r < 4; ++r) {
        g->irrep_dims.push_back(1);
        std::vector<ComplexMatrix> rep(8, ComplexMatrix(1, 1));
        const double chi[4] = {1.0, (double)sign_i[r], (double)sign_j[r],
                               (double)(sign_i[r] * sign_j[r])};
        for (int e = 0; e < 8; ++e) rep[e](0, 0) = chi[e % 4];
        g->irreps.push_back(std::move(rep));
    }
    g->irrep_dims.push_back(2);
    std::vector<ComplexMatrix> rep2(8);
    for (int e = 0; e < 8; ++e) rep2[e] = mat_of(e);
    g->irreps.push_back(std::move(rep2));
    return g;
}

double representation_defect(const FiniteGroup& g) {
    double worst = 0.0;
    for (std::size_t r = 0; r < g.irreps.size(); ++r)
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b) {
                ComplexMatrix lhs = g.irreps[r][g.mult[a][b]];
                ComplexMatrix rhs = g.irreps[r][a] * g.irreps[r][b];
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
    return worst;
}

}  // namespace qoslab
