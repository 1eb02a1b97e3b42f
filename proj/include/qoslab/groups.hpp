#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qoslab/matcore.hpp"

namespace qoslab {

/// Finite group with its full multiplication table and a complete set of
/// unitary irreducible representations, stored as exact-entry matrices.
struct FiniteGroup {
    std::string name;
    int order = 0;
    std::vector<int> irrep_dims;
    /// mult[g][h] = index of g*h
    std::vector<std::vector<int>> mult;
    /// irreps[r][g] = matrix of irrep r at element g
    std::vector<std::vector<ComplexMatrix>> irreps;

    int identity = 0;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

FiniteGroupPtr make_cyclic_group(int n);  // Z_n, characters exp(2*pi*i*km/n)
FiniteGroupPtr make_s3();                 // dims (1,1,2)
FiniteGroupPtr make_d4();                 // dims (1,1,1,1,2)
FiniteGroupPtr make_q8();                 // dims (1,1,1,1,2)

/// Max entrywise deviation of rep(gh) from rep(g)rep(h) over all pairs and
/// irreps. Zero-cost audit for the hardcoded tables.
double representation_defect(const FiniteGroup& g);

}  // namespace qoslab
