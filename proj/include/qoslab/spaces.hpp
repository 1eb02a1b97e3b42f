#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qoslab/matcore.hpp"

namespace qoslab {

enum class SpaceKind { ExactFinite, MonteCarlo };

/// Discretization of the probability space (Omega, mu). Points are indices;
/// exact-finite spaces carry exact dyadic/group weights, monte-carlo spaces
/// equal weights 1/N together with the seed they were drawn from.
struct SampleSpace {
    SpaceKind kind = SpaceKind::ExactFinite;
    std::vector<double> weights;
    /// Representative coordinate in [0,1) per point, set for dyadic grids so
    /// the system delta_k can be evaluated pointwise. Empty otherwise.
    std::vector<double> coords;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::uint64_t> stream_id;

    std::size_t size() const { return weights.size(); }
};

using SampleSpacePtr = std::shared_ptr<const SampleSpace>;

struct SampledScalarFunction {
    SampleSpacePtr space;
    std::vector<Complex> values;
};

/// delta_k(t) = (-1)^(j+1) on the dyadic cell D_j^k = [(j-1)2^-k, j2^-k).
int dyadic_delta(int k, double t);

/// Weighted sum over the space; Kahan-compensated in both components.
Complex integrate(const SampledScalarFunction& f);

/// Exact dyadic grid of 2^levels equal cells; the point coordinate is the
/// cell midpoint, so every delta_k with k <= levels is constant on each cell.
SampleSpacePtr make_unit_interval_space(int levels);

SampleSpacePtr make_monte_carlo_space(std::size_t n, std::uint64_t master_seed, std::uint64_t stream_id);

}  // namespace qoslab
