#include "qoslab/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace qoslab {

int dyadic_delta(int k, double t) {
    if (k < 1 || k > 62) throw std::invalid_argument("dyadic_delta: k out of [1, 62]");
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("dyadic_delta: t outside [0, 1)");
    const std::uint64_t cells = std::uint64_t{1} << k;
    std::uint64_t j0 = (std::uint64_t)(t * (double)cells);  // j = j0 + 1
    if (j0 >= cells) j0 = cells - 1;                        // guard rounding at t -> 1-
    return (j0 % 2 == 0) ? 1 : -1;
}

Complex integrate(const SampledScalarFunction& f) {
    if (!f.space) throw std::invalid_argument("integrate: function has no space");
    if (f.values.size() != f.space->size())
        throw std::invalid_argument("integrate: value count does not match space");
    // Equal-weight spaces: sum first, divide once. Keeps integrate(1) == 1
    // exact even when 1/N is not representable.
    const bool equal = f.space->kind == SpaceKind::MonteCarlo;
    const double n = (double)f.space->size();
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double w = equal ? 1.0 : f.space->weights[i];
        double xr = w * f.values[i].real() - cr;
        double tr = sr + xr;
        cr = (tr - sr) - xr;
        sr = tr;
        double xi = w * f.values[i].imag() - ci;
        double ti = si + xi;
        ci = (ti - si) - xi;
        si = ti;
    }
    if (equal) return {sr / n, si / n};
    return {sr, si};
}

SampleSpacePtr make_unit_interval_space(int levels) {
    if (levels < 1) throw std::invalid_argument("make_unit_interval_space: levels must be >= 1");
    if (levels > 24) throw resource_error("make_unit_interval_space: levels > 24");
    const std::size_t n = std::size_t{1} << levels;
    auto sp = std::make_shared<SampleSpace>();
    sp->kind = SpaceKind::ExactFinite;
    sp->weights.assign(n, std::ldexp(1.0, -levels));
    sp->coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) sp->coords[i] = ((double)i + 0.5) * std::ldexp(1.0, -levels);
    return sp;
}

SampleSpacePtr make_monte_carlo_space(std::size_t n, std::uint64_t master_seed, std::uint64_t stream_id) {
    if (n == 0) throw std::invalid_argument("make_monte_carlo_space: n must be positive");
    auto sp = std::make_shared<SampleSpace>();
    sp->kind = SpaceKind::MonteCarlo;
    sp->weights.assign(n, 1.0 / (double)n);
    sp->master_seed = master_seed;
    sp->stream_id = stream_id;
    return sp;
}

}  // namespace qoslab
