#include "qoslab/systems.hpp"

#include <cmath>
#include <stdexcept>

#include "qoslab/wigner.hpp"

namespace qoslab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SystemParams default_ids(std::vector<int> dims) {
    SystemParams p;
    p.dims = std::move(dims);
    p.sigma_ids.resize(p.dims.size());
    for (std::size_t s = 0; s < p.dims.size(); ++s) p.sigma_ids[s] = (int)s;
    return p;
}

QSystemInstance make_random_system(SystemKind kind, const std::string& tag,
                                   const SystemParams& params, std::size_t sample_count,
                                   const RngStream& rng,
                                   ComplexMatrix (*draw)(int, RngStream&)) {
    params.validate();
    if (sample_count < 1000)
        throw std::invalid_argument(tag + ": sample_count must be >= 1000");
    QSystemInstance sys;
    sys.kind = kind;
    sys.kind_tag = tag;
    sys.params = params;
    sys.space = make_monte_carlo_space(sample_count, rng.master_seed(), rng.stream_id());
    sys.exactly_orthonormal = true;
    sys.eval.resize(params.count());
    for (std::size_t s = 0; s < params.count(); ++s) {
        sys.eval[s].resize(sample_count);
        const int d = params.dims[s];
        // One derived stream per (sigma, point): the stored ensemble does not
        // depend on the evaluation order.
        for (std::size_t pt = 0; pt < sample_count; ++pt) {
            RngStream sub = rng.substream(s * 0x100000001ULL + pt);
            sys.eval[s][pt] = draw(d, sub);
        }
    }
    return sys;
}

}  // namespace

void SystemParams::validate() const {
    if (dims.empty()) throw std::invalid_argument("SystemParams: dims must be nonempty");
    if (sigma_ids.size() != dims.size())
        throw std::invalid_argument("SystemParams: sigma_ids/dims length mismatch");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("SystemParams: dims must be >= 1");
}

double QSystemInstance::defect_tolerance() const {
    if (space->kind == SpaceKind::ExactFinite) return 1e-12;
    return 4.0 / std::sqrt((double)space->size());
}

QSystemInstance build_finite_group_dual(const std::string& group_name) {
    FiniteGroupPtr g;
    if (group_name == "s3")
        g = make_s3();
    else if (group_name == "d4")
        g = make_d4();
    else if (group_name == "q8")
        g = make_q8();
    else if (group_name.size() > 1 && group_name[0] == 'z') {
        int n = 0;
        try {
            n = std::stoi(group_name.substr(1));
        } catch (const std::exception&) {
            throw std::invalid_argument("build_finite_group_dual: unknown group " + group_name);
        }
        g = make_cyclic_group(n);
    } else {
        throw std::invalid_argument("build_finite_group_dual: unknown group " + group_name);
    }
    return build_finite_group_dual(g, group_name + "-dual");
}

QSystemInstance build_finite_group_dual(FiniteGroupPtr group, const std::string& tag) {
    QSystemInstance sys;
    sys.kind = SystemKind::GroupDual;
    sys.kind_tag = tag;
    sys.group = group;
    sys.params = default_ids(group->irrep_dims);
    auto sp = std::make_shared<SampleSpace>();
    sp->kind = SpaceKind::ExactFinite;
    sp->weights.assign(group->order, 1.0 / group->order);
    sys.space = sp;
    sys.eval = group->irreps;
    sys.declared_bound = 1.0;       // unitary representations
    sys.is_complete = true;         // Peter-Weyl
    sys.exactly_orthonormal = true; // Schur orthogonality
    return sys;
}

QSystemInstance build_su2_dual(int twoj_max, std::size_t sample_count, const RngStream& rng) {
    if (twoj_max < 0 || twoj_max > 12) throw resource_error("build_su2_dual: twoj_max out of [0, 12]");
    if (sample_count < 1000) throw std::invalid_argument("build_su2_dual: sample_count must be >= 1000");
    QSystemInstance sys;
    sys.kind = SystemKind::Su2Dual;
    sys.kind_tag = "su2-dual";
    std::vector<int> dims;
    for (int twoj = 0; twoj <= twoj_max; ++twoj) dims.push_back(twoj + 1);
    sys.params = default_ids(std::move(dims));
    sys.space = make_monte_carlo_space(sample_count, rng.master_seed(), rng.stream_id());
    sys.declared_bound = 1.0;
    sys.exactly_orthonormal = true;
    sys.eval.resize(sys.params.count());
    for (auto& blk : sys.eval) blk.resize(sample_count);
    for (std::size_t pt = 0; pt < sample_count; ++pt) {
        RngStream sub = rng.substream(pt);
        Su2Element g = haar_su2(sub);
        for (int twoj = 0; twoj <= twoj_max; ++twoj) sys.eval[twoj][pt] = wigner_d(twoj, g);
    }
    return sys;
}

QSystemInstance build_rademacher(const SystemParams& params, std::size_t sample_count, const RngStream& rng) {
    QSystemInstance sys = make_random_system(SystemKind::Rademacher, "rademacher", params,
                                             sample_count, rng, &haar_orthogonal);
    sys.declared_bound = 1.0;
    return sys;
}

QSystemInstance build_steinhaus(const SystemParams& params, std::size_t sample_count, const RngStream& rng) {
    QSystemInstance sys = make_random_system(SystemKind::Steinhaus, "steinhaus", params,
                                             sample_count, rng, &haar_unitary);
    sys.declared_bound = 1.0;
    return sys;
}

QSystemInstance build_gaussian(const SystemParams& params, std::size_t sample_count, const RngStream& rng) {
    // No declared bound: the system is not uniformly bounded.
    return make_random_system(SystemKind::Gaussian, "gaussian", params, sample_count, rng,
                              &gaussian_matrix);
}

Complex blocked_base_value(BlockedBase base, int n, double t, int levels) {
    if (base == BlockedBase::Walsh) {
        // Walsh character w_A with A = bit set of n (bit b <-> delta_{b+1}).
        int sign = 1;
        for (int b = 0; b < levels; ++b)
            if (n & (1 << b)) sign *= dyadic_delta(b + 1, t);
        return (double)sign;
    }
    double th = kTwoPi * n * t;
    return Complex(std::cos(th), std::sin(th));
}

QSystemInstance build_blocked_scalar(BlockedBase base, const SystemParams& params, int levels) {
    params.validate();
    long need = 0;
    for (int d : params.dims) need += (long)d * d;
    const long basis_size = 1L << levels;
    if (need > basis_size)
        throw std::invalid_argument("build_blocked_scalar: basis exhausted (need " +
                                    std::to_string(need) + " functions, base has " +
                                    std::to_string(basis_size) + ")");
    QSystemInstance sys;
    sys.kind = base == BlockedBase::Walsh ? SystemKind::BlockedWalsh : SystemKind::BlockedTrig;
    sys.kind_tag = base == BlockedBase::Walsh ? "walsh-blocked" : "trig-blocked";
    sys.params = params;
    sys.space = make_unit_interval_space(levels);
    sys.blocked_levels = levels;
    sys.basis_used = (int)need;
    sys.grid_size = (int)basis_size;
    // Entries have modulus 1/sqrt(d), so the block operator norm is at most
    // its Frobenius norm sqrt(d^2 / d) = sqrt(d).
    int dmax = 1;
    for (int d : params.dims) dmax = std::max(dmax, d);
    sys.declared_bound = std::sqrt((double)dmax);
    sys.is_complete = true;  // the base spans the grid function space
    const std::size_t npts = sys.space->size();
    sys.eval.resize(params.count());
    int next = 0;
    for (std::size_t s = 0; s < params.count(); ++s) {
        const int d = params.dims[s];
        const double scale = 1.0 / std::sqrt((double)d);
        sys.eval[s].assign(npts, ComplexMatrix(d, d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                // kappa ordering: sigma order, then row-major. The walsh base
                // starts at w_1 so delta_k = -w_{2^(k-1)} lands in an early
                // block, with the constant w_0 wrapped into the last slot; the
                // trig base keeps frequency = slot so power-of-two frequencies
                // stay aligned with block boundaries.
                int n = next + i * d + j;
                if (base == BlockedBase::Walsh) n = (n + 1) % (int)basis_size;
                for (std::size_t pt = 0; pt < npts; ++pt)
                    sys.eval[s][pt](i, j) = scale * blocked_base_value(base, n, sys.space->coords[pt], levels);
            }
        next += d * d;
    }
    return sys;
}

OrthonormalityReport verify_orthonormality(const QSystemInstance& sys,
                                           const std::vector<int>& sigma_subset) {
    std::vector<int> subset = sigma_subset;
    if (subset.empty())
        for (std::size_t s = 0; s < sys.params.count(); ++s) subset.push_back((int)s);
    const std::size_t npts = sys.space->size();
    OrthonormalityReport rep;
    for (int sa : subset)
        for (int sb : subset) {
            const int da = sys.dim(sa), db = sys.dim(sb);
            for (int ia = 0; ia < da; ++ia)
                for (int ja = 0; ja < da; ++ja)
                    for (int ib = 0; ib < db; ++ib)
                        for (int jb = 0; jb < db; ++jb) {
                            std::complex<long double> acc = 0.0L;
                            for (std::size_t pt = 0; pt < npts; ++pt) {
                                Complex v = sys.eval[sa][pt](ia, ja) *
                                            std::conj(sys.eval[sb][pt](ib, jb));
                                acc += (long double)sys.space->weights[pt] *
                                       std::complex<long double>(v.real(), v.imag());
                            }
                            double target =
                                (sa == sb && ia == ib && ja == jb) ? 1.0 / da : 0.0;
                            double defect = (double)std::abs(acc - (long double)target);
                            ++rep.pairs_checked;
                            if (defect > rep.max_defect) {
                                rep.max_defect = defect;
                                rep.worst_a = {sa, ia, ja};
                                rep.worst_b = {sb, ib, jb};
                            }
                        }
        }
    return rep;
}

double uniform_bound(const QSystemInstance& sys) {
    double worst = 0.0;
    for (std::size_t s = 0; s < sys.params.count(); ++s)
        for (const auto& m : sys.eval[s])
            worst = std::max(worst, schatten_norm(m, Exponent::inf()));
    return worst;
}

}  // namespace qoslab
