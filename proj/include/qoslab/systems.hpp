#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qoslab/groups.hpp"
#include "qoslab/matcore.hpp"
#include "qoslab/spaces.hpp"

namespace qoslab {

struct SystemParams {
    std::vector<int> sigma_ids;
    std::vector<int> dims;

    std::size_t count() const { return dims.size(); }
    void validate() const;
};

enum class SystemKind {
    GroupDual,
    Su2Dual,
    Rademacher,
    Steinhaus,
    Gaussian,
    BlockedWalsh,
    BlockedTrig,
};

/// A sampled quantized orthonormal system: for each parameter sigma a
/// d_sigma x d_sigma matrix per point of the space.
struct QSystemInstance {
    SystemKind kind = SystemKind::GroupDual;
    std::string kind_tag;  // serialization shorthand, e.g. "s3-dual"
    SystemParams params;
    SampleSpacePtr space;
    /// eval[s][point]
    std::vector<std::vector<ComplexMatrix>> eval;
    std::optional<double> declared_bound;
    bool is_complete = false;
    /// Orthonormality holds analytically (Haar / Gaussian moments), not just
    /// empirically on the stored sample.
    bool exactly_orthonormal = false;

    FiniteGroupPtr group;       // group duals only
    int blocked_levels = 0;     // blocked systems
    int basis_used = 0;         // blocked: base functions consumed
    int grid_size = 0;          // blocked: grid point count

    const ComplexMatrix& phi(std::size_t s, std::size_t point) const { return eval[s][point]; }
    int dim(std::size_t s) const { return params.dims[s]; }
    /// Monte Carlo defect budget 4/sqrt(N); exact spaces get 1e-12.
    double defect_tolerance() const;
};

enum class BlockedBase { Walsh, Trig };

QSystemInstance build_finite_group_dual(const std::string& group_name);
QSystemInstance build_finite_group_dual(FiniteGroupPtr group, const std::string& tag);

/// Truncated SU(2) dual: Wigner D-matrices for twoj = 0 .. twoj_max on a
/// Haar Monte Carlo sample.
QSystemInstance build_su2_dual(int twoj_max, std::size_t sample_count, const RngStream& rng);

QSystemInstance build_rademacher(const SystemParams& params, std::size_t sample_count, const RngStream& rng);
QSystemInstance build_steinhaus(const SystemParams& params, std::size_t sample_count, const RngStream& rng);
QSystemInstance build_gaussian(const SystemParams& params, std::size_t sample_count, const RngStream& rng);

/// Packs a complete scalar orthonormal base (Walsh or discrete trigonometric,
/// 2^levels functions on the dyadic grid) into matrix blocks
/// phi^sigma_ij = e_kappa(sigma,i,j) / sqrt(d_sigma), kappa enumerating sigma
/// in params order and then (i, j) row-major.
QSystemInstance build_blocked_scalar(BlockedBase base, const SystemParams& params, int levels);

/// Index of one matrix entry of the system.
struct EntryIndex {
    int s;  // position in params order
    int i;
    int j;
};

struct OrthonormalityReport {
    double max_defect = 0.0;
    EntryIndex worst_a{0, 0, 0};
    EntryIndex worst_b{0, 0, 0};
    std::size_t pairs_checked = 0;
};

/// Max |<phi^s_ij, phi^s'_i'j'> - delta/d| over the requested sigma pairs
/// (all pairs when the subset is empty).
OrthonormalityReport verify_orthonormality(const QSystemInstance& sys,
                                           const std::vector<int>& sigma_subset = {});

/// Max operator norm over all stored evaluations; a lower estimate of the
/// essential sup on Monte Carlo spaces.
double uniform_bound(const QSystemInstance& sys);

/// Scalar base functions used by blocked systems; exposed for tests.
Complex blocked_base_value(BlockedBase base, int n, double t, int levels);

}  // namespace qoslab
