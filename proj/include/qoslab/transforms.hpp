#pragma once

#include <vector>

#include "qoslab/systems.hpp"

namespace qoslab {

enum class SpaceDescKind { Scalar, Lq, Schatten };

/// Coefficient space E at the Banach level: scalars, l^q_m, or the Schatten
/// q-class over M_m (elements stored as m*m coordinate vectors, row-major).
struct VectorSpaceDesc {
    SpaceDescKind kind = SpaceDescKind::Scalar;
    Exponent q = Exponent(2.0);
    int m = 1;

    static VectorSpaceDesc scalar() { return {}; }
    static VectorSpaceDesc lq(Exponent q, int m);
    static VectorSpaceDesc schatten(Exponent q, int m);

    int dim() const { return kind == SpaceDescKind::Schatten ? m * m : (kind == SpaceDescKind::Lq ? m : 1); }
    bool hilbertian() const {
        return kind == SpaceDescKind::Scalar || (!q.is_inf() && q.value() == 2.0);
    }
    bool operator==(const VectorSpaceDesc& o) const {
        return kind == o.kind && q == o.q && m == o.m;
    }
    std::string str() const;
};

/// Norm of one E-vector (length desc.dim()).
double vector_norm(const VectorSpaceDesc& desc, const Eigen::VectorXcd& v);

/// Coefficient family A: per sigma a d x d block of E-vectors, stored as one
/// d x d complex matrix per E-coordinate.
struct CoeffFamily {
    SystemParams params;
    VectorSpaceDesc desc;
    /// blocks[s][e], each dims[s] x dims[s]
    std::vector<std::vector<ComplexMatrix>> blocks;

    static CoeffFamily zero(const SystemParams& params, const VectorSpaceDesc& desc);
    void validate() const;
    bool is_scalar() const { return desc.kind == SpaceDescKind::Scalar; }
};

/// E-valued function sampled on a space; values(point, coordinate).
struct SampledVectorFunction {
    SampleSpacePtr space;
    VectorSpaceDesc desc;
    Eigen::MatrixXcd values;
};

/// A^sigma_ab = integral of f(w) conj(phi^sigma_ba(w)) d mu(w).
CoeffFamily forward(const SampledVectorFunction& f, const QSystemInstance& sys);

/// f(w) = sum_sigma d_sigma tr(A^sigma phi^sigma(w)).
SampledVectorFunction inverse(const CoeffFamily& a, const QSystemInstance& sys);

/// (sum_sigma d_sigma ||A^sigma||^p)^(1/p), sup over sigma at p = inf.
/// Supported block norms: scalar E any p; Hilbertian E at p = 2 (Frobenius
/// over all coordinates, the Fubini identification); lq(q, m) at p = q;
/// any E on 1x1 blocks. Anything else raises unsupported_norm_error.
double lp_sigma_norm(const CoeffFamily& a, const Exponent& p);

/// Bochner norm (sum_points weight * ||value||_E^p)^(1/p); max at p = inf.
double lp_omega_norm(const SampledVectorFunction& f, const Exponent& p);

/// Level-k amplification of a scalar family: blocks become kron(A^sigma, T),
/// reinterpreted as schatten(2, k)-valued coefficients.
CoeffFamily amplify(const CoeffFamily& a, const ComplexMatrix& t);

// Convenience arithmetic used by the experiments.
CoeffFamily add(const CoeffFamily& a, const CoeffFamily& b);
CoeffFamily scale(const CoeffFamily& a, Complex factor);
SampledVectorFunction subtract(const SampledVectorFunction& a, const SampledVectorFunction& b);

}  // namespace qoslab
