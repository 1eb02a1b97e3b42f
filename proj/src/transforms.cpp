#include "qoslab/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace qoslab {

VectorSpaceDesc VectorSpaceDesc::lq(Exponent q, int m) {
    if (m < 1) throw std::invalid_argument("VectorSpaceDesc::lq: m must be >= 1");
    VectorSpaceDesc d;
    d.kind = SpaceDescKind::Lq;
    d.q = q;
    d.m = m;
    return d;
}

VectorSpaceDesc VectorSpaceDesc::schatten(Exponent q, int m) {
    if (m < 1) throw std::invalid_argument("VectorSpaceDesc::schatten: m must be >= 1");
    VectorSpaceDesc d;
    d.kind = SpaceDescKind::Schatten;
    d.q = q;
    d.m = m;
    return d;
}

std::string VectorSpaceDesc::str() const {
    switch (kind) {
        case SpaceDescKind::Scalar:
            return "scalar";
        case SpaceDescKind::Lq:
            return "l" + q.str() + ":" + std::to_string(m);
        default:
            return "s" + q.str() + ":" + std::to_string(m);
    }
}

double vector_norm(const VectorSpaceDesc& desc, const Eigen::VectorXcd& v) {
    if (v.size() != desc.dim()) throw std::invalid_argument("vector_norm: dimension mismatch");
    switch (desc.kind) {
        case SpaceDescKind::Scalar:
            return std::abs(v(0));
        case SpaceDescKind::Lq: {
            if (desc.q.is_inf()) return v.cwiseAbs().maxCoeff();
            const double q = desc.q.value();
            if (q == 2.0) return v.norm();
            long double acc = 0.0L;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                acc += std::pow((long double)std::abs(v(i)), (long double)q);
            return (double)std::pow(acc, 1.0L / q);
        }
        case SpaceDescKind::Schatten: {
            ComplexMatrix m(desc.m, desc.m);
            for (int i = 0; i < desc.m; ++i)
                for (int j = 0; j < desc.m; ++j) m(i, j) = v(i * desc.m + j);
            return schatten_norm(m, desc.q);
        }
    }
    throw std::logic_error("vector_norm: unreachable");
}

CoeffFamily CoeffFamily::zero(const SystemParams& params, const VectorSpaceDesc& desc) {
    params.validate();
    CoeffFamily a;
    a.params = params;
    a.desc = desc;
    a.blocks.resize(params.count());
    for (std::size_t s = 0; s < params.count(); ++s)
        a.blocks[s].assign(desc.dim(), ComplexMatrix::Zero(params.dims[s], params.dims[s]));
    return a;
}

void CoeffFamily::validate() const {
    params.validate();
    if (blocks.size() != params.count())
        throw std::invalid_argument("CoeffFamily: block count does not match params");
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        if ((int)blocks[s].size() != desc.dim())
            throw std::invalid_argument("CoeffFamily: coordinate count does not match E");
        for (const auto& m : blocks[s]) {
            if (m.rows() != params.dims[s] || m.cols() != params.dims[s])
                throw std::invalid_argument("CoeffFamily: block shape does not match dims");
            if (!all_finite(m)) throw std::invalid_argument("CoeffFamily: non-finite entries");
        }
    }
}

CoeffFamily forward(const SampledVectorFunction& f, const QSystemInstance& sys) {
    if (f.space != sys.space)
        throw std::invalid_argument("forward: function space differs from system space");
    const int edim = f.desc.dim();
    if (f.values.rows() != (Eigen::Index)sys.space->size() || f.values.cols() != edim)
        throw std::invalid_argument("forward: value shape mismatch");
    CoeffFamily a = CoeffFamily::zero(sys.params, f.desc);
    const std::size_t npts = sys.space->size();
    for (std::size_t s = 0; s < sys.params.count(); ++s) {
        const int d = sys.params.dims[s];
        // acc[e](a, b), compensated in long double
        std::vector<Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>> acc(
            edim);
        for (int e = 0; e < edim; ++e)
            acc[e].setZero(d, d);
        for (std::size_t pt = 0; pt < npts; ++pt) {
            const long double w = sys.space->weights[pt];
            const ComplexMatrix& phi = sys.eval[s][pt];
            for (int e = 0; e < edim; ++e) {
                const std::complex<long double> fv(f.values(pt, e).real(), f.values(pt, e).imag());
                const std::complex<long double> wf = w * fv;
                for (int ai = 0; ai < d; ++ai)
                    for (int bj = 0; bj < d; ++bj) {
                        const Complex p = phi(bj, ai);
                        acc[e](ai, bj) += wf * std::complex<long double>(p.real(), -p.imag());
                    }
            }
        }
        for (int e = 0; e < edim; ++e)
            for (int ai = 0; ai < d; ++ai)
                for (int bj = 0; bj < d; ++bj)
                    a.blocks[s][e](ai, bj) = Complex((double)acc[e](ai, bj).real(),
                                                     (double)acc[e](ai, bj).imag());
    }
    return a;
}

SampledVectorFunction inverse(const CoeffFamily& a, const QSystemInstance& sys) {
    a.validate();
    if (a.params.dims != sys.params.dims || a.params.sigma_ids != sys.params.sigma_ids)
        throw std::invalid_argument("inverse: params do not match system");
    const int edim = a.desc.dim();
    const std::size_t npts = sys.space->size();
    SampledVectorFunction f;
    f.space = sys.space;
    f.desc = a.desc;
    f.values.setZero(npts, edim);
    for (std::size_t pt = 0; pt < npts; ++pt) {
        for (int e = 0; e < edim; ++e) {
            std::complex<long double> acc = 0.0L;
            for (std::size_t s = 0; s < sys.params.count(); ++s) {
                const int d = sys.params.dims[s];
                const ComplexMatrix& phi = sys.eval[s][pt];
                std::complex<long double> tr = 0.0L;
                for (int ai = 0; ai < d; ++ai)
                    for (int bj = 0; bj < d; ++bj) {
                        const Complex t = a.blocks[s][e](ai, bj) * phi(bj, ai);
                        tr += std::complex<long double>(t.real(), t.imag());
                    }
                acc += (long double)d * tr;
            }
            f.values(pt, e) = Complex((double)acc.real(), (double)acc.imag());
        }
    }
    return f;
}

namespace {

/// Block norm ||A^s|| in S^p_d(E) for the supported (p, E) combinations.
double block_norm(const CoeffFamily& a, std::size_t s, const Exponent& p) {
    const int d = a.params.dims[s];
    const auto& slices = a.blocks[s];
    if (a.desc.kind == SpaceDescKind::Scalar) return schatten_norm(slices[0], p);
    if (d == 1) {
        // S^p over 1x1 matrices is E itself, any E and p.
        Eigen::VectorXcd v(a.desc.dim());
        for (int e = 0; e < a.desc.dim(); ++e) v(e) = slices[e](0, 0);
        return vector_norm(a.desc, v);
    }
    if (a.desc.hilbertian() && !p.is_inf() && p.value() == 2.0) {
        // Fubini: S^2_d(E) for Hilbertian E is the Frobenius norm over all
        // coordinates.
        long double acc = 0.0L;
        for (const auto& m : slices)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) acc += (long double)std::norm(m(i, j));
        return (double)std::sqrt(acc);
    }
    if (a.desc.kind == SpaceDescKind::Lq && !p.is_inf() && !a.desc.q.is_inf() &&
        a.desc.q.value() == p.value()) {
        // l^q combination of coordinatewise Schatten norms, valid at p = q.
        const double q = p.value();
        long double acc = 0.0L;
        for (const auto& m : slices) acc += std::pow((long double)schatten_norm(m, p), (long double)q);
        return (double)std::pow(acc, 1.0L / q);
    }
    throw unsupported_norm_error("lp_sigma_norm: unsupported (p=" + p.str() + ", E=" +
                                 a.desc.str() + ") combination on blocks of size > 1");
}

}  // namespace

double lp_sigma_norm(const CoeffFamily& a, const Exponent& p) {
    a.validate();
    if (p.is_inf()) {
        if (a.desc.kind != SpaceDescKind::Scalar) {
            // S^inf_d(E) needs operator-space structure for non-scalar E;
            // 1x1 blocks are still fine.
            for (int d : a.params.dims)
                if (d > 1)
                    throw unsupported_norm_error(
                        "lp_sigma_norm: p = inf restricted to scalar E on blocks of size > 1");
        }
        double sup = 0.0;
        for (std::size_t s = 0; s < a.params.count(); ++s)
            sup = std::max(sup, block_norm(a, s, p));
        return sup;
    }
    const double pv = p.value();
    long double acc = 0.0L;
    for (std::size_t s = 0; s < a.params.count(); ++s) {
        const double bn = block_norm(a, s, p);
        acc += (long double)a.params.dims[s] * std::pow((long double)bn, (long double)pv);
    }
    return (double)std::pow(acc, 1.0L / pv);
}

double lp_omega_norm(const SampledVectorFunction& f, const Exponent& p) {
    if (!f.space) throw std::invalid_argument("lp_omega_norm: no space");
    if (f.values.rows() != (Eigen::Index)f.space->size())
        throw std::invalid_argument("lp_omega_norm: value count mismatch");
    const std::size_t npts = f.space->size();
    if (p.is_inf()) {
        double sup = 0.0;
        for (std::size_t pt = 0; pt < npts; ++pt)
            sup = std::max(sup, vector_norm(f.desc, f.values.row(pt)));
        return sup;
    }
    const double pv = p.value();
    const bool equal = f.space->kind == SpaceKind::MonteCarlo;
    long double acc = 0.0L;
    for (std::size_t pt = 0; pt < npts; ++pt) {
        const double nv = vector_norm(f.desc, f.values.row(pt));
        const long double term = std::pow((long double)nv, (long double)pv);
        acc += equal ? term : (long double)f.space->weights[pt] * term;
    }
    if (equal) acc /= (long double)npts;
    return (double)std::pow(acc, 1.0L / pv);
}

CoeffFamily amplify(const CoeffFamily& a, const ComplexMatrix& t) {
    a.validate();
    if (a.desc.kind != SpaceDescKind::Scalar)
        throw unsupported_norm_error("amplify: only scalar families can be amplified");
    if (t.rows() != t.cols() || t.rows() < 1)
        throw std::invalid_argument("amplify: T must be square and nonempty");
    const int k = (int)t.rows();
    CoeffFamily out = CoeffFamily::zero(a.params, VectorSpaceDesc::schatten(Exponent(2.0), k));
    for (std::size_t s = 0; s < a.params.count(); ++s)
        for (int u = 0; u < k; ++u)
            for (int v = 0; v < k; ++v) out.blocks[s][u * k + v] = t(u, v) * a.blocks[s][0];
    return out;
}

CoeffFamily add(const CoeffFamily& a, const CoeffFamily& b) {
    if (!(a.desc == b.desc) || a.params.dims != b.params.dims)
        throw std::invalid_argument("add: incompatible families");
    CoeffFamily out = a;
    for (std::size_t s = 0; s < out.blocks.size(); ++s)
        for (std::size_t e = 0; e < out.blocks[s].size(); ++e) out.blocks[s][e] += b.blocks[s][e];
    return out;
}

CoeffFamily scale(const CoeffFamily& a, Complex factor) {
    CoeffFamily out = a;
    for (auto& blk : out.blocks)
        for (auto& m : blk) m *= factor;
    return out;
}

SampledVectorFunction subtract(const SampledVectorFunction& a, const SampledVectorFunction& b) {
    if (a.space != b.space || !(a.desc == b.desc))
        throw std::invalid_argument("subtract: incompatible functions");
    SampledVectorFunction out = a;
    out.values -= b.values;
    return out;
}

}  // namespace qoslab
