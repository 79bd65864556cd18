#include "dilation/defect.hpp"

#include <sstream>

namespace dilation {

namespace {

CMatrix ordered_product(const std::vector<CMatrix>& factors, Index dim, std::size_t skip) {
    CMatrix p = identity(dim);
    for (std::size_t j = 0; j < factors.size(); ++j)
        if (j != skip) p = p * factors[j];
    return p;
}

ContractionTuple assemble(std::vector<CMatrix> factors, Index dim) {
    ContractionTuple t;
    t.factors = std::move(factors);
    t.product = ordered_product(t.factors, dim, t.factors.size());
    t.coproducts.reserve(t.factors.size());
    for (std::size_t i = 0; i < t.factors.size(); ++i)
        t.coproducts.push_back(ordered_product(t.factors, dim, i));
    return t;
}

}  // namespace

ContractionTuple ContractionTuple::adjoint() const {
    std::vector<CMatrix> adj;
    adj.reserve(factors.size());
    for (const auto& f : factors) adj.push_back(f.adjoint());
    return assemble(std::move(adj), dim());
}

ContractionTuple ContractionTuple::restrict_to(const CMatrix& basis) const {
    std::vector<CMatrix> r;
    r.reserve(factors.size());
    for (const auto& f : factors) r.push_back(basis.adjoint() * f * basis);
    return assemble(std::move(r), basis.cols());
}

ContractionTuple build_tuple(const std::vector<CMatrix>& factors, const Tolerances& tol) {
    if (factors.empty()) throw Error(ErrorCode::ShapeMismatch, "a tuple needs at least one operator");
    const Index d = factors.front().rows();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        require_square(factors[i], "tuple entry");
        if (factors[i].rows() != d)
            throw Error(ErrorCode::ShapeMismatch, "tuple entries must share one dimension");
        if (!all_finite(factors[i]))
            throw Error(ErrorCode::NonFinite, "tuple entry has NaN or Inf entries");
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
        double excess = contraction_excess(factors[i]);
        if (excess > tol.check_tol) {
            std::ostringstream os;
            os << "T_" << i + 1 << " has norm 1 + " << excess;
            throw Error(ErrorCode::NotContraction, os.str());
        }
    }
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j) {
            double c = commutator_norm(factors[i], factors[j]);
            if (c > tol.check_tol * static_cast<double>(std::max<Index>(d, 1))) {
                std::ostringstream os;
                os << "[T_" << i + 1 << ", T_" << j + 1 << "] has norm " << c;
                throw Error(ErrorCode::NotCommuting, os.str());
            }
        }
    return assemble(factors, d);
}

DefectData defect_data(const ContractionTuple& tuple, const Tolerances& tol) {
    DefectData out;
    out.dt = defect_space(tuple.product, tol);
    out.dt_star = defect_space(tuple.product.adjoint(), tol);
    out.per_index.reserve(tuple.factors.size());
    for (std::size_t i = 0; i < tuple.factors.size(); ++i) {
        const CMatrix& ti = tuple.factors[i];
        const CMatrix& tp = tuple.coproducts[i];
        IndexDefects e;
        e.factor = psd_sqrt(hermitian_part(defect_square(ti)), tol);
        e.cofactor = psd_sqrt(hermitian_part(defect_square(tp)), tol);
        e.factor_star = psd_sqrt(hermitian_part(defect_square(ti.adjoint())), tol);
        e.cofactor_star = psd_sqrt(hermitian_part(defect_square(tp.adjoint())), tol);
        out.per_index.push_back(std::move(e));
    }
    out.intertwining = (tuple.product * out.dt.full - out.dt_star.full * tuple.product).norm();
    return out;
}

CanonicalSplit canonical_decomposition(const CMatrix& t, const Tolerances& tol) {
    require_square(t, "canonical_decomposition");
    const Index d = t.rows();
    CanonicalSplit out;
    if (d == 0) {
        out.basis_unitary = CMatrix(0, 0);
        out.basis_cnu = CMatrix(0, 0);
        return out;
    }
    // H1 is the common kernel of I - T^m*T^m and I - T^m T^m* for m = 1..d
    CMatrix stacked(2 * d * d, d);
    CMatrix power = identity(d);
    for (Index m = 0; m < d; ++m) {
        power = power * t;
        stacked.middleRows(2 * m * d, d) = defect_square(power);
        stacked.middleRows((2 * m + 1) * d, d) = defect_square(power.adjoint());
    }
    out.basis_unitary = kernel_basis(stacked, tol);
    out.basis_cnu = complement_basis(out.basis_unitary, d);
    return out;
}

double spectral_radius(const CMatrix& t) {
    require_square(t, "spectral_radius");
    if (t.size() == 0) return 0.0;
    Eigen::ComplexEigenSolver<CMatrix> es(t, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

C0Verdict is_c0(const CMatrix& t, int horizon, const Tolerances& tol) {
    C0Verdict v;
    v.spectral_radius = spectral_radius(t);
    v.c0 = v.spectral_radius < 1.0 - tol.rank_tol;
    CMatrix p = identity(t.rows());
    const CMatrix ts = t.adjoint();
    for (int m = 1; m <= horizon; ++m) {
        p = p * ts;
        v.witness.push_back(op_norm(p));
    }
    return v;
}

bool is_cnu(const CMatrix& t, const Tolerances& tol) {
    return canonical_decomposition(t, tol).basis_unitary.cols() == 0;
}

}  // namespace dilation
