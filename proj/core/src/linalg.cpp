#include "dilation/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace dilation {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotContraction: return "NotContraction";
        case ErrorCode::NotCommuting: return "NotCommuting";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::NotProjection: return "NotProjection";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::InvalidCertificate: return "InvalidCertificate";
        case ErrorCode::NotC0: return "NotC0";
        case ErrorCode::NotPureShift: return "NotPureShift";
        case ErrorCode::SingularResolvent: return "SingularResolvent";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::DegreeExceedsTruncation: return "DegreeExceedsTruncation";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void Tolerances::validate() const {
    if (!(rank_tol > 0.0 && rank_tol < check_tol && check_tol < 1.0)) {
        std::ostringstream os;
        os << "tolerances must satisfy 0 < rank_tol < check_tol < 1 (got " << rank_tol << ", "
           << check_tol << ")";
        throw Error(ErrorCode::BadParams, os.str());
    }
}

Tolerances tolerances_from_env() {
    Tolerances tol;
    if (const char* env = std::getenv("DILATION_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !std::isfinite(v))
            throw Error(ErrorCode::BadParams, std::string("DILATION_TOL is not a number: ") + env);
        tol.check_tol = v;
    }
    tol.validate();
    return tol;
}

double op_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

bool all_finite(const CMatrix& a) { return a.allFinite(); }

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        std::ostringstream os;
        os << what << " must be square, got " << a.rows() << "x" << a.cols();
        throw Error(ErrorCode::ShapeMismatch, os.str());
    }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << what << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::ShapeMismatch, os.str());
    }
}

CMatrix psd_sqrt(const CMatrix& a, const Tolerances& tol) {
    require_square(a, "psd_sqrt input");
    if (a.size() == 0) return a;
    const double scale = 1.0 + a.norm();
    if ((a - a.adjoint()).norm() > tol.check_tol * scale)
        throw Error(ErrorCode::NotHermitian, "psd_sqrt input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
    RVector ev = es.eigenvalues();
    if (ev.minCoeff() < -tol.check_tol * scale)
        throw Error(ErrorCode::NotPSD, "psd_sqrt input has a negative eigenvalue");
    // eigenvalues within the solver's backward error of zero are zero
    const double floor = 8.0 * static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() *
                         ev.cwiseAbs().maxCoeff();
    for (Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) <= floor ? 0.0 : std::sqrt(ev(i));
    const CMatrix& v = es.eigenvectors();
    return v * ev.cast<cplx>().asDiagonal() * v.adjoint();
}

CMatrix orthonormal_range_basis(const CMatrix& a, const Tolerances& tol) {
    if (a.size() == 0) return CMatrix(a.rows(), 0);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
    const RVector& s = svd.singularValues();
    if (s(0) <= 0.0) return CMatrix(a.rows(), 0);
    Index r = 0;
    while (r < s.size() && s(r) > tol.rank_tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

CMatrix kernel_basis(const CMatrix& a, const Tolerances& tol) {
    if (a.cols() == 0) return CMatrix(0, 0);
    if (a.rows() == 0) return identity(a.cols());
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double cut = tol.rank_tol * std::max(1.0, s(0));
    Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixV().rightCols(a.cols() - r);
}

CMatrix complement_basis(const CMatrix& q, Index dim) {
    if (q.cols() == 0) return identity(dim);
    CMatrix proj = identity(dim) - q * q.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(proj));
    std::vector<Index> keep;
    for (Index i = 0; i < dim; ++i)
        if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    CMatrix out(dim, static_cast<Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Index>(j)) = es.eigenvectors().col(keep[j]);
    return out;
}

CMatrix pinv(const CMatrix& a, const Tolerances& tol) {
    if (a.size() == 0) return CMatrix::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    RVector inv = RVector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol.rank_tol * s(0)) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

std::optional<CMatrix> dmp_completion(const CMatrix& t1, const CMatrix& t2, const CMatrix& x,
                                      const Tolerances& tol) {
    require_square(t1, "dmp_completion T1");
    require_square(t2, "dmp_completion T2");
    if (x.rows() != t1.rows() || x.cols() != t2.cols())
        throw Error(ErrorCode::ShapeMismatch, "dmp_completion: X must map the T2 space into the T1 space");
    if (op_norm(t1) > 1.0 + tol.check_tol || op_norm(t2) > 1.0 + tol.check_tol)
        throw Error(ErrorCode::NotContraction, "dmp_completion: diagonal entries must be contractions");
    const CMatrix d1 = psd_sqrt(defect_square(t1.adjoint()), tol);
    const CMatrix d2 = psd_sqrt(defect_square(t2), tol);
    CMatrix c = pinv(d1, tol) * x * pinv(d2, tol);
    const double round_trip = op_norm(x - d1 * c * d2);
    if (round_trip > tol.check_tol * (1.0 + op_norm(x))) return std::nullopt;
    if (op_norm(c) > 1.0 + tol.check_tol) return std::nullopt;
    return c;
}

double contraction_excess(const CMatrix& a) { return std::max(0.0, op_norm(a) - 1.0); }

double unitary_residual(const CMatrix& a) {
    require_square(a, "unitary_residual");
    const CMatrix id = identity(a.rows());
    return (a.adjoint() * a - id).norm() + (a * a.adjoint() - id).norm();
}

double projection_residual(const CMatrix& a) {
    require_square(a, "projection_residual");
    return (a * a - a).norm() + (a - a.adjoint()).norm();
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
    require_square(a, "commutator_norm");
    require_same_shape(a, b, "commutator_norm");
    return (a * b - b * a).norm();
}

CMatrix defect_square(const CMatrix& a) {
    return identity(a.cols()) - a.adjoint() * a;
}

CMatrix DefectSpace::onto() const { return spectrum.cast<cplx>().asDiagonal() * basis.adjoint(); }

CMatrix DefectSpace::from() const { return basis * spectrum.cast<cplx>().asDiagonal(); }

double DefectSpace::condition() const {
    if (spectrum.size() == 0) return 1.0;
    return spectrum.maxCoeff() / spectrum.minCoeff();
}

DefectSpace defect_space(const CMatrix& a, const Tolerances& tol) {
    require_square(a, "defect_space");
    const Index d = a.rows();
    DefectSpace out;
    if (d == 0) {
        out.full = CMatrix(0, 0);
        out.basis = CMatrix(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(defect_square(a)));
    const RVector& ev = es.eigenvalues();
    std::vector<Index> keep;
    for (Index i = d - 1; i >= 0; --i)
        if (ev(i) > tol.rank_tol) keep.push_back(i);
    out.basis.resize(d, static_cast<Index>(keep.size()));
    out.spectrum.resize(static_cast<Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) {
        out.basis.col(static_cast<Index>(j)) = es.eigenvectors().col(keep[j]);
        out.spectrum(static_cast<Index>(j)) = std::sqrt(ev(keep[j]));
    }
    out.full = out.from() * out.basis.adjoint();
    return out;
}

}  // namespace dilation
