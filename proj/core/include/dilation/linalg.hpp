#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dilation {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
    NotHermitian,
    NotPSD,
    NotContraction,
    NotCommuting,
    NotUnitary,
    NotProjection,
    ShapeMismatch,
    NonFinite,
    InvalidCertificate,
    NotC0,
    NotPureShift,
    SingularResolvent,
    Unsupported,
    DegreeExceedsTruncation,
    BadParams,
    ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// rank_tol decides numerical ranks, check_tol decides residual acceptance.
struct Tolerances {
    double rank_tol = 1e-10;
    double check_tol = 1e-8;

    // throws BadParams unless 0 < rank_tol < check_tol < 1
    void validate() const;
    // acceptance threshold for residuals of operators on a space of dimension dim
    double accept(Index dim) const { return check_tol * (1.0 + static_cast<double>(dim)); }
};

// Defaults, with check_tol taken from DILATION_TOL when that variable is set.
Tolerances tolerances_from_env();

// Spectral norm. Zero-sized matrices have norm 0.
double op_norm(const CMatrix& a);

CMatrix identity(Index n);
bool all_finite(const CMatrix& a);

// Hermitian part (A + A*)/2.
CMatrix hermitian_part(const CMatrix& a);

// Square root of a Hermitian positive-semidefinite matrix; small negative
// eigenvalues are clamped to zero.
CMatrix psd_sqrt(const CMatrix& a, const Tolerances& tol = {});

// Columns spanning Ran A, keeping singular values above rank_tol * sigma_max.
CMatrix orthonormal_range_basis(const CMatrix& a, const Tolerances& tol = {});

// Columns spanning ker A. Singular values at or below
// rank_tol * max(1, sigma_max) count as zero.
CMatrix kernel_basis(const CMatrix& a, const Tolerances& tol = {});

// Orthonormal basis of the orthogonal complement of span(q) in C^dim.
CMatrix complement_basis(const CMatrix& q, Index dim);

// Moore-Penrose inverse with the same cut-off as orthonormal_range_basis.
CMatrix pinv(const CMatrix& a, const Tolerances& tol = {});

// Contraction C with X = D_{T1*} C D_{T2}, present iff [[T1, X], [0, T2]] is a contraction.
std::optional<CMatrix> dmp_completion(const CMatrix& t1, const CMatrix& t2, const CMatrix& x,
                                      const Tolerances& tol = {});

// Structural residuals. Frobenius based except contraction_excess.
double contraction_excess(const CMatrix& a);
double unitary_residual(const CMatrix& a);
double projection_residual(const CMatrix& a);
double commutator_norm(const CMatrix& a, const CMatrix& b);

// I - A*A, exact polynomial form of the squared defect.
CMatrix defect_square(const CMatrix& a);

// Orthonormal range basis of D_A = (I - A*A)^{1/2} together with D_A itself.
// Eigenvalues of I - A*A at or below rank_tol are treated as zero.
struct DefectSpace {
    CMatrix full;      // D_A on the ambient space
    CMatrix basis;     // ambient x rank, orthonormal columns
    RVector spectrum;  // positive eigenvalues of D_A along basis

    Index rank() const { return basis.cols(); }
    Index ambient() const { return full.rows(); }
    // D_A as a map from the ambient space onto the defect space (rank x ambient)
    CMatrix onto() const;
    // D_A restricted to the defect space, back into the ambient space
    CMatrix from() const;
    // largest / smallest positive eigenvalue, 1 for an empty space
    double condition() const;
};

DefectSpace defect_space(const CMatrix& a, const Tolerances& tol = {});

void require_square(const CMatrix& a, const char* what);
void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what);

}  // namespace dilation
