#pragma once

#include <vector>

#include "dilation/block_operator.hpp"
#include "dilation/certificate.hpp"

namespace dilation {

// V_i on H (+) D_T^N: T_i over P_iU_i*D_T in the first column, P_i^perp U_i* on
// the diagonal and P_iU_i* below it.
DilationTuple build_isometric(const ContractionTuple& tuple, const DefectData& defects, const Certificate& cert,
                              int n_blocks, const Tolerances& tol = {});

// W_i on D_T^N (+) H (+) D_{T*}^N from the primal and adjoint certificates.
DilationTuple build_unitary(const ContractionTuple& tuple, const DefectData& defects, const Certificate& cert,
                            const Certificate& adjoint_cert, int n_blocks, const Tolerances& tol = {});

TruncatedBlockOperator schaffer_isometric_of_product(const CMatrix& t, const DefectSpace& dt, int n_blocks);
TruncatedBlockOperator schaffer_unitary_of_product(const CMatrix& t, const DefectSpace& dt,
                                                   const DefectSpace& dt_star, int n_blocks);
TruncatedBlockOperator schaffer_unitary_of_product(const CMatrix& t, int n_blocks, const Tolerances& tol = {});

struct TelescopingReport {
    std::vector<double> partial;  // partial product k against its recursion target
    double final_residual = 0.0;  // full product against the minimal dilation
    double max() const;
};

// Interior residuals; partial product k is compared at margin k + 1.
TelescopingReport telescoping_check(const DilationTuple& dil);

// ||(W - V) restricted to H (+) D_T^{N-1}|| for matching unitary and isometric builds.
double extension_residual(const TruncatedBlockOperator& w, const TruncatedBlockOperator& v);

// Accumulated certificate data: U_1...U_k and P_1 + U_1*P_2U_1 + ... for k = 1..n.
struct Accumulated {
    std::vector<CMatrix> u;
    std::vector<CMatrix> p;
};
Accumulated accumulate(const Certificate& cert);

}  // namespace dilation
