#pragma once

#include <vector>

#include "dilation/linalg.hpp"

namespace dilation {

// Commuting contractions T_1..T_n with product T = T_1...T_n and co-products
// T_i' = product of the other factors in ascending index order.
struct ContractionTuple {
    std::vector<CMatrix> factors;
    CMatrix product;
    std::vector<CMatrix> coproducts;

    Index n() const { return static_cast<Index>(factors.size()); }
    Index dim() const { return product.rows(); }

    // tuple of adjoints (T_1*, ..., T_n*)
    ContractionTuple adjoint() const;
    // compression B* T_i B to the span of orthonormal columns B (assumed reducing)
    ContractionTuple restrict_to(const CMatrix& basis) const;
};

// Validates shapes, finiteness, contractivity and commutation.
ContractionTuple build_tuple(const std::vector<CMatrix>& factors, const Tolerances& tol = {});

struct IndexDefects {
    CMatrix factor;            // D_{T_i}
    CMatrix cofactor;          // D_{T_i'}
    CMatrix factor_star;       // D_{T_i*}
    CMatrix cofactor_star;     // D_{T_i'*}
};

struct DefectData {
    DefectSpace dt;       // D_T and its range basis
    DefectSpace dt_star;  // D_{T*}
    std::vector<IndexDefects> per_index;
    double intertwining = 0.0;  // ||T D_T - D_{T*} T||_F

    Index rank() const { return dt.rank(); }
    Index rank_star() const { return dt_star.rank(); }
};

DefectData defect_data(const ContractionTuple& tuple, const Tolerances& tol = {});

// H = H1 (+) H2 with T unitary on H1 and completely non-unitary on H2.
struct CanonicalSplit {
    CMatrix basis_unitary;  // H1
    CMatrix basis_cnu;      // H2
};

CanonicalSplit canonical_decomposition(const CMatrix& t, const Tolerances& tol = {});

struct C0Verdict {
    bool c0 = false;
    double spectral_radius = 0.0;
    std::vector<double> witness;  // ||T*^m|| for m = 1..horizon
};

double spectral_radius(const CMatrix& t);
C0Verdict is_c0(const CMatrix& t, int horizon = 32, const Tolerances& tol = {});
bool is_cnu(const CMatrix& t, const Tolerances& tol = {});

}  // namespace dilation
