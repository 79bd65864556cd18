#pragma once

#include <utility>
#include <vector>

#include "dilation/block_operator.hpp"
#include "dilation/certificate.hpp"

namespace dilation {

// Symbol A0 + z A1 (or A0 + conj(z) A1 for co-analytic operators).
struct LinearSymbol {
    CMatrix a0;
    CMatrix a1;

    Index fiber() const { return a0.rows(); }
    // U P^perp + z U P
    static LinearSymbol analytic(const CMatrix& u, const CMatrix& p);
    // P^perp U* + z P U*
    static LinearSymbol adjoint_form(const CMatrix& u, const CMatrix& p);
    // P^perp U + z P U
    static LinearSymbol bcl(const CMatrix& u, const CMatrix& p);
    static LinearSymbol shift(Index e);
    bool isometric(const Tolerances& tol = {}) const;
};

// Block lower-bidiagonal: A0 on the diagonal, A1 below it. Modes 0..N-1.
TruncatedBlockOperator toeplitz_op(const LinearSymbol& sym, int n_modes);
// Block upper-bidiagonal for A0 + conj(z) A1 on modes 0..N-1. That span is
// invariant for co-analytic operators, so truncated products stay exact.
TruncatedBlockOperator coanalytic_toeplitz_op(const LinearSymbol& sym, int n_modes);
// Bilateral modes -N..N, A0 on the diagonal, A1 below it.
TruncatedBlockOperator laurent_op(const LinearSymbol& sym, int n);

struct BdfReport {
    double commuting = 0.0;   // max ||[U_i, U_j]||
    double product = 0.0;     // ||U_1...U_n - I||
    double symmetric = 0.0;   // P_j + U_j*P_iU_j = P_i + U_i*P_jU_i <= I
    double resolution = 0.0;  // P_1 + U_1*P_2U_1 + ... = I
    bool algebraic_pass = false;
    double matrix_commutator = 0.0;
    double matrix_product = 0.0;  // ||V_1...V_n - shift||
    bool matrix_pass = false;
};

// Conditions for (U_i P_i^perp + z U_i P_i) to be commuting isometries with product
// the shift, or with coanalytic = true for conj(z) symbols with product the
// backward shift. Both verdicts are computed independently.
BdfReport bdf_tuple_check(const std::vector<std::pair<CMatrix, CMatrix>>& pairs, int n_modes = 8,
                          bool coanalytic = false, const Tolerances& tol = {});

struct BdfProduct {
    CMatrix u;
    CMatrix p;
    bool projection = false;        // P is an orthogonal projection
    double matrix_residual = 0.0;   // product of truncations against the formula
};

// Symbols P^perp U* + z P U*: U = U1 U2, P = P1 + U1* P2 U1.
BdfProduct bdf_product(const CMatrix& u1, const CMatrix& p1, const CMatrix& u2, const CMatrix& p2,
                       int n_modes = 8, const Tolerances& tol = {});
// Symbols U P^perp + conj(z) U P: U = U1 U2, P = P2 + U2* P1 U2.
BdfProduct bdf_coanalytic_product(const CMatrix& u1, const CMatrix& p1, const CMatrix& u2, const CMatrix& p2,
                                  int n_modes = 8, const Tolerances& tol = {});

struct PureEmbedding {
    CMatrix map;        // (N * rank D_{T*}) x d
    double tail = 0.0;  // ||T*^N||, the truncation error
    Index block = 0;    // rank of D_{T*}
};

// h -> (D_{T*} h, D_{T*} T* h, ..., D_{T*} T*^{N-1} h)
PureEmbedding pure_embedding(const CMatrix& t, int n_modes, const Tolerances& tol = {});

enum class FunctionSpace { H2, L2 };

// Toeplitz (H2) or Laurent (L2) operators with symbols U~_i Q_i^perp + z U~_i Q_i.
DilationTuple pure_dilation(const ContractionTuple& tuple, const DefectData& defects,
                            const Certificate& adjoint_cert, int n_modes, FunctionSpace space,
                            const Tolerances& tol = {});

struct CharacteristicSample {
    std::vector<double> grid;
    std::vector<CMatrix> theta;  // D_T -> D_{T*}
    std::vector<CMatrix> delta;  // on D_T
    double max_delta = 0.0;
    double max_delta_residual = 0.0;  // ||delta^2 - (I - theta* theta)||
};

CharacteristicSample characteristic_sample(const CMatrix& t, int grid_size = 64, const Tolerances& tol = {});

// Recovers (U_i, P_i) with V_i having symbol P_i^perp U_i + z P_i U_i from a
// Toeplitz tuple whose product is the truncated shift.
std::vector<std::pair<CMatrix, CMatrix>> bcl_extract(const DilationTuple& dil, const Tolerances& tol = {});

}  // namespace dilation
