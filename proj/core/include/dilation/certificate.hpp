#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dilation/defect.hpp"

namespace dilation {

// Solution C on the defect space of AB of D_{AB} C D_{AB} = D_B^2 A.
struct FundamentalSolution {
    CMatrix op;  // compressed to space.basis
    double residual = 0.0;
    bool ill_conditioned = false;
};

FundamentalSolution solve_fundamental(const DefectSpace& space, const CMatrix& rhs);
FundamentalSolution solve_fundamental(const CMatrix& a, const CMatrix& b, const Tolerances& tol = {});

struct FundamentalPairs {
    std::vector<CMatrix> f, f_prime;  // on D_T
    std::vector<CMatrix> g, g_prime;  // on D_{T*}
    double max_residual = 0.0;
    // ||D_T T_i - F_i D_T - F_i'* D_T T|| and the starred analogue, maximised over i
    double identity_residual = 0.0;
    double identity_residual_star = 0.0;
    bool ill_conditioned = false;
};

FundamentalPairs fundamental_pairs(const ContractionTuple& tuple, const DefectData& defects,
                                   const Tolerances& tol = {});

// (U_i, P_i) on D_T, or (U~_i, Q_i) on D_{T*} for the adjoint side.
struct Certificate {
    std::vector<CMatrix> u;
    std::vector<CMatrix> p;
    std::vector<double> unitarity;
    std::vector<double> projection;
    double commutation = 0.0;
    double product_identity = 0.0;  // ||U_1...U_n - I||_F

    Index n() const { return static_cast<Index>(u.size()); }
    Index rank() const { return u.empty() ? 0 : u.front().rows(); }
    // structural validity; the product identity only counts in full mode
    bool algebraically_valid(const Tolerances& tol, bool require_product) const;
};

// Fills the validity residuals from u and p.
void refresh_validity(Certificate& cert);
Certificate make_certificate(std::vector<CMatrix> u, std::vector<CMatrix> p);

// U_i = F_i* + F_i', P_i = (I - (F_i - F_i'*) U_i) / 2
Certificate assemble_certificate(const FundamentalPairs& pairs);
// U~_i = G_i* + G_i', Q_i = (I - U~_i'* U~_i) / 2 with U~_i' = G_i* - G_i'
Certificate adjoint_transfer(const FundamentalPairs& pairs);

// Compress ambient d x d operators to a defect space.
Certificate compress_certificate(const std::vector<CMatrix>& u, const std::vector<CMatrix>& p,
                                 const CMatrix& basis);

enum class Mode { Full, Relaxed };
const char* to_string(Mode m);

struct ConditionReport {
    Mode mode = Mode::Full;
    bool adjoint = false;
    Index dim = 0;
    Index defect_rank = 0;
    // per-index residuals of conditions (1)-(4); condition (5) is one equation
    std::vector<double> r1, r2, r3, r4;
    double r5 = 0.0;
    // certificate structure
    double unitarity = 0.0;
    double projection = 0.0;
    double commutation = 0.0;
    double product_identity = 0.0;
    bool conditioning_warning = false;
    bool pass = false;
    std::vector<std::string> failed;  // e.g. "(4)", "unitarity"

    double max_r1() const;
    double max_r2() const;
    double max_r3() const;
    double max_r4() const;
    // the failing condition with the largest residual, empty when passing
    std::string decisive() const;
};

ConditionReport check_conditions(const ContractionTuple& tuple, const DefectData& defects,
                                 const Certificate& cert, Mode mode, const Tolerances& tol = {});
ConditionReport check_adjoint_conditions(const ContractionTuple& tuple, const DefectData& defects,
                                         const Certificate& adjoint_cert, Mode mode,
                                         const Tolerances& tol = {});

struct OracleCandidate {
    bool found = false;
    Certificate certificate;
    ConditionReport report;
    double objective = 0.0;
};

struct OracleResult {
    OracleCandidate full;
    OracleCandidate relaxed;
};

// Brute-force search over 0/1 projections and grid phases with product one.
// Supported inputs: defect rank <= 1, or all T_i diagonal with full defect rank.
OracleResult certificate_oracle_search(const ContractionTuple& tuple, const DefectData& defects,
                                       int grid = 64, const Tolerances& tol = {});

}  // namespace dilation
