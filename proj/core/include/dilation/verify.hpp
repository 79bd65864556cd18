#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dilation/block_operator.hpp"
#include "dilation/certificate.hpp"
#include "dilation/hardy.hpp"
#include "dilation/schaffer.hpp"

namespace dilation {

struct CompressionEntry {
    std::vector<int> index;
    double residual = 0.0;
};

struct DilationReport {
    int maxdeg = 0;
    std::vector<CompressionEntry> compressions;  // graded lexicographic order
    double max_compression = 0.0;
    std::vector<int> worst_index;
    std::vector<double> unitarity;  // interior, per operator (isometry defect for one-sided layouts)
    double product_unitarity = 0.0;
    double commutation = 0.0;       // interior, worst pair
    int minimality_defect = 0;
    Index window_dim = 0;
    bool pass = false;

    double max_unitarity() const;
};

// All exponent vectors of length n with total degree <= maxdeg, ordered by
// degree and then lexicographically with larger leading exponents first.
std::vector<std::vector<int>> graded_indices(int n, int maxdeg);

DilationReport verify_dilation(const ContractionTuple& tuple, const DilationTuple& dil, int maxdeg,
                               const Tolerances& tol = {});

struct MinimalityResult {
    int defect = 0;
    Index window_dim = 0;
    int radius = 0;
};

// Window dimension minus the rank of the window-projected orbit of E H under the product.
MinimalityResult minimality_defect(const DilationTuple& dil, int maxdeg, const Tolerances& tol = {});

enum class Verdict { FullPass, RelaxedPass, Undetermined, Fail };
enum class Route { None, SchafferUnitary, LaurentRelaxed };
const char* to_string(Verdict v);
const char* to_string(Route r);

struct PipelineOptions {
    int n_blocks = 16;
    int maxdeg = 8;
    int grid = 64;
    // certificates in ambient coordinates, compressed onto the defect spaces
    std::optional<std::pair<std::vector<CMatrix>, std::vector<CMatrix>>> primal;
    std::optional<std::pair<std::vector<CMatrix>, std::vector<CMatrix>>> adjoint;
};

struct PipelineReport {
    Verdict verdict = Verdict::Fail;
    Route route = Route::None;
    std::string hypothesis;  // what failed or what the verdict rests on
    ConditionReport primal_full;
    ConditionReport adjoint_full;
    std::optional<ConditionReport> primal_relaxed;
    std::optional<ConditionReport> adjoint_relaxed;
    std::string primal_source;   // supplied | reconstruction | oracle | none
    std::string adjoint_source;
    Index unitary_dim = 0;
    Index cnu_dim = 0;
    std::optional<DilationReport> dilation;
    std::optional<TelescopingReport> telescoping;
    double fundamental_residual = 0.0;
};

PipelineReport full_pipeline(const ContractionTuple& tuple, const PipelineOptions& opts = {},
                             const Tolerances& tol = {});

// Toeplitz route for C._0 products with a valid adjoint certificate.
DilationReport hardy_route(const ContractionTuple& tuple, const DefectData& defects, const Certificate& adjoint_cert,
                           int n_modes, int maxdeg, FunctionSpace space, const Tolerances& tol = {});

}  // namespace dilation
