#pragma once

#include <string>
#include <vector>

#include "dilation/linalg.hpp"

namespace dilation {

// Isometric: H at 0, D_T copies at 1..N.
// Unitary: D_T copies at -N..-1, H at 0, D_{T*} copies at 1..N.
// Toeplitz: coefficient modes 0..N-1 of H^2(E); Coanalytic uses the same modes.
// Laurent: modes -N..N of L^2(E).
enum class Layout { Isometric, Unitary, Toeplitz, Coanalytic, Laurent };

const char* to_string(Layout layout);

struct Block {
    std::string space;  // "H", "D_T", "D_T*", "E", "H1"
    int index = 0;
    Index offset = 0;
    Index size = 0;
    int boundary_distance = 0;  // block steps to the truncation edge
};

struct TruncatedBlockOperator {
    Layout layout = Layout::Isometric;
    int depth = 0;  // N
    int bandwidth = 1;
    std::vector<Block> blocks;
    CMatrix matrix;

    Index dim() const { return matrix.rows(); }
    bool bilateral() const { return layout == Layout::Unitary || layout == Layout::Laurent; }
    const Block& find(const std::string& space, int index) const;
    // block entry mapping column block `col` into row block `row`
    CMatrix entry(const Block& row, const Block& col) const;
    // coordinates of blocks at distance >= margin from the truncation edge
    std::vector<Index> interior(int margin) const;
    // coordinates of blocks with |index| <= radius
    std::vector<Index> window(int radius) const;
};

// Layout skeletons with zero matrices.
TruncatedBlockOperator isometric_layout(Index h, Index r, int n);
TruncatedBlockOperator unitary_layout(Index h, Index r, Index r_star, int n);
TruncatedBlockOperator toeplitz_layout(Index e, int n);
TruncatedBlockOperator laurent_layout(Index e, int n);

CMatrix submatrix(const CMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols);
double interior_norm(const CMatrix& m, const TruncatedBlockOperator& layout, int margin);

// Block-diagonal sum with a finite unitary summand labelled "H1" at index 0.
TruncatedBlockOperator direct_sum(const TruncatedBlockOperator& op, const CMatrix& extra);

// W_1..W_n with their products and the data needed to check them.
struct DilationTuple {
    std::vector<TruncatedBlockOperator> ops;
    TruncatedBlockOperator product;            // ordered product of ops
    std::vector<CMatrix> partial_products;     // W_1...W_k for k = 1..n
    std::vector<CMatrix> recursion_targets;    // single-operator pattern from accumulated data
    CMatrix minimal;                           // minimal dilation of T in the same layout
    CMatrix embedding;                         // H -> ambient space

    Index n() const { return static_cast<Index>(ops.size()); }
    int depth() const { return ops.empty() ? 0 : ops.front().depth; }
};

// Fills product and partial_products from ops.
void finalize_products(DilationTuple& dil);

}  // namespace dilation
