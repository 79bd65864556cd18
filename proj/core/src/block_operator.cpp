#include "dilation/block_operator.hpp"

#include <cstdlib>
#include <sstream>

namespace dilation {

const char* to_string(Layout layout) {
    switch (layout) {
        case Layout::Isometric: return "isometric";
        case Layout::Unitary: return "unitary";
        case Layout::Toeplitz: return "toeplitz";
        case Layout::Coanalytic: return "coanalytic";
        case Layout::Laurent: return "laurent";
    }
    return "unknown";
}

const Block& TruncatedBlockOperator::find(const std::string& space, int index) const {
    for (const auto& b : blocks)
        if (b.space == space && b.index == index) return b;
    std::ostringstream os;
    os << "no block " << space << "[" << index << "]";
    throw Error(ErrorCode::ShapeMismatch, os.str());
}

CMatrix TruncatedBlockOperator::entry(const Block& row, const Block& col) const {
    return matrix.block(row.offset, col.offset, row.size, col.size);
}

std::vector<Index> TruncatedBlockOperator::interior(int margin) const {
    std::vector<Index> idx;
    for (const auto& b : blocks)
        if (b.boundary_distance >= margin)
            for (Index k = 0; k < b.size; ++k) idx.push_back(b.offset + k);
    return idx;
}

std::vector<Index> TruncatedBlockOperator::window(int radius) const {
    std::vector<Index> idx;
    for (const auto& b : blocks)
        if (std::abs(b.index) <= radius)
            for (Index k = 0; k < b.size; ++k) idx.push_back(b.offset + k);
    return idx;
}

namespace {

struct Builder {
    TruncatedBlockOperator op;
    Index offset = 0;
    void add(const char* space, int index, Index size, int dist) {
        op.blocks.push_back(Block{space, index, offset, size, dist});
        offset += size;
    }
    TruncatedBlockOperator done() {
        op.matrix = CMatrix::Zero(offset, offset);
        return op;
    }
};

}  // namespace

TruncatedBlockOperator isometric_layout(Index h, Index r, int n) {
    Builder b;
    b.op.layout = Layout::Isometric;
    b.op.depth = n;
    b.add("H", 0, h, n);
    for (int k = 1; k <= n; ++k) b.add("D_T", k, r, n - k);
    return b.done();
}

TruncatedBlockOperator unitary_layout(Index h, Index r, Index r_star, int n) {
    Builder b;
    b.op.layout = Layout::Unitary;
    b.op.depth = n;
    for (int k = n; k >= 1; --k) b.add("D_T", -k, r, n - k);
    b.add("H", 0, h, n);
    for (int k = 1; k <= n; ++k) b.add("D_T*", k, r_star, n - k);
    return b.done();
}

TruncatedBlockOperator toeplitz_layout(Index e, int n) {
    Builder b;
    b.op.layout = Layout::Toeplitz;
    b.op.depth = n;
    for (int k = 0; k < n; ++k) b.add("E", k, e, n - 1 - k);
    return b.done();
}

TruncatedBlockOperator laurent_layout(Index e, int n) {
    Builder b;
    b.op.layout = Layout::Laurent;
    b.op.depth = n;
    for (int k = -n; k <= n; ++k) b.add("E", k, e, n - std::abs(k));
    return b.done();
}

CMatrix submatrix(const CMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
    CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    return out;
}

double interior_norm(const CMatrix& m, const TruncatedBlockOperator& layout, int margin) {
    auto idx = layout.interior(margin);
    return op_norm(submatrix(m, idx, idx));
}

TruncatedBlockOperator direct_sum(const TruncatedBlockOperator& op, const CMatrix& extra) {
    require_square(extra, "direct_sum summand");
    TruncatedBlockOperator out = op;
    const Index base = op.dim();
    out.blocks.push_back(Block{"H1", 0, base, extra.rows(), op.depth});
    out.matrix = CMatrix::Zero(base + extra.rows(), base + extra.rows());
    out.matrix.topLeftCorner(base, base) = op.matrix;
    out.matrix.bottomRightCorner(extra.rows(), extra.rows()) = extra;
    return out;
}

void finalize_products(DilationTuple& dil) {
    dil.partial_products.clear();
    if (dil.ops.empty()) return;
    CMatrix acc = dil.ops.front().matrix;
    dil.partial_products.push_back(acc);
    for (size_t i = 1; i < dil.ops.size(); ++i) {
        acc = acc * dil.ops[i].matrix;
        dil.partial_products.push_back(acc);
    }
    dil.product = dil.ops.front();
    dil.product.bandwidth = static_cast<int>(dil.ops.size());
    dil.product.matrix = acc;
}

}  // namespace dilation
