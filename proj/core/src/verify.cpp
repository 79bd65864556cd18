#include "dilation/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dilation {

double DilationReport::max_unitarity() const {
    double m = product_unitarity;
    for (double v : unitarity) m = std::max(m, v);
    return m;
}

namespace {

void compositions(int n, int deg, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    const int pos = static_cast<int>(cur.size());
    if (pos == n - 1) {
        cur.push_back(deg);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = deg; k >= 0; --k) {
        cur.push_back(k);
        compositions(n, deg - k, cur, out);
        cur.pop_back();
    }
}

double structural_unitarity(const CMatrix& w, const TruncatedBlockOperator& layout, int margin) {
    const CMatrix id = identity(w.rows());
    double r = interior_norm(w.adjoint() * w - id, layout, margin);
    if (layout.bilateral()) r = std::max(r, interior_norm(w * w.adjoint() - id, layout, margin));
    return r;
}

}  // namespace

std::vector<std::vector<int>> graded_indices(int n, int maxdeg) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    for (int deg = 0; deg <= maxdeg; ++deg) compositions(n, deg, cur, out);
    return out;
}

DilationReport verify_dilation(const ContractionTuple& tuple, const DilationTuple& dil, int maxdeg,
                               const Tolerances& tol) {
    if (dil.ops.empty() || dil.n() != tuple.n())
        throw Error(ErrorCode::ShapeMismatch, "dilation and tuple have different lengths");
    const TruncatedBlockOperator& layout = dil.ops.front();
    if (maxdeg < 0 || maxdeg > layout.depth - 1) {
        std::ostringstream os;
        os << "degree " << maxdeg << " needs truncation depth at least " << maxdeg + 1 << ", have " << layout.depth;
        throw Error(ErrorCode::DegreeExceedsTruncation, os.str());
    }
    const CMatrix& e = dil.embedding;
    if (e.rows() != layout.dim() || e.cols() != tuple.dim())
        throw Error(ErrorCode::ShapeMismatch, "embedding does not map H into the dilation space");
    const int n = static_cast<int>(tuple.n());
    DilationReport rep;
    rep.maxdeg = maxdeg;

    std::map<std::vector<int>, CMatrix> wpow, tpow;
    const auto indices = graded_indices(n, maxdeg);
    const CMatrix ed = e.adjoint();
    for (const auto& idx : indices) {
        int j = 0;
        while (j < n && idx[j] == 0) ++j;
        CMatrix w, t;
        if (j == n) {
            w = e;
            t = identity(tuple.dim());
        } else {
            auto parent = idx;
            --parent[j];
            w = dil.ops[j].matrix * wpow.at(parent);
            t = tuple.factors[j] * tpow.at(parent);
        }
        const double res = op_norm(ed * w - t);
        rep.compressions.push_back({idx, res});
        if (rep.worst_index.empty() || res > rep.max_compression) {
            rep.max_compression = res;
            rep.worst_index = idx;
        }
        wpow.emplace(idx, std::move(w));
        tpow.emplace(idx, std::move(t));
    }

    for (const auto& op : dil.ops) rep.unitarity.push_back(structural_unitarity(op.matrix, layout, 1));
    rep.product_unitarity = structural_unitarity(dil.product.matrix, layout, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const CMatrix& a = dil.ops[i].matrix;
            const CMatrix& b = dil.ops[j].matrix;
            rep.commutation = std::max(rep.commutation, interior_norm(a * b - b * a, layout, 2));
        }
    const MinimalityResult mr = minimality_defect(dil, maxdeg, tol);
    rep.minimality_defect = mr.defect;
    rep.window_dim = mr.window_dim;
    const double thr = tol.accept(tuple.dim());
    rep.pass = rep.max_compression <= thr && rep.max_unitarity() <= thr && rep.commutation <= thr;
    return rep;
}

MinimalityResult minimality_defect(const DilationTuple& dil, int maxdeg, const Tolerances& tol) {
    MinimalityResult out;
    if (dil.ops.empty()) return out;
    const TruncatedBlockOperator& layout = dil.ops.front();
    const int n = static_cast<int>(dil.n());
    out.radius = std::max(0, std::min(maxdeg, (layout.depth - 1) / n));
    const auto win = layout.window(out.radius);
    out.window_dim = static_cast<Index>(win.size());
    if (out.window_dim == 0) return out;
    const CMatrix& w = dil.product.matrix;
    const Index h = dil.embedding.cols();
    const int count = layout.bilateral() ? 2 * out.radius + 1 : out.radius + 1;
    CMatrix orbit(layout.dim(), count * h);
    CMatrix fwd = dil.embedding;
    CMatrix bwd = dil.embedding;
    int col = 0;
    orbit.middleCols(col++ * h, h) = fwd;
    for (int k = 1; k <= out.radius; ++k) {
        fwd = w * fwd;
        orbit.middleCols(col++ * h, h) = fwd;
        if (layout.bilateral()) {
            bwd = w.adjoint() * bwd;
            orbit.middleCols(col++ * h, h) = bwd;
        }
    }
    const CMatrix projected = submatrix(orbit, win, [&] {
        std::vector<Index> all(static_cast<size_t>(orbit.cols()));
        for (Index c = 0; c < orbit.cols(); ++c) all[static_cast<size_t>(c)] = c;
        return all;
    }());
    const Index rank = orthonormal_range_basis(projected, tol).cols();
    out.defect = static_cast<int>(out.window_dim - rank);
    return out;
}

DilationReport hardy_route(const ContractionTuple& tuple, const DefectData& defects, const Certificate& adjoint_cert,
                           int n_modes, int maxdeg, FunctionSpace space, const Tolerances& tol) {
    DilationTuple dil = pure_dilation(tuple, defects, adjoint_cert, n_modes, space, tol);
    return verify_dilation(tuple, dil, maxdeg, tol);
}

}  // namespace dilation
