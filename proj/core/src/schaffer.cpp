#include "dilation/schaffer.hpp"

#include <algorithm>

namespace dilation {

namespace {

// Entries of one operator in the unitary layout.
struct UniPattern {
    CMatrix h;          // H -> H
    CMatrix dt_diag;    // D_T[-k] -> D_T[-k]
    CMatrix dt_down;    // D_T[-k] -> D_T[-k-1]
    CMatrix h_to_dt;    // H -> D_T[-1]
    CMatrix cross;      // D_T*[1] -> D_T[-1]
    CMatrix star_to_h;  // D_T*[1] -> H
    CMatrix star_diag;  // D_T*[k] -> D_T*[k]
    CMatrix star_down;  // D_T*[k+1] -> D_T*[k]
};

TruncatedBlockOperator assemble_unitary(const UniPattern& w, Index d, Index r, Index rs, int n) {
    TruncatedBlockOperator op = unitary_layout(d, r, rs, n);
    auto put = [&](const Block& row, const Block& col, const CMatrix& m) {
        if (row.size == 0 || col.size == 0) return;
        op.matrix.block(row.offset, col.offset, row.size, col.size) = m;
    };
    const Block& h = op.find("H", 0);
    put(h, h, w.h);
    for (int k = 1; k <= n; ++k) {
        const Block& b = op.find("D_T", -k);
        put(b, b, w.dt_diag);
        if (k < n) put(op.find("D_T", -k - 1), b, w.dt_down);
        const Block& s = op.find("D_T*", k);
        put(s, s, w.star_diag);
        if (k < n) put(s, op.find("D_T*", k + 1), w.star_down);
    }
    put(op.find("D_T", -1), h, w.h_to_dt);
    put(op.find("D_T", -1), op.find("D_T*", 1), w.cross);
    put(h, op.find("D_T*", 1), w.star_to_h);
    return op;
}

UniPattern pattern_from(const CMatrix& t_block, const CMatrix& u, const CMatrix& p, const CMatrix& ut,
                        const CMatrix& q, const CMatrix& t_full, const DefectSpace& dt, const DefectSpace& dts) {
    const Index r = dt.rank();
    const Index rs = dts.rank();
    const CMatrix pu = p * u.adjoint();
    const CMatrix uq = ut * q;
    UniPattern w;
    w.h = t_block;
    w.dt_diag = (identity(r) - p) * u.adjoint();
    w.dt_down = pu;
    w.h_to_dt = pu * dt.onto();
    // T* carries D_{T*} into D_T
    w.cross = -pu * (dt.basis.adjoint() * t_full.adjoint() * dts.basis);
    w.star_to_h = dts.from() * uq;
    w.star_diag = ut * (identity(rs) - q);
    w.star_down = uq;
    return w;
}

TruncatedBlockOperator assemble_isometric(const CMatrix& t_block, const CMatrix& u, const CMatrix& p,
                                          const DefectSpace& dt, int n) {
    const Index r = dt.rank();
    TruncatedBlockOperator op = isometric_layout(t_block.rows(), r, n);
    const Block& h = op.find("H", 0);
    op.matrix.block(h.offset, h.offset, h.size, h.size) = t_block;
    if (r == 0) return op;
    const CMatrix pu = p * u.adjoint();
    const CMatrix diag = (identity(r) - p) * u.adjoint();
    const Block& first = op.find("D_T", 1);
    op.matrix.block(first.offset, h.offset, r, h.size) = pu * dt.onto();
    for (int k = 1; k <= n; ++k) {
        const Block& b = op.find("D_T", k);
        op.matrix.block(b.offset, b.offset, r, r) = diag;
        if (k < n) op.matrix.block(b.offset + r, b.offset, r, r) = pu;
    }
    return op;
}

void require_valid(const Certificate& cert, Index rank, Index n, const Tolerances& tol, const char* what) {
    if (cert.n() != n) throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": wrong number of operators");
    if (n > 0 && cert.rank() != rank)
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": certificate does not act on the defect space");
    if (!cert.algebraically_valid(tol, false))
        throw Error(ErrorCode::InvalidCertificate,
                    std::string(what) + ": U_i must be commuting unitaries and P_i projections");
}

CMatrix inclusion(const TruncatedBlockOperator& op, Index d) {
    CMatrix e = CMatrix::Zero(op.dim(), d);
    const Block& h = op.find("H", 0);
    e.block(h.offset, 0, d, d) = identity(d);
    return e;
}

}  // namespace

Accumulated accumulate(const Certificate& cert) {
    Accumulated acc;
    const Index r = cert.rank();
    CMatrix u = identity(r);
    CMatrix p = CMatrix::Zero(r, r);
    for (Index i = 0; i < cert.n(); ++i) {
        p += u.adjoint() * cert.p[i] * u;
        u = u * cert.u[i];
        acc.u.push_back(u);
        acc.p.push_back(p);
    }
    return acc;
}

TruncatedBlockOperator schaffer_isometric_of_product(const CMatrix& t, const DefectSpace& dt, int n_blocks) {
    const Index r = dt.rank();
    return assemble_isometric(t, identity(r), identity(r), dt, n_blocks);
}

TruncatedBlockOperator schaffer_unitary_of_product(const CMatrix& t, const DefectSpace& dt,
                                                   const DefectSpace& dt_star, int n_blocks) {
    const Index r = dt.rank();
    const Index rs = dt_star.rank();
    UniPattern w = pattern_from(t, identity(r), identity(r), identity(rs), identity(rs), t, dt, dt_star);
    return assemble_unitary(w, t.rows(), r, rs, n_blocks);
}

TruncatedBlockOperator schaffer_unitary_of_product(const CMatrix& t, int n_blocks, const Tolerances& tol) {
    require_square(t, "schaffer_unitary_of_product");
    return schaffer_unitary_of_product(t, defect_space(t, tol), defect_space(t.adjoint(), tol), n_blocks);
}

DilationTuple build_isometric(const ContractionTuple& tuple, const DefectData& defects, const Certificate& cert,
                              int n_blocks, const Tolerances& tol) {
    if (n_blocks < 2) throw Error(ErrorCode::BadParams, "truncation depth must be at least 2");
    require_valid(cert, defects.rank(), tuple.n(), tol, "build_isometric");
    DilationTuple dil;
    for (Index i = 0; i < tuple.n(); ++i)
        dil.ops.push_back(assemble_isometric(tuple.factors[i], cert.u[i], cert.p[i], defects.dt, n_blocks));
    finalize_products(dil);
    const Accumulated acc = accumulate(cert);
    CMatrix tk = identity(tuple.dim());
    for (Index i = 0; i < tuple.n(); ++i) {
        tk = tk * tuple.factors[i];
        dil.recursion_targets.push_back(assemble_isometric(tk, acc.u[i], acc.p[i], defects.dt, n_blocks).matrix);
    }
    dil.minimal = schaffer_isometric_of_product(tuple.product, defects.dt, n_blocks).matrix;
    dil.embedding = inclusion(dil.ops.front(), tuple.dim());
    return dil;
}

DilationTuple build_unitary(const ContractionTuple& tuple, const DefectData& defects, const Certificate& cert,
                            const Certificate& adjoint_cert, int n_blocks, const Tolerances& tol) {
    if (n_blocks < 2) throw Error(ErrorCode::BadParams, "truncation depth must be at least 2");
    require_valid(cert, defects.rank(), tuple.n(), tol, "build_unitary");
    require_valid(adjoint_cert, defects.rank_star(), tuple.n(), tol, "build_unitary (adjoint)");
    const Index d = tuple.dim();
    const Index r = defects.rank();
    const Index rs = defects.rank_star();
    DilationTuple dil;
    for (Index i = 0; i < tuple.n(); ++i) {
        UniPattern w = pattern_from(tuple.factors[i], cert.u[i], cert.p[i], adjoint_cert.u[i], adjoint_cert.p[i],
                                    tuple.product, defects.dt, defects.dt_star);
        dil.ops.push_back(assemble_unitary(w, d, r, rs, n_blocks));
    }
    finalize_products(dil);
    const Accumulated acc = accumulate(cert);
    const Accumulated acc_star = accumulate(adjoint_cert);
    CMatrix tk = identity(d);
    for (Index i = 0; i < tuple.n(); ++i) {
        tk = tk * tuple.factors[i];
        UniPattern w = pattern_from(tk, acc.u[i], acc.p[i], acc_star.u[i], acc_star.p[i], tuple.product,
                                    defects.dt, defects.dt_star);
        dil.recursion_targets.push_back(assemble_unitary(w, d, r, rs, n_blocks).matrix);
    }
    dil.minimal = schaffer_unitary_of_product(tuple.product, defects.dt, defects.dt_star, n_blocks).matrix;
    dil.embedding = inclusion(dil.ops.front(), d);
    return dil;
}

double TelescopingReport::max() const {
    double m = final_residual;
    for (double v : partial) m = std::max(m, v);
    return m;
}

TelescopingReport telescoping_check(const DilationTuple& dil) {
    TelescopingReport rep;
    if (dil.ops.empty()) return rep;
    const auto& layout = dil.ops.front();
    for (size_t k = 0; k < dil.partial_products.size() && k < dil.recursion_targets.size(); ++k)
        rep.partial.push_back(
            interior_norm(dil.partial_products[k] - dil.recursion_targets[k], layout, static_cast<int>(k) + 2));
    rep.final_residual = interior_norm(dil.product.matrix - dil.minimal, layout, static_cast<int>(dil.n()) + 1);
    return rep;
}

double extension_residual(const TruncatedBlockOperator& w, const TruncatedBlockOperator& v) {
    if (w.layout != Layout::Unitary || v.layout != Layout::Isometric || w.depth != v.depth)
        throw Error(ErrorCode::ShapeMismatch, "extension_residual needs matching unitary and isometric layouts");
    const int n = v.depth;
    std::vector<std::pair<const Block*, const Block*>> pairs;  // (block in w, block in v)
    pairs.emplace_back(&w.find("H", 0), &v.find("H", 0));
    for (int k = 1; k <= n - 1; ++k) pairs.emplace_back(&w.find("D_T", -k), &v.find("D_T", k));
    double worst = 0.0;
    for (const auto& [wc, vc] : pairs) {
        // column block must land only in H (+) D_T^N, and agree with V there
        CMatrix wcol = w.matrix.middleCols(wc->offset, wc->size);
        CMatrix vcol = CMatrix::Zero(w.dim(), vc->size);
        for (const auto& [wr, vr] : pairs) vcol.middleRows(wr->offset, wr->size) = v.entry(*vr, *vc);
        const Block& wlast = w.find("D_T", -n);
        const Block& vlast = v.find("D_T", n);
        vcol.middleRows(wlast.offset, wlast.size) = v.entry(vlast, *vc);
        worst = std::max(worst, op_norm(wcol - vcol));
    }
    return worst;
}

}  // namespace dilation
