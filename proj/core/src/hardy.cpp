#include "dilation/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dilation/defect.hpp"
#include "dilation/schaffer.hpp"

namespace dilation {

LinearSymbol LinearSymbol::analytic(const CMatrix& u, const CMatrix& p) {
    return {u * (identity(p.rows()) - p), u * p};
}

LinearSymbol LinearSymbol::adjoint_form(const CMatrix& u, const CMatrix& p) {
    return {(identity(p.rows()) - p) * u.adjoint(), p * u.adjoint()};
}

LinearSymbol LinearSymbol::bcl(const CMatrix& u, const CMatrix& p) {
    return {(identity(p.rows()) - p) * u, p * u};
}

LinearSymbol LinearSymbol::shift(Index e) { return {CMatrix::Zero(e, e), identity(e)}; }

bool LinearSymbol::isometric(const Tolerances& tol) const {
    const Index e = fiber();
    const double a = (a0.adjoint() * a0 + a1.adjoint() * a1 - identity(e)).norm();
    const double b = (a0.adjoint() * a1).norm();
    return a <= tol.check_tol && b <= tol.check_tol;
}

namespace {

void fill_bands(TruncatedBlockOperator& op, const LinearSymbol& sym, bool upper) {
    const Index e = sym.fiber();
    for (size_t k = 0; k < op.blocks.size(); ++k) {
        const Block& b = op.blocks[k];
        op.matrix.block(b.offset, b.offset, e, e) = sym.a0;
        if (k + 1 < op.blocks.size()) {
            const Block& next = op.blocks[k + 1];
            if (upper)
                op.matrix.block(b.offset, next.offset, e, e) = sym.a1;
            else
                op.matrix.block(next.offset, b.offset, e, e) = sym.a1;
        }
    }
}

void require_symbol(const LinearSymbol& sym) {
    require_square(sym.a0, "symbol coefficient");
    require_same_shape(sym.a0, sym.a1, "symbol coefficients");
}

}  // namespace

TruncatedBlockOperator toeplitz_op(const LinearSymbol& sym, int n_modes) {
    require_symbol(sym);
    if (n_modes < 1) throw Error(ErrorCode::BadParams, "need at least one mode");
    TruncatedBlockOperator op = toeplitz_layout(sym.fiber(), n_modes);
    fill_bands(op, sym, false);
    return op;
}

TruncatedBlockOperator coanalytic_toeplitz_op(const LinearSymbol& sym, int n_modes) {
    require_symbol(sym);
    if (n_modes < 1) throw Error(ErrorCode::BadParams, "need at least one mode");
    TruncatedBlockOperator op = toeplitz_layout(sym.fiber(), n_modes);
    op.layout = Layout::Coanalytic;
    fill_bands(op, sym, true);
    return op;
}

TruncatedBlockOperator laurent_op(const LinearSymbol& sym, int n) {
    require_symbol(sym);
    if (n < 1) throw Error(ErrorCode::BadParams, "need at least one mode on each side");
    TruncatedBlockOperator op = laurent_layout(sym.fiber(), n);
    fill_bands(op, sym, false);
    return op;
}

BdfReport bdf_tuple_check(const std::vector<std::pair<CMatrix, CMatrix>>& pairs, int n_modes, bool coanalytic,
                          const Tolerances& tol) {
    if (pairs.empty()) throw Error(ErrorCode::BadParams, "empty symbol tuple");
    const Index e = pairs.front().first.rows();
    for (const auto& [u, p] : pairs) {
        require_square(u, "BDF unitary");
        require_same_shape(u, pairs.front().first, "BDF unitary");
        require_same_shape(p, u, "BDF projection");
        if (unitary_residual(u) > tol.check_tol) throw Error(ErrorCode::NotUnitary, "BDF data: U_i is not unitary");
        if (projection_residual(p) > tol.check_tol)
            throw Error(ErrorCode::NotProjection, "BDF data: P_i is not a projection");
    }
    const size_t n = pairs.size();
    const CMatrix id = identity(e);
    BdfReport rep;
    CMatrix prod = id;
    CMatrix acc = id;
    CMatrix sum = CMatrix::Zero(e, e);
    for (size_t i = 0; i < n; ++i) {
        const auto& [ui, pi] = pairs[i];
        prod = prod * ui;
        sum += acc.adjoint() * pi * acc;
        acc = acc * ui;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& [uj, pj] = pairs[j];
            rep.commuting = std::max(rep.commuting, op_norm(ui * uj - uj * ui));
            const CMatrix lhs = pj + uj.adjoint() * pi * uj;
            const CMatrix rhs = pi + ui.adjoint() * pj * ui;
            Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(lhs), Eigen::EigenvaluesOnly);
            const double above = std::max(0.0, es.eigenvalues().maxCoeff() - 1.0);
            rep.symmetric = std::max(rep.symmetric, op_norm(lhs - rhs) + above);
        }
    }
    rep.product = op_norm(prod - id);
    rep.resolution = op_norm(sum - id);
    const double thr = tol.accept(e);
    rep.algebraic_pass = rep.commuting <= thr && rep.product <= thr && rep.symmetric <= thr && rep.resolution <= thr;

    std::vector<CMatrix> v;
    for (const auto& [u, p] : pairs) {
        const LinearSymbol s = LinearSymbol::analytic(u, p);
        v.push_back(coanalytic ? coanalytic_toeplitz_op(s, n_modes).matrix : toeplitz_op(s, n_modes).matrix);
    }
    const LinearSymbol sh = LinearSymbol::shift(e);
    const CMatrix target = coanalytic ? coanalytic_toeplitz_op(sh, n_modes).matrix : toeplitz_op(sh, n_modes).matrix;
    CMatrix vp = identity(target.rows());
    for (size_t i = 0; i < n; ++i) {
        vp = vp * v[i];
        for (size_t j = i + 1; j < n; ++j)
            rep.matrix_commutator = std::max(rep.matrix_commutator, op_norm(v[i] * v[j] - v[j] * v[i]));
    }
    rep.matrix_product = op_norm(vp - target);
    rep.matrix_pass = rep.matrix_commutator <= thr && rep.matrix_product <= thr;
    return rep;
}

BdfProduct bdf_product(const CMatrix& u1, const CMatrix& p1, const CMatrix& u2, const CMatrix& p2, int n_modes,
                       const Tolerances& tol) {
    BdfProduct out;
    out.u = u1 * u2;
    out.p = p1 + u1.adjoint() * p2 * u1;
    out.projection = projection_residual(out.p) <= tol.check_tol;
    const CMatrix lhs = toeplitz_op(LinearSymbol::adjoint_form(u1, p1), n_modes).matrix *
                        toeplitz_op(LinearSymbol::adjoint_form(u2, p2), n_modes).matrix;
    out.matrix_residual = op_norm(lhs - toeplitz_op(LinearSymbol::adjoint_form(out.u, out.p), n_modes).matrix);
    return out;
}

BdfProduct bdf_coanalytic_product(const CMatrix& u1, const CMatrix& p1, const CMatrix& u2, const CMatrix& p2,
                                  int n_modes, const Tolerances& tol) {
    BdfProduct out;
    out.u = u1 * u2;
    out.p = p2 + u2.adjoint() * p1 * u2;
    out.projection = projection_residual(out.p) <= tol.check_tol;
    const CMatrix lhs = coanalytic_toeplitz_op(LinearSymbol::analytic(u1, p1), n_modes).matrix *
                        coanalytic_toeplitz_op(LinearSymbol::analytic(u2, p2), n_modes).matrix;
    out.matrix_residual =
        op_norm(lhs - coanalytic_toeplitz_op(LinearSymbol::analytic(out.u, out.p), n_modes).matrix);
    return out;
}

PureEmbedding pure_embedding(const CMatrix& t, int n_modes, const Tolerances& tol) {
    require_square(t, "pure_embedding");
    if (n_modes < 1) throw Error(ErrorCode::BadParams, "need at least one mode");
    if (!is_c0(t, 1, tol).c0) throw Error(ErrorCode::NotC0, "the product has spectrum on the unit circle");
    const DefectSpace dts = defect_space(t.adjoint(), tol);
    const Index rs = dts.rank();
    const Index d = t.rows();
    PureEmbedding out;
    out.block = rs;
    out.map = CMatrix::Zero(n_modes * rs, d);
    CMatrix power = identity(d);
    const CMatrix onto = dts.onto();
    for (int k = 0; k < n_modes; ++k) {
        out.map.middleRows(k * rs, rs) = onto * power;
        power = t.adjoint() * power;
    }
    out.tail = op_norm(power);
    return out;
}

DilationTuple pure_dilation(const ContractionTuple& tuple, const DefectData& defects, const Certificate& adjoint_cert,
                            int n_modes, FunctionSpace space, const Tolerances& tol) {
    if (!is_c0(tuple.product, 1, tol).c0) throw Error(ErrorCode::NotC0, "the product is not C._0");
    if (adjoint_cert.n() != tuple.n() || (tuple.n() > 0 && adjoint_cert.rank() != defects.rank_star()))
        throw Error(ErrorCode::ShapeMismatch, "adjoint certificate does not act on D_{T*}");
    const ConditionReport rep = check_adjoint_conditions(tuple, defects, adjoint_cert, Mode::Relaxed, tol);
    if (!rep.pass)
        throw Error(ErrorCode::InvalidCertificate, "adjoint certificate fails the relaxed conditions");
    const PureEmbedding emb = pure_embedding(tuple.product, n_modes, tol);
    const Index rs = defects.rank_star();
    const Accumulated acc = accumulate(adjoint_cert);
    auto make = [&](const LinearSymbol& s) {
        return space == FunctionSpace::H2 ? toeplitz_op(s, n_modes) : laurent_op(s, n_modes);
    };
    DilationTuple dil;
    for (Index i = 0; i < tuple.n(); ++i)
        dil.ops.push_back(make(LinearSymbol::analytic(adjoint_cert.u[i], adjoint_cert.p[i])));
    finalize_products(dil);
    for (Index i = 0; i < tuple.n(); ++i)
        dil.recursion_targets.push_back(make(LinearSymbol::analytic(acc.u[i], acc.p[i])).matrix);
    dil.minimal = make(LinearSymbol::shift(rs)).matrix;
    const TruncatedBlockOperator& layout = dil.ops.front();
    dil.embedding = CMatrix::Zero(layout.dim(), tuple.dim());
    const Index start = layout.find("E", 0).offset;
    dil.embedding.middleRows(start, emb.map.rows()) = emb.map;
    return dil;
}

CharacteristicSample characteristic_sample(const CMatrix& t, int grid_size, const Tolerances& tol) {
    require_square(t, "characteristic_sample");
    if (grid_size < 1) throw Error(ErrorCode::BadParams, "grid must have at least one point");
    const DefectSpace dt = defect_space(t, tol);
    const DefectSpace dts = defect_space(t.adjoint(), tol);
    const Index d = t.rows();
    CharacteristicSample out;
    for (int k = 0; k < grid_size; ++k) out.grid.push_back(2.0 * std::numbers::pi * k / grid_size);
    if (dt.rank() == 0) return out;
    const CMatrix id = identity(d);
    for (double angle : out.grid) {
        const cplx lambda = std::polar(1.0, angle);
        const CMatrix m = id - lambda * t.adjoint();
        Eigen::JacobiSVD<CMatrix> svd(m);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        if (!(smin > 1e-12)) throw Error(ErrorCode::SingularResolvent, "I - lambda T* is numerically singular");
        const CMatrix resolvent = m.partialPivLu().solve(id);
        const CMatrix full = -t + lambda * dts.full * resolvent * dt.full;
        CMatrix theta = dts.basis.adjoint() * full * dt.basis;
        const CMatrix gap = identity(dt.rank()) - theta.adjoint() * theta;
        CMatrix delta = psd_sqrt(hermitian_part(gap), tol);
        out.max_delta = std::max(out.max_delta, op_norm(delta));
        out.max_delta_residual = std::max(out.max_delta_residual, op_norm(delta * delta - gap));
        out.theta.push_back(std::move(theta));
        out.delta.push_back(std::move(delta));
    }
    return out;
}

std::vector<std::pair<CMatrix, CMatrix>> bcl_extract(const DilationTuple& dil, const Tolerances& tol) {
    if (dil.ops.empty()) throw Error(ErrorCode::BadParams, "empty dilation");
    const TruncatedBlockOperator& first = dil.ops.front();
    if (first.layout != Layout::Toeplitz) throw Error(ErrorCode::BadParams, "bcl_extract needs Toeplitz operators");
    const Index e = first.blocks.front().size;
    const CMatrix shift = toeplitz_op(LinearSymbol::shift(e), first.depth).matrix;
    if (op_norm(dil.product.matrix - shift) > tol.accept(e))
        throw Error(ErrorCode::NotPureShift, "the product is not the truncated shift");
    const Index n = dil.n();
    const CMatrix vs = dil.product.matrix.adjoint();
    std::vector<std::pair<CMatrix, CMatrix>> out;
    for (Index i = 0; i < n; ++i) {
        CMatrix co = identity(first.dim());
        for (Index j = 0; j < n; ++j)
            if (j != i) co = co * dil.ops[j].matrix;
        const CMatrix& vi = dil.ops[i].matrix;
        // D_{V*} is the projection onto mode 0
        const CMatrix x = (vi.adjoint() - co * vs).topLeftCorner(e, e);  // U* P^perp
        const CMatrix y = (co.adjoint() - vi * vs).topLeftCorner(e, e);  // P U
        const CMatrix u = x.adjoint() + y;
        const CMatrix p = y * u.adjoint();
        out.emplace_back(u, p);
    }
    return out;
}

}  // namespace dilation
