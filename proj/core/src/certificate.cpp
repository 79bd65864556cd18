#include "dilation/certificate.hpp"

#include <algorithm>
#include <sstream>

namespace dilation {

FundamentalSolution solve_fundamental(const DefectSpace& space, const CMatrix& rhs) {
    require_same_shape(space.full, rhs, "solve_fundamental right-hand side");
    FundamentalSolution out;
    const Index r = space.rank();
    if (r == 0) {
        out.op = CMatrix(0, 0);
        out.residual = op_norm(rhs);
        return out;
    }
    const auto inv = space.spectrum.cwiseInverse().cast<cplx>().asDiagonal();
    out.op = inv * (space.basis.adjoint() * rhs * space.basis) * inv;
    out.residual = op_norm(space.from() * out.op * space.onto() - rhs);
    out.ill_conditioned = space.condition() > 1e8;
    return out;
}

FundamentalSolution solve_fundamental(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
    require_square(a, "solve_fundamental A");
    require_same_shape(a, b, "solve_fundamental B");
    if (commutator_norm(a, b) > tol.accept(a.rows()))
        throw Error(ErrorCode::NotCommuting, "solve_fundamental needs commuting A and B");
    DefectSpace space = defect_space(a * b, tol);
    return solve_fundamental(space, defect_square(b) * a);
}

FundamentalPairs fundamental_pairs(const ContractionTuple& tuple, const DefectData& defects,
                                   const Tolerances& tol) {
    (void)tol;
    FundamentalPairs out;
    const CMatrix onto = defects.dt.onto();
    const CMatrix onto_star = defects.dt_star.onto();
    const CMatrix ts = tuple.product.adjoint();
    out.ill_conditioned = defects.dt.condition() > 1e8 || defects.dt_star.condition() > 1e8;
    for (Index i = 0; i < tuple.n(); ++i) {
        const CMatrix& ti = tuple.factors[i];
        const CMatrix& tp = tuple.coproducts[i];
        auto f = solve_fundamental(defects.dt, defect_square(tp) * ti);
        auto fp = solve_fundamental(defects.dt, defect_square(ti) * tp);
        auto g = solve_fundamental(defects.dt_star, defect_square(tp.adjoint()) * ti.adjoint());
        auto gp = solve_fundamental(defects.dt_star, defect_square(ti.adjoint()) * tp.adjoint());
        out.max_residual = std::max({out.max_residual, f.residual, fp.residual, g.residual, gp.residual});
        out.identity_residual = std::max(
            out.identity_residual,
            op_norm(onto * ti - f.op * onto - fp.op.adjoint() * onto * tuple.product));
        out.identity_residual_star = std::max(
            out.identity_residual_star,
            op_norm(onto_star * ti.adjoint() - g.op * onto_star - gp.op.adjoint() * onto_star * ts));
        out.f.push_back(std::move(f.op));
        out.f_prime.push_back(std::move(fp.op));
        out.g.push_back(std::move(g.op));
        out.g_prime.push_back(std::move(gp.op));
    }
    return out;
}

bool Certificate::algebraically_valid(const Tolerances& tol, bool require_product) const {
    const double thr = tol.accept(rank());
    for (double v : unitarity)
        if (v > thr) return false;
    for (double v : projection)
        if (v > thr) return false;
    if (commutation > thr) return false;
    if (require_product && product_identity > thr) return false;
    return true;
}

void refresh_validity(Certificate& cert) {
    cert.unitarity.clear();
    cert.projection.clear();
    cert.commutation = 0.0;
    const Index n = cert.n();
    const Index r = cert.rank();
    CMatrix prod = identity(r);
    for (Index i = 0; i < n; ++i) {
        cert.unitarity.push_back(unitary_residual(cert.u[i]));
        cert.projection.push_back(projection_residual(cert.p[i]));
        prod = prod * cert.u[i];
        for (Index j = i + 1; j < n; ++j)
            cert.commutation = std::max(cert.commutation, commutator_norm(cert.u[i], cert.u[j]));
    }
    cert.product_identity = (prod - identity(r)).norm();
}

Certificate make_certificate(std::vector<CMatrix> u, std::vector<CMatrix> p) {
    if (u.size() != p.size()) throw Error(ErrorCode::ShapeMismatch, "certificate needs as many U as P");
    for (std::size_t i = 0; i < u.size(); ++i) {
        require_square(u[i], "certificate U");
        require_same_shape(u[i], p[i], "certificate P");
        require_same_shape(u[i], u.front(), "certificate entries");
    }
    Certificate c;
    c.u = std::move(u);
    c.p = std::move(p);
    refresh_validity(c);
    return c;
}

namespace {

Certificate assemble_from(const std::vector<CMatrix>& f, const std::vector<CMatrix>& fp) {
    std::vector<CMatrix> u, p;
    for (std::size_t i = 0; i < f.size(); ++i) {
        CMatrix ui = f[i].adjoint() + fp[i];
        CMatrix pi = 0.5 * (identity(ui.rows()) - (f[i] - fp[i].adjoint()) * ui);
        u.push_back(std::move(ui));
        p.push_back(std::move(pi));
    }
    return make_certificate(std::move(u), std::move(p));
}

struct SideData {
    std::vector<CMatrix> factors;  // T_i or T_i*
    CMatrix product;               // T or T*
    const DefectSpace* space;      // D_T or D_{T*}
};

ConditionReport evaluate(const SideData& side, const Certificate& cert, Mode mode, bool adjoint,
                         const Tolerances& tol) {
    const DefectSpace& ds = *side.space;
    const Index n = static_cast<Index>(side.factors.size());
    const Index d = side.product.rows();
    const Index r = ds.rank();
    if (cert.n() != n) throw Error(ErrorCode::ShapeMismatch, "certificate length differs from tuple length");
    if (n > 0 && cert.rank() != r) {
        std::ostringstream os;
        os << "certificate acts on dimension " << cert.rank() << " but the defect rank is " << r;
        throw Error(ErrorCode::ShapeMismatch, os.str());
    }
    ConditionReport rep;
    rep.mode = mode;
    rep.adjoint = adjoint;
    rep.dim = d;
    rep.defect_rank = r;
    rep.r1.assign(n, 0.0);
    rep.r2.assign(n, 0.0);
    rep.r3.assign(n, 0.0);
    rep.r4.assign(n, 0.0);
    rep.conditioning_warning = ds.condition() > 1e8;

    const CMatrix id = identity(r);
    const CMatrix onto = ds.onto();
    const CMatrix from = ds.from();
    std::vector<CMatrix> a(n), b(n);  // P^perp U*, U P
    for (Index i = 0; i < n; ++i) {
        a[i] = (id - cert.p[i]) * cert.u[i].adjoint();
        b[i] = cert.u[i] * cert.p[i];
    }
    CMatrix sum = CMatrix::Zero(r, r);
    CMatrix acc = id;
    for (Index i = 0; i < n; ++i) {
        const CMatrix pu = cert.p[i] * cert.u[i].adjoint();
        rep.r1[i] = op_norm(onto * side.factors[i] - a[i] * onto - pu * onto * side.product);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            rep.r2[i] = std::max(rep.r2[i], op_norm(a[i] * a[j] - a[j] * a[i]));
            rep.r3[i] = std::max(rep.r3[i], op_norm(b[i] * b[j] - b[j] * b[i]));
        }
        rep.r4[i] = op_norm(from * b[i] * cert.u[i].adjoint() * onto - defect_square(side.factors[i]));
        sum += acc.adjoint() * cert.p[i] * acc;
        acc = acc * cert.u[i];
    }
    rep.r5 = op_norm(sum - id);
    for (double v : cert.unitarity) rep.unitarity = std::max(rep.unitarity, v);
    for (double v : cert.projection) rep.projection = std::max(rep.projection, v);
    rep.commutation = cert.commutation;
    rep.product_identity = cert.product_identity;

    if (r == 0) {
        // no defect: every condition is vacuous
        rep.pass = true;
        return rep;
    }
    const double thr = tol.accept(d);
    auto flag = [&](const char* name, double v) {
        if (v > thr) rep.failed.emplace_back(name);
    };
    flag("(1)", rep.max_r1());
    flag("(2)", rep.max_r2());
    flag("(3)", rep.max_r3());
    flag("(4)", rep.max_r4());
    flag("unitarity", rep.unitarity);
    flag("projection", rep.projection);
    flag("commutation", rep.commutation);
    if (mode == Mode::Full) {
        flag("(5)", rep.r5);
        flag("product", rep.product_identity);
    }
    rep.pass = rep.failed.empty();
    return rep;
}

}  // namespace

Certificate assemble_certificate(const FundamentalPairs& pairs) { return assemble_from(pairs.f, pairs.f_prime); }

Certificate adjoint_transfer(const FundamentalPairs& pairs) { return assemble_from(pairs.g, pairs.g_prime); }

Certificate compress_certificate(const std::vector<CMatrix>& u, const std::vector<CMatrix>& p,
                                 const CMatrix& basis) {
    std::vector<CMatrix> cu, cp;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].rows() != basis.rows() || p[i].rows() != basis.rows())
            throw Error(ErrorCode::ShapeMismatch, "certificate operators must act on the ambient space");
        cu.push_back(basis.adjoint() * u[i] * basis);
        cp.push_back(basis.adjoint() * p[i] * basis);
    }
    return make_certificate(std::move(cu), std::move(cp));
}

const char* to_string(Mode m) { return m == Mode::Full ? "full" : "relaxed"; }

namespace {
double vmax(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}
}  // namespace

double ConditionReport::max_r1() const { return vmax(r1); }
double ConditionReport::max_r2() const { return vmax(r2); }
double ConditionReport::max_r3() const { return vmax(r3); }
double ConditionReport::max_r4() const { return vmax(r4); }

std::string ConditionReport::decisive() const {
    // numbered conditions take precedence over certificate structure
    std::string best;
    double worst = -1.0;
    bool numbered = false;
    for (const auto& name : failed) {
        const bool is_numbered = name.front() == '(';
        if (numbered && !is_numbered) continue;
        double v = 0.0;
        if (name == "(1)") v = max_r1();
        else if (name == "(2)") v = max_r2();
        else if (name == "(3)") v = max_r3();
        else if (name == "(4)") v = max_r4();
        else if (name == "(5)") v = r5;
        else if (name == "unitarity") v = unitarity;
        else if (name == "projection") v = projection;
        else if (name == "commutation") v = commutation;
        else if (name == "product") v = product_identity;
        if (v > worst || (is_numbered && !numbered)) {
            worst = v;
            best = name;
            numbered = numbered || is_numbered;
        }
    }
    return best;
}

ConditionReport check_conditions(const ContractionTuple& tuple, const DefectData& defects,
                                 const Certificate& cert, Mode mode, const Tolerances& tol) {
    SideData side{tuple.factors, tuple.product, &defects.dt};
    return evaluate(side, cert, mode, false, tol);
}

ConditionReport check_adjoint_conditions(const ContractionTuple& tuple, const DefectData& defects,
                                         const Certificate& adjoint_cert, Mode mode,
                                         const Tolerances& tol) {
    SideData side;
    for (const auto& f : tuple.factors) side.factors.push_back(f.adjoint());
    side.product = tuple.product.adjoint();
    side.space = &defects.dt_star;
    return evaluate(side, adjoint_cert, mode, true, tol);
}

}  // namespace dilation
