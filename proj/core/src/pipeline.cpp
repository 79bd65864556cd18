#include <sstream>

#include "dilation/verify.hpp"

namespace dilation {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::FullPass: return "full-pass";
        case Verdict::RelaxedPass: return "relaxed-pass";
        case Verdict::Undetermined: return "undetermined";
        case Verdict::Fail: return "fail";
    }
    return "unknown";
}

const char* to_string(Route r) {
    switch (r) {
        case Route::None: return "none";
        case Route::SchafferUnitary: return "schaffer-unitary";
        case Route::LaurentRelaxed: return "laurent-relaxed";
    }
    return "unknown";
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
}

// Re-express a certificate given on the span of `from` in the basis `to` of the same space.
Certificate rebase(const Certificate& c, const CMatrix& from, const CMatrix& to) {
    const CMatrix m = from.adjoint() * to;
    std::vector<CMatrix> u, p;
    for (Index i = 0; i < c.n(); ++i) {
        u.push_back(m.adjoint() * c.u[i] * m);
        p.push_back(m.adjoint() * c.p[i] * m);
    }
    return make_certificate(std::move(u), std::move(p));
}

struct Found {
    std::optional<Certificate> cert;
    std::optional<ConditionReport> report;
    std::string source = "none";
};

// Relaxed certificate on D_T of `tuple`; supplied data is in ambient coordinates
// of the space spanned by `frame`.
Found relaxed_primal(const ContractionTuple& tuple, const DefectData& defects, const Certificate& reconstructed,
                     const std::optional<std::pair<std::vector<CMatrix>, std::vector<CMatrix>>>& supplied,
                     const CMatrix& frame, int grid, const Tolerances& tol) {
    Found f;
    if (supplied) {
        Certificate c = compress_certificate(supplied->first, supplied->second, frame * defects.dt.basis);
        ConditionReport r = check_conditions(tuple, defects, c, Mode::Relaxed, tol);
        if (r.pass) {
            f.cert = std::move(c);
            f.report = std::move(r);
            f.source = "supplied";
            return f;
        }
    }
    {
        ConditionReport r = check_conditions(tuple, defects, reconstructed, Mode::Relaxed, tol);
        if (r.pass) {
            f.cert = reconstructed;
            f.report = std::move(r);
            f.source = "reconstruction";
            return f;
        }
        f.report = std::move(r);
    }
    try {
        OracleResult o = certificate_oracle_search(tuple, defects, grid, tol);
        if (o.relaxed.found) {
            f.cert = std::move(o.relaxed.certificate);
            f.report = std::move(o.relaxed.report);
            f.source = "oracle";
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Unsupported) throw;
    }
    return f;
}

// Relaxed certificate on D_{T*}, obtained as a primal certificate of the adjoint tuple.
Found relaxed_adjoint(const ContractionTuple& tuple, const DefectData& defects,
                      const std::optional<std::pair<std::vector<CMatrix>, std::vector<CMatrix>>>& supplied,
                      const CMatrix& frame, int grid, const Tolerances& tol) {
    Found f;
    if (supplied) {
        Certificate c = compress_certificate(supplied->first, supplied->second, frame * defects.dt_star.basis);
        ConditionReport r = check_adjoint_conditions(tuple, defects, c, Mode::Relaxed, tol);
        if (r.pass) {
            f.cert = std::move(c);
            f.report = std::move(r);
            f.source = "supplied";
            return f;
        }
    }
    const FundamentalPairs pairs = fundamental_pairs(tuple, defects, tol);
    Certificate rec = adjoint_transfer(pairs);
    {
        ConditionReport r = check_adjoint_conditions(tuple, defects, rec, Mode::Relaxed, tol);
        if (r.pass) {
            f.cert = std::move(rec);
            f.report = std::move(r);
            f.source = "reconstruction";
            return f;
        }
        f.report = std::move(r);
    }
    try {
        const ContractionTuple adj = tuple.adjoint();
        const DefectData adj_defects = defect_data(adj, tol);
        OracleResult o = certificate_oracle_search(adj, adj_defects, grid, tol);
        if (o.relaxed.found) {
            Certificate c = rebase(o.relaxed.certificate, adj_defects.dt.basis, defects.dt_star.basis);
            ConditionReport r = check_adjoint_conditions(tuple, defects, c, Mode::Relaxed, tol);
            if (r.pass) {
                f.cert = std::move(c);
                f.report = std::move(r);
                f.source = "oracle";
            }
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Unsupported) throw;
    }
    return f;
}

}  // namespace

PipelineReport full_pipeline(const ContractionTuple& tuple, const PipelineOptions& opts, const Tolerances& tol) {
    PipelineReport rep;
    const Index d = tuple.dim();
    const DefectData defects = defect_data(tuple, tol);
    const FundamentalPairs pairs = fundamental_pairs(tuple, defects, tol);
    rep.fundamental_residual = pairs.max_residual;
    const Certificate cert = assemble_certificate(pairs);
    const Certificate adj = adjoint_transfer(pairs);
    rep.primal_full = check_conditions(tuple, defects, cert, Mode::Full, tol);
    rep.adjoint_full = check_adjoint_conditions(tuple, defects, adj, Mode::Full, tol);

    if (rep.primal_full.pass) {
        if (!rep.adjoint_full.pass) {
            rep.hypothesis = "conditions (1)-(5) hold but the transferred adjoint data fails: " +
                             join(rep.adjoint_full.failed);
            return rep;
        }
        DilationTuple dil = build_unitary(tuple, defects, cert, adj, opts.n_blocks, tol);
        rep.route = Route::SchafferUnitary;
        rep.dilation = verify_dilation(tuple, dil, opts.maxdeg, tol);
        rep.telescoping = telescoping_check(dil);
        const bool ok = rep.dilation->pass && rep.telescoping->max() <= tol.accept(d);
        rep.verdict = ok ? Verdict::FullPass : Verdict::Fail;
        rep.hypothesis = ok ? "conditions (1)-(5) hold" : "conditions (1)-(5) hold but the built dilation fails verification";
        return rep;
    }

    std::ostringstream why;
    why << "conditions (1)-(5) fail [" << join(rep.primal_full.failed) << "], decisive "
        << rep.primal_full.decisive();

    const Found primal = relaxed_primal(tuple, defects, cert, opts.primal, identity(d), opts.grid, tol);
    rep.primal_source = primal.source;
    rep.primal_relaxed = primal.report;
    if (!primal.cert) {
        why << "; no certificate for conditions (1)-(4) found, no dilation claimed";
        rep.hypothesis = why.str();
        return rep;
    }

    const CanonicalSplit split = canonical_decomposition(tuple.product, tol);
    rep.unitary_dim = split.basis_unitary.cols();
    rep.cnu_dim = split.basis_cnu.cols();
    const ContractionTuple cnu = tuple.restrict_to(split.basis_cnu);
    if (!is_c0(cnu.product, 1, tol).c0) {
        why << "; the completely non-unitary part is not C._0";
        rep.hypothesis = why.str();
        rep.verdict = Verdict::Undetermined;
        return rep;
    }
    const DefectData cnu_defects = defect_data(cnu, tol);
    const Found adjoint = relaxed_adjoint(cnu, cnu_defects, opts.adjoint, split.basis_cnu, opts.grid, tol);
    rep.adjoint_source = adjoint.source;
    rep.adjoint_relaxed = adjoint.report;
    if (!adjoint.cert) {
        why << "; conditions (1)-(4) hold (" << primal.source
            << ") but no adjoint data satisfying (1')-(4') was found for the c.n.u. part";
        rep.hypothesis = why.str();
        rep.verdict = Verdict::Undetermined;
        return rep;
    }

    DilationTuple lau = pure_dilation(cnu, cnu_defects, *adjoint.cert, opts.n_blocks, FunctionSpace::L2, tol);
    DilationTuple dil;
    const CMatrix& b1 = split.basis_unitary;
    const CMatrix& b2 = split.basis_cnu;
    const Index k1 = b1.cols();
    CMatrix tk = identity(d);
    for (Index i = 0; i < tuple.n(); ++i) {
        dil.ops.push_back(direct_sum(lau.ops[i], b1.adjoint() * tuple.factors[i] * b1));
        tk = tk * tuple.factors[i];
        CMatrix target = CMatrix::Zero(dil.ops.back().dim(), dil.ops.back().dim());
        const Index base = lau.ops[i].dim();
        target.topLeftCorner(base, base) = lau.recursion_targets[i];
        target.bottomRightCorner(k1, k1) = b1.adjoint() * tk * b1;
        dil.recursion_targets.push_back(std::move(target));
    }
    finalize_products(dil);
    const Index base = lau.ops.front().dim();
    dil.minimal = CMatrix::Zero(base + k1, base + k1);
    dil.minimal.topLeftCorner(base, base) = lau.minimal;
    dil.minimal.bottomRightCorner(k1, k1) = b1.adjoint() * tuple.product * b1;
    dil.embedding = CMatrix::Zero(base + k1, d);
    dil.embedding.topRows(base) = lau.embedding * b2.adjoint();
    dil.embedding.bottomRows(k1) = b1.adjoint();

    rep.route = Route::LaurentRelaxed;
    rep.dilation = verify_dilation(tuple, dil, opts.maxdeg, tol);
    rep.telescoping = telescoping_check(dil);
    if (rep.dilation->pass) {
        rep.verdict = Verdict::RelaxedPass;
        why << "; conditions (1)-(4) hold (" << primal.source << "), adjoint data from " << adjoint.source
            << ", dilation verified";
    } else {
        rep.verdict = Verdict::Fail;
        why << "; relaxed dilation failed verification";
    }
    rep.hypothesis = why.str();
    return rep;
}

}  // namespace dilation
