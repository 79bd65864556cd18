#include <chrono>
#include <cmath>
#include <sstream>

#include "dilation/io.hpp"

namespace dilation {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadParams, what); }

CMatrix truncated_toeplitz(const CMatrix& a0, const CMatrix& a1, int m) {
    const Index e = a0.rows();
    CMatrix t = CMatrix::Zero(e * m, e * m);
    for (int k = 0; k < m; ++k) {
        t.block(k * e, k * e, e, e) = a0;
        if (k + 1 < m) t.block((k + 1) * e, k * e, e, e) = a1;
    }
    return t;
}

// Strict contraction p(A) for a random polynomial p with small coefficients.
CMatrix random_poly(const CMatrix& a, Rng& rng) {
    const Index d = a.rows();
    CMatrix out = CMatrix::Zero(d, d);
    CMatrix power = identity(d);
    const int degree = rng.uniform_int(1, 3);
    for (int k = 0; k <= degree; ++k) {
        out += cplx(rng.gaussian(), rng.gaussian()) * power;
        power = power * a;
    }
    const double norm = op_norm(out);
    if (norm > 0.0) out *= rng.uniform(0.3, 0.95) / norm;
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace

std::vector<std::pair<CMatrix, CMatrix>> random_bdf_pairs(Index e, int n, Rng& rng) {
    if (e < 1 || n < 1) bad("random_bdf_pairs needs e >= 1 and n >= 1");
    std::vector<std::pair<CMatrix, CMatrix>> pairs(static_cast<size_t>(n));
    for (auto& [u, p] : pairs) {
        u = identity(e);
        p = CMatrix::Zero(e, e);
    }
    if (n == 1) {
        pairs[0].second = identity(e);
        return pairs;
    }
    // On each block one pair (i, j) carries the shift: V_i V_j = z there.
    Index offset = 0;
    while (offset < e) {
        const Index size = rng.uniform_int(1, static_cast<int>(e - offset));
        const int i = rng.uniform_int(0, n - 2);
        const int j = rng.uniform_int(i + 1, n - 1);
        const CMatrix a = rng.unitary(size);
        const CMatrix p = rng.projection(size, rng.uniform_int(0, static_cast<int>(size)));
        const CMatrix p_perp = identity(size) - p;
        pairs[i].first.block(offset, offset, size, size) = a;
        pairs[i].second.block(offset, offset, size, size) = p;
        pairs[j].first.block(offset, offset, size, size) = a.adjoint();
        pairs[j].second.block(offset, offset, size, size) = a * p_perp * a.adjoint();
        offset += size;
    }
    const CMatrix z = rng.unitary(e);
    for (auto& [u, p] : pairs) {
        u = z * u * z.adjoint();
        p = hermitian_part(z * p * z.adjoint());
    }
    return pairs;
}

std::vector<CMatrix> shift_compression(const std::vector<std::pair<CMatrix, CMatrix>>& pairs, int m) {
    if (m < 1) bad("shift_compression needs m >= 1");
    // Modes 0..m-1 are co-invariant for analytic Toeplitz operators, so the
    // compression is the leading block of the lower-bidiagonal matrix.
    std::vector<CMatrix> out;
    for (const auto& [u, p] : pairs) {
        const LinearSymbol sym = LinearSymbol::analytic(u, p);
        out.push_back(truncated_toeplitz(sym.a0, sym.a1, m));
    }
    return out;
}

std::vector<CMatrix> counterexample_pair() {
    CMatrix t1 = CMatrix::Zero(3, 3);
    CMatrix t2 = CMatrix::Zero(3, 3);
    t1(1, 0) = 1.0 / 3.0;
    t1(2, 1) = 1.0 / (3.0 * std::sqrt(3.0));
    t2(2, 0) = -1.0 / std::sqrt(3.0);
    return {t1, t2};
}

std::vector<CMatrix> diagonal_triple() {
    std::vector<CMatrix> out;
    for (Index i = 0; i < 3; ++i) {
        CMatrix e = CMatrix::Zero(3, 3);
        e(i, i) = 1.0;
        out.push_back(e);
    }
    return out;
}

GeneratorParams positive_corpus_params(std::uint64_t seed) {
    GeneratorParams p;
    p.e_dim = 1 + static_cast<int>(seed % 3);
    p.n = 1 + static_cast<int>((seed / 3) % 3);
    p.degree = 1 + static_cast<int>((seed / 9) % 3);
    return p;
}

TupleDocument generate_instance(const std::string& scheme, const GeneratorParams& params, std::uint64_t seed) {
    TupleDocument doc;
    doc.settings.seed = seed;
    Rng rng(seed);
    if (scheme == "shift-compression") {
        if (params.e_dim < 1 || params.n < 1 || params.degree < 1)
            bad("shift-compression needs e_dim, n, degree >= 1");
        doc.matrices = shift_compression(random_bdf_pairs(params.e_dim, params.n, rng), params.degree);
        doc.name = "shift-compression";
    } else if (scheme == "poly-of-matrix") {
        if (params.dim < 1 || params.n < 1) bad("poly-of-matrix needs dim, n >= 1");
        const CMatrix a = rng.contraction(params.dim, 1.0);
        for (int i = 0; i < params.n; ++i) doc.matrices.push_back(random_poly(a, rng));
        doc.name = "poly-of-matrix";
    } else if (scheme == "diagonal") {
        if (params.dim < 1 || params.n < 1) bad("diagonal needs dim, n >= 1");
        for (int i = 0; i < params.n; ++i) {
            CMatrix t = CMatrix::Zero(params.dim, params.dim);
            for (Index k = 0; k < params.dim; ++k) t(k, k) = std::sqrt(rng.uniform(0.0, 0.9)) * rng.phase();
            doc.matrices.push_back(t);
        }
        doc.name = "diagonal";
    } else if (scheme == "counterexample-pair") {
        doc.matrices = counterexample_pair();
        doc.name = "counterexample-pair";
        doc.settings.seed.reset();
    } else if (scheme == "diagonal-triple") {
        doc.matrices = diagonal_triple();
        CertificateData cert;
        for (const auto& t : doc.matrices) {
            cert.u.push_back(identity(3));
            cert.p.push_back(identity(3) - t);
        }
        doc.primal = cert;
        doc.name = "diagonal-triple";
        doc.settings.seed.reset();
    } else {
        bad("unknown scheme '" + scheme + "'");
    }
    return doc;
}

std::vector<CorpusOutcome> run_corpus(const Tolerances& tol) {
    std::vector<CorpusOutcome> out;

    {
        const auto start = std::chrono::steady_clock::now();
        CorpusOutcome o{"counterexample-pair", "full fail at (4)", "", false, 0.0};
        const ContractionTuple t = to_tuple(generate_instance("counterexample-pair", {}, 0));
        const DefectData d = defect_data(t, tol);
        const Certificate cert = assemble_certificate(fundamental_pairs(t, d, tol));
        const ConditionReport rep = check_conditions(t, d, cert, Mode::Full, tol);
        o.observed = rep.pass ? "full pass" : "full fail, r4 = " + fmt(rep.max_r4()) + ", decisive " + rep.decisive();
        o.ok = !rep.pass && rep.max_r4() >= 1e-2;
        o.seconds = seconds_since(start);
        out.push_back(o);
    }

    {
        const auto start = std::chrono::steady_clock::now();
        CorpusOutcome o{"diagonal-triple", "relaxed pass, (5) fails, minimality defect > 0", "", false, 0.0};
        const TupleDocument doc = generate_instance("diagonal-triple", {}, 0);
        const ContractionTuple t = to_tuple(doc);
        const DefectData d = defect_data(t, tol);
        const Certificate cert = compress_certificate(doc.primal->u, doc.primal->p, d.dt.basis);
        const ConditionReport rel = check_conditions(t, d, cert, Mode::Relaxed, tol);
        const PipelineReport pipe = full_pipeline(t, doc.pipeline_options(), tol);
        const int defect = pipe.dilation ? pipe.dilation->minimality_defect : -1;
        std::ostringstream os;
        os << "relaxed " << (rel.pass ? "pass" : "fail") << ", r5 = " << fmt(rel.r5) << ", verdict "
           << to_string(pipe.verdict) << ", minimality defect " << defect;
        o.observed = os.str();
        o.ok = rel.pass && std::abs(rel.r5 - 1.0) <= 1e-10 && pipe.verdict == Verdict::RelaxedPass &&
               pipe.dilation && pipe.dilation->pass && defect > 0;
        o.seconds = seconds_since(start);
        out.push_back(o);
    }

    {
        const auto start = std::chrono::steady_clock::now();
        CorpusOutcome o{"shift-compression(2,2,2)", "full pass", "", false, 0.0};
        GeneratorParams p;
        p.e_dim = 2;
        p.n = 2;
        p.degree = 2;
        const TupleDocument doc = generate_instance("shift-compression", p, 0);
        const PipelineReport pipe = full_pipeline(to_tuple(doc), doc.pipeline_options(), tol);
        o.observed = std::string(to_string(pipe.verdict)) +
                     (pipe.dilation ? ", minimality defect " + std::to_string(pipe.dilation->minimality_defect) : "");
        o.ok = pipe.verdict == Verdict::FullPass && pipe.dilation && pipe.dilation->minimality_defect == 0;
        o.seconds = seconds_since(start);
        out.push_back(o);
    }
    return out;
}

}  // namespace dilation
