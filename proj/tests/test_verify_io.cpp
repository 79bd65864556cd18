#include "doctest.h"
#include "support.hpp"

using namespace dilation;
using namespace testing_support;

namespace {

TupleDocument positive_doc(std::uint64_t seed, int e = 2, int n = 2, int m = 2) {
    GeneratorParams p;
    p.e_dim = e;
    p.n = n;
    p.degree = m;
    return generate_instance("shift-compression", p, seed);
}

ErrorCode parse_error_code(const std::string& text) {
    try {
        parse_document(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::NotHermitian;
}

std::string parse_error_message(const std::string& text) {
    try {
        parse_document(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("verification-harness") {

TEST_CASE("graded_indices order") {
    const auto idx = graded_indices(2, 2);
    const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(idx == expected);
    CHECK(graded_indices(3, 15).size() == 816);
}

TEST_CASE("commuting unitaries dilated by themselves") {
    Rng rng(41);
    const CMatrix u = rng.unitary(2);
    const ContractionTuple t = build_tuple({u, u.adjoint() * u.adjoint()});
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 4);
    const DilationReport rep = verify_dilation(t, dil, 3);
    CHECK(rep.max_compression <= 1e-14);
    CHECK(rep.minimality_defect == 0);
    CHECK(rep.pass);
}

TEST_CASE("scalar dilation against direct powers") {
    const ContractionTuple t = build_tuple({scalar(0.5)});
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 8);
    const DilationReport rep = verify_dilation(t, dil, 7);
    CHECK(rep.max_compression <= 1e-12);
    const CMatrix& e = dil.embedding;
    for (int k = 0; k <= 7; ++k)
        CHECK(std::abs((e.adjoint() * power(dil.ops[0].matrix, k) * e)(0, 0) - std::pow(0.5, k)) <= 1e-12);
    CHECK(minimality_defect(dil, 7).defect == 0);
}

TEST_CASE("degree beyond the truncation is rejected") {
    const ContractionTuple t = build_tuple({scalar(0.5)});
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 4);
    try {
        verify_dilation(t, dil, 9);
        FAIL("expected DegreeExceedsTruncation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegreeExceedsTruncation);
    }
}

TEST_CASE("positive instance at full degree") {
    const TupleDocument doc = positive_doc(9);
    const ContractionTuple t = to_tuple(doc);
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 12);
    const DilationReport rep = verify_dilation(t, dil, 11);
    CHECK(rep.max_compression <= 1e-8);
    CHECK(rep.pass);
    // independent recomputation of a few compressions
    for (const std::vector<int>& k : {std::vector<int>{3, 2}, std::vector<int>{0, 5}, std::vector<int>{4, 4}}) {
        const CMatrix w = multi_power({dil.ops[0].matrix, dil.ops[1].matrix}, k);
        CHECK(norm2(dil.embedding.adjoint() * w * dil.embedding - multi_power(t.factors, k)) <= 1e-8);
    }
}

TEST_CASE("minimality of the worked triple is positive") {
    const TupleDocument doc = generate_instance("diagonal-triple", {}, 0);
    const PipelineReport rep = full_pipeline(to_tuple(doc), doc.pipeline_options());
    CHECK(rep.verdict == Verdict::RelaxedPass);
    CHECK(rep.route == Route::LaurentRelaxed);
    REQUIRE(rep.dilation.has_value());
    CHECK(rep.dilation->max_compression <= 1e-8);
    CHECK(rep.dilation->minimality_defect > 0);
    CHECK(rep.primal_source == "supplied");
}

TEST_CASE("pipeline verdicts") {
    const TupleDocument pos = positive_doc(0);
    const PipelineReport rp = full_pipeline(to_tuple(pos), pos.pipeline_options());
    CHECK(rp.verdict == Verdict::FullPass);
    CHECK(rp.route == Route::SchafferUnitary);
    REQUIRE(rp.dilation.has_value());
    CHECK(rp.dilation->minimality_defect == 0);

    const PipelineReport rr = full_pipeline(build_tuple(counterexample_pair()));
    CHECK(rr.verdict != Verdict::FullPass);
    CHECK(rr.verdict != Verdict::RelaxedPass);
    CHECK_FALSE(rr.dilation.has_value());
    CHECK(rr.primal_full.decisive() == "(4)");

    // worked triple without the supplied certificate: the oracle finds it
    const PipelineReport ro = full_pipeline(build_tuple(diagonal_triple()));
    CHECK(ro.verdict == Verdict::RelaxedPass);
    CHECK(ro.primal_source == "oracle");
}

TEST_CASE("degree monotonicity") {
    const TupleDocument doc = positive_doc(16);
    const ContractionTuple t = to_tuple(doc);
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 10);
    double prev = 0.0;
    for (int m = 0; m <= 9; ++m) {
        const double cur = verify_dilation(t, dil, m).max_compression;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("hardy route agrees with the Schaffer route") {
    const TupleDocument doc = positive_doc(4);
    const ContractionTuple t = to_tuple(doc);
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationReport h = hardy_route(t, d, adjoint_transfer(p), 32, 8, FunctionSpace::H2);
    const PipelineReport s = full_pipeline(t, doc.pipeline_options());
    REQUIRE(s.dilation.has_value());
    CHECK(h.pass == s.dilation->pass);
    CHECK(std::abs(h.max_compression - s.dilation->max_compression) <= 1e-7);
}

}  // TEST_SUITE

TEST_SUITE("cli-io") {

TEST_CASE("generator examples") {
    const TupleDocument pos = positive_doc(0);
    CHECK(pos.dim() == 4);
    CHECK(pos.n() == 2);

    const TupleDocument rem = generate_instance("counterexample-pair", {}, 0);
    REQUIRE(rem.n() == 2);
    CHECK(rem.matrices[0](1, 0) == cplx(1.0 / 3.0));
    CHECK(rem.matrices[0](2, 1) == cplx(1.0 / (3.0 * std::sqrt(3.0))));
    CHECK(rem.matrices[1](2, 0) == cplx(-1.0 / std::sqrt(3.0)));
    CHECK(fro(rem.matrices[0]) == doctest::Approx(std::sqrt(1.0 / 9 + 1.0 / 27)));

    const TupleDocument ex = generate_instance("diagonal-triple", {}, 0);
    REQUIRE(ex.n() == 3);
    for (Index i = 0; i < 3; ++i) {
        CMatrix e = CMatrix::Zero(3, 3);
        e(i, i) = 1.0;
        CHECK(fro(ex.matrices[i] - e) == 0.0);
    }
    CHECK(ex.primal.has_value());

    GeneratorParams bad;
    bad.n = 0;
    try {
        generate_instance("diagonal", bad, 1);
        FAIL("expected BadParams");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadParams);
    }
    CHECK_THROWS_AS(generate_instance("nonsense", {}, 1), Error);
}

TEST_CASE("generic schemes give valid tuples") {
    GeneratorParams gp;
    gp.dim = 4;
    gp.n = 3;
    for (const char* scheme : {"poly-of-matrix", "diagonal"}) {
        const TupleDocument doc = generate_instance(scheme, gp, 5);
        CHECK_NOTHROW(to_tuple(doc));
        CHECK(doc.dim() == 4);
    }
}

TEST_CASE("generator determinism") {
    GeneratorParams gp;
    for (const char* scheme : {"shift-compression", "poly-of-matrix", "diagonal"}) {
        CHECK(emit_document(generate_instance(scheme, gp, 77)) == emit_document(generate_instance(scheme, gp, 77)));
        CHECK(emit_document(generate_instance(scheme, gp, 77)) != emit_document(generate_instance(scheme, gp, 78)));
    }
}

TEST_CASE("json round trip is bit exact") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        TupleDocument doc;
        doc.name = "rt";
        for (int i = 0; i < 2; ++i) doc.matrices.push_back(rng.gaussian_matrix(3, 3) * 1e-3 * (trial + 1));
        doc.matrices[0](0, 0) = cplx(5e-324, -1.7976931348623157e308);
        CertificateData c{{rng.unitary(3), rng.unitary(3)}, {rng.projection(3, 1), rng.projection(3, 2)}};
        doc.primal = c;
        doc.adjoint = c;
        doc.settings.seed = 1234567890123ULL;
        doc.settings.check_tol = 3e-9;
        const TupleDocument back = parse_document(emit_document(doc));
        REQUIRE(back.n() == doc.n());
        for (Index i = 0; i < doc.n(); ++i)
            CHECK((back.matrices[i].array() == doc.matrices[i].array()).all());
        for (Index i = 0; i < 2; ++i) {
            CHECK((back.primal->u[i].array() == doc.primal->u[i].array()).all());
            CHECK((back.adjoint->p[i].array() == doc.adjoint->p[i].array()).all());
        }
        CHECK(back.settings.check_tol == doc.settings.check_tol);
        CHECK(back.settings.seed == doc.settings.seed);
        CHECK(emit_document(back) == emit_document(doc));
    }
}

TEST_CASE("parse errors name the field") {
    CHECK(parse_error_code("{") == ErrorCode::ParseError);
    CHECK(parse_error_code("[]") == ErrorCode::ParseError);
    CHECK(parse_error_message("{\"n\": 1}").find("matrices") != std::string::npos);
    const std::string short_data = R"({"matrices": [{"rows": 2, "cols": 2, "data": [[1, 0]]}]})";
    CHECK(parse_error_message(short_data).find("matrices[0].data") != std::string::npos);
    const std::string bad_entry = R"({"matrices": [{"rows": 1, "cols": 1, "data": [[1]]}]})";
    CHECK(parse_error_message(bad_entry).find("data[0]") != std::string::npos);
    const std::string mismatch = R"({"n": 2, "matrices": [{"rows": 1, "cols": 1, "data": [[0, 0]]}]})";
    CHECK(parse_error_message(mismatch).find("n") != std::string::npos);
    const std::string side = R"({"matrices": [{"rows": 1, "cols": 1, "data": [[0, 0]]}], "certificate": {"left": {}}})";
    CHECK(parse_error_code(side) == ErrorCode::ParseError);
    const std::string settings = R"({"matrices": [{"rows": 1, "cols": 1, "data": [[0, 0]]}], "settings": {"N": "x"}})";
    CHECK(parse_error_message(settings).find("settings.N") != std::string::npos);
}

TEST_CASE("parsed documents feed the tuple builder") {
    const std::string text =
        R"({"n": 2, "dim": 1, "matrices": [{"rows": 1, "cols": 1, "data": [[0.5, 0]]},)"
        R"( {"rows": 1, "cols": 1, "data": [[0.25, 0]]}], "settings": {"N": 12, "maxdeg": 5}})";
    const TupleDocument doc = parse_document(text);
    CHECK(doc.settings.n_blocks == 12);
    CHECK(doc.settings.maxdeg == 5);
    CHECK(doc.settings.grid == 64);
    const ContractionTuple t = to_tuple(doc);
    CHECK(std::abs(t.product(0, 0) - 0.125) <= 1e-15);
    const PipelineOptions o = doc.pipeline_options();
    CHECK(o.n_blocks == 12);

    const std::string noncontraction = R"({"matrices": [{"rows": 1, "cols": 1, "data": [[2, 0]]}]})";
    CHECK_THROWS_AS(to_tuple(parse_document(noncontraction)), Error);
}

TEST_CASE("report serialisation") {
    const TupleDocument doc = positive_doc(2);
    const PipelineReport rep = full_pipeline(to_tuple(doc), doc.pipeline_options());
    const std::string js = to_json(rep);
    CHECK(js.find("\"verdict\": \"full-pass\"") != std::string::npos);
    CHECK(js.find("\"minimality_defect\": 0") != std::string::npos);
    CHECK(to_json(rep.primal_full).find("\"pass\": true") != std::string::npos);
}

TEST_CASE("built-in corpus") {
    const auto rows = run_corpus(Tolerances{});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        INFO(r.name << ": " << r.observed);
        CHECK(r.ok);
    }
}

}  // TEST_SUITE
