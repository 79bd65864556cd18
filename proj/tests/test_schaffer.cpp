#include "doctest.h"
#include "support.hpp"

using namespace dilation;
using namespace testing_support;

namespace {

struct Built {
    ContractionTuple tuple;
    DefectData defects;
    Certificate cert;
    Certificate adj;
};

Built prepare(const std::vector<CMatrix>& ts) {
    ContractionTuple t = build_tuple(ts);
    DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    return {t, d, assemble_certificate(p), adjoint_transfer(p)};
}

Built positive(std::uint64_t seed, int e, int n, int m) {
    GeneratorParams p;
    p.e_dim = e;
    p.n = n;
    p.degree = m;
    return prepare(generate_instance("shift-compression", p, seed).matrices);
}

}  // namespace

TEST_SUITE("schaffer-builder") {

TEST_CASE("isometric Schaffer matrix of a scalar") {
    const double t = 0.6;
    Built b = prepare({scalar(t)});
    const DilationTuple dil = build_isometric(b.tuple, b.defects, b.cert, 3);
    const CMatrix& v = dil.ops[0].matrix;
    REQUIRE(v.rows() == 4);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = t;
    expected(1, 0) = std::sqrt(1 - t * t);
    expected(2, 1) = 1.0;
    expected(3, 2) = 1.0;
    CHECK(fro(v - expected) <= 1e-14);
    CHECK(fro(v - schaffer_isometric_of_product(b.tuple.product, b.defects.dt, 3).matrix) <= 1e-14);
}

TEST_CASE("unitary Schaffer matrix of a scalar") {
    const double t = 0.5;
    Built b = prepare({scalar(t)});
    const DilationTuple dil = build_unitary(b.tuple, b.defects, b.cert, b.adj, 2);
    const TruncatedBlockOperator& w = dil.ops[0];
    const double s = std::sqrt(1 - t * t);
    // rows (D_T at -1, H), columns (H, D_{T*} at 1)
    const Block& dm = w.find("D_T", -1);
    const Block& h = w.find("H", 0);
    const Block& dp = w.find("D_T*", 1);
    CHECK(std::abs(w.entry(dm, h)(0, 0) - s) <= 1e-14);
    CHECK(std::abs(w.entry(dm, dp)(0, 0) + t) <= 1e-14);
    CHECK(std::abs(w.entry(h, h)(0, 0) - t) <= 1e-14);
    CHECK(std::abs(w.entry(h, dp)(0, 0) - s) <= 1e-14);
    CHECK(fro(w.matrix - schaffer_unitary_of_product(b.tuple.product, 2).matrix) <= 1e-14);
}

TEST_CASE("commuting unitaries dilate to themselves") {
    Rng rng(21);
    const CMatrix u = rng.unitary(3);
    Built b = prepare({u, u * u});
    const DilationTuple iso = build_isometric(b.tuple, b.defects, b.cert, 4);
    const DilationTuple uni = build_unitary(b.tuple, b.defects, b.cert, b.adj, 4);
    for (Index i = 0; i < 2; ++i) {
        CHECK(fro(iso.ops[i].matrix - b.tuple.factors[i]) == 0.0);
        CHECK(fro(uni.ops[i].matrix - b.tuple.factors[i]) == 0.0);
    }
}

TEST_CASE("schaffer_unitary_of_product special cases") {
    const CMatrix w = schaffer_unitary_of_product(CMatrix::Zero(1, 1), 3).matrix;
    CMatrix shift = CMatrix::Zero(7, 7);
    for (Index k = 0; k + 1 < 7; ++k) shift(k, k + 1) = 1.0;
    CHECK(fro(w - shift) == 0.0);

    Rng rng(22);
    const CMatrix u = rng.unitary(2);
    CHECK(fro(schaffer_unitary_of_product(u, 5).matrix - u) == 0.0);
}

TEST_CASE("positive instance: products, unitarity, extension") {
    Built b = positive(5, 2, 2, 2);
    const int N = 8;
    const DilationTuple iso = build_isometric(b.tuple, b.defects, b.cert, N);
    const CMatrix viso = schaffer_isometric_of_product(b.tuple.product, b.defects.dt, N).matrix;
    CHECK(interior_norm(iso.product.matrix - viso, iso.ops[0], 3) <= 1e-10);

    const DilationTuple uni = build_unitary(b.tuple, b.defects, b.cert, b.adj, N);
    for (const auto& w : uni.ops) {
        const CMatrix ww = w.matrix.adjoint() * w.matrix - eye(w.dim());
        CHECK(interior_norm(ww, w, 1) <= 1e-10);
    }
    for (Index i = 0; i < b.tuple.n(); ++i) CHECK(extension_residual(uni.ops[i], iso.ops[i]) <= 1e-8);
    for (Index i = 0; i < b.tuple.n(); ++i)
        for (Index j = i + 1; j < b.tuple.n(); ++j) {
            const CMatrix c = uni.ops[i].matrix * uni.ops[j].matrix - uni.ops[j].matrix * uni.ops[i].matrix;
            CHECK(interior_norm(c, uni.ops[i], 2) <= 1e-8 * uni.ops[i].dim());
        }
}

TEST_CASE("telescoping examples") {
    Built one = prepare({scalar(0.7)});
    CHECK(telescoping_check(build_unitary(one.tuple, one.defects, one.cert, one.adj, 6)).max() <= 1e-14);

    Built b = positive(2, 2, 2, 2);
    CHECK(telescoping_check(build_unitary(b.tuple, b.defects, b.cert, b.adj, 10)).max() <= 1e-10);

    const TupleDocument ex = generate_instance("diagonal-triple", {}, 0);
    const PipelineReport rep = full_pipeline(to_tuple(ex), ex.pipeline_options());
    REQUIRE(rep.telescoping.has_value());
    CHECK(rep.telescoping->final_residual > 0.5);
}

TEST_CASE("build rejects invalid certificates") {
    Built b = prepare(counterexample_pair());
    CHECK_THROWS_AS(build_isometric(b.tuple, b.defects, b.cert, 4), Error);
    CHECK_THROWS_AS(build_unitary(b.tuple, b.defects, b.cert, b.adj, 4), Error);
}

TEST_CASE("H block of V_i*V_i - I carries the condition (4) residual") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 3;
        const auto ts = random_commuting(rng, d, 2);
        const ContractionTuple t = build_tuple(ts);
        const DefectData dd = defect_data(t);
        const Index r = dd.rank();
        const CMatrix z = rng.unitary(r);
        std::vector<CMatrix> u, p;
        for (int i = 0; i < 2; ++i) {
            CMatrix ph = CMatrix::Zero(r, r);
            for (Index k = 0; k < r; ++k) ph(k, k) = rng.phase();
            u.push_back(z * ph * z.adjoint());
            p.push_back(rng.projection(r, rng.uniform_int(0, static_cast<int>(r))));
        }
        const Certificate c = make_certificate(u, p);
        const ConditionReport rep = check_conditions(t, dd, c, Mode::Relaxed);
        const DilationTuple iso = build_isometric(t, dd, c, 3);
        for (Index i = 0; i < 2; ++i) {
            const TruncatedBlockOperator& v = iso.ops[i];
            const Block& h = v.find("H", 0);
            const CMatrix gram = v.matrix.adjoint() * v.matrix - eye(v.dim());
            const double block = norm2(gram.block(h.offset, h.offset, h.size, h.size));
            CHECK(std::abs(block - rep.r4[i]) <= 1e-10);
        }
    }
}

TEST_CASE("accumulate") {
    Rng rng(24);
    const CMatrix u1 = rng.unitary(2), u2 = rng.unitary(2);
    const CMatrix p1 = rng.projection(2, 1), p2 = rng.projection(2, 1);
    const Accumulated a = accumulate(make_certificate({u1, u2}, {p1, p2}));
    CHECK(fro(a.u[1] - u1 * u2) <= 1e-14);
    CHECK(fro(a.p[1] - (p1 + u1.adjoint() * p2 * u1)) <= 1e-14);
}

}  // TEST_SUITE
