#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dilation/random.hpp"
#include "dilation/verify.hpp"

namespace dilation {

struct CertificateData {
    std::vector<CMatrix> u;
    std::vector<CMatrix> p;
};

struct Settings {
    int n_blocks = 16;
    int maxdeg = 8;
    int grid = 64;
    double rank_tol = 1e-10;
    double check_tol = 1e-8;
    std::optional<std::uint64_t> seed;
};

// Operators and certificates are given in ambient coordinates.
struct TupleDocument {
    std::string name;
    std::vector<CMatrix> matrices;
    std::optional<CertificateData> primal;
    std::optional<CertificateData> adjoint;
    Settings settings;

    Index n() const { return static_cast<Index>(matrices.size()); }
    Index dim() const { return matrices.empty() ? 0 : matrices.front().rows(); }
    Tolerances tolerances() const;
    PipelineOptions pipeline_options() const;
};

// Throws Error(ParseError) naming the offending field.
TupleDocument parse_document(const std::string& text);
std::string emit_document(const TupleDocument& doc);
TupleDocument load_document(const std::string& path);

ContractionTuple to_tuple(const TupleDocument& doc);

struct GeneratorParams {
    int e_dim = 2;   // shift-compression fiber
    int n = 2;
    int degree = 2;  // shift-compression truncation
    int dim = 3;     // poly-of-matrix and diagonal
};

// Schemes: shift-compression, poly-of-matrix, diagonal, counterexample-pair, diagonal-triple.
TupleDocument generate_instance(const std::string& scheme, const GeneratorParams& params, std::uint64_t seed);

// (U_i, P_i) on C^e with U_iP_i^perp + zU_iP_i commuting isometries whose
// product is the shift; random block partition conjugated by a random unitary.
std::vector<std::pair<CMatrix, CMatrix>> random_bdf_pairs(Index e, int n, Rng& rng);

// Compression of the Toeplitz operators of the pairs to coefficient modes 0..m-1.
std::vector<CMatrix> shift_compression(const std::vector<std::pair<CMatrix, CMatrix>>& pairs, int m);

std::vector<CMatrix> counterexample_pair();
std::vector<CMatrix> diagonal_triple();

// Parameters used by the positive corpus for a given seed.
GeneratorParams positive_corpus_params(std::uint64_t seed);

struct CorpusOutcome {
    std::string name;
    std::string expected;
    std::string observed;
    bool ok = false;
    double seconds = 0.0;
};

// Runs the built-in worked examples and compares against their known outcomes.
std::vector<CorpusOutcome> run_corpus(const Tolerances& tol);

std::string to_json(const ConditionReport& rep);
std::string to_json(const DilationReport& rep);
std::string to_json(const PipelineReport& rep);
std::string to_json(const DilationTuple& dil, const std::string& kind);
std::string to_json(const CanonicalSplit& split);
std::string to_json(const CharacteristicSample& sample);

}  // namespace dilation
