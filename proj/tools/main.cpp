// dilation: command-line front end for the dilation library.
// Exit codes: 0 pass, 2 mathematical failure, 1 error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "dilation/dilation.hpp"

using namespace dilation;

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

// DILATION_TOL overrides whatever the document says.
Tolerances effective_tolerances(const TupleDocument& doc) {
    Tolerances t = doc.tolerances();
    if (std::getenv("DILATION_TOL")) t.check_tol = tolerances_from_env().check_tol;
    t.validate();
    return t;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

void print_report(const ConditionReport& r) {
    std::cout << (r.adjoint ? "adjoint" : "primal") << " " << to_string(r.mode) << " check: "
              << (r.pass ? "PASS" : "FAIL") << "\n";
    std::cout << std::scientific << std::setprecision(3);
    std::cout << "  dim " << r.dim << ", defect rank " << r.defect_rank << "\n";
    std::cout << "  (1) " << r.max_r1() << "  (2) " << r.max_r2() << "  (3) " << r.max_r3() << "  (4) "
              << r.max_r4() << "  (5) " << r.r5 << "\n";
    std::cout << "  unitarity " << r.unitarity << "  projection " << r.projection << "  commutation "
              << r.commutation << "  product " << r.product_identity << "\n";
    if (r.conditioning_warning) std::cout << "  warning: ill-conditioned fundamental solve\n";
    if (!r.pass) std::cout << "  decisive: " << r.decisive() << "\n";
    std::cout << std::defaultfloat;
}

ConditionReport run_check(const TupleDocument& doc, Mode mode, bool adjoint_side, const Tolerances& tol) {
    const ContractionTuple t = to_tuple(doc);
    const DefectData d = defect_data(t, tol);
    const FundamentalPairs pairs = fundamental_pairs(t, d, tol);
    if (adjoint_side) {
        if (doc.adjoint) {
            const Certificate c = compress_certificate(doc.adjoint->u, doc.adjoint->p, d.dt_star.basis);
            return check_adjoint_conditions(t, d, c, mode, tol);
        }
        return check_adjoint_conditions(t, d, adjoint_transfer(pairs), mode, tol);
    }
    if (doc.primal) {
        const Certificate c = compress_certificate(doc.primal->u, doc.primal->p, d.dt.basis);
        return check_conditions(t, d, c, mode, tol);
    }
    ConditionReport r = check_conditions(t, d, assemble_certificate(pairs), mode, tol);
    if (!r.pass && mode == Mode::Relaxed) {
        try {
            OracleResult o = certificate_oracle_search(t, d, doc.settings.grid, tol);
            if (o.relaxed.found) return o.relaxed.report;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Unsupported) throw;
        }
    }
    return r;
}

int cmd_check(const std::string& file, const std::string& mode, bool adjoint_side, bool as_json) {
    const TupleDocument doc = load_document(file);
    const Tolerances tol = effective_tolerances(doc);
    const ConditionReport r = run_check(doc, mode == "full" ? Mode::Full : Mode::Relaxed, adjoint_side, tol);
    if (as_json)
        std::cout << to_json(r) << "\n";
    else
        print_report(r);
    return r.pass ? kPass : kFail;
}

int cmd_dilate(const std::string& file, const std::string& kind, int n_blocks, const std::string& out) {
    const TupleDocument doc = load_document(file);
    const Tolerances tol = effective_tolerances(doc);
    const ContractionTuple t = to_tuple(doc);
    const DefectData d = defect_data(t, tol);
    const FundamentalPairs pairs = fundamental_pairs(t, d, tol);
    const Certificate primal = doc.primal ? compress_certificate(doc.primal->u, doc.primal->p, d.dt.basis)
                                          : assemble_certificate(pairs);
    const Certificate adjoint = doc.adjoint
                                    ? compress_certificate(doc.adjoint->u, doc.adjoint->p, d.dt_star.basis)
                                    : adjoint_transfer(pairs);
    DilationTuple dil;
    if (kind == "isometric") {
        dil = build_isometric(t, d, primal, n_blocks, tol);
    } else if (kind == "unitary") {
        dil = build_unitary(t, d, primal, adjoint, n_blocks, tol);
    } else if (kind == "hardy-h2" || kind == "hardy-l2") {
        if (!check_adjoint_conditions(t, d, adjoint, Mode::Relaxed, tol).pass)
            throw Error(ErrorCode::InvalidCertificate, "adjoint data fails conditions (1')-(4')");
        dil = pure_dilation(t, d, adjoint, n_blocks, kind == "hardy-h2" ? FunctionSpace::H2 : FunctionSpace::L2, tol);
    } else {
        throw Error(ErrorCode::BadParams, "unknown kind " + kind);
    }
    write_output(to_json(dil, kind), out);
    return kPass;
}

int cmd_verify(const std::string& file, int n_blocks, int maxdeg, bool as_json) {
    const TupleDocument doc = load_document(file);
    const Tolerances tol = effective_tolerances(doc);
    PipelineOptions opts = doc.pipeline_options();
    if (n_blocks > 0) opts.n_blocks = n_blocks;
    if (maxdeg >= 0) opts.maxdeg = maxdeg;
    const PipelineReport r = full_pipeline(to_tuple(doc), opts, tol);
    if (as_json) {
        std::cout << to_json(r) << "\n";
    } else {
        std::cout << "verdict: " << to_string(r.verdict) << " (" << to_string(r.route) << ")\n";
        std::cout << "  " << r.hypothesis << "\n";
        if (r.dilation) {
            const DilationReport& v = *r.dilation;
            std::cout << std::scientific << std::setprecision(3);
            std::cout << "  compressions: " << v.compressions.size() << " multi-indices up to degree " << v.maxdeg
                      << ", worst " << v.max_compression << "\n";
            std::cout << "  unitarity " << v.max_unitarity() << ", product unitarity " << v.product_unitarity
                      << ", commutation " << v.commutation << "\n";
            if (r.telescoping) std::cout << "  telescoping " << r.telescoping->max() << "\n";
            std::cout << std::defaultfloat << "  minimality defect " << v.minimality_defect << " of "
                      << v.window_dim << "\n";
        }
    }
    return r.verdict == Verdict::FullPass || r.verdict == Verdict::RelaxedPass ? kPass : kFail;
}

int cmd_decompose(const std::string& file, const std::string& out) {
    const TupleDocument doc = load_document(file);
    const Tolerances tol = effective_tolerances(doc);
    const ContractionTuple t = to_tuple(doc);
    write_output(to_json(canonical_decomposition(t.product, tol)), out);
    return kPass;
}

int cmd_theta(const std::string& file, int grid, const std::string& out) {
    const TupleDocument doc = load_document(file);
    const Tolerances tol = effective_tolerances(doc);
    const ContractionTuple t = to_tuple(doc);
    write_output(to_json(characteristic_sample(t.product, grid, tol)), out);
    return kPass;
}

int cmd_examples() {
    const std::vector<CorpusOutcome> rows = run_corpus(tolerances_from_env());
    bool all = true;
    std::cout << std::left << std::setw(28) << "example" << std::setw(6) << "ok" << "observed\n";
    for (const auto& r : rows) {
        std::cout << std::setw(28) << r.name << std::setw(6) << (r.ok ? "PASS" : "FAIL") << r.observed << "  ["
                  << std::fixed << std::setprecision(3) << r.seconds << " s]\n"
                  << std::defaultfloat;
        all = all && r.ok;
    }
    return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unitary dilations of commuting contraction tuples"};
    app.require_subcommand(1);

    std::string file, mode = "full", kind = "unitary", out, scheme = "shift-compression";
    bool as_json = false, adjoint_side = false;
    int n_blocks = 16, maxdeg = 8, grid = 64;
    GeneratorParams gen;
    std::uint64_t seed = 0;

    auto* check = app.add_subcommand("check", "Check the dilation conditions for a tuple");
    check->add_option("file", file, "Tuple document")->required()->check(CLI::ExistingFile);
    check->add_option("--mode", mode, "full or relaxed")->check(CLI::IsMember({"full", "relaxed"}));
    check->add_flag("--adjoint", adjoint_side, "Check the adjoint-side conditions");
    check->add_flag("--json", as_json, "Print the report as JSON");

    auto* dilate = app.add_subcommand("dilate", "Build a truncated dilation and write its blocks");
    dilate->add_option("file", file, "Tuple document")->required()->check(CLI::ExistingFile);
    dilate->add_option("--kind", kind, "isometric, unitary, hardy-h2 or hardy-l2")
        ->check(CLI::IsMember({"isometric", "unitary", "hardy-h2", "hardy-l2"}));
    dilate->add_option("--N", n_blocks, "Truncation depth")->check(CLI::Range(1, 4096));
    dilate->add_option("-o,--output", out, "Output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Run the full pipeline and verify the dilation");
    verify->add_option("file", file, "Tuple document")->required()->check(CLI::ExistingFile);
    int verify_n = -1, verify_deg = -1;
    verify->add_option("--N", verify_n, "Truncation depth")->check(CLI::Range(1, 4096));
    verify->add_option("--maxdeg", verify_deg, "Largest total degree checked")->check(CLI::Range(0, 64));
    verify->add_flag("--json", as_json, "Print the report as JSON");

    auto* decompose = app.add_subcommand("decompose", "Split H into the unitary and c.n.u. parts of T");
    decompose->add_option("file", file, "Tuple document")->required()->check(CLI::ExistingFile);
    decompose->add_option("-o,--output", out, "Output file (default stdout)");

    auto* theta = app.add_subcommand("theta", "Sample the characteristic function of T on the circle");
    theta->add_option("file", file, "Tuple document")->required()->check(CLI::ExistingFile);
    theta->add_option("--grid", grid, "Number of sample points")->check(CLI::Range(1, 1 << 16));
    theta->add_option("-o,--output", out, "Output file (default stdout)");

    auto* examples = app.add_subcommand("examples", "Built-in worked examples");
    examples->require_subcommand(1);
    examples->add_subcommand("run", "Run the examples and print a table");

    auto* generate = app.add_subcommand("generate", "Write a random or built-in tuple document");
    generate->add_option("--scheme", scheme, "Generator scheme")
        ->check(CLI::IsMember({"shift-compression", "poly-of-matrix", "diagonal", "counterexample-pair", "diagonal-triple"}));
    generate->add_option("--e", gen.e_dim, "Fiber dimension (shift-compression)");
    generate->add_option("--n", gen.n, "Number of operators");
    generate->add_option("--degree", gen.degree, "Truncation degree (shift-compression)");
    generate->add_option("--dim", gen.dim, "Matrix size (poly-of-matrix, diagonal)");
    generate->add_option("--seed", seed, "Random seed");
    generate->add_option("-o,--output", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kError;
    }

    try {
        if (*check) return cmd_check(file, mode, adjoint_side, as_json);
        if (*dilate) return cmd_dilate(file, kind, n_blocks, out);
        if (*verify) return cmd_verify(file, verify_n, verify_deg, as_json);
        if (*decompose) return cmd_decompose(file, out);
        if (*theta) return cmd_theta(file, grid, out);
        if (*examples) return cmd_examples();
        if (*generate) {
            write_output(emit_document(generate_instance(scheme, gen, seed)), out);
            return kPass;
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
