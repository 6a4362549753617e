// Command-line front end. Talks to the library exclusively through the C API.
//
// Exit codes, uniform across subcommands:
//   0  success / decided positive
//   1  decided or likely negative
//   2  input or usage error
//   3  undetermined

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magicsq/magicsq.h"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;
constexpr int kExitUndetermined = 3;

struct Doc {
    magicsq_doc* handle = nullptr;

    Doc() = default;
    explicit Doc(magicsq_doc* h) : handle(h) {}
    Doc(const Doc&) = delete;
    Doc& operator=(const Doc&) = delete;
    Doc(Doc&& other) noexcept : handle(other.handle) { other.handle = nullptr; }
    Doc& operator=(Doc&& other) noexcept {
        if (this != &other) {
            magicsq_doc_free(handle);
            handle = other.handle;
            other.handle = nullptr;
        }
        return *this;
    }
    ~Doc() { magicsq_doc_free(handle); }

    magicsq_doc** out() { return &handle; }
    explicit operator bool() const { return handle != nullptr; }
};

// Any non-OK status is an input/usage error at the CLI boundary.
struct CliError {
    std::string message;
};

void check(magicsq_status status) {
    if (status != MAGICSQ_OK)
        throw CliError{magicsq_last_error()};
}

Doc read_doc(const std::string& path) {
    Doc doc;
    check(magicsq_doc_read_file(path.c_str(), doc.out()));
    return doc;
}

void write_doc(const Doc& doc, const std::string& path) {
    check(magicsq_doc_write_file(doc.handle, path.c_str()));
}

void print_doc(const Doc& doc) {
    char* text = nullptr;
    check(magicsq_doc_serialize(doc.handle, &text));
    std::cout << text;
    magicsq_string_free(text);
}

void emit_report(const Doc& report, const std::string& report_path) {
    print_doc(report);
    if (!report_path.empty())
        write_doc(report, report_path);
}

Doc load_basis_arg(const std::string& spec, int n, std::uint64_t seed) {
    Doc basis;
    if (spec == "standard")
        check(magicsq_standard_basis(n, basis.out()));
    else if (spec == "haar")
        check(magicsq_random_basis(n, seed, basis.out()));
    else
        basis = read_doc(spec);
    return basis;
}

int run(int argc, char** argv) {
    CLI::App app{"Quantum magic squares: classification, constructions, "
                 "semiclassicality decisions and purification"};
    app.require_subcommand(1);

    // classify
    std::string cls_input, cls_report;
    CLI::App* cmd_classify = app.add_subcommand("classify", "Classify a qms or qls document");
    cmd_classify->add_option("--input", cls_input, "Input document")->required();
    cmd_classify->add_option("--report", cls_report, "Also write the report here");

    // construct
    CLI::App* cmd_construct = app.add_subcommand("construct", "Build squares and bundles");
    cmd_construct->require_subcommand(1);

    std::string eq_latin, eq_basis = "standard", eq_output;
    std::uint64_t eq_seed = 0;
    CLI::App* c_easy = cmd_construct->add_subcommand("easy-qls", "Basis arranged by a Latin square");
    c_easy->add_option("--latin", eq_latin, "Latin square document")->required();
    c_easy->add_option("--basis", eq_basis, "basis file | standard | haar");
    c_easy->add_option("--seed", eq_seed, "Seed for --basis haar");
    c_easy->add_option("--output", eq_output, "Output qls document")->required();

    std::string pl_latin, pl_povm, pl_output;
    CLI::App* c_povm = cmd_construct->add_subcommand("povm-latin", "POVM arranged by a Latin square");
    c_povm->add_option("--latin", pl_latin, "Latin square document")->required();
    c_povm->add_option("--povm", pl_povm, "POVM document")->required();
    c_povm->add_option("--output", pl_output, "Output qms document")->required();

    int ce_m = 2;
    std::string ce_basis_v, ce_basis_w, ce_output;
    CLI::App* c_counter = cmd_construct->add_subcommand(
        "counterexample", "Non-semiclassical dilation bundle for even n = 2m");
    c_counter->add_option("--m", ce_m, "Half size (m >= 2)")->required();
    c_counter->add_option("--basis-v", ce_basis_v, "First basis document (default: standard)");
    c_counter->add_option("--basis-w", ce_basis_w, "Second basis document (default: Fourier)");
    c_counter->add_option("--output", ce_output, "Output bundle document")->required();

    std::string rnd_kind, rnd_output;
    int rnd_n = 0, rnd_s = 1;
    std::uint64_t rnd_seed = 0;
    CLI::App* c_random = cmd_construct->add_subcommand("random", "Seeded generators");
    c_random->add_option("--kind", rnd_kind, "latin | ds | basis | decomposition")->required();
    c_random->add_option("--n", rnd_n, "Size")->required();
    c_random->add_option("--s", rnd_s, "Interior size (decomposition)");
    c_random->add_option("--seed", rnd_seed, "Seed");
    c_random->add_option("--output", rnd_output, "Output document")->required();

    // decompose
    CLI::App* cmd_decompose = app.add_subcommand("decompose", "Decompositions and decisions");
    cmd_decompose->require_subcommand(1);

    std::string bvn_input, bvn_output, bvn_report;
    CLI::App* d_bvn = cmd_decompose->add_subcommand("bvn", "Birkhoff-von Neumann (interior size 1)");
    d_bvn->add_option("--input", bvn_input, "Doubly stochastic qms document")->required();
    d_bvn->add_option("--output", bvn_output, "Output decomposition document");
    d_bvn->add_option("--report", bvn_report, "Also write the report here");

    std::string sc_input, sc_certificate, sc_report;
    long sc_max_iter = 0;
    double sc_tol = 0.0;
    bool sc_allow_large = false;
    CLI::App* d_semi = cmd_decompose->add_subcommand("semiclassical", "Membership via alternating projections");
    d_semi->add_option("--input", sc_input, "qms or qls document")->required();
    d_semi->add_option("--max-iter", sc_max_iter, "Iteration cap (default 50000)");
    d_semi->add_option("--tol", sc_tol, "Feasibility tolerance (default 1e-7)");
    d_semi->add_flag("--allow-large", sc_allow_large, "Override the n <= 6 guard");
    d_semi->add_option("--certificate", sc_certificate, "Write the decomposition here when feasible");
    d_semi->add_option("--report", sc_report, "Also write the report here");

    std::string ro_input, ro_latin, ro_basis, ro_report;
    CLI::App* d_rank = cmd_decompose->add_subcommand("rank-one-test", "Exact easy-set membership");
    d_rank->add_option("--input", ro_input, "Rank-one qms or qls document")->required();
    d_rank->add_option("--certificate-latin", ro_latin, "Write the Latin square certificate here");
    d_rank->add_option("--certificate-basis", ro_basis, "Write the basis certificate here");
    d_rank->add_option("--report", ro_report, "Also write the report here");

    // purify
    std::string pu_input, pu_basis, pu_output, pu_report;
    CLI::App* cmd_purify = app.add_subcommand("purify", "Matrix-convex purification into easy squares");
    cmd_purify->add_option("--input", pu_input, "Decomposition document")->required();
    cmd_purify->add_option("--basis", pu_basis, "basis file | standard (default standard)");
    cmd_purify->add_option("--output", pu_output, "Output combination document")->required();
    cmd_purify->add_option("--report", pu_report, "Also write the report here");

    // combine
    std::string co_input, co_output, co_report;
    CLI::App* cmd_combine = app.add_subcommand("combine", "Evaluate a matrix convex combination");
    cmd_combine->add_option("--input", co_input, "Combination document")->required();
    cmd_combine->add_option("--output", co_output, "Output qms document")->required();
    cmd_combine->add_option("--report", co_report, "Also write the report here");

    // extract
    std::string ex_input, ex_part, ex_output;
    CLI::App* cmd_extract = app.add_subcommand("extract", "Pull one part out of a bundle");
    cmd_extract->add_option("--input", ex_input, "Bundle document")->required();
    cmd_extract->add_option("--part", ex_part, "a | b | direct_sum | dilation | compression")->required();
    cmd_extract->add_option("--output", ex_output, "Output document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return kExitTrue;
        }
        std::cerr << e.what() << "\n";
        return kExitError;
    }

    if (cmd_classify->parsed()) {
        Doc input = read_doc(cls_input);
        Doc report;
        check(magicsq_classify(input.handle, report.out()));
        emit_report(report, cls_report);
        return kExitTrue;
    }

    if (c_easy->parsed()) {
        Doc latin = read_doc(eq_latin);
        int n = 0;
        check(magicsq_doc_size(latin.handle, &n, nullptr));
        Doc basis = load_basis_arg(eq_basis, n, eq_seed);
        Doc qls;
        check(magicsq_easy_qls(latin.handle, basis.handle, qls.out()));
        write_doc(qls, eq_output);
        return kExitTrue;
    }

    if (c_povm->parsed()) {
        Doc latin = read_doc(pl_latin);
        Doc povm = read_doc(pl_povm);
        Doc qms;
        check(magicsq_povm_latin(latin.handle, povm.handle, qms.out()));
        write_doc(qms, pl_output);
        return kExitTrue;
    }

    if (c_counter->parsed()) {
        Doc basis_v, basis_w;
        if (!ce_basis_v.empty())
            basis_v = read_doc(ce_basis_v);
        if (!ce_basis_w.empty())
            basis_w = read_doc(ce_basis_w);
        Doc bundle;
        check(magicsq_counterexample(ce_m, basis_v.handle, basis_w.handle, bundle.out()));
        write_doc(bundle, ce_output);
        return kExitTrue;
    }

    if (c_random->parsed()) {
        Doc out;
        if (rnd_kind == "latin")
            check(magicsq_random_latin(rnd_n, rnd_seed, out.out()));
        else if (rnd_kind == "ds")
            check(magicsq_random_doubly_stochastic(rnd_n, rnd_seed, out.out()));
        else if (rnd_kind == "basis")
            check(magicsq_random_basis(rnd_n, rnd_seed, out.out()));
        else if (rnd_kind == "decomposition")
            check(magicsq_random_decomposition(rnd_n, rnd_s, rnd_seed, out.out()));
        else
            throw CliError{"unknown random kind \"" + rnd_kind + "\""};
        write_doc(out, rnd_output);
        return kExitTrue;
    }

    if (d_bvn->parsed()) {
        Doc input = read_doc(bvn_input);
        Doc decomposition, report;
        check(magicsq_bvn(input.handle, decomposition.out(), report.out()));
        if (!bvn_output.empty())
            write_doc(decomposition, bvn_output);
        emit_report(report, bvn_report);
        return kExitTrue;
    }

    if (d_semi->parsed()) {
        Doc input = read_doc(sc_input);
        magicsq_verdict verdict = MAGICSQ_UNDETERMINED;
        Doc certificate, report;
        check(magicsq_membership(input.handle, sc_max_iter, sc_tol, sc_allow_large ? 1 : 0, &verdict,
                                 certificate.out(), report.out()));
        if (certificate && !sc_certificate.empty())
            write_doc(certificate, sc_certificate);
        emit_report(report, sc_report);
        if (verdict == MAGICSQ_FEASIBLE)
            return kExitTrue;
        return verdict == MAGICSQ_LIKELY_INFEASIBLE ? kExitFalse : kExitUndetermined;
    }

    if (d_rank->parsed()) {
        Doc input = read_doc(ro_input);
        int positive = 0;
        Doc latin, basis, report;
        check(magicsq_rank_one_test(input.handle, &positive, latin.out(), basis.out(), report.out()));
        if (latin && !ro_latin.empty())
            write_doc(latin, ro_latin);
        if (basis && !ro_basis.empty())
            write_doc(basis, ro_basis);
        emit_report(report, ro_report);
        return positive ? kExitTrue : kExitFalse;
    }

    if (cmd_purify->parsed()) {
        Doc input = read_doc(pu_input);
        Doc basis;
        if (!pu_basis.empty() && pu_basis != "standard")
            basis = read_doc(pu_basis);
        Doc combination, report;
        check(magicsq_purify(input.handle, basis.handle, combination.out(), report.out()));
        write_doc(combination, pu_output);
        emit_report(report, pu_report);
        return kExitTrue;
    }

    if (cmd_combine->parsed()) {
        Doc input = read_doc(co_input);
        Doc qms, report;
        check(magicsq_combine(input.handle, qms.out(), report.out()));
        write_doc(qms, co_output);
        emit_report(report, co_report);
        return kExitTrue;
    }

    if (cmd_extract->parsed()) {
        Doc input = read_doc(ex_input);
        Doc part;
        check(magicsq_doc_get(input.handle, ex_part.c_str(), part.out()));
        write_doc(part, ex_output);
        return kExitTrue;
    }

    std::cerr << "no subcommand\n";
    return kExitError;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
