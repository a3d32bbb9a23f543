#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpqn/bounds.hpp"
#include "bpqn/circuit.hpp"
#include "bpqn/combinatorics.hpp"
#include "bpqn/matrix.hpp"
#include "bpqn/slp.hpp"
#include "bpqn/synthesis.hpp"
#include "bpqn/verification.hpp"

namespace bpqn::cli {

// Exit codes: 0 success/pass, 1 verification or bound-invariant failure,
// 2 usage or structural error.
constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct CliConfig {
    int p = 0, q = 0, n = 0;
    int p_max = 0, q_max = 0, n_max = 0;
    std::string output_path;
    std::string circuit_path;
    std::string format;
    std::uint32_t prime = 1000003;
    std::uint64_t seed = 0;
    std::size_t budget = 6;
    int trials = 20;
    bool weak_base = false;
    bool trace = false;
};

namespace detail_cli {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw structural_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw structural_error("cannot open '" + path + "' for writing");
    file << text;
}

inline nlohmann::json bounds_json(const BoundsReport& r) {
    const auto [a, b] = r.upper_theorem1.as_halves();
    nlohmann::json j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["n"] = r.n;
    j["upper_theorem1"] = {{"a", a.str()}, {"b", b.str()}, {"halves", true},
                           {"decimal", r.upper_theorem1.decimal()}};
    j["gates_synth"] = r.gates_synth;
    j["gates_predicted"] = r.gates_predicted.str();
    j["gates_naive"] = r.gates_naive;
    j["lower_theorem2"] = r.lower_theorem2.str();
    j["lower_remark"] = r.lower_remark.str();
    j["lower_lemma2_dp"] = r.lower_lemma2_dp.str();
    j["rank"] = r.rank;
    return j;
}

inline std::string bounds_text(const BoundsReport& r) {
    const auto [a, b] = r.upper_theorem1.as_halves();
    std::string out;
    out += "p=" + std::to_string(r.p) + " q=" + std::to_string(r.q) + " n=" + std::to_string(r.n) + "\n";
    out += "gates_synth=" + std::to_string(r.gates_synth) + "\n";
    out += "gates_predicted=" + r.gates_predicted.str() + "\n";
    out += "gates_naive=" + std::to_string(r.gates_naive) + "\n";
    out += "upper_theorem1=(" + a.str() + " + " + b.str() + "*sqrt(5))/2 ~ " +
           r.upper_theorem1.decimal() + "\n";
    out += "lower_theorem2=" + r.lower_theorem2.str() + "\n";
    out += "lower_remark=" + r.lower_remark.str() + "\n";
    out += "lower_lemma2_dp=" + r.lower_lemma2_dp.str() + "\n";
    out += "rank=" + std::to_string(r.rank) + "\n";
    return out;
}

}  // namespace detail_cli

// CSV with one row per valid (p, q, n) — n strictly above p + q, where the
// matrix is neither zero nor a bare permutation — p-major then q then n; the
// upper bound appears as its exact halved (a, b) pair.
inline std::string emit_table(int p_max, int q_max, int n_max, bool weak_base = false,
                              std::uint32_t prime = 1000003) {
    detail::require(p_max >= 0 && q_max >= 0 && n_max >= 0, "table bounds must be nonnegative");
    detail::require(binomial(n_max, p_max) <= 10000,
                    "table refused: C(n_max, p_max) exceeds 10^4");
    std::string csv = "p,q,n,gates,predicted,naive,ub_num_a,ub_num_b,th2,remark,lemma2dp,rank\n";
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_max; ++q)
            for (int n = p + q + 1; n <= n_max; ++n) {
                const BoundsReport r = bounds_report(p, q, n, weak_base, prime);
                const auto [a, b] = r.upper_theorem1.as_halves();
                csv += std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(n) + "," +
                       std::to_string(r.gates_synth) + "," + r.gates_predicted.str() + "," +
                       std::to_string(r.gates_naive) + "," + a.str() + "," + b.str() + "," +
                       r.lower_theorem2.str() + "," + r.lower_remark.str() + "," +
                       r.lower_lemma2_dp.str() + "," + std::to_string(r.rank) + "\n";
            }
    return csv;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"addition-only circuits for set-disjointness matrices"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto add_pqn = [&](CLI::App* sub) {
        sub->add_option("-p", cfg.p, "column subset size")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("-q", cfg.q, "row subset size")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("-n", cfg.n, "ground set size")->required()->check(CLI::NonNegativeNumber);
    };

    CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize a circuit and print it");
    add_pqn(synth_cmd);
    synth_cmd->add_option("-o,--output", cfg.output_path, "write to file instead of stdout");
    synth_cmd->add_option("--format", cfg.format, "slp (default) or dot")
        ->check(CLI::IsMember({"slp", "dot"}));
    synth_cmd->add_flag("--trace", cfg.trace, "print the synthesis trace to stderr");

    CLI::App* verify_cmd = app.add_subcommand("verify", "verify an SLP file against the matrix");
    add_pqn(verify_cmd);
    verify_cmd->add_option("--circuit", cfg.circuit_path, "SLP file to verify")->required();

    CLI::App* bounds_cmd = app.add_subcommand("bounds", "report bounds and gate counts");
    add_pqn(bounds_cmd);
    bounds_cmd->add_option("--format", cfg.format, "text (default) or json")
        ->check(CLI::IsMember({"text", "json"}));
    bounds_cmd->add_flag("--weak-base", cfg.weak_base, "use the n-3 base in the gate-elimination DP");
    bounds_cmd->add_option("--prime", cfg.prime, "rank certification prime");

    CLI::App* table_cmd = app.add_subcommand("table", "emit a CSV over a (p, q, n) grid");
    table_cmd->add_option("--p-max", cfg.p_max, "largest p")->required()->check(CLI::NonNegativeNumber);
    table_cmd->add_option("--q-max", cfg.q_max, "largest q")->required()->check(CLI::NonNegativeNumber);
    table_cmd->add_option("--n-max", cfg.n_max, "largest n")->required()->check(CLI::NonNegativeNumber);
    table_cmd->add_option("--format", cfg.format, "csv")->check(CLI::IsMember({"csv"}));
    table_cmd->add_flag("--weak-base", cfg.weak_base, "use the n-3 base in the gate-elimination DP");
    table_cmd->add_option("-o,--output", cfg.output_path, "write to file instead of stdout");

    CLI::App* transpose_cmd = app.add_subcommand("transpose", "transpose an SLP file");
    transpose_cmd->add_option("--circuit", cfg.circuit_path, "SLP file to transpose")->required();
    transpose_cmd->add_option("--out", cfg.output_path, "output SLP file")->required();

    CLI::App* rank_cmd = app.add_subcommand("rank", "certify the matrix rank modulo a prime");
    add_pqn(rank_cmd);
    rank_cmd->add_option("--prime", cfg.prime, "certification prime (rerun with a second prime for reassurance)");

    CLI::App* search_cmd = app.add_subcommand("search", "exhaustive minimum-gate search at tiny scale");
    add_pqn(search_cmd);
    search_cmd->add_option("--budget", cfg.budget, "largest gate count to try")->required();

    CLI::App* check_cmd = app.add_subcommand("check", "randomized semigroup agreement for an SLP file");
    add_pqn(check_cmd);
    check_cmd->add_option("--circuit", cfg.circuit_path, "SLP file to check")->required();
    check_cmd->add_option("--trials", cfg.trials, "number of random valuations");
    check_cmd->add_option("--seed", cfg.seed, "RNG seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (synth_cmd->parsed()) {
            const SynthesisResult r = synth(cfg.p, cfg.q, cfg.n);
            if (cfg.trace) err << r.trace.report();
            const std::string text = cfg.format == "dot" ? export_dot(r.circuit) : serialize_slp(r.circuit);
            detail_cli::write_output(cfg.output_path, text, out);
            return exit_ok;
        }
        if (verify_cmd->parsed()) {
            const Circuit c = parse_slp(detail_cli::read_file(cfg.circuit_path));
            const LabeledBooleanMatrix m = build_matrix(cfg.p, cfg.q, cfg.n);
            const VerificationReport report = verify_circuit(c, m);
            if (report.passed) {
                out << "verification passed: " << report.checked_outputs << " outputs exact\n";
                return exit_ok;
            }
            out << "verification FAILED: " << report.mismatches.size() << " of "
                << report.checked_outputs << " outputs wrong\n";
            for (const VerificationMismatch& mm : report.mismatches)
                out << "  y" << mm.output_label.to_string() << " expected " << mm.expected.to_string()
                    << " got " << mm.actual.to_string() << "\n";
            return exit_failed;
        }
        if (bounds_cmd->parsed()) {
            const BoundsReport r = bounds_report(cfg.p, cfg.q, cfg.n, cfg.weak_base, cfg.prime);
            if (cfg.format == "json")
                out << detail_cli::bounds_json(r).dump(2) << "\n";
            else
                out << detail_cli::bounds_text(r);
            return exit_ok;
        }
        if (table_cmd->parsed()) {
            detail_cli::write_output(cfg.output_path,
                                     emit_table(cfg.p_max, cfg.q_max, cfg.n_max, cfg.weak_base, cfg.prime),
                                     out);
            return exit_ok;
        }
        if (transpose_cmd->parsed()) {
            const Circuit c = parse_slp(detail_cli::read_file(cfg.circuit_path));
            detail_cli::write_output(cfg.output_path, serialize_slp(transpose_circuit(c)), out);
            return exit_ok;
        }
        if (rank_cmd->parsed()) {
            const LabeledBooleanMatrix m = build_matrix(cfg.p, cfg.q, cfg.n);
            const std::size_t r = rank_mod_prime(m, cfg.prime);
            const BigInt expected = binomial(cfg.n, std::min(cfg.p, cfg.q));
            const bool full = BigInt(r) == expected;
            out << "rank=" << r << " expected=" << expected.str() << " full_rank="
                << (full ? "true" : "false") << "\n";
            return full ? exit_ok : exit_failed;
        }
        if (search_cmd->parsed()) {
            const LabeledBooleanMatrix m = build_matrix(cfg.p, cfg.q, cfg.n);
            const auto found = exhaustive_min_gates(m, cfg.budget);
            if (found)
                out << "minimum gates: " << *found << "\n";
            else
                out << "none within budget\n";
            return exit_ok;
        }
        if (check_cmd->parsed()) {
            const Circuit c = parse_slp(detail_cli::read_file(cfg.circuit_path));
            const LabeledBooleanMatrix m = build_matrix(cfg.p, cfg.q, cfg.n);
            const bool ok = random_semigroup_check(c, m, cfg.trials, cfg.seed);
            out << (ok ? "agreement on all trials\n" : "DISAGREEMENT found\n");
            return ok ? exit_ok : exit_failed;
        }
    } catch (const bound_invariant_violation& e) {
        err << "error: " << e.what() << "\n";
        return exit_failed;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const structural_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const not_representable& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const contract_violation& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace bpqn::cli
