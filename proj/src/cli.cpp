#include "idem/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "idem/classify.hpp"
#include "idem/error.hpp"
#include "idem/mat2.hpp"
#include "idem/quadcong.hpp"
#include "idem/znring.hpp"

namespace idem::cli {

namespace {

using nlohmann::json;

struct Options {
    bool json = false;
    u64 budget = kDefaultOracleBudget;
    u64 bound = kDefaultFactorBound;
};

std::string header(const Modulus& m) {
    std::ostringstream os;
    os << "modulus: " << m.n() << " =";
    for (std::size_t i = 0; i < m.primes().size(); ++i) os << (i ? " * " : " ") << m.primes()[i];
    return os.str();
}

json header_json(const Modulus& m) { return {{"n", m.n()}, {"primes", m.primes()}}; }

std::string join(const std::vector<Residue>& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << values[i];
    return os.str();
}

std::string pattern_text(const IdempotentPattern& p) {
    std::string s;
    for (std::size_t i = 0; i < p.bits.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p.bits[i]);
    }
    return "(" + s + ")";
}

// --- idempotents -----------------------------------------------------------

int cmd_idempotents(u64 n, const Options& opt, std::ostream& out) {
    const Modulus m = factor_squarefree(n, opt.bound);
    const auto ids = enumerate_idempotents(m);
    std::vector<EulerCheckRow> rows;
    if (m.prime_count() == 3) rows = euler_crosscheck(m);

    if (opt.json) {
        json j = header_json(m);
        std::vector<u64> values;
        for (const auto& y : ids) values.push_back(y.value());
        j["idempotents"] = values;
        auto forms = json::array();
        for (const auto& row : rows) {
            forms.push_back({{"pattern", row.pattern.bits},
                             {"crt", row.crt.value()},
                             {"expression", row.expression},
                             {"closed_form", row.canonical.value()},
                             {"closed_form_matches", row.canonical_matches()},
                             {"shared_exponent", row.shared_exponent.value()},
                             {"shared_exponent_matches", row.shared_exponent_matches()}});
        }
        j["closed_forms"] = forms;
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << header(m) << '\n';
    out << "idempotents: " << join(ids) << '\n';
    out << "count: " << ids.size() << '\n';
    if (!rows.empty()) {
        out << "closed forms (pattern: crt | closed form | shared-exponent variant):\n";
        for (const auto& row : rows) {
            out << "  " << pattern_text(row.pattern) << ": " << row.crt << " | " << row.expression
                << " = " << row.canonical << (row.canonical_matches() ? " ok" : " MISMATCH")
                << " | " << row.shared_exponent
                << (row.shared_exponent_matches() ? " ok" : " differs") << '\n';
        }
    }
    return kExitOk;
}

// --- solve-trace -----------------------------------------------------------

std::optional<FormulaReport> formula_report_for(const Modulus& m, const Residue& d) {
    if (m.prime_count() != 3) return std::nullopt;
    const auto pattern = pattern_of(m, d.value());
    const int ones = pattern.bits[0] + pattern.bits[1] + pattern.bits[2];
    const auto& pr = m.primes();
    if (ones == 1) {
        std::size_t r = 0;
        while (!pattern.bits[r]) ++r;
        std::vector<u64> rest;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i != r) rest.push_back(pr[i]);
        }
        return lemma_formula_solutions(m, FormulaFamily::PrimePairDet, {rest[0], rest[1], pr[r]});
    }
    if (ones == 2) {
        std::size_t p = 0;
        while (pattern.bits[p]) ++p;
        std::vector<u64> rest;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i != p) rest.push_back(pr[i]);
        }
        return lemma_formula_solutions(m, FormulaFamily::SinglePrimeDet, {pr[p], rest[0], rest[1]});
    }
    return std::nullopt;
}

int cmd_solve_trace(u64 n, u64 d_value, const Options& opt, std::ostream& out) {
    const Modulus m = factor_squarefree(n, opt.bound);
    const Residue d = Residue::from_unsigned(d_value, n);
    const TraceCandidateSet set = trace_candidates(m, d);
    const auto report = formula_report_for(m, d);

    if (opt.json) {
        json j = header_json(m);
        j["det"] = d.value();
        std::vector<u64> sols;
        for (const auto& t : set.solutions) sols.push_back(t.value());
        j["solutions"] = sols;
        if (report) {
            auto entries = json::array();
            for (const auto& e : report->entries) {
                entries.push_back({{"index", e.index},
                                   {"expression", e.expression},
                                   {"value", e.value.value()},
                                   {"role_residues", e.role_residues},
                                   {"in_solver_set", e.in_solver_set}});
            }
            j["formula_report"] = {{"family", to_string(report->family)},
                                   {"roles", report->roles},
                                   {"entries", entries},
                                   {"matches_solver", report->matches_solver()}};
        }
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << header(m) << '\n';
    out << "det: " << d << '\n';
    out << "solutions: " << join(set.solutions) << '\n';
    out << "count: " << set.solutions.size() << '\n';
    if (!report) {
        out << "closed-form list: none for this det\n";
        return kExitOk;
    }
    out << "closed-form list (" << to_string(report->family) << ", p=" << report->roles[0]
        << " q=" << report->roles[1] << " r=" << report->roles[2] << "):\n";
    for (const auto& e : report->entries) {
        out << "  " << e.index << ". " << e.expression << " = " << e.value << "  (mod p,q,r: "
            << e.role_residues[0] << ',' << e.role_residues[1] << ',' << e.role_residues[2]
            << ") " << (e.in_solver_set ? "in solution set" : "NOT A SOLUTION") << '\n';
    }
    out << "discrepancies: " << report->discrepancies().size() << '\n';
    out << "closed-form list equals solution set: " << (report->matches_solver() ? "yes" : "no")
        << '\n';
    return kExitOk;
}

// --- classify ----------------------------------------------------------------

int cmd_classify(const std::string& path, const Options& opt, std::ostream& out) {
    const Mat2Poly g = read_matrix_file(path);
    const Modulus m = factor_squarefree(g.modulus(), opt.bound);
    const ClassificationReport report = classify(g, m);
    if (opt.json) {
        json j = header_json(m);
        j["matrix"] = to_json(g)["entries"];
        j["report"] = to_json(report);
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << header(m) << '\n';
    out << "matrix: " << g << '\n';
    out << to_text(report);
    return kExitOk;
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
    std::string family;
    u64 n = 0;
    u64 seed = 0;
    std::string e;
    std::string m;
    std::optional<u64> g;
    std::vector<u64> roles;
    std::optional<u64> scale;
    int max_degree = 5;
    std::string output;
};

int cmd_generate(const GenerateArgs& a, const Options& opt, std::ostream& out) {
    const Modulus m = factor_squarefree(a.n, opt.bound);
    require_classification_scope(m);
    const ClassFamily family = family_from_string(a.family);

    ClassLabel label;
    if (family == ClassFamily::Det0_Scaled) {
        label = a.scale ? make_scaled_label_for(m, *a.scale) : make_scaled_label(m, 0);
    } else if (!a.roles.empty()) {
        if (a.roles.size() != 3) throw Error(ErrorCode::InvalidArgument, "--roles needs p,q,r");
        label = make_label(m, family, {a.roles[0], a.roles[1], a.roles[2]});
    } else {
        label = default_label(m, family);
    }

    GenerateParams params;
    params.max_degree = a.max_degree;
    if (!a.e.empty()) params.e = parse_poly(a.e, m.n());
    if (!a.m.empty()) params.m = parse_poly(a.m, m.n());
    params.g = a.g;
    std::mt19937_64 rng(a.seed);
    const Mat2Poly g = generate(m, label, params, rng);

    json doc = to_json(g);
    doc["primes"] = m.primes();
    doc["label"] = to_json(label);
    if (!a.output.empty()) {
        std::ofstream file(a.output);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + a.output);
        file << doc.dump() << '\n';
        if (opt.json) {
            out << json{{"n", m.n()}, {"primes", m.primes()}, {"file", a.output}}.dump() << '\n';
        } else {
            out << header(m) << '\n' << "label: " << to_string(label) << '\n';
            out << "matrix: " << g << '\n' << "wrote " << a.output << '\n';
        }
        return kExitOk;
    }
    out << doc.dump() << '\n';
    return kExitOk;
}

// --- oracle ------------------------------------------------------------------

int cmd_oracle(u64 n, const Options& opt, std::ostream& out) {
    const Modulus m = factor_squarefree(n, opt.bound);
    const auto matrices = bruteforce_constant_idempotents(m, opt.budget);
    std::map<u64, std::size_t> dets;
    for (const auto& g : matrices) ++dets[const_value(mat_det(g)).value()];
    if (opt.json) {
        json j = header_json(m);
        j["count"] = matrices.size();
        json h = json::object();
        for (const auto& [d, c] : dets) h[std::to_string(d)] = c;
        j["det_histogram"] = h;
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << header(m) << '\n';
    out << "count: " << matrices.size() << '\n';
    out << "det histogram:";
    for (const auto& [d, c] : dets) out << ' ' << d << ':' << c;
    out << '\n';
    return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<Check> run_invariants(const Modulus& m, const Options& opt) {
    std::vector<Check> checks;
    const u64 n = m.n();
    const auto add = [&](std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    };

    u64 product = 1;
    bool primes_ok = true;
    for (u64 p : m.primes()) {
        product *= p;
        primes_ok = primes_ok && is_prime(p);
    }
    add("factorization recomposes", product == n && primes_ok);

    const auto ids = enumerate_idempotents(m);
    add("idempotent count is 2^m", ids.size() == (std::size_t{1} << m.prime_count()),
        std::to_string(ids.size()));
    bool all_fixed = true, closed = true;
    for (const auto& y : ids) {
        all_fixed = all_fixed && is_idempotent(y);
        closed = closed && std::binary_search(ids.begin(), ids.end(), Residue(1, n) - y);
    }
    add("every listed value satisfies y^2 = y", all_fixed);
    add("closed under y -> 1 - y", closed);
    if (n <= 1'000'000) {
        std::vector<Residue> scan;
        for (u64 y = 0; y < n; ++y) {
            if (mul_mod(y, y, n) == y) scan.push_back(Residue::from_unsigned(y, n));
        }
        add("enumeration equals full scan", scan == ids);
    }

    if (m.prime_count() == 3) {
        std::size_t canonical_ok = 0, shared_ok = 0;
        for (const auto& row : euler_crosscheck(m)) {
            canonical_ok += row.canonical_matches();
            shared_ok += row.shared_exponent_matches();
        }
        add("closed forms equal CRT values", canonical_ok == 8, std::to_string(canonical_ok) + "/8");
        checks.push_back({"shared-exponent variant agrees (informational)", true,
                          std::to_string(shared_ok) + "/8 agree"});
    }

    if (static_cast<unsigned __int128>(n) * n <= opt.budget) {
        const auto polys = poly_idempotents_bruteforce(m, 1, opt.budget);
        std::vector<Residue> consts;
        bool all_constant = true;
        for (const auto& p : polys) {
            all_constant = all_constant && p.is_constant();
            if (p.is_constant()) consts.push_back(Residue::from_unsigned(p.coeff(0), n));
        }
        add("degree <= 1 idempotents of Z_n[x] are the constants", all_constant && consts == ids);
    }

    if (n <= 1'000'000) {
        bool solver_ok = true;
        for (const auto& d : ids) {
            solver_ok = solver_ok && trace_candidates(m, d).solutions == scan_trace_solutions(n, d.value());
        }
        add("trace candidates equal full scan for every idempotent det", solver_ok);
    }

    bool in_scope = m.prime_count() == 3 && m.primes()[0] > 3;
    if (m.prime_count() == 3 && m.primes()[0] > 2) {
        bool lists_ok = true;
        for (const auto& d : ids) {
            if (auto report = formula_report_for(m, d)) lists_ok = lists_ok && report->matches_solver();
        }
        add("closed-form trace lists equal solver sets", lists_ok);
    }

    if (static_cast<unsigned __int128>(n) * n * n <= opt.budget) {
        const auto matrices = bruteforce_constant_idempotents(m, opt.budget);
        // Over a field F_p there are p^2 + p rank-one projections plus 0 and 1.
        u64 expected = 1;
        for (u64 p : m.primes()) expected *= p * p + p + 2;
        add("constant idempotent count matches per-prime product", matrices.size() == expected,
            std::to_string(matrices.size()));
        if (in_scope) {
            const auto report = completeness_check(m, opt.budget);
            add("every non-trivial constant idempotent matches a family", report.unmatched.empty(),
                std::to_string(report.unmatched.size()) + " unmatched");
            bool excluded_empty = true;
            for (const auto& [ex, count] : report.excluded) excluded_empty = excluded_empty && count == 0;
            add("excluded traces never occur", excluded_empty);
            add("dets supported on idempotents", report.det_support_ok);
        }
    }
    return checks;
}

int cmd_verify(u64 n, const Options& opt, std::ostream& out) {
    const Modulus m = factor_squarefree(n, opt.bound);
    const auto checks = run_invariants(m, opt);
    bool all = true;
    for (const auto& c : checks) all = all && c.passed;
    if (opt.json) {
        json j = header_json(m);
        auto arr = json::array();
        for (const auto& c : checks) {
            arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        j["checks"] = arr;
        j["passed"] = all;
        out << j.dump() << '\n';
    } else {
        out << header(m) << '\n';
        for (const auto& c : checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.detail.empty()) out << " [" << c.detail << ']';
            out << '\n';
        }
        out << "result: " << (all ? "PASS" : "FAIL") << '\n';
    }
    return all ? kExitOk : kExitDomainError;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::MalformedInput: return kExitUsage;
        default: return kExitDomainError;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Idempotents of Z_n, Z_n[x] and M2(Z_pqr[x])", "idem"};
    app.require_subcommand(1, 1);

    Options opt;
    const auto common = [&opt](CLI::App* sub) {
        sub->add_flag("--json", opt.json, "Machine-readable output");
        sub->add_option("--budget", opt.budget, "Cap on brute-force state counts");
        sub->add_option("--bound", opt.bound, "Trial-division bound for factoring n");
    };

    u64 n = 0, d = 0;
    std::string path;
    GenerateArgs gen;
    std::function<int()> action;

    auto* idem_cmd = app.add_subcommand("idempotents", "List the idempotents of Z_n");
    idem_cmd->add_option("n", n, "Squarefree modulus")->required();
    common(idem_cmd);
    idem_cmd->callback([&] { action = [&] { return cmd_idempotents(n, opt, out); }; });

    auto* trace_cmd = app.add_subcommand("solve-trace", "Solve t^2 = t + 2d (mod n)");
    trace_cmd->add_option("n", n, "Squarefree modulus")->required();
    trace_cmd->add_option("d", d, "Idempotent determinant")->required();
    common(trace_cmd);
    trace_cmd->callback([&] { action = [&] { return cmd_solve_trace(n, d, opt, out); }; });

    auto* classify_cmd = app.add_subcommand("classify", "Classify a matrix file");
    classify_cmd->add_option("file", path, "Matrix file")->required();
    common(classify_cmd);
    classify_cmd->callback([&] { action = [&] { return cmd_classify(path, opt, out); }; });

    auto* gen_cmd = app.add_subcommand("generate", "Generate a member of a family");
    gen_cmd->add_option("family", gen.family, "Family name, e.g. DetPair_Mixed")->required();
    gen_cmd->add_option("--n", gen.n, "Modulus pqr")->required();
    gen_cmd->add_option("--seed", gen.seed, "Random seed");
    gen_cmd->add_option("--e", gen.e, "Fix e(x), e.g. \"1 + 2*x^2\"");
    gen_cmd->add_option("--m", gen.m, "Det0_Scaled: fix m(x)");
    gen_cmd->add_option("--g", gen.g, "Shift/Mixed: constant lower-left parameter");
    gen_cmd->add_option("--roles", gen.roles, "Prime roles p,q,r")->delimiter(',');
    gen_cmd->add_option("--I", gen.scale, "Det0_Scaled: idempotent scale I");
    gen_cmd->add_option("--max-degree", gen.max_degree, "Degree bound for random entries");
    gen_cmd->add_option("-o,--output", gen.output, "Write the matrix file here");
    common(gen_cmd);
    gen_cmd->callback([&] { action = [&] { return cmd_generate(gen, opt, out); }; });

    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate constant idempotent matrices");
    oracle_cmd->add_option("n", n, "Squarefree modulus")->required();
    common(oracle_cmd);
    oracle_cmd->callback([&] { action = [&] { return cmd_oracle(n, opt, out); }; });

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite for n");
    verify_cmd->add_option("n", n, "Squarefree modulus")->required();
    common(verify_cmd);
    verify_cmd->callback([&] { action = [&] { return cmd_verify(n, opt, out); }; });

    std::vector<const char*> argv{"idem"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: Usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        return action();
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    }
}

}  // namespace idem::cli
