#include "idem/quadcong.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "idem/error.hpp"
#include "idem/znring.hpp"

namespace idem {

std::vector<u64> prime_quadratic_roots(u64 p, u64 c) {
    if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    const u64 cr = c % p;
    std::vector<u64> roots;
    for (u64 x = 0; x < p; ++x) {
        if (mul_mod(x, x, p) == add_mod(x, cr, p)) roots.push_back(x);
    }
    return roots;
}

bool TraceCandidateSet::contains(const Residue& t) const {
    return std::binary_search(solutions.begin(), solutions.end(), t);
}

TraceCandidateSet trace_candidates(const Modulus& m, const Residue& d) {
    if (d.modulus() != m.n()) {
        throw Error(ErrorCode::ModulusMismatch, "det is not a residue mod " + std::to_string(m.n()));
    }
    if (!is_idempotent(d)) {
        throw Error(ErrorCode::NotIdempotentDet,
                    std::to_string(d.value()) + " is not an idempotent of Z_" +
                        std::to_string(m.n()));
    }
    const u64 two_d = add_mod(d.value(), d.value(), m.n());
    std::vector<std::vector<u64>> roots;
    for (u64 p : m.primes()) roots.push_back(prime_quadratic_roots(p, two_d % p));

    TraceCandidateSet out{m.n(), d, {}};
    std::vector<Congruence> system(m.prime_count());
    std::function<void(std::size_t)> combine = [&](std::size_t i) {
        if (i == m.prime_count()) {
            out.solutions.push_back(crt_combine(system));
            return;
        }
        for (u64 x : roots[i]) {
            system[i] = {x, m.primes()[i]};
            combine(i + 1);
        }
    };
    combine(0);
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

std::vector<Residue> scan_trace_solutions(u64 n, u64 d) {
    std::vector<Residue> out;
    const u64 two_d = (2 * (d % n)) % n;
    for (u64 t = 0; t < n; ++t) {
        if (mul_mod(t, t, n) == add_mod(t, two_d, n)) out.push_back(Residue::from_unsigned(t, n));
    }
    return out;
}

std::vector<FormulaEntry> FormulaReport::discrepancies() const {
    std::vector<FormulaEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [](const FormulaEntry& e) { return !e.in_solver_set; });
    return out;
}

bool FormulaReport::matches_solver() const {
    std::set<Residue> values;
    for (const auto& e : entries) values.insert(e.value);
    return values.size() == solver.solutions.size() &&
           std::equal(values.begin(), values.end(), solver.solutions.begin());
}

std::string to_string(FormulaFamily family) {
    return family == FormulaFamily::SinglePrimeDet ? "single-prime-det" : "prime-pair-det";
}

namespace {

void check_roles(const Modulus& m, const PrimeRoles& roles) {
    if (m.prime_count() != 3) {
        throw Error(ErrorCode::WrongPrimeCount,
                    std::to_string(m.n()) + " does not have exactly 3 prime factors");
    }
    PrimeRoles sorted = roles;
    std::sort(sorted.begin(), sorted.end());
    if (!std::equal(sorted.begin(), sorted.end(), m.primes().begin())) {
        throw Error(ErrorCode::InvalidArgument, "roles must be a permutation of the primes of " +
                                                    std::to_string(m.n()));
    }
}

}  // namespace

FormulaReport lemma_formula_solutions(const Modulus& m, FormulaFamily family,
                                      const PrimeRoles& roles) {
    check_roles(m, roles);
    const u64 n = m.n();
    const u64 p = roles[0], q = roles[1], r = roles[2];
    const auto R = [n](i64 v) { return Residue(v, n); };
    const auto pw = [n](u64 base, u64 k) { return Residue::from_unsigned(mod_pow(base % n, k, n), n); };
    const auto s = [](u64 v) { return std::to_string(v); };

    std::vector<std::pair<std::string, Residue>> exprs;
    Residue det = R(0);
    if (family == FormulaFamily::SinglePrimeDet) {
        const std::string P = s(p) + "^((" + s(q) + "-1)(" + s(r) + "-1))";
        const Residue big_p = pw(p, (q - 1) * (r - 1));
        const Residue pq_r = pw(p * q, r - 1);
        const Residue pr_q = pw(p * r, q - 1);
        const Residue p_q = pw(p, q - 1);
        const Residue p_r = pw(p, r - 1);
        const std::string PQ = "(" + s(p) + "*" + s(q) + ")^(" + s(r) + "-1)";
        const std::string PR = "(" + s(p) + "*" + s(r) + ")^(" + s(q) + "-1)";
        const std::string Pq = s(p) + "^(" + s(q) + "-1)";
        const std::string Pr = s(p) + "^(" + s(r) + "-1)";
        det = big_p;
        exprs = {
            {"2*" + P, R(2) * big_p},
            {P + "+1", big_p + R(1)},
            {"-" + P, -big_p},
            {"1-2*" + P, R(1) - R(2) * big_p},
            {"(-1-2*" + Pq + ")*" + PQ + "+2*" + Pq, (R(-1) - R(2) * p_q) * pq_r + R(2) * p_q},
            {"(-2-" + Pq + ")*" + PQ + "+" + Pq + "+1", (R(-2) - p_q) * pq_r + p_q + R(1)},
            {"(-1-2*" + Pr + ")*" + PR + "+2*" + Pr, (R(-1) - R(2) * p_r) * pr_q + R(2) * p_r},
            {"(-2-" + Pr + ")*" + PR + "+" + Pr + "+1", (R(-2) - p_r) * pr_q + p_r + R(1)},
        };
    } else {
        const std::string D = "(" + s(p) + "*" + s(q) + ")^(" + s(r) + "-1)";
        const Residue big_d = pw(p * q, r - 1);
        const Residue p_q = pw(p, q - 1);
        const Residue q_p = pw(q, p - 1);
        const std::string Pq = s(p) + "^(" + s(q) + "-1)";
        const std::string Qp = s(q) + "^(" + s(p) + "-1)";
        det = big_d;
        exprs = {
            {"2*" + D, R(2) * big_d},
            {"-" + D, -big_d},
            {D + "+1", big_d + R(1)},
            {"1-2*" + D, R(1) - R(2) * big_d},
            {"(2-" + Pq + ")*" + D + "+" + Pq, (R(2) - p_q) * big_d + p_q},
            {"(-1-" + Pq + ")*" + D + "+" + Pq, (R(-1) - p_q) * big_d + p_q},
            {"(2-" + Qp + ")*" + D + "+" + Qp, (R(2) - q_p) * big_d + q_p},
            {"(-1-" + Qp + ")*" + D + "+" + Qp, (R(-1) - q_p) * big_d + q_p},
        };
    }

    FormulaReport report{family, roles, det, {}, trace_candidates(m, det)};
    int index = 1;
    for (auto& [text, value] : exprs) {
        FormulaEntry entry;
        entry.index = index++;
        entry.expression = text;
        entry.value = value;
        for (std::size_t i = 0; i < 3; ++i) {
            const u64 v = value.value() % roles[i];
            entry.role_residues[i] = v == roles[i] - 1 ? -1 : static_cast<i64>(v);
        }
        entry.in_solver_set = report.solver.contains(value);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

FormulaReport lemma_formula_solutions(const Modulus& m, FormulaFamily family) {
    if (m.prime_count() != 3) {
        throw Error(ErrorCode::WrongPrimeCount,
                    std::to_string(m.n()) + " does not have exactly 3 prime factors");
    }
    return lemma_formula_solutions(m, family, {m.primes()[0], m.primes()[1], m.primes()[2]});
}

}  // namespace idem
