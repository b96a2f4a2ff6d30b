#pragma once

/**
 * @file quadcong.hpp
 * @brief Solutions of the trace congruence t^2 = t + 2d (mod n).
 *
 * For an idempotent matrix G over Z_n[x] with constant determinant d, the
 * trace t = e + h satisfies t^2 = t + 2d. Over each prime the congruence is
 * either t^2 = t (roots 0, 1) or t^2 = t + 2 (roots 2, -1), and the CRT
 * assembles the full solution set.
 */

#include <array>
#include <string>
#include <vector>

#include "idem/modarith.hpp"

namespace idem {

/// All x in [0, p) with x^2 = x + c (mod p), by exhaustive scan.
std::vector<u64> prime_quadratic_roots(u64 p, u64 c);

struct TraceCandidateSet {
    u64 n = 0;
    Residue det{0, 2};
    /// Sorted ascending.
    std::vector<Residue> solutions;

    bool contains(const Residue& t) const;
};

/**
 * Every t with t^2 = t + 2d (mod n), assembled from per-prime roots.
 * Throws NotIdempotentDet when d*d != d.
 */
TraceCandidateSet trace_candidates(const Modulus& m, const Residue& d);

/// Exhaustive scan of [0, n) for t^2 = t + 2d; independent of the CRT route.
std::vector<Residue> scan_trace_solutions(u64 n, u64 d);

/// Assignment of the three primes to the roles p, q, r of a closed form.
using PrimeRoles = std::array<u64, 3>;

/// Which printed solution list to evaluate.
enum class FormulaFamily {
    /// det = p^((q-1)(r-1)), pivot prime p.
    SinglePrimeDet,
    /// det = (pq)^(r-1), pivot pair {p, q}.
    PrimePairDet,
};

struct FormulaEntry {
    /// 1-based position in the printed list.
    int index = 0;
    std::string expression;
    Residue value{0, 2};
    /// Residue of value modulo each role prime, written with -1 for p-1.
    std::array<i64, 3> role_residues{};
    bool in_solver_set = false;
};

struct FormulaReport {
    FormulaFamily family;
    PrimeRoles roles;
    Residue det{0, 2};
    std::vector<FormulaEntry> entries;
    TraceCandidateSet solver;

    /// Entries whose value is not a solver solution.
    std::vector<FormulaEntry> discrepancies() const;
    /// True when the set of values equals the solver set. Over Z_3 the
    /// congruence has a double root, so the list may repeat a value.
    bool matches_solver() const;
};

/**
 * Evaluate the eight closed-form solutions of t^2 = t + 2d for the det
 * chosen by `family` and `roles`, and compare each with trace_candidates.
 * A mismatch is reported, never thrown. Throws WrongPrimeCount unless m has
 * exactly three primes, InvalidArgument if `roles` is not a permutation of
 * them.
 */
FormulaReport lemma_formula_solutions(const Modulus& m, FormulaFamily family,
                                      const PrimeRoles& roles);

/// Convenience: roles in ascending order, p the smallest prime.
FormulaReport lemma_formula_solutions(const Modulus& m, FormulaFamily family);

std::string to_string(FormulaFamily family);

}  // namespace idem
