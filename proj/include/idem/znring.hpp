#pragma once

/**
 * @file znring.hpp
 * @brief Idempotents of Z_n and Z_n[x] for squarefree n.
 *
 * An idempotent of Z_n is fixed by its residue (0 or 1) modulo each prime
 * of n, so there are exactly 2^m of them for m distinct primes. For three
 * primes p < q < r each one also has a closed form built from Euler's
 * theorem, e.g. the idempotent that is 1 mod r only is (pq)^(r-1).
 */

#include <cstdint>
#include <string>
#include <vector>

#include "idem/modarith.hpp"
#include "idem/polyring.hpp"

namespace idem {

/// Per-prime choice of 0 or 1, ordered like Modulus::primes().
struct IdempotentPattern {
    std::vector<std::uint8_t> bits;

    bool operator==(const IdempotentPattern&) const = default;
};

/// The residue with the given per-prime values, via CRT.
Residue pattern_residue(const Modulus& m, const IdempotentPattern& pattern);

/// Pattern of an idempotent y: bit i is y mod primes[i].
IdempotentPattern pattern_of(const Modulus& m, u64 y);

/// All 2^m idempotents, sorted ascending.
std::vector<Residue> enumerate_idempotents(const Modulus& m);

bool is_idempotent(const Residue& y) noexcept;

/// Which exponent convention the closed form uses for the pair products.
enum class ExponentForm {
    /// (pq)^(r-1), (pr)^(q-1), (qr)^(p-1): exponent is the missing prime minus one.
    Canonical,
    /// (pq)^(r-1), (pr)^(r-1), (qr)^(r-1): every pair product raised to r-1.
    SharedExponent,
};

/**
 * Closed-form value of the idempotent with the given pattern over Z_pqr:
 * 0, 1, (pq)^(r-1), (pr)^(q-1), (qr)^(p-1), p^((q-1)(r-1)),
 * q^((p-1)(r-1)), r^((p-1)(q-1)). Throws WrongPrimeCount unless m has
 * exactly three primes.
 */
Residue euler_idempotent(const Modulus& m, const IdempotentPattern& pattern,
                         ExponentForm form = ExponentForm::Canonical);

/// Human-readable closed form for a pattern, e.g. "(5*7)^(11-1)".
std::string euler_expression(const Modulus& m, const IdempotentPattern& pattern,
                             ExponentForm form = ExponentForm::Canonical);

struct EulerCheckRow {
    IdempotentPattern pattern;
    Residue crt;
    Residue canonical;
    Residue shared_exponent;
    std::string expression;

    bool canonical_matches() const { return canonical == crt; }
    bool shared_exponent_matches() const { return shared_exponent == crt; }
};

/// Closed forms against CRT for all eight patterns of a three-prime modulus.
std::vector<EulerCheckRow> euler_crosscheck(const Modulus& m);

/// True iff n is squarefree; propagates NotFactorable.
bool is_reduced(u64 n, u64 bound = kDefaultFactorBound);

inline constexpr u64 kDefaultSearchBudget = 50'000'000;

/**
 * Every polynomial of degree <= max_degree with u*u = u, by exhaustive scan
 * of all n^(max_degree+1) coefficient vectors. Throws BudgetExceeded when
 * that count is above `budget`. Sorted by degree, then by coefficients
 * from the constant term up.
 */
std::vector<Poly> poly_idempotents_bruteforce(const Modulus& m, unsigned max_degree,
                                              u64 budget = kDefaultSearchBudget);

}  // namespace idem
