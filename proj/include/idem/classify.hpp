#pragma once

/**
 * @file classify.hpp
 * @brief Families of idempotent matrices in M2(Z_pqr[x]), p, q, r > 3.
 *
 * Every idempotent G has a constant determinant d and trace t, with d an
 * idempotent of Z_pqr and t^2 = t + 2d. The non-trivial ones fall into the
 * following families. Role letters p, q, r refer to ClassLabel::roles.
 *
 *  - Det0_General:     d = 0, t = 1.  G = [[e, f], [g, 1-e]], e(1-e) - gf = 0.
 *  - Det0_Scaled:      d = 0, t = I.  G = I * [[e, f], [g, 1-e]] with
 *                      e(1-e) - gf = J k(x). (I, J) is one of
 *                      ((pq)^(r-1), r), ((pr)^(q-1), q), ((qr)^(p-1), p),
 *                      (p^((q-1)(r-1)), qr), (q^((p-1)(r-1)), pr),
 *                      (r^((p-1)(q-1)), pq) for p < q < r.
 *  - DetPair_Scalar:   d = D = (pq)^(r-1), G = D * Identity.
 *  - DetPair_Shift:    d = D, t = 1 + D.
 *                      G = [[1 + r e, r f], [r g, D - r e]],
 *                      e(1 + r e) + r f g = pq k(x).
 *  - DetPair_Mixed:    d = D, t = (2 - p^(q-1)) D + p^(q-1).
 *                      G = [[u + pr e, pr f], [pr g, t - u - pr e]] with
 *                      u = 0 (mod p), u = 1 (mod r), det G = D.
 *                      Swapping p and q gives the companion family.
 *  - DetSingle_Scalar: d = P = p^((q-1)(r-1)), G = P * Identity.
 *  - DetSingle_Shift:  d = P, t = 1 + P.
 *                      G = [[1 + qr e, qr f], [qr g, P - qr e]],
 *                      e(1 + qr e) + qr f g = p k(x).
 *
 * Matching is structural: the entry congruences must hold and the
 * parameters e, f, g and the witness k are recovered by exact
 * coefficientwise division.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idem/mat2.hpp"
#include "idem/modarith.hpp"
#include "idem/quadcong.hpp"

namespace idem {

enum class ClassFamily {
    Det0_General,
    Det0_Scaled,
    DetPair_Scalar,
    DetPair_Shift,
    DetPair_Mixed,
    DetSingle_Scalar,
    DetSingle_Shift,
};

inline constexpr ClassFamily kAllFamilies[] = {
    ClassFamily::Det0_General,    ClassFamily::Det0_Scaled,      ClassFamily::DetPair_Scalar,
    ClassFamily::DetPair_Shift,   ClassFamily::DetPair_Mixed,    ClassFamily::DetSingle_Scalar,
    ClassFamily::DetSingle_Shift,
};

std::string to_string(ClassFamily family);
/// Inverse of to_string; throws InvalidArgument.
ClassFamily family_from_string(std::string_view name);

struct ClassLabel {
    ClassFamily family = ClassFamily::Det0_General;
    /// Primes in the roles (p, q, r) of the family's template.
    PrimeRoles roles{};
    /// Det0_Scaled only.
    std::optional<Residue> scale;
    std::optional<u64> annihilator;
    Residue det{0, 2};
    Residue trace{0, 2};
    /// DetPair_Mixed only: the residue in [0, pr) with u = 0 mod p, u = 1 mod r.
    std::optional<u64> u;

    bool operator==(const ClassLabel&) const = default;
};

std::string to_string(const ClassLabel& label);
nlohmann::json to_json(const ClassLabel& label);

/// Throws PrimesOutOfScope unless m has exactly three primes, all above 3.
void require_classification_scope(const Modulus& m);

/**
 * Label for a family with explicit roles. Role order conventions:
 * DetPair_*: r is the prime where det is 1; for Mixed, p is the prime where
 * G vanishes and q the one where G has rank one. DetSingle_*: p is the
 * prime where det is 0. Det0_General ignores the roles.
 * Throws InvalidLabel for Det0_Scaled (use make_scaled_label) or roles that
 * are not a permutation of the primes.
 */
ClassLabel make_label(const Modulus& m, ClassFamily family, const PrimeRoles& roles);

/// Det0_Scaled label for position 0..5 of the (I, J) pairing.
ClassLabel make_scaled_label(const Modulus& m, std::size_t position);

/// Det0_Scaled label for a given scale I; throws InvalidLabel if I is not one of the six.
ClassLabel make_scaled_label_for(const Modulus& m, u64 scale);

/// Label with canonical roles: ascending, with Mixed taking p < q.
ClassLabel default_label(const Modulus& m, ClassFamily family);

/// All 25 distinct labels for m, in a fixed order.
std::vector<ClassLabel> all_labels(const Modulus& m);

/// Throws InvalidLabel if the label's derived fields disagree with its roles.
void validate_label(const Modulus& m, const ClassLabel& label);

struct Witness {
    std::vector<std::pair<std::string, Poly>> polys;
    std::vector<std::pair<std::string, u64>> values;
};

struct ClassMatch {
    ClassLabel label;
    Witness witness;
};

struct ClassificationReport {
    u64 n = 0;
    bool idempotent = false;
    bool trivial = false;
    std::optional<Residue> det;
    std::optional<Residue> trace;
    std::vector<ClassMatch> matches;
    std::vector<std::string> anomalies;

    bool matched() const { return !matches.empty(); }
};

/**
 * Match G against every family template consistent with its det and trace.
 * All matches are returned. Throws PrimesOutOfScope, ModulusMismatch, and
 * InternalTheoremViolation when an idempotent has a non-constant det or
 * trace, a non-idempotent det, or a trace outside the candidate set.
 */
ClassificationReport classify(const Mat2Poly& g, const Modulus& m);

/// Try a single template; nullopt when G does not fit it.
std::optional<Witness> match_template(const Mat2Poly& g, const Modulus& m,
                                      const ClassLabel& label);

std::string to_text(const ClassificationReport& report);
nlohmann::json to_json(const ClassificationReport& report);

struct GenerateParams {
    /// Fixing e selects the plain construction; otherwise e and the
    /// factorization of the side condition are drawn at random and the
    /// result is conjugated by a random constant unimodular matrix.
    std::optional<Poly> e;
    /// Det0_Scaled: multiple of J added to the side condition.
    std::optional<Poly> m;
    /// Shift and Mixed: constant value of the lower-left parameter.
    std::optional<u64> g;
    int max_degree = 5;
};

/**
 * A member of the family described by `label`. The result is always
 * verified idempotent. Throws InvalidLabel for inconsistent labels and
 * UnsatisfiableParams when fixed parameters admit no solution.
 */
Mat2Poly generate(const Modulus& m, const ClassLabel& label, const GenerateParams& params,
                  std::mt19937_64& rng);

inline constexpr u64 kDefaultOracleBudget = 200'000'000;

/**
 * All constant idempotent matrices over Z_n, sorted by (e, f, g, h).
 * Throws BudgetExceeded when n^3 is above `budget`.
 */
std::vector<Mat2Poly> bruteforce_constant_idempotents(const Modulus& m,
                                                      u64 budget = kDefaultOracleBudget);

/// A trace value that no idempotent with the given det can have.
struct ExcludedTrace {
    Residue det{0, 2};
    Residue trace{0, 2};
    std::string description;
};

/**
 * Trace candidates the classification rules out: for det (pq)^(r-1) the
 * four solutions that are -1 mod r, for det p^((q-1)(r-1)) the six that are
 * -1 mod q or mod r. Evaluated from the closed-form lists for every role
 * assignment.
 */
std::vector<ExcludedTrace> excluded_traces(const Modulus& m);

struct CompletenessReport {
    u64 n = 0;
    std::vector<u64> primes;
    std::size_t total = 0;
    std::size_t trivial = 0;
    std::size_t matched = 0;
    std::size_t overlaps = 0;
    std::map<ClassFamily, std::size_t> family_counts;
    std::map<std::string, std::size_t> label_counts;
    std::map<u64, std::size_t> det_histogram;
    std::map<std::pair<u64, u64>, std::size_t> det_trace_histogram;
    std::vector<Mat2Poly> unmatched;
    std::vector<std::pair<ExcludedTrace, std::size_t>> excluded;
    /// Mixed-family diagonals: how many have e(0) == u exactly, and how many
    /// have an idempotent e(0), out of mixed_total.
    std::size_t mixed_total = 0;
    std::size_t mixed_diag_equals_u = 0;
    std::size_t mixed_diag_idempotent = 0;

    bool det_support_ok = true;

    bool passed() const;
};

/// Classify every constant idempotent over Z_n. Throws PrimesOutOfScope, BudgetExceeded.
CompletenessReport completeness_check(const Modulus& m, u64 budget = kDefaultOracleBudget);

std::string to_text(const CompletenessReport& report);
nlohmann::json to_json(const CompletenessReport& report);

}  // namespace idem
