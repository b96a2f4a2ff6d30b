#include <gtest/gtest.h>

#include <set>

#include "idem/znring.hpp"
#include "test_util.hpp"

using namespace idem;
using idem::testing::code_of;

namespace {

std::vector<u64> values(const std::vector<Residue>& rs) {
    std::vector<u64> out;
    for (const auto& r : rs) out.push_back(r.value());
    return out;
}

// Brute-force scan, independent of the CRT route.
std::vector<u64> scan_idempotents(u64 n) {
    std::vector<u64> out;
    for (u64 y = 0; y < n; ++y) {
        if (y * y % n == y) out.push_back(y);
    }
    return out;
}

}  // namespace

TEST(Idempotents, Examples) {
    EXPECT_EQ(values(enumerate_idempotents(factor_squarefree(105))),
              (std::vector<u64>{0, 1, 15, 21, 36, 70, 85, 91}));
    EXPECT_EQ(values(enumerate_idempotents(factor_squarefree(385))),
              (std::vector<u64>{0, 1, 56, 155, 176, 210, 231, 330}));
    EXPECT_EQ(values(enumerate_idempotents(factor_squarefree(13))), (std::vector<u64>{0, 1}));
}

TEST(Idempotents, MatchesScanForSquarefreeUpTo3000) {
    for (u64 n = 2; n <= 3000; ++n) {
        if (!is_reduced(n)) continue;
        const Modulus m = factor_squarefree(n);
        const auto got = values(enumerate_idempotents(m));
        ASSERT_EQ(got, scan_idempotents(n)) << n;
        ASSERT_EQ(got.size(), std::size_t{1} << m.prime_count());
        for (u64 y : got) {
            // Complement closure: 1 - y is idempotent as well.
            ASSERT_TRUE(is_idempotent(Residue(1, n) - Residue(y, n)));
        }
    }
}

TEST(Idempotents, PatternRoundTrip) {
    const Modulus m = factor_squarefree(385);
    for (const auto& y : enumerate_idempotents(m)) {
        EXPECT_EQ(pattern_residue(m, pattern_of(m, y.value())), y);
    }
}

TEST(Euler, Examples) {
    const Modulus m105 = factor_squarefree(105);
    EXPECT_EQ(euler_idempotent(m105, {{0, 0, 1}}).value(), 15u);
    const Modulus m385 = factor_squarefree(385);
    EXPECT_EQ(euler_idempotent(m385, {{0, 1, 1}}).value(), 155u);
    EXPECT_EQ(euler_idempotent(m385, {{0, 0, 1}}).value(), 210u);
    EXPECT_EQ(euler_expression(m385, {{0, 0, 1}}), "(5*7)^(11-1)");
    EXPECT_EQ(code_of([] { euler_idempotent(factor_squarefree(35), {{0, 1}}); }),
              ErrorCode::WrongPrimeCount);
}

TEST(Euler, CanonicalFormMatchesCrt) {
    for (u64 n : {105ULL, 385ULL, 455ULL, 1001ULL, 30ULL, 42ULL}) {
        const Modulus m = factor_squarefree(n);
        const auto rows = euler_crosscheck(m);
        ASSERT_EQ(rows.size(), 8u);
        for (const auto& row : rows) EXPECT_TRUE(row.canonical_matches()) << n << " " << row.expression;
    }
}

TEST(Euler, SharedExponentVariantDivergesAt385) {
    // Raising every pair product to r-1 agrees with CRT for 105 but not 385.
    for (const auto& row : euler_crosscheck(factor_squarefree(105))) {
        EXPECT_TRUE(row.shared_exponent_matches());
    }
    int mismatches = 0;
    for (const auto& row : euler_crosscheck(factor_squarefree(385))) {
        if (row.shared_exponent_matches()) continue;
        ++mismatches;
        EXPECT_EQ(row.pattern, (IdempotentPattern{{1, 0, 0}}));
        EXPECT_EQ(row.crt.value(), 231u);
        EXPECT_EQ(row.shared_exponent.value(), 154u);
    }
    EXPECT_EQ(mismatches, 1);
}

TEST(IsReduced, Examples) {
    EXPECT_TRUE(is_reduced(105));
    EXPECT_FALSE(is_reduced(4));
    EXPECT_FALSE(is_reduced(12));
    EXPECT_TRUE(is_reduced(2));
}

TEST(PolyIdempotents, OnlyConstantsOverSquarefree) {
    const Modulus m = factor_squarefree(105);
    const auto found = poly_idempotents_bruteforce(m, 2);
    ASSERT_EQ(found.size(), 8u);
    std::set<u64> consts;
    for (const auto& u : found) {
        EXPECT_TRUE(u.is_constant());
        consts.insert(const_value(u).value());
    }
    EXPECT_EQ(consts, (std::set<u64>{0, 1, 15, 21, 36, 70, 85, 91}));
    EXPECT_EQ(poly_idempotents_bruteforce(m, 0).size(), 8u);
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL}) {
        EXPECT_EQ(poly_idempotents_bruteforce(factor_squarefree(p), 1).size(), 2u);
    }
    for (u64 n : {6ULL, 10ULL, 30ULL}) {
        const auto g = poly_idempotents_bruteforce(factor_squarefree(n), 2);
        EXPECT_EQ(g.size(), std::size_t{1} << factor_squarefree(n).prime_count()) << n;
    }
    EXPECT_EQ(code_of([&] { poly_idempotents_bruteforce(m, 5, 1000); }),
              ErrorCode::BudgetExceeded);
}
