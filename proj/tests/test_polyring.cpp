#include <gtest/gtest.h>

#include <random>

#include "idem/polyring.hpp"
#include "test_util.hpp"

using namespace idem;
using idem::testing::code_of;
using idem::testing::random_poly;

namespace {

Poly P(u64 n, std::vector<u64> c) { return Poly(n, std::move(c)); }

}  // namespace

TEST(Poly, Normalization) {
    EXPECT_TRUE(P(105, {0, 0, 0}).is_zero());
    EXPECT_EQ(P(105, {0, 0, 0}).degree(), kZeroDegree);
    EXPECT_EQ(P(105, {1, 105, 210}).degree(), 0);
    EXPECT_EQ(P(105, {106, 2}).coeffs(), (std::vector<u64>{1, 2}));
    EXPECT_EQ(Poly::monomial(105, 3, 4).degree(), 4);
    EXPECT_EQ(Poly::monomial(105, 105, 4), Poly(105));
}

TEST(Poly, Examples) {
    const u64 n = 105;
    // (x + 1) + (n-1) x = 1
    EXPECT_EQ(P(n, {1, 1}) + P(n, {0, n - 1}), Poly::constant(n, 1));
    EXPECT_EQ(P(n, {0, 70}) + P(n, {0, 70}), P(n, {0, 35}));
    // 15 * 7 = 105 = 0, so the product of 15x and 7x vanishes.
    EXPECT_TRUE((P(n, {0, 15}) * P(n, {0, 7})).is_zero());
    EXPECT_EQ(P(n, {1, 1}) * P(n, {1, 1}), P(n, {1, 2, 1}));
    EXPECT_EQ(poly_scale(15, P(n, {7, 1})), P(n, {0, 15}));
    EXPECT_EQ(-P(n, {1, 2}), P(n, {104, 103}));
    EXPECT_EQ(const_value(Poly::constant(n, 36)), Residue(36, n));
    EXPECT_EQ(const_value(Poly(n)), Residue(0, n));
    EXPECT_EQ(code_of([&] { const_value(P(n, {1, 1})); }), ErrorCode::NotConstant);
    EXPECT_EQ(code_of([&] { (void)(Poly(5) + Poly(7)); }), ErrorCode::ModulusMismatch);
}

TEST(Poly, RingAxiomsOnRandomTriples) {
    std::mt19937_64 rng(101);
    const u64 moduli[] = {2, 6, 105, 385, 1'000'000'007ULL, (1ULL << 62) + 135};
    for (int i = 0; i < 12000; ++i) {
        const u64 n = moduli[i % std::size(moduli)];
        const Poly a = random_poly(n, 6, rng);
        const Poly b = random_poly(n, 6, rng);
        const Poly c = random_poly(n, 6, rng);
        const Poly zero(n), one = Poly::constant(n, 1);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a + zero, a);
        ASSERT_EQ(a * one, a);
        ASSERT_TRUE((a - a).is_zero());
        ASSERT_EQ(a + (-a), zero);
        ASSERT_EQ(poly_scale(n - 1, a), -a);
    }
}

TEST(Poly, DegreeLaws) {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 5000; ++i) {
        const Poly a = random_poly(105, 6, rng);
        const Poly b = random_poly(105, 6, rng);
        EXPECT_LE((a + b).degree(), std::max(a.degree(), b.degree()));
        if (!a.is_zero() && !b.is_zero()) {
            EXPECT_LE((a * b).degree(), a.degree() + b.degree());
        } else {
            EXPECT_TRUE((a * b).is_zero());
        }
    }
    // Over a prime modulus the degree is exactly additive.
    for (int i = 0; i < 2000; ++i) {
        const Poly a = random_poly(101, 6, rng);
        const Poly b = random_poly(101, 6, rng);
        if (a.is_zero() || b.is_zero()) continue;
        EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
    }
}

TEST(Poly, CoefficientDivision) {
    const u64 n = 385;
    const Poly a = P(n, {77, 154, 0, 231});
    EXPECT_TRUE(coeffs_divisible_by(a, 77));
    EXPECT_FALSE(coeffs_divisible_by(a, 35));
    const Poly q = coeffs_exact_div(a, 77);
    EXPECT_EQ(q.coeffs(), (std::vector<u64>{1, 2, 0, 3}));
    EXPECT_EQ(poly_scale(77, q), a);
    EXPECT_EQ(code_of([&] { coeffs_exact_div(a, 35); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(coeffs_mod(P(n, {12, 5, 22}), 11), P(n, {1, 5}));
}

TEST(Poly, RenderAndParse) {
    EXPECT_EQ(to_string(Poly(105)), "0");
    EXPECT_EQ(to_string(P(105, {1, 0, 104})), "1 + 104*x^2");
    EXPECT_EQ(to_string(P(105, {0, 1})), "1*x");
    EXPECT_EQ(parse_poly("x - x^2", 385), P(385, {0, 1, 384}));
    EXPECT_EQ(parse_poly("  3*x^2 + 2 * x +1 ", 105), P(105, {1, 2, 3}));
    EXPECT_EQ(parse_poly("-1", 105), Poly::constant(105, 104));
    EXPECT_EQ(parse_poly("x + x", 105), P(105, {0, 2}));
    EXPECT_EQ(parse_poly("0", 105), Poly(105));
    EXPECT_EQ(parse_poly("106", 105), Poly::constant(105, 1));
}

TEST(Poly, RenderParseRoundTrip) {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 3000; ++i) {
        const u64 n = i % 2 ? 385 : 1'000'000'007ULL;
        const Poly a = random_poly(n, 8, rng);
        ASSERT_EQ(parse_poly(to_string(a), n), a) << to_string(a);
    }
}

TEST(Poly, MalformedInput) {
    for (const char* bad : {"", "x^", "3*", "+", "1 +", "x^-1", "y", "2x", "1 ++ 2", "x^^2",
                            "99999999999999999999999"}) {
        EXPECT_EQ(code_of([&] { parse_poly(bad, 105); }), ErrorCode::MalformedInput) << bad;
    }
}
