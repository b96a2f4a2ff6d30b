#include <gtest/gtest.h>

#include <random>
#include <set>

#include "idem/classify.hpp"
#include "test_util.hpp"

using namespace idem;
using idem::testing::code_of;

namespace {

bool has_family(const ClassificationReport& rep, ClassFamily f) {
    for (const auto& m : rep.matches) {
        if (m.label.family == f) return true;
    }
    return false;
}

// O(n^4) scan of all constant matrices, independent of the library oracle.
std::size_t scan_constant_idempotents(u64 n) {
    std::size_t count = 0;
    for (u64 e = 0; e < n; ++e)
        for (u64 f = 0; f < n; ++f)
            for (u64 g = 0; g < n; ++g)
                for (u64 h = 0; h < n; ++h) {
                    const bool ok = (e * e + f * g) % n == e && (f * (e + h)) % n == f &&
                                    (g * (e + h)) % n == g && (f * g + h * h) % n == h;
                    count += ok;
                }
    return count;
}

}  // namespace

TEST(Labels, AllLabels) {
    const Modulus m = factor_squarefree(385);
    const auto labels = all_labels(m);
    ASSERT_EQ(labels.size(), 25u);
    std::map<ClassFamily, int> per_family;
    std::set<std::string> names;
    for (const auto& l : labels) {
        ++per_family[l.family];
        names.insert(to_string(l));
        EXPECT_NO_THROW(validate_label(m, l));
        EXPECT_EQ(l.det * l.det, l.det);
    }
    EXPECT_EQ(names.size(), 25u);
    EXPECT_EQ(per_family[ClassFamily::Det0_General], 1);
    EXPECT_EQ(per_family[ClassFamily::Det0_Scaled], 6);
    EXPECT_EQ(per_family[ClassFamily::DetPair_Scalar], 3);
    EXPECT_EQ(per_family[ClassFamily::DetPair_Shift], 3);
    EXPECT_EQ(per_family[ClassFamily::DetPair_Mixed], 6);
    EXPECT_EQ(per_family[ClassFamily::DetSingle_Scalar], 3);
    EXPECT_EQ(per_family[ClassFamily::DetSingle_Shift], 3);
    for (auto f : kAllFamilies) EXPECT_EQ(family_from_string(to_string(f)), f);
    EXPECT_EQ(code_of([] { family_from_string("Det7"); }), ErrorCode::InvalidArgument);
}

TEST(Labels, ScaledPairing) {
    const Modulus m = factor_squarefree(385);
    const ClassLabel l = make_scaled_label_for(m, 155);
    EXPECT_EQ(l.scale->value(), 155u);
    EXPECT_EQ(*l.annihilator, 77u);
    EXPECT_EQ(*make_scaled_label_for(m, 210).annihilator, 11u);
    EXPECT_EQ(code_of([&] { make_scaled_label_for(m, 56 + 1); }), ErrorCode::InvalidLabel);
    EXPECT_EQ(code_of([&] { make_label(m, ClassFamily::Det0_Scaled, {5, 7, 11}); }),
              ErrorCode::InvalidLabel);
    EXPECT_EQ(code_of([&] { make_label(m, ClassFamily::DetPair_Shift, {5, 7, 13}); }),
              ErrorCode::InvalidLabel);
}

TEST(Labels, Scope) {
    EXPECT_EQ(code_of([] { require_classification_scope(factor_squarefree(105)); }),
              ErrorCode::PrimesOutOfScope);
    EXPECT_EQ(code_of([] { require_classification_scope(factor_squarefree(35)); }),
              ErrorCode::PrimesOutOfScope);
    EXPECT_NO_THROW(require_classification_scope(factor_squarefree(385)));
}

TEST(Classify, Examples) {
    const Modulus m = factor_squarefree(385);

    const auto scalar = classify(Mat2Poly::scalar(385, 155), m);
    ASSERT_TRUE(scalar.idempotent);
    ASSERT_EQ(scalar.matches.size(), 1u);
    EXPECT_EQ(scalar.matches[0].label.family, ClassFamily::DetSingle_Scalar);
    EXPECT_EQ(scalar.matches[0].label.roles[0], 5u);

    const auto id = classify(Mat2Poly::identity(385), m);
    EXPECT_TRUE(id.trivial);
    EXPECT_TRUE(id.matches.empty());

    const Mat2Poly a{parse_poly("x", 385), parse_poly("x - x^2", 385), Poly::constant(385, 1),
                     parse_poly("1 - x", 385)};
    const auto general = classify(a, m);
    EXPECT_TRUE(has_family(general, ClassFamily::Det0_General));
    EXPECT_EQ(general.det->value(), 0u);
    EXPECT_EQ(general.trace->value(), 1u);

    const auto not_idem = classify(Mat2Poly::constant(385, 1, 1, 1, 0), m);
    EXPECT_FALSE(not_idem.idempotent);
    EXPECT_TRUE(not_idem.matches.empty());

    EXPECT_EQ(code_of([&] { classify(Mat2Poly::identity(105), factor_squarefree(105)); }),
              ErrorCode::PrimesOutOfScope);
}

TEST(Generate, PlainConstructions) {
    const Modulus m = factor_squarefree(385);
    std::mt19937_64 rng(1);
    const GenerateParams fixed_x{parse_poly("x", 385), Poly::constant(385, 1), std::nullopt, 5};

    const Mat2Poly pair =
        generate(m, make_label(m, ClassFamily::DetPair_Scalar, {5, 7, 11}), fixed_x, rng);
    EXPECT_EQ(pair, Mat2Poly::scalar(385, 210));

    const ClassLabel scaled = make_scaled_label_for(m, 155);
    const Mat2Poly s = generate(m, scaled, fixed_x, rng);
    EXPECT_TRUE(is_idempotent(s));
    EXPECT_TRUE(mat_det(s).is_zero());
    EXPECT_EQ(mat_trace(s), Poly::constant(385, 155));
    for (const Poly* p : {&s.e, &s.f, &s.g, &s.h}) {
        EXPECT_EQ(poly_scale(155, *p), *p);
    }
    EXPECT_TRUE(match_template(s, m, scaled).has_value());
}

TEST(Generate, Errors) {
    const Modulus m = factor_squarefree(385);
    std::mt19937_64 rng(2);
    GenerateParams bad;
    bad.e = parse_poly("x", 385);
    bad.g = 35;  // zero modulo the cofactor 35, so f cannot be solved for
    EXPECT_EQ(code_of([&] {
                  generate(m, make_label(m, ClassFamily::DetPair_Shift, {5, 7, 11}), bad, rng);
              }),
              ErrorCode::UnsatisfiableParams);

    ClassLabel broken = default_label(m, ClassFamily::DetPair_Scalar);
    broken.det = Residue(1, 385);
    EXPECT_EQ(code_of([&] { generate(m, broken, {}, rng); }), ErrorCode::InvalidLabel);
}

TEST(Generate, SoundnessAcrossLabels) {
    for (u64 n : {385ULL, 455ULL, 1001ULL}) {
        const Modulus m = factor_squarefree(n);
        std::mt19937_64 rng(n);
        for (const auto& label : all_labels(m)) {
            for (int i = 0; i < 40; ++i) {
                const Mat2Poly g = generate(m, label, {}, rng);
                ASSERT_TRUE(is_idempotent(g)) << to_string(label);
                ASSERT_EQ(mat_det(g), Poly::constant(label.det)) << to_string(label);
                ASSERT_EQ(mat_trace(g), Poly::constant(label.trace)) << to_string(label);
                const auto rep = classify(g, m);
                ASSERT_TRUE(rep.matched()) << to_string(label) << " " << to_string(g);
            }
        }
    }
}

TEST(Oracle, ConstantCounts) {
    const std::pair<u64, std::size_t> cases[] = {{2, 8}, {3, 14}, {5, 32}, {6, 112}, {35, 1856}};
    for (auto [n, count] : cases) {
        EXPECT_EQ(bruteforce_constant_idempotents(factor_squarefree(n)).size(), count) << n;
    }
    for (u64 n : {2ULL, 3ULL, 5ULL, 6ULL, 7ULL}) {
        EXPECT_EQ(bruteforce_constant_idempotents(factor_squarefree(n)).size(),
                  scan_constant_idempotents(n))
            << n;
    }
    EXPECT_EQ(code_of([] { bruteforce_constant_idempotents(factor_squarefree(385), 1000); }),
              ErrorCode::BudgetExceeded);
}

TEST(Completeness, At385) {
    const auto rep = completeness_check(factor_squarefree(385));
    EXPECT_TRUE(rep.passed());
    EXPECT_TRUE(rep.unmatched.empty());
    EXPECT_EQ(rep.total, 248704u);
    EXPECT_EQ(rep.trivial, 2u);
    EXPECT_EQ(rep.matched + rep.trivial, rep.total);
    EXPECT_TRUE(rep.det_support_ok);
    for (const auto& [ex, count] : rep.excluded) EXPECT_EQ(count, 0u) << ex.description;
    EXPECT_EQ(code_of([] { completeness_check(factor_squarefree(105)); }),
              ErrorCode::PrimesOutOfScope);
}
