#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "idem/mat2.hpp"
#include "test_util.hpp"

using namespace idem;
using idem::testing::code_of;
using idem::testing::random_poly;
using nlohmann::json;

namespace {

Mat2Poly random_matrix(u64 n, int deg, std::mt19937_64& rng) {
    return {random_poly(n, deg, rng), random_poly(n, deg, rng), random_poly(n, deg, rng),
            random_poly(n, deg, rng)};
}

// [[x, x - x^2], [1, 1 - x]]
Mat2Poly rank_one_example(u64 n) {
    return {parse_poly("x", n), parse_poly("x - x^2", n), Poly::constant(n, 1),
            parse_poly("1 - x", n)};
}

}  // namespace

TEST(Mat2, Examples) {
    const u64 n = 385;
    EXPECT_TRUE(is_idempotent(Mat2Poly::identity(n)));
    EXPECT_TRUE(is_idempotent(Mat2Poly::zero(n)));

    const Mat2Poly a = rank_one_example(n);
    EXPECT_TRUE(is_idempotent(a));
    EXPECT_TRUE(mat_det(a).is_zero());
    EXPECT_EQ(mat_trace(a), Poly::constant(n, 1));
    EXPECT_EQ(a.max_degree(), 2);
    EXPECT_FALSE(a.is_constant());

    const Mat2Poly s = Mat2Poly::scalar(n, 155);
    EXPECT_TRUE(is_idempotent(s));
    EXPECT_EQ(mat_det(s), Poly::constant(n, 155));
    EXPECT_EQ(mat_trace(s), Poly::constant(n, 310));

    EXPECT_TRUE(is_idempotent(Mat2Poly::constant(n, 1, 1, 0, 0)));
    EXPECT_FALSE(is_idempotent(Mat2Poly::constant(n, 1, 1, 1, 0)));
    EXPECT_EQ(to_string(Mat2Poly::constant(n, 1, 1, 0, 0)), "[[1, 1], [0, 0]]");
    EXPECT_EQ(code_of([] { Mat2Poly(Poly(5), Poly(5), Poly(7), Poly(5)); }),
              ErrorCode::ModulusMismatch);
}

TEST(Mat2, EquationFormAgreesWithProduct) {
    std::mt19937_64 rng(42);
    int idempotents = 0;
    for (int i = 0; i < 12000; ++i) {
        // Small moduli and degrees so idempotents do turn up.
        const u64 n = (i % 3 == 0) ? 6 : (i % 3 == 1 ? 2 : 385);
        const Mat2Poly a = random_matrix(n, i % 3 == 2 ? 3 : 1, rng);
        const bool prod = is_idempotent(a);
        ASSERT_EQ(prod, idempotent_equations_hold(a)) << to_string(a);
        idempotents += prod;
    }
    EXPECT_GT(idempotents, 0);
}

TEST(Mat2, ComplementAndAlgebra) {
    std::mt19937_64 rng(43);
    const u64 n = 385;
    const Mat2Poly one = Mat2Poly::identity(n);
    const Mat2Poly a = rank_one_example(n);
    EXPECT_TRUE(is_idempotent(mat_sub(one, a)));
    EXPECT_TRUE(mat_mul(a, mat_sub(one, a)) == Mat2Poly::zero(n));
    for (int i = 0; i < 3000; ++i) {
        const Mat2Poly x = random_matrix(n, 3, rng);
        const Mat2Poly y = random_matrix(n, 3, rng);
        ASSERT_EQ(mat_det(mat_mul(x, y)), mat_det(x) * mat_det(y));
        ASSERT_EQ(mat_trace(mat_add(x, y)), mat_trace(x) + mat_trace(y));
        ASSERT_EQ(mat_mul(one, x), x);
        ASSERT_EQ(mat_scale(2, x), mat_add(x, x));
    }
}

TEST(Mat2, JsonRoundTrip) {
    const Mat2Poly a = rank_one_example(385);
    const json doc = to_json(a);
    EXPECT_EQ(doc, json::parse(R"({"n":385,"entries":[[[0,1],[0,1,384]],[[1],[1,384]]]})"));
    EXPECT_EQ(matrix_from_json(doc), a);

    const auto path = std::filesystem::temp_directory_path() / "idem_test_mat2.json";
    write_matrix_file(path.string(), a);
    EXPECT_EQ(read_matrix_file(path.string()), a);
    std::filesystem::remove(path);

    // Unknown fields are ignored.
    json extra = doc;
    extra["label"] = "anything";
    EXPECT_EQ(matrix_from_json(extra), a);
}

TEST(Mat2, JsonStrictness) {
    const char* bad[] = {
        R"([])",
        R"({"n":385})",
        R"({"n":1,"entries":[[[],[]],[[],[]]]})",
        R"({"n":-5,"entries":[[[],[]],[[],[]]]})",
        R"({"n":385,"entries":[[[],[]]]})",
        R"({"n":385,"entries":[[[],[],[]],[[],[]]]})",
        R"({"n":385,"entries":[[[385],[]],[[],[]]]})",
        R"({"n":385,"entries":[[[1,0],[]],[[],[]]]})",
        R"({"n":385,"entries":[[[-1],[]],[[],[]]]})",
        R"({"n":385,"entries":[[["1"],[]],[[],[]]]})",
        R"({"n":385,"entries":[[[1.5],[]],[[],[]]]})",
    };
    for (const char* text : bad) {
        EXPECT_EQ(code_of([&] { matrix_from_json(json::parse(text)); }), ErrorCode::MalformedInput)
            << text;
    }
    EXPECT_EQ(code_of([] { read_matrix_file("/nonexistent/idem.json"); }),
              ErrorCode::MalformedInput);
}
