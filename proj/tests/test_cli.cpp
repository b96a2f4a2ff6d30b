#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "idem/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = idem::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, Idempotents) {
    const auto r = run({"idempotents", "105"});
    EXPECT_EQ(r.code, idem::cli::kExitOk);
    EXPECT_NE(r.out.find("modulus: 105 = 3 * 5 * 7\n"), std::string::npos);
    EXPECT_NE(r.out.find("idempotents: 0 1 15 21 36 70 85 91\n"), std::string::npos);

    const auto j = run({"idempotents", "385", "--json"});
    ASSERT_EQ(j.code, 0);
    const json doc = json::parse(j.out);
    EXPECT_EQ(doc["idempotents"], json::parse("[0,1,56,155,176,210,231,330]"));
}

TEST(Cli, SolveTrace) {
    const auto r = run({"solve-trace", "385", "210"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("solutions: 21 35 120 175 211 266 351 365\n"), std::string::npos);
    const auto bad = run({"solve-trace", "385", "2"});
    EXPECT_EQ(bad.code, idem::cli::kExitDomainError);
    EXPECT_NE(bad.err.find("error: NotIdempotentDet:"), std::string::npos);
}

TEST(Cli, Errors) {
    EXPECT_EQ(run({}).code, idem::cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, idem::cli::kExitUsage);
    EXPECT_EQ(run({"idempotents", "abc"}).code, idem::cli::kExitUsage);
    const auto sq = run({"idempotents", "12"});
    EXPECT_EQ(sq.code, idem::cli::kExitDomainError);
    EXPECT_NE(sq.err.find("error: NotSquarefree:"), std::string::npos);
    EXPECT_EQ(run({"classify", "/nonexistent.json"}).code, idem::cli::kExitUsage);
    EXPECT_EQ(run({"generate", "Det0_General", "--n", "105"}).code, idem::cli::kExitDomainError);
    EXPECT_EQ(run({"oracle", "385", "--budget", "1000"}).code, idem::cli::kExitDomainError);
}

TEST(Cli, Oracle) {
    const auto r = run({"oracle", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("count: 32\n"), std::string::npos);
}

TEST(Cli, GenerateClassifyRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "idem_test_cli.json";
    const auto gen = run({"generate", "DetPair_Mixed", "--n", "385", "--seed", "9", "--roles",
                          "5,7,11", "-o", path.string()});
    ASSERT_EQ(gen.code, 0) << gen.err;
    const auto cls = run({"classify", path.string(), "--json"});
    ASSERT_EQ(cls.code, 0) << cls.err;
    const json doc = json::parse(cls.out)["report"];
    EXPECT_TRUE(doc["idempotent"].get<bool>());
    bool found = false;
    for (const auto& m : doc["matches"]) found |= m["label"]["family"] == "DetPair_Mixed";
    EXPECT_TRUE(found) << cls.out;
    std::filesystem::remove(path);

    const auto stdout_gen = run({"generate", "Det0_General", "--n", "385", "--e", "x"});
    ASSERT_EQ(stdout_gen.code, 0);
    const json m = json::parse(stdout_gen.out);
    EXPECT_EQ(m["entries"], json::parse("[[[0,1],[0,1,384]],[[1],[1,384]]]"));
}

TEST(Cli, Verify) {
    const auto r = run({"verify", "385"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("result: PASS\n"), std::string::npos);
}
