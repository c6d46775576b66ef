#include <set>

#include <gtest/gtest.h>

#include "fv/config.hpp"
#include "fv/report.hpp"

using namespace fv;

TEST(Config, DefaultsFilledIn)
{
    auto c = parse_config(R"({"p": 2, "r": 3, "variety": ["[1:0:0]"]})");
    EXPECT_EQ(c.schema, 1);
    EXPECT_EQ(c.top, 8u);
    EXPECT_EQ(c.window, 6u);
    EXPECT_EQ(c.checks, known_checks());
    EXPECT_EQ(c.seed, 1u);
    EXPECT_EQ(c.key(), "p2-r3-[1:0:0]-N8");
}

TEST(Config, OutputPaths)
{
    auto c = parse_config(R"({"p": 3, "r": 2, "variety": ["[0:1]"], "N": 5, "window": 3,
                              "output": {"json": "a.json", "csv": "b.csv"}, "name": "x"})");
    EXPECT_EQ(c.json_path, "a.json");
    EXPECT_EQ(c.csv_path, "b.csv");
    EXPECT_EQ(c.key(), "x");
}

TEST(Config, RejectsInvalid)
{
    const char* bad[] = {
        R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "N": 6, "window": 6})",
        R"({"p": 4, "r": 3, "variety": ["[1:0:0]"]})",
        R"({"p": 2, "r": 3, "variety": ["[0:0:0]"]})",
        R"({"p": 2, "r": 3, "variety": ["[1:0]"]})",
        R"({"p": 2, "r": 3, "variety": []})",
        R"({"p": 2, "r": 3})",
        R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "extra": 1})",
        R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "schema": 2})",
        R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "checks": ["nope"]})",
        R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "inject_fault": "other"})",
        R"({"p": "two", "r": 3, "variety": ["[1:0:0]"]})",
        R"([1, 2])",
        R"({"p": 2,)",
    };
    for (const char* text : bad)
        EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, CheckList)
{
    EXPECT_EQ(parse_check_list("zeta-colimit,decomp-dims,zeta-colimit"),
              (std::vector<std::string>{"zeta-colimit", "decomp-dims"}));
    EXPECT_THROW(parse_check_list("decomp-dims,bogus"), ConfigError);
    EXPECT_THROW(parse_check_list(","), ConfigError);
}

TEST(Report, EveryCheckHasOneAnchor)
{
    std::set<std::string> anchors;
    for (const auto& id : known_checks())
        anchors.insert(check_anchor(id));
    EXPECT_EQ(anchors.size(), known_checks().size());
    EXPECT_THROW(check_anchor("bogus"), std::invalid_argument);
}

TEST(Report, TrivialExtDims)
{
    // p = 2, r = 2: n + 1. p = 3, r = 2: 1, 2, 3, 4, 5 (exterior on 2, polynomial on 2).
    for (std::size_t n = 0; n < 6; ++n)
        EXPECT_EQ(trivial_ext_dim(2, 2, n), n + 1);
    EXPECT_EQ(trivial_ext_dim(2, 3, 2), 6u);
    for (std::size_t n = 0; n < 5; ++n)
        EXPECT_EQ(trivial_ext_dim(3, 2, n), n + 1);
    EXPECT_EQ(trivial_ext_dim(3, 3, 2), 6u);
}

TEST(Report, FailureKeepsWitness)
{
    auto c = parse_config(R"({"p": 2, "r": 3, "variety": ["[1:0:0]"], "N": 4, "window": 2,
                              "checks": ["decomp-dims"], "inject_fault": "boundary"})");
    auto res = run_plan({c}, 1);
    ASSERT_EQ(res.size(), 1u);
    EXPECT_FALSE(res[0].pass);
    EXPECT_TRUE(res[0].witness.contains("failure"));
    EXPECT_EQ(res[0].anchor, check_anchor("decomp-dims"));
}
