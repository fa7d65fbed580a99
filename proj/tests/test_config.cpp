#include <gtest/gtest.h>

#include "drinfeld/config.hpp"

using namespace drinfeld;

namespace {
std::string rejected_field(RunConfig c) {
    try {
        validate(c);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}
}  // namespace

TEST(Config, DefaultsAreValid) {
    RunConfig c;
    EXPECT_NO_THROW(validate(c));
    EXPECT_EQ(c.p, 2);
    EXPECT_EQ(c.d_inf(), 1);
}

TEST(Config, ParsePinf) {
    EXPECT_EQ(parse_pinf("1,1,1"), (std::vector<long long>{1, 1, 1}));
    EXPECT_EQ(parse_pinf("1 0 1"), (std::vector<long long>{1, 0, 1}));
    EXPECT_EQ(parse_pinf("2; 1"), (std::vector<long long>{2, 1}));
    EXPECT_THROW(parse_pinf("1,x"), ConfigError);
    EXPECT_THROW(parse_pinf(""), ConfigError);
}

TEST(Config, RejectsEachBadField) {
    RunConfig c;
    c.q = 4;
    EXPECT_EQ(rejected_field(c), "q");
    c = RunConfig{};
    c.q = 3;
    c.p = 2;
    EXPECT_EQ(rejected_field(c), "e");
    c = RunConfig{};
    c.e = 2;
    EXPECT_EQ(rejected_field(c), "e");
    c = RunConfig{};
    c.pinf = {1, 0, 1};   // (x+1)^2 over F_2
    EXPECT_EQ(rejected_field(c), "pinf");
    c.pinf = {1, 1, 0};
    EXPECT_EQ(rejected_field(c), "pinf");
    c.pinf = {1};
    EXPECT_EQ(rejected_field(c), "pinf");
    c.pinf = {1, 1, 0, 0, 0, 1};
    EXPECT_EQ(rejected_field(c), "pinf");
    c = RunConfig{};
    c.precision = 0;
    EXPECT_EQ(rejected_field(c), "precision");
    c = RunConfig{};
    c.degree = -1;
    EXPECT_EQ(rejected_field(c), "degree");
    c = RunConfig{};
    c.vars = 5;
    EXPECT_EQ(rejected_field(c), "vars");
    c = RunConfig{};
    c.format = "xml";
    EXPECT_EQ(rejected_field(c), "format");
}

TEST(Config, PrecisionMessage) {
    RunConfig c;
    c.precision = -3;
    try {
        validate(c);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("precision must be positive"), std::string::npos);
    }
}

TEST(Config, ReducesPinfModQ) {
    RunConfig c;
    c.q = 3;
    c.pinf = {4, 3, 1};   // x^2 + 1 over F_3
    EXPECT_NO_THROW(validate(c));
    EXPECT_EQ(c.pinf, (std::vector<long long>{1, 0, 1}));
    EXPECT_EQ(c.d_inf(), 2);
}
