#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pgm/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "pgm");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = pgm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("pgm_test_" + name);
}

} // namespace

TEST(CliBasis, GoldenMean)
{
    const auto r = run({"basis", "--n", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("beta=1.61803398875\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("t=2\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("abs_lambda_2=0.61803398875"), std::string::npos);
}

TEST(CliBasis, OrderTen)
{
    const auto r = run({"basis", "--n", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("lambda2_abs=0.968"), std::string::npos) << r.out;
}

TEST(CliBasis, UsageErrors)
{
    EXPECT_EQ(run({"basis", "--n", "1"}).code, 2);
    EXPECT_EQ(run({"basis"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"basis", "--n", "two"}).code, 2);
}

TEST(CliTable1, ExactBytes)
{
    const auto r = run({"table1", "--n-min", "2", "--n-max", "2"});
    ASSERT_EQ(r.code, 0);
    const auto b = pgm::build_basis(2);
    const std::string expected = std::string("n,beta,lambda2_abs,beta_pow,t_ratio\n") + "2," +
                                 pgm::io::fmt_real(b.beta()) + ',' + pgm::io::fmt_real(b.lambda2_abs()) + ',' +
                                 pgm::io::fmt_real(std::pow(b.beta(), -1.0)) + ',' +
                                 pgm::io::fmt_real(pgm::rate_exponents(b).t_over_1pt) + '\n';
    EXPECT_EQ(r.out, expected);
}

TEST(CliTable1, DefaultRangeAndFileOutput)
{
    const auto r = run({"table1"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 10u);
    EXPECT_EQ(ls[0], "n,beta,lambda2_abs,beta_pow,t_ratio");
    EXPECT_EQ(ls[5].rfind("6,1.98", 0), 0u) << ls[5];

    const auto path = temp_file("table1.csv");
    std::filesystem::remove(path);
    const auto f = run({"table1", "--out", path.string()});
    ASSERT_EQ(f.code, 0);
    EXPECT_TRUE(f.out.empty());
    EXPECT_EQ(slurp(path), r.out);
    std::filesystem::remove(path);

    EXPECT_EQ(run({"table1", "--n-min", "5", "--n-max", "4"}).code, 2);
}

TEST(CliExpand, Examples)
{
    auto r = run({"expand", "--n", "2", "--x", "0.5", "--digits", "9"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "010010010\n");
    r = run({"expand", "--n", "3", "--x", "0", "--digits", "6"});
    EXPECT_EQ(r.out, "000000\n");
    EXPECT_EQ(run({"expand", "--n", "2", "--x", "1.0"}).code, 2);
    EXPECT_EQ(run({"expand", "--n", "2", "--x", "-0.1"}).code, 2);
    EXPECT_EQ(run({"expand", "--n", "2", "--x", "abc"}).code, 2);
}

TEST(CliErrors, CsvRowsAndSummary)
{
    const auto r = run({"errors", "--n", "2", "--alpha", "2", "--m-min", "5", "--m-max", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 17u);
    EXPECT_EQ(ls[0], "m,sup_error,tv,ln_sup_error");
    EXPECT_EQ(ls[1].rfind("5,", 0), 0u);
    EXPECT_EQ(ls[16].rfind("20,", 0), 0u);
    const auto pos = r.err.find("normalized_slope=");
    ASSERT_NE(pos, std::string::npos) << r.err;
    const double slope = std::stod(r.err.substr(pos + 17));
    EXPECT_NEAR(slope, 0.993, 0.05);
}

TEST(CliErrors, SvgIsWellFormed)
{
    const auto path = temp_file("errors.svg");
    std::filesystem::remove(path);
    const auto r = run({"errors", "--n", "2", "--source", "uniform", "--m-min", "5", "--m-max", "12", "--format",
                        "svg", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("normalized_slope="), std::string::npos);
    const std::string svg = slurp(path);
    std::filesystem::remove(path);

    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    std::size_t polylines = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
        ++polylines;
    EXPECT_EQ(polylines, 1u);

    // Every element opened is closed or self-closing.
    std::vector<std::string> stack;
    for (std::size_t p = svg.find('<'); p != std::string::npos; p = svg.find('<', p + 1)) {
        const std::size_t end = svg.find('>', p);
        ASSERT_NE(end, std::string::npos);
        const std::string tag = svg.substr(p + 1, end - p - 1);
        if (tag.empty() || tag[0] == '?' || tag[0] == '!')
            continue;
        if (tag[0] == '/') {
            ASSERT_FALSE(stack.empty()) << tag;
            EXPECT_EQ(stack.back(), tag.substr(1));
            stack.pop_back();
        } else if (tag.back() != '/') {
            stack.push_back(tag.substr(0, tag.find_first_of(" \n\t")));
        }
    }
    EXPECT_TRUE(stack.empty());
}

TEST(CliErrors, UsageErrors)
{
    EXPECT_EQ(run({"errors", "--n", "2", "--source", "uniform", "--alpha", "2"}).code, 2);
    EXPECT_EQ(run({"errors", "--n", "2", "--source", "beta"}).code, 2);
    EXPECT_EQ(run({"errors", "--n", "2", "--m-min", "9", "--m-max", "8"}).code, 2);
    EXPECT_EQ(run({"errors", "--n", "2", "--grid", "10"}).code, 2);
    EXPECT_EQ(run({"errors", "--n", "2", "--m-max", "60"}).code, 2); // over budget
    EXPECT_EQ(run({"errors", "--n", "2", "--format", "png"}).code, 2);
}

TEST(CliVerify, DefaultRangePasses)
{
    const auto r = run({"verify"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("failed=0"), std::string::npos);
}

TEST(CliVerify, InjectedFaultIsNamed)
{
    const auto r = run({"verify", "--n-min", "2", "--n-max", "3", "--perturb-beta", "1e-3"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL two_minus_beta n=2"), std::string::npos) << r.out;
    EXPECT_EQ(run({"verify", "--n-min", "6", "--n-max", "5"}).code, 2);
}

TEST(CliMonteCarlo, ByteIdenticalForFixedSeed)
{
    const std::vector<std::string> args{"montecarlo", "--n", "2", "--m", "10", "--samples", "200000", "--seed", "9"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto ls = lines(a.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0], "n,m,samples,seed,ks_stat,tv_bins");
    EXPECT_EQ(ls[1].rfind("2,10,200000,9,", 0), 0u);
}

TEST(CliMonteCarlo, UsageErrors)
{
    EXPECT_EQ(run({"montecarlo", "--n", "2", "--samples", "10"}).code, 2);
    EXPECT_EQ(run({"montecarlo", "--n", "2", "--m", "-1"}).code, 2);
    EXPECT_EQ(run({"montecarlo", "--n", "2", "--source", "affine", "--alpha", "3"}).code, 2);
}

TEST(CliHelp, ExitsCleanly)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("montecarlo"), std::string::npos);
}
