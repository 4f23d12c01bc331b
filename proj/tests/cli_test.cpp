#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dhyper/cli.hpp"

using namespace dhyper;
using nlohmann::json;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Cli, ClassifyText)
{
    auto r = run({"classify", "--p", "3", "--places", "T,T^2+1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Hyperelliptic (canonical involution w_xy)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("genus         3"), std::string::npos) << r.out;
}

TEST(Cli, ClassifyJson)
{
    auto r = run({"classify", "--p", "3", "--places", "T,T^2+1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "Hyperelliptic");
    EXPECT_EQ(j["canonical"], "xy");
    EXPECT_EQ(j["genus"], 3);
    EXPECT_EQ(j["field"]["q"], 3);
    EXPECT_EQ(j["ss_bound"]["value"], "4/1");
    std::vector<int> fix;
    for (auto const & e : j["fixed_points"])
        fix.push_back(e["count"]);
    EXPECT_EQ(fix, (std::vector<int>{0, 4, 8}));
}

TEST(Cli, JsonRoundTripIsByteIdentical)
{
    for (auto places : {"T,T^2+1", "T,T^3-T+1", "T^2+1,T^2+T+2"}) {
        auto r = run({"classify", "--p", "3", "--places", places, "--format", "json"});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_EQ(json::parse(r.out).dump(2) + "\n", r.out);
    }
    auto s = run({"search", "--p", "5", "--max-degree", "2", "--format", "json"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(json::parse(s.out).dump(2) + "\n", s.out);
}

TEST(Cli, ClassifyNonHyperelliptic)
{
    auto r = run({"classify", "--p", "3", "--places", "T,T^3-T+1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "NotHyperelliptic");
    EXPECT_EQ(j["reason"], "even_genus_parity_contradiction");
    EXPECT_EQ(j["genus"], 6);
}

TEST(Cli, ExtensionField)
{
    auto r = run({"classify", "--p", "3", "--e", "2", "--places", "T,T^2+u+1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["field"]["q"], 9);
    EXPECT_EQ(j["field"]["modulus"], "u^2+1");
    EXPECT_EQ(j["genus"], 9);
    EXPECT_EQ(j["verdict"], "Hyperelliptic");
}

TEST(Cli, ValidationErrors)
{
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T,T"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T,T^2-1"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T,T^2+"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T,T^2+1", "--kappa", "1"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--p", "3", "--places", "T,T^2+1", "--format", "xml"}).code, cli::kValidation);
    EXPECT_EQ(run({"classify", "--places", "T,T^2+1"}).code, cli::kValidation);
    EXPECT_EQ(run({}).code, cli::kValidation);

    auto even = run({"classify", "--p", "2", "--places", "T,T^2+T+1"});
    EXPECT_EQ(even.code, cli::kValidation);
    EXPECT_NE(even.err.find("odd characteristic required"), std::string::npos);

    auto nine = run({"table", "--p", "9", "--degrees", "1,2"});
    EXPECT_EQ(nine.code, cli::kValidation);
    EXPECT_NE(nine.err.find("--p 3 --e 2"), std::string::npos) << nine.err;

    EXPECT_EQ(run({"table", "--p", "3", "--degrees", "1"}).code, cli::kValidation);
    EXPECT_EQ(run({"table", "--p", "3", "--degrees", "0,2"}).code, cli::kValidation);
}

TEST(Cli, ResourceErrors)
{
    EXPECT_EQ(run({"classify", "--p", "3", "--e", "20", "--places", "T,T+1"}).code, cli::kResource);
}

TEST(Cli, Help)
{
    auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("classify"), std::string::npos);
}

TEST(Cli, TableCsv)
{
    auto r = run({"table", "--p", "3", "--degrees", "1,2", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "q,f_x,f_y,g,fix_x,fix_y,fix_xy,verdict");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",3,"), std::string::npos);
        EXPECT_NE(line.find(",8,Hyperelliptic"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 9);
}

TEST(Cli, SearchOddCharacteristic)
{
    auto r = run({"search", "--p", "3", "--max-degree", "4", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["candidates"], json::parse("[[1,1],[1,2],[1,3],[2,2]]"));
    EXPECT_EQ(j["counts"]["hyperelliptic"], 9);
    EXPECT_EQ(j["counts"]["undetermined"], 0);
    for (auto const & rep : j["reports"]) {
        bool one_two = rep["places"][0]["degree"] == 1 && rep["places"][1]["degree"] == 2;
        EXPECT_EQ(rep["verdict"] == "Hyperelliptic", one_two);
    }
    auto five = run({"search", "--p", "5", "--max-degree", "4", "--format", "json"});
    ASSERT_EQ(five.code, 0);
    EXPECT_EQ(json::parse(five.out)["candidates"], json::parse("[[1,1],[1,2]]"));
}

TEST(Cli, SearchEvenCharacteristic)
{
    auto r = run({"search", "--p", "2", "--max-degree", "3", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["passing_multisets"], json::parse("[[1,1],[1,2],[1,3],[2,3]]"));
    for (auto const & row : j["passing"]) {
        EXPECT_EQ(row["verdict"], "not classified (even characteristic)");
        EXPECT_FALSE(row.contains("genus"));
    }
}

TEST(Cli, CacheDoesNotChangeOutput)
{
    auto path = std::filesystem::temp_directory_path() / "dhyper_cli_test_cache.txt";
    std::filesystem::remove(path);
    std::vector<std::string> base{"table", "--p", "5", "--degrees", "1,2", "--format", "json"};
    auto plain = run(base);
    auto with = base;
    with.insert(with.end(), {"--cache", path.string()});
    auto first = run(with);
    auto second = run(with);
    ASSERT_EQ(plain.code, 0);
    EXPECT_EQ(first.out, plain.out);
    EXPECT_EQ(second.out, plain.out);
    EXPECT_TRUE(std::filesystem::file_size(path) > 0);

    // A corrupt cache file is rejected rather than trusted.
    {
        std::ofstream bad(path, std::ios::trunc);
        bad << "5 1 T 1 extra\n";
    }
    EXPECT_EQ(run(with).code, cli::kValidation);
    std::filesystem::remove(path);
}

TEST(Cli, ThreadsDoNotChangeOutput)
{
    auto a = run({"search", "--p", "5", "--max-degree", "2", "--format", "csv", "--threads", "1"});
    auto b = run({"search", "--p", "5", "--max-degree", "2", "--format", "csv", "--threads", "8"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}
