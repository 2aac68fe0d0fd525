#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SIDONLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string read_file(const std::string& name) {
    std::ifstream in(std::string(SIDONLAB_GOLDEN_DIR) + "/" + name);
    EXPECT_TRUE(in.good()) << "missing golden file " << name;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json strip_timestamp(const std::string& payload) {
    json j = json::parse(payload);
    j.erase("timestamp");
    return j;
}

void expect_matches_golden(const std::string& args, const std::string& golden,
                           int expected_exit) {
    const CliResult res = run_cli(args);
    EXPECT_EQ(res.exit_code, expected_exit) << args;
    EXPECT_EQ(strip_timestamp(res.output), json::parse(read_file(golden))) << args;
}

} // namespace

TEST(Cli, FieldInfoGolden) {
    expect_matches_golden("field info --p 7", "field_info.json", 0);
    expect_matches_golden("field info --p 2 --k 3", "field_info_f8.json", 0);
}

TEST(Cli, SidonGolden) {
    expect_matches_golden(
        "sidon build --p 5 --construction golomb --g1 2 --g2 2 --lambda 1 --sign +",
        "sidon_build.json", 0);
    expect_matches_golden("sidon verify --p 7 --construction welch --g 3",
                          "sidon_verify.json", 0);
    expect_matches_golden("sidon verify --group Z7 --elements \"0;1;2\"",
                          "sidon_verify_explicit.json", 1);
}

TEST(Cli, CountGolden) {
    expect_matches_golden(
        "count theta --p 11 --construction golomb --g1 auto --g2 auto --lambda 1 "
        "--sign + --B random:20 --Bp random:20 --seed 42",
        "count_theta.json", 0);
    expect_matches_golden(
        "count intersection --p 11 --construction welch --g auto --B random:15 "
        "--Bp random:15 --seed 42",
        "count_intersection.json", 0);
    expect_matches_golden(
        "count discrepancy --p 7 --construction parabolic --B \"0,0;1,2\"",
        "count_discrepancy.json", 0);
    expect_matches_golden(
        "count translation --p 11 --construction golomb --g1 auto --g2 auto "
        "--lambda 1 --B sub:5,5 --C B",
        "count_translation.json", 0);
}

TEST(Cli, ExperimentGolden) {
    expect_matches_golden("exp incidence --p 101 --points random:20 --lines random:20 --seed 7",
                          "exp_incidence.json", 0);
    expect_matches_golden("exp diffcover --p 101 --g auto", "exp_diffcover.json", 0);
    expect_matches_golden(
        "exp sumproduct --p 101 --variant garaev --A1 random:8 --A2 random:8 "
        "--A3 random:8 --seed 3",
        "exp_sumproduct.json", 0);
    expect_matches_golden("exp equation --p 7 --eq shkredov --X1 \"1;2;4\" --X2 \"1;2;4\"",
                          "exp_equation_shkredov.json", 0);
    expect_matches_golden(
        "exp equation --p 7 --eq square_sum --X1 all --X2 all --X3 all --X4 all",
        "exp_equation_square_sum.json", 0);
    expect_matches_golden("exp fermat --p 7 --r 2 --s 2", "exp_fermat.json", 0);
    expect_matches_golden(
        "exp interval --p 101 --g auto --I 0:30 --J 5:30 --lambda 1 --r 2 --seed 42",
        "exp_interval.json", 0);
    expect_matches_golden("exp image --p 101 --kind square --I 10:25 --J 40:25",
                          "exp_image.json", 0);
}

TEST(Cli, SweepCsvGolden) {
    const CliResult res = run_cli("exp fermat --p-range 11:31 --r 2 --s 3 --format csv");
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_EQ(res.output, read_file("exp_fermat_sweep.csv"));
}

TEST(Cli, SweepWithSamplesPerPrime) {
    const CliResult res =
        run_cli("count theta --p-range 11:31 --construction welch --g auto "
                "--B random:15 --Bp random:15 --samples 10 --seed 5");
    EXPECT_EQ(res.exit_code, 0); // zero violations gate the sweep
    std::stringstream ss(res.output);
    std::string line;
    std::set<std::uint64_t> item_seeds;
    int lines = 0;
    while (std::getline(ss, line)) {
        ++lines;
        const json j = json::parse(line);
        EXPECT_FALSE(j.at("violated").get<bool>());
        item_seeds.insert(j.at("config").at("item_seed").get<std::uint64_t>());
    }
    EXPECT_EQ(lines, 70); // 7 primes x 10 samples
    EXPECT_EQ(item_seeds.size(), 70u);
}

TEST(Cli, SweepJsonIsOneObjectPerLine) {
    const CliResult res = run_cli("exp diffcover --p-range 101:120 --g auto");
    EXPECT_EQ(res.exit_code, 0);
    std::stringstream ss(res.output);
    std::string line;
    int lines = 0;
    while (std::getline(ss, line)) {
        ++lines;
        const json j = json::parse(line);
        EXPECT_TRUE(j.contains("result"));
    }
    EXPECT_EQ(lines, 5); // primes 101, 103, 107, 109, 113
}

TEST(Cli, IdenticalSeedsGiveByteIdenticalPayloads) {
    const std::string cmd =
        "count theta --p 31 --construction welch --g auto --B random:25 --Bp random:25 "
        "--seed 2718";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(strip_timestamp(a.output).dump(), strip_timestamp(b.output).dump());
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("count theta").exit_code, 2);          // missing --p
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);           // unknown command
    EXPECT_EQ(run_cli("count theta --p 11 --construction welch --B random:5 "
                      "--Bp random:5")
                  .exit_code,
              2); // random without --seed
    EXPECT_EQ(run_cli("sidon verify --p 10133 --construction parabolic --ceiling 1000")
                  .exit_code,
              3); // over the work ceiling
    EXPECT_EQ(run_cli("sidon verify --group Z7 --elements \"0;1;2\"").exit_code, 1);
    EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(Cli, GeneratorAutoIsEchoed) {
    const auto res = run_cli("sidon verify --p 7 --construction welch --g auto");
    EXPECT_EQ(res.exit_code, 0);
    const json j = json::parse(res.output);
    EXPECT_EQ(j.at("config").at("g").get<std::uint64_t>(), 3u);
}
