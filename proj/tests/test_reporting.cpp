#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "eda/reporting.hpp"
#include "eda/transaction.hpp"

using Catch::Approx;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) { lines.push_back(line); }
    return lines;
}

}  // namespace

TEST_CASE("collect_round_stats measures honest peers only") {
    const std::vector<double> estimates = {0.1, 0.2, 0.3, 0.9};
    const std::vector<eda::PeerRole> roles = {eda::PeerRole::Honest, eda::PeerRole::Honest,
                                              eda::PeerRole::Honest, eda::PeerRole::Byzantine};
    const eda::TransactionId tx = eda::TransactionId::from_anchor(0, 0.5);
    const eda::RoundStats stats =
        eda::collect_round_stats(estimates, roles, 4, tx, false, {0.9});

    CHECK(stats.round == 4);
    CHECK(stats.mean == Approx(0.2).epsilon(1e-12));
    CHECK(stats.std_dev == Approx(0.0816496581).epsilon(1e-8));  // population std
    CHECK(stats.min == 0.1);
    CHECK(stats.max == 0.3);
    CHECK(stats.spread == Approx(stats.max - stats.min).margin(1e-12));
    CHECK_FALSE(stats.converged);
    CHECK(stats.byzantine_values == std::vector<double>{0.9});

    REQUIRE(stats.histogram.size() == 100);
    CHECK(std::accumulate(stats.histogram.begin(), stats.histogram.end(), std::uint64_t{0}) ==
          3);  // byzantine value not binned
    CHECK(stats.histogram[10] == 1);
    CHECK(stats.histogram[20] == 1);
    CHECK(stats.histogram[30] == 1);
    CHECK(stats.histogram[90] == 0);
}

TEST_CASE("collect_round_stats handles degenerate distributions") {
    const std::vector<eda::PeerRole> honest2 = {eda::PeerRole::Honest, eda::PeerRole::Honest};
    const eda::TransactionId tx = eda::TransactionId::from_anchor(0, 0.5);

    const eda::RoundStats all_same =
        eda::collect_round_stats(std::vector<double>{0.5, 0.5}, honest2, 0, tx, true, {});
    CHECK(all_same.mean == 0.5);
    CHECK(all_same.std_dev == 0.0);
    CHECK(all_same.spread == 0.0);
    CHECK(all_same.histogram[50] == 2);

    const eda::RoundStats two_point =
        eda::collect_round_stats(std::vector<double>{0.0, 1.0}, honest2, 0, tx, false, {});
    CHECK(two_point.mean == 0.5);
    CHECK(two_point.spread == 1.0);
    CHECK(two_point.histogram[0] == 1);
    CHECK(two_point.histogram[99] == 1);  // 1.0 folds into the top bin
}

TEST_CASE("collect_round_stats rejects malformed worlds") {
    const eda::TransactionId tx = eda::TransactionId::from_anchor(0, 0.5);
    const std::vector<eda::PeerRole> one = {eda::PeerRole::Honest};
    CHECK_THROWS_AS(eda::collect_round_stats(std::vector<double>{0.5, 0.5}, one, 0, tx, false, {}),
                    std::invalid_argument);
    const std::vector<eda::PeerRole> faulty = {eda::PeerRole::Byzantine};
    CHECK_THROWS_AS(eda::collect_round_stats(std::vector<double>{0.5}, faulty, 0, tx, false, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        eda::collect_round_stats(std::vector<double>{0.5}, one, 0, tx, false, {}, 0),
        std::invalid_argument);
}

TEST_CASE("histogram_bin clamps the edges") {
    CHECK(eda::histogram_bin(0.0, 100) == 0);
    CHECK(eda::histogram_bin(0.999, 100) == 99);
    CHECK(eda::histogram_bin(1.0, 100) == 99);
    CHECK(eda::histogram_bin(0.555, 10) == 5);
}

TEST_CASE("format_value renders nine significant digits") {
    CHECK(eda::format_value(0.5) == "0.5");
    CHECK(eda::format_value(1.0) == "1");
    CHECK(eda::format_value(0.0) == "0");
    CHECK(eda::format_value(0.123456789) == "0.123456789");
    CHECK(eda::format_value(0.1234567891234) == "0.123456789");

    // Round-trip at rendered precision.
    eda::RandomStream rng(8);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.next_double();
        const double back = std::stod(eda::format_value(v));
        REQUIRE(back == Approx(v).epsilon(1e-8));
    }
}

TEST_CASE("write_round_history_csv emits the three artifact files") {
    const auto dir = std::filesystem::temp_directory_path() / "eda_reporting_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string base = (dir / "case").string();

    const eda::TransactionId tx = eda::TransactionId::from_anchor(0, 0.5);
    const std::vector<eda::PeerRole> roles = {eda::PeerRole::Honest, eda::PeerRole::Honest};
    std::vector<eda::RoundStats> history;
    history.push_back(eda::collect_round_stats(std::vector<double>{0.25, 0.75}, roles, 0, tx,
                                               false, {}, 4));
    history.push_back(eda::collect_round_stats(std::vector<double>{0.5, 0.5}, roles, 1, tx, true,
                                               {0.125}, 4));
    eda::write_round_history_csv(history, base);

    const auto main_lines = lines_of(slurp(base + ".csv"));
    REQUIRE(main_lines.size() == 3);
    CHECK(main_lines[0] == "round,tx,mean,std,min,max,spread,converged");
    CHECK(main_lines[1] == "0," + tx.hex() + ",0.5,0.25,0.25,0.75,0.5,0");
    CHECK(main_lines[2] == "1," + tx.hex() + ",0.5,0,0.5,0.5,0,1");

    const auto hist_lines = lines_of(slurp(base + ".hist.csv"));
    REQUIRE(hist_lines.size() == 9);  // header + 2 rounds x 4 bins
    CHECK(hist_lines[0] == "round,tx,bin_index,count");
    CHECK(hist_lines[1] == "0," + tx.hex() + ",0,0");
    CHECK(hist_lines[2] == "0," + tx.hex() + ",1,1");
    CHECK(hist_lines[7] == "1," + tx.hex() + ",2,2");

    const auto byz_lines = lines_of(slurp(base + ".byz.csv"));
    REQUIRE(byz_lines.size() == 2);
    CHECK(byz_lines[0] == "round,tx,value");
    CHECK(byz_lines[1] == "1," + tx.hex() + ",0.125");

    SECTION("re-emitting is byte-identical") {
        const std::string before = slurp(base + ".csv");
        eda::write_round_history_csv(history, base);
        CHECK(slurp(base + ".csv") == before);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("write_round_history_csv surfaces the failing path") {
    std::vector<eda::RoundStats> history;
    CHECK_THROWS_WITH(eda::write_round_history_csv(history, "/nonexistent-dir/xx/yy"),
                      Catch::Matchers::ContainsSubstring("/nonexistent-dir/xx/yy"));
}
