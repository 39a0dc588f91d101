#include "rfabe/bench.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace rfabe {
namespace {

std::vector<BenchRecord> small_suite() {
  static const std::vector<BenchRecord> records =
      run_suite(BenchConfig{.grid = {2, 4, 6}, .repetitions = 3, .seed = 9});
  return records;
}

TEST(BenchTest, OneRecordPerAlgorithmAndSize) {
  const auto records = small_suite();
  EXPECT_EQ(records.size(), bench_algorithms().size() * 3);
  for (const auto& r : records) {
    EXPECT_EQ(r.tau, 1);
    EXPECT_GT(r.median_ns, 0);
  }
}

TEST(BenchTest, CountsFollowClosedForms) {
  for (const auto& r : small_suite()) {
    const std::uint64_t n = r.n;
    const OpCounter& c = r.ops;
    if (r.algorithm == "keygen") {
      EXPECT_EQ(c.exp_g1, n + 2);
      EXPECT_EQ(c.hashes, n + 1);
      EXPECT_EQ(c.exp_g2, 1u);
      EXPECT_EQ(c.mul_g1, 1u);
    } else if (r.algorithm == "encrypt") {
      EXPECT_EQ(c.exp_g1, 2 * n + 2);
      EXPECT_EQ(c.mul_g1, n + 1);
      EXPECT_EQ(c.hashes, n + 3);
      EXPECT_EQ(c.exp_g2, 2u);
    } else if (r.algorithm == "decrypt_or") {
      EXPECT_EQ(c.pairings, 3u);
      EXPECT_EQ(c.mul_g1, 2 * n - 1);
      EXPECT_EQ(c.mul_gt, 4u);
    } else if (r.algorithm == "delegate") {
      EXPECT_EQ(c.exp_g1, n);
      EXPECT_EQ(c.hashes, n);
      EXPECT_EQ(c.exp_g2, 1u);
    } else if (r.algorithm == "revoke") {
      EXPECT_EQ(c.exp_g1, 4 * n);
      EXPECT_EQ(c.hashes, 2 * n + 1);
    } else if (r.algorithm == "decrypt_re") {
      EXPECT_EQ(c.pairings, 3u);
      EXPECT_EQ(c.mul_g1, 4 * n - 1);
    }
  }
}

TEST(BenchTest, SizesFollowElementCounts) {
  for (const auto& r : small_suite()) {
    if (r.algorithm == "keygen") {
      // Header, G1 part, count, names "A1".."A9" (2 chars), parts, G2.
      EXPECT_EQ(r.bytes_key, 6 + 48 + 4 + r.n * (4 + 2 + 48) + 96);
    }
  }
}

TEST(BenchTest, CsvHeaderAndRows) {
  std::ostringstream out;
  write_csv(out, small_suite());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "algorithm,N,tau,median_ns,pairings,exp_g1,exp_g2,exp_gt,mul_g1,mul_g2,"
            "mul_gt,hashes,bytes_key,bytes_ct");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 13);
    ++rows;
  }
  EXPECT_EQ(rows, static_cast<int>(small_suite().size()));
}

TEST(BenchTest, EmitsOnePlotPerTimedAlgorithm) {
  const auto dir = std::filesystem::temp_directory_path() / "rfabe_bench_plots";
  std::filesystem::remove_all(dir);
  const auto paths = emit_plots(small_suite(), dir.string());
  EXPECT_EQ(paths.size(), 5u);
  for (const auto& p : paths) {
    EXPECT_TRUE(std::filesystem::exists(p));
    EXPECT_GT(std::filesystem::file_size(p), 200u);
  }
  std::filesystem::remove_all(dir);
}

TEST(BenchTest, RejectsBadConfig) {
  EXPECT_THROW(run_suite(BenchConfig{.grid = {}}), std::invalid_argument);
  EXPECT_THROW(run_suite(BenchConfig{.grid = {0}}), std::invalid_argument);
  EXPECT_THROW(run_suite(BenchConfig{.grid = {1}, .repetitions = 0}), std::invalid_argument);
  EXPECT_THROW(run_suite(BenchConfig{.grid = {1}, .algorithms = {"nope"}}),
               std::invalid_argument);
}

TEST(BenchTest, FitLine) {
  const auto exact = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(exact.slope, 2);
  EXPECT_DOUBLE_EQ(exact.intercept, 1);
  EXPECT_DOUBLE_EQ(exact.r2, 1);
  const auto noisy = fit_line({1, 2, 3, 4}, {1, 3, 2, 4});
  EXPECT_NEAR(noisy.slope, 0.8, 1e-12);
  EXPECT_NEAR(noisy.r2, 0.64, 1e-12);
  EXPECT_THROW(fit_line({1, 1}, {2, 3}), std::invalid_argument);
}

TEST(BenchTest, RelativeSpread) {
  EXPECT_DOUBLE_EQ(relative_spread({4, 5, 4.5}), 0.25);
  EXPECT_DOUBLE_EQ(relative_spread({7}), 0);
  EXPECT_THROW(relative_spread({}), std::invalid_argument);
}

}  // namespace
}  // namespace rfabe
