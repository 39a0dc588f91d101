#ifndef RFABE_BENCH_H_
#define RFABE_BENCH_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rfabe/op_counter.h"

namespace rfabe {

// Algorithms measured by run_suite, in CSV order.
const std::vector<std::string>& bench_algorithms();
// Algorithms that get a time-vs-N plot.
const std::vector<std::string>& plotted_algorithms();

struct BenchConfig {
  std::vector<int> grid{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int repetitions = 50;
  std::uint64_t seed = 1;
  // Empty means all of bench_algorithms().
  std::vector<std::string> algorithms{};
};

// One aggregate per (algorithm, N). Policies are AND chains of N
// attributes, so tau is 1. For delegate, revoke and decrypt_re both the
// original and the added chain have N attributes; the composed policy has
// 2N rows. bytes_key is the serialized key the algorithm produces or
// consumes; bytes_ct the serialized ciphertext or delegation.
struct BenchRecord {
  std::string algorithm;
  int n = 0;
  int tau = 1;
  std::int64_t median_ns = 0;  // thread CPU time
  OpCounter ops{};
  std::size_t bytes_key = 0;
  std::size_t bytes_ct = 0;
};

// Throws std::invalid_argument for an empty grid, a non-positive N or
// repetition count, or an unknown algorithm. `progress`, when given,
// receives one line per finished record.
std::vector<BenchRecord> run_suite(const BenchConfig& config,
                                   std::ostream* progress = nullptr);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// Writes <dir>/<algorithm>.svg for every plotted algorithm present in
// `records` and returns the paths written.
std::vector<std::string> emit_plots(const std::vector<BenchRecord>& records,
                                    const std::string& dir);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
// Ordinary least squares; needs at least two distinct x values.
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// (max - min) / min over positive samples.
double relative_spread(const std::vector<double>& ys);

// Records of one algorithm, ordered by N.
std::vector<BenchRecord> records_for(const std::vector<BenchRecord>& records,
                                     const std::string& algorithm);

}  // namespace rfabe

#endif  // RFABE_BENCH_H_
