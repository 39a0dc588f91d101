#include "rfabe/bench.h"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rfabe/codec.h"
#include "rfabe/revocation.h"
#include "rfabe/scheme.h"

namespace rfabe {
namespace {

std::vector<std::string> names(std::string_view prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

MspPolicy and_chain(std::string_view prefix, int n) {
  std::string text;
  for (const auto& a : names(prefix, n)) text += (text.empty() ? "" : " AND ") + a;
  return compile_policy(text);
}

AttributeSet attr_set(std::string_view prefix, int n) {
  AttributeSet out;
  for (auto& a : names(prefix, n)) out.insert(a);
  return out;
}

std::int64_t thread_cpu_ns() {
  timespec ts;
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return std::int64_t{ts.tv_sec} * 1'000'000'000 + ts.tv_nsec;
}

// CPU time of the calling thread, so time spent descheduled is not counted.
std::int64_t elapsed_ns(const std::function<void()>& op) {
  const std::int64_t start = thread_cpu_ns();
  op();
  return thread_cpu_ns() - start;
}

// One grid point ready to be timed: counts and sizes are already filled in.
struct Prepared {
  BenchRecord rec;
  std::function<void()> op;
};

class Runner {
 public:
  explicit Runner(const BenchConfig& config) : rng_(config.seed, "rfabe-bench") {
    auto out = setup(GroupEnv::bls12_381(), rng_);
    pp_ = out.pp;
    msk_ = out.msk;
  }

  Prepared prepare(const std::string& algorithm, int n) {
    Prepared p;
    BenchRecord& rec = p.rec;
    rec.algorithm = algorithm;
    rec.n = n;
    const GroupEnv& env = pp_.group();
    const MspPolicy base = and_chain("A", n);
    const MspPolicy added = and_chain("B", n);

    if (algorithm == "setup") {
      p.op = [this] { setup(pp_.group(), rng_); };
      rec.bytes_key = encode(msk_).size();
    } else if (algorithm == "keygen") {
      p.op = [this, attrs = attr_set("A", n)] { keygen(pp_, msk_, attrs, rng_); };
      rec.bytes_key = encode(keygen(pp_, msk_, attr_set("A", n), rng_)).size();
    } else if (algorithm == "encrypt") {
      p.op = [this, base, msg = env.random_gt(rng_)] { encrypt(pp_, base, msg, rng_); };
      rec.bytes_ct = encode(encrypt(pp_, base, env.random_gt(rng_), rng_).ct).size();
    } else if (algorithm == "decrypt_or") {
      auto sk = keygen(pp_, msk_, attr_set("A", n), rng_);
      auto ct = encrypt(pp_, base, env.random_gt(rng_), rng_).ct;
      rec.bytes_key = encode(sk).size();
      rec.bytes_ct = encode(ct).size();
      p.op = [this, sk = std::move(sk), ct = std::move(ct)] {
        check(decrypt_or(pp_, sk, ct));
      };
    } else if (algorithm == "delegate") {
      auto state = encrypt(pp_, base, env.random_gt(rng_), rng_).state;
      rec.bytes_ct = encode(delegate(pp_, state, added, rng_).dg).size();
      p.op = [this, state = std::move(state), added] { delegate(pp_, state, added, rng_); };
    } else if (algorithm == "revoke") {
      auto enc = encrypt(pp_, base, env.random_gt(rng_), rng_);
      auto dg = delegate(pp_, enc.state, added, rng_).dg;
      rec.bytes_ct = encode(revoke(pp_, enc.ct, dg, rng_).ct).size();
      p.op = [this, ct = std::move(enc.ct), dg = std::move(dg)] { revoke(pp_, ct, dg, rng_); };
    } else if (algorithm == "decrypt_re") {
      AttributeSet attrs = attr_set("A", n);
      attrs.merge(attr_set("B", n));
      auto sk = keygen(pp_, msk_, attrs, rng_);
      const auto enc = encrypt(pp_, base, env.random_gt(rng_), rng_);
      const Delegation dg = delegate(pp_, enc.state, added, rng_).dg;
      auto ct = revoke(pp_, enc.ct, dg, rng_).ct;
      rec.bytes_key = encode(sk).size();
      rec.bytes_ct = encode(ct).size();
      p.op = [this, sk = std::move(sk), csum = enc.ct.checksum, ct = std::move(ct)] {
        check(decrypt_re(pp_, sk, csum, ct));
      };
    } else {
      throw std::invalid_argument("unknown bench algorithm: " + algorithm);
    }
    CountScope scope(rec.ops);
    p.op();
    return p;
  }

 private:
  static void check(const DecryptOutcome& out) {
    if (!out.ok()) throw std::logic_error("bench decryption failed");
  }

  DeterministicRandom rng_;
  PublicParams pp_;
  MasterSecretKey msk_;
};

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void write_svg(std::ostream& out, const std::string& title,
               const std::vector<BenchRecord>& recs) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double max_n = 0, max_ms = 0;
  for (const auto& r : recs) {
    max_n = std::max(max_n, double(r.n));
    max_ms = std::max(max_ms, r.median_ns / 1e6);
  }
  if (max_ms <= 0) max_ms = 1;
  max_ms *= 1.1;
  auto px = [&](double n) { return kLeft + n / max_n * (kW - kLeft - kRight); };
  auto py = [&](double ms) { return kH - kBottom - ms / max_ms * (kH - kTop - kBottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << svg_escape(title) << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double ms = max_ms * i / 4;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(ms) + 4
        << "\" text-anchor=\"end\">" << std::setprecision(3) << ms << "</text>\n";
  }
  for (const auto& r : recs) {
    out << "<text x=\"" << px(r.n) << "\" y=\"" << kH - kBottom + 16
        << "\" text-anchor=\"middle\">" << r.n << "</text>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">N (attributes)</text>\n"
      << "<text x=\"16\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 16 " << kH / 2
      << ")\" text-anchor=\"middle\">median time (ms)</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& r : recs) out << px(r.n) << "," << py(r.median_ns / 1e6) << " ";
  out << "\"/>\n";
  for (const auto& r : recs) {
    out << "<circle cx=\"" << px(r.n) << "\" cy=\"" << py(r.median_ns / 1e6)
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace

const std::vector<std::string>& bench_algorithms() {
  static const std::vector<std::string> kAll = {
      "setup", "keygen", "encrypt", "decrypt_or", "delegate", "revoke", "decrypt_re"};
  return kAll;
}

const std::vector<std::string>& plotted_algorithms() {
  static const std::vector<std::string> kPlotted = {"keygen", "encrypt", "decrypt_or",
                                                    "revoke", "decrypt_re"};
  return kPlotted;
}

std::vector<BenchRecord> run_suite(const BenchConfig& config, std::ostream* progress) {
  if (config.grid.empty()) throw std::invalid_argument("empty bench grid");
  if (config.repetitions <= 0) throw std::invalid_argument("repetitions must be positive");
  for (int n : config.grid) {
    if (n <= 0) throw std::invalid_argument("grid sizes must be positive");
  }
  const auto& algorithms =
      config.algorithms.empty() ? bench_algorithms() : config.algorithms;
  for (const auto& a : algorithms) {
    if (std::find(bench_algorithms().begin(), bench_algorithms().end(), a) ==
        bench_algorithms().end()) {
      throw std::invalid_argument("unknown bench algorithm: " + a);
    }
  }

  // Repetitions rotate over the grid so that a burst of machine noise is
  // spread across sizes instead of skewing one point.
  Runner runner(config);
  std::vector<BenchRecord> records;
  for (const auto& a : algorithms) {
    std::vector<Prepared> points;
    for (int n : config.grid) points.push_back(runner.prepare(a, n));
    std::vector<std::vector<std::int64_t>> samples(points.size());
    for (int rep = 0; rep < config.repetitions; ++rep) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        samples[i].push_back(elapsed_ns(points[i].op));
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& t = samples[i];
      std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
      points[i].rec.median_ns = t[t.size() / 2];
      records.push_back(points[i].rec);
      if (progress != nullptr) {
        *progress << a << " N=" << points[i].rec.n << " median "
                  << points[i].rec.median_ns / 1000 << " us\n";
      }
    }
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "algorithm,N,tau,median_ns,pairings,exp_g1,exp_g2,exp_gt,mul_g1,mul_g2,"
         "mul_gt,hashes,bytes_key,bytes_ct\n";
  for (const auto& r : records) {
    const OpCounter& c = r.ops;
    out << r.algorithm << ',' << r.n << ',' << r.tau << ',' << r.median_ns << ','
        << c.pairings << ',' << c.exp_g1 << ',' << c.exp_g2 << ',' << c.exp_gt << ','
        << c.mul_g1 << ',' << c.mul_g2 << ',' << c.mul_gt << ',' << c.hashes << ','
        << r.bytes_key << ',' << r.bytes_ct << '\n';
  }
}

std::vector<BenchRecord> records_for(const std::vector<BenchRecord>& records,
                                     const std::string& algorithm) {
  std::vector<BenchRecord> out;
  for (const auto& r : records) {
    if (r.algorithm == algorithm) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

std::vector<std::string> emit_plots(const std::vector<BenchRecord>& records,
                                    const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& a : plotted_algorithms()) {
    const auto recs = records_for(records, a);
    if (recs.empty()) continue;
    const std::string path = (std::filesystem::path(dir) / (a + ".svg")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_svg(out, a + ": median time vs N", recs);
    written.push_back(path);
  }
  return written;
}

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_line needs two or more paired samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double relative_spread(const std::vector<double>& ys) {
  if (ys.empty()) throw std::invalid_argument("relative_spread needs samples");
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*lo <= 0) throw std::invalid_argument("relative_spread needs positive samples");
  return (*hi - *lo) / *lo;
}

}  // namespace rfabe
