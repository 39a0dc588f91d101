// Acceptance suite: prints one PASS/FAIL line per criterion, with indented
// detail lines, and exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "rfabe/bench.h"
#include "rfabe/codec.h"
#include "rfabe/op_counter.h"
#include "rfabe/revocation.h"
#include "rfabe/scheme.h"
#include "testing/test_util.h"

namespace rfabe {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

AttributeSet join(AttributeSet a, const AttributeSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void note(const std::string& line) { details.push_back(line); }
  void fail(const std::string& line) {
    pass = false;
    details.push_back(line);
  }
};

class Acceptance {
 public:
  Acceptance() : rng_(20240601, "rfabe-acceptance"), gen_(20240601) {
    auto out = setup(GroupEnv::bls12_381(), rng_);
    pp_ = out.pp;
    msk_ = out.msk;
  }

  const GroupEnv& env() const { return pp_.group(); }

  // 1. Randomized roundtrips and rejections.
  Verdict roundtrip() {
    Verdict v;
    const auto start = Clock::now();
    const auto pool = testing::attribute_pool("a", 12);
    int recovered = 0, rejected = 0;
    for (int i = 0; i < 200; ++i) {
      const PolicyAst ast = testing::random_formula_bounded(gen_, 4, 12, pool);
      const GtElem msg = env().random_gt(rng_);
      const auto enc = encrypt(pp_, compile_msp(ast), msg, rng_);
      const SecretKey good = keygen(pp_, msk_, testing::random_satisfying_set(gen_, ast), rng_);
      const DecryptOutcome out = decrypt_or(pp_, good, enc.ct);
      if (out.ok() && *out.msg == msg) {
        ++recovered;
      } else if (v.details.size() < 5) {
        v.fail("  roundtrip failed for " + ast.to_string());
      }
      AttributeSet miss = testing::near_miss_set(gen_, ast, pool);
      if (miss.empty()) miss.insert("outsider");
      const SecretKey bad = keygen(pp_, msk_, miss, rng_);
      const DecryptOutcome no = decrypt_or(pp_, bad, enc.ct);
      if (no.status == DecryptStatus::kNotSatisfied && !no.msg) {
        ++rejected;
      } else if (v.details.size() < 5) {
        v.fail("  non-satisfying key not rejected for " + ast.to_string());
      }
    }
    const double secs = seconds_since(start);
    if (recovered != 200 || rejected != 200) v.pass = false;
    if (secs >= 120) v.fail("  runtime over the 2 minute budget");
    v.note("  recovered " + std::to_string(recovered) + "/200, rejected " +
           std::to_string(rejected) + "/200 in " + fmt(secs) + " s");
    return v;
  }

  // 2. Revocation correctness with the algebraic identity check.
  Verdict revocation() {
    Verdict v;
    const auto base_pool = testing::attribute_pool("b", 8);
    const auto added_pool = testing::attribute_pool("n", 6);
    int full_ok = 0, partial_rejected = 0, identities = 0;
    for (int i = 0; i < 100; ++i) {
      const PolicyAst base = testing::random_formula_bounded(gen_, 3, 8, base_pool);
      const PolicyAst added = testing::random_formula_bounded(gen_, 3, 6, added_pool);
      const GtElem msg = env().random_gt(rng_);
      EncryptTrapdoor etd;
      const auto enc = encrypt(pp_, compile_msp(base), msg, rng_, &etd);
      const auto [dg, next] = delegate(pp_, enc.state, compile_msp(added), rng_);
      RevokeTrapdoor rtd;
      const auto res = revoke(pp_, enc.ct, dg, rng_, &rtd);

      const AttributeSet s = testing::random_satisfying_set(gen_, base);
      const AttributeSet s_added = testing::random_satisfying_set(gen_, added);
      KeygenTrapdoor ktd;
      const SecretKey full = keygen(pp_, msk_, join(s, s_added), rng_, &ktd);
      const DecryptOutcome ok = decrypt_re(pp_, full, enc.ct.checksum, res.ct);
      if (ok.ok() && *ok.msg == msg) ++full_ok;
      const SecretKey partial = keygen(pp_, msk_, s, rng_);
      if (decrypt_re(pp_, partial, enc.ct.checksum, res.ct).status ==
          DecryptStatus::kNotSatisfied) {
        ++partial_rejected;
      }
      const RevocationSecrets secrets{msk_.alpha, ktd.r, etd.s + rtd.s, next.reuse_exponents};
      if (check_revoked_decryption_identities(pp_, full, res.ct, secrets)) ++identities;
    }
    v.pass = full_ok == 100 && partial_rejected == 100 && identities == 100;
    v.note("  S and S~ recovered " + std::to_string(full_ok) + "/100, S alone rejected " +
           std::to_string(partial_rejected) + "/100, identities held " +
           std::to_string(identities) + "/100");
    return v;
  }

  // 3. Element counts and serialized sizes of keys and fresh ciphertexts.
  Verdict sizes() {
    Verdict v;
    for (int m : {1, 10, 50, 100}) {
      AttributeSet attrs;
      std::size_t names = 0;
      for (const auto& a : testing::attribute_pool("k", m)) {
        attrs.insert(a);
        names += 4 + a.size();
      }
      const SecretKey sk = keygen(pp_, msk_, attrs, rng_);
      const std::size_t g1 = 1 + sk.attribute_parts.size();
      const std::size_t bytes = encode(sk).size();
      const std::size_t framed = 6 + 4 + names + g1 * G1Elem::kBytes + G2Elem::kBytes;
      if (g1 != static_cast<std::size_t>(m) + 1 || bytes != framed) {
        v.fail("  key m=" + std::to_string(m) + ": " + std::to_string(g1) + " G1, " +
               std::to_string(bytes) + " bytes");
      }
    }
    int checked = 0;
    for (int n1 : {1, 10, 50, 100}) {
      for (int tau : {1, 2, 3}) {
        if (tau > n1) continue;  // a policy with n1 rows reuses at most n1 times
        std::string text;
        for (int i = 0; i < n1; ++i) {
          text += (i ? " AND " : "") + (i < tau ? std::string("r") : "c" + std::to_string(i));
        }
        const MspPolicy policy = compile_policy(text);
        const Ciphertext ct = encrypt(pp_, policy, env().random_gt(rng_), rng_).ct;
        const std::size_t g1 = ct.rows.size();
        const std::size_t g2 = 1 + ct.reuse_g2.size();
        std::size_t policy_bytes = 8 + policy.rows() * policy.cols() * Scalar::kBytes;
        for (const auto& label : policy.labels()) policy_bytes += 4 + label.size();
        // Envelope, policy, list counts, elements, the checksum, the depth.
        const std::size_t framed = 6 + policy_bytes + 4 + 4 + g1 * G1Elem::kBytes +
                                   g2 * G2Elem::kBytes + 2 * GtElem::kBytes +
                                   G1Elem::kBytes + 4;
        const std::size_t bytes = encode(ct).size();
        ++checked;
        if (g1 != static_cast<std::size_t>(n1) || g2 != static_cast<std::size_t>(tau) + 1 ||
            bytes != framed) {
          v.fail("  ct n1=" + std::to_string(n1) + " tau=" + std::to_string(tau) + ": " +
                 std::to_string(g1) + " G1, " + std::to_string(g2) + " G2, " +
                 std::to_string(bytes) + " bytes");
        }
      }
    }
    v.note("  4 key sizes and " + std::to_string(checked) +
           " ciphertext shapes; tau > n1 combinations do not exist; the checksum is one "
           "G1 element outside the table's ciphertext count");
    return v;
  }

  // 4. Operation counts against the cost table formulas.
  Verdict op_counts() {
    Verdict v;
    const auto records = run_suite(BenchConfig{.grid = {10, 50, 100}, .repetitions = 1,
                                               .seed = 4});
    int matched = 0;
    for (const auto& r : records) {
      OpCounter got = r.ops;
      got.samples = 0;
      const OpCounter want = table_formula(r.algorithm, r.n);
      if (got == want) {
        ++matched;
      } else {
        v.fail("  " + r.algorithm + " N=" + std::to_string(r.n) + ": measured " +
               got.to_string() + " table " + want.to_string());
      }
      if ((r.algorithm == "decrypt_or" || r.algorithm == "decrypt_re") && r.ops.pairings != 3) {
        v.fail("  " + r.algorithm + " used " + std::to_string(r.ops.pairings) + " pairings");
      }
    }
    v.note("  " + std::to_string(matched) + "/" + std::to_string(records.size()) +
           " (algorithm, N) points match; decryption pairings = 3 at tau = 1");
    return v;
  }

  // 5. Tamper trials on fresh and revoked ciphertexts.
  Verdict integrity() {
    Verdict v;
    const auto base_pool = testing::attribute_pool("b", 6);
    const auto added_pool = testing::attribute_pool("n", 4);
    int detected = 0, harmless = 0, leaked = 0, lazy = 0, lazy_caught = 0;
    std::map<std::string, int> by_component;
    for (int t = 0; t < 500; ++t) {
      const PolicyAst base = testing::random_formula_bounded(gen_, 3, 6, base_pool);
      const PolicyAst added = testing::random_formula_bounded(gen_, 2, 4, added_pool);
      const GtElem msg = env().random_gt(rng_);
      const auto enc = encrypt(pp_, compile_msp(base), msg, rng_);
      const AttributeSet s = testing::random_satisfying_set(gen_, base);

      if (t % 10 == 9) {
        // Lazy cloud: hands back the untouched ciphertext.
        ++lazy;
        const auto [dg, next] = delegate(pp_, enc.state, compile_msp(added), rng_);
        if (!revocation_applied(next, enc.ct)) ++lazy_caught;
        continue;
      }

      const bool revoked = t % 2 == 1;
      Ciphertext ct = enc.ct;
      AttributeSet attrs = s;
      if (revoked) {
        const auto [dg, next] = delegate(pp_, enc.state, compile_msp(added), rng_);
        ct = revoke(pp_, enc.ct, dg, rng_).ct;
        attrs = join(s, testing::random_satisfying_set(gen_, added));
      }
      const std::string component = substitute(ct, enc.ct.checksum);
      ++by_component[component];
      const SecretKey sk = keygen(pp_, msk_, attrs, rng_);
      const DecryptOutcome out =
          revoked ? decrypt_re(pp_, sk, enc.ct.checksum, ct) : decrypt_or(pp_, sk, ct);
      if (!out.ok()) {
        ++detected;
      } else if (*out.msg == msg) {
        ++harmless;  // the substituted part is not on this key's decryption path
      } else {
        ++leaked;
        v.fail("  undetected wrong plaintext after substituting " + component);
      }
    }
    if (lazy_caught != lazy) v.fail("  lazy-cloud no-op not noticed");
    v.pass = leaked == 0 && lazy_caught == lazy;
    std::ostringstream mix;
    for (const auto& [c, n] : by_component) mix << ' ' << c << '=' << n;
    v.note("  " + std::to_string(detected) + " detected, " + std::to_string(harmless) +
           " unchanged plaintext, " + std::to_string(leaked) + " wrong plaintext; lazy cloud " +
           std::to_string(lazy_caught) + "/" + std::to_string(lazy) + " caught");
    v.note("  substitutions:" + mix.str());
    return v;
  }

  // 6. AND composition is satisfied exactly when both parts are.
  Verdict composition() {
    Verdict v;
    const auto base_pool = testing::attribute_pool("b", 6);
    const auto added_pool = testing::attribute_pool("n", 6);
    std::vector<std::string> all = base_pool;
    all.insert(all.end(), added_pool.begin(), added_pool.end());
    int agree = 0, satisfied = 0;
    for (int i = 0; i < 500; ++i) {
      const MspPolicy base = compile_msp(testing::random_formula_bounded(gen_, 3, 6, base_pool));
      const MspPolicy added =
          compile_msp(testing::random_formula_bounded(gen_, 3, 6, added_pool));
      AttributeSet subset;
      for (const auto& a : all) {
        if (gen_() % 2) subset.insert(a);
      }
      const bool composed = satisfies(and_compose(base, added), subset);
      const bool parts = satisfies(base, subset) && satisfies(added, subset);
      if (composed == parts && check_and_composition(base, added, subset)) ++agree;
      if (composed) ++satisfied;
    }
    v.pass = agree == 500;
    v.note("  " + std::to_string(agree) + "/500 agree (" + std::to_string(satisfied) +
           " satisfying, " + std::to_string(500 - satisfied) + " not)");
    return v;
  }

  // 7. Revoked users and late joiners.
  Verdict forward_backward() {
    Verdict v;
    const auto base_pool = testing::attribute_pool("b", 6);
    const auto added_pool = testing::attribute_pool("n", 5);
    int leaks = 0, sanity = 0;
    for (int i = 0; i < 100; ++i) {
      const PolicyAst base = testing::random_formula_bounded(gen_, 3, 6, base_pool);
      const PolicyAst added = testing::random_formula_bounded(gen_, 3, 5, added_pool);
      const GtElem msg = env().random_gt(rng_);
      const auto enc = encrypt(pp_, compile_msp(base), msg, rng_);
      // Satisfies A, and holds all but one needed attribute of A~.
      const AttributeSet s = join(testing::random_satisfying_set(gen_, base),
                                  testing::near_miss_set(gen_, added, added_pool));
      const SecretKey before = keygen(pp_, msk_, s, rng_);
      const DecryptOutcome pre = decrypt_or(pp_, before, enc.ct);
      if (pre.ok() && *pre.msg == msg) ++sanity;

      const auto [dg, next] = delegate(pp_, enc.state, compile_msp(added), rng_);
      const Ciphertext revoked = revoke(pp_, enc.ct, dg, rng_).ct;
      const SecretKey after = keygen(pp_, msk_, s, rng_);
      const Ciphertext fresh = encrypt(pp_, next.policy, env().random_gt(rng_), rng_).ct;
      for (const SecretKey* sk : {&before, &after}) {
        for (const DecryptOutcome& out :
             {decrypt_re(pp_, *sk, enc.ct.checksum, revoked), decrypt_or(pp_, *sk, fresh)}) {
          if (out.status != DecryptStatus::kNotSatisfied || out.msg) ++leaks;
        }
      }
    }
    v.pass = leaks == 0 && sanity == 100;
    v.note("  " + std::to_string(leaks) + " leaks over 100 trials x 4 attempts; keys worked "
           "before revocation in " + std::to_string(sanity) + "/100");
    return v;
  }

  // 8. Shapes of the timing curves.
  Verdict scaling() {
    Verdict v;
    BenchConfig config;
    config.seed = 8;
    config.algorithms = plotted_algorithms();
    const auto start = Clock::now();
    const auto records = run_suite(config);
    const std::string dir = "acceptance_bench";
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir + "/results.csv");
    write_csv(csv, records);
    emit_plots(records, dir);

    auto curve = [&](const std::string& a) {
      std::vector<double> xs, ys;
      for (const auto& r : records_for(records, a)) {
        xs.push_back(r.n);
        ys.push_back(r.median_ns / 1e6);
      }
      return std::pair{xs, ys};
    };
    std::map<std::string, double> slope;
    for (const std::string a : {"keygen", "encrypt", "revoke"}) {
      const auto [xs, ys] = curve(a);
      const LinearFit fit = fit_line(xs, ys);
      slope[a] = fit.slope;
      const std::string line = "  " + a + ": slope " + fmt(fit.slope * 1000) +
                               " us/attr, R^2 " + fmt(fit.r2, 4);
      if (fit.r2 >= 0.9) {
        v.note(line);
      } else {
        v.fail(line + " (needs >= 0.9)");
      }
    }
    for (const std::string a : {"decrypt_or", "decrypt_re"}) {
      const double spread = relative_spread(curve(a).second);
      const std::string line = "  " + a + ": spread " + fmt(spread * 100, 1) + "%";
      if (spread < 0.25) {
        v.note(line);
      } else {
        v.fail(line + " (needs < 25%)");
      }
    }
    const double ratio = slope["revoke"] / slope["encrypt"];
    const std::string line = "  revoke/encrypt slope ratio " + fmt(ratio, 3);
    if (ratio >= 1.5 && ratio <= 2.5) {
      v.note(line);
    } else {
      v.fail(line + " (needs 1.5..2.5)");
    }
    v.note("  grid 10..100, 50 repetitions, " + fmt(seconds_since(start), 1) + " s; csv and "
           "plots in " + std::filesystem::absolute(dir).string());
    return v;
  }

 private:
  static std::string fmt(double x, int precision = 2) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(precision);
    out << x;
    return out.str();
  }

  // Counts from the cost table for AND chains (tau = 1). N is the size of
  // the original chain; delegate, revoke and decrypt_re add a second chain
  // of N attributes. The table writes the delegation's G2 cost as "tau
  // Hash"; nothing is hashed into G2, so it is read as tau exponentiations.
  static OpCounter table_formula(const std::string& algorithm, std::uint64_t n) {
    OpCounter c;
    const std::uint64_t tau = 1;
    if (algorithm == "setup") {
      c.pairings = 1;
    } else if (algorithm == "keygen") {
      c.mul_g1 = 1;
      c.exp_g1 = n + 2;
      c.hashes = n + 1;
      c.exp_g2 = 1;
    } else if (algorithm == "encrypt") {
      c.mul_g1 = n + 1;
      c.exp_g1 = 2 * n + 2;
      c.hashes = n + 3;
      c.exp_g2 = tau + 1;
      c.exp_gt = 1;
      c.mul_gt = 2;
    } else if (algorithm == "decrypt_or" || algorithm == "decrypt_re") {
      const std::uint64_t used = algorithm == "decrypt_or" ? n : 2 * n;
      c.mul_g1 = 2 * used - 1;
      c.exp_g1 = 2;
      c.hashes = 2;
      c.pairings = tau + 2;
      c.mul_gt = tau + 3;
    } else if (algorithm == "delegate") {
      c.exp_g1 = n;
      c.hashes = n;
      c.exp_g2 = tau;
    } else if (algorithm == "revoke") {
      const std::uint64_t rows = 2 * n;
      c.mul_g1 = rows + 2;
      c.exp_g1 = 2 * rows;
      c.hashes = rows + 1;
      c.exp_g2 = 1;
      c.mul_g2 = 3;
      c.exp_gt = 1;
      c.mul_gt = 2;
    }
    return c;
  }

  // Replaces one group element of `ct` with a different valid one and
  // names the component.
  std::string substitute(Ciphertext& ct, const G1Elem& original_checksum) {
    const std::size_t n_rows = ct.rows.size(), n_reuse = ct.reuse_g2.size();
    const std::size_t pick = gen_() % (n_rows + n_reuse + 4);
    if (pick < n_rows) {
      ct.rows[pick] = env().random_g1(rng_);
      return "row";
    }
    if (pick < n_rows + n_reuse) {
      ct.reuse_g2[pick - n_rows] = env().random_g2(rng_);
      return "reuse";
    }
    switch (pick - n_rows - n_reuse) {
      case 0:
        ct.share_g2 = env().random_g2(rng_);
        return "share";
      case 1:
        ct.blinded_msg = ct.blinded_msg * env().random_gt(rng_);
        return "blinded_msg";
      case 2:
        ct.blinded_companion = ct.blinded_companion * env().random_gt(rng_);
        return "blinded_companion";
      default: {
        // Another ciphertext's checksum, never the original one.
        G1Elem other;
        do {
          other = encrypt(pp_, compile_policy("x"), env().random_gt(rng_), rng_).ct.checksum;
        } while (other == original_checksum);
        ct.checksum = other;
        return "checksum";
      }
    }
  }

  DeterministicRandom rng_;
  std::mt19937_64 gen_;
  PublicParams pp_;
  MasterSecretKey msk_;
};

}  // namespace
}  // namespace rfabe

int main() {
  using rfabe::Verdict;
  rfabe::Acceptance suite;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"randomized roundtrip and rejection", [&] { return suite.roundtrip(); }},
      {"revocation correctness and identities", [&] { return suite.revocation(); }},
      {"key and ciphertext size audit", [&] { return suite.sizes(); }},
      {"operation-count audit", [&] { return suite.op_counts(); }},
      {"integrity under tampering", [&] { return suite.integrity(); }},
      {"AND-composition satisfiability", [&] { return suite.composition(); }},
      {"forward and backward security behavior", [&] { return suite.forward_backward(); }},
      {"scaling shapes", [&] { return suite.scaling(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Verdict v = criteria[i].second();
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
              << criteria[i].first << "\n";
    for (const auto& line : v.details) std::cout << line << "\n";
    std::cout.flush();
    if (!v.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
