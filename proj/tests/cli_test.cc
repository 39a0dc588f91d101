#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rfabe/cli.h"
#include "rfabe/codec.h"

namespace rfabe {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& data) {
  std::ofstream f(p, std::ios::binary);
  f << data;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rfabe_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  RunResult run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd =
        std::string(RFABE_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  // ac-setup, one key per attribute set, do-encrypt with a payload.
  void pipeline(const std::string& policy) {
    ASSERT_EQ(run("ac-setup --pp " + path("pp") + " --msk " + path("msk")).code, 0);
    spit(path("plain.txt"), "attack at dawn\n");
    const auto enc = run("do-encrypt --pp " + path("pp") + " --policy '" + policy +
                         "' --out " + path("ct") + " --in " + path("plain.txt") +
                         " --payload " + path("payload") + " --state-out " + path("state") +
                         " --csum " + path("csum"));
    ASSERT_EQ(enc.code, 0) << enc.err;
  }

  int keygen(const std::string& attrs, const std::string& out) {
    return run("ac-keygen --pp " + path("pp") + " --msk " + path("msk") + " --attrs '" +
               attrs + "' --out " + path(out))
        .code;
  }

  RunResult decrypt(const std::string& sk, const std::string& ct) {
    return run("du-decrypt --pp " + path("pp") + " --sk " + path(sk) + " --ct " + path(ct) +
               " --payload " + path("payload") + " --out " + path("plain.out"));
  }

  RunResult decrypt_revoked(const std::string& sk, const std::string& ct,
                            const std::string& csum = "csum") {
    return run("du-decrypt-revoked --pp " + path("pp") + " --sk " + path(sk) + " --ct " +
               path(ct) + " --csum " + path(csum) + " --payload " + path("payload") +
               " --out " + path("plain.out"));
  }

  fs::path dir_;
};

TEST_F(CliTest, EndToEndRoundtrip) {
  pipeline("A AND B");
  ASSERT_EQ(keygen("A B", "sk"), 0);
  const auto res = decrypt("sk", "ct");
  ASSERT_EQ(res.code, kExitOk) << res.err;
  EXPECT_EQ(slurp(path("plain.out")), "attack at dawn\n");
  EXPECT_EQ(slurp(path("ct")).rfind("-----BEGIN RFAB-CT-----", 0), 0u);
  EXPECT_EQ(slurp(path("sk")).rfind("-----BEGIN RFAB-SK-----", 0), 0u);
}

TEST_F(CliTest, UnsatisfiedKeyExitsWithItsCode) {
  pipeline("A AND B");
  ASSERT_EQ(keygen("A", "sk"), 0);
  const auto res = decrypt("sk", "ct");
  EXPECT_EQ(res.code, kExitNotSatisfied);
  EXPECT_NE(res.err.find("rfabe: policy:"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("plain.out")));
}

TEST_F(CliTest, RevocationWorkflow) {
  pipeline("A AND B");
  ASSERT_EQ(keygen("A B", "sk_ab"), 0);
  ASSERT_EQ(keygen("A B C", "sk_abc"), 0);
  ASSERT_EQ(run("do-delegate --pp " + path("pp") + " --state " + path("state") +
                " --policy C --out " + path("dg") + " --state-out " + path("state2"))
                .code,
            0);
  const auto rev = run("cs-revoke --pp " + path("pp") + " --ct " + path("ct") + " --dg " +
                       path("dg") + " --out " + path("ct2"));
  ASSERT_EQ(rev.code, 0) << rev.err;
  EXPECT_NE(rev.out.find("n1=3"), std::string::npos);
  EXPECT_EQ(slurp(path("ct2")).rfind("-----BEGIN RFAB-CTREV-----", 0), 0u);

  EXPECT_EQ(decrypt_revoked("sk_ab", "ct2").code, kExitNotSatisfied);
  const auto ok = decrypt_revoked("sk_abc", "ct2");
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(slurp(path("plain.out")), "attack at dawn\n");

  // A second delegation chains from the updated state.
  ASSERT_EQ(run("do-delegate --pp " + path("pp") + " --state " + path("state2") +
                " --policy D --out " + path("dg2") + " --state-out " + path("state3"))
                .code,
            0);
  ASSERT_EQ(run("cs-revoke --pp " + path("pp") + " --ct " + path("ct2") + " --dg " +
                path("dg2") + " --out " + path("ct3"))
                .code,
            0);
  EXPECT_EQ(decrypt_revoked("sk_abc", "ct3").code, kExitNotSatisfied);
  ASSERT_EQ(keygen("A B C D", "sk_abcd"), 0);
  EXPECT_EQ(decrypt_revoked("sk_abcd", "ct3").code, kExitOk);

  // The old delegation does not fit the revoked ciphertext.
  EXPECT_EQ(run("cs-revoke --pp " + path("pp") + " --ct " + path("ct2") + " --dg " +
                path("dg") + " --out " + path("ct4"))
                .code,
            kExitFailure);
}

TEST_F(CliTest, DecryptWritesChecksumSidecar) {
  pipeline("A");
  ASSERT_EQ(keygen("A", "sk"), 0);
  ASSERT_EQ(run("du-decrypt --pp " + path("pp") + " --sk " + path("sk") + " --ct " +
                path("ct") + " --csum " + path("csum_du"))
                .code,
            0);
  EXPECT_EQ(slurp(path("csum_du")), slurp(path("csum")));
  EXPECT_EQ(slurp(path("csum")).size(), 97u);
}

TEST_F(CliTest, PreverificationFailure) {
  pipeline("A");
  ASSERT_EQ(keygen("A B", "sk"), 0);
  ASSERT_EQ(run("do-encrypt --pp " + path("pp") + " --policy A --out " + path("other") +
                " --csum " + path("other_csum"))
                .code,
            0);
  ASSERT_EQ(run("do-delegate --pp " + path("pp") + " --state " + path("state") +
                " --policy B --out " + path("dg") + " --state-out " + path("state2"))
                .code,
            0);
  ASSERT_EQ(run("cs-revoke --pp " + path("pp") + " --ct " + path("ct") + " --dg " +
                path("dg") + " --out " + path("ct2"))
                .code,
            0);
  const auto res = decrypt_revoked("sk", "ct2", "other_csum");
  EXPECT_EQ(res.code, kExitPreverification);
  EXPECT_NE(res.err.find("rfabe: preverify:"), std::string::npos);
}

TEST_F(CliTest, IntegrityFailure) {
  pipeline("A");
  ASSERT_EQ(keygen("A", "sk"), 0);
  ASSERT_EQ(run("do-encrypt --pp " + path("pp") + " --policy A --out " + path("other")).code,
            0);
  // Splice the other ciphertext's checksum into ours.
  Ciphertext ct = decode_ciphertext(dearmor(slurp(path("ct"))));
  ct.checksum = decode_ciphertext(dearmor(slurp(path("other")))).checksum;
  spit(path("spliced"), armor(encode(ct)));
  const auto res = decrypt("sk", "spliced");
  EXPECT_EQ(res.code, kExitIntegrity);
  EXPECT_NE(res.err.find("rfabe: integrity:"), std::string::npos);
}

TEST_F(CliTest, PayloadAuthFailure) {
  pipeline("A");
  ASSERT_EQ(keygen("A", "sk"), 0);
  std::string payload = slurp(path("payload"));
  payload[payload.size() - 20] ^= 1;
  spit(path("payload"), payload);
  EXPECT_EQ(decrypt("sk", "ct").code, kExitPayloadAuth);
  spit(path("payload"), "XXXX");
  EXPECT_EQ(decrypt("sk", "ct").code, kExitIo);
}

TEST_F(CliTest, PolicyCheck) {
  const auto res = run("policy-check --policy 'A AND (B OR A)'");
  EXPECT_EQ(res.code, 0);
  EXPECT_EQ(res.out, "n1=3 n2=2 tau=2\n");
  const auto bad = run("policy-check --policy 'A AND'");
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("offset 5"), std::string::npos);
}

TEST_F(CliTest, UsageAndIoErrors) {
  EXPECT_EQ(run("").code, kExitUsage);
  EXPECT_EQ(run("no-such-command").code, kExitUsage);
  EXPECT_EQ(run("ac-keygen --pp x").code, kExitUsage);
  EXPECT_EQ(run("ac-setup --pp " + path("pp") + " --msk " + path("msk") + " --curve nope")
                .code,
            kExitUsage);
  EXPECT_EQ(run("ac-keygen --pp " + path("missing") + " --msk " + path("missing2") +
                " --attrs A --out " + path("sk"))
                .code,
            kExitIo);
  spit(path("garbage"), "-----BEGIN RFAB-PP-----\nAAAA\n-----END RFAB-PP-----\n");
  EXPECT_EQ(run("ac-keygen --pp " + path("garbage") + " --msk " + path("garbage") +
                " --attrs A --out " + path("sk"))
                .code,
            kExitIo);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, InputsAreNeverOverwritten) {
  pipeline("A");
  const std::string before = slurp(path("ct"));
  EXPECT_EQ(run("ac-keygen --pp " + path("pp") + " --msk " + path("msk") + " --attrs A --out " +
                path("pp"))
                .code,
            kExitUsage);
  ASSERT_EQ(keygen("A", "sk"), 0);
  EXPECT_EQ(decrypt("sk", "ct").code, 0);
  EXPECT_EQ(slurp(path("ct")), before);
}

TEST_F(CliTest, SeedNeedsInsecureFlag) {
  const auto warned = run("ac-setup --pp " + path("pp1") + " --msk " + path("msk1") +
                          " --seed 5");
  EXPECT_EQ(warned.code, 0);
  EXPECT_NE(warned.err.find("--seed ignored"), std::string::npos);
  run("ac-setup --pp " + path("pp2") + " --msk " + path("msk2") + " --seed 5");
  EXPECT_NE(slurp(path("msk1")), slurp(path("msk2")));

  run("ac-setup --pp " + path("pp3") + " --msk " + path("msk3") +
      " --seed 5 --insecure-deterministic");
  const auto det = run("ac-setup --pp " + path("pp4") + " --msk " + path("msk4") +
                       " --seed 5 --insecure-deterministic");
  EXPECT_NE(det.err.find("insecure"), std::string::npos);
  EXPECT_EQ(slurp(path("msk3")), slurp(path("msk4")));
  EXPECT_EQ(slurp(path("pp3")), slurp(path("pp4")));
}

TEST_F(CliTest, BenchWritesCsvAndPlots) {
  const auto res = run("bench --grid 2,3 --reps 2 --out " + path("b.csv") + " --plots " +
                       path("plots"));
  ASSERT_EQ(res.code, 0) << res.err;
  const std::string csv = slurp(path("b.csv"));
  EXPECT_EQ(csv.rfind("algorithm,N,tau,median_ns,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 7 * 2);
  EXPECT_TRUE(fs::exists(path("plots/revoke.svg")));
  EXPECT_EQ(run("bench --grid 0").code, kExitUsage);
}

}  // namespace
}  // namespace rfabe
