#include "rfabe/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>

#include "rfabe/bench.h"
#include "rfabe/codec.h"
#include "rfabe/kem.h"
#include "rfabe/revocation.h"
#include "rfabe/scheme.h"

namespace rfabe {
namespace {

namespace fs = std::filesystem;

// A failure tied to one processing stage; becomes one diagnostic line.
class StageError : public std::runtime_error {
 public:
  StageError(ExitCode code, std::string stage, const std::string& what)
      : std::runtime_error(what), code_(code), stage_(std::move(stage)) {}
  ExitCode code() const { return code_; }
  const std::string& stage() const { return stage_; }

 private:
  ExitCode code_;
  std::string stage_;
};

struct Options {
  std::string pp, msk, sk, ct, dg, state, state_out, csum, payload, in, out, plots;
  std::string policy, attrs, curve = "bls12-381", grid;
  std::uint64_t seed = 0;
  bool insecure_deterministic = false;
  int reps = 50;
};

Bytes read_file(const std::string& path, const std::string& stage) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StageError(kExitIo, stage, "cannot read " + path);
  return Bytes(std::istreambuf_iterator<char>(f), {});
}

// Writes through a temporary file so a failed run never leaves a partial
// output behind.
void write_file(const std::string& path, std::span<const std::uint8_t> data,
                const std::string& stage) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw StageError(kExitIo, stage, "cannot write " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) throw StageError(kExitIo, stage, "cannot write " + path);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StageError(kExitIo, stage, "cannot write " + path + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text, const std::string& stage) {
  write_file(path, as_bytes(text), stage);
}

Bytes read_armored(const std::string& path, const std::string& stage) {
  const Bytes raw = read_file(path, stage);
  try {
    return dearmor(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
  } catch (const DecodeError& e) {
    throw StageError(kExitIo, stage, path + ": " + e.what());
  }
}

template <typename T>
T decode_file(const std::string& path, const std::string& stage,
              T (*decode)(std::span<const std::uint8_t>)) {
  const Bytes bytes = read_armored(path, stage);
  try {
    return decode(bytes);
  } catch (const DecodeError& e) {
    throw StageError(kExitIo, stage, path + ": " + e.what());
  }
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

G1Elem read_csum(const std::string& path) {
  const Bytes raw = read_file(path, "csum");
  std::string hex;
  for (auto c : raw) {
    if (!std::isspace(c)) hex.push_back(static_cast<char>(c));
  }
  Bytes bytes;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    const auto hi = std::string("0123456789abcdef").find(std::tolower(hex[i]));
    const auto lo = std::string("0123456789abcdef").find(std::tolower(hex[i + 1]));
    if (hi == std::string::npos || lo == std::string::npos) break;
    bytes.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  if (hex.size() != 2 * G1Elem::kBytes || bytes.size() != G1Elem::kBytes) {
    throw StageError(kExitIo, "csum", path + ": expected " +
                                          std::to_string(2 * G1Elem::kBytes) +
                                          " hex digits");
  }
  auto p = G1Elem::from_bytes(bytes);
  if (!p) throw StageError(kExitIo, "csum", path + ": not a valid G1 point");
  return *p;
}

void write_csum(const std::string& path, const G1Elem& csum) {
  write_text(path, to_hex(csum.to_bytes()) + "\n", "csum");
}

AttributeSet parse_attrs(const std::string& text) {
  AttributeSet out;
  std::string item;
  for (char c : text + " ") {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!item.empty()) {
        if (!is_valid_attribute(item)) {
          throw StageError(kExitUsage, "attrs", "invalid attribute '" + item + "'");
        }
        out.insert(item);
        item.clear();
      }
    } else {
      item.push_back(c);
    }
  }
  if (out.empty()) throw StageError(kExitUsage, "attrs", "empty attribute set");
  return out;
}

MspPolicy parse_policy_arg(const std::string& text) {
  try {
    return compile_policy(text);
  } catch (const ParseError& e) {
    throw StageError(kExitUsage, "policy",
                     std::string(e.what()) + " at offset " + std::to_string(e.position()));
  }
}

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n <= 0) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw StageError(kExitUsage, "grid", "bad grid entry '" + item + "'");
    }
  }
  if (out.empty()) throw StageError(kExitUsage, "grid", "empty grid");
  return out;
}

class Tool {
 public:
  Tool(const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err) {}

  std::unique_ptr<RandomSource> rng() const {
    if (opt_.insecure_deterministic) {
      err_ << "rfabe: warning: deterministic randomness; outputs are insecure\n";
      return std::make_unique<DeterministicRandom>(opt_.seed, "rfabe-cli");
    }
    if (opt_.seed != 0) {
      err_ << "rfabe: warning: --seed ignored without --insecure-deterministic\n";
    }
    return std::make_unique<SystemRandom>();
  }

  PublicParams pp() const {
    PublicParams pp = decode_file(opt_.pp, "pp", &decode_public_params);
    if (pp.env != &group()) {
      throw StageError(kExitUsage, "pp", "public parameters use a different curve");
    }
    return pp;
  }

  const GroupEnv& group() const {
    try {
      return GroupEnv::by_name(opt_.curve);
    } catch (const std::invalid_argument& e) {
      throw StageError(kExitUsage, "curve", e.what());
    }
  }

  void emit(const std::string& path, const Bytes& envelope, const std::string& stage) const {
    write_text(path, armor(envelope), stage);
  }

  int ac_setup() {
    auto r = rng();
    const auto res = setup(group(), *r);
    emit(opt_.pp, encode(res.pp), "setup");
    emit(opt_.msk, encode(res.msk), "setup");
    out_ << "wrote " << opt_.pp << " and " << opt_.msk << "\n";
    return kExitOk;
  }

  int ac_keygen() {
    const PublicParams params = pp();
    const MasterSecretKey msk = decode_file(opt_.msk, "msk", &decode_master_secret_key);
    const AttributeSet attrs = parse_attrs(opt_.attrs);
    auto r = rng();
    emit(opt_.out, encode(keygen(params, msk, attrs, *r)), "keygen");
    out_ << "wrote key for " << attrs.size() << " attributes to " << opt_.out << "\n";
    return kExitOk;
  }

  int do_encrypt() {
    const PublicParams params = pp();
    const MspPolicy policy = parse_policy_arg(opt_.policy);
    auto r = rng();
    const KemResult kem = kem_wrap(params, *r);
    const EncryptResult enc = encrypt(params, policy, kem.msg, *r);
    if (!opt_.in.empty()) {
      const Bytes plain = read_file(opt_.in, "payload");
      write_file(opt_.payload, seal_payload(kem.session_key, plain, *r), "payload");
    }
    emit(opt_.out, encode(enc.ct), "encrypt");
    if (!opt_.state_out.empty()) emit(opt_.state_out, encode(enc.state), "encrypt");
    if (!opt_.csum.empty()) write_csum(opt_.csum, enc.ct.checksum);
    out_ << "wrote ciphertext to " << opt_.out << "\n";
    return kExitOk;
  }

  int do_delegate() {
    const PublicParams params = pp();
    const OwnerState state = decode_file(opt_.state, "state", &decode_owner_state);
    const MspPolicy added = parse_policy_arg(opt_.policy);
    auto r = rng();
    DelegateResult res = [&] {
      try {
        return delegate(params, state, added, *r);
      } catch (const std::invalid_argument& e) {
        throw StageError(kExitFailure, "delegate", e.what());
      }
    }();
    emit(opt_.out, encode(res.dg), "delegate");
    emit(opt_.state_out, encode(res.next), "delegate");
    out_ << "wrote delegation to " << opt_.out << "\n";
    return kExitOk;
  }

  int cs_revoke() {
    const PublicParams params = pp();
    const Ciphertext ct = decode_file(opt_.ct, "ct", &decode_ciphertext);
    const Delegation dg = decode_file(opt_.dg, "dg", &decode_delegation);
    auto r = rng();
    RevocationResult res = [&] {
      try {
        return revoke(params, ct, dg, *r);
      } catch (const std::invalid_argument& e) {
        throw StageError(kExitFailure, "revoke", e.what());
      }
    }();
    emit(opt_.out, encode(res.ct), "revoke");
    out_ << "applied policy n1=" << res.applied_policy.rows()
         << " n2=" << res.applied_policy.cols() << " tau=" << res.applied_policy.max_reuse()
         << " depth=" << res.ct.revocation_depth << "\n";
    return kExitOk;
  }

  int du_decrypt(bool revoked) {
    const PublicParams params = pp();
    const SecretKey sk = decode_file(opt_.sk, "sk", &decode_secret_key);
    const Ciphertext ct = decode_file(opt_.ct, "ct", &decode_ciphertext);
    std::optional<G1Elem> retained;
    if (revoked) retained = read_csum(opt_.csum);

    DecryptOutcome result = [&] {
      try {
        return revoked ? decrypt_re(params, sk, *retained, ct) : decrypt_or(params, sk, ct);
      } catch (const std::invalid_argument& e) {
        throw StageError(kExitIo, "ct", e.what());
      }
    }();
    switch (result.status) {
      case DecryptStatus::kOk:
        break;
      case DecryptStatus::kNotSatisfied:
        throw StageError(kExitNotSatisfied, "policy",
                         "key attributes do not satisfy the ciphertext policy");
      case DecryptStatus::kPreverificationFailure:
        throw StageError(kExitPreverification, "preverify",
                         "ciphertext checksum differs from the retained checksum");
      case DecryptStatus::kIntegrityFailure:
        throw StageError(kExitIntegrity, "integrity",
                         "recovered message does not match the checksum");
    }
    if (!revoked && !opt_.csum.empty()) write_csum(opt_.csum, ct.checksum);

    if (!opt_.payload.empty()) {
      const Bytes sealed = read_file(opt_.payload, "payload");
      std::optional<Bytes> plain;
      try {
        plain = open_payload(kem_unwrap(*result.msg), sealed);
      } catch (const PayloadError& e) {
        throw StageError(kExitIo, "payload", e.what());
      }
      if (!plain) {
        throw StageError(kExitPayloadAuth, "payload", "payload authentication failed");
      }
      write_file(opt_.out, *plain, "payload");
      out_ << "decrypted payload to " << opt_.out << "\n";
    } else {
      out_ << "ok\n";
    }
    return kExitOk;
  }

  int policy_check() {
    const MspPolicy policy = parse_policy_arg(opt_.policy);
    out_ << "n1=" << policy.rows() << " n2=" << policy.cols() << " tau=" << policy.max_reuse()
         << "\n";
    return kExitOk;
  }

  int bench() {
    BenchConfig config;
    if (!opt_.grid.empty()) config.grid = parse_grid(opt_.grid);
    config.repetitions = opt_.reps;
    if (opt_.seed != 0) config.seed = opt_.seed;
    std::vector<BenchRecord> records;
    try {
      records = run_suite(config, &err_);
    } catch (const std::invalid_argument& e) {
      throw StageError(kExitUsage, "bench", e.what());
    }
    std::ostringstream csv;
    write_csv(csv, records);
    if (opt_.out.empty()) {
      out_ << csv.str();
    } else {
      write_text(opt_.out, csv.str(), "bench");
    }
    if (!opt_.plots.empty()) {
      for (const auto& path : emit_plots(records, opt_.plots)) out_ << "wrote " << path << "\n";
    }
    return kExitOk;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

// Refuses to overwrite any input of the same command.
void check_no_clobber(const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs) {
  for (const auto& o : outputs) {
    if (o.empty()) continue;
    for (const auto& i : inputs) {
      if (i.empty()) continue;
      std::error_code ec;
      const bool same = fs::exists(o, ec) && fs::exists(i, ec) && fs::equivalent(o, i, ec);
      if (same || o == i) {
        throw StageError(kExitUsage, "args", "output " + o + " would overwrite an input");
      }
    }
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Revocable attribute-based encryption with integrity checksums", "rfabe"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--curve", opt.curve, "Pairing curve")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Seed for deterministic randomness");
    cmd->add_flag("--insecure-deterministic", opt.insecure_deterministic,
                  "Honor --seed; never use for real keys");
  };

  auto* setup_cmd = app.add_subcommand("ac-setup", "Authority: generate pp and msk");
  setup_cmd->add_option("--pp", opt.pp, "Output public parameters")->required();
  setup_cmd->add_option("--msk", opt.msk, "Output master secret key")->required();
  common(setup_cmd);

  auto* keygen_cmd = app.add_subcommand("ac-keygen", "Authority: issue a user key");
  keygen_cmd->add_option("--pp", opt.pp)->required();
  keygen_cmd->add_option("--msk", opt.msk)->required();
  keygen_cmd->add_option("--attrs", opt.attrs, "Attributes, space or comma separated")
      ->required();
  keygen_cmd->add_option("--out", opt.out, "Output key")->required();
  common(keygen_cmd);

  auto* encrypt_cmd = app.add_subcommand("do-encrypt", "Owner: encrypt under a policy");
  encrypt_cmd->add_option("--pp", opt.pp)->required();
  encrypt_cmd->add_option("--policy", opt.policy, "Policy formula")->required();
  encrypt_cmd->add_option("--out", opt.out, "Output ciphertext")->required();
  auto* in_opt = encrypt_cmd->add_option("--in", opt.in, "Plaintext file to protect");
  auto* payload_opt =
      encrypt_cmd->add_option("--payload", opt.payload, "Output encrypted payload");
  in_opt->needs(payload_opt);
  payload_opt->needs(in_opt);
  encrypt_cmd->add_option("--state-out", opt.state_out, "Output owner state");
  encrypt_cmd->add_option("--csum", opt.csum, "Output checksum sidecar");
  common(encrypt_cmd);

  auto* delegate_cmd = app.add_subcommand("do-delegate", "Owner: delegate a revocation");
  delegate_cmd->add_option("--pp", opt.pp)->required();
  delegate_cmd->add_option("--state", opt.state, "Owner state")->required();
  delegate_cmd->add_option("--policy", opt.policy, "Policy to AND onto the ciphertext")
      ->required();
  delegate_cmd->add_option("--out", opt.out, "Output delegation")->required();
  delegate_cmd->add_option("--state-out", opt.state_out, "Output updated owner state")
      ->required();
  common(delegate_cmd);

  auto* revoke_cmd = app.add_subcommand("cs-revoke", "Cloud: apply a delegation");
  revoke_cmd->add_option("--pp", opt.pp)->required();
  revoke_cmd->add_option("--ct", opt.ct)->required();
  revoke_cmd->add_option("--dg", opt.dg)->required();
  revoke_cmd->add_option("--out", opt.out, "Output revoked ciphertext")->required();
  common(revoke_cmd);

  auto add_decrypt = [&](const char* name, const char* help, bool revoked) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--pp", opt.pp)->required();
    cmd->add_option("--sk", opt.sk)->required();
    cmd->add_option("--ct", opt.ct)->required();
    auto* csum = cmd->add_option(
        "--csum", opt.csum,
        revoked ? "Retained checksum sidecar" : "Output checksum sidecar for later use");
    if (revoked) csum->required();
    auto* payload = cmd->add_option("--payload", opt.payload, "Encrypted payload");
    auto* out_opt = cmd->add_option("--out", opt.out, "Output plaintext");
    payload->needs(out_opt);
    out_opt->needs(payload);
    common(cmd);
    return cmd;
  };
  auto* decrypt_cmd = add_decrypt("du-decrypt", "User: decrypt a ciphertext", false);
  auto* decrypt_re_cmd =
      add_decrypt("du-decrypt-revoked", "User: check and decrypt a revoked ciphertext", true);

  auto* check_cmd = app.add_subcommand("policy-check", "Compile a policy and print its size");
  check_cmd->add_option("--policy", opt.policy)->required();

  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark suite");
  bench_cmd->add_option("--out", opt.out, "Output CSV (stdout if omitted)");
  bench_cmd->add_option("--plots", opt.plots, "Directory for SVG plots");
  bench_cmd->add_option("--grid", opt.grid, "Comma separated sizes");
  bench_cmd->add_option("--reps", opt.reps, "Repetitions per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", opt.seed, "Benchmark seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Tool tool(opt, out, err);
  try {
    if (setup_cmd->parsed()) {
      if (opt.pp == opt.msk) throw StageError(kExitUsage, "args", "--pp and --msk must differ");
      return tool.ac_setup();
    }
    if (keygen_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.msk}, {opt.out});
      return tool.ac_keygen();
    }
    if (encrypt_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.in}, {opt.out, opt.payload, opt.state_out, opt.csum});
      return tool.do_encrypt();
    }
    if (delegate_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.state}, {opt.out, opt.state_out});
      return tool.do_delegate();
    }
    if (revoke_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.ct, opt.dg}, {opt.out});
      return tool.cs_revoke();
    }
    if (decrypt_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.sk, opt.ct, opt.payload}, {opt.out, opt.csum});
      return tool.du_decrypt(false);
    }
    if (decrypt_re_cmd->parsed()) {
      check_no_clobber({opt.pp, opt.sk, opt.ct, opt.payload, opt.csum}, {opt.out});
      return tool.du_decrypt(true);
    }
    if (check_cmd->parsed()) return tool.policy_check();
    if (bench_cmd->parsed()) return tool.bench();
  } catch (const StageError& e) {
    err << "rfabe: " << e.stage() << ": " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "rfabe: internal: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rfabe
