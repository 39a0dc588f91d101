#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "rfabe/codec.h"
#include "rfabe/kem.h"
#include "rfabe/revocation.h"
#include "rfabe/scheme.h"

namespace py = pybind11;

namespace rfabe {
namespace {

std::unique_ptr<RandomSource> make_rng(std::optional<std::uint64_t> seed) {
  if (seed) return std::make_unique<DeterministicRandom>(*seed, "rfabe-python");
  return std::make_unique<SystemRandom>();
}

py::bytes to_py(std::span<const std::uint8_t> b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}


MspPolicy policy_arg(const std::string& text) { return compile_policy(text); }

// Exceptions raised to Python.
PyObject* g_decrypt_error = nullptr;
PyObject* g_not_satisfied = nullptr;
PyObject* g_preverification = nullptr;
PyObject* g_integrity = nullptr;

GtElem require_ok(const DecryptOutcome& out) {
  switch (out.status) {
    case DecryptStatus::kOk:
      return *out.msg;
    case DecryptStatus::kNotSatisfied:
      PyErr_SetString(g_not_satisfied, "key attributes do not satisfy the policy");
      break;
    case DecryptStatus::kPreverificationFailure:
      PyErr_SetString(g_preverification, "checksum differs from the retained checksum");
      break;
    case DecryptStatus::kIntegrityFailure:
      PyErr_SetString(g_integrity, "recovered message does not match the checksum");
      break;
  }
  throw py::error_already_set();
}

template <typename T>
void add_codec(py::class_<T>& cls, T (*decode)(std::span<const std::uint8_t>)) {
  cls.def("to_bytes", [](const T& x) { return to_py(encode(x)); })
      .def("armor", [](const T& x) { return armor(encode(x)); })
      .def_static("from_bytes",
                  [decode](const py::bytes& b) {
                    const std::string raw(b);
                    return decode(as_bytes(raw));
                  })
      .def_static("from_armor", [decode](const std::string& text) {
        const Bytes raw = dearmor(text);
        return decode(raw);
      })
      .def(py::self == py::self);
}

}  // namespace
}  // namespace rfabe

PYBIND11_MODULE(_core, m) {
  using namespace rfabe;
  m.doc() = "Revocable attribute-based encryption with integrity checksums";

  static py::exception<DecodeError> decode_error(m, "DecodeError", PyExc_ValueError);
  static py::exception<ParseError> policy_error(m, "PolicyError", PyExc_ValueError);
  static py::exception<PayloadError> payload_error(m, "PayloadError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DecodeError& e) {
      decode_error(e.what());
    } catch (const ParseError& e) {
      policy_error((std::string(e.what()) + " at offset " + std::to_string(e.position())).c_str());
    } catch (const PayloadError& e) {
      payload_error(e.what());
    }
  });
  g_decrypt_error = PyErr_NewException("rfabe._core.DecryptError", PyExc_RuntimeError, nullptr);
  g_not_satisfied =
      PyErr_NewException("rfabe._core.NotSatisfiedError", g_decrypt_error, nullptr);
  g_preverification =
      PyErr_NewException("rfabe._core.PreverificationError", g_decrypt_error, nullptr);
  g_integrity = PyErr_NewException("rfabe._core.IntegrityError", g_decrypt_error, nullptr);
  m.attr("DecryptError") = py::handle(g_decrypt_error);
  m.attr("NotSatisfiedError") = py::handle(g_not_satisfied);
  m.attr("PreverificationError") = py::handle(g_preverification);
  m.attr("IntegrityError") = py::handle(g_integrity);
  static py::exception<void> auth_error(m, "AuthenticationError", PyExc_ValueError);

  py::class_<PublicParams> pp_cls(m, "PublicParams");
  add_codec(pp_cls, &decode_public_params);
  py::class_<MasterSecretKey> msk_cls(m, "MasterSecretKey");
  add_codec(msk_cls, &decode_master_secret_key);
  py::class_<SecretKey> sk_cls(m, "SecretKey");
  add_codec(sk_cls, &decode_secret_key);
  sk_cls.def_property_readonly("attributes", [](const SecretKey& sk) {
    auto a = sk.attributes();
    return std::vector<std::string>(a.begin(), a.end());
  });
  py::class_<Ciphertext> ct_cls(m, "Ciphertext");
  add_codec(ct_cls, &decode_ciphertext);
  ct_cls.def_property_readonly("checksum",
                               [](const Ciphertext& ct) { return to_py(ct.checksum.to_bytes()); })
      .def_property_readonly("revocation_depth",
                             [](const Ciphertext& ct) { return ct.revocation_depth; })
      .def_property_readonly("rows", [](const Ciphertext& ct) { return ct.policy.rows(); })
      .def_property_readonly("cols", [](const Ciphertext& ct) { return ct.policy.cols(); })
      .def_property_readonly("attributes",
                             [](const Ciphertext& ct) { return ct.policy.labels(); });
  py::class_<Delegation> dg_cls(m, "Delegation");
  add_codec(dg_cls, &decode_delegation);
  py::class_<OwnerState> state_cls(m, "OwnerState");
  add_codec(state_cls, &decode_owner_state);
  state_cls.def_property_readonly("revocation_depth",
                                  [](const OwnerState& s) { return s.revocation_depth; });

  m.def(
      "setup",
      [](std::optional<std::uint64_t> seed) {
        auto rng = make_rng(seed);
        auto out = setup(GroupEnv::bls12_381(), *rng);
        return py::make_tuple(out.pp, out.msk);
      },
      py::arg("seed") = py::none(),
      "Returns (public_params, master_secret_key). A seed makes the run "
      "deterministic and is insecure.");

  m.def(
      "keygen",
      [](const PublicParams& pp, const MasterSecretKey& msk,
         const std::vector<std::string>& attrs, std::optional<std::uint64_t> seed) {
        auto rng = make_rng(seed);
        return keygen(pp, msk, AttributeSet(attrs.begin(), attrs.end()), *rng);
      },
      py::arg("pp"), py::arg("msk"), py::arg("attributes"), py::arg("seed") = py::none());

  m.def(
      "encrypt",
      [](const PublicParams& pp, const std::string& policy, std::optional<std::uint64_t> seed) {
        auto rng = make_rng(seed);
        const KemResult kem = kem_wrap(pp, *rng);
        auto enc = encrypt(pp, policy_arg(policy), kem.msg, *rng);
        return py::make_tuple(enc.ct, enc.state, to_py(kem.session_key));
      },
      py::arg("pp"), py::arg("policy"), py::arg("seed") = py::none(),
      "Encapsulates a fresh 32-byte session key under `policy`. Returns "
      "(ciphertext, owner_state, session_key).");

  m.def(
      "decrypt",
      [](const PublicParams& pp, const SecretKey& sk, const Ciphertext& ct) {
        return to_py(kem_unwrap(require_ok(decrypt_or(pp, sk, ct))));
      },
      py::arg("pp"), py::arg("sk"), py::arg("ct"), "Returns the 32-byte session key.");

  m.def(
      "delegate",
      [](const PublicParams& pp, const OwnerState& state, const std::string& policy,
         std::optional<std::uint64_t> seed) {
        auto rng = make_rng(seed);
        auto res = delegate(pp, state, policy_arg(policy), *rng);
        return py::make_tuple(res.dg, res.next);
      },
      py::arg("pp"), py::arg("state"), py::arg("policy"), py::arg("seed") = py::none(),
      "Returns (delegation, next_owner_state).");

  m.def(
      "revoke",
      [](const PublicParams& pp, const Ciphertext& ct, const Delegation& dg,
         std::optional<std::uint64_t> seed) {
        auto rng = make_rng(seed);
        return revoke(pp, ct, dg, *rng).ct;
      },
      py::arg("pp"), py::arg("ct"), py::arg("dg"), py::arg("seed") = py::none());

  m.def(
      "decrypt_revoked",
      [](const PublicParams& pp, const SecretKey& sk, const py::bytes& checksum,
         const Ciphertext& ct) {
        const std::string raw(checksum);
        auto csum = G1Elem::from_bytes(as_bytes(raw));
        if (!csum) throw DecodeError(DecodeErrorCode::kBadPoint, "checksum is not a G1 point");
        return to_py(kem_unwrap(require_ok(decrypt_re(pp, sk, *csum, ct))));
      },
      py::arg("pp"), py::arg("sk"), py::arg("original_checksum"), py::arg("ct"));

  m.def("revocation_applied", &revocation_applied, py::arg("expected_state"), py::arg("ct"));

  m.def(
      "policy_info",
      [](const std::string& policy) {
        const MspPolicy p = policy_arg(policy);
        py::dict d;
        d["n1"] = p.rows();
        d["n2"] = p.cols();
        d["tau"] = p.max_reuse();
        return d;
      },
      py::arg("policy"));

  m.def(
      "seal",
      [](const py::bytes& key, const py::bytes& data, std::optional<std::uint64_t> seed) {
        const std::string k(key);
        if (k.size() != 32) throw std::invalid_argument("session key must be 32 bytes");
        SessionKey sk;
        std::copy(k.begin(), k.end(), sk.begin());
        auto rng = make_rng(seed);
        const std::string plain(data);
        return to_py(seal_payload(sk, as_bytes(plain), *rng));
      },
      py::arg("key"), py::arg("data"), py::arg("seed") = py::none());

  m.def(
      "open",
      [](const py::bytes& key, const py::bytes& sealed) {
        const std::string k(key);
        if (k.size() != 32) throw std::invalid_argument("session key must be 32 bytes");
        SessionKey sk;
        std::copy(k.begin(), k.end(), sk.begin());
        const std::string raw(sealed);
        auto plain = open_payload(sk, as_bytes(raw));
        if (!plain) {
          PyErr_SetString(auth_error.ptr(), "payload authentication failed");
          throw py::error_already_set();
        }
        return to_py(*plain);
      },
      py::arg("key"), py::arg("sealed"));
}
