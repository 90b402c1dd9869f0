// cdsim: command-line surface for the certified-deletion simulator.
//
// Exit codes: 0 success, 1 verification/decryption failure, 2 usage or
// input-format error.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "cdsim/bytes.hpp"
#include "cdsim/cc_pke_cd.hpp"
#include "cdsim/experiment.hpp"
#include "cdsim/ntcf.hpp"
#include "cdsim/pke_cd.hpp"
#include "cdsim/serialize.hpp"

namespace {

using namespace cdsim;

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CDSIM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("CDSIM_SEED", "must be an unsigned integer");
    }
  }
  return 1;
}

primitives::PkeSchemeId parse_base(const std::string& name) {
  if (name == "test-stub") return primitives::PkeSchemeId::TestStub;
  if (name == "regev-ref") return primitives::PkeSchemeId::RegevRef;
  throw CLI::ValidationError("--base", "must be test-stub or regev-ref");
}

struct KeygenOptions {
  std::string scheme = "pke-cd";
  std::string output = "key";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t message_bits = 4;
  int n = 4;
  int w = 8;
  int lambda = 128;
  std::string base = "test-stub";
  int level = 128;
};

int do_keygen(const KeygenOptions& opt) {
  Rng rng(opt.seed);
  if (opt.scheme == "pke-cd") {
    pkecd::Params params;
    params.message_bits = opt.message_bits;
    params.base = parse_base(opt.base);
    params.security_level = opt.level;
    const auto keys = pkecd::pkecd_keygen(params, rng);
    serialize::write_file(opt.output + ".pk", serialize::encode_pkecd_public(params, keys.pk));
    serialize::write_file(opt.output + ".sk", serialize::encode_pkecd_secret(params, keys.sk));
    std::cout << "wrote " << opt.output << ".pk and " << opt.output << ".sk\n";
    return kExitSuccess;
  }
  if (opt.scheme == "reusable-ske-cd") {
    pkecd::SkecdParams params;
    params.message_bits = opt.message_bits;
    const auto key = pkecd::skecd_keygen(params, rng);
    serialize::write_file(opt.output + ".sk", serialize::encode_skecd_key(key));
    std::cout << "wrote " << opt.output << ".sk\n";
    return kExitSuccess;
  }
  if (opt.scheme == "cc-pke-cd") {
    cccd::Params params;
    params.n = opt.n;
    params.preimage_bits = opt.w;
    params.lambda_bits = opt.lambda;
    params.message_bits = opt.message_bits;
    params.base = parse_base(opt.base);
    params.security_level = opt.level;
    const auto keys = cccd::cc_keygen(params, rng);
    serialize::write_file(opt.output + ".pk", serialize::encode_cc_public(keys));
    serialize::write_file(opt.output + ".sk", serialize::encode_cc_secret(keys));
    std::cout << "wrote " << opt.output << ".pk and " << opt.output << ".sk\n";
    return kExitSuccess;
  }
  throw CLI::ValidationError("--scheme", "unknown scheme " + opt.scheme);
}

struct EncryptOptions {
  std::string key_path;
  std::string message;
  std::string output = "ct";
  std::uint64_t seed = 0;
  bool socket = false;
};

int do_encrypt(const EncryptOptions& opt) {
  const Bytes key_data = serialize::read_file(opt.key_path);
  const auto envelope = serialize::decode_envelope(key_data);
  const BitString message = parse_bits(opt.message);
  Rng rng(opt.seed);

  if (envelope.type == serialize::FileType::PkecdPublicKey) {
    auto [params, pk] = serialize::decode_pkecd_public(key_data);
    auto [vk, ct] = pkecd::pkecd_enc(params, pk, message, rng);
    serialize::write_file(opt.output + ".ct", serialize::encode_pkecd_ciphertext(ct));
    serialize::write_file(opt.output + ".vk", serialize::encode_pkecd_verification_key(vk));
    std::cout << "wrote " << opt.output << ".ct and " << opt.output << ".vk\n";
    return kExitSuccess;
  }
  if (envelope.type == serialize::FileType::SkecdKey) {
    const auto key = serialize::decode_skecd_key(key_data);
    auto [vk, ct] = pkecd::skecd_enc(key, message, rng);
    serialize::write_file(opt.output + ".ct", serialize::encode_pkecd_ciphertext(ct));
    serialize::write_file(opt.output + ".vk", serialize::encode_pkecd_verification_key(vk));
    std::cout << "wrote " << opt.output << ".ct and " << opt.output << ".vk\n";
    return kExitSuccess;
  }
  if (envelope.type == serialize::FileType::CcPublicKey) {
    auto [params, nce_pk, ow_pk] = serialize::decode_cc_public(key_data);
    const cccd::PublicKeyView pk{params, &nce_pk, &ow_pk};
    const auto result = cccd::run_interactive_encryption(
        pk, message, derive_seed(opt.seed, 1), derive_seed(opt.seed, 2),
        opt.socket ? cccd::TransportKind::LoopbackTcp : cccd::TransportKind::InProcess);
    if (result.aborted) {
      std::cerr << "interactive encryption aborted\n";
      return kExitFailure;
    }
    serialize::write_file(opt.output + ".ct", serialize::encode_cc_ciphertext(*result.ct));
    serialize::write_file(opt.output + ".vk", serialize::encode_cc_verification_key(*result.vk));
    serialize::write_file(opt.output + ".transcript",
                          serialize::encode_transcript(result.transcript));
    std::cout << "wrote " << opt.output << ".ct, " << opt.output << ".vk, " << opt.output
              << ".transcript\n";
    return kExitSuccess;
  }
  throw DecodeError("key file is not an encryption key");
}

struct KeyedCtOptions {
  std::string key_path;
  std::string ct_path;
  std::uint64_t seed = 0;
  std::string output;
};

int do_decrypt(const KeyedCtOptions& opt) {
  const Bytes ct_data = serialize::read_file(opt.ct_path);
  const auto envelope = serialize::decode_envelope(ct_data);
  Rng rng(opt.seed);

  if (envelope.type == serialize::FileType::PkecdCiphertext) {
    auto ct = serialize::decode_pkecd_ciphertext(ct_data);
    const Bytes key_data = serialize::read_file(opt.key_path);
    const auto key_env = serialize::decode_envelope(key_data);
    std::optional<BitString> message;
    if (key_env.type == serialize::FileType::PkecdSecretKey) {
      auto [params, sk] = serialize::decode_pkecd_secret(key_data);
      message = pkecd::pkecd_dec(params, sk, ct, rng);
    } else if (key_env.type == serialize::FileType::SkecdKey) {
      const auto key = serialize::decode_skecd_key(key_data);
      message = pkecd::skecd_dec(key, ct, rng);
    } else {
      throw DecodeError("key file cannot decrypt this ciphertext");
    }
    if (!message) {
      std::cerr << "decryption failed\n";
      return kExitFailure;
    }
    std::cout << format_bits(*message) << "\n";
    return kExitSuccess;
  }
  if (envelope.type == serialize::FileType::CcCiphertext) {
    auto ct = serialize::decode_cc_ciphertext(ct_data);
    auto [params, nce_sk, ow_sk] = serialize::decode_cc_secret(serialize::read_file(opt.key_path));
    (void)params;
    const cccd::SecretKeyView sk{std::move(nce_sk), std::move(ow_sk)};
    const auto message = cccd::cc_dec(sk, ct, rng);
    if (!message) {
      std::cerr << "decryption failed\n";
      return kExitFailure;
    }
    std::cout << format_bits(*message) << "\n";
    return kExitSuccess;
  }
  throw DecodeError("not a ciphertext file");
}

int do_delete(const KeyedCtOptions& opt) {
  const Bytes ct_data = serialize::read_file(opt.ct_path);
  const auto envelope = serialize::decode_envelope(ct_data);
  Rng rng(opt.seed);

  if (envelope.type == serialize::FileType::PkecdCiphertext) {
    auto ct = serialize::decode_pkecd_ciphertext(ct_data);
    const auto cert = pkecd::pkecd_del(ct, rng);
    serialize::write_file(opt.output, serialize::encode_pkecd_cert(cert));
    std::cout << "wrote " << opt.output << "\n";
    return kExitSuccess;
  }
  if (envelope.type == serialize::FileType::CcCiphertext) {
    auto ct = serialize::decode_cc_ciphertext(ct_data);
    const auto cert = cccd::cc_del(ct, rng);
    serialize::write_file(opt.output, serialize::encode_cc_cert(cert));
    std::cout << "wrote " << opt.output << "\n";
    return kExitSuccess;
  }
  throw DecodeError("not a ciphertext file");
}

int do_verify(const std::string& vk_path, const std::string& cert_path) {
  const Bytes vk_data = serialize::read_file(vk_path);
  const auto envelope = serialize::decode_envelope(vk_data);

  bool accepted = false;
  if (envelope.type == serialize::FileType::PkecdVerificationKey) {
    const auto vk = serialize::decode_pkecd_verification_key(vk_data);
    const auto cert = serialize::decode_pkecd_cert(serialize::read_file(cert_path));
    accepted = pkecd::pkecd_vrfy(vk, cert);
  } else if (envelope.type == serialize::FileType::CcVerificationKey) {
    const auto vk = serialize::decode_cc_verification_key(vk_data);
    const auto cert = serialize::decode_cc_cert(serialize::read_file(cert_path));
    accepted = cccd::cc_vrfy(vk, cert);
  } else {
    throw DecodeError("not a verification key file");
  }
  std::cout << (accepted ? "accept" : "reject") << "\n";
  return accepted ? kExitSuccess : kExitFailure;
}

struct ExperimentOptions {
  experiment::ExperimentConfig config;
  std::string scheme = "pke-cd";
  std::string base = "test-stub";
  std::string output;
  bool list = false;
};

int do_experiment(ExperimentOptions& opt) {
  if (opt.list) {
    for (const auto kind :
         {experiment::GameKind::PkeCd, experiment::GameKind::ReusableSkeCd,
          experiment::GameKind::CcPkeCd, experiment::GameKind::CutAndChoose,
          experiment::GameKind::AmplifiedHardcore}) {
      std::cout << experiment::game_name(kind) << ":";
      for (const auto& name : experiment::strategies_for(kind)) std::cout << " " << name;
      std::cout << "\n";
    }
    return kExitSuccess;
  }
  opt.config.scheme = experiment::parse_game(opt.scheme);
  opt.config.base = parse_base(opt.base);
  const auto report = experiment::run_experiment(opt.config);
  const std::string text = experiment::render_report(report);
  if (!opt.output.empty()) {
    serialize::write_file(opt.output, Bytes(text.begin(), text.end()));
    std::cout << "wrote " << opt.output << "\n";
  } else {
    std::cout << text;
  }
  return report.at("all_passed").get<bool>() ? kExitSuccess : kExitFailure;
}

int do_lemma_check(int max_n) {
  // Exact product formula against direct subset enumeration.
  bool all_ok = true;
  for (int n = 1; n <= max_n; ++n) {
    for (int t = 0; t <= 2 * n; ++t) {
      const auto exact = ntcf::disjoint_probability_exact(n, t);

      std::uint64_t total = 0, disjoint = 0;
      const int universe = 2 * n;
      for (std::uint32_t mask = 0; mask < (1u << universe); ++mask) {
        if (__builtin_popcount(mask) != n) continue;
        ++total;
        if ((mask & ((1u << t) - 1)) == 0) ++disjoint;
      }
      const bool match = exact == ntcf::Rational(static_cast<std::int64_t>(disjoint),
                                                 static_cast<std::int64_t>(total));
      all_ok = all_ok && match;
      std::cout << "n=" << n << " t=" << t << " exact=" << exact.numerator() << "/"
                << exact.denominator() << " enumeration=" << disjoint << "/" << total << " "
                << (match ? "ok" : "MISMATCH") << "\n";
    }
  }
  std::cout << (all_ok ? "all lemma checks passed\n" : "lemma check FAILED\n");
  return all_ok ? kExitSuccess : kExitFailure;
}

struct TranscriptOptions {
  std::uint64_t seed = 0;
  bool socket = false;
  std::string output = "run.transcript";
  int n = 2;
  int w = 4;
  int lambda = 128;
  std::size_t message_bits = 8;
  std::string message;
  std::string base = "test-stub";
};

int do_transcript(const TranscriptOptions& opt) {
  cccd::Params params;
  params.n = opt.n;
  params.preimage_bits = opt.w;
  params.lambda_bits = opt.lambda;
  params.message_bits = opt.message_bits;
  params.base = parse_base(opt.base);
  Rng key_rng(derive_seed(opt.seed, 0));
  const auto keys = cccd::cc_keygen(params, key_rng);
  const BitString message =
      opt.message.empty() ? BitString(params.message_bits, 0) : parse_bits(opt.message);
  const cccd::PublicKeyView pk{params, &keys.nce_pk, &keys.ow_pk};
  const auto result = cccd::run_interactive_encryption(
      pk, message, derive_seed(opt.seed, 1), derive_seed(opt.seed, 2),
      opt.socket ? cccd::TransportKind::LoopbackTcp : cccd::TransportKind::InProcess);
  if (result.aborted) {
    std::cerr << "interactive encryption aborted\n";
    return kExitFailure;
  }
  serialize::write_file(opt.output, serialize::encode_transcript(result.transcript));
  std::cout << "wrote " << opt.output << " (" << result.transcript.size() << " bytes)\n";
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified-deletion encryption simulator"};
  app.require_subcommand(1);

  KeygenOptions keygen_opt;
  auto* keygen = app.add_subcommand("keygen", "generate a key pair");
  keygen->add_option("--scheme", keygen_opt.scheme, "pke-cd | reusable-ske-cd | cc-pke-cd");
  keygen->add_option("-o,--output", keygen_opt.output, "output path prefix");
  auto* kg_seed = keygen->add_option("--seed", keygen_opt.seed, "rng seed");
  keygen->add_option("--message-bits", keygen_opt.message_bits, "plaintext bits");
  keygen->add_option("--n", keygen_opt.n, "cc instance parameter");
  keygen->add_option("--w", keygen_opt.w, "cc preimage bits");
  keygen->add_option("--lambda", keygen_opt.lambda, "cc session key bits");
  keygen->add_option("--base", keygen_opt.base, "base scheme: test-stub | regev-ref");
  keygen->add_option("--level", keygen_opt.level, "base security level");

  EncryptOptions enc_opt;
  auto* encrypt = app.add_subcommand("encrypt", "encrypt a message");
  encrypt->add_option("--key", enc_opt.key_path, "public key (or reusable secret key) file")
      ->required();
  encrypt->add_option("-m,--message", enc_opt.message, "message bits, e.g. 0101")->required();
  encrypt->add_option("-o,--output", enc_opt.output, "output path prefix");
  auto* en_seed = encrypt->add_option("--seed", enc_opt.seed, "rng seed");
  encrypt->add_flag("--socket", enc_opt.socket,
                    "run the interactive protocol over a loopback TCP socket");

  KeyedCtOptions dec_opt;
  auto* decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext");
  decrypt->add_option("--key", dec_opt.key_path, "secret key file")->required();
  decrypt->add_option("--ct", dec_opt.ct_path, "ciphertext file")->required();
  auto* de_seed = decrypt->add_option("--seed", dec_opt.seed, "rng seed");

  KeyedCtOptions del_opt;
  del_opt.output = "out.cert";
  auto* del = app.add_subcommand("delete", "delete a ciphertext, producing a certificate");
  del->add_option("--ct", del_opt.ct_path, "ciphertext file")->required();
  del->add_option("-o,--output", del_opt.output, "certificate output file");
  auto* dl_seed = del->add_option("--seed", del_opt.seed, "rng seed");

  std::string vk_path, cert_path;
  auto* verify = app.add_subcommand("verify", "verify a deletion certificate");
  verify->add_option("--vk", vk_path, "verification key file")->required();
  verify->add_option("--cert", cert_path, "certificate file")->required();

  ExperimentOptions exp_opt;
  auto* exper = app.add_subcommand("experiment", "run a security-game experiment");
  exper->add_option("--scheme", exp_opt.scheme,
                    "pke-cd | reusable-ske-cd | cc-pke-cd | cut-and-choose | amplified-hardcore");
  exper->add_option("--strategy", exp_opt.config.strategy, "registered strategy name");
  exper->add_option("--trials", exp_opt.config.trials, "trial count");
  auto* ex_seed = exper->add_option("--seed", exp_opt.config.seed, "rng seed");
  exper->add_option("--n", exp_opt.config.n, "instance parameter");
  exper->add_option("--w", exp_opt.config.preimage_bits, "preimage bits");
  exper->add_option("--message-bits", exp_opt.config.message_bits, "plaintext bits");
  exper->add_option("--lambda", exp_opt.config.lambda_bits, "session key bits");
  exper->add_option("--base", exp_opt.base, "base scheme: test-stub | regev-ref");
  exper->add_option("-o,--output", exp_opt.output, "write the report here");
  exper->add_flag("--list-strategies", exp_opt.list, "list registered strategies and exit");

  int max_n = 6;
  auto* lemma = app.add_subcommand("lemma-check",
                                   "check the exact disjointness probabilities by enumeration");
  lemma->add_option("--max-n", max_n, "largest n to sweep")->check(CLI::Range(1, 12));

  TranscriptOptions tr_opt;
  auto* transcript = app.add_subcommand("transcript",
                                        "record an interactive-encryption wire transcript");
  auto* tr_seed = transcript->add_option("--seed", tr_opt.seed, "rng seed");
  transcript->add_flag("--socket", tr_opt.socket, "use a loopback TCP socket");
  transcript->add_option("-o,--output", tr_opt.output, "transcript output file");
  transcript->add_option("--n", tr_opt.n, "cc instance parameter");
  transcript->add_option("--w", tr_opt.w, "cc preimage bits");
  transcript->add_option("--lambda", tr_opt.lambda, "cc session key bits");
  transcript->add_option("--message-bits", tr_opt.message_bits, "plaintext bits");
  transcript->add_option("-m,--message", tr_opt.message, "message bits");
  transcript->add_option("--base", tr_opt.base, "base scheme");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    const std::uint64_t fallback = default_seed();
    if (kg_seed->count() == 0) keygen_opt.seed = fallback;
    if (en_seed->count() == 0) enc_opt.seed = fallback;
    if (de_seed->count() == 0) dec_opt.seed = fallback;
    if (dl_seed->count() == 0) del_opt.seed = fallback;
    if (ex_seed->count() == 0) exp_opt.config.seed = fallback;
    if (tr_seed->count() == 0) tr_opt.seed = fallback;

    if (keygen->parsed()) return do_keygen(keygen_opt);
    if (encrypt->parsed()) return do_encrypt(enc_opt);
    if (decrypt->parsed()) return do_decrypt(dec_opt);
    if (del->parsed()) return do_delete(del_opt);
    if (verify->parsed()) return do_verify(vk_path, cert_path);
    if (exper->parsed()) return do_experiment(exp_opt);
    if (lemma->parsed()) return do_lemma_check(max_n);
    if (transcript->parsed()) return do_transcript(tr_opt);
  } catch (const DecodeError& e) {
    std::cerr << "input decode error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
