#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdsim/otske.hpp"
#include "cdsim/rnce.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::pkecd {

// Hybrid scheme: the RNCE layer encapsulates a fresh one-time key, the
// one-time layer carries the message. Message length is fixed per key pair.
struct Params {
  std::size_t message_bits = 4;
  primitives::PkeSchemeId base = primitives::PkeSchemeId::TestStub;
  int security_level = 128;

  std::size_t kappa() const { return 2 * message_bits; }
  std::size_t encapsulation_bits() const { return otske::OtskeKey::encoded_bits(kappa()); }
  rnce::BaseOps base_ops() const { return rnce::pke_base(base, security_level); }
};

struct KeyPair {
  Params params;
  rnce::RnceEncKey pk;
  rnce::RnceDecKey sk;
  rnce::RnceAux aux;  // harness-only trapdoor for Fake/Reveal replays
};

struct Ciphertext {
  rnce::RnceCiphertext key_ct;
  otske::OtskeCiphertext pad_ct;
};

using VerificationKey = otske::OtskeKey;  // vk := ske.sk

KeyPair pkecd_keygen(const Params& params, Rng& rng);
std::pair<VerificationKey, Ciphertext> pkecd_enc(const Params& params,
                                                 const rnce::RnceEncKey& pk,
                                                 const BitString& message, Rng& rng);
std::optional<BitString> pkecd_dec(const Params& params, const rnce::RnceDecKey& sk,
                                   Ciphertext& ct, Rng& rng);
otske::DeletionCert pkecd_del(Ciphertext& ct, Rng& rng);
bool pkecd_vrfy(const VerificationKey& vk, const otske::DeletionCert& cert);

// ---------------------------------------------------------------------------
// Certified-deletion experiment (the public-key game).

// Harness hybrid hook: FakeReveal replays the proof's hybrid, where the
// encapsulation is a fake ciphertext and the revealed key is produced by
// Reveal. Test-only instrumentation.
enum class NceMode : std::uint8_t { Real = 0, FakeReveal = 1 };

struct ExperimentEvent {
  std::string label;
  std::string detail;
};

struct CdExperimentResult {
  Bit bit_guess = 0;
  bool cert_accepted = false;
  std::vector<ExperimentEvent> transcript;
};

class PkeCdStrategy {
public:
  virtual ~PkeCdStrategy() = default;
  virtual std::pair<BitString, BitString> choose_messages(const rnce::RnceEncKey& pk,
                                                          std::size_t message_bits,
                                                          Rng& rng) = 0;
  // Takes ownership of the challenge ciphertext and must emit exactly one
  // certificate attempt.
  virtual otske::DeletionCert receive_ciphertext(Ciphertext ct, Rng& rng) = 0;
  virtual Bit guess(std::optional<rnce::RnceDecKey> revealed_key, Rng& rng) = 0;
};

CdExperimentResult run_pkecd_experiment(const Params& params, PkeCdStrategy& strategy, Bit b,
                                        Rng& rng, NceMode mode = NceMode::Real);

// ---------------------------------------------------------------------------
// Reusable secret-key twin: the encapsulation layer is secret-key RNCE, so
// one key supports many encryptions.

struct SkecdParams {
  std::size_t message_bits = 4;

  std::size_t kappa() const { return 2 * message_bits; }
  std::size_t encapsulation_bits() const { return otske::OtskeKey::encoded_bits(kappa()); }
};

struct SkecdKey {
  SkecdParams params;
  rnce::RnceEncKey ek;
  rnce::RnceDecKey dk;
  rnce::RnceAux aux;  // harness-only
};

SkecdKey skecd_keygen(const SkecdParams& params, Rng& rng);
std::pair<VerificationKey, Ciphertext> skecd_enc(const SkecdKey& key, const BitString& message,
                                                 Rng& rng);
std::optional<BitString> skecd_dec(const SkecdKey& key, Ciphertext& ct, Rng& rng);
otske::DeletionCert skecd_del(Ciphertext& ct, Rng& rng);
bool skecd_vrfy(const VerificationKey& vk, const otske::DeletionCert& cert);

// Encryption oracle handed to the adversary during the query phases of the
// reusable-key game.
using EncOracle = std::function<std::pair<VerificationKey, Ciphertext>(const BitString&)>;

class SkecdStrategy {
public:
  virtual ~SkecdStrategy() = default;
  virtual void initial_queries(const EncOracle& oracle, std::size_t message_bits, Rng& rng) {
    (void)oracle;
    (void)message_bits;
    (void)rng;
  }
  virtual std::pair<BitString, BitString> choose_messages(std::size_t message_bits, Rng& rng) = 0;
  virtual otske::DeletionCert receive_ciphertext(Ciphertext ct, const EncOracle& oracle,
                                                 Rng& rng) = 0;
  // `oracle_if_rejected` is non-null only when the certificate was rejected;
  // the game allows further encryption queries in that branch.
  virtual Bit guess(std::optional<SkecdKey> revealed_key, const EncOracle* oracle_if_rejected,
                    Rng& rng) = 0;
};

CdExperimentResult run_skecd_experiment(const SkecdParams& params, SkecdStrategy& strategy,
                                        Bit b, Rng& rng, NceMode mode = NceMode::Real);

}  // namespace cdsim::pkecd
