#pragma once

#include <memory>
#include <optional>

#include "cdsim/cc_pke_cd.hpp"
#include "cdsim/pke_cd.hpp"

namespace cdsim::strategies {

// --- Public-key deletion game adversaries -----------------------------------

// Deletes honestly, then guesses uniformly.
class HonestDeleterPke final : public pkecd::PkeCdStrategy {
public:
  std::pair<BitString, BitString> choose_messages(const rnce::RnceEncKey& pk,
                                                  std::size_t message_bits, Rng& rng) override;
  otske::DeletionCert receive_ciphertext(pkecd::Ciphertext ct, Rng& rng) override;
  Bit guess(std::optional<rnce::RnceDecKey> revealed_key, Rng& rng) override;
};

// Never deletes: keeps the quantum ciphertext intact, submits a random
// certificate, and decrypts outright if the key is revealed.
class KeepAndDecryptPke final : public pkecd::PkeCdStrategy {
public:
  explicit KeepAndDecryptPke(pkecd::Params params) : params_(std::move(params)) {}

  std::pair<BitString, BitString> choose_messages(const rnce::RnceEncKey& pk,
                                                  std::size_t message_bits, Rng& rng) override;
  otske::DeletionCert receive_ciphertext(pkecd::Ciphertext ct, Rng& rng) override;
  Bit guess(std::optional<rnce::RnceDecKey> revealed_key, Rng& rng) override;

private:
  pkecd::Params params_;
  BitString m0_, m1_;
  std::optional<pkecd::Ciphertext> kept_;
};

// --- Reusable secret-key game adversaries ------------------------------------

class HonestDeleterSkecd final : public pkecd::SkecdStrategy {
public:
  void initial_queries(const pkecd::EncOracle& oracle, std::size_t message_bits,
                       Rng& rng) override;
  std::pair<BitString, BitString> choose_messages(std::size_t message_bits, Rng& rng) override;
  otske::DeletionCert receive_ciphertext(pkecd::Ciphertext ct, const pkecd::EncOracle& oracle,
                                         Rng& rng) override;
  Bit guess(std::optional<pkecd::SkecdKey> revealed_key,
            const pkecd::EncOracle* oracle_if_rejected, Rng& rng) override;

private:
  std::size_t message_bits_ = 0;
};

class KeepAndDecryptSkecd final : public pkecd::SkecdStrategy {
public:
  std::pair<BitString, BitString> choose_messages(std::size_t message_bits, Rng& rng) override;
  otske::DeletionCert receive_ciphertext(pkecd::Ciphertext ct, const pkecd::EncOracle& oracle,
                                         Rng& rng) override;
  Bit guess(std::optional<pkecd::SkecdKey> revealed_key,
            const pkecd::EncOracle* oracle_if_rejected, Rng& rng) override;

private:
  BitString m0_, m1_;
  std::optional<pkecd::Ciphertext> kept_;
};

// --- Classical-communication game adversaries --------------------------------

class HonestDeleterCc final : public cccd::CcStrategy {
public:
  std::pair<BitString, BitString> choose_messages(const cccd::PublicKeyView& pk,
                                                  const cccd::CcGameContext& ctx,
                                                  Rng& rng) override;
  cccd::ImagesMessage respond_keys(const cccd::KeysMessage& keys, const cccd::CcGameContext& ctx,
                                   Rng& rng) override;
  cccd::CcCert produce_cert(const std::variant<cccd::CtBundleMessage, cccd::AbortMessage>& bundle,
                            const cccd::CcGameContext& ctx, Rng& rng) override;
  Bit guess(std::optional<cccd::SecretKeyView> sk, const cccd::CcGameContext& ctx,
            Rng& rng) override;

private:
  std::optional<cccd::Receiver> receiver_;
};

// Measures every instance computationally to keep the preimages, fabricates
// the certificate, and decrypts with the game oracle if the key arrives.
class DecryptWithoutDeletingCc final : public cccd::CcStrategy {
public:
  std::pair<BitString, BitString> choose_messages(const cccd::PublicKeyView& pk,
                                                  const cccd::CcGameContext& ctx,
                                                  Rng& rng) override;
  cccd::ImagesMessage respond_keys(const cccd::KeysMessage& keys, const cccd::CcGameContext& ctx,
                                   Rng& rng) override;
  cccd::CcCert produce_cert(const std::variant<cccd::CtBundleMessage, cccd::AbortMessage>& bundle,
                            const cccd::CcGameContext& ctx, Rng& rng) override;
  Bit guess(std::optional<cccd::SecretKeyView> sk, const cccd::CcGameContext& ctx,
            Rng& rng) override;

private:
  BitString m0_, m1_;
  int preimage_bits_ = 0;
  std::vector<std::pair<Bit, std::uint32_t>> measured_;  // per instance
  std::optional<cccd::CtBundleMessage> bundle_;
};

// --- Cut-and-choose game strategies -------------------------------------------

// Hadamard-measures every instance (honest deletion) and can only guess the
// preimages afterwards.
class DeleteEverything final : public cccd::CutChooseStrategy {
public:
  cccd::CutChooseResponse respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                       Rng& rng) override;
  std::vector<std::pair<Bit, std::uint32_t>> reveal_preimages(const std::vector<int>& subset,
                                                              Rng& rng) override;

private:
  int preimage_bits_ = 0;
};

// Measures computationally to keep preimages and fabricates certificates.
class KeepPreimages final : public cccd::CutChooseStrategy {
public:
  cccd::CutChooseResponse respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                       Rng& rng) override;
  std::vector<std::pair<Bit, std::uint32_t>> reveal_preimages(const std::vector<int>& subset,
                                                              Rng& rng) override;

private:
  std::vector<std::pair<Bit, std::uint32_t>> measured_;
};

// Reads the permutation tables out of the keys; wins always. Demonstrates
// that the idealized instantiation is not cryptographically claw-free.
class TableReadingCheater final : public cccd::CutChooseStrategy {
public:
  cccd::CutChooseResponse respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                       Rng& rng) override;
  std::vector<std::pair<Bit, std::uint32_t>> reveal_preimages(const std::vector<int>& subset,
                                                              Rng& rng) override;

private:
  std::vector<std::pair<Bit, std::uint32_t>> preimages_;
};

// --- Amplified adaptive hardcore strategies -----------------------------------

// Samples honestly, measures computationally for a valid preimage, and
// fabricates the parity equation.
ntcf::HardcoreStrategy measure_preimage_strategy();
// Hadamard-measures everything: valid parities, no preimages.
ntcf::HardcoreStrategy hadamard_all_strategy();
// Reads the claw from the key tables; wins always.
ntcf::HardcoreStrategy table_reading_hardcore_strategy();

// Uniformly random d with at least one set bit.
BitString nonzero_bits(std::size_t width, Rng& rng);

}  // namespace cdsim::strategies
