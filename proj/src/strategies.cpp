#include "cdsim/strategies.hpp"

#include <stdexcept>

namespace cdsim::strategies {

namespace {

std::pair<BitString, BitString> fixed_message_pair(std::size_t message_bits) {
  return {BitString(message_bits, 0), BitString(message_bits, 1)};
}

Bit guess_from_plaintext(const BitString& recovered, const BitString& m0, const BitString& m1,
                         Rng& rng) {
  if (recovered == m0) return 0;
  if (recovered == m1) return 1;
  return rng.bit();
}

}  // namespace

BitString nonzero_bits(std::size_t width, Rng& rng) {
  const std::uint64_t value = 1 + rng.uniform((std::uint64_t{1} << width) - 1);
  return label_to_bits(value, width);
}

// --- HonestDeleterPke ---------------------------------------------------------

std::pair<BitString, BitString> HonestDeleterPke::choose_messages(const rnce::RnceEncKey&,
                                                                  std::size_t message_bits,
                                                                  Rng&) {
  return fixed_message_pair(message_bits);
}

otske::DeletionCert HonestDeleterPke::receive_ciphertext(pkecd::Ciphertext ct, Rng& rng) {
  return pkecd::pkecd_del(ct, rng);
}

Bit HonestDeleterPke::guess(std::optional<rnce::RnceDecKey>, Rng& rng) { return rng.bit(); }

// --- KeepAndDecryptPke ----------------------------------------------------------

std::pair<BitString, BitString> KeepAndDecryptPke::choose_messages(const rnce::RnceEncKey&,
                                                                   std::size_t message_bits,
                                                                   Rng&) {
  std::tie(m0_, m1_) = fixed_message_pair(message_bits);
  return {m0_, m1_};
}

otske::DeletionCert KeepAndDecryptPke::receive_ciphertext(pkecd::Ciphertext ct, Rng& rng) {
  const auto kappa = static_cast<std::size_t>(ct.pad_ct.quantum().num_qubits());
  kept_ = std::move(ct);
  return otske::DeletionCert{rng.bits(kappa)};
}

Bit KeepAndDecryptPke::guess(std::optional<rnce::RnceDecKey> revealed_key, Rng& rng) {
  if (revealed_key && kept_) {
    auto recovered = pkecd::pkecd_dec(params_, *revealed_key, *kept_, rng);
    if (recovered) return guess_from_plaintext(*recovered, m0_, m1_, rng);
  }
  return rng.bit();
}

// --- HonestDeleterSkecd ---------------------------------------------------------

void HonestDeleterSkecd::initial_queries(const pkecd::EncOracle& oracle,
                                         std::size_t message_bits, Rng& rng) {
  // Exercise the query phase: encrypt, delete, and verify the returned pair.
  message_bits_ = message_bits;
  auto [vk, ct] = oracle(BitString(message_bits, 0));
  otske::DeletionCert cert = pkecd::skecd_del(ct, rng);
  if (!pkecd::skecd_vrfy(vk, cert))
    throw std::logic_error("oracle ciphertext failed honest deletion");
}

std::pair<BitString, BitString> HonestDeleterSkecd::choose_messages(std::size_t message_bits,
                                                                    Rng&) {
  message_bits_ = message_bits;
  return fixed_message_pair(message_bits);
}

otske::DeletionCert HonestDeleterSkecd::receive_ciphertext(pkecd::Ciphertext ct,
                                                           const pkecd::EncOracle& oracle,
                                                           Rng& rng) {
  auto [vk, extra] = oracle(BitString(message_bits_, 1));  // mid-game query
  otske::DeletionCert extra_cert = pkecd::skecd_del(extra, rng);
  if (!pkecd::skecd_vrfy(vk, extra_cert))
    throw std::logic_error("oracle ciphertext failed honest deletion");
  return pkecd::skecd_del(ct, rng);
}

Bit HonestDeleterSkecd::guess(std::optional<pkecd::SkecdKey>, const pkecd::EncOracle*,
                              Rng& rng) {
  return rng.bit();
}

// --- KeepAndDecryptSkecd ---------------------------------------------------------

std::pair<BitString, BitString> KeepAndDecryptSkecd::choose_messages(std::size_t message_bits,
                                                                     Rng&) {
  std::tie(m0_, m1_) = fixed_message_pair(message_bits);
  return {m0_, m1_};
}

otske::DeletionCert KeepAndDecryptSkecd::receive_ciphertext(pkecd::Ciphertext ct,
                                                            const pkecd::EncOracle&, Rng& rng) {
  const auto kappa = static_cast<std::size_t>(ct.pad_ct.quantum().num_qubits());
  kept_ = std::move(ct);
  return otske::DeletionCert{rng.bits(kappa)};
}

Bit KeepAndDecryptSkecd::guess(std::optional<pkecd::SkecdKey> revealed_key,
                               const pkecd::EncOracle*, Rng& rng) {
  if (revealed_key && kept_) {
    auto recovered = pkecd::skecd_dec(*revealed_key, *kept_, rng);
    if (recovered) return guess_from_plaintext(*recovered, m0_, m1_, rng);
  }
  return rng.bit();
}

// --- HonestDeleterCc -------------------------------------------------------------

std::pair<BitString, BitString> HonestDeleterCc::choose_messages(const cccd::PublicKeyView& pk,
                                                                 const cccd::CcGameContext&,
                                                                 Rng&) {
  return fixed_message_pair(pk.params.message_bits);
}

cccd::ImagesMessage HonestDeleterCc::respond_keys(const cccd::KeysMessage& keys,
                                                  const cccd::CcGameContext&, Rng& rng) {
  receiver_.emplace(rng);
  return receiver_->respond(keys);
}

cccd::CcCert HonestDeleterCc::produce_cert(
    const std::variant<cccd::CtBundleMessage, cccd::AbortMessage>& bundle,
    const cccd::CcGameContext&, Rng& rng) {
  if (std::holds_alternative<cccd::AbortMessage>(bundle)) return {};
  cccd::CcCiphertext ct = receiver_->take_ciphertext(std::get<cccd::CtBundleMessage>(bundle));
  return cccd::cc_del(ct, rng);
}

Bit HonestDeleterCc::guess(std::optional<cccd::SecretKeyView>, const cccd::CcGameContext&,
                           Rng& rng) {
  return rng.bit();
}

// --- DecryptWithoutDeletingCc -------------------------------------------------------

std::pair<BitString, BitString> DecryptWithoutDeletingCc::choose_messages(
    const cccd::PublicKeyView& pk, const cccd::CcGameContext&, Rng&) {
  std::tie(m0_, m1_) = fixed_message_pair(pk.params.message_bits);
  return {m0_, m1_};
}

cccd::ImagesMessage DecryptWithoutDeletingCc::respond_keys(const cccd::KeysMessage& keys,
                                                           const cccd::CcGameContext&,
                                                           Rng& rng) {
  cccd::ImagesMessage images;
  preimage_bits_ = keys.keys.front().preimage_bits;
  for (const auto& key : keys.keys) {
    auto sample = qsim::prepare_range_superposition(key, rng);
    images.images.push_back(sample.image);
    const auto& state = sample.instance;
    if (state.mode == ntcf::ClawMode::GType) {
      measured_.emplace_back(state.branch, state.preimage);
    } else {
      const Bit b = rng.bit();
      measured_.emplace_back(b, b ? state.preimage1 : state.preimage0);
    }
  }
  return images;
}

cccd::CcCert DecryptWithoutDeletingCc::produce_cert(
    const std::variant<cccd::CtBundleMessage, cccd::AbortMessage>& bundle,
    const cccd::CcGameContext&, Rng& rng) {
  if (std::holds_alternative<cccd::AbortMessage>(bundle)) return {};
  bundle_ = std::get<cccd::CtBundleMessage>(bundle);
  cccd::CcCert cert;
  for (std::size_t i = 0; i < measured_.size(); ++i)
    cert.entries.push_back(
        {rng.bit(), nonzero_bits(static_cast<std::size_t>(preimage_bits_), rng)});
  return cert;
}

Bit DecryptWithoutDeletingCc::guess(std::optional<cccd::SecretKeyView> sk,
                                    const cccd::CcGameContext& ctx, Rng& rng) {
  if (!sk || !bundle_) return rng.bit();
  const auto base = rnce::pke_base(primitives::PkeSchemeId::TestStub);
  const auto mask = rnce::rnce_dec(sk->nce_sk, bundle_->nce_ct, base);
  const auto key_bytes = primitives::pke_dec(sk->ow_sk, bundle_->ow_ct);
  if (!mask || !key_bytes) return rng.bit();
  std::vector<std::pair<Bit, std::uint32_t>> subset_preimages;
  for (int i : cccd::decode_subset_mask(*mask))
    subset_preimages.push_back(measured_.at(static_cast<std::size_t>(i)));
  const BitString key_bits = unpack_bits(*key_bytes, key_bytes->size() * 8);
  const Bytes z = cccd::pack_z(key_bits, subset_preimages, preimage_bits_);
  const BitString pad = ctx.oracle(z, bundle_->ct_msg.size());
  const BitString recovered = xor_bits(bundle_->ct_msg, pad);
  return guess_from_plaintext(recovered, m0_, m1_, rng);
}

// --- Cut-and-choose strategies ----------------------------------------------------

cccd::CutChooseResponse DeleteEverything::respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                                       Rng& rng) {
  cccd::CutChooseResponse response;
  preimage_bits_ = keys.front().preimage_bits;
  for (const auto& key : keys) {
    auto sample = qsim::prepare_range_superposition(key, rng);
    response.images.push_back(sample.image);
    auto [e, d] = qsim::analytic_hadamard_sample(sample.instance, key.label_map, rng);
    response.certificates.push_back({e, std::move(d)});
  }
  return response;
}

std::vector<std::pair<Bit, std::uint32_t>> DeleteEverything::reveal_preimages(
    const std::vector<int>& subset, Rng& rng) {
  // All preimage information is gone; guessing is the only option left.
  std::vector<std::pair<Bit, std::uint32_t>> out;
  out.reserve(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i)
    out.emplace_back(rng.bit(),
                     static_cast<std::uint32_t>(rng.uniform(std::uint64_t{1} << preimage_bits_)));
  return out;
}

cccd::CutChooseResponse KeepPreimages::respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                                    Rng& rng) {
  cccd::CutChooseResponse response;
  const auto width = static_cast<std::size_t>(keys.front().preimage_bits);
  for (const auto& key : keys) {
    auto sample = qsim::prepare_range_superposition(key, rng);
    response.images.push_back(sample.image);
    const auto& state = sample.instance;
    if (state.mode == ntcf::ClawMode::GType) {
      measured_.emplace_back(state.branch, state.preimage);
    } else {
      const Bit b = rng.bit();
      measured_.emplace_back(b, b ? state.preimage1 : state.preimage0);
    }
    response.certificates.push_back({rng.bit(), nonzero_bits(width, rng)});
  }
  return response;
}

std::vector<std::pair<Bit, std::uint32_t>> KeepPreimages::reveal_preimages(
    const std::vector<int>& subset, Rng&) {
  std::vector<std::pair<Bit, std::uint32_t>> out;
  out.reserve(subset.size());
  for (int i : subset) out.push_back(measured_.at(static_cast<std::size_t>(i)));
  return out;
}

cccd::CutChooseResponse TableReadingCheater::respond_keys(
    const std::vector<ntcf::ClawFreeKey>& keys, Rng& rng) {
  cccd::CutChooseResponse response;
  const auto width = static_cast<std::size_t>(keys.front().preimage_bits);
  for (const auto& key : keys) {
    if (key.mode == ntcf::ClawMode::FType) {
      // Pick y := f(0, 0) and read both preimages straight out of the tables.
      const std::uint32_t x0 = 0;
      const std::uint32_t y = key.forward[0][x0];
      std::uint32_t x1 = 0;
      for (std::uint32_t x = 0; x < key.forward[1].size(); ++x)
        if (key.forward[1][x] == y) x1 = x;
      response.images.push_back(y);
      const BitString d = nonzero_bits(width, rng);
      const std::uint32_t delta = key.label_map(x0) ^ key.label_map(x1);
      response.certificates.push_back({dot(d, label_to_bits(delta, width)), d});
      preimages_.emplace_back(0, x0);
    } else {
      const std::uint32_t label = 0;
      const std::uint32_t y = key.forward[0][label];
      response.images.push_back(y);
      response.certificates.push_back({rng.bit(), nonzero_bits(width, rng)});
      preimages_.emplace_back(static_cast<Bit>(label >> key.preimage_bits),
                              label & ((std::uint32_t{1} << key.preimage_bits) - 1));
    }
  }
  return response;
}

std::vector<std::pair<Bit, std::uint32_t>> TableReadingCheater::reveal_preimages(
    const std::vector<int>& subset, Rng&) {
  std::vector<std::pair<Bit, std::uint32_t>> out;
  out.reserve(subset.size());
  for (int i : subset) out.push_back(preimages_.at(static_cast<std::size_t>(i)));
  return out;
}

// --- Amplified adaptive hardcore strategies ------------------------------------------

ntcf::HardcoreStrategy measure_preimage_strategy() {
  return [](const std::vector<ntcf::ClawFreeKey>& keys, Rng& rng) {
    std::vector<ntcf::HardcoreResponse> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
      auto sample = qsim::prepare_range_superposition(key, rng);
      ntcf::HardcoreResponse resp;
      resp.image = sample.image;
      const Bit b = rng.bit();
      resp.branch = b;
      resp.preimage = b ? sample.instance.preimage1 : sample.instance.preimage0;
      resp.d = nonzero_bits(static_cast<std::size_t>(key.preimage_bits), rng);
      resp.e = rng.bit();
      out.push_back(std::move(resp));
    }
    return out;
  };
}

ntcf::HardcoreStrategy hadamard_all_strategy() {
  return [](const std::vector<ntcf::ClawFreeKey>& keys, Rng& rng) {
    std::vector<ntcf::HardcoreResponse> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
      auto sample = qsim::prepare_range_superposition(key, rng);
      auto [e, d] = qsim::analytic_hadamard_sample(sample.instance, key.label_map, rng);
      ntcf::HardcoreResponse resp;
      resp.image = sample.image;
      resp.branch = rng.bit();
      resp.preimage =
          static_cast<std::uint32_t>(rng.uniform(std::uint64_t{1} << key.preimage_bits));
      resp.d = std::move(d);
      resp.e = e;
      out.push_back(std::move(resp));
    }
    return out;
  };
}

ntcf::HardcoreStrategy table_reading_hardcore_strategy() {
  return [](const std::vector<ntcf::ClawFreeKey>& keys, Rng& rng) {
    std::vector<ntcf::HardcoreResponse> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
      const std::uint32_t x0 = 0;
      const std::uint32_t y = key.forward[0][x0];
      std::uint32_t x1 = 0;
      for (std::uint32_t x = 0; x < key.forward[1].size(); ++x)
        if (key.forward[1][x] == y) x1 = x;
      ntcf::HardcoreResponse resp;
      resp.image = y;
      resp.branch = 0;
      resp.preimage = x0;
      resp.d = nonzero_bits(static_cast<std::size_t>(key.preimage_bits), rng);
      const std::uint32_t delta = key.label_map(x0) ^ key.label_map(x1);
      resp.e = dot(resp.d, label_to_bits(delta, resp.d.size()));
      out.push_back(std::move(resp));
    }
    return out;
  };
}

}  // namespace cdsim::strategies
