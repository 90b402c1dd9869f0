#include "cdsim/pke_cd.hpp"

#include <stdexcept>

namespace cdsim::pkecd {

namespace {

void check_message(const BitString& message, std::size_t expected) {
  if (message.size() != expected)
    throw std::invalid_argument("message length does not match the key's plaintext space");
}

// The only coupling between the layers is the serialized one-time key; check
// the round trip on every encryption.
void check_layering(const otske::OtskeKey& vk, const BitString& encapsulated) {
  if (vk.to_bits() != encapsulated)
    throw std::logic_error("verification key and encapsulated key diverged");
  const otske::OtskeKey decoded = otske::OtskeKey::from_bits(encapsulated);
  if (decoded.bases != vk.bases || decoded.payload != vk.payload ||
      decoded.plaintext_bits != vk.plaintext_bits)
    throw std::logic_error("encapsulated key does not decode back to the verification key");
}

std::optional<BitString> hybrid_dec(const rnce::RnceDecKey& dec_key, const rnce::BaseOps& base,
                                    Ciphertext& ct, Rng& rng) {
  const auto key_bits = rnce::rnce_dec(dec_key, ct.key_ct, base);
  if (!key_bits) return std::nullopt;
  otske::OtskeKey inner;
  try {
    inner = otske::OtskeKey::from_bits(*key_bits);
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // encapsulation decrypted to garbage
  }
  if (inner.total_qubits() != static_cast<std::size_t>(ct.pad_ct.quantum().num_qubits()))
    return std::nullopt;
  if (inner.plaintext_bits != ct.pad_ct.classical_pad().size()) return std::nullopt;
  return otske::otske_dec(inner, ct.pad_ct, rng);
}

}  // namespace

KeyPair pkecd_keygen(const Params& params, Rng& rng) {
  auto material = rnce::rnce_keygen(params.encapsulation_bits(), params.base_ops(), rng);
  return {params, std::move(material.enc_key), std::move(material.dec_key),
          std::move(material.aux)};
}

std::pair<VerificationKey, Ciphertext> pkecd_enc(const Params& params,
                                                 const rnce::RnceEncKey& pk,
                                                 const BitString& message, Rng& rng) {
  check_message(message, params.message_bits);
  const otske::OtskeKey one_time = otske::otske_keygen(params.message_bits, rng);
  const BitString encapsulated = one_time.to_bits();
  check_layering(one_time, encapsulated);
  auto key_ct = rnce::rnce_enc(pk, encapsulated, params.base_ops(), rng);
  auto pad_ct = otske::otske_enc(one_time, message);
  return {one_time, Ciphertext{std::move(key_ct), std::move(pad_ct)}};
}

std::optional<BitString> pkecd_dec(const Params& params, const rnce::RnceDecKey& sk,
                                   Ciphertext& ct, Rng& rng) {
  return hybrid_dec(sk, params.base_ops(), ct, rng);
}

otske::DeletionCert pkecd_del(Ciphertext& ct, Rng& rng) { return otske::otske_del(ct.pad_ct, rng); }

bool pkecd_vrfy(const VerificationKey& vk, const otske::DeletionCert& cert) {
  return otske::otske_vrfy(vk, cert);
}

CdExperimentResult run_pkecd_experiment(const Params& params, PkeCdStrategy& strategy, Bit b,
                                        Rng& rng, NceMode mode) {
  const auto base = params.base_ops();
  KeyPair keys = pkecd_keygen(params, rng);

  CdExperimentResult result;
  result.transcript.push_back({"keygen", "pk sent"});
  auto [m0, m1] = strategy.choose_messages(keys.pk, params.message_bits, rng);
  check_message(m0, params.message_bits);
  check_message(m1, params.message_bits);
  result.transcript.push_back({"messages", format_bits(m0) + "/" + format_bits(m1)});

  const otske::OtskeKey one_time = otske::otske_keygen(params.message_bits, rng);
  const BitString encapsulated = one_time.to_bits();
  check_layering(one_time, encapsulated);

  rnce::RnceCiphertext key_ct = mode == NceMode::Real
                                    ? rnce::rnce_enc(keys.pk, encapsulated, base, rng)
                                    : rnce::rnce_fake(keys.pk, keys.sk, keys.aux, base, rng);
  rnce::RnceCiphertext key_ct_copy = key_ct;  // kept for the hybrid reveal
  otske::OtskeCiphertext pad_ct = otske::otske_enc(one_time, b ? m1 : m0);
  result.transcript.push_back({"challenge-ciphertext", "sent"});

  otske::DeletionCert cert =
      strategy.receive_ciphertext(Ciphertext{std::move(key_ct), std::move(pad_ct)}, rng);
  result.transcript.push_back({"certificate", format_bits(cert.bits)});
  result.cert_accepted = otske::otske_vrfy(one_time, cert);
  result.transcript.push_back({"verify", result.cert_accepted ? "accept" : "reject"});

  if (result.cert_accepted) {
    rnce::RnceDecKey revealed =
        mode == NceMode::Real
            ? keys.sk
            : rnce::rnce_reveal(keys.pk, keys.sk, keys.aux, key_ct_copy, encapsulated);
    result.bit_guess = strategy.guess(std::move(revealed), rng);
  } else {
    result.bit_guess = strategy.guess(std::nullopt, rng);
  }
  result.transcript.push_back({"guess", result.bit_guess ? "1" : "0"});
  return result;
}

SkecdKey skecd_keygen(const SkecdParams& params, Rng& rng) {
  auto material = rnce::rnce_keygen(params.encapsulation_bits(), rnce::sym_base(), rng);
  return {params, std::move(material.enc_key), std::move(material.dec_key),
          std::move(material.aux)};
}

std::pair<VerificationKey, Ciphertext> skecd_enc(const SkecdKey& key, const BitString& message,
                                                 Rng& rng) {
  check_message(message, key.params.message_bits);
  const otske::OtskeKey one_time = otske::otske_keygen(key.params.message_bits, rng);
  const BitString encapsulated = one_time.to_bits();
  check_layering(one_time, encapsulated);
  auto key_ct = rnce::rnce_enc(key.ek, encapsulated, rnce::sym_base(), rng);
  auto pad_ct = otske::otske_enc(one_time, message);
  return {one_time, Ciphertext{std::move(key_ct), std::move(pad_ct)}};
}

std::optional<BitString> skecd_dec(const SkecdKey& key, Ciphertext& ct, Rng& rng) {
  return hybrid_dec(key.dk, rnce::sym_base(), ct, rng);
}

otske::DeletionCert skecd_del(Ciphertext& ct, Rng& rng) { return otske::otske_del(ct.pad_ct, rng); }

bool skecd_vrfy(const VerificationKey& vk, const otske::DeletionCert& cert) {
  return otske::otske_vrfy(vk, cert);
}

CdExperimentResult run_skecd_experiment(const SkecdParams& params, SkecdStrategy& strategy,
                                        Bit b, Rng& rng, NceMode mode) {
  const auto base = rnce::sym_base();
  SkecdKey key = skecd_keygen(params, rng);

  const EncOracle oracle = [&key, &rng](const BitString& m) { return skecd_enc(key, m, rng); };

  CdExperimentResult result;
  result.transcript.push_back({"keygen", "secret key installed"});
  strategy.initial_queries(oracle, params.message_bits, rng);
  result.transcript.push_back({"query-phase", "initial"});

  auto [m0, m1] = strategy.choose_messages(params.message_bits, rng);
  check_message(m0, params.message_bits);
  check_message(m1, params.message_bits);
  result.transcript.push_back({"messages", format_bits(m0) + "/" + format_bits(m1)});

  const otske::OtskeKey one_time = otske::otske_keygen(params.message_bits, rng);
  const BitString encapsulated = one_time.to_bits();
  check_layering(one_time, encapsulated);
  rnce::RnceCiphertext key_ct = mode == NceMode::Real
                                    ? rnce::rnce_enc(key.ek, encapsulated, base, rng)
                                    : rnce::rnce_fake(key.ek, key.dk, key.aux, base, rng);
  rnce::RnceCiphertext key_ct_copy = key_ct;
  otske::OtskeCiphertext pad_ct = otske::otske_enc(one_time, b ? m1 : m0);
  result.transcript.push_back({"challenge-ciphertext", "sent"});

  otske::DeletionCert cert =
      strategy.receive_ciphertext(Ciphertext{std::move(key_ct), std::move(pad_ct)}, oracle, rng);
  result.transcript.push_back({"certificate", format_bits(cert.bits)});
  result.cert_accepted = otske::otske_vrfy(one_time, cert);
  result.transcript.push_back({"verify", result.cert_accepted ? "accept" : "reject"});

  if (result.cert_accepted) {
    SkecdKey revealed = key;
    if (mode == NceMode::FakeReveal)
      revealed.dk = rnce::rnce_reveal(key.ek, key.dk, key.aux, key_ct_copy, encapsulated);
    result.bit_guess = strategy.guess(std::move(revealed), nullptr, rng);
  } else {
    result.bit_guess = strategy.guess(std::nullopt, &oracle, rng);
  }
  result.transcript.push_back({"guess", result.bit_guess ? "1" : "0"});
  return result;
}

}  // namespace cdsim::pkecd
