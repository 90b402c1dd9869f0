#include "cdsim/rnce.hpp"

#include <stdexcept>

#include "cdsim/bytes.hpp"

namespace cdsim::rnce {

namespace {

std::optional<Bit> byte_to_bit(const Bytes& plain) {
  if (plain.size() != 1 || plain[0] > 1) return std::nullopt;
  return static_cast<Bit>(plain[0]);
}

void check_slots(std::size_t plaintext_bits) {
  if (plaintext_bits < 1) throw std::invalid_argument("plaintext must have at least one bit");
  if (plaintext_bits > kMaxPlaintextBits)
    throw std::invalid_argument("plaintext capped at 4096 bits");
}

}  // namespace

BaseOps pke_base(primitives::PkeSchemeId scheme_id, int security_level) {
  BaseOps ops;
  ops.keygen = [scheme_id, security_level](Rng& rng) {
    auto pair = primitives::pke_keygen(scheme_id, security_level, rng);
    return std::make_pair(std::move(pair.public_key), std::move(pair.secret_key));
  };
  ops.encrypt_bit = [](const Bytes& enc_key, Bit value, Rng& rng) {
    return primitives::pke_enc(enc_key, Bytes{value}, rng);
  };
  ops.decrypt_bit = [](const Bytes& dec_key, const Bytes& ct) -> std::optional<Bit> {
    auto plain = primitives::pke_dec(dec_key, ct);
    if (!plain) return std::nullopt;
    return byte_to_bit(*plain);
  };
  return ops;
}

BaseOps sym_base() {
  BaseOps ops;
  ops.keygen = [](Rng& rng) {
    Bytes key = primitives::sym_keygen(rng);
    return std::make_pair(key, key);
  };
  ops.encrypt_bit = [](const Bytes& enc_key, Bit value, Rng& rng) {
    return primitives::sym_enc(enc_key, Bytes{value}, rng);
  };
  ops.decrypt_bit = [](const Bytes& dec_key, const Bytes& ct) -> std::optional<Bit> {
    auto plain = primitives::sym_dec(dec_key, ct);
    if (!plain) return std::nullopt;
    return byte_to_bit(*plain);
  };
  return ops;
}

RnceKeyMaterial rnce_keygen(std::size_t plaintext_bits, const BaseOps& base, Rng& rng) {
  check_slots(plaintext_bits);
  RnceKeyMaterial material;
  material.z = rng.bits(plaintext_bits);
  material.aux.z_star = rng.bits(plaintext_bits);
  material.enc_key.slots.reserve(plaintext_bits);
  material.aux.slots.reserve(plaintext_bits);
  material.dec_key.slots.reserve(plaintext_bits);
  for (std::size_t i = 0; i < plaintext_bits; ++i) {
    auto [ek0, dk0] = base.keygen(rng);
    auto [ek1, dk1] = base.keygen(rng);
    const Bit z = material.z[i];
    material.dec_key.slots.push_back({z, z ? dk1 : dk0});
    material.enc_key.slots.emplace_back(std::move(ek0), std::move(ek1));
    material.aux.slots.emplace_back(std::move(dk0), std::move(dk1));
  }
  return material;
}

RnceCiphertext rnce_enc(const RnceEncKey& enc_key, const BitString& message,
                        const BaseOps& base, Rng& rng) {
  if (message.size() != enc_key.slots.size())
    throw std::invalid_argument("rnce_enc: message length mismatch");
  RnceCiphertext ct;
  ct.slots.reserve(message.size());
  for (std::size_t i = 0; i < message.size(); ++i) {
    ct.slots.emplace_back(base.encrypt_bit(enc_key.slots[i].first, message[i], rng),
                          base.encrypt_bit(enc_key.slots[i].second, message[i], rng));
  }
  return ct;
}

std::optional<BitString> rnce_dec(const RnceDecKey& dec_key, const RnceCiphertext& ct,
                                  const BaseOps& base) {
  if (dec_key.slots.size() != ct.slots.size()) return std::nullopt;
  BitString message(ct.slots.size());
  for (std::size_t i = 0; i < ct.slots.size(); ++i) {
    const auto& slot = dec_key.slots[i];
    const Bytes& component = slot.index ? ct.slots[i].second : ct.slots[i].first;
    const auto bit = base.decrypt_bit(slot.key, component);
    if (!bit) return std::nullopt;
    message[i] = *bit;
  }
  return message;
}

RnceCiphertext rnce_fake(const RnceEncKey& enc_key, const RnceDecKey& dec_key,
                         const RnceAux& aux, const BaseOps& base, Rng& rng) {
  if (aux.slots.empty() || aux.slots.size() != enc_key.slots.size() ||
      aux.z_star.size() != enc_key.slots.size())
    throw std::invalid_argument("rnce_fake: missing or mismatched aux");
  if (dec_key.slots.size() != enc_key.slots.size())
    throw std::invalid_argument("rnce_fake: mismatched secret key");
  RnceCiphertext ct;
  ct.slots.reserve(enc_key.slots.size());
  for (std::size_t i = 0; i < enc_key.slots.size(); ++i) {
    // Component z*_i encrypts 0, the other component encrypts 1, i.e.
    // component b carries b xor z*_i.
    const Bit z_star = aux.z_star[i];
    ct.slots.emplace_back(base.encrypt_bit(enc_key.slots[i].first, z_star, rng),
                          base.encrypt_bit(enc_key.slots[i].second, z_star ^ 1u, rng));
  }
  return ct;
}

RnceDecKey rnce_reveal(const RnceEncKey& enc_key, const RnceDecKey& dec_key, const RnceAux& aux,
                       const RnceCiphertext& fake_ct, const BitString& m_star) {
  (void)dec_key;
  if (m_star.size() != aux.slots.size())
    throw std::invalid_argument("rnce_reveal: message length mismatch");
  if (fake_ct.slots.size() != aux.slots.size())
    throw std::invalid_argument("rnce_reveal: ciphertext slot count mismatch");
  if (enc_key.slots.size() != aux.slots.size())
    throw std::invalid_argument("rnce_reveal: key slot count mismatch");
  RnceDecKey revealed;
  revealed.slots.reserve(aux.slots.size());
  for (std::size_t i = 0; i < aux.slots.size(); ++i) {
    const Bit index = aux.z_star[i] ^ m_star[i];
    revealed.slots.push_back({index, index ? aux.slots[i].second : aux.slots[i].first});
  }
  return revealed;
}

Bytes encode_ciphertext(const RnceCiphertext& ct) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(ct.slots.size()));
  for (const auto& [c0, c1] : ct.slots) {
    w.blob(c0);
    w.blob(c1);
  }
  return w.take();
}

RnceCiphertext decode_ciphertext(const Bytes& data) {
  ByteReader r(data);
  RnceCiphertext ct;
  const std::uint32_t count = r.u32();
  ct.slots.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Bytes c0 = r.blob();
    Bytes c1 = r.blob();
    ct.slots.emplace_back(std::move(c0), std::move(c1));
  }
  r.expect_end();
  return ct;
}

Bytes encode_enc_key(const RnceEncKey& key) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(key.slots.size()));
  for (const auto& [k0, k1] : key.slots) {
    w.blob(k0);
    w.blob(k1);
  }
  return w.take();
}

RnceEncKey decode_enc_key(const Bytes& data) {
  ByteReader r(data);
  RnceEncKey key;
  const std::uint32_t count = r.u32();
  key.slots.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Bytes k0 = r.blob();
    Bytes k1 = r.blob();
    key.slots.emplace_back(std::move(k0), std::move(k1));
  }
  r.expect_end();
  return key;
}

Bytes encode_dec_key(const RnceDecKey& key) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(key.slots.size()));
  for (const auto& slot : key.slots) {
    w.u8(slot.index);
    w.blob(slot.key);
  }
  return w.take();
}

RnceDecKey decode_dec_key(const Bytes& data) {
  ByteReader r(data);
  RnceDecKey key;
  const std::uint32_t count = r.u32();
  key.slots.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    RnceDecKey::Slot slot;
    slot.index = r.u8();
    if (slot.index > 1) throw DecodeError("bad component index");
    slot.key = r.blob();
    key.slots.push_back(std::move(slot));
  }
  r.expect_end();
  return key;
}

Bytes encode_aux(const RnceAux& aux) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(aux.slots.size()));
  for (const auto& [dk0, dk1] : aux.slots) {
    w.blob(dk0);
    w.blob(dk1);
  }
  w.blob(pack_bits(aux.z_star));
  return w.take();
}

RnceAux decode_aux(const Bytes& data) {
  ByteReader r(data);
  RnceAux aux;
  const std::uint32_t count = r.u32();
  aux.slots.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Bytes dk0 = r.blob();
    Bytes dk1 = r.blob();
    aux.slots.emplace_back(std::move(dk0), std::move(dk1));
  }
  aux.z_star = unpack_bits(r.blob(), count);
  r.expect_end();
  return aux;
}

}  // namespace cdsim::rnce
