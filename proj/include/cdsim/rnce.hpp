#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cdsim/bits.hpp"
#include "cdsim/primitives.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::rnce {

inline constexpr std::size_t kMaxPlaintextBits = 4096;

// Base encryption operations the double-encryption construction is built on.
// The public-key base uses (pk, sk) pairs; the secret-key base uses one
// symmetric key on both sides. Bits travel through the base scheme as single
// bytes 0x00 / 0x01.
struct BaseOps {
  std::function<std::pair<Bytes, Bytes>(Rng&)> keygen;  // -> (enc key, dec key)
  std::function<Bytes(const Bytes& enc_key, Bit value, Rng&)> encrypt_bit;
  std::function<std::optional<Bit>(const Bytes& dec_key, const Bytes& ct)> decrypt_bit;
};

BaseOps pke_base(primitives::PkeSchemeId scheme_id, int security_level = 128);
BaseOps sym_base();

// Per bit slot i: the pair of base encryption keys (index 0 and 1).
struct RnceEncKey {
  std::vector<std::pair<Bytes, Bytes>> slots;
  std::size_t plaintext_bits() const { return slots.size(); }
};

// Per slot: which component the holder can open, and the base key for it.
struct RnceDecKey {
  struct Slot {
    Bit index = 0;
    Bytes key;
  };
  std::vector<Slot> slots;
};

// Trapdoor side: both base decryption keys per slot plus the fake index
// string z*.
struct RnceAux {
  std::vector<std::pair<Bytes, Bytes>> slots;
  BitString z_star;
};

struct RnceKeyMaterial {
  RnceEncKey enc_key;
  RnceDecKey dec_key;
  RnceAux aux;
  BitString z;  // honest component indices
};

struct RnceCiphertext {
  std::vector<std::pair<Bytes, Bytes>> slots;
  std::size_t slot_count() const { return slots.size(); }
};

RnceKeyMaterial rnce_keygen(std::size_t plaintext_bits, const BaseOps& base, Rng& rng);

RnceCiphertext rnce_enc(const RnceEncKey& enc_key, const BitString& message,
                        const BaseOps& base, Rng& rng);

std::optional<BitString> rnce_dec(const RnceDecKey& dec_key, const RnceCiphertext& ct,
                                  const BaseOps& base);

// Component z*_i encrypts 0, component 1 - z*_i encrypts 1; carries no
// information about any plaintext.
RnceCiphertext rnce_fake(const RnceEncKey& enc_key, const RnceDecKey& dec_key,
                         const RnceAux& aux, const BaseOps& base, Rng& rng);

// The fake key that opens a fake ciphertext to m*: slot i uses component
// z*_i xor m*_i.
RnceDecKey rnce_reveal(const RnceEncKey& enc_key, const RnceDecKey& dec_key, const RnceAux& aux,
                       const RnceCiphertext& fake_ct, const BitString& m_star);

// Serialization: slot-count header, then per-slot length-prefixed component
// pairs. Aux carries secret key material and is serialized only into test
// artifacts.
Bytes encode_ciphertext(const RnceCiphertext& ct);
RnceCiphertext decode_ciphertext(const Bytes& data);
Bytes encode_enc_key(const RnceEncKey& key);
RnceEncKey decode_enc_key(const Bytes& data);
Bytes encode_dec_key(const RnceDecKey& key);
RnceDecKey decode_dec_key(const Bytes& data);
Bytes encode_aux(const RnceAux& aux);
RnceAux decode_aux(const Bytes& data);

}  // namespace cdsim::rnce
