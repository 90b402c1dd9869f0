#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cdsim/bits.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::primitives {

enum class PkeSchemeId : std::uint8_t {
  RegevRef = 1,  // small Regev-style lattice scheme, bitwise encryption
  TestStub = 2,  // stored-key XOF pad; deterministic and INSECURE, tests only
};

// Keys and ciphertexts are self-describing byte strings: magic "CDP1",
// scheme id byte, then big-endian length-prefixed fields.
struct PkeKeyPair {
  PkeSchemeId scheme_id;
  Bytes public_key;
  Bytes secret_key;
};

// security_level is the nominal lambda in {128, 192}; TestStub ignores it.
PkeKeyPair pke_keygen(PkeSchemeId scheme_id, int security_level, Rng& rng);
Bytes pke_enc(const Bytes& public_key, const Bytes& plaintext, Rng& rng);
std::optional<Bytes> pke_dec(const Bytes& secret_key, const Bytes& ciphertext);

// Largest plaintext (bytes) accepted by pke_enc for this key.
std::size_t pke_plaintext_bound(const Bytes& public_key);

// Reusable symmetric scheme (XOF stream with a random nonce); the secret-key
// RNCE base.
Bytes sym_keygen(Rng& rng);
Bytes sym_enc(const Bytes& key, const Bytes& plaintext, Rng& rng);
std::optional<Bytes> sym_dec(const Bytes& key, const Bytes& ciphertext);

// Deterministic hash modeled as the random oracle: SHAKE-256 over
// tag_len(1 byte) || tag || payload, squeezed to output_len bytes. Distinct
// domain tags give independent functions.
struct RandomOracle {
  std::string domain_tag;
  std::size_t output_len = 32;
};

Bytes ro_hash(const RandomOracle& oracle, const Bytes& input);

// Raw SHAKE-256 XOF (used by ro_hash and the stream cipher).
Bytes shake256(const Bytes& input, std::size_t output_len);

}  // namespace cdsim::primitives
