#include "cdsim/primitives.hpp"

#include <openssl/evp.h>

#include <Eigen/Dense>
#include <stdexcept>

#include "cdsim/bytes.hpp"

namespace cdsim::primitives {

namespace {

constexpr char kKeyMagic[5] = "CDP1";
constexpr std::uint8_t kPublicTag = 0x01;
constexpr std::uint8_t kSecretTag = 0x02;
constexpr std::uint8_t kCiphertextTag = 0x03;

// Regev parameters. With binary combination vectors and noise in {-1, 0, 1},
// the accumulated error is at most `rows` in absolute value, which stays
// strictly below q/4; decryption is therefore correct for every key and
// message (failure probability 0 <= 2^-40).
struct RegevParams {
  int dimension;  // n, secret length
  int rows;       // m, sample count
  int modulus;    // q
};

RegevParams regev_params(int security_level) {
  switch (security_level) {
    case 128:
      return {256, 512, 12289};
    case 192:
      return {384, 768, 12289};
    default:
      throw std::invalid_argument("security level must be 128 or 192");
  }
}

using IntMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1>;
using LongVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

int mod_q(std::int64_t v, int q) {
  const std::int64_t r = v % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

struct RegevPublicKey {
  RegevParams params{};
  IntMatrix samples;   // m x n matrix A
  IntVector syndrome;  // b = A s + e  (length m)
};

struct RegevSecretKey {
  RegevParams params{};
  IntVector secret;  // s (length n)
};

void write_params(ByteWriter& w, const RegevParams& p) {
  w.u16(static_cast<std::uint16_t>(p.dimension));
  w.u16(static_cast<std::uint16_t>(p.rows));
  w.u16(static_cast<std::uint16_t>(p.modulus));
}

RegevParams read_params(ByteReader& r) {
  RegevParams p;
  p.dimension = r.u16();
  p.rows = r.u16();
  p.modulus = r.u16();
  if (p.dimension <= 0 || p.rows <= 0 || p.modulus <= 1)
    throw DecodeError("bad Regev parameters");
  return p;
}

Bytes encode_regev_public(const RegevPublicKey& pk) {
  ByteWriter w;
  w.magic(kKeyMagic);
  w.u8(static_cast<std::uint8_t>(PkeSchemeId::RegevRef));
  w.u8(kPublicTag);
  write_params(w, pk.params);
  for (int i = 0; i < pk.params.rows; ++i)
    for (int j = 0; j < pk.params.dimension; ++j)
      w.u16(static_cast<std::uint16_t>(pk.samples(i, j)));
  for (int i = 0; i < pk.params.rows; ++i) w.u16(static_cast<std::uint16_t>(pk.syndrome(i)));
  return w.take();
}

RegevPublicKey decode_regev_public(ByteReader& r) {
  RegevPublicKey pk;
  pk.params = read_params(r);
  pk.samples.resize(pk.params.rows, pk.params.dimension);
  for (int i = 0; i < pk.params.rows; ++i)
    for (int j = 0; j < pk.params.dimension; ++j) pk.samples(i, j) = r.u16();
  pk.syndrome.resize(pk.params.rows);
  for (int i = 0; i < pk.params.rows; ++i) pk.syndrome(i) = r.u16();
  r.expect_end();
  return pk;
}

Bytes encode_regev_secret(const RegevSecretKey& sk) {
  ByteWriter w;
  w.magic(kKeyMagic);
  w.u8(static_cast<std::uint8_t>(PkeSchemeId::RegevRef));
  w.u8(kSecretTag);
  write_params(w, sk.params);
  for (int i = 0; i < sk.params.dimension; ++i) w.u16(static_cast<std::uint16_t>(sk.secret(i)));
  return w.take();
}

RegevSecretKey decode_regev_secret(ByteReader& r) {
  RegevSecretKey sk;
  sk.params = read_params(r);
  sk.secret.resize(sk.params.dimension);
  for (int i = 0; i < sk.params.dimension; ++i) sk.secret(i) = r.u16();
  r.expect_end();
  return sk;
}

PkeKeyPair regev_keygen(int security_level, Rng& rng) {
  const RegevParams p = regev_params(security_level);
  RegevPublicKey pk;
  pk.params = p;
  pk.samples.resize(p.rows, p.dimension);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.dimension; ++j)
      pk.samples(i, j) = static_cast<std::int32_t>(rng.uniform(p.modulus));

  RegevSecretKey sk;
  sk.params = p;
  sk.secret.resize(p.dimension);
  for (int i = 0; i < p.dimension; ++i)
    sk.secret(i) = static_cast<std::int32_t>(rng.uniform(p.modulus));

  pk.syndrome.resize(p.rows);
  const LongVector as = pk.samples.cast<std::int64_t>() * sk.secret.cast<std::int64_t>();
  for (int i = 0; i < p.rows; ++i) {
    const auto noise = static_cast<std::int64_t>(rng.uniform(3)) - 1;  // {-1, 0, 1}
    pk.syndrome(i) = mod_q(as(i) + noise, p.modulus);
  }
  return {PkeSchemeId::RegevRef, encode_regev_public(pk), encode_regev_secret(sk)};
}

Bytes regev_enc(const RegevPublicKey& pk, const Bytes& plaintext, Rng& rng) {
  const RegevParams& p = pk.params;
  const BitString bits = unpack_bits(plaintext, plaintext.size() * 8);

  ByteWriter w;
  w.magic(kKeyMagic);
  w.u8(static_cast<std::uint8_t>(PkeSchemeId::RegevRef));
  w.u8(kCiphertextTag);
  write_params(w, p);
  w.u32(static_cast<std::uint32_t>(plaintext.size()));
  for (Bit bit : bits) {
    // Binary combination of the public samples.
    LongVector u = LongVector::Zero(p.dimension);
    std::int64_t c = bit ? (p.modulus / 2) : 0;
    for (int i = 0; i < p.rows; ++i) {
      if (rng.bit()) {
        u += pk.samples.row(i).cast<std::int64_t>();
        c += pk.syndrome(i);
      }
    }
    for (int j = 0; j < p.dimension; ++j) w.u16(static_cast<std::uint16_t>(mod_q(u(j), p.modulus)));
    w.u16(static_cast<std::uint16_t>(mod_q(c, p.modulus)));
  }
  return w.take();
}

std::optional<Bytes> regev_dec(const RegevSecretKey& sk, ByteReader& r) {
  const RegevParams p = read_params(r);
  if (p.dimension != sk.params.dimension || p.modulus != sk.params.modulus) return std::nullopt;
  const std::uint32_t byte_count = r.u32();
  const std::size_t bit_count = std::size_t{byte_count} * 8;
  if (r.remaining() != bit_count * (p.dimension + 1) * 2) return std::nullopt;

  BitString bits(bit_count);
  for (std::size_t k = 0; k < bit_count; ++k) {
    std::int64_t dotp = 0;
    for (int j = 0; j < p.dimension; ++j)
      dotp += static_cast<std::int64_t>(r.u16()) * sk.secret(j);
    const int c = r.u16();
    int diff = mod_q(c - dotp, p.modulus);
    if (diff > p.modulus / 2) diff -= p.modulus;
    bits[k] = static_cast<Bit>(std::abs(diff) > p.modulus / 4 ? 1 : 0);
  }
  return pack_bits(bits);
}

constexpr std::size_t kStubKeyBytes = 32;
constexpr std::size_t kStubPlaintextBound = 4096;

PkeKeyPair stub_keygen(Rng& rng) {
  ByteWriter pk;
  pk.magic(kKeyMagic);
  pk.u8(static_cast<std::uint8_t>(PkeSchemeId::TestStub));
  pk.u8(kPublicTag);
  pk.blob(rng.bytes(kStubKeyBytes));
  Bytes pk_bytes = pk.take();

  // The stub stores the same pad key on both sides.
  Bytes sk_bytes = pk_bytes;
  sk_bytes[5] = kSecretTag;
  return {PkeSchemeId::TestStub, std::move(pk_bytes), std::move(sk_bytes)};
}

Bytes stub_pad(const Bytes& key, std::size_t len) {
  Bytes input;
  input.push_back(0x53);  // 'S' pad separator
  input.insert(input.end(), key.begin(), key.end());
  return shake256(input, len);
}

struct ParsedKey {
  PkeSchemeId scheme;
  std::uint8_t tag;
  ByteReader reader;
};

ParsedKey parse_header(const Bytes& data) {
  ByteReader r(data);
  r.expect_magic(kKeyMagic);
  const auto scheme = static_cast<PkeSchemeId>(r.u8());
  if (scheme != PkeSchemeId::RegevRef && scheme != PkeSchemeId::TestStub)
    throw DecodeError("unknown scheme id");
  const std::uint8_t tag = r.u8();
  return {scheme, tag, std::move(r)};
}

}  // namespace

PkeKeyPair pke_keygen(PkeSchemeId scheme_id, int security_level, Rng& rng) {
  switch (scheme_id) {
    case PkeSchemeId::RegevRef:
      return regev_keygen(security_level, rng);
    case PkeSchemeId::TestStub:
      return stub_keygen(rng);
  }
  throw std::invalid_argument("unsupported scheme id");
}

Bytes pke_enc(const Bytes& public_key, const Bytes& plaintext, Rng& rng) {
  ParsedKey key = parse_header(public_key);
  if (key.tag != kPublicTag) throw DecodeError("not a public key");
  if (plaintext.size() > pke_plaintext_bound(public_key))
    throw std::invalid_argument("plaintext exceeds scheme bound");
  if (key.scheme == PkeSchemeId::RegevRef) {
    return regev_enc(decode_regev_public(key.reader), plaintext, rng);
  }
  const Bytes pad_key = key.reader.blob();
  key.reader.expect_end();
  ByteWriter w;
  w.magic(kKeyMagic);
  w.u8(static_cast<std::uint8_t>(PkeSchemeId::TestStub));
  w.u8(kCiphertextTag);
  Bytes body = stub_pad(pad_key, plaintext.size());
  for (std::size_t i = 0; i < plaintext.size(); ++i) body[i] ^= plaintext[i];
  w.blob(body);
  return w.take();
}

std::optional<Bytes> pke_dec(const Bytes& secret_key, const Bytes& ciphertext) {
  try {
    ParsedKey key = parse_header(secret_key);
    if (key.tag != kSecretTag) return std::nullopt;
    ParsedKey ct = parse_header(ciphertext);
    if (ct.tag != kCiphertextTag || ct.scheme != key.scheme) return std::nullopt;
    if (key.scheme == PkeSchemeId::RegevRef) {
      return regev_dec(decode_regev_secret(key.reader), ct.reader);
    }
    const Bytes pad_key = key.reader.blob();
    key.reader.expect_end();
    Bytes body = ct.reader.blob();
    ct.reader.expect_end();
    const Bytes pad = stub_pad(pad_key, body.size());
    for (std::size_t i = 0; i < body.size(); ++i) body[i] ^= pad[i];
    return body;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

std::size_t pke_plaintext_bound(const Bytes& public_key) {
  ParsedKey key = parse_header(public_key);
  if (key.scheme == PkeSchemeId::TestStub) return kStubPlaintextBound;
  return 512;  // bitwise encryption; keep ciphertexts desk-sized
}

Bytes sym_keygen(Rng& rng) { return rng.bytes(kStubKeyBytes); }

Bytes sym_enc(const Bytes& key, const Bytes& plaintext, Rng& rng) {
  const Bytes nonce = rng.bytes(16);
  Bytes input;
  input.push_back(0x4e);  // 'N'
  input.insert(input.end(), key.begin(), key.end());
  input.insert(input.end(), nonce.begin(), nonce.end());
  Bytes stream = shake256(input, plaintext.size());
  ByteWriter w;
  w.blob(nonce);
  for (std::size_t i = 0; i < plaintext.size(); ++i) stream[i] ^= plaintext[i];
  w.blob(stream);
  return w.take();
}

std::optional<Bytes> sym_dec(const Bytes& key, const Bytes& ciphertext) {
  try {
    ByteReader r(ciphertext);
    const Bytes nonce = r.blob();
    Bytes body = r.blob();
    r.expect_end();
    if (nonce.size() != 16) return std::nullopt;
    Bytes input;
    input.push_back(0x4e);
    input.insert(input.end(), key.begin(), key.end());
    input.insert(input.end(), nonce.begin(), nonce.end());
    const Bytes stream = shake256(input, body.size());
    for (std::size_t i = 0; i < body.size(); ++i) body[i] ^= stream[i];
    return body;
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

Bytes ro_hash(const RandomOracle& oracle, const Bytes& input) {
  if (oracle.domain_tag.size() > 255)
    throw std::invalid_argument("domain tag longer than 255 bytes");
  Bytes material;
  material.reserve(1 + oracle.domain_tag.size() + input.size());
  material.push_back(static_cast<std::uint8_t>(oracle.domain_tag.size()));
  material.insert(material.end(), oracle.domain_tag.begin(), oracle.domain_tag.end());
  material.insert(material.end(), input.begin(), input.end());
  return shake256(material, oracle.output_len);
}

Bytes shake256(const Bytes& input, std::size_t output_len) {
  if (output_len == 0) return {};
  Bytes out(output_len);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, input.data(), input.size()) == 1 &&
            EVP_DigestFinalXOF(ctx, out.data(), out.size()) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHAKE-256 evaluation failed");
  return out;
}

}  // namespace cdsim::primitives
