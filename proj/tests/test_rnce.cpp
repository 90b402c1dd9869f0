#include <doctest.h>

#include "cdsim/bytes.hpp"
#include "cdsim/rnce.hpp"

using namespace cdsim;
using namespace cdsim::rnce;

namespace {

const BaseOps kStub = pke_base(primitives::PkeSchemeId::TestStub);

BitString bits_of(std::uint64_t value, std::size_t width) { return label_to_bits(value, width); }

}  // namespace

TEST_CASE("keygen structure") {
  SUBCASE("seeded determinism of z and z*") {
    Rng a(3), b(3);
    const auto ka = rnce_keygen(1, kStub, a);
    const auto kb = rnce_keygen(1, kStub, b);
    CHECK(ka.z == kb.z);
    CHECK(ka.aux.z_star == kb.aux.z_star);
    CHECK(encode_enc_key(ka.enc_key) == encode_enc_key(kb.enc_key));
  }
  SUBCASE("eight slots mean sixteen base key pairs") {
    Rng rng(4);
    const auto keys = rnce_keygen(8, kStub, rng);
    CHECK(keys.enc_key.slots.size() == 8);
    CHECK(keys.aux.slots.size() == 8);
    std::size_t base_keys = 0;
    for (const auto& slot : keys.enc_key.slots) {
      CHECK(!slot.first.empty());
      CHECK(!slot.second.empty());
      base_keys += 2;
    }
    CHECK(base_keys == 16);
  }
  SUBCASE("honest slot i holds (z_i, dk_{i, z_i})") {
    Rng rng(5);
    const auto keys = rnce_keygen(6, kStub, rng);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(keys.dec_key.slots[i].index == keys.z[i]);
      const auto& expected =
          keys.z[i] ? keys.aux.slots[i].second : keys.aux.slots[i].first;
      CHECK(keys.dec_key.slots[i].key == expected);
    }
  }
  SUBCASE("bounds") {
    Rng rng(6);
    CHECK_THROWS_AS(rnce_keygen(0, kStub, rng), std::invalid_argument);
    CHECK_THROWS_AS(rnce_keygen(4097, kStub, rng), std::invalid_argument);
  }
}

TEST_CASE("encryption duplicates the bit across both components") {
  Rng rng(7);
  const auto keys = rnce_keygen(2, kStub, rng);
  const auto ct = rnce_enc(keys.enc_key, {1, 0}, kStub, rng);
  REQUIRE(ct.slots.size() == 2);
  // Both components of slot i decrypt to m_i under their own keys.
  for (std::size_t i = 0; i < 2; ++i) {
    const Bit expected = i == 0 ? 1 : 0;
    const auto b0 = kStub.decrypt_bit(keys.aux.slots[i].first, ct.slots[i].first);
    const auto b1 = kStub.decrypt_bit(keys.aux.slots[i].second, ct.slots[i].second);
    REQUIRE(b0.has_value());
    REQUIRE(b1.has_value());
    CHECK(*b0 == expected);
    CHECK(*b1 == expected);
  }
  CHECK_THROWS_AS(rnce_enc(keys.enc_key, {1}, kStub, rng), std::invalid_argument);
}

TEST_CASE("randomized base gives distinct ciphertexts for equal messages") {
  Rng rng(8);
  const auto base = pke_base(primitives::PkeSchemeId::RegevRef);
  const auto keys = rnce_keygen(1, base, rng);
  const auto c1 = rnce_enc(keys.enc_key, {1}, base, rng);
  const auto c2 = rnce_enc(keys.enc_key, {1}, base, rng);
  CHECK(encode_ciphertext(c1) != encode_ciphertext(c2));
  const auto m1 = rnce_dec(keys.dec_key, c1, base);
  REQUIRE(m1.has_value());
  CHECK(*m1 == BitString{1});
}

TEST_CASE("decryption is exhaustive-correct for small widths") {
  Rng rng(9);
  for (std::size_t width = 1; width <= 3; ++width) {
    const auto keys = rnce_keygen(width, kStub, rng);
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
      const BitString m = bits_of(value, width);
      auto ct = rnce_enc(keys.enc_key, m, kStub, rng);
      const auto back = rnce_dec(keys.dec_key, ct, kStub);
      REQUIRE(back.has_value());
      CHECK(*back == m);
    }
  }
}

TEST_CASE("slot count mismatch is a decode failure") {
  Rng rng(10);
  const auto keys = rnce_keygen(2, kStub, rng);
  auto ct = rnce_enc(keys.enc_key, {0, 1}, kStub, rng);
  ct.slots.pop_back();
  CHECK_FALSE(rnce_dec(keys.dec_key, ct, kStub).has_value());
}

TEST_CASE("fake ciphertext structure") {
  Rng rng(11);
  SUBCASE("z* = 0 encrypts (0, 1); z* = 1 encrypts (1, 0)") {
    for (int target = 0; target <= 1; ++target) {
      // Draw keygens until z* matches the case under test.
      for (int attempt = 0; attempt < 64; ++attempt) {
        const auto keys = rnce_keygen(1, kStub, rng);
        if (keys.aux.z_star[0] != target) continue;
        auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
        const auto c0 = kStub.decrypt_bit(keys.aux.slots[0].first, fake.slots[0].first);
        const auto c1 = kStub.decrypt_bit(keys.aux.slots[0].second, fake.slots[0].second);
        REQUIRE(c0.has_value());
        REQUIRE(c1.has_value());
        // Component b decrypts to b xor z*.
        CHECK(*c0 == (0 ^ target));
        CHECK(*c1 == (1 ^ target));
        break;
      }
    }
  }
  SUBCASE("component b decrypts to b xor z*, all slots") {
    const auto keys = rnce_keygen(5, kStub, rng);
    auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto c0 = kStub.decrypt_bit(keys.aux.slots[i].first, fake.slots[i].first);
      const auto c1 = kStub.decrypt_bit(keys.aux.slots[i].second, fake.slots[i].second);
      CHECK(*c0 == (0 ^ keys.aux.z_star[i]));
      CHECK(*c1 == (1 ^ keys.aux.z_star[i]));
    }
  }
  SUBCASE("missing aux is rejected") {
    const auto keys = rnce_keygen(2, kStub, rng);
    RnceAux empty;
    CHECK_THROWS_AS(rnce_fake(keys.enc_key, keys.dec_key, empty, kStub, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("reveal opens the fake ciphertext to any chosen message") {
  Rng rng(12);
  SUBCASE("revealed index is z* xor m*") {
    const auto keys = rnce_keygen(4, kStub, rng);
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
    const BitString m_star = rng.bits(4);
    const auto revealed = rnce_reveal(keys.enc_key, keys.dec_key, keys.aux, fake, m_star);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(revealed.slots[i].index == (keys.aux.z_star[i] ^ m_star[i]));
      const auto& expected =
          revealed.slots[i].index ? keys.aux.slots[i].second : keys.aux.slots[i].first;
      CHECK(revealed.slots[i].key == expected);
    }
  }
  SUBCASE("zero message reveals the z* components") {
    const auto keys = rnce_keygen(3, kStub, rng);
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
    const auto revealed =
        rnce_reveal(keys.enc_key, keys.dec_key, keys.aux, fake, BitString(3, 0));
    for (std::size_t i = 0; i < 3; ++i) CHECK(revealed.slots[i].index == keys.aux.z_star[i]);
  }
  SUBCASE("exhaustive reveal consistency for widths up to 3") {
    for (std::size_t width = 1; width <= 3; ++width) {
      const auto keys = rnce_keygen(width, kStub, rng);
      const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
      for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
        const BitString m_star = bits_of(value, width);
        const auto revealed = rnce_reveal(keys.enc_key, keys.dec_key, keys.aux, fake, m_star);
        const auto opened = rnce_dec(revealed, fake, kStub);
        REQUIRE(opened.has_value());
        CHECK(*opened == m_star);
      }
    }
  }
  SUBCASE("honest key decrypts a fake ciphertext to z xor z*") {
    // Dec uses component z_i, which carries z_i xor z*_i; so whenever
    // z = z* xor m*, the honest key already opens the fake ciphertext to m*.
    const auto keys = rnce_keygen(4, kStub, rng);
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
    const auto opened = rnce_dec(keys.dec_key, fake, kStub);
    REQUIRE(opened.has_value());
    CHECK(*opened == xor_bits(keys.z, keys.aux.z_star));
  }
  SUBCASE("length mismatch is rejected") {
    const auto keys = rnce_keygen(2, kStub, rng);
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, kStub, rng);
    CHECK_THROWS_AS(rnce_reveal(keys.enc_key, keys.dec_key, keys.aux, fake, BitString(3, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("fake and honest ciphertexts are structurally indistinguishable") {
  Rng rng(13);
  for (const auto scheme : {primitives::PkeSchemeId::TestStub, primitives::PkeSchemeId::RegevRef}) {
    const auto base = pke_base(scheme);
    const std::size_t width = scheme == primitives::PkeSchemeId::TestStub ? 3 : 1;
    const auto keys = rnce_keygen(width, base, rng);
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, base, rng);
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
      const auto honest = rnce_enc(keys.enc_key, bits_of(value, width), base, rng);
      REQUIRE(honest.slots.size() == fake.slots.size());
      for (std::size_t i = 0; i < honest.slots.size(); ++i) {
        CHECK(honest.slots[i].first.size() == fake.slots[i].first.size());
        CHECK(honest.slots[i].second.size() == fake.slots[i].second.size());
      }
    }
  }
}

TEST_CASE("secret-key variant mirrors the public-key construction") {
  Rng rng(14);
  const auto base = sym_base();
  for (std::size_t width = 1; width <= 3; ++width) {
    const auto keys = rnce_keygen(width, base, rng);
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
      const BitString m = bits_of(value, width);
      const auto ct = rnce_enc(keys.enc_key, m, base, rng);
      const auto back = rnce_dec(keys.dec_key, ct, base);
      REQUIRE(back.has_value());
      CHECK(*back == m);
    }
    const auto fake = rnce_fake(keys.enc_key, keys.dec_key, keys.aux, base, rng);
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
      const BitString m_star = bits_of(value, width);
      const auto revealed = rnce_reveal(keys.enc_key, keys.dec_key, keys.aux, fake, m_star);
      const auto opened = rnce_dec(revealed, fake, base);
      REQUIRE(opened.has_value());
      CHECK(*opened == m_star);
    }
  }
}

TEST_CASE("serialization round-trips") {
  Rng rng(15);
  const auto keys = rnce_keygen(3, kStub, rng);
  const auto ct = rnce_enc(keys.enc_key, {1, 0, 1}, kStub, rng);

  const auto ct2 = decode_ciphertext(encode_ciphertext(ct));
  CHECK(ct2.slots == ct.slots);
  const auto ek2 = decode_enc_key(encode_enc_key(keys.enc_key));
  CHECK(ek2.slots == keys.enc_key.slots);
  const auto dk2 = decode_dec_key(encode_dec_key(keys.dec_key));
  REQUIRE(dk2.slots.size() == keys.dec_key.slots.size());
  for (std::size_t i = 0; i < dk2.slots.size(); ++i) {
    CHECK(dk2.slots[i].index == keys.dec_key.slots[i].index);
    CHECK(dk2.slots[i].key == keys.dec_key.slots[i].key);
  }
  const auto aux2 = decode_aux(encode_aux(keys.aux));
  CHECK(aux2.slots == keys.aux.slots);
  CHECK(aux2.z_star == keys.aux.z_star);

  Bytes corrupted = encode_ciphertext(ct);
  corrupted.resize(corrupted.size() - 3);
  CHECK_THROWS_AS(decode_ciphertext(corrupted), DecodeError);
}
