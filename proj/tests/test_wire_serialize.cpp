#include <doctest.h>

#include <thread>

#include "cdsim/bytes.hpp"
#include "cdsim/cc_pke_cd.hpp"
#include "cdsim/serialize.hpp"
#include "cdsim/wire.hpp"

using namespace cdsim;

TEST_CASE("frame encoding") {
  const wire::Frame frame{wire::MessageType::Images, Bytes{1, 2, 3}};
  const Bytes encoded = wire::encode_frame(frame);
  CHECK(encoded.size() == 4 + 1 + 3);
  CHECK(encoded[0] == 0);
  CHECK(encoded[3] == 4);  // length = type byte + payload
  CHECK(encoded[4] == 0x02);
  const auto back = wire::decode_frame(encoded);
  CHECK(back.type == frame.type);
  CHECK(back.payload == frame.payload);

  SUBCASE("corruption is detected") {
    Bytes truncated = encoded;
    truncated.pop_back();
    CHECK_THROWS_AS(wire::decode_frame(truncated), DecodeError);
    Bytes bad_type = encoded;
    bad_type[4] = 0x7f;
    CHECK_THROWS_AS(wire::decode_frame(bad_type), DecodeError);
    Bytes zero_len = encoded;
    zero_len[3] = 0;
    CHECK_THROWS_AS(wire::decode_frame(zero_len), DecodeError);
  }
}

TEST_CASE("channel pair delivers frames across threads") {
  auto pair = wire::make_channel_pair();
  std::thread peer([&] {
    const auto frame = pair.b->recv();
    pair.b->send({wire::MessageType::Abort, {}});
    CHECK(frame.type == wire::MessageType::Keys);
  });
  pair.a->send({wire::MessageType::Keys, Bytes{9}});
  const auto reply = pair.a->recv();
  peer.join();
  CHECK(reply.type == wire::MessageType::Abort);
}

TEST_CASE("loopback TCP pair round-trips frames") {
  auto pair = wire::make_loopback_pair();
  std::thread peer([&] {
    const auto frame = pair.b->recv();
    pair.b->send({wire::MessageType::SkReveal, frame.payload});
  });
  const Bytes payload(1000, 0xab);
  pair.a->send({wire::MessageType::Cert, payload});
  const auto reply = pair.a->recv();
  peer.join();
  CHECK(reply.type == wire::MessageType::SkReveal);
  CHECK(reply.payload == payload);
}

TEST_CASE("message payload codecs round-trip") {
  Rng rng(1);
  SUBCASE("claw keys and trapdoors") {
    for (int w : {2, 5}) {
      auto [fkey, ftd] = ntcf::gen_f(w, rng);
      const auto fkey2 = cccd::decode_claw_key(cccd::encode_claw_key(fkey));
      CHECK(fkey2.mode == fkey.mode);
      CHECK(fkey2.forward == fkey.forward);
      CHECK(fkey2.key_id == fkey.key_id);
      const auto ftd2 = cccd::decode_trapdoor(cccd::encode_trapdoor(ftd));
      CHECK(ftd2.inverse == ftd.inverse);
      CHECK(ftd2.forward == ftd.forward);

      auto [gkey, gtd] = ntcf::gen_g(w, rng);
      const auto gkey2 = cccd::decode_claw_key(cccd::encode_claw_key(gkey));
      CHECK(gkey2.mode == gkey.mode);
      CHECK(gkey2.forward == gkey.forward);
      const auto gtd2 = cccd::decode_trapdoor(cccd::encode_trapdoor(gtd));
      CHECK(gtd2.inverse == gtd.inverse);
    }
  }
  SUBCASE("a non-permutation table is rejected") {
    auto [key, td] = ntcf::gen_f(2, rng);
    auto data = cccd::encode_claw_key(key);
    // Overwrite the first table entry with a duplicate of the second.
    ByteReader r(data);
    r.u8();
    r.u8();
    r.raw(8);
    r.u8();
    const std::size_t offset = data.size() - r.remaining();
    data[offset] = data[offset + 2];
    data[offset + 1] = data[offset + 3];
    CHECK_THROWS_AS(cccd::decode_claw_key(data), DecodeError);
  }
  SUBCASE("certificates") {
    cccd::CcCert cert;
    cert.entries.push_back({1, {1, 0, 1}});
    cert.entries.push_back({0, {0, 1, 1}});
    const auto back = cccd::decode_cert(cccd::encode_cert(cert));
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].e == 1);
    CHECK(back.entries[0].d == BitString{1, 0, 1});
    CHECK(back.entries[1].d == BitString{0, 1, 1});
  }
}

namespace {

cccd::Params quick_params() {
  cccd::Params params;
  params.n = 1;
  params.preimage_bits = 2;
  params.message_bits = 8;
  params.base = primitives::PkeSchemeId::TestStub;
  return params;
}

}  // namespace

TEST_CASE("file envelopes") {
  Rng rng(2);

  SUBCASE("pkecd artifacts round-trip") {
    pkecd::Params params;
    params.message_bits = 3;
    const auto keys = pkecd::pkecd_keygen(params, rng);
    const auto pk_file = serialize::encode_pkecd_public(params, keys.pk);
    auto [params2, pk2] = serialize::decode_pkecd_public(pk_file);
    CHECK(params2.message_bits == 3);
    CHECK(rnce::encode_enc_key(pk2) == rnce::encode_enc_key(keys.pk));

    const auto sk_file = serialize::encode_pkecd_secret(params, keys.sk);
    CHECK((serialize::decode_envelope(sk_file).flags & serialize::kFlagSecretKeyMaterial) != 0);
    auto [params3, sk2] = serialize::decode_pkecd_secret(sk_file);
    CHECK(rnce::encode_dec_key(sk2) == rnce::encode_dec_key(keys.sk));

    auto [vk, ct] = pkecd::pkecd_enc(params, keys.pk, {1, 0, 1}, rng);
    const auto vk_file = serialize::encode_pkecd_verification_key(vk);
    const auto vk2 = serialize::decode_pkecd_verification_key(vk_file);
    CHECK(vk2.to_bits() == vk.to_bits());

    const auto ct_file = serialize::encode_pkecd_ciphertext(ct);
    CHECK((serialize::decode_envelope(ct_file).flags & serialize::kFlagSimulationSecret) != 0);
    auto ct2 = serialize::decode_pkecd_ciphertext(ct_file);
    Rng dec_rng(3);
    const auto back = pkecd::pkecd_dec(params, keys.sk, ct2, dec_rng);
    REQUIRE(back.has_value());
    CHECK(*back == BitString{1, 0, 1});

    const auto cert = pkecd::pkecd_del(ct, rng);
    const auto cert2 = serialize::decode_pkecd_cert(serialize::encode_pkecd_cert(cert));
    CHECK(cert2.bits == cert.bits);
  }

  SUBCASE("cc artifacts round-trip end to end") {
    const auto params = quick_params();
    Rng key_rng(4);
    const auto keys = cccd::cc_keygen(params, key_rng);
    const cccd::PublicKeyView pk{params, &keys.nce_pk, &keys.ow_pk};
    const auto result = cccd::run_interactive_encryption(pk, parse_bits("11001010"), 10, 20,
                                                         cccd::TransportKind::InProcess);
    REQUIRE_FALSE(result.aborted);

    const auto pk_file = serialize::encode_cc_public(keys);
    auto [p2, nce_pk2, ow_pk2] = serialize::decode_cc_public(pk_file);
    CHECK(p2.n == params.n);
    CHECK(ow_pk2 == keys.ow_pk);

    const auto sk_file = serialize::encode_cc_secret(keys);
    auto [p3, nce_sk2, ow_sk2] = serialize::decode_cc_secret(sk_file);

    const auto vk_file = serialize::encode_cc_verification_key(*result.vk);
    const auto vk2 = serialize::decode_cc_verification_key(vk_file);
    CHECK(vk2.entries.size() == result.vk->entries.size());

    const auto ct_file = serialize::encode_cc_ciphertext(*result.ct);
    auto ct2 = serialize::decode_cc_ciphertext(ct_file);
    Rng dec_rng(5);
    const cccd::SecretKeyView sk{nce_sk2, ow_sk2};
    CHECK(cccd::cc_dec(sk, ct2, dec_rng) == parse_bits("11001010"));

    auto ct3 = serialize::decode_cc_ciphertext(ct_file);
    Rng del_rng(6);
    const auto cert = cccd::cc_del(ct3, del_rng);
    const auto cert_file = serialize::encode_cc_cert(cert);
    const auto cert2 = serialize::decode_cc_cert(cert_file);
    CHECK(cccd::cc_vrfy(vk2, cert2) == cccd::cc_vrfy(*result.vk, cert));

    const auto tr_file = serialize::encode_transcript(result.transcript);
    CHECK(serialize::decode_transcript(tr_file) == result.transcript);
  }

  SUBCASE("corruption and version skew are detected") {
    const auto params = quick_params();
    Rng key_rng(7);
    const auto keys = cccd::cc_keygen(params, key_rng);
    auto file = serialize::encode_cc_public(keys);

    Bytes bad_magic = file;
    bad_magic[0] ^= 0xff;
    CHECK_THROWS_AS(serialize::decode_envelope(bad_magic), DecodeError);

    Bytes bad_version = file;
    bad_version[4] = 9;
    CHECK_THROWS_AS(serialize::decode_envelope(bad_version), DecodeError);

    Bytes truncated = file;
    truncated.resize(truncated.size() / 2);
    CHECK_THROWS_AS(serialize::decode_cc_public(truncated), DecodeError);

    CHECK_THROWS_AS(serialize::decode_cc_secret(file), DecodeError);  // wrong type
  }
}
