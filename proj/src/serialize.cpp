#include "cdsim/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "cdsim/bytes.hpp"

namespace cdsim::serialize {

namespace {

bool known_type(std::uint8_t t) {
  switch (static_cast<FileType>(t)) {
    case FileType::PkecdPublicKey:
    case FileType::PkecdSecretKey:
    case FileType::PkecdVerificationKey:
    case FileType::PkecdCert:
    case FileType::PkecdCiphertext:
    case FileType::SkecdKey:
    case FileType::CcPublicKey:
    case FileType::CcSecretKey:
    case FileType::CcVerificationKey:
    case FileType::CcCert:
    case FileType::CcCiphertext:
    case FileType::Transcript:
      return true;
  }
  return false;
}

void write_pkecd_params(ByteWriter& w, const pkecd::Params& params) {
  w.u8(static_cast<std::uint8_t>(params.message_bits));
  w.u8(static_cast<std::uint8_t>(params.base));
  w.u16(static_cast<std::uint16_t>(params.security_level));
}

pkecd::Params read_pkecd_params(ByteReader& r) {
  pkecd::Params params;
  params.message_bits = r.u8();
  params.base = static_cast<primitives::PkeSchemeId>(r.u8());
  params.security_level = r.u16();
  if (params.base != primitives::PkeSchemeId::RegevRef &&
      params.base != primitives::PkeSchemeId::TestStub)
    throw DecodeError("bad base scheme id");
  return params;
}

Bytes pack_bitstring(const BitString& bits) {
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(bits.size()));
  w.raw(pack_bits(bits));
  return w.take();
}

BitString unpack_bitstring(ByteReader& r) {
  const std::uint16_t count = r.u16();
  return unpack_bits(r.raw((count + 7) / 8), count);
}

Bytes encode_otske_ciphertext(const otske::OtskeCiphertext& ct) {
  ByteWriter w;
  w.blob(pack_bitstring(ct.classical_pad()));
  w.u8(ct.consumed() ? 1 : 0);
  w.blob(qsim::serialize_register(ct.quantum()));
  return w.take();
}

otske::OtskeCiphertext decode_otske_ciphertext(ByteReader& r) {
  const Bytes pad_data = r.blob();
  ByteReader pad_reader(pad_data);
  BitString pad = unpack_bitstring(pad_reader);
  pad_reader.expect_end();
  const std::uint8_t consumed = r.u8();
  if (consumed) throw DecodeError("refusing to load a consumed ciphertext");
  qsim::QubitRegister reg = qsim::deserialize_register(r.blob());
  return otske::OtskeCiphertext(std::move(reg), std::move(pad));
}

}  // namespace

Bytes encode_envelope(const Envelope& envelope) {
  ByteWriter w;
  w.magic(kMagic);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(envelope.type));
  w.u8(envelope.flags);
  w.blob(envelope.payload);
  return w.take();
}

Envelope decode_envelope(const Bytes& data, std::optional<FileType> expected_type) {
  ByteReader r(data);
  r.expect_magic(kMagic);
  const std::uint8_t version = r.u8();
  if (version != kVersion) throw DecodeError("unsupported file version");
  const std::uint8_t type = r.u8();
  if (!known_type(type)) throw DecodeError("unknown file type");
  Envelope envelope;
  envelope.type = static_cast<FileType>(type);
  envelope.flags = r.u8();
  envelope.payload = r.blob();
  r.expect_end();
  if (expected_type && envelope.type != *expected_type)
    throw DecodeError("file has the wrong type for this operation");
  return envelope;
}

Bytes encode_pkecd_public(const pkecd::Params& params, const rnce::RnceEncKey& pk) {
  ByteWriter w;
  write_pkecd_params(w, params);
  w.blob(rnce::encode_enc_key(pk));
  return encode_envelope({FileType::PkecdPublicKey, 0, w.take()});
}

std::pair<pkecd::Params, rnce::RnceEncKey> decode_pkecd_public(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::PkecdPublicKey);
  ByteReader r(env.payload);
  pkecd::Params params = read_pkecd_params(r);
  rnce::RnceEncKey pk = rnce::decode_enc_key(r.blob());
  r.expect_end();
  return {params, std::move(pk)};
}

Bytes encode_pkecd_secret(const pkecd::Params& params, const rnce::RnceDecKey& sk) {
  ByteWriter w;
  write_pkecd_params(w, params);
  w.blob(rnce::encode_dec_key(sk));
  return encode_envelope({FileType::PkecdSecretKey, kFlagSecretKeyMaterial, w.take()});
}

std::pair<pkecd::Params, rnce::RnceDecKey> decode_pkecd_secret(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::PkecdSecretKey);
  ByteReader r(env.payload);
  pkecd::Params params = read_pkecd_params(r);
  rnce::RnceDecKey sk = rnce::decode_dec_key(r.blob());
  r.expect_end();
  return {params, std::move(sk)};
}

Bytes encode_pkecd_verification_key(const pkecd::VerificationKey& vk) {
  return encode_envelope(
      {FileType::PkecdVerificationKey, kFlagSecretKeyMaterial, pack_bitstring(vk.to_bits())});
}

pkecd::VerificationKey decode_pkecd_verification_key(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::PkecdVerificationKey);
  ByteReader r(env.payload);
  BitString bits = unpack_bitstring(r);
  r.expect_end();
  return otske::OtskeKey::from_bits(bits);
}

Bytes encode_pkecd_cert(const otske::DeletionCert& cert) {
  return encode_envelope({FileType::PkecdCert, 0, pack_bitstring(cert.bits)});
}

otske::DeletionCert decode_pkecd_cert(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::PkecdCert);
  ByteReader r(env.payload);
  otske::DeletionCert cert{unpack_bitstring(r)};
  r.expect_end();
  return cert;
}

Bytes encode_pkecd_ciphertext(const pkecd::Ciphertext& ct) {
  ByteWriter w;
  w.blob(rnce::encode_ciphertext(ct.key_ct));
  w.blob(encode_otske_ciphertext(ct.pad_ct));
  return encode_envelope({FileType::PkecdCiphertext, kFlagSimulationSecret, w.take()});
}

pkecd::Ciphertext decode_pkecd_ciphertext(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::PkecdCiphertext);
  ByteReader r(env.payload);
  rnce::RnceCiphertext key_ct = rnce::decode_ciphertext(r.blob());
  const Bytes inner = r.blob();
  ByteReader inner_reader(inner);
  otske::OtskeCiphertext pad_ct = decode_otske_ciphertext(inner_reader);
  inner_reader.expect_end();
  r.expect_end();
  return {std::move(key_ct), std::move(pad_ct)};
}

Bytes encode_skecd_key(const pkecd::SkecdKey& key) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(key.params.message_bits));
  w.blob(rnce::encode_enc_key(key.ek));
  w.blob(rnce::encode_dec_key(key.dk));
  w.blob(rnce::encode_aux(key.aux));
  return encode_envelope({FileType::SkecdKey, kFlagSecretKeyMaterial, w.take()});
}

pkecd::SkecdKey decode_skecd_key(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::SkecdKey);
  ByteReader r(env.payload);
  pkecd::SkecdKey key;
  key.params.message_bits = r.u8();
  key.ek = rnce::decode_enc_key(r.blob());
  key.dk = rnce::decode_dec_key(r.blob());
  key.aux = rnce::decode_aux(r.blob());
  r.expect_end();
  return key;
}

Bytes encode_cc_params(const cccd::Params& params) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(params.n));
  w.u8(static_cast<std::uint8_t>(params.preimage_bits));
  w.u16(static_cast<std::uint16_t>(params.lambda_bits));
  w.u16(static_cast<std::uint16_t>(params.message_bits));
  w.u8(static_cast<std::uint8_t>(params.base));
  w.u16(static_cast<std::uint16_t>(params.security_level));
  return w.take();
}

cccd::Params decode_cc_params(ByteReader& reader) {
  cccd::Params params;
  params.n = reader.u8();
  params.preimage_bits = reader.u8();
  params.lambda_bits = reader.u16();
  params.message_bits = reader.u16();
  params.base = static_cast<primitives::PkeSchemeId>(reader.u8());
  params.security_level = reader.u16();
  params.validate();
  return params;
}

Bytes encode_cc_public(const cccd::KeyPair& keys) {
  ByteWriter w;
  w.raw(encode_cc_params(keys.params));
  w.blob(rnce::encode_enc_key(keys.nce_pk));
  w.blob(keys.ow_pk);
  return encode_envelope({FileType::CcPublicKey, 0, w.take()});
}

std::tuple<cccd::Params, rnce::RnceEncKey, Bytes> decode_cc_public(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::CcPublicKey);
  ByteReader r(env.payload);
  cccd::Params params = decode_cc_params(r);
  rnce::RnceEncKey pk = rnce::decode_enc_key(r.blob());
  Bytes ow_pk = r.blob();
  r.expect_end();
  return {params, std::move(pk), std::move(ow_pk)};
}

Bytes encode_cc_secret(const cccd::KeyPair& keys) {
  ByteWriter w;
  w.raw(encode_cc_params(keys.params));
  w.blob(rnce::encode_dec_key(keys.nce_sk));
  w.blob(keys.ow_sk);
  return encode_envelope({FileType::CcSecretKey, kFlagSecretKeyMaterial, w.take()});
}

std::tuple<cccd::Params, rnce::RnceDecKey, Bytes> decode_cc_secret(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::CcSecretKey);
  ByteReader r(env.payload);
  cccd::Params params = decode_cc_params(r);
  rnce::RnceDecKey sk = rnce::decode_dec_key(r.blob());
  Bytes ow_sk = r.blob();
  r.expect_end();
  return {params, std::move(sk), std::move(ow_sk)};
}

Bytes encode_cc_verification_key(const cccd::CcVerificationKey& vk) {
  ByteWriter w;
  w.raw(encode_cc_params(vk.params));
  w.u16(static_cast<std::uint16_t>(vk.entries.size()));
  for (const auto& entry : vk.entries) {
    w.u16(static_cast<std::uint16_t>(entry.index));
    w.blob(cccd::encode_trapdoor(entry.trapdoor));
    w.u32(entry.image);
  }
  return encode_envelope({FileType::CcVerificationKey, kFlagSecretKeyMaterial, w.take()});
}

cccd::CcVerificationKey decode_cc_verification_key(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::CcVerificationKey);
  ByteReader r(env.payload);
  cccd::CcVerificationKey vk;
  vk.params = decode_cc_params(r);
  const std::uint16_t count = r.u16();
  vk.entries.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    cccd::CcVerificationKey::Entry entry;
    entry.index = r.u16();
    entry.trapdoor = cccd::decode_trapdoor(r.blob());
    entry.image = r.u32();
    vk.entries.push_back(std::move(entry));
  }
  r.expect_end();
  return vk;
}

Bytes encode_cc_cert(const cccd::CcCert& cert) {
  return encode_envelope({FileType::CcCert, 0, cccd::encode_cert(cert)});
}

cccd::CcCert decode_cc_cert(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::CcCert);
  return cccd::decode_cert(env.payload);
}

Bytes encode_cc_ciphertext(const cccd::CcCiphertext& ct) {
  ByteWriter w;
  w.raw(encode_cc_params(ct.params));
  w.u16(static_cast<std::uint16_t>(ct.instances.size()));
  for (const auto& holder : ct.instances) {
    const auto& s = holder.state;
    w.u8(static_cast<std::uint8_t>(s.mode));
    w.u8(static_cast<std::uint8_t>(s.preimage_bits));
    w.u32(s.image);
    w.u32(s.preimage0);
    w.u32(s.preimage1);
    w.u8(s.branch);
    w.u32(s.preimage);
    if (holder.label_map.is_identity()) {
      w.u8(0);
    } else {
      w.u8(1);
      for (std::uint32_t x = 0; x < (std::uint32_t{1} << s.preimage_bits); ++x)
        w.u16(static_cast<std::uint16_t>(holder.label_map(x)));
    }
    w.u8(holder.consumed ? 1 : 0);
  }
  w.blob(rnce::encode_ciphertext(ct.nce_ct));
  w.blob(ct.ow_ct);
  w.u16(static_cast<std::uint16_t>(ct.ct_msg.size()));
  w.raw(pack_bits(ct.ct_msg));
  return encode_envelope({FileType::CcCiphertext, kFlagSimulationSecret, w.take()});
}

cccd::CcCiphertext decode_cc_ciphertext(const Bytes& data) {
  const Envelope env = decode_envelope(data, FileType::CcCiphertext);
  ByteReader r(env.payload);
  cccd::CcCiphertext ct;
  ct.params = decode_cc_params(r);
  const std::uint16_t count = r.u16();
  ct.instances.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    cccd::InstanceHolder holder;
    auto& s = holder.state;
    const std::uint8_t mode = r.u8();
    if (mode > 1) throw DecodeError("bad instance mode");
    s.mode = static_cast<ntcf::ClawMode>(mode);
    s.preimage_bits = r.u8();
    s.image = r.u32();
    s.preimage0 = r.u32();
    s.preimage1 = r.u32();
    s.branch = r.u8();
    s.preimage = r.u32();
    const std::uint8_t label_flag = r.u8();
    if (label_flag == 1) {
      std::vector<std::uint32_t> table(std::size_t{1} << s.preimage_bits);
      for (auto& v : table) v = r.u16();
      holder.label_map = ntcf::LabelMap::from_table(s.preimage_bits, std::move(table));
    } else if (label_flag == 0) {
      holder.label_map = ntcf::LabelMap::identity(s.preimage_bits);
    } else {
      throw DecodeError("bad label map flag");
    }
    holder.consumed = r.u8() != 0;
    ct.instances.push_back(std::move(holder));
  }
  ct.nce_ct = rnce::decode_ciphertext(r.blob());
  ct.ow_ct = r.blob();
  const std::uint16_t bits = r.u16();
  ct.ct_msg = unpack_bits(r.raw((bits + 7) / 8), bits);
  r.expect_end();
  return ct;
}

Bytes encode_transcript(const Bytes& transcript) {
  return encode_envelope({FileType::Transcript, 0, transcript});
}

Bytes decode_transcript(const Bytes& data) {
  return decode_envelope(data, FileType::Transcript).payload;
}

void write_file(const std::string& path, const Bytes& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

}  // namespace cdsim::serialize
