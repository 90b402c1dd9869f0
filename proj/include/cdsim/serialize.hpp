#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "cdsim/bytes.hpp"
#include "cdsim/cc_pke_cd.hpp"
#include "cdsim/pke_cd.hpp"

namespace cdsim::serialize {

// Versioned file envelope: magic "CDS1", version byte, type byte, flags byte,
// length-prefixed payload.
inline constexpr char kMagic[5] = "CDS1";
inline constexpr std::uint8_t kVersion = 1;

enum class FileType : std::uint8_t {
  PkecdPublicKey = 0x01,
  PkecdSecretKey = 0x02,
  PkecdVerificationKey = 0x03,
  PkecdCert = 0x04,
  PkecdCiphertext = 0x05,
  SkecdKey = 0x06,
  CcPublicKey = 0x10,
  CcSecretKey = 0x11,
  CcVerificationKey = 0x12,
  CcCert = 0x13,
  CcCiphertext = 0x14,
  Transcript = 0x20,
};

// Flag bits marking sensitive content.
inline constexpr std::uint8_t kFlagSecretKeyMaterial = 0x01;
inline constexpr std::uint8_t kFlagSimulationSecret = 0x02;

struct Envelope {
  FileType type;
  std::uint8_t flags = 0;
  Bytes payload;
};

Bytes encode_envelope(const Envelope& envelope);
Envelope decode_envelope(const Bytes& data,
                         std::optional<FileType> expected_type = std::nullopt);

// Hybrid public-key scheme artifacts.
Bytes encode_pkecd_public(const pkecd::Params& params, const rnce::RnceEncKey& pk);
std::pair<pkecd::Params, rnce::RnceEncKey> decode_pkecd_public(const Bytes& data);
Bytes encode_pkecd_secret(const pkecd::Params& params, const rnce::RnceDecKey& sk);
std::pair<pkecd::Params, rnce::RnceDecKey> decode_pkecd_secret(const Bytes& data);
Bytes encode_pkecd_verification_key(const pkecd::VerificationKey& vk);
pkecd::VerificationKey decode_pkecd_verification_key(const Bytes& data);
Bytes encode_pkecd_cert(const otske::DeletionCert& cert);
otske::DeletionCert decode_pkecd_cert(const Bytes& data);
Bytes encode_pkecd_ciphertext(const pkecd::Ciphertext& ct);
pkecd::Ciphertext decode_pkecd_ciphertext(const Bytes& data);

// Reusable secret-key scheme artifacts.
Bytes encode_skecd_key(const pkecd::SkecdKey& key);
pkecd::SkecdKey decode_skecd_key(const Bytes& data);

// Classical-communication scheme artifacts.
Bytes encode_cc_params(const cccd::Params& params);
cccd::Params decode_cc_params(ByteReader& reader);
Bytes encode_cc_public(const cccd::KeyPair& keys);
std::tuple<cccd::Params, rnce::RnceEncKey, Bytes> decode_cc_public(const Bytes& data);
Bytes encode_cc_secret(const cccd::KeyPair& keys);
std::tuple<cccd::Params, rnce::RnceDecKey, Bytes> decode_cc_secret(const Bytes& data);
Bytes encode_cc_verification_key(const cccd::CcVerificationKey& vk);
cccd::CcVerificationKey decode_cc_verification_key(const Bytes& data);
Bytes encode_cc_cert(const cccd::CcCert& cert);
cccd::CcCert decode_cc_cert(const Bytes& data);
Bytes encode_cc_ciphertext(const cccd::CcCiphertext& ct);
cccd::CcCiphertext decode_cc_ciphertext(const Bytes& data);

Bytes encode_transcript(const Bytes& transcript);
Bytes decode_transcript(const Bytes& data);

void write_file(const std::string& path, const Bytes& data);
Bytes read_file(const std::string& path);

}  // namespace cdsim::serialize
