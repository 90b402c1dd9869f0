#include "cdsim/otske.hpp"

#include <stdexcept>

namespace cdsim::otske {

namespace {

void check_plaintext_bits(std::size_t ell) {
  if (ell < kMinPlaintextBits || ell > kMaxPlaintextBits)
    throw std::invalid_argument("plaintext bit length out of range [1, 8]");
}

}  // namespace

std::vector<int> OtskeKey::computational_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bases.size(); ++i)
    if (bases[i] == 0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> OtskeKey::hadamard_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bases.size(); ++i)
    if (bases[i] == 1) out.push_back(static_cast<int>(i));
  return out;
}

BitString OtskeKey::to_bits() const {
  BitWriter w;
  w.append_label(bases.size(), 8);
  w.append_label(plaintext_bits, 8);
  w.append(bases);
  w.append(payload);
  return w.bits();
}

OtskeKey OtskeKey::from_bits(const BitString& bits) {
  BitReader r(bits);
  OtskeKey key;
  const auto kappa = static_cast<std::size_t>(r.read_label(8));
  key.plaintext_bits = static_cast<std::size_t>(r.read_label(8));
  if (kappa == 0 || kappa > static_cast<std::size_t>(qsim::kMaxQubits))
    throw std::invalid_argument("OtskeKey: kappa out of range");
  key.bases = r.read(kappa);
  key.payload = r.read(kappa);
  if (!r.exhausted()) throw std::invalid_argument("OtskeKey: trailing bits");
  if (kappa - hamming_weight(key.bases) != key.plaintext_bits)
    throw std::invalid_argument("OtskeKey: basis weight inconsistent with ell");
  return key;
}

OtskeCiphertext::OtskeCiphertext(qsim::QubitRegister quantum, BitString classical_pad)
    : register_(std::move(quantum)), classical_pad_(std::move(classical_pad)) {}

qsim::QubitRegister OtskeCiphertext::consume(const char* operation) {
  if (consumed_)
    throw std::logic_error(std::string("ciphertext already consumed; cannot ") + operation);
  consumed_ = true;
  return std::move(register_);
}

OtskeKey otske_keygen(std::size_t plaintext_bits, Rng& rng) {
  check_plaintext_bits(plaintext_bits);
  const std::size_t kappa = 2 * plaintext_bits;
  OtskeKey key;
  key.plaintext_bits = plaintext_bits;
  key.bases.assign(kappa, 1);
  for (auto position : rng.subset(static_cast<std::uint32_t>(kappa),
                                  static_cast<std::uint32_t>(plaintext_bits)))
    key.bases[position] = 0;
  key.payload = rng.bits(kappa);
  return key;
}

OtskeCiphertext otske_enc(const OtskeKey& key, const BitString& message) {
  if (message.size() != key.plaintext_bits)
    throw std::invalid_argument("otske_enc: message length mismatch");
  BitString pad;
  pad.reserve(key.plaintext_bits);
  for (int position : key.computational_positions())
    pad.push_back(key.payload[static_cast<std::size_t>(position)]);
  return OtskeCiphertext(qsim::prepare_bb84(key.payload, key.bases), xor_bits(message, pad));
}

BitString otske_dec(const OtskeKey& key, OtskeCiphertext& ct, Rng& rng) {
  if (ct.quantum().num_qubits() != static_cast<int>(key.total_qubits()))
    throw std::invalid_argument("otske_dec: qubit count mismatch");
  const qsim::QubitRegister reg = ct.consume("decrypt");
  auto [record, post] =
      qsim::measure(reg, key.computational_positions(), qsim::Basis::Computational, rng);
  (void)post;
  return xor_bits(ct.classical_pad(), record.outcome);
}

DeletionCert otske_del(OtskeCiphertext& ct, Rng& rng) {
  const qsim::QubitRegister reg = ct.consume("delete");
  std::vector<int> all(static_cast<std::size_t>(reg.num_qubits()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  auto [record, post] = qsim::measure(reg, all, qsim::Basis::Hadamard, rng);
  ct.retain_post_deletion(std::move(post));
  return DeletionCert{record.outcome};
}

bool otske_vrfy(const OtskeKey& key, const DeletionCert& cert) {
  if (cert.bits.size() != key.total_qubits())
    throw std::invalid_argument("otske_vrfy: certificate length mismatch");
  for (int position : key.hadamard_positions()) {
    const auto i = static_cast<std::size_t>(position);
    if (cert.bits[i] != key.payload[i]) return false;
  }
  return true;
}

}  // namespace cdsim::otske
