#pragma once

#include <cstdint>
#include <optional>

#include "cdsim/bits.hpp"
#include "cdsim/qsim.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::otske {

inline constexpr std::size_t kMinPlaintextBits = 1;
inline constexpr std::size_t kMaxPlaintextBits = 8;
inline constexpr std::size_t kHeaderBits = 16;  // kappa byte + ell byte

// One-time key (theta, r): theta has exactly ell zeros (computational
// positions, which carry the pad) and kappa - ell ones (Hadamard positions,
// which back the deletion certificate). The key doubles as the verification
// key.
struct OtskeKey {
  BitString bases;          // theta
  BitString payload;        // r
  std::size_t plaintext_bits = 0;  // ell

  std::size_t total_qubits() const { return bases.size(); }  // kappa
  std::vector<int> computational_positions() const;          // ascending, theta_i = 0
  std::vector<int> hadamard_positions() const;               // ascending, theta_i = 1

  // Fixed-width packing (kappa, ell, theta, r): kHeaderBits + 2 kappa bits.
  BitString to_bits() const;
  static OtskeKey from_bits(const BitString& bits);
  static std::size_t encoded_bits(std::size_t kappa) { return kHeaderBits + 2 * kappa; }
};

struct DeletionCert {
  BitString bits;  // kappa Hadamard outcomes
};

// Quantum one-time ciphertext. Single-use: decryption or deletion consumes
// it; the post-deletion register stays readable for experiments.
class OtskeCiphertext {
public:
  OtskeCiphertext(qsim::QubitRegister quantum, BitString classical_pad);

  const qsim::QubitRegister& quantum() const { return register_; }
  const BitString& classical_pad() const { return classical_pad_; }
  bool consumed() const { return consumed_; }
  const std::optional<qsim::QubitRegister>& post_deletion_register() const {
    return post_deletion_;
  }

  qsim::QubitRegister consume(const char* operation);
  void retain_post_deletion(qsim::QubitRegister collapsed) { post_deletion_ = std::move(collapsed); }

private:
  qsim::QubitRegister register_;
  BitString classical_pad_;  // c, ell bits
  bool consumed_ = false;
  std::optional<qsim::QubitRegister> post_deletion_;
};

// kappa = 2 ell; theta uniform over weight-(kappa - ell) strings, r uniform.
OtskeKey otske_keygen(std::size_t plaintext_bits, Rng& rng);

// quantum part = BB84 encoding of r under theta; classical pad
// c = m xor (r restricted to computational positions, ascending).
OtskeCiphertext otske_enc(const OtskeKey& key, const BitString& message);

// Measures the computational positions and strips the pad; exact on honest
// ciphertexts.
BitString otske_dec(const OtskeKey& key, OtskeCiphertext& ct, Rng& rng);

// Hadamard-measures every qubit; the outcomes are the certificate.
DeletionCert otske_del(OtskeCiphertext& ct, Rng& rng);

// Accepts iff cert agrees with r on every Hadamard position.
bool otske_vrfy(const OtskeKey& key, const DeletionCert& cert);

}  // namespace cdsim::otske
