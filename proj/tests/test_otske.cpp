#include <doctest.h>

#include <cmath>
#include <map>

#include "cdsim/otske.hpp"

using namespace cdsim;
using namespace cdsim::otske;

namespace {

// Every basis string of length kappa with exactly ell zeros.
std::vector<BitString> all_basis_strings(std::size_t kappa, std::size_t ell) {
  std::vector<BitString> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << kappa); ++mask) {
    const BitString bits = label_to_bits(mask, kappa);
    if (kappa - hamming_weight(bits) == ell) out.push_back(bits);
  }
  return out;
}

OtskeKey make_key(BitString bases, BitString payload) {
  OtskeKey key;
  key.plaintext_bits = bases.size() - hamming_weight(bases);
  key.bases = std::move(bases);
  key.payload = std::move(payload);
  return key;
}

}  // namespace

TEST_CASE("keygen structure and distribution") {
  SUBCASE("ell = 2 gives kappa = 4 with exactly two zeros") {
    Rng rng(1);
    const auto key = otske_keygen(2, rng);
    CHECK(key.total_qubits() == 4);
    CHECK(key.plaintext_bits == 2);
    CHECK(hamming_weight(key.bases) == 2);
    CHECK(key.computational_positions().size() == 2);
  }
  SUBCASE("fixed seed reproduces the key") {
    Rng a(2), b(2);
    const auto ka = otske_keygen(3, a);
    const auto kb = otske_keygen(3, b);
    CHECK(ka.bases == kb.bases);
    CHECK(ka.payload == kb.payload);
  }
  SUBCASE("basis string is uniform over weight-2 patterns of length 4") {
    Rng rng(3);
    std::map<std::uint64_t, int> counts;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) counts[bits_to_label(otske_keygen(2, rng).bases)]++;
    CHECK(counts.size() == 6);
    const double expect = trials / 6.0;
    const double sigma = std::sqrt(trials * (1.0 / 6.0) * (5.0 / 6.0));
    for (const auto& [pattern, count] : counts)
      CHECK(std::abs(count - expect) <= 3.0 * sigma);
  }
  SUBCASE("bounds") {
    Rng rng(4);
    CHECK_THROWS_AS(otske_keygen(0, rng), std::invalid_argument);
    CHECK_THROWS_AS(otske_keygen(9, rng), std::invalid_argument);
  }
}

TEST_CASE("encryption pads with the computational positions of r") {
  SUBCASE("worked example: theta=0011, r=1010, m=01") {
    const auto key = make_key({0, 0, 1, 1}, {1, 0, 1, 0});
    const auto ct = otske_enc(key, {0, 1});
    // Positions 0,1 are computational; pad = 10; c = 01 xor 10 = 11.
    CHECK(ct.classical_pad() == BitString{1, 1});
  }
  SUBCASE("encrypting the pad itself gives an all-zero classical part") {
    Rng rng(5);
    const auto key = otske_keygen(3, rng);
    BitString pad;
    for (int pos : key.computational_positions())
      pad.push_back(key.payload[static_cast<std::size_t>(pos)]);
    const auto ct = otske_enc(key, pad);
    CHECK(ct.classical_pad() == BitString(3, 0));
  }
  SUBCASE("quantum part equals prepare_bb84(r, theta) amplitude for amplitude") {
    Rng rng(6);
    const auto key = otske_keygen(2, rng);
    const auto ct = otske_enc(key, {0, 0});
    const auto reference = qsim::prepare_bb84(key.payload, key.bases);
    for (Eigen::Index i = 0; i < reference.dim(); ++i)
      CHECK(ct.quantum().amplitudes()(i) == reference.amplitudes()(i));
  }
  SUBCASE("length mismatch") {
    Rng rng(7);
    const auto key = otske_keygen(2, rng);
    CHECK_THROWS_AS(otske_enc(key, {0}), std::invalid_argument);
  }
}

TEST_CASE("decryption is exact on honest ciphertexts, exhaustively at kappa = 4") {
  Rng rng(8);
  for (const auto& bases : all_basis_strings(4, 2)) {
    for (std::uint64_t r = 0; r < 16; ++r) {
      for (std::uint64_t m = 0; m < 4; ++m) {
        const auto key = make_key(bases, label_to_bits(r, 4));
        const BitString message = label_to_bits(m, 2);
        auto ct = otske_enc(key, message);
        CHECK(otske_dec(key, ct, rng) == message);
      }
    }
  }
}

TEST_CASE("after deletion the decryption distribution is uniform and payload-independent") {
  Rng rng(9);
  // Delete, then measure the computational positions of the retained
  // post-deletion state: exactly uniform for every payload.
  const BitString bases{0, 1, 0, 1};
  for (std::uint64_t r = 0; r < 16; ++r) {
    const auto key = make_key(bases, label_to_bits(r, 4));
    auto ct = otske_enc(key, {0, 0});
    const auto cert = otske_del(ct, rng);
    REQUIRE(ct.post_deletion_register().has_value());
    const auto table = qsim::born_distribution(*ct.post_deletion_register(),
                                               key.computational_positions(),
                                               qsim::Basis::Computational);
    for (std::size_t s = 0; s < 4; ++s)
      CHECK(table.probability(s) == doctest::Approx(0.25).epsilon(1e-9));
  }
}

TEST_CASE("wrong qubit count is rejected") {
  Rng rng(10);
  const auto key2 = otske_keygen(2, rng);
  const auto key3 = otske_keygen(3, rng);
  auto ct = otske_enc(key3, {0, 0, 0});
  CHECK_THROWS_AS(otske_dec(key2, ct, rng), std::invalid_argument);
}

TEST_CASE("deletion certificates") {
  Rng rng(11);
  SUBCASE("Hadamard positions reproduce r with probability 1") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto key = otske_keygen(3, rng);
      auto ct = otske_enc(key, {1, 0, 1});
      const auto cert = otske_del(ct, rng);
      for (int pos : key.hadamard_positions())
        CHECK(cert.bits[static_cast<std::size_t>(pos)] ==
              key.payload[static_cast<std::size_t>(pos)]);
    }
  }
  SUBCASE("computational positions yield uniform bits") {
    Rng mc(12);
    const auto key = make_key({0, 1, 0, 1}, {1, 1, 0, 0});
    int ones_pos0 = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
      auto ct = otske_enc(key, {0, 0});
      const auto cert = otske_del(ct, mc);
      ones_pos0 += cert.bits[0];
    }
    const double sigma = std::sqrt(trials * 0.25);
    CHECK(std::abs(ones_pos0 - trials / 2.0) <= 3.0 * sigma);
  }
  SUBCASE("full certificate distribution matches the Born table at kappa = 4") {
    Rng mc(13);
    const auto key = make_key({0, 0, 1, 1}, {1, 0, 1, 0});
    const auto reference = qsim::born_distribution(
        qsim::prepare_bb84(key.payload, key.bases), {0, 1, 2, 3}, qsim::Basis::Hadamard);
    std::map<std::uint64_t, int> counts;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
      auto ct = otske_enc(key, {0, 0});
      counts[bits_to_label(otske_del(ct, mc).bits)]++;
    }
    for (std::uint64_t outcome = 0; outcome < 16; ++outcome) {
      const double p = reference.probability(outcome);
      const double observed = counts[outcome] / static_cast<double>(trials);
      const double sigma = std::sqrt(p * (1 - p) / trials);
      if (p == 0.0) {
        CHECK(counts[outcome] == 0);
      } else {
        CHECK(std::abs(observed - p) <= 4.0 * sigma);
      }
    }
  }
}

TEST_CASE("verification checks exactly the Hadamard positions") {
  Rng rng(14);
  SUBCASE("honest delete always verifies, exhaustively at kappa = 4") {
    for (const auto& bases : all_basis_strings(4, 2)) {
      for (std::uint64_t r = 0; r < 16; ++r) {
        const auto key = make_key(bases, label_to_bits(r, 4));
        auto ct = otske_enc(key, {0, 1});
        CHECK(otske_vrfy(key, otske_del(ct, rng)));
      }
    }
  }
  SUBCASE("flipping a checked bit rejects; flipping an unchecked bit does not") {
    const auto key = otske_keygen(2, rng);
    auto ct = otske_enc(key, {1, 1});
    auto cert = otske_del(ct, rng);
    const int hadamard_pos = key.hadamard_positions().front();
    const int computational_pos = key.computational_positions().front();

    auto tampered = cert;
    tampered.bits[static_cast<std::size_t>(hadamard_pos)] ^= 1;
    CHECK_FALSE(otske_vrfy(key, tampered));

    auto untouched_check = cert;
    untouched_check.bits[static_cast<std::size_t>(computational_pos)] ^= 1;
    CHECK(otske_vrfy(key, untouched_check));
  }
  SUBCASE("certificate length is validated") {
    const auto key = otske_keygen(2, rng);
    CHECK_THROWS_AS(otske_vrfy(key, DeletionCert{BitString(3, 0)}), std::invalid_argument);
  }
}

TEST_CASE("a computational-first forger passes with probability exactly 2^{-(kappa-ell)}") {
  Rng rng(15);
  const std::size_t ell = 2;
  const auto key = otske_keygen(ell, rng);
  const std::size_t kappa = key.total_qubits();

  // Exact count: a uniformly random certificate passes iff it matches r on
  // the kappa - ell Hadamard positions.
  std::uint64_t accepted = 0;
  for (std::uint64_t guess = 0; guess < (std::uint64_t{1} << kappa); ++guess)
    if (otske_vrfy(key, DeletionCert{label_to_bits(guess, kappa)})) ++accepted;
  CHECK(accepted == (std::uint64_t{1} << ell));

  // Monte Carlo: measure computationally first (destroying the Hadamard
  // information), then submit the computational outcomes as the certificate.
  Rng mc(16);
  int wins = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    auto ct = otske_enc(key, {0, 0});
    const auto outcome =
        qsim::measure(ct.quantum(), {0, 1, 2, 3}, qsim::Basis::Computational, mc);
    if (otske_vrfy(key, DeletionCert{outcome.first.outcome})) ++wins;
  }
  const double p = std::exp2(-static_cast<double>(kappa - ell));
  const double sigma = std::sqrt(trials * p * (1 - p));
  CHECK(std::abs(wins - trials * p) <= 3.0 * sigma);
}

TEST_CASE("single-use contract") {
  Rng rng(17);
  const auto key = otske_keygen(2, rng);

  SUBCASE("decrypt after delete is rejected") {
    auto ct = otske_enc(key, {1, 0});
    otske_del(ct, rng);
    CHECK(ct.consumed());
    CHECK_THROWS_AS(otske_dec(key, ct, rng), std::logic_error);
  }
  SUBCASE("delete after decrypt is rejected") {
    auto ct = otske_enc(key, {1, 0});
    otske_dec(key, ct, rng);
    CHECK_THROWS_AS(otske_del(ct, rng), std::logic_error);
  }
}

TEST_CASE("key bit-encoding round-trips") {
  Rng rng(18);
  for (std::size_t ell = 1; ell <= 8; ++ell) {
    const auto key = otske_keygen(ell, rng);
    const BitString bits = key.to_bits();
    CHECK(bits.size() == OtskeKey::encoded_bits(key.total_qubits()));
    const auto back = OtskeKey::from_bits(bits);
    CHECK(back.bases == key.bases);
    CHECK(back.payload == key.payload);
    CHECK(back.plaintext_bits == key.plaintext_bits);
  }
  CHECK_THROWS_AS(OtskeKey::from_bits(BitString(10, 0)), std::exception);
}
