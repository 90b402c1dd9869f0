// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <complex>
#include <vector>

#include "cdsim/ntcf.hpp"
#include "cdsim/qsim.hpp"

namespace cdsim::test_oracles {

// Tensor product built from explicit single-qubit column vectors; the
// independent reference for prepare_bb84.
inline qsim::StateVector kron_qubits(const std::vector<std::array<std::complex<double>, 2>>& qubits) {
  qsim::StateVector state(1);
  state(0) = 1.0;
  for (const auto& q : qubits) {
    qsim::StateVector next(state.size() * 2);
    for (Eigen::Index i = 0; i < state.size(); ++i) {
      next(2 * i) = state(i) * q[0];
      next(2 * i + 1) = state(i) * q[1];
    }
    state = std::move(next);
  }
  return state;
}

inline qsim::StateVector bb84_reference(const BitString& payload, const BitString& bases) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::array<std::complex<double>, 2>> qubits;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (bases[i] == 0) {
      qubits.push_back(payload[i] ? std::array<std::complex<double>, 2>{0.0, 1.0}
                                  : std::array<std::complex<double>, 2>{1.0, 0.0});
    } else {
      qubits.push_back(payload[i] ? std::array<std::complex<double>, 2>{s, -s}
                                  : std::array<std::complex<double>, 2>{s, s});
    }
  }
  return kron_qubits(qubits);
}

// Full tensor construction of sum_{b,x} |b,x>|fn(b,x)> followed by projective
// collapse of the image register onto `image`, returning the leading
// (1 + w)-qubit register. This is the state-vector oracle for
// prepare_range_superposition.
inline qsim::QubitRegister range_superposition_oracle(const ntcf::ClawFreeKey& key,
                                                      std::uint32_t image) {
  const int w = key.preimage_bits;
  const int label_qubits = 1 + w;
  const int image_qubits = key.image_bits();
  const std::uint64_t label_dim = std::uint64_t{1} << label_qubits;
  const std::uint64_t image_dim = std::uint64_t{1} << image_qubits;

  qsim::StateVector full = qsim::StateVector::Zero(
      static_cast<Eigen::Index>(label_dim * image_dim));
  const double amp = 1.0 / std::sqrt(static_cast<double>(label_dim));
  for (std::uint64_t label = 0; label < label_dim; ++label) {
    const Bit b = static_cast<Bit>(label >> w);
    const auto x = static_cast<std::uint32_t>(label & ((std::uint64_t{1} << w) - 1));
    const std::uint32_t y = ntcf::eval(key, b, x);
    full(static_cast<Eigen::Index>(label * image_dim + y)) += amp;
  }

  // Project the image register onto `image` and renormalize.
  qsim::StateVector collapsed = qsim::StateVector::Zero(static_cast<Eigen::Index>(label_dim));
  double norm2 = 0.0;
  for (std::uint64_t label = 0; label < label_dim; ++label) {
    const auto a = full(static_cast<Eigen::Index>(label * image_dim + image));
    collapsed(static_cast<Eigen::Index>(label)) = a;
    norm2 += std::norm(a);
  }
  collapsed /= std::sqrt(norm2);
  return qsim::QubitRegister(label_qubits, std::move(collapsed));
}

inline double max_amplitude_difference(const qsim::QubitRegister& a,
                                       const qsim::QubitRegister& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    worst = std::max(worst, std::abs(a.amplitudes()(i) - b.amplitudes()(i)));
  return worst;
}

// Born distribution by direct amplitude-squared enumeration (computational
// basis over all qubits), independent of qsim::born_distribution.
inline std::vector<double> amplitude_squared_table(const qsim::QubitRegister& reg) {
  std::vector<double> table(static_cast<std::size_t>(reg.dim()));
  for (Eigen::Index i = 0; i < reg.dim(); ++i) table[static_cast<std::size_t>(i)] =
      std::norm(reg.amplitudes()(i));
  return table;
}

}  // namespace cdsim::test_oracles
