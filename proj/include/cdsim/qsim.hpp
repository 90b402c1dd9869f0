#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cdsim/bits.hpp"
#include "cdsim/ntcf.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::qsim {

inline constexpr int kMaxQubits = 16;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDistributionTolerance = 1e-9;

using Amplitude = std::complex<double>;
using StateVector = Eigen::VectorXcd;

enum class Basis : std::uint8_t { Computational = 0, Hadamard = 1 };

// Exact state vector over up to 16 qubits. Qubit 0 is the most significant
// bit of the basis-state label. Immutable after construction; operations take
// and return values.
class QubitRegister {
public:
  QubitRegister(int num_qubits, StateVector amplitudes);
  static QubitRegister basis_state(int num_qubits, std::uint64_t label);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const StateVector& amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::uint64_t label) const {
    return amplitudes_(static_cast<Eigen::Index>(label));
  }
  // |sum |a|^2 - 1|
  double norm_error() const;
  // Bit of `label` at qubit position `qubit` under the MSB-first convention.
  Bit label_bit(std::uint64_t label, int qubit) const {
    return static_cast<Bit>((label >> (num_qubits_ - 1 - qubit)) & 1u);
  }

private:
  int num_qubits_;
  StateVector amplitudes_;
};

struct MeasurementRecord {
  std::vector<int> positions;  // strictly increasing
  Basis basis = Basis::Computational;
  BitString outcome;           // one bit per position
};

// Exact outcome distribution over the measured positions, indexed by the
// outcome label (first measured position = most significant bit).
struct BornTable {
  std::vector<double> probabilities;
  double probability(std::uint64_t outcome) const { return probabilities.at(outcome); }
  double total() const;
};

double total_variation_distance(const BornTable& a, const BornTable& b);

// Tensor product of BB84 qubits: |r_i> where bases[i] = 0, H|r_i> where
// bases[i] = 1. Amplitudes are exactly 0 or +-2^{-h/2} with h the weight of
// the basis string.
QubitRegister prepare_bb84(const BitString& payload, const BitString& bases);

BornTable born_distribution(const QubitRegister& reg, const std::vector<int>& positions,
                            Basis basis);

// Projects the register onto the given outcome of measuring `positions` in
// `basis`; returns the outcome probability and the renormalized
// post-measurement state (in the computational frame, measured qubits left in
// their collapsed basis states). Probability zero yields no state.
std::pair<double, std::optional<QubitRegister>> collapse(const QubitRegister& reg,
                                                         const std::vector<int>& positions,
                                                         Basis basis, std::uint64_t outcome);

std::pair<MeasurementRecord, QubitRegister> measure(const QubitRegister& reg,
                                                    const std::vector<int>& positions,
                                                    Basis basis, Rng& rng);

// Analytic description of the post-measurement state of one claw-free
// instance after the image register collapsed to `image`.
struct ClawInstanceState {
  ntcf::ClawMode mode = ntcf::ClawMode::FType;
  int preimage_bits = 0;       // w
  std::uint32_t image = 0;     // y
  std::uint32_t preimage0 = 0; // FType: x0
  std::uint32_t preimage1 = 0; // FType: x1
  Bit branch = 0;              // GType: b
  std::uint32_t preimage = 0;  // GType: x

  int register_qubits() const { return 1 + preimage_bits; }
};

// The exact register described by a ClawInstanceState: FType gives
// (|0,x0> + |1,x1>)/sqrt(2), GType the basis state |b,x>.
QubitRegister claw_register(const ClawInstanceState& inst);

struct RangeSuperpositionSample {
  std::uint32_t image = 0;
  ClawInstanceState instance;
  QubitRegister collapsed;
};

// Samp followed by the image measurement: samples y from the exact image
// distribution and returns the collapsed (1+w)-qubit register, computed in
// closed form from the trapdoor-free tables.
RangeSuperpositionSample prepare_range_superposition(const ntcf::ClawFreeKey& key, Rng& rng);

// |b, x> -> |b, J(x)> on a (1 + width)-qubit register.
QubitRegister apply_label_isometry(const QubitRegister& reg, const ntcf::LabelMap& label_map);

// Hadamard-basis measurement outcome (e, d) of a claw instance after the
// label isometry, drawn without building the state vector. The distribution
// agrees exactly with the Born distribution of the state-vector path.
std::pair<Bit, BitString> analytic_hadamard_sample(const ClawInstanceState& inst,
                                                   const ntcf::LabelMap& label_map, Rng& rng);

// Closed-form distribution of analytic_hadamard_sample over (e, d) labels.
BornTable analytic_hadamard_distribution(const ClawInstanceState& inst,
                                         const ntcf::LabelMap& label_map);

// Debug serialization: (re, im) pairs in the canonical bit ordering.
Bytes serialize_register(const QubitRegister& reg);
QubitRegister deserialize_register(const Bytes& data);

}  // namespace cdsim::qsim
