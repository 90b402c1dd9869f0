#include "cdsim/qsim.hpp"

#include <cmath>
#include <stdexcept>

#include "cdsim/bytes.hpp"

namespace cdsim::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_positions(const QubitRegister& reg, const std::vector<int>& positions) {
  if (positions.empty()) throw std::invalid_argument("positions must be nonempty");
  int prev = -1;
  for (int p : positions) {
    if (p <= prev) throw std::invalid_argument("positions must be strictly increasing");
    if (p < 0 || p >= reg.num_qubits()) throw std::invalid_argument("position out of range");
    prev = p;
  }
}

void check_normalized(const QubitRegister& reg) {
  if (reg.norm_error() > kNormTolerance)
    throw std::invalid_argument("register is not normalized");
}

// In-place Hadamard on one qubit position.
void hadamard_inplace(StateVector& amps, int num_qubits, int position) {
  const std::uint64_t stride = std::uint64_t{1} << (num_qubits - 1 - position);
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t offset = 0; offset < stride; ++offset) {
      const auto i0 = static_cast<Eigen::Index>(base + offset);
      const auto i1 = static_cast<Eigen::Index>(base + offset + stride);
      const Amplitude a = amps(i0);
      const Amplitude b = amps(i1);
      amps(i0) = (a + b) * kInvSqrt2;
      amps(i1) = (a - b) * kInvSqrt2;
    }
  }
}

void hadamard_all(StateVector& amps, int num_qubits, const std::vector<int>& positions) {
  for (int p : positions) hadamard_inplace(amps, num_qubits, p);
}

std::uint64_t outcome_of_label(std::uint64_t label, int num_qubits,
                               const std::vector<int>& positions) {
  std::uint64_t outcome = 0;
  for (int p : positions) outcome = (outcome << 1) | ((label >> (num_qubits - 1 - p)) & 1u);
  return outcome;
}

}  // namespace

QubitRegister::QubitRegister(int num_qubits, StateVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits_ < 1) throw std::invalid_argument("register needs at least one qubit");
  if (num_qubits_ > kMaxQubits) throw std::invalid_argument("register capped at 16 qubits");
  if (amplitudes_.size() != Eigen::Index{1} << num_qubits_)
    throw std::invalid_argument("amplitude count must be 2^num_qubits");
  if (norm_error() > kNormTolerance)
    throw std::invalid_argument("amplitudes are not normalized");
}

QubitRegister QubitRegister::basis_state(int num_qubits, std::uint64_t label) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw std::invalid_argument("register size out of range");
  if (label >> num_qubits) throw std::invalid_argument("basis label out of range");
  StateVector amps = StateVector::Zero(Eigen::Index{1} << num_qubits);
  amps(static_cast<Eigen::Index>(label)) = 1.0;
  return QubitRegister(num_qubits, std::move(amps));
}

double QubitRegister::norm_error() const {
  return std::abs(amplitudes_.squaredNorm() - 1.0);
}

double BornTable::total() const {
  double t = 0.0;
  for (double p : probabilities) t += p;
  return t;
}

double total_variation_distance(const BornTable& a, const BornTable& b) {
  if (a.probabilities.size() != b.probabilities.size())
    throw std::invalid_argument("distributions have different supports");
  double d = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    d += std::abs(a.probabilities[i] - b.probabilities[i]);
  return d / 2.0;
}

QubitRegister prepare_bb84(const BitString& payload, const BitString& bases) {
  if (payload.size() != bases.size())
    throw std::invalid_argument("prepare_bb84: payload/basis length mismatch");
  const int n = static_cast<int>(payload.size());
  if (n == 0) throw std::invalid_argument("prepare_bb84: empty input");
  if (n > kMaxQubits) throw std::invalid_argument("prepare_bb84: more than 16 qubits");

  const double magnitude = std::exp2(-0.5 * static_cast<double>(hamming_weight(bases)));
  StateVector amps = StateVector::Zero(Eigen::Index{1} << n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t label = 0; label < dim; ++label) {
    double value = magnitude;
    bool zero = false;
    for (int i = 0; i < n && !zero; ++i) {
      const Bit bit = static_cast<Bit>((label >> (n - 1 - i)) & 1u);
      if (bases[i] == 0) {
        if (bit != payload[i]) zero = true;
      } else if (payload[i] == 1 && bit == 1) {
        value = -value;  // H|1> carries the minus sign on |1>
      }
    }
    if (!zero) amps(static_cast<Eigen::Index>(label)) = value;
  }
  return QubitRegister(n, std::move(amps));
}

BornTable born_distribution(const QubitRegister& reg, const std::vector<int>& positions,
                            Basis basis) {
  check_positions(reg, positions);
  check_normalized(reg);
  StateVector amps = reg.amplitudes();
  if (basis == Basis::Hadamard) hadamard_all(amps, reg.num_qubits(), positions);

  BornTable table;
  table.probabilities.assign(std::size_t{1} << positions.size(), 0.0);
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t label = 0; label < dim; ++label) {
    const double p = std::norm(amps(static_cast<Eigen::Index>(label)));
    if (p == 0.0) continue;
    table.probabilities[outcome_of_label(label, reg.num_qubits(), positions)] += p;
  }
  return table;
}

std::pair<double, std::optional<QubitRegister>> collapse(const QubitRegister& reg,
                                                         const std::vector<int>& positions,
                                                         Basis basis, std::uint64_t outcome) {
  check_positions(reg, positions);
  check_normalized(reg);
  if (outcome >> positions.size()) throw std::invalid_argument("outcome label out of range");

  StateVector amps = reg.amplitudes();
  if (basis == Basis::Hadamard) hadamard_all(amps, reg.num_qubits(), positions);

  double probability = 0.0;
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t label = 0; label < dim; ++label) {
    const auto idx = static_cast<Eigen::Index>(label);
    if (outcome_of_label(label, reg.num_qubits(), positions) == outcome) {
      probability += std::norm(amps(idx));
    } else {
      amps(idx) = 0.0;
    }
  }
  if (probability <= 0.0) return {0.0, std::nullopt};

  amps /= std::sqrt(probability);
  // Rotate back so measured qubits sit in their collapsed (|+>/|->) states in
  // the computational frame.
  if (basis == Basis::Hadamard) hadamard_all(amps, reg.num_qubits(), positions);
  return {probability, QubitRegister(reg.num_qubits(), std::move(amps))};
}

std::pair<MeasurementRecord, QubitRegister> measure(const QubitRegister& reg,
                                                    const std::vector<int>& positions,
                                                    Basis basis, Rng& rng) {
  const BornTable table = born_distribution(reg, positions, basis);
  double draw = rng.real01();
  std::uint64_t outcome = 0;
  for (std::size_t i = 0; i < table.probabilities.size(); ++i) {
    draw -= table.probabilities[i];
    if (draw < 0.0) {
      outcome = i;
      break;
    }
    // Guard against accumulated rounding on the final entry.
    if (i + 1 == table.probabilities.size()) outcome = i;
  }
  // Skip zero-probability outcomes the rounding guard might have landed on.
  while (table.probabilities[outcome] == 0.0) --outcome;

  auto [probability, state] = collapse(reg, positions, basis, outcome);
  (void)probability;
  MeasurementRecord record{positions, basis,
                           label_to_bits(outcome, positions.size())};
  return {std::move(record), std::move(*state)};
}

QubitRegister claw_register(const ClawInstanceState& inst) {
  const int qubits = inst.register_qubits();
  if (qubits > kMaxQubits) throw std::invalid_argument("claw register too wide");
  if (inst.mode == ntcf::ClawMode::GType) {
    const std::uint64_t label =
        (static_cast<std::uint64_t>(inst.branch) << inst.preimage_bits) | inst.preimage;
    return QubitRegister::basis_state(qubits, label);
  }
  StateVector amps = StateVector::Zero(Eigen::Index{1} << qubits);
  const std::uint64_t label0 = inst.preimage0;
  const std::uint64_t label1 = (std::uint64_t{1} << inst.preimage_bits) | inst.preimage1;
  amps(static_cast<Eigen::Index>(label0)) += kInvSqrt2;
  amps(static_cast<Eigen::Index>(label1)) += kInvSqrt2;
  return QubitRegister(qubits, std::move(amps));
}

RangeSuperpositionSample prepare_range_superposition(const ntcf::ClawFreeKey& key, Rng& rng) {
  if (key.preimage_bits + 1 > kMaxQubits)
    throw std::invalid_argument("preimage bit length exceeds the register cap");

  ClawInstanceState inst;
  inst.mode = key.mode;
  inst.preimage_bits = key.preimage_bits;

  if (key.mode == ntcf::ClawMode::FType) {
    // Measuring the image register of sum_{b,x} |b,x>|f(b,x)> yields a
    // uniform y: every image has exactly one preimage per branch.
    const auto y = static_cast<std::uint32_t>(rng.uniform(std::uint64_t{1} << key.preimage_bits));
    inst.image = y;
    for (std::uint32_t x = 0; x < key.forward[0].size(); ++x)
      if (key.forward[0][x] == y) inst.preimage0 = x;
    for (std::uint32_t x = 0; x < key.forward[1].size(); ++x)
      if (key.forward[1][x] == y) inst.preimage1 = x;
  } else {
    const auto y =
        static_cast<std::uint32_t>(rng.uniform(std::uint64_t{1} << (key.preimage_bits + 1)));
    inst.image = y;
    std::uint32_t label = 0;
    for (std::uint32_t l = 0; l < key.forward[0].size(); ++l)
      if (key.forward[0][l] == y) label = l;
    inst.branch = static_cast<Bit>(label >> key.preimage_bits);
    inst.preimage = label & ((std::uint32_t{1} << key.preimage_bits) - 1);
  }
  return {inst.image, inst, claw_register(inst)};
}

QubitRegister apply_label_isometry(const QubitRegister& reg, const ntcf::LabelMap& label_map) {
  const int width = label_map.width();
  if (reg.num_qubits() != width + 1)
    throw std::invalid_argument("apply_label_isometry: register/label width mismatch");
  StateVector out = StateVector::Zero(reg.dim());
  const std::uint64_t dim = static_cast<std::uint64_t>(reg.dim());
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  for (std::uint64_t label = 0; label < dim; ++label) {
    const Amplitude a = reg.amplitude(label);
    if (a == Amplitude{}) continue;
    const std::uint64_t branch = label >> width;
    const std::uint64_t mapped = label_map(static_cast<std::uint32_t>(label & mask));
    out(static_cast<Eigen::Index>((branch << width) | mapped)) += a;
  }
  return QubitRegister(reg.num_qubits(), std::move(out));
}

std::pair<Bit, BitString> analytic_hadamard_sample(const ClawInstanceState& inst,
                                                   const ntcf::LabelMap& label_map, Rng& rng) {
  const int w = inst.preimage_bits;
  if (inst.mode == ntcf::ClawMode::GType) {
    return {rng.bit(), rng.bits(w)};
  }
  const BitString d = rng.bits(w);
  const std::uint32_t delta = label_map(inst.preimage0) ^ label_map(inst.preimage1);
  const Bit e = dot(d, label_to_bits(delta, w));
  return {e, d};
}

BornTable analytic_hadamard_distribution(const ClawInstanceState& inst,
                                         const ntcf::LabelMap& label_map) {
  const int w = inst.preimage_bits;
  BornTable table;
  table.probabilities.assign(std::size_t{1} << (w + 1), 0.0);
  if (inst.mode == ntcf::ClawMode::GType) {
    const double p = std::exp2(-(w + 1));
    for (auto& entry : table.probabilities) entry = p;
    return table;
  }
  const std::uint32_t delta = label_map(inst.preimage0) ^ label_map(inst.preimage1);
  const BitString delta_bits = label_to_bits(delta, w);
  const double p = std::exp2(-w);
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << w); ++d) {
    const Bit e = dot(label_to_bits(d, w), delta_bits);
    table.probabilities[(static_cast<std::uint64_t>(e) << w) | d] = p;
  }
  return table;
}

Bytes serialize_register(const QubitRegister& reg) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(reg.num_qubits()));
  for (Eigen::Index i = 0; i < reg.dim(); ++i) {
    w.f64(reg.amplitudes()(i).real());
    w.f64(reg.amplitudes()(i).imag());
  }
  return w.take();
}

QubitRegister deserialize_register(const Bytes& data) {
  ByteReader r(data);
  const int n = r.u8();
  if (n < 1 || n > kMaxQubits) throw DecodeError("register size out of range");
  StateVector amps(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double re = r.f64();
    const double im = r.f64();
    amps(i) = Amplitude{re, im};
  }
  r.expect_end();
  return QubitRegister(n, std::move(amps));
}

}  // namespace cdsim::qsim
