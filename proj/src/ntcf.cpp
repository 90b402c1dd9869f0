#include "cdsim/ntcf.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cdsim::ntcf {

namespace {

void check_width(int w) {
  if (w < kMinPreimageBits || w > kMaxPreimageBits)
    throw std::invalid_argument("preimage bit length out of range [2, 12]");
}

std::vector<std::uint32_t> invert_table(const std::vector<std::uint32_t>& table) {
  std::vector<std::uint32_t> inv(table.size());
  for (std::uint32_t x = 0; x < table.size(); ++x) inv[table[x]] = x;
  return inv;
}

std::array<std::uint8_t, 8> fresh_key_id(Rng& rng) {
  std::array<std::uint8_t, 8> id{};
  for (auto& b : id) b = static_cast<std::uint8_t>(rng.next_u64() & 0xffu);
  return id;
}

}  // namespace

LabelMap::LabelMap(int width, std::vector<std::uint32_t> table)
    : width_(width), table_(std::move(table)) {
  if (table_.empty()) return;
  const std::size_t domain = std::size_t{1} << width_;
  if (table_.size() != domain) throw std::invalid_argument("LabelMap: table size mismatch");
  inverse_.assign(domain, UINT32_MAX);
  for (std::uint32_t x = 0; x < domain; ++x) {
    const std::uint32_t j = table_[x];
    if (j >= domain) throw std::invalid_argument("LabelMap: image out of range");
    if (inverse_[j] != UINT32_MAX) throw std::invalid_argument("LabelMap: not injective");
    inverse_[j] = x;
  }
}

LabelMap LabelMap::identity(int width) { return LabelMap(width, {}); }

LabelMap LabelMap::from_table(int width, std::vector<std::uint32_t> table) {
  return LabelMap(width, std::move(table));
}

std::uint32_t LabelMap::operator()(std::uint32_t x) const {
  if (table_.empty()) return x;
  return table_.at(x);
}

std::uint32_t LabelMap::invert(std::uint32_t image) const {
  if (table_.empty()) return image;
  const std::uint32_t x = inverse_.at(image);
  if (x == UINT32_MAX) throw std::invalid_argument("LabelMap: image not in range");
  return x;
}

std::pair<ClawFreeKey, ClawFreeTrapdoor> gen_f(int preimage_bits, Rng& rng) {
  check_width(preimage_bits);
  const auto domain = std::uint32_t{1} << preimage_bits;
  ClawFreeKey key;
  key.mode = ClawMode::FType;
  key.preimage_bits = preimage_bits;
  key.forward[0] = rng.permutation(domain);
  key.forward[1] = rng.permutation(domain);
  key.label_map = LabelMap::identity(preimage_bits);
  key.key_id = fresh_key_id(rng);

  ClawFreeTrapdoor td;
  td.mode = key.mode;
  td.preimage_bits = preimage_bits;
  td.forward = key.forward;
  td.inverse = {invert_table(key.forward[0]), invert_table(key.forward[1])};
  td.label_map = key.label_map;
  td.key_id = key.key_id;
  return {std::move(key), std::move(td)};
}

std::pair<ClawFreeKey, ClawFreeTrapdoor> gen_g(int preimage_bits, Rng& rng) {
  check_width(preimage_bits);
  const auto domain = std::uint32_t{1} << (preimage_bits + 1);
  ClawFreeKey key;
  key.mode = ClawMode::GType;
  key.preimage_bits = preimage_bits;
  key.forward[0] = rng.permutation(domain);
  key.label_map = LabelMap::identity(preimage_bits);
  key.key_id = fresh_key_id(rng);

  ClawFreeTrapdoor td;
  td.mode = key.mode;
  td.preimage_bits = preimage_bits;
  td.forward = key.forward;
  td.inverse = {invert_table(key.forward[0]), {}};
  td.label_map = key.label_map;
  td.key_id = key.key_id;
  return {std::move(key), std::move(td)};
}

std::uint32_t eval(const ClawFreeKey& key, Bit branch, std::uint32_t x) {
  const auto domain = std::uint32_t{1} << key.preimage_bits;
  if (x >= domain) throw std::invalid_argument("eval: preimage out of range");
  if (key.mode == ClawMode::FType) return key.forward[branch & 1u][x];
  const std::uint32_t label = (static_cast<std::uint32_t>(branch & 1u) << key.preimage_bits) | x;
  return key.forward[0][label];
}

bool chk(const ClawFreeKey& key, Bit branch, std::uint32_t x, std::uint32_t y) {
  const auto domain = std::uint32_t{1} << key.preimage_bits;
  if (x >= domain) throw std::invalid_argument("chk: preimage out of range");
  if (y >= (std::uint32_t{1} << key.image_bits())) return false;
  return eval(key, branch, x) == y;
}

std::uint32_t invert_f(const ClawFreeTrapdoor& td, Bit branch, std::uint32_t y) {
  if (td.mode != ClawMode::FType) throw std::invalid_argument("invert_f: mode mismatch");
  return td.inverse[branch & 1u].at(y);
}

std::pair<Bit, std::uint32_t> invert_g(const ClawFreeTrapdoor& td, std::uint32_t y) {
  if (td.mode != ClawMode::GType) throw std::invalid_argument("invert_g: mode mismatch");
  const std::uint32_t label = td.inverse[0].at(y);
  const auto branch = static_cast<Bit>(label >> td.preimage_bits);
  const std::uint32_t x = label & ((std::uint32_t{1} << td.preimage_bits) - 1);
  return {branch, x};
}

std::uint32_t claw_partner(const ClawFreeTrapdoor& td, std::uint32_t x0) {
  if (td.mode != ClawMode::FType) throw std::invalid_argument("claw_partner: mode mismatch");
  return td.inverse[1].at(td.forward[0].at(x0));
}

bool hardcore_membership(const HardcoreSetSpec& spec, const BitString& d) {
  if (static_cast<int>(d.size()) != spec.width)
    throw std::invalid_argument("hardcore_membership: width mismatch");
  return hamming_weight(d) != 0;
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("Rational: zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = g == 0 ? 0 : numerator / g;
  den_ = g == 0 ? 1 : denominator / g;
}

Rational Rational::operator*(const Rational& other) const {
  // Cross-reduce before multiplying to keep intermediates in range.
  const std::int64_t g1 = std::gcd(num_, other.den_);
  const std::int64_t g2 = std::gcd(other.num_, den_);
  const std::int64_t a = (g1 ? num_ / g1 : 0) * (g2 ? other.num_ / g2 : 0);
  const std::int64_t b = (g2 ? den_ / g2 : 1) * (g1 ? other.den_ / g1 : 1);
  return Rational(a, b);
}

Rational Rational::operator+(const Rational& other) const {
  const std::int64_t g = std::gcd(den_, other.den_);
  const std::int64_t scale = other.den_ / g;
  return Rational(num_ * scale + other.num_ * (den_ / g), den_ * scale);
}

bool Rational::operator<(const Rational& other) const {
  return static_cast<__int128>(num_) * other.den_ < static_cast<__int128>(other.num_) * den_;
}

bool Rational::operator<=(const Rational& other) const {
  return static_cast<__int128>(num_) * other.den_ <= static_cast<__int128>(other.num_) * den_;
}

namespace {

Rational rational_pow(Rational base, int exponent) {
  Rational acc = Rational::from_int(1);
  for (int i = 0; i < exponent; ++i) acc = acc * base;
  return acc;
}

}  // namespace

Rational disjoint_probability_exact(int n, int t) {
  if (n < 1) throw std::invalid_argument("disjoint_probability_exact: n must be >= 1");
  if (n > 16) throw std::invalid_argument("disjoint_probability_exact: n capped at 16");
  if (t < 0 || t > 2 * n) throw std::invalid_argument("disjoint_probability_exact: t out of [0, 2n]");

  Rational value = Rational::from_int(1);
  if (t >= n + 1) {
    value = Rational::from_int(0);  // pigeonhole: |S| + |T| > 2n
  } else {
    for (int i = 0; i < t; ++i) value = value * Rational(n - i, 2 * n - i);
  }

  // Both lemma bounds must hold for the value we are about to return.
  for (int k = 1; k <= t && k <= 2 * n; ++k) {
    if (!(value <= rational_pow(Rational(1, 2), k)))
      throw std::logic_error("disjoint probability violates the upper bound");
  }
  for (int k = std::max(t, 1); k <= n; ++k) {
    if (!(rational_pow(Rational(n - k, 2 * n - k), k) < value))
      throw std::logic_error("disjoint probability violates the lower bound");
  }
  return value;
}

HardcoreGameTrace run_amplified_hardcore_game(int n, int preimage_bits,
                                              const HardcoreStrategy& strategy, Rng& rng) {
  if (n < 1) throw std::invalid_argument("run_amplified_hardcore_game: n must be >= 1");
  check_width(preimage_bits);

  std::vector<ClawFreeKey> keys;
  std::vector<ClawFreeTrapdoor> trapdoors;
  keys.reserve(n);
  trapdoors.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [key, td] = gen_f(preimage_bits, rng);
    keys.push_back(std::move(key));
    trapdoors.push_back(std::move(td));
  }

  const auto responses = strategy(keys, rng);
  if (responses.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("hardcore strategy returned wrong response count");

  HardcoreGameTrace trace;
  trace.grades.resize(n);
  trace.won = true;
  const HardcoreSetSpec hardcore{preimage_bits};
  for (int i = 0; i < n; ++i) {
    const auto& resp = responses[i];
    if (static_cast<int>(resp.d.size()) != preimage_bits)
      throw std::invalid_argument("hardcore strategy returned malformed d");
    auto& grade = trace.grades[i];
    grade.chk_passed = resp.image < (std::uint32_t{1} << keys[i].image_bits()) &&
                       chk(keys[i], resp.branch, resp.preimage, resp.image);
    const std::uint32_t x0 = invert_f(trapdoors[i], 0, resp.image);
    const std::uint32_t x1 = invert_f(trapdoors[i], 1, resp.image);
    grade.d_in_hardcore_set = hardcore_membership(hardcore, resp.d);
    const auto& label = keys[i].label_map;
    const std::uint32_t delta = label(x0) ^ label(x1);
    const BitString delta_bits = label_to_bits(delta, preimage_bits);
    grade.parity_matched = (resp.e == dot(resp.d, delta_bits));
    trace.won = trace.won && grade.passed();
  }
  return trace;
}

}  // namespace cdsim::ntcf
