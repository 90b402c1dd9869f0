#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cdsim/bits.hpp"
#include "cdsim/rng.hpp"

namespace cdsim::ntcf {

inline constexpr int kMinPreimageBits = 2;
inline constexpr int kMaxPreimageBits = 12;

enum class ClawMode : std::uint8_t { FType = 0, GType = 1 };

// Injective label map J on {0,1}^w; injectivity is checked at construction by
// a collision scan over the table.
class LabelMap {
public:
  static LabelMap identity(int width);
  static LabelMap from_table(int width, std::vector<std::uint32_t> table);

  int width() const { return width_; }
  bool is_identity() const { return table_.empty(); }
  std::uint32_t operator()(std::uint32_t x) const;
  std::uint32_t invert(std::uint32_t image) const;

private:
  LabelMap(int width, std::vector<std::uint32_t> table);
  int width_ = 0;
  std::vector<std::uint32_t> table_;    // empty means identity
  std::vector<std::uint32_t> inverse_;  // parallel to table_
};

// Idealized claw-free / trapdoor-injective function instance backed by
// explicit permutation tables. FType: f(b,x) = forward[b][x], two permutations
// of {0,1}^w forming a 2-to-1 function with a perfect matching of claws.
// GType: g(b,x) = forward[0][b||x], one permutation of {0,1}^{w+1}.
// The tables are readable from the key, so the instantiation is functionally
// exact but not cryptographically claw-free.
struct ClawFreeKey {
  ClawMode mode = ClawMode::FType;
  int preimage_bits = 0;  // w
  std::array<std::vector<std::uint32_t>, 2> forward;
  LabelMap label_map = LabelMap::identity(0);  // J
  std::array<std::uint8_t, 8> key_id{};

  int image_bits() const { return preimage_bits + (mode == ClawMode::GType ? 1 : 0); }
};

struct ClawFreeTrapdoor {
  ClawMode mode = ClawMode::FType;
  int preimage_bits = 0;
  std::array<std::vector<std::uint32_t>, 2> forward;
  std::array<std::vector<std::uint32_t>, 2> inverse;
  LabelMap label_map = LabelMap::identity(0);
  std::array<std::uint8_t, 8> key_id{};
};

std::pair<ClawFreeKey, ClawFreeTrapdoor> gen_f(int preimage_bits, Rng& rng);
std::pair<ClawFreeKey, ClawFreeTrapdoor> gen_g(int preimage_bits, Rng& rng);

std::uint32_t eval(const ClawFreeKey& key, Bit branch, std::uint32_t x);
// Support check without the trapdoor; the single code path serves both modes.
bool chk(const ClawFreeKey& key, Bit branch, std::uint32_t x, std::uint32_t y);

// FType inversion: the branch-b preimage of y.
std::uint32_t invert_f(const ClawFreeTrapdoor& td, Bit branch, std::uint32_t y);
// GType inversion: the unique (b, x) with g(b, x) = y.
std::pair<Bit, std::uint32_t> invert_g(const ClawFreeTrapdoor& td, std::uint32_t y);
// x1 such that f(1, x1) = f(0, x0).
std::uint32_t claw_partner(const ClawFreeTrapdoor& td, std::uint32_t x0);

// Hardcore set G_{k,b,x} = {0,1}^w \ {0^w} in the ideal instantiation,
// independent of (b, x); Pr_d[d not in G] is exactly 2^{-w}.
struct HardcoreSetSpec {
  int width = 0;
};
bool hardcore_membership(const HardcoreSetSpec& spec, const BitString& d);

// Exact rational on int64 with eager reduction; comparisons cross-multiply in
// 128-bit so they never round.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator);
  static Rational from_int(std::int64_t v) { return Rational(v, 1); }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  Rational operator*(const Rational& other) const;
  Rational operator+(const Rational& other) const;
  bool operator==(const Rational& other) const { return num_ == other.num_ && den_ == other.den_; }
  bool operator<(const Rational& other) const;
  bool operator<=(const Rational& other) const;
  bool operator>(const Rational& other) const { return other < *this; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Pr[S cap T = empty] for a uniform S of size n inside [2n] and a fixed T of
// size t: prod_{i<t} (n-i)/(2n-i), zero once t >= n+1. The returned value is
// checked against both bounds of the combinatorial lemma before returning.
Rational disjoint_probability_exact(int n, int t);

// Amplified adaptive hardcore game. The challenger draws n independent FType
// instances, hands the keys to the strategy, and grades the response with the
// trapdoors it kept.
struct HardcoreResponse {
  Bit branch = 0;          // b_i
  std::uint32_t preimage = 0;  // x_i
  std::uint32_t image = 0;     // y_i
  BitString d;
  Bit e = 0;
};

struct HardcoreInstanceGrade {
  bool chk_passed = false;
  bool d_in_hardcore_set = false;
  bool parity_matched = false;
  bool passed() const { return chk_passed && d_in_hardcore_set && parity_matched; }
};

struct HardcoreGameTrace {
  bool won = false;
  std::vector<HardcoreInstanceGrade> grades;
};

using HardcoreStrategy =
    std::function<std::vector<HardcoreResponse>(const std::vector<ClawFreeKey>&, Rng&)>;

HardcoreGameTrace run_amplified_hardcore_game(int n, int preimage_bits,
                                              const HardcoreStrategy& strategy, Rng& rng);

}  // namespace cdsim::ntcf
