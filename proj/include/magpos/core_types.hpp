#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace magpos {

/// 256-bit node identifier. words[0] holds the most significant 64 bits, so
/// lexicographic comparison of the words is numeric comparison.
struct NodeId {
  std::array<std::uint64_t, 4> words{};

  static constexpr NodeId from_u64(std::uint64_t low) { return NodeId{{0, 0, 0, low}}; }

  constexpr auto operator<=>(const NodeId&) const = default;

  constexpr NodeId operator^(const NodeId& o) const {
    return NodeId{{words[0] ^ o.words[0], words[1] ^ o.words[1], words[2] ^ o.words[2],
                   words[3] ^ o.words[3]}};
  }

  constexpr bool is_zero() const { return (words[0] | words[1] | words[2] | words[3]) == 0; }

  /// 64 lowercase hex digits.
  std::string to_hex() const;
  static NodeId from_hex(const std::string& hex);
};

/// Bonded stake. Amounts are exact integers; sums go through checked_add.
struct Stake {
  std::uint64_t amount = 0;
  constexpr auto operator<=>(const Stake&) const = default;
};

/// Opaque fork identifier. Two forks either are the same fork or fully disagree.
struct ForkId {
  std::uint32_t value = 0;
  constexpr auto operator<=>(const ForkId&) const = default;
};

/// Exchange energy in stake units.
struct Energy {
  std::int64_t value = 0;
  constexpr auto operator<=>(const Energy&) const = default;
};

struct SimNode {
  NodeId id;
  Stake stake;
  ForkId fork;
  bool conflicted = false;
};

/// Raised when a stake or energy sum does not fit the arithmetic width.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// How disagreement between two forks is scored.
///   Signed:     same fork +1, different fork -1 (worked example / pseudo code)
///   Orthogonal: same fork +1, different fork  0 (orthogonal fork vectors)
enum class AgreementConvention { Signed, Orthogonal };

/// +1 iff a == b, else -1.
constexpr int agreement(ForkId a, ForkId b) { return a == b ? 1 : -1; }

constexpr int agreement(ForkId a, ForkId b, AgreementConvention c) {
  if (a == b) return 1;
  return c == AgreementConvention::Signed ? -1 : 0;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
Stake checked_add(Stake a, Stake b);

/// Stake amount as a signed term; throws ArithmeticOverflow above INT64_MAX.
std::int64_t signed_amount(Stake s);

}  // namespace magpos
