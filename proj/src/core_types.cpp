#include "magpos/core_types.hpp"

#include <fmt/format.h>

namespace magpos {

std::string NodeId::to_hex() const {
  return fmt::format("{:016x}{:016x}{:016x}{:016x}", words[0], words[1], words[2], words[3]);
}

NodeId NodeId::from_hex(const std::string& hex) {
  if (hex.empty() || hex.size() > 64) throw std::invalid_argument("node id: expected 1..64 hex digits");
  NodeId id;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw std::invalid_argument("node id: invalid hex digit '" + std::string(1, c) + "'");
    // shift the 256-bit value left by 4
    for (int w = 0; w < 3; ++w) id.words[w] = (id.words[w] << 4) | (id.words[w + 1] >> 60);
    id.words[3] = (id.words[3] << 4) | static_cast<std::uint64_t>(v);
  }
  return id;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("energy sum overflows 64-bit range");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("energy term overflows 64-bit range");
  return r;
}

Stake checked_add(Stake a, Stake b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a.amount, b.amount, &r) ||
      r > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw ArithmeticOverflow("stake sum overflows 63-bit range");
  return Stake{r};
}

std::int64_t signed_amount(Stake s) {
  if (s.amount > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw ArithmeticOverflow("stake amount exceeds 63-bit range");
  return static_cast<std::int64_t>(s.amount);
}

}  // namespace magpos
