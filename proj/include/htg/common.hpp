#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace htg {

/// 3-component point / size vector in grid length units.
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(const Vec3& a, double s) {
  return {a[0] * s, a[1] * s, a[2] * s};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Error type thrown on precondition violations and malformed inputs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint32_t kInvalidIndex = std::numeric_limits<std::uint32_t>::max();

/// f^d for the small exponents used throughout (d <= 3, f <= 3).
inline constexpr int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

/// Packed bit vector; models one bit per tree vertex (mask, sign arrays).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n, bool value = false)
      : size_(n), words_((n + 63) / 64, value ? ~0ull : 0ull) {}

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t bit = 1ull << (i & 63);
    if (v)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  void resize(std::size_t n, bool value = false) {
    // Keep tail bits of the old last word consistent when growing.
    for (std::size_t i = size_; i < std::min(n, words_.size() * 64); ++i) {
      const std::uint64_t bit = 1ull << (i & 63);
      if (value)
        words_[i >> 6] |= bit;
      else
        words_[i >> 6] &= ~bit;
    }
    words_.resize((n + 63) / 64, value ? ~0ull : 0ull);
    size_ = n;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < size_; ++i) c += get(i);
    return c;
  }

  /// Modeled storage cost: one bit per entry, rounded up to whole bytes.
  std::uint64_t model_bytes() const { return (size_ + 7) / 8; }

  bool operator==(const BitVec& o) const {
    if (size_ != o.size_) return false;
    for (std::size_t i = 0; i < size_; ++i)
      if (get(i) != o.get(i)) return false;
    return true;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace htg
