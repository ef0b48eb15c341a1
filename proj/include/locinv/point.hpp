#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace locinv {

/// Largest dimension n handled by any map type (two n-bit halves must fit one word
/// in the implicant solver).
inline constexpr int kMaxDimension = 32;

/// A point of F2^n. The integer code is the canonical encoding: coordinate x1 is
/// the most significant of the n bits, so `Point::parse("100").code() == 4`.
class Point {
 public:
  Point() = default;
  Point(int n, std::uint64_t code);

  static Point parse(std::string_view bits);
  static Point zero(int n) { return Point(n, 0); }

  int dimension() const { return n_; }
  std::uint64_t code() const { return code_; }

  /// Coordinate x_{i+1} (0-based i).
  bool coordinate(int i) const { return (code_ >> (n_ - 1 - i)) & 1u; }

  Point operator^(const Point& other) const;

  std::string to_string() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.code_ <=> b.code_;
  }

 private:
  int n_ = 0;
  std::uint64_t code_ = 0;
};

/// Bit mask selecting coordinate x_{i+1} in the point encoding of F2^n.
inline std::uint64_t coordinate_mask(int n, int i) { return std::uint64_t{1} << (n - 1 - i); }

}  // namespace locinv
