#include "locinv/point.hpp"

#include <stdexcept>

namespace locinv {

Point::Point(int n, std::uint64_t code) : n_(n), code_(code) {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("point dimension out of range");
  if (n < 64 && (code >> n) != 0) throw std::invalid_argument("point code has bits above dimension");
}

Point Point::parse(std::string_view bits) {
  if (bits.empty()) throw std::invalid_argument("empty bitstring");
  if (bits.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw std::invalid_argument("bitstring longer than the supported dimension");
  }
  std::uint64_t code = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
    code = (code << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return Point(static_cast<int>(bits.size()), code);
}

Point Point::operator^(const Point& other) const {
  if (n_ != other.n_) throw std::invalid_argument("point dimension mismatch");
  return Point(n_, code_ ^ other.code_);
}

std::string Point::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int i = 0; i < n_; ++i) {
    if (coordinate(i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace locinv
