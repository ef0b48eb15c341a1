#include "locinv/anf.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace locinv {

namespace {

constexpr std::uint64_t kInWordMasks[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

void check_nvars(int nvars) {
  if (nvars < 0 || nvars > 64) throw std::invalid_argument("variable count out of range");
}

std::uint64_t variable_mask(int nvars) {
  return nvars >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nvars) - 1;
}

}  // namespace

void moebius_transform(BitVec& table, int nvars) {
  if (table.size() != (std::size_t{1} << nvars)) {
    throw std::invalid_argument("truth table size must be 2^nvars");
  }
  auto w = table.words();
  for (int j = 0; j < nvars && j < 6; ++j) {
    const unsigned s = 1u << j;
    for (auto& word : w) word ^= (word << s) & kInWordMasks[j];
  }
  for (int j = 6; j < nvars; ++j) {
    const std::size_t stride = std::size_t{1} << (j - 6);
    for (std::size_t base = 0; base < w.size(); base += 2 * stride) {
      for (std::size_t k = 0; k < stride; ++k) w[base + stride + k] ^= w[base + k];
    }
  }
}

AnfPoly::AnfPoly(int nvars, std::vector<std::uint64_t> monomials)
    : nvars_(nvars), monomials_(std::move(monomials)) {
  check_nvars(nvars);
  const std::uint64_t allowed = variable_mask(nvars);
  for (auto m : monomials_) {
    if ((m & ~allowed) != 0) throw std::invalid_argument("monomial uses a variable out of range");
  }
  canonicalize();
}

AnfPoly AnfPoly::constant(int nvars, bool value) {
  AnfPoly p(nvars);
  if (value) p.monomials_.push_back(0);
  return p;
}

AnfPoly AnfPoly::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::invalid_argument("variable index out of range");
  AnfPoly p(nvars);
  p.monomials_.push_back(std::uint64_t{1} << (nvars - 1 - i));
  return p;
}

AnfPoly AnfPoly::from_truth_table(int nvars, const BitVec& table) {
  BitVec coeffs = table;
  moebius_transform(coeffs, nvars);
  AnfPoly p(nvars);
  auto w = coeffs.words();
  for (std::size_t k = 0; k < w.size(); ++k) {
    std::uint64_t word = w[k];
    while (word != 0) {
      p.monomials_.push_back(k * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return p;
}

int AnfPoly::degree() const {
  int d = -1;
  for (auto m : monomials_) d = std::max(d, std::popcount(m));
  return d;
}

bool AnfPoly::evaluate(std::uint64_t code) const {
  bool v = false;
  for (auto m : monomials_) v ^= (code & m) == m;
  return v;
}

BitVec AnfPoly::truth_table() const {
  if (nvars_ > 32) throw std::length_error("truth table too large");
  BitVec t(std::size_t{1} << nvars_);
  for (auto m : monomials_) t.flip(m);
  moebius_transform(t, nvars_);
  return t;
}

AnfPoly& AnfPoly::operator+=(const AnfPoly& other) {
  if (nvars_ != other.nvars_) throw std::invalid_argument("variable count mismatch");
  std::vector<std::uint64_t> out;
  out.reserve(monomials_.size() + other.monomials_.size());
  std::set_symmetric_difference(monomials_.begin(), monomials_.end(), other.monomials_.begin(),
                                other.monomials_.end(), std::back_inserter(out));
  monomials_ = std::move(out);
  return *this;
}

AnfPoly operator*(const AnfPoly& a, const AnfPoly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable count mismatch");
  AnfPoly p(a.nvars_);
  p.monomials_.reserve(a.monomials_.size() * b.monomials_.size());
  for (auto u : a.monomials_) {
    for (auto v : b.monomials_) p.monomials_.push_back(u | v);
  }
  p.canonicalize();
  return p;
}

void AnfPoly::canonicalize() {
  std::sort(monomials_.begin(), monomials_.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < monomials_.size();) {
    std::size_t j = i;
    while (j < monomials_.size() && monomials_[j] == monomials_[i]) ++j;
    if ((j - i) % 2 == 1) monomials_[out++] = monomials_[i];
    i = j;
  }
  monomials_.resize(out);
}

std::string AnfPoly::to_string() const {
  if (monomials_.empty()) return "0";
  // Variable index lists, degree-ascending then lexicographic, constant last.
  std::vector<std::vector<int>> terms;
  bool has_constant = false;
  for (auto m : monomials_) {
    if (m == 0) {
      has_constant = true;
      continue;
    }
    std::vector<int> vars;
    for (int i = 0; i < nvars_; ++i) {
      if ((m >> (nvars_ - 1 - i)) & 1u) vars.push_back(i + 1);
    }
    terms.push_back(std::move(vars));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::string s;
  for (const auto& t : terms) {
    if (!s.empty()) s += " + ";
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 0) s += '*';
      s += 'x' + std::to_string(t[k]);
    }
  }
  if (has_constant) s += s.empty() ? "1" : " + 1";
  return s;
}

}  // namespace locinv
