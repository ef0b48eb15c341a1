#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/anf.hpp"
#include "locinv/point.hpp"

namespace locinv {

/// Size limits, read once from LOCINV_TABLE_LIMIT / LOCINV_KOOPMAN_LIMIT.
struct Limits {
  int table = 24;
  int koopman = 16;
};
const Limits& limits();

/// Receives cost warnings and similar non-fatal notes. Default: silent.
using DiagnosticHook = std::function<void(const std::string&)>;
void set_diagnostic_hook(DiagnosticHook hook);
void diagnostic(const std::string& message);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A map F2^n -> F2^n given by n ANF component polynomials in n variables.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(int n, std::vector<AnfPoly> components);

  static PolyMap identity(int n);

  int dimension() const { return n_; }
  const std::vector<AnfPoly>& components() const { return components_; }
  const AnfPoly& component(int i) const { return components_[static_cast<std::size_t>(i)]; }

  std::uint64_t eval_code(std::uint64_t code) const;
  Point eval(const Point& x) const;

  /// Canonical map-file text (`n=3` then `y1 = ...` lines).
  std::string serialize() const;
  /// FNV-1a over the canonical text.
  std::uint64_t fingerprint() const;

  friend bool operator==(const PolyMap&, const PolyMap&) = default;

 private:
  int n_ = 0;
  std::vector<AnfPoly> components_;
};

PolyMap parse_map(std::string_view text);
/// Parses a single ANF right-hand side (`x1*x2 + 1`) in `nvars` variables.
AnfPoly parse_anf(std::string_view text, int nvars);

/// Explicit function graph: entry at index code(x) is code(F(x)).
class TableMap {
 public:
  TableMap() = default;
  TableMap(int n, std::vector<std::uint32_t> table);

  static TableMap identity(int n);

  int dimension() const { return n_; }
  std::uint64_t size() const { return table_.size(); }
  std::uint32_t operator()(std::uint64_t code) const { return table_[code]; }
  Point eval(const Point& x) const;
  const std::vector<std::uint32_t>& table() const { return table_; }

  bool is_bijection() const;

  friend bool operator==(const TableMap&, const TableMap&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint32_t> table_;
};

TableMap compile_table(const PolyMap& map);
/// Interpolates a table back to ANF components.
PolyMap to_poly_map(const TableMap& table);
/// x -> g(h(x)).
TableMap compose(const TableMap& g, const TableMap& h);

/// Holds F^(2^i) for i = 0, 1, ... and applies F^N through the binary expansion of N.
/// Levels are built on demand; concurrent apply() calls are safe.
class PowerIterator {
 public:
  explicit PowerIterator(TableMap base);

  int dimension() const { return n_; }
  const TableMap& base() const { return *levels_[0]; }

  /// F^N(code). Adds the number of table lookups performed to *lookups if given.
  std::uint64_t apply(std::uint64_t code, std::uint64_t N, std::uint64_t* lookups = nullptr) const;
  Point apply(const Point& x, std::uint64_t N, std::uint64_t* lookups = nullptr) const;

  /// Table lookups spent on composing levels so far.
  std::uint64_t build_cost() const { return build_cost_.load(); }

 private:
  const TableMap& level(int i) const;

  int n_;
  mutable std::mutex mu_;
  mutable std::array<std::unique_ptr<TableMap>, 64> levels_;
  mutable std::atomic<int> ready_{1};
  mutable std::atomic<std::uint64_t> build_cost_{0};
};

/// Uniform handle on F used by the algorithms: a compiled table with power
/// iteration when n is within the table limit, otherwise direct ANF evaluation.
/// Copies share state.
class MapView {
 public:
  explicit MapView(const PolyMap& map);
  explicit MapView(TableMap table);

  int dimension() const { return n_; }
  bool has_table() const { return power_ != nullptr; }
  const TableMap& table() const;
  const PolyMap* poly() const { return poly_.get(); }

  std::uint64_t step(std::uint64_t code) const {
    return power_ ? power_->base()(code) : poly_->eval_code(code);
  }
  /// Table entries composed so far to build the power levels.
  std::uint64_t build_cost() const { return power_ ? power_->build_cost() : 0; }
  /// F^N(code); log-time with a table, N steps otherwise.
  std::uint64_t iterate(std::uint64_t code, std::uint64_t N, std::uint64_t* lookups = nullptr) const;

 private:
  int n_;
  std::shared_ptr<const PolyMap> poly_;
  std::shared_ptr<const PowerIterator> power_;
};

Point power_iterate(const TableMap& map, const Point& x, std::uint64_t N);
/// Compiles a table when n is within the table limit, otherwise iterates naively
/// and reports the cost through diagnostic().
Point power_iterate(const PolyMap& map, const Point& x, std::uint64_t N);
Point naive_iterate(const PolyMap& map, const Point& x, std::uint64_t N);

/// {x : F(x) = y}, ascending.
std::vector<Point> brute_preimages(const TableMap& map, const Point& y);

/// Uniformly random function F2^n -> F2^n, returned in ANF.
PolyMap random_map(int n, std::mt19937_64& rng);
/// Random ANF map with each monomial of degree <= max_degree present with probability density.
PolyMap random_sparse_map(int n, int max_degree, double density, std::mt19937_64& rng);

}  // namespace locinv
