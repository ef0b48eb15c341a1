#include "locinv/map.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace locinv {

namespace {

int env_limit(const char* name, int fallback, int lo, int hi) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  int out = 0;
  const char* end = v + std::char_traits<char>::length(v);
  auto [ptr, ec] = std::from_chars(v, end, out);
  if (ec != std::errc() || ptr != end) return fallback;
  return std::clamp(out, lo, hi);
}

std::mutex& hook_mutex() {
  static std::mutex mu;
  return mu;
}

DiagnosticHook& hook_slot() {
  static DiagnosticHook hook;
  return hook;
}

// One line of input with whitespace removed; each kept character remembers its column.
struct Chars {
  std::string text;
  std::vector<int> column;
  int line = 0;
  int end_column = 1;

  int col(std::size_t i) const { return i < column.size() ? column[i] : end_column; }
};

Chars squeeze(std::string_view raw, int line, int first_column) {
  Chars c;
  c.line = line;
  int col = first_column;
  for (char ch : raw) {
    if (ch == '#') break;
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      c.text.push_back(ch);
      c.column.push_back(col);
    }
    ++col;
  }
  c.end_column = col;
  return c;
}

bool read_uint(const Chars& c, std::size_t& pos, int& out) {
  const std::size_t start = pos;
  long long v = 0;
  while (pos < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[pos]))) {
    v = v * 10 + (c.text[pos] - '0');
    if (v > 1'000'000) throw ParseError(c.line, c.col(start), "number too large");
    ++pos;
  }
  if (pos == start) return false;
  out = static_cast<int>(v);
  return true;
}

AnfPoly parse_rhs(const Chars& c, std::size_t pos, int nvars) {
  std::vector<std::uint64_t> monomials;
  if (pos >= c.text.size()) throw ParseError(c.line, c.col(pos), "expected a term");
  while (true) {
    const std::size_t term_start = pos;
    if (pos >= c.text.size()) throw ParseError(c.line, c.col(pos), "expected a term after '+'");
    const char ch = c.text[pos];
    if (ch == '1' || ch == '0') {
      ++pos;
      if (pos < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[pos]))) {
        throw ParseError(c.line, c.col(term_start), "constant terms must be 0 or 1");
      }
      if (ch == '1') monomials.push_back(0);
    } else if (ch == 'x') {
      std::uint64_t mask = 0;
      while (true) {
        if (pos >= c.text.size() || c.text[pos] != 'x') {
          throw ParseError(c.line, c.col(pos), "expected a variable x<j>");
        }
        ++pos;
        const std::size_t num_start = pos;
        int j = 0;
        if (!read_uint(c, pos, j)) throw ParseError(c.line, c.col(pos), "expected a variable index");
        if (j < 1 || j > nvars) {
          throw ParseError(c.line, c.col(num_start),
                           "variable index x" + std::to_string(j) + " out of range 1.." +
                               std::to_string(nvars));
        }
        mask |= std::uint64_t{1} << (nvars - j);
        if (pos < c.text.size() && c.text[pos] == '*') {
          ++pos;
          continue;
        }
        break;
      }
      monomials.push_back(mask);
    } else {
      throw ParseError(c.line, c.col(pos), std::string("unexpected character '") + ch + "'");
    }
    if (pos == c.text.size()) break;
    if (c.text[pos] != '+') {
      throw ParseError(c.line, c.col(pos), std::string("unexpected character '") + c.text[pos] + "'");
    }
    ++pos;
  }
  return AnfPoly(nvars, std::move(monomials));
}

}  // namespace

const Limits& limits() {
  static const Limits l{env_limit("LOCINV_TABLE_LIMIT", 24, 1, 32),
                        env_limit("LOCINV_KOOPMAN_LIMIT", 16, 1, 24)};
  return l;
}

void set_diagnostic_hook(DiagnosticHook hook) {
  std::lock_guard lock(hook_mutex());
  hook_slot() = std::move(hook);
}

void diagnostic(const std::string& message) {
  std::lock_guard lock(hook_mutex());
  if (hook_slot()) hook_slot()(message);
}

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

PolyMap::PolyMap(int n, std::vector<AnfPoly> components) : n_(n), components_(std::move(components)) {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("map dimension out of range");
  if (components_.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("component count must equal n");
  }
  for (const auto& c : components_) {
    if (c.nvars() != n) throw std::invalid_argument("component variable count must equal n");
  }
}

PolyMap PolyMap::identity(int n) {
  std::vector<AnfPoly> comps;
  for (int i = 0; i < n; ++i) comps.push_back(AnfPoly::variable(n, i));
  return PolyMap(n, std::move(comps));
}

std::uint64_t PolyMap::eval_code(std::uint64_t code) const {
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    out = (out << 1) | static_cast<std::uint64_t>(components_[static_cast<std::size_t>(i)].evaluate(code));
  }
  return out;
}

Point PolyMap::eval(const Point& x) const {
  if (x.dimension() != n_) throw std::invalid_argument("point dimension does not match the map");
  return Point(n_, eval_code(x.code()));
}

std::string PolyMap::serialize() const {
  std::ostringstream os;
  os << "n=" << n_ << '\n';
  for (int i = 0; i < n_; ++i) {
    os << 'y' << (i + 1) << " = " << components_[static_cast<std::size_t>(i)].to_string() << '\n';
  }
  return os.str();
}

std::uint64_t PolyMap::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

PolyMap parse_map(std::string_view text) {
  int n = 0;
  std::vector<std::optional<AnfPoly>> comps;
  int line_no = 0;
  int last_line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++line_no;
    start = end + 1;
    Chars c = squeeze(raw, line_no, 1);
    if (c.text.empty()) {
      if (end == text.size()) break;
      continue;
    }
    last_line = line_no;
    std::size_t pos = 0;
    if (n == 0) {
      if (c.text.rfind("n=", 0) != 0) throw ParseError(line_no, c.col(0), "expected 'n=<int>'");
      pos = 2;
      if (!read_uint(c, pos, n) || pos != c.text.size()) {
        throw ParseError(line_no, c.col(pos), "expected an integer dimension");
      }
      if (n < 1 || n > kMaxDimension) {
        throw ParseError(line_no, c.col(2), "dimension must be in 1.." + std::to_string(kMaxDimension));
      }
      comps.assign(static_cast<std::size_t>(n), std::nullopt);
    } else {
      if (c.text[0] != 'y') throw ParseError(line_no, c.col(0), "expected 'y<i> = ...'");
      pos = 1;
      int i = 0;
      if (!read_uint(c, pos, i)) throw ParseError(line_no, c.col(pos), "expected an output index");
      if (i < 1 || i > n) {
        throw ParseError(line_no, c.col(1), "output index y" + std::to_string(i) + " out of range");
      }
      if (comps[static_cast<std::size_t>(i - 1)]) {
        throw ParseError(line_no, c.col(0), "y" + std::to_string(i) + " defined twice");
      }
      if (pos >= c.text.size() || c.text[pos] != '=') throw ParseError(line_no, c.col(pos), "expected '='");
      comps[static_cast<std::size_t>(i - 1)] = parse_rhs(c, pos + 1, n);
    }
    if (end == text.size()) break;
  }
  if (n == 0) throw ParseError(line_no, 1, "missing 'n=<int>' header");
  std::vector<AnfPoly> out;
  for (int i = 0; i < n; ++i) {
    if (!comps[static_cast<std::size_t>(i)]) {
      throw ParseError(last_line, 1, "component y" + std::to_string(i + 1) + " missing");
    }
    out.push_back(std::move(*comps[static_cast<std::size_t>(i)]));
  }
  return PolyMap(n, std::move(out));
}

AnfPoly parse_anf(std::string_view text, int nvars) {
  Chars c = squeeze(text, 1, 1);
  return parse_rhs(c, 0, nvars);
}

TableMap::TableMap(int n, std::vector<std::uint32_t> table) : n_(n), table_(std::move(table)) {
  if (n < 1 || n > 32) throw std::invalid_argument("table dimension out of range");
  if (table_.size() != (std::uint64_t{1} << n)) throw std::invalid_argument("table must have 2^n entries");
  if (n < 32) {
    for (auto v : table_) {
      if ((v >> n) != 0) throw std::invalid_argument("table entry out of range");
    }
  }
}

TableMap TableMap::identity(int n) {
  std::vector<std::uint32_t> t(std::size_t{1} << n);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<std::uint32_t>(i);
  return TableMap(n, std::move(t));
}

Point TableMap::eval(const Point& x) const {
  if (x.dimension() != n_) throw std::invalid_argument("point dimension does not match the map");
  return Point(n_, table_[x.code()]);
}

bool TableMap::is_bijection() const {
  std::vector<bool> seen(table_.size(), false);
  for (auto v : table_) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

TableMap compile_table(const PolyMap& map) {
  const int n = map.dimension();
  if (n > limits().table) {
    throw std::length_error("n=" + std::to_string(n) + " exceeds the table limit " +
                            std::to_string(limits().table));
  }
  std::vector<std::uint32_t> t(std::size_t{1} << n, 0);
  for (int i = 0; i < n; ++i) {
    const BitVec tt = map.component(i).truth_table();
    const std::uint32_t bit = std::uint32_t{1} << (n - 1 - i);
    auto w = tt.words();
    for (std::size_t k = 0; k < w.size(); ++k) {
      std::uint64_t word = w[k];
      while (word != 0) {
        t[k * 64 + static_cast<std::size_t>(std::countr_zero(word))] |= bit;
        word &= word - 1;
      }
    }
  }
  return TableMap(n, std::move(t));
}

PolyMap to_poly_map(const TableMap& table) {
  const int n = table.dimension();
  std::vector<AnfPoly> comps;
  for (int i = 0; i < n; ++i) {
    BitVec tt(table.size());
    for (std::uint64_t x = 0; x < table.size(); ++x) {
      if ((table(x) >> (n - 1 - i)) & 1u) tt.set(x);
    }
    comps.push_back(AnfPoly::from_truth_table(n, tt));
  }
  return PolyMap(n, std::move(comps));
}

TableMap compose(const TableMap& g, const TableMap& h) {
  if (g.dimension() != h.dimension()) throw std::invalid_argument("composition dimension mismatch");
  std::vector<std::uint32_t> t(h.size());
  for (std::uint64_t x = 0; x < h.size(); ++x) t[x] = g(h(x));
  return TableMap(g.dimension(), std::move(t));
}

PowerIterator::PowerIterator(TableMap base) : n_(base.dimension()) {
  levels_[0] = std::make_unique<TableMap>(std::move(base));
}

const TableMap& PowerIterator::level(int i) const {
  if (i < ready_.load(std::memory_order_acquire)) return *levels_[static_cast<std::size_t>(i)];
  std::lock_guard lock(mu_);
  for (int k = ready_.load(std::memory_order_relaxed); k <= i; ++k) {
    const TableMap& prev = *levels_[static_cast<std::size_t>(k - 1)];
    levels_[static_cast<std::size_t>(k)] = std::make_unique<TableMap>(compose(prev, prev));
    build_cost_ += prev.size();
    ready_.store(k + 1, std::memory_order_release);
  }
  return *levels_[static_cast<std::size_t>(i)];
}

std::uint64_t PowerIterator::apply(std::uint64_t code, std::uint64_t N, std::uint64_t* lookups) const {
  std::uint64_t used = 0;
  for (int i = 0; N != 0; ++i, N >>= 1) {
    if (N & 1u) {
      code = level(i)(code);
      ++used;
    }
  }
  if (lookups != nullptr) *lookups += used;
  return code;
}

Point PowerIterator::apply(const Point& x, std::uint64_t N, std::uint64_t* lookups) const {
  if (x.dimension() != n_) throw std::invalid_argument("point dimension does not match the map");
  return Point(n_, apply(x.code(), N, lookups));
}

MapView::MapView(const PolyMap& map)
    : n_(map.dimension()), poly_(std::make_shared<const PolyMap>(map)) {
  if (n_ <= limits().table) power_ = std::make_shared<const PowerIterator>(compile_table(map));
}

MapView::MapView(TableMap table)
    : n_(table.dimension()), power_(std::make_shared<const PowerIterator>(std::move(table))) {}

const TableMap& MapView::table() const {
  if (!power_) throw std::logic_error("map view has no compiled table");
  return power_->base();
}

std::uint64_t MapView::iterate(std::uint64_t code, std::uint64_t N, std::uint64_t* lookups) const {
  if (power_) return power_->apply(code, N, lookups);
  if (N > (std::uint64_t{1} << 20)) {
    diagnostic("iterate: " + std::to_string(N) + " direct evaluations (n=" + std::to_string(n_) +
               " is above the table limit)");
  }
  for (std::uint64_t k = 0; k < N; ++k) code = poly_->eval_code(code);
  if (lookups != nullptr) *lookups += N;
  return code;
}

Point power_iterate(const TableMap& map, const Point& x, std::uint64_t N) {
  return PowerIterator(map).apply(x, N);
}

Point power_iterate(const PolyMap& map, const Point& x, std::uint64_t N) {
  if (x.dimension() != map.dimension()) {
    throw std::invalid_argument("point dimension does not match the map");
  }
  if (map.dimension() <= limits().table) return PowerIterator(compile_table(map)).apply(x, N);
  diagnostic("power_iterate: n=" + std::to_string(map.dimension()) +
             " above the table limit, falling back to " + std::to_string(N) + " direct evaluations");
  return naive_iterate(map, x, N);
}

Point naive_iterate(const PolyMap& map, const Point& x, std::uint64_t N) {
  if (x.dimension() != map.dimension()) {
    throw std::invalid_argument("point dimension does not match the map");
  }
  std::uint64_t c = x.code();
  for (std::uint64_t k = 0; k < N; ++k) c = map.eval_code(c);
  return Point(map.dimension(), c);
}

std::vector<Point> brute_preimages(const TableMap& map, const Point& y) {
  if (y.dimension() != map.dimension()) {
    throw std::invalid_argument("point dimension does not match the map");
  }
  std::vector<Point> out;
  for (std::uint64_t x = 0; x < map.size(); ++x) {
    if (map(x) == y.code()) out.emplace_back(map.dimension(), x);
  }
  return out;
}

PolyMap random_map(int n, std::mt19937_64& rng) {
  if (n < 1 || n > 20) throw std::invalid_argument("random_map supports 1 <= n <= 20");
  std::vector<AnfPoly> comps;
  for (int i = 0; i < n; ++i) {
    BitVec tt(std::size_t{1} << n);
    auto w = tt.words();
    for (auto& word : w) word = rng();
    if (tt.size() < 64) w[0] &= (std::uint64_t{1} << tt.size()) - 1;
    comps.push_back(AnfPoly::from_truth_table(n, tt));
  }
  return PolyMap(n, std::move(comps));
}

PolyMap random_sparse_map(int n, int max_degree, double density, std::mt19937_64& rng) {
  if (n < 1 || n > 20) throw std::invalid_argument("random_sparse_map supports 1 <= n <= 20");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<AnfPoly> comps;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> monomials;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (std::popcount(m) <= max_degree && coin(rng) < density) monomials.push_back(m);
    }
    comps.emplace_back(n, std::move(monomials));
  }
  return PolyMap(n, std::move(comps));
}

}  // namespace locinv
