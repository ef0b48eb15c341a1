#include "locinv/goe.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>
#include <thread>

namespace locinv {

namespace {

// Polynomial over variable ids: monomial bit i is variable id i. Sorted, no repeats.
using IdPoly = std::vector<std::uint64_t>;

void xor_canonical(IdPoly& p) {
  std::sort(p.begin(), p.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    if ((j - i) & 1u) p[out++] = p[i];
    i = j;
  }
  p.resize(out);
}

IdPoly to_ids(const AnfPoly& a) {
  const int v = a.nvars();
  IdPoly p;
  p.reserve(a.monomials().size());
  for (auto m : a.monomials()) {
    std::uint64_t r = 0;
    for (int i = 0; i < v; ++i) {
      if ((m >> (v - 1 - i)) & 1u) r |= std::uint64_t{1} << i;
    }
    p.push_back(r);
  }
  xor_canonical(p);
  return p;
}

IdPoly cofactor(const IdPoly& h, std::uint64_t care, std::uint64_t value) {
  const std::uint64_t zeros = care & ~value;
  IdPoly out;
  out.reserve(h.size());
  for (auto m : h) {
    if (m & zeros) continue;
    out.push_back(m & ~care);
  }
  xor_canonical(out);
  return out;
}

bool is_one(const IdPoly& h) { return h.size() == 1 && h[0] == 0; }

// Shannon expansion of h under t on the highest variable id, positive branch first.
void expand(const Term& t, const IdPoly& h, std::vector<Term>& out) {
  if (h.empty()) return;
  if (is_one(h)) {
    out.push_back(t);
    return;
  }
  std::uint64_t support = 0;
  for (auto m : h) support |= m;
  const int v = 63 - std::countl_zero(support);
  const std::uint64_t bit = std::uint64_t{1} << v;
  expand(Term{t.care | bit, t.value | bit}, cofactor(h, bit, bit), out);
  expand(Term{t.care | bit, t.value}, cofactor(h, bit, 0), out);
}

std::vector<Term> refine(const std::vector<Term>& terms, const IdPoly& f, int threads) {
  auto work = [&](std::size_t lo, std::size_t hi, std::vector<Term>& out) {
    for (std::size_t k = lo; k < hi; ++k) {
      expand(terms[k], cofactor(f, terms[k].care, terms[k].value), out);
    }
  };
  const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
  if (nt == 1 || terms.size() < 64) {
    std::vector<Term> out;
    work(0, terms.size(), out);
    return out;
  }
  std::vector<std::vector<Term>> parts(nt);
  std::vector<std::thread> pool;
  const std::size_t chunk = (terms.size() + nt - 1) / nt;
  for (std::size_t p = 0; p < nt; ++p) {
    const std::size_t lo = std::min(terms.size(), p * chunk);
    const std::size_t hi = std::min(terms.size(), lo + chunk);
    pool.emplace_back(work, lo, hi, std::ref(parts[p]));
  }
  for (auto& th : pool) th.join();
  std::vector<Term> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

std::vector<Term> ladder(const IdPoly& f, int nx) {
  std::uint64_t support = 0;
  for (auto m : f) support |= m;
  if (nx < 64) support &= (std::uint64_t{1} << nx) - 1;
  std::vector<Term> out;
  std::uint64_t care = 0;
  while (support != 0) {
    const std::uint64_t bit = support & (~support + 1);
    out.push_back(Term{care | bit, bit});
    care |= bit;
    support &= support - 1;
  }
  out.push_back(Term{care, 0});
  return out;
}

BitVec truth_table_ids(const IdPoly& p, int nvars) {
  BitVec t(std::size_t{1} << nvars);
  for (auto m : p) t.flip(m);
  moebius_transform(t, nvars);
  return t;
}

}  // namespace

std::string to_string(GoeBackend b) { return b == GoeBackend::brute ? "brute" : "implicant"; }

GoeBackend parse_goe_backend(std::string_view s) {
  if (s == "brute") return GoeBackend::brute;
  if (s == "implicant") return GoeBackend::implicant;
  throw std::invalid_argument("unknown GOE backend '" + std::string(s) + "'");
}

bool GoeSet::contains(const Point& y) const { return std::binary_search(points.begin(), points.end(), y); }

GoeSet goe_brute(const TableMap& map) {
  std::vector<bool> hit(map.size(), false);
  for (auto v : map.table()) hit[v] = true;
  GoeSet g;
  g.backend = GoeBackend::brute;
  for (std::uint64_t y = 0; y < map.size(); ++y) {
    if (!hit[y]) g.points.emplace_back(map.dimension(), y);
  }
  return g;
}

std::string Term::to_string(int nx) const {
  if (care == 0) return "1";
  std::string s;
  for (int id = 0; id < 64; ++id) {
    if (!((care >> id) & 1u)) continue;
    s += id < nx ? 'x' + std::to_string(id + 1) : 'y' + std::to_string(id - nx + 1);
    if (!((value >> id) & 1u)) s += '\'';
  }
  return s;
}

Term Term::parse(std::string_view text, int nx) {
  Term t;
  if (text == "1") return t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char kind = text[pos];
    if (kind != 'x' && kind != 'y') throw std::invalid_argument("term literal must start with x or y");
    ++pos;
    int j = 0;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      j = j * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos == start || j < 1) throw std::invalid_argument("term literal needs a positive index");
    bool positive = true;
    if (pos < text.size() && text[pos] == '\'') {
      positive = false;
      ++pos;
    }
    const int id = kind == 'x' ? j - 1 : nx + j - 1;
    if ((kind == 'x' && j > nx) || id >= 64) throw std::invalid_argument("term literal index out of range");
    const std::uint64_t bit = std::uint64_t{1} << id;
    if (t.care & bit) throw std::invalid_argument("variable repeated in term");
    t.care |= bit;
    if (positive) t.value |= bit;
  }
  return t;
}

std::vector<AnfPoly> system_factors(const PolyMap& map) {
  const int n = map.dimension();
  if (2 * n > 64) throw std::invalid_argument("system needs 2n <= 64 variables");
  std::vector<AnfPoly> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> ms;
    for (auto m : map.component(i).monomials()) ms.push_back(m << n);
    ms.push_back(std::uint64_t{1} << (n - 1 - i));
    ms.push_back(0);
    out.emplace_back(2 * n, std::move(ms));
  }
  return out;
}

ImplicantSet orthonormal_expand(const std::vector<AnfPoly>& factors, int nx, const ExpandOptions& opts) {
  ImplicantSet set;
  set.nx = nx;
  const int nvars = factors.empty() ? nx : factors.front().nvars();
  for (const auto& f : factors) {
    if (f.nvars() != nvars) throw std::invalid_argument("factors must share the variable set");
  }
  if (nx < 0 || nx > nvars) throw std::invalid_argument("X variable count out of range");
  set.ny = nvars - nx;

  std::vector<IdPoly> polys;
  for (const auto& f : factors) polys.push_back(to_ids(f));
  if (polys.empty()) {
    set.terms.push_back(Term{});
    return set;
  }

  std::vector<bool> used(polys.size(), false);
  bool started = false;
  std::vector<Term> current;
  for (std::size_t round = 0; round < polys.size(); ++round) {
    int best = -1;
    std::vector<Term> best_terms;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (used[i]) continue;
      std::vector<Term> cand =
          refine(started ? current : ladder(polys[i], nx), polys[i], opts.threads);
      if (best < 0 || cand.size() < best_terms.size()) {
        best = static_cast<int>(i);
        best_terms = std::move(cand);
      }
      if (opts.rule == PivotRule::index) break;
    }
    used[static_cast<std::size_t>(best)] = true;
    started = true;
    current = std::move(best_terms);
    set.pivot_order.push_back(best);
    set.stages.push_back(current);
  }
  set.terms = std::move(current);
  return set;
}

bool verify_implicants(ImplicantSet& set, const std::vector<AnfPoly>& factors) {
  const int nvars = set.nx + set.ny;
  if (nvars > 24) throw std::length_error("exhaustive implicant check limited to 24 variables");
  const std::uint64_t full = nvars == 0 ? 0 : (std::uint64_t{1} << nvars) - 1;
  BitVec covered(std::size_t{1} << nvars);
  bool orthogonal = true;
  for (const auto& t : set.terms) {
    const std::uint64_t free = full & ~t.care;
    std::uint64_t s = 0;
    do {
      const std::uint64_t a = t.value | s;
      if (covered.get(a)) orthogonal = false;
      covered.set(a);
      s = (s - free) & free;
    } while (s != 0);
  }
  BitVec sat(std::size_t{1} << nvars);
  for (auto& w : sat.words()) w = ~std::uint64_t{0};
  if (sat.size() < 64) sat.words()[0] = (std::uint64_t{1} << sat.size()) - 1;
  for (const auto& f : factors) sat &= truth_table_ids(to_ids(f), nvars);
  set.orthogonal = orthogonal;
  set.complete = covered == sat;
  return set.orthogonal && set.complete;
}

FuncVec phi_function(const ImplicantSet& set) {
  const int nx = set.nx, ny = set.ny;
  if (ny > 32) throw std::length_error("phi table too large");
  FuncVec phi(std::size_t{1} << ny);
  const std::uint64_t yfull = (std::uint64_t{1} << ny) - 1;
  for (const auto& t : set.terms) {
    if (nx + ny < 64 && (t.care >> (nx + ny)) != 0) {
      throw std::invalid_argument("term uses a variable outside X and Y");
    }
    // Y part in point encoding: y_{j+1} sits at bit ny-1-j.
    std::uint64_t care = 0, value = 0;
    for (int j = 0; j < ny; ++j) {
      const std::uint64_t id_bit = std::uint64_t{1} << (nx + j);
      const std::uint64_t pt_bit = std::uint64_t{1} << (ny - 1 - j);
      if (t.care & id_bit) {
        care |= pt_bit;
        if (t.value & id_bit) value |= pt_bit;
      }
    }
    const std::uint64_t free = yfull & ~care;
    std::uint64_t s = 0;
    do {
      phi.set(value | s);
      s = (s - free) & free;
    } while (s != 0);
  }
  return phi;
}

GoeSet goe_implicant(const PolyMap& map, const ExpandOptions& opts) {
  const int n = map.dimension();
  const auto factors = system_factors(map);
  ImplicantSet set = orthonormal_expand(factors, n, opts);
  if (2 * n <= 20 && !verify_implicants(set, factors)) {
    throw std::logic_error("implicant set failed the exhaustive check");
  }
  const FuncVec phi = phi_function(set);
  GoeSet g;
  g.backend = GoeBackend::implicant;
  for (std::uint64_t y = 0; y < phi.size(); ++y) {
    if (!phi.get(y)) g.points.emplace_back(n, y);
  }
  return g;
}

}  // namespace locinv
