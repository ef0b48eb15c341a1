#include "locinv/cipher.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "locinv/koopman.hpp"

namespace locinv {

namespace {

Point bits_to_point(const std::vector<bool>& bits) {
  const int n = static_cast<int>(bits.size());
  std::uint64_t code = 0;
  for (int j = 0; j < n; ++j) {
    if (bits[static_cast<std::size_t>(j)]) code |= coordinate_mask(n, j);
  }
  return Point(n, code);
}

void require_table(int n, const char* what) {
  if (n > limits().table) throw std::length_error(std::string(what) + ": n exceeds the table limit");
}

}  // namespace

Point BlockCipherSpec::encrypt(const Point& key, const Point& plain) const {
  if (key.dimension() != n || plain.dimension() != n) throw std::invalid_argument("key/block width mismatch");
  const std::uint64_t code = (key.code() << n) | plain.code();
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i) {
    if (components[static_cast<std::size_t>(i)].evaluate(code)) out |= coordinate_mask(n, i);
  }
  return Point(n, out);
}

PolyMap BlockCipherSpec::restrict(const Point& plain) const {
  if (plain.dimension() != n) throw std::invalid_argument("plaintext width mismatch");
  const std::uint64_t low = (std::uint64_t{1} << n) - 1;
  std::vector<AnfPoly> comps;
  for (const auto& c : components) {
    if (c.nvars() != 2 * n) throw std::invalid_argument("cipher components need 2n variables");
    std::vector<std::uint64_t> ms;
    for (auto m : c.monomials()) {
      // A plaintext literal set to 0 kills the monomial; literals set to 1 drop out.
      if ((m & low & ~plain.code()) != 0) continue;
      ms.push_back(m >> n);
    }
    comps.emplace_back(n, std::move(ms));
  }
  return PolyMap(n, std::move(comps));
}

InversionResult block_key_recover(const BlockCipherSpec& spec, const Point& plain, const Point& cipher,
                                  const OfflineData& offline, const InvertOptions& opts) {
  return local_invert_complete(spec.restrict(plain), cipher, offline, opts);
}

std::vector<bool> StreamCipherSpec::keystream(const Point& x0, std::size_t len) const {
  if (x0.dimension() != n()) throw std::invalid_argument("state width mismatch");
  std::vector<bool> w;
  w.reserve(len);
  std::uint64_t x = x0.code();
  for (std::size_t k = 0; k < len; ++k) {
    w.push_back(f.evaluate(x));
    x = F.eval_code(x);
  }
  return w;
}

Point simulate_window(const StreamCipherSpec& spec, const Point& x) {
  return bits_to_point(spec.keystream(x, static_cast<std::size_t>(spec.n())));
}

KeystreamWindow window_at(const StreamCipherSpec& spec, const Point& x0, std::uint64_t k0) {
  return {k0, simulate_window(spec, power_iterate(spec.F, x0, k0))};
}

PolyMap build_hatF(const StreamCipherSpec& spec) {
  const int n = spec.n();
  require_table(n, "window map");
  if (spec.f.nvars() != n) throw std::invalid_argument("output function has the wrong variable count");
  const TableMap t = compile_table(spec.F);
  FuncVec g = spec.f.truth_table();
  std::vector<AnfPoly> comps;
  for (int j = 0; j < n; ++j) {
    comps.push_back(AnfPoly::from_truth_table(n, g));
    if (j + 1 < n) g = dual_apply(t, g);
  }
  return PolyMap(n, std::move(comps));
}

bool is_observable(const StreamCipherSpec& spec) { return compile_table(build_hatF(spec)).is_bijection(); }

bool coordinates_in_span(const StreamCipherSpec& spec) {
  const int n = spec.n();
  require_table(n, "observability");
  const TableMap t = compile_table(spec.F);
  LinearBasis span(std::size_t{1} << n, false);
  FuncVec g = spec.f.truth_table();
  for (int j = 0; j < n; ++j) {
    span.insert(g);
    g = dual_apply(t, g);
  }
  for (int i = 0; i < n; ++i) {
    if (!span.contains(coordinate_function(n, i))) return false;
  }
  return true;
}

InversionResult recover_internal_state(const StreamCipherSpec& spec, const KeystreamWindow& window,
                                       const OfflineData& offline, const InvertOptions& opts) {
  if (window.bits.dimension() != spec.n()) throw std::invalid_argument("window must hold exactly n bits");
  return local_invert_complete(build_hatF(spec), window.bits, offline, opts);
}

namespace {

TableMap power_table(const PolyMap& F, std::uint64_t k0) {
  require_table(F.dimension(), "power map");
  const MapView v(F);
  std::vector<std::uint32_t> t(std::size_t{1} << F.dimension());
  for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint32_t>(v.iterate(x, k0));
  return TableMap(F.dimension(), std::move(t));
}

}  // namespace

OfflineData offline_for_power(const PolyMap& F, std::uint64_t k0, GoeBackend backend) {
  const TableMap g = power_table(F, k0);
  const PolyMap gp = to_poly_map(g);
  OfflineData d;
  d.n = F.dimension();
  d.fingerprint = gp.fingerprint();
  std::vector<std::string> notes;
  try {
    // W is F*-invariant, so (F^(k0))* acts on it by K^(k0).
    const KoopmanRep rep = build_invariant_space(compile_table(F));
    const ElementaryDivisors div = elementary_divisors(matrix_power(rep.K, k0));
    d.periods = period_set(div);
    d.lc_bound = div.invertible_minpoly_degree();
  } catch (const std::length_error& e) {
    notes.push_back(std::string("periods: ") + e.what());
  } catch (const std::overflow_error& e) {
    notes.push_back(std::string("periods: ") + e.what());
  }
  // The GOE of a power has no shortcut through K; recompute it.
  try {
    d.goe = backend == GoeBackend::brute ? goe_brute(g) : goe_implicant(gp);
  } catch (const std::length_error& e) {
    notes.push_back(std::string("goe: ") + e.what());
  }
  for (std::size_t i = 0; i < notes.size(); ++i) d.note += (i ? "; " : "") + notes[i];
  return d;
}

InitialStateResult recover_initial_state(const PolyMap& F, const Point& x_k0, std::uint64_t k0,
                                         const OfflineData* power_offline, const InvertOptions& opts) {
  if (x_k0.dimension() != F.dimension()) throw std::invalid_argument("state width mismatch");
  InitialStateResult r;
  if (k0 == 0) {
    r.states = {x_k0};
    r.method = "identity";
    return r;
  }
  const MapView v(F);
  if (v.has_table() && v.table().is_bijection()) {
    // Every point is periodic: step forward around the orbit to find the period p,
    // then F^(p - k0 mod p) walks k0 steps backward.
    std::uint64_t p = 0, z = x_k0.code();
    do {
      z = v.step(z);
      ++p;
    } while (z != x_k0.code());
    r.map_steps = p;
    r.states = {Point(F.dimension(), v.iterate(x_k0.code(), (p - k0 % p) % p))};
    r.method = "backward-orbit";
    return r;
  }
  const PolyMap gp = to_poly_map(power_table(F, k0));
  const OfflineData d = power_offline ? *power_offline : offline_for_power(F, k0);
  const InversionResult inv = local_invert_complete(gp, x_k0, d, opts);
  if (inv.status == InversionStatus::inconclusive) {
    throw std::runtime_error("initial state recovery was inconclusive for " + x_k0.to_string());
  }
  r.states = inv.solutions();
  r.method = "local-inversion";
  r.map_steps = inv.chain_steps;
  return r;
}

StreamCipherSpec parse_stream_spec(std::string_view text) {
  std::string map_text;
  std::string f_text;
  int f_line = 0, line_no = 0;
  std::istringstream is{std::string(text)};
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t");
    if (b != std::string::npos && line[b] == 'f') {
      const auto eq = line.find_first_not_of(" \t", b + 1);
      if (eq != std::string::npos && line[eq] == '=') {
        if (f_line) throw ParseError(line_no, static_cast<int>(b) + 1, "output function given twice");
        f_line = line_no;
        f_text = line.substr(eq + 1);
        map_text += "\n";  // keep line numbers for map errors
        continue;
      }
    }
    map_text += line + "\n";
  }
  if (!f_line) throw ParseError(line_no, 1, "missing `f = ...` output function line");
  StreamCipherSpec s;
  s.F = parse_map(map_text);
  try {
    s.f = parse_anf(f_text, s.F.dimension());
  } catch (const ParseError& e) {
    throw ParseError(f_line, e.column(), e.what());
  }
  return s;
}

std::string serialize_stream_spec(const StreamCipherSpec& spec) {
  return spec.F.serialize() + "f = " + spec.f.to_string() + "\n";
}

namespace zoo {

PolyMap three_bit() {
  return parse_map(
      "n=3\n"
      "y1 = x1 + x2*x3 + x1*x2*x3\n"
      "y2 = x1 + x2\n"
      "y3 = x2 + x1*x3\n");
}

BlockCipherSpec whitened(const PolyMap& F0) {
  const int n = F0.dimension();
  require_table(2 * n, "whitened cipher");
  const std::uint64_t low = (std::uint64_t{1} << n) - 1;
  std::vector<BitVec> tt(static_cast<std::size_t>(n), BitVec(std::size_t{1} << (2 * n)));
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << (2 * n)); ++c) {
    const std::uint64_t out = F0.eval_code((c >> n) ^ (c & low));
    for (int i = 0; i < n; ++i) {
      if (out & coordinate_mask(n, i)) tt[static_cast<std::size_t>(i)].set(c);
    }
  }
  BlockCipherSpec s;
  s.n = n;
  for (const auto& t : tt) s.components.push_back(AnfPoly::from_truth_table(2 * n, t));
  return s;
}

BlockCipherSpec identity_in_key(int n) {
  BlockCipherSpec s;
  s.n = n;
  for (int i = 0; i < n; ++i) s.components.push_back(AnfPoly::variable(2 * n, i));
  return s;
}

StreamCipherSpec shift_register() {
  return {parse_map("n=2\ny1 = x2\ny2 = x1 + x2\n"), AnfPoly::variable(2, 0)};
}

StreamCipherSpec fibonacci_lfsr(int n, const std::vector<int>& taps) {
  if (n < 1) throw std::invalid_argument("LFSR needs n >= 1");
  std::vector<AnfPoly> comps;
  for (int i = 0; i + 1 < n; ++i) comps.push_back(AnfPoly::variable(n, i + 1));
  AnfPoly fb(n);
  for (int t : taps) {
    if (t < 1 || t > n) throw std::invalid_argument("LFSR tap out of range");
    fb += AnfPoly::variable(n, t - 1);
  }
  comps.push_back(fb);
  return {PolyMap(n, std::move(comps)), AnfPoly::variable(n, 0)};
}

StreamCipherSpec observable_conjugated() {
  constexpr int n = 8;
  const StreamCipherSpec lfsr = fibonacci_lfsr(n, {1, 3, 4, 5});
  std::vector<AnfPoly> pc;
  for (int i = 0; i < n; ++i) {
    AnfPoly c = AnfPoly::variable(n, i);
    if (i + 2 < n) c += AnfPoly::variable(n, i + 1) * AnfPoly::variable(n, i + 2);
    pc.push_back(c);
  }
  const TableMap p = compile_table(PolyMap(n, pc));
  // Triangular, so P^-1 comes from inverting the table.
  std::vector<std::uint32_t> inv(p.size());
  for (std::uint32_t x = 0; x < p.size(); ++x) inv[p(x)] = x;
  const TableMap f = compose(TableMap(n, std::move(inv)), compose(compile_table(lfsr.F), p));
  return {to_poly_map(f), pc[0]};
}

StreamCipherSpec unobservable_filtered() {
  // x^6 + x + 1 feedback.
  StreamCipherSpec s = fibonacci_lfsr(6, {1, 2});
  s.f = parse_anf("x1*x2 + x3*x4", 6);
  return s;
}

}  // namespace zoo

}  // namespace locinv
