#include "locinv/invert.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <future>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace locinv {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(const std::string& s, int base, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, base);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw std::invalid_argument(std::string("offline data: bad ") + what + " '" + s + "'");
  }
}

bool parse_flag(const std::string& s) {
  if (s == "yes") return true;
  if (s == "no") return false;
  throw std::invalid_argument("offline data: expected yes/no, got '" + s + "'");
}

OrbitSolution zero_solution(int n, const MinimalPolyResult& mp) {
  OrbitSolution s;
  s.x = Point::zero(n);
  s.witness = mp;
  s.N = 1;
  return s;
}

}  // namespace

std::string OfflineData::serialize() const {
  std::ostringstream os;
  os << "locinv-offline v1\n";
  os << "n: " << n << "\n";
  os << "fingerprint: " << hex64(fingerprint) << "\n";
  if (periods) {
    os << "periods: " << periods->to_string() << "\n";
    os << "periods-closed: " << (periods->lcm_closed ? "yes" : "no") << "\n";
    os << "periods-truncated: " << (periods->truncated ? "yes" : "no") << "\n";
  } else {
    os << "periods: unavailable\n";
  }
  os << "lc-bound: " << lc_bound << "\n";
  if (!note.empty()) os << "note: " << note << "\n";
  if (goe) {
    os << "goe-backend: " << to_string(goe->backend) << "\n";
    os << "goe: " << goe->points.size() << "\n";
    for (const auto& p : goe->points) os << p.to_string() << "\n";
  } else {
    os << "goe: unavailable\n";
  }
  return os.str();
}

OfflineData OfflineData::parse(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream is{std::string(text)};
  for (std::string line; std::getline(is, line);) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty() || lines[0] != "locinv-offline v1") {
    throw std::invalid_argument("offline data: missing 'locinv-offline v1' header");
  }
  OfflineData d;
  bool have_n = false, have_fp = false;
  GoeBackend backend = GoeBackend::brute;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto colon = lines[i].find(':');
    if (colon == std::string::npos) throw std::invalid_argument("offline data: bad line '" + lines[i] + "'");
    const std::string key = trim(std::string_view(lines[i]).substr(0, colon));
    const std::string val = trim(std::string_view(lines[i]).substr(colon + 1));
    if (key == "n") {
      const auto v = parse_u64(val, 10, "dimension");
      if (v < 1 || v > static_cast<std::uint64_t>(kMaxDimension)) {
        throw std::invalid_argument("offline data: dimension out of range");
      }
      d.n = static_cast<int>(v);
      have_n = true;
    } else if (key == "fingerprint") {
      d.fingerprint = parse_u64(val, 16, "fingerprint");
      have_fp = true;
    } else if (key == "periods") {
      if (val == "unavailable") continue;
      PeriodSet ps;
      std::istringstream ss(val);
      for (std::string tok; std::getline(ss, tok, ',');) ps.periods.push_back(parse_u64(trim(tok), 10, "period"));
      if (ps.periods.empty() || !std::is_sorted(ps.periods.begin(), ps.periods.end()) || ps.periods[0] != 1) {
        throw std::invalid_argument("offline data: periods must ascend from 1");
      }
      d.periods = std::move(ps);
    } else if (key == "periods-closed") {
      if (!d.periods) throw std::invalid_argument("offline data: periods-closed before periods");
      d.periods->lcm_closed = parse_flag(val);
    } else if (key == "periods-truncated") {
      if (!d.periods) throw std::invalid_argument("offline data: periods-truncated before periods");
      d.periods->truncated = parse_flag(val);
    } else if (key == "lc-bound") {
      d.lc_bound = static_cast<int>(parse_u64(val, 10, "lc-bound"));
    } else if (key == "note") {
      d.note = val;
    } else if (key == "goe-backend") {
      backend = parse_goe_backend(val);
    } else if (key == "goe") {
      if (val == "unavailable") continue;
      if (!have_n) throw std::invalid_argument("offline data: goe before n");
      const auto count = parse_u64(val, 10, "goe count");
      if (count > lines.size() - i - 1) throw std::invalid_argument("offline data: truncated goe list");
      GoeSet g;
      g.backend = backend;
      for (std::uint64_t k = 0; k < count; ++k) {
        const Point p = Point::parse(lines[++i]);
        if (p.dimension() != d.n) throw std::invalid_argument("offline data: goe point has wrong length");
        g.points.push_back(p);
      }
      if (!std::is_sorted(g.points.begin(), g.points.end()) ||
          std::adjacent_find(g.points.begin(), g.points.end()) != g.points.end()) {
        throw std::invalid_argument("offline data: goe points must be strictly ascending");
      }
      d.goe = std::move(g);
    } else {
      throw std::invalid_argument("offline data: unknown key '" + key + "'");
    }
  }
  if (!have_n || !have_fp) throw std::invalid_argument("offline data: n and fingerprint are required");
  return d;
}

OfflineData offline_precompute(const PolyMap& map, const OfflineOptions& opts) {
  const int n = map.dimension();
  OfflineData d;
  d.n = n;
  d.fingerprint = map.fingerprint();
  std::vector<std::string> notes;
  try {
    const KoopmanRep rep = build_invariant_space(map);
    const ElementaryDivisors div = elementary_divisors(rep.K);
    d.periods = period_set(div, opts.lcm_closure);
    d.lc_bound = div.invertible_minpoly_degree();
  } catch (const std::length_error& e) {
    notes.push_back(std::string("periods: ") + e.what());
  } catch (const std::overflow_error& e) {
    notes.push_back(std::string("periods: ") + e.what());
  }
  try {
    if (opts.backend == GoeBackend::brute) {
      if (n > limits().table) throw std::length_error("n exceeds the table limit");
      d.goe = goe_brute(compile_table(map));
    } else {
      d.goe = goe_implicant(map, opts.expand);
    }
  } catch (const std::length_error& e) {
    notes.push_back(std::string("goe: ") + e.what());
  }
  for (std::size_t i = 0; i < notes.size(); ++i) d.note += (i ? "; " : "") + notes[i];
  return d;
}

std::string to_string(ChainMode m) { return m == ChainMode::visited ? "visited" : "period"; }

ChainMode parse_chain_mode(std::string_view s) {
  if (s == "visited") return ChainMode::visited;
  if (s == "period") return ChainMode::period;
  throw std::invalid_argument("unknown chain mode '" + std::string(s) + "'");
}

std::string to_string(InversionStatus s) {
  switch (s) {
    case InversionStatus::empty: return "empty";
    case InversionStatus::orbit_only: return "orbit-only";
    case InversionStatus::chains_only: return "chains-only";
    case InversionStatus::mixed: return "mixed";
    case InversionStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<Point> InversionResult::solutions() const {
  std::vector<Point> out;
  for (const auto& c : chains) out.push_back(c.x);
  if (orbit) out.push_back(orbit->x);
  std::sort(out.begin(), out.end());
  return out;
}

std::string InversionResult::report() const {
  std::ostringstream os;
  os << "target: " << target.to_string() << "\n";
  os << "status: " << to_string(status) << "\n";
  if (orbit) {
    os << "orbit: " << orbit->x.to_string() << " (m=" << orbit->witness.degree << ", N=" << orbit->N << ")";
    if (!orbit->period_in_set) os << " [period from m(X)]";
    os << "\n";
  }
  for (const auto& c : chains) {
    os << "chain: " << c.x.to_string() << " (origin " << c.record.origin.to_string() << ", steps "
       << c.record.steps << ")\n";
  }
  const auto sol = solutions();
  os << "solutions: " << sol.size();
  for (std::size_t i = 0; i < sol.size(); ++i) os << (i ? "," : " ") << sol[i].to_string();
  os << "\n";
  return os.str();
}

Inverter::Inverter(const PolyMap& map, OfflineData offline, InvertOptions opts)
    : map_(map), view_(map), offline_(std::move(offline)), opts_(opts) {
  if (offline_.n != map.dimension() || offline_.fingerprint != map.fingerprint()) {
    throw StaleOfflineData("offline data fingerprint " + hex64(offline_.fingerprint) +
                           " does not match the map (" + hex64(map.fingerprint()) + ")");
  }
  if (opts_.threads < 1) throw std::invalid_argument("thread count must be positive");
}

bool Inverter::is_periodic(std::uint64_t code, std::uint64_t* lookups) const {
  const PeriodSet& ps = *offline_.periods;
  if (ps.lcm_closed && !ps.truncated) return view_.iterate(code, ps.max(), lookups) == code;
  for (auto N : ps.periods) {
    if (view_.iterate(code, N, lookups) == code) return true;
  }
  return false;
}

std::optional<OrbitSolution> Inverter::invert_in_periodic_orbit(const Point& y) const {
  if (!offline_.periods) throw std::logic_error("period set unavailable");
  if (y.dimension() != view_.dimension()) throw std::invalid_argument("point dimension does not match the map");
  const PeriodSet& ps = *offline_.periods;
  // A non-periodic y has no solution on a periodic orbit.
  if (!is_periodic(y.code(), nullptr)) return std::nullopt;

  IterSequence seq(view_, y);
  int cap = static_cast<int>(std::min<std::uint64_t>(ps.max(), 1u << 30));
  if (offline_.lc_bound > 0) cap = std::min(cap, offline_.lc_bound);
  cap = std::max(cap, 1);
  MinpolyOptions mo = opts_.minpoly;
  mo.max_degree = cap;
  int m = std::max(mo.m0, 1);
  while (m <= cap) {
    mo.m0 = m;
    const auto mp = minimal_polynomial(seq, mo);
    if (!mp) break;
    if (mp->zero_sequence) return zero_solution(y.dimension(), *mp);
    m = mp->degree + 1;
    if (!mp->order) continue;
    const Point x = solve_in_orbit(seq, *mp);
    if (view_.step(x.code()) != y.code()) continue;
    // m(X) | X^N - 1 exactly when ord m(X) divides N.
    const auto it = std::find_if(ps.periods.begin(), ps.periods.end(),
                                 [&](std::uint64_t N) { return N % *mp->order == 0; });
    OrbitSolution s;
    s.x = x;
    s.witness = *mp;
    if (it != ps.periods.end()) {
      s.N = *it;
    } else {
      s.N = *mp->order;
      s.period_in_set = false;
    }
    if (view_.iterate(x.code(), s.N) != x.code()) continue;
    if (!s.period_in_set) {
      diagnostic("order " + std::to_string(s.N) + " of " + mp->poly.to_string() +
                 " divides no element of the period set");
    }
    return s;
  }
  diagnostic("periodic point " + y.to_string() + " without an accepted minimal polynomial");
  return std::nullopt;
}

std::vector<ChainSolution> Inverter::walk_chains(const Point& y, std::uint64_t* steps,
                                                 std::uint64_t* lookups) const {
  if (!offline_.goe) throw std::logic_error("garden of eden unavailable");
  if (opts_.chain_mode == ChainMode::period && !offline_.periods) {
    throw std::logic_error("period-mode chain walks need the period set");
  }
  const auto& origins = offline_.goe->points;
  const int n = view_.dimension();
  const std::uint64_t target = y.code();
  const std::uint64_t space = std::uint64_t{1} << n;
  const bool stamped = view_.has_table();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(opts_.threads), origins.size()));

  std::lock_guard lock(scratch_mu_);
  if (stamped) {
    if (scratch_.size() < workers) scratch_.resize(workers);
    if (walk_ids_.size() < workers) walk_ids_.resize(workers, 0);
  }

  struct Part {
    std::vector<ChainSolution> found;
    std::uint64_t steps = 0;
    std::uint64_t lookups = 0;
  };
  std::vector<Part> parts(workers);

  auto run = [&](std::size_t w, std::size_t lo, std::size_t hi) {
    Part& part = parts[w];
    std::unordered_map<std::uint64_t, std::uint32_t> seen;
    if (stamped && scratch_[w].size() != space) {
      scratch_[w].assign(space, Stamp{});
      walk_ids_[w] = 0;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const std::uint64_t origin = origins[k].code();
      if (opts_.chain_mode == ChainMode::period) {
        std::uint64_t z = origin;
        for (std::uint64_t i = 1; i <= space; ++i) {
          const std::uint64_t next = view_.step(z);
          ++part.steps;
          if (next == target) {
            part.found.push_back({Point(n, z), {origins[k], i, ChainRecord::Terminal::hit_target}});
            break;
          }
          if (is_periodic(next, &part.lookups)) break;
          z = next;
        }
        continue;
      }
      // Visited mode: walk to the first repeat; the repeated point opens the cycle,
      // so a hit at index p lies on the tail exactly when p <= cycle start.
      std::uint32_t wid = 0;
      if (stamped) {
        wid = ++walk_ids_[w];
        if (wid == 0) {
          std::fill(scratch_[w].begin(), scratch_[w].end(), Stamp{});
          wid = walk_ids_[w] = 1;
        }
      } else {
        seen.clear();
      }
      std::uint64_t z = origin, prev = origin;
      std::uint32_t idx = 0;
      std::int64_t hit = -1;
      std::uint64_t hit_x = 0;
      std::uint32_t cycle_start = 0;
      for (;;) {
        if (stamped) {
          Stamp& s = scratch_[w][z];
          if (s.walk == wid) {
            cycle_start = s.index;
            break;
          }
          s = Stamp{wid, idx};
        } else {
          const auto [it, fresh] = seen.emplace(z, idx);
          if (!fresh) {
            cycle_start = it->second;
            break;
          }
        }
        if (idx > 0 && z == target) {
          hit = idx;
          hit_x = prev;
        }
        prev = z;
        z = view_.step(z);
        ++part.steps;
        ++idx;
      }
      if (hit > 0 && static_cast<std::uint32_t>(hit) <= cycle_start) {
        part.found.push_back({Point(n, hit_x),
                              {origins[k], static_cast<std::uint64_t>(hit), ChainRecord::Terminal::hit_target}});
      }
    }
  };

  const std::size_t chunk = (origins.size() + workers - 1) / std::max<std::size_t>(workers, 1);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = std::min(origins.size(), w * chunk);
    pool.emplace_back(run, w, lo, std::min(origins.size(), lo + chunk));
  }
  run(0, 0, std::min(origins.size(), chunk));
  for (auto& t : pool) t.join();

  std::vector<ChainSolution> all;
  for (auto& p : parts) {
    all.insert(all.end(), p.found.begin(), p.found.end());
    if (steps) *steps += p.steps;
    if (lookups) *lookups += p.lookups;
  }
  std::sort(all.begin(), all.end(), [](const ChainSolution& a, const ChainSolution& b) {
    return a.x != b.x ? a.x < b.x : a.record.origin < b.record.origin;
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const ChainSolution& a, const ChainSolution& b) { return a.x == b.x; }),
            all.end());
  return all;
}

std::vector<ChainSolution> Inverter::solutions_on_chains(const Point& y) const {
  if (y.dimension() != view_.dimension()) throw std::invalid_argument("point dimension does not match the map");
  return walk_chains(y, nullptr, nullptr);
}

InversionResult Inverter::local_invert_complete(const Point& y) const {
  if (y.dimension() != view_.dimension()) throw std::invalid_argument("point dimension does not match the map");
  InversionResult r;
  r.target = y;
  if (offline_.goe && offline_.goe->contains(y)) {
    r.status = InversionStatus::empty;
    return r;
  }

  if (!offline_.complete()) {
    // Partial offline data: online orbit search, chains only if the GOE is known.
    r.orbit = invert_online_bounded(view_, y, opts_.online_max_degree, opts_.minpoly).orbit;
    if (offline_.goe && opts_.chain_mode == ChainMode::visited) {
      r.chains = walk_chains(y, &r.chain_steps, &r.power_lookups);
    }
    const bool definitive = r.orbit && offline_.goe && opts_.chain_mode == ChainMode::visited;
    r.status = !definitive          ? InversionStatus::inconclusive
               : r.chains.empty()   ? InversionStatus::orbit_only
                                    : InversionStatus::mixed;
  } else {
    if (opts_.threads > 1) {
      auto orbit = std::async(std::launch::async, [&] { return invert_in_periodic_orbit(y); });
      r.chains = walk_chains(y, &r.chain_steps, &r.power_lookups);
      r.orbit = orbit.get();
    } else {
      r.orbit = invert_in_periodic_orbit(y);
      r.chains = walk_chains(y, &r.chain_steps, &r.power_lookups);
    }
    if (r.orbit && !r.chains.empty()) {
      r.status = InversionStatus::mixed;
    } else if (r.orbit) {
      r.status = InversionStatus::orbit_only;
    } else if (!r.chains.empty()) {
      r.status = InversionStatus::chains_only;
    } else {
      // y has a preimage (it is outside the GOE) yet none was found.
      diagnostic("no solution found for " + y.to_string() + " outside the garden of eden");
      r.status = InversionStatus::inconclusive;
    }
  }

  for (const auto& c : r.chains) {
    if (view_.step(c.x.code()) != y.code()) throw std::logic_error("chain solution fails F(x) = y");
    if (r.orbit && r.orbit->x == c.x) throw std::logic_error("orbit solution repeated on a chain");
  }
  if (r.orbit && view_.step(r.orbit->x.code()) != y.code()) {
    throw std::logic_error("orbit solution fails F(x) = y");
  }
  return r;
}

OnlineResult invert_online_bounded(const MapView& map, const Point& y, int max_degree,
                                   const MinpolyOptions& opts) {
  if (max_degree < 1) throw std::invalid_argument("degree cap must be positive");
  IterSequence seq(map, y);
  MinpolyOptions mo = opts;
  mo.max_degree = max_degree;
  int m = std::max(mo.m0, 1);
  while (m <= max_degree) {
    mo.m0 = m;
    const auto mp = minimal_polynomial(seq, mo);
    if (!mp) break;
    if (mp->zero_sequence) return {zero_solution(y.dimension(), *mp)};
    m = mp->degree + 1;
    if (!mp->order) continue;
    const Point x = solve_in_orbit(seq, *mp);
    if (map.step(x.code()) != y.code()) continue;
    if (map.iterate(x.code(), *mp->order) != x.code()) continue;
    OrbitSolution s;
    s.x = x;
    s.witness = *mp;
    s.N = *mp->order;
    s.period_in_set = false;
    return {s};
  }
  return {};
}

std::optional<OrbitSolution> invert_in_periodic_orbit(const PolyMap& map, const Point& y,
                                                      const OfflineData& offline, const InvertOptions& opts) {
  return Inverter(map, offline, opts).invert_in_periodic_orbit(y);
}

std::vector<ChainSolution> solutions_on_chains(const PolyMap& map, const Point& y, const OfflineData& offline,
                                               const InvertOptions& opts) {
  return Inverter(map, offline, opts).solutions_on_chains(y);
}

InversionResult local_invert_complete(const PolyMap& map, const Point& y, const OfflineData& offline,
                                      const InvertOptions& opts) {
  return Inverter(map, offline, opts).local_invert_complete(y);
}

}  // namespace locinv
