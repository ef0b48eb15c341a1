#include "locinv/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "locinv/cipher.hpp"
#include "locinv/goe.hpp"
#include "locinv/invert.hpp"
#include "locinv/koopman.hpp"
#include "locinv/minpoly.hpp"

namespace locinv::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string map_path;
  std::string point;
  std::string target;
  std::uint64_t power = 1;
  int m0 = 1;
  int max_degree = 64;
  std::string backend = "brute";
  int threads = 1;
  std::string chain_mode = "visited";
  std::string offline_path;
  std::string out_path;
  bool no_closure = false;
  std::string plain;
  std::string key;
  std::string ciphertext;
  std::string spec_path;
  std::string fixture = "observable";
  std::string state;
  std::uint64_t k0 = 0;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PolyMap load_map(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_map(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  }
}

Point load_point(const std::string& text, int n, const std::string& flag) {
  Point p;
  try {
    p = Point::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
  if (p.dimension() != n) {
    throw UsageError(flag + ": expected " + std::to_string(n) + " bits, got '" + text + "'");
  }
  return p;
}

GoeBackend backend_of(const Config& c) {
  try {
    return parse_goe_backend(c.backend);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--backend: ") + e.what());
  }
}

InvertOptions invert_options(const Config& c) {
  InvertOptions o;
  o.minpoly.m0 = c.m0;
  o.online_max_degree = c.max_degree;
  o.threads = c.threads;
  try {
    o.chain_mode = parse_chain_mode(c.chain_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--chain-mode: ") + e.what());
  }
  return o;
}

OfflineOptions offline_options(const Config& c) {
  OfflineOptions o;
  o.backend = backend_of(c);
  o.expand.threads = c.threads;
  o.lcm_closure = !c.no_closure;
  return o;
}

std::string offline_summary(const OfflineData& d) {
  std::ostringstream os;
  os << "offline: periods ";
  if (d.periods) {
    os << d.periods->to_string() << " (lc-bound " << d.lc_bound << ")";
  } else {
    os << "unavailable";
  }
  os << ", goe ";
  if (d.goe) {
    os << d.goe->points.size() << " points (" << to_string(d.goe->backend) << ")";
  } else {
    os << "unavailable";
  }
  if (!d.note.empty()) os << " [" << d.note << "]";
  return os.str();
}

std::string online_summary(const InversionResult& r) {
  return "online: status " + to_string(r.status) + ", chain steps " + std::to_string(r.chain_steps) +
         ", power lookups " + std::to_string(r.power_lookups);
}

std::string join(const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "," : "") + pts[i].to_string();
  return s.empty() ? "-" : s;
}

bool solved(InversionStatus s) {
  return s == InversionStatus::orbit_only || s == InversionStatus::chains_only || s == InversionStatus::mixed;
}

int cmd_eval(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  const Point x = load_point(c.point, f.dimension(), "--point");
  out << power_iterate(f, x, c.power).to_string() << "\n";
  return kOk;
}

int cmd_minpoly(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  const Point y = load_point(c.point, f.dimension(), "--point");
  const MapView v(f);
  const IterSequence seq(v, y);
  MinpolyOptions o;
  o.m0 = c.m0;
  o.max_degree = c.max_degree;
  const auto mp = minimal_polynomial(seq, o);
  out << "point: " << y.to_string() << "\n";
  if (!mp) {
    out << "status: no minimal polynomial up to degree " << c.max_degree << "\n";
    return kNoResult;
  }
  out << "m(X): " << mp->poly.to_string() << "\n";
  out << "degree: " << mp->degree << "\n";
  if (mp->order) {
    out << "order: " << *mp->order << "\n";
    const Point x = solve_in_orbit(seq, *mp);
    out << "solution: " << x.to_string() << (f.eval(x) == y ? " (F(x) = y)" : " (rejected: F(x) != y)") << "\n";
  } else {
    out << "order: none (sequence is not periodic)\n";
  }
  return kOk;
}

int cmd_periods(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  KoopmanRep rep;
  try {
    rep = build_invariant_space(f);
  } catch (const std::length_error& e) {
    out << "status: unavailable (" << e.what() << ")\n";
    return kNoResult;
  }
  const ElementaryDivisors div = elementary_divisors(rep.K);
  const PeriodSet ps = period_set(div, !c.no_closure);
  out << "koopman dimension: " << rep.dimension() << "\n";
  out << "elementary divisors: " << div.to_string() << "\n";
  out << "periods: " << ps.to_string() << "\n";
  if (ps.truncated) out << "periods-truncated: yes\n";
  out << "lc-bound: " << div.invertible_minpoly_degree() << "\n";
  return kOk;
}

int cmd_goe(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  GoeSet g;
  if (backend_of(c) == GoeBackend::brute) {
    if (f.dimension() > limits().table) throw UsageError("--backend brute: n exceeds the table limit");
    g = goe_brute(compile_table(f));
  } else {
    ExpandOptions e;
    e.threads = c.threads;
    g = goe_implicant(f, e);
  }
  for (const auto& p : g.points) out << p.to_string() << "\n";
  return kOk;
}

int cmd_offline(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  const OfflineData d = offline_precompute(f, offline_options(c));
  if (c.out_path.empty()) {
    out << d.serialize();
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) throw UsageError("--out: cannot write '" + c.out_path + "'");
    file << d.serialize();
    out << offline_summary(d) << "\n";
  }
  return d.complete() ? kOk : kNoResult;
}

int cmd_invert(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  const Point y = load_point(c.target, f.dimension(), "--target");
  OfflineData d;
  if (c.offline_path.empty()) {
    d = offline_precompute(f, offline_options(c));
  } else {
    try {
      d = OfflineData::parse(read_file(c.offline_path));
    } catch (const std::invalid_argument& e) {
      throw UsageError(c.offline_path + ": " + e.what());
    }
  }
  InversionResult r;
  try {
    r = local_invert_complete(f, y, d, invert_options(c));
  } catch (const StaleOfflineData& e) {
    throw UsageError(std::string("--offline: ") + e.what());
  }
  out << r.report();
  return solved(r.status) ? kOk : kNoResult;
}

int cmd_invert_online(const Config& c, std::ostream& out) {
  const PolyMap f = load_map(c.map_path);
  const Point y = load_point(c.target, f.dimension(), "--target");
  MinpolyOptions o;
  o.m0 = c.m0;
  const OnlineResult r = invert_online_bounded(MapView(f), y, c.max_degree, o);
  out << "target: " << y.to_string() << "\n";
  if (r.inconclusive()) {
    out << "status: inconclusive (degree cap " << c.max_degree << ")\n";
    return kNoResult;
  }
  out << "status: solved\n";
  out << "orbit: " << r.orbit->x.to_string() << " (m=" << r.orbit->witness.degree << ", N=" << r.orbit->N << ")\n";
  return kOk;
}

int cmd_demo_block(const Config& c, std::ostream& out) {
  const PolyMap f0 = c.map_path.empty() ? zoo::three_bit() : load_map(c.map_path);
  const int n = f0.dimension();
  const BlockCipherSpec spec = zoo::whitened(f0);
  const Point plain = c.plain.empty() ? Point::zero(n) : load_point(c.plain, n, "--plain");
  out << "cipher: E(K, P) = F0(K xor P), n = " << n << "\n";
  out << "plaintext: " << plain.to_string() << "\n";
  Point cipher;
  if (!c.ciphertext.empty()) {
    if (!c.key.empty()) throw UsageError("--key and --ciphertext are exclusive");
    cipher = load_point(c.ciphertext, n, "--ciphertext");
  } else {
    Point key;
    if (c.key.empty()) {
      std::mt19937_64 rng(c.seed);
      key = Point(n, rng() & ((std::uint64_t{1} << n) - 1));
    } else {
      key = load_point(c.key, n, "--key");
    }
    cipher = spec.encrypt(key, plain);
    out << "secret key: " << key.to_string() << "\n";
  }
  out << "ciphertext: " << cipher.to_string() << "\n";
  const PolyMap fp = spec.restrict(plain);
  const OfflineData d = offline_precompute(fp, offline_options(c));
  out << offline_summary(d) << "\n";
  const InversionResult r = block_key_recover(spec, plain, cipher, d, invert_options(c));
  out << online_summary(r) << "\n";
  const auto keys = r.solutions();
  out << "keys: " << join(keys) << "\n";
  return keys.empty() ? kNoResult : kOk;
}

StreamCipherSpec stream_fixture(const std::string& name) {
  if (name == "shift") return zoo::shift_register();
  if (name == "lfsr8") return zoo::fibonacci_lfsr(8, {1, 3, 4, 5});
  if (name == "observable") return zoo::observable_conjugated();
  if (name == "unobservable") return zoo::unobservable_filtered();
  throw UsageError("--fixture: unknown fixture '" + name + "' (shift, lfsr8, observable, unobservable)");
}

int cmd_demo_stream(const Config& c, std::ostream& out) {
  StreamCipherSpec spec;
  if (!c.spec_path.empty()) {
    try {
      spec = parse_stream_spec(read_file(c.spec_path));
    } catch (const ParseError& e) {
      throw UsageError(c.spec_path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                       e.what());
    }
    out << "cipher: " << c.spec_path << " (n = " << spec.n() << ")\n";
  } else {
    spec = stream_fixture(c.fixture);
    out << "cipher: fixture " << c.fixture << " (n = " << spec.n() << ")\n";
  }
  const int n = spec.n();
  Point x0;
  if (c.state.empty()) {
    std::mt19937_64 rng(c.seed);
    x0 = Point(n, rng() & ((std::uint64_t{1} << n) - 1));
  } else {
    x0 = load_point(c.state, n, "--state");
  }
  const bool obs = is_observable(spec);
  out << "observable: " << (obs ? "yes" : "no") << "\n";
  const KeystreamWindow w = window_at(spec, x0, c.k0);
  const Point xk = power_iterate(spec.F, x0, c.k0);
  out << "initial state: " << x0.to_string() << ", k0 = " << c.k0 << "\n";
  out << "window: " << w.bits.to_string() << "\n";

  const PolyMap hat = build_hatF(spec);
  const OfflineData d = offline_precompute(hat, offline_options(c));
  out << offline_summary(d) << "\n";
  const InversionResult r = recover_internal_state(spec, w, d, invert_options(c));
  out << online_summary(r) << "\n";
  const auto states = r.solutions();
  out << "states x(k0): " << join(states) << "\n";
  const bool found = std::find(states.begin(), states.end(), xk) != states.end();
  out << "true state recovered: " << (found ? "yes" : "no") << "\n";

  // Back from the true x(k0) to every possible x(0).
  const InitialStateResult init = recover_initial_state(spec.F, xk, c.k0, nullptr, invert_options(c));
  out << "initial states (" << init.method << "): " << join(init.states) << "\n";
  return found ? kOk : kNoResult;
}

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  const PolyMap f = zoo::three_bit();
  const auto P = [](const char* s) { return Point::parse(s); };

  check("eval 100 -> 110", f.eval(P("100")) == P("110"));
  const GoeSet gb = goe_brute(compile_table(f));
  const GoeSet gi = goe_implicant(f);
  const std::vector<Point> goe{P("001"), P("010")};
  check("goe brute = {001, 010}", gb.points == goe);
  check("goe implicant = {001, 010}", gi.points == goe);

  const ImplicantSet set = orthonormal_expand(system_factors(f), 3);
  std::size_t phi_count = phi_function(set).count();
  check("implicant stages 4, 5, 7 terms", set.stages.size() == 3 && set.stages[0].size() == 4 &&
                                              set.stages[1].size() == 5 && set.stages[2].size() == 7);
  check("phi has 6 minterms", phi_count == 6);

  const OfflineData d = offline_precompute(f);
  check("periods contain 1 and 4", d.periods && d.periods->contains(1) && d.periods->contains(4));

  const auto mp = minimal_polynomial(MapView(f), P("110"));
  check("m(X) of 110 = (X+1)^3, order 4",
        mp && mp->poly.to_string() == "X^3+X^2+X+1" && mp->order && *mp->order == 4);
  check("orbit solution of 110 = 100", mp && solve_in_orbit(IterSequence(MapView(f), P("110")), *mp) == P("100"));

  const Inverter inv(f, d);
  check("preimages of 111 = {011, 101}", inv.local_invert_complete(P("111")).solutions() ==
                                               std::vector<Point>{P("011"), P("101")});
  check("preimages of 000 = {000, 001}", inv.local_invert_complete(P("000")).solutions() ==
                                               std::vector<Point>{P("000"), P("001")});
  check("preimages of 010 = {}", inv.local_invert_complete(P("010")).status == InversionStatus::empty);
  check("online search on 010 is inconclusive", invert_online_bounded(MapView(f), P("010"), 8).inconclusive());

  const BlockCipherSpec bc = zoo::whitened(f);
  const OfflineData bd = offline_precompute(bc.restrict(P("000")));
  check("block key for (000, 110) = {100}",
        block_key_recover(bc, P("000"), P("110"), bd).solutions() == std::vector<Point>{P("100")});
  check("no block key for (000, 010)", block_key_recover(bc, P("000"), P("010"), bd).solutions().empty());

  out << (failures ? "selftest: " + std::to_string(failures) + " failed\n" : std::string("selftest: ok\n"));
  return failures ? kNoResult : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Local inversion of maps over F2^n", "locinv"};
  app.require_subcommand(1);

  auto map_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--map", c.map_path, "Map file (n=..., y_i = ANF)");
    if (required) o->required();
    o->check(CLI::ExistingFile);
  };
  auto threads_opt = [&](CLI::App* s) {
    s->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 256));
  };
  auto backend_opt = [&](CLI::App* s) {
    s->add_option("--backend", c.backend, "GOE backend: brute or implicant");
  };
  auto invert_opts = [&](CLI::App* s) {
    s->add_option("--m0", c.m0, "Initial degree m0")->check(CLI::PositiveNumber);
    s->add_option("--max-degree", c.max_degree, "Online degree cap M")->check(CLI::PositiveNumber);
    s->add_option("--chain-mode", c.chain_mode, "Chain walk stop rule: visited or period");
    threads_opt(s);
    backend_opt(s);
  };

  auto* eval = app.add_subcommand("eval", "Evaluate F^N at a point");
  map_opt(eval, true);
  eval->add_option("--point", c.point, "Point as bits x1..xn")->required();
  eval->add_option("--power", c.power, "Iterate count N");

  auto* mp = app.add_subcommand("minpoly", "Minimal polynomial of the iterate sequence of a point");
  map_opt(mp, true);
  mp->add_option("--point", c.point, "Start point y")->required();
  mp->add_option("--m0", c.m0, "Initial degree")->check(CLI::PositiveNumber);
  mp->add_option("--max-degree", c.max_degree, "Degree cap")->check(CLI::PositiveNumber);

  auto* periods = app.add_subcommand("periods", "Elementary divisors and the period superset");
  map_opt(periods, true);
  periods->add_flag("--no-closure", c.no_closure, "Do not close the period set under lcm");

  auto* goe = app.add_subcommand("goe", "Garden-of-Eden points, one per line");
  map_opt(goe, true);
  backend_opt(goe);
  threads_opt(goe);

  auto* offline = app.add_subcommand("offline", "Precompute periods and GOE");
  map_opt(offline, true);
  backend_opt(offline);
  threads_opt(offline);
  offline->add_flag("--no-closure", c.no_closure, "Do not close the period set under lcm");
  offline->add_option("--out", c.out_path, "Write the offline data here instead of stdout");

  auto* invert = app.add_subcommand("invert", "All solutions of F(x) = y");
  map_opt(invert, true);
  invert->add_option("--target", c.target, "Target y")->required();
  invert->add_option("--offline", c.offline_path, "Offline data file")->check(CLI::ExistingFile);
  invert_opts(invert);

  auto* online = app.add_subcommand("invert-online", "Orbit solution without offline data");
  map_opt(online, true);
  online->add_option("--target", c.target, "Target y")->required();
  online->add_option("--m0", c.m0, "Initial degree")->check(CLI::PositiveNumber);
  online->add_option("--max-degree", c.max_degree, "Degree cap M")->check(CLI::PositiveNumber);

  auto* demo_block = app.add_subcommand("demo-block", "Key recovery for a whitened toy block cipher");
  map_opt(demo_block, false);
  demo_block->add_option("--plain", c.plain, "Plaintext P (default all zero)");
  demo_block->add_option("--key", c.key, "Secret key used to produce C");
  demo_block->add_option("--ciphertext", c.ciphertext, "Ciphertext C");
  demo_block->add_option("--seed", c.seed, "Seed for a random key");
  invert_opts(demo_block);

  auto* demo_stream = app.add_subcommand("demo-stream", "Internal and initial state recovery for a toy stream cipher");
  demo_stream->add_option("--spec", c.spec_path, "Stream spec file (map plus `f = ...`)")->check(CLI::ExistingFile);
  demo_stream->add_option("--fixture", c.fixture, "shift, lfsr8, observable or unobservable");
  demo_stream->add_option("--state", c.state, "Initial state x(0)");
  demo_stream->add_option("--k0", c.k0, "Window start k0");
  demo_stream->add_option("--seed", c.seed, "Seed for a random initial state");
  invert_opts(demo_stream);

  auto* selftest = app.add_subcommand("selftest", "Golden checks on the three-bit example map");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(c, out);
    if (mp->parsed()) return cmd_minpoly(c, out);
    if (periods->parsed()) return cmd_periods(c, out);
    if (goe->parsed()) return cmd_goe(c, out);
    if (offline->parsed()) return cmd_offline(c, out);
    if (invert->parsed()) return cmd_invert(c, out);
    if (online->parsed()) return cmd_invert_online(c, out);
    if (demo_block->parsed()) return cmd_demo_block(c, out);
    if (demo_stream->parsed()) return cmd_demo_stream(c, out);
    if (selftest->parsed()) return cmd_selftest(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    err << "error: size limit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace locinv::cli
