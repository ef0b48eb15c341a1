#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/goe.hpp"
#include "locinv/koopman.hpp"
#include "locinv/map.hpp"
#include "locinv/minpoly.hpp"

namespace locinv {

/// Offline results for one map: the period superset and the garden of eden.
/// Either part may be unavailable when a size limit was hit.
struct OfflineData {
  int n = 0;
  std::uint64_t fingerprint = 0;
  std::optional<PeriodSet> periods;
  /// Degree bound for minimal polynomials of periodic sequences (degree of the
  /// minimal polynomial of the invertible part of K); 0 when unknown.
  int lc_bound = 0;
  std::optional<GoeSet> goe;
  /// Why a part is missing, empty when complete.
  std::string note;

  bool complete() const { return periods.has_value() && goe.has_value(); }

  /// Versioned text format, see README.
  std::string serialize() const;
  static OfflineData parse(std::string_view text);
};

struct OfflineOptions {
  GoeBackend backend = GoeBackend::brute;
  ExpandOptions expand;
  bool lcm_closure = true;
};

OfflineData offline_precompute(const PolyMap& map, const OfflineOptions& opts = {});

class StaleOfflineData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChainMode {
  /// Walk until the first repeated point (per-walk visited marks).
  visited,
  /// Stop when F^(N)(z) = z for some N in the period set.
  period,
};

std::string to_string(ChainMode m);
ChainMode parse_chain_mode(std::string_view s);

struct InvertOptions {
  MinpolyOptions minpoly;
  /// Degree cap M for the online algorithm.
  int online_max_degree = 64;
  int threads = 1;
  ChainMode chain_mode = ChainMode::visited;
};

struct OrbitSolution {
  Point x;
  MinimalPolyResult witness;
  /// Period N with m(X) | X^N - 1 used for acceptance.
  std::uint64_t N = 0;
  /// False when N came from the polynomial's own order rather than the period set.
  bool period_in_set = true;
};

struct ChainRecord {
  enum class Terminal { hit_target, joined_orbit };
  Point origin;
  /// z(steps) = y, counted from the garden-of-eden origin z(0).
  std::uint64_t steps = 0;
  Terminal terminal = Terminal::hit_target;
};

struct ChainSolution {
  Point x;
  ChainRecord record;
};

enum class InversionStatus { empty, orbit_only, chains_only, mixed, inconclusive };
std::string to_string(InversionStatus s);

struct InversionResult {
  Point target;
  InversionStatus status = InversionStatus::inconclusive;
  std::optional<OrbitSolution> orbit;
  std::vector<ChainSolution> chains;  // ascending by x
  /// Map steps spent walking chains and lookups spent on F^N.
  std::uint64_t chain_steps = 0;
  std::uint64_t power_lookups = 0;

  /// All solutions, ascending.
  std::vector<Point> solutions() const;
  /// Stable text report.
  std::string report() const;
};

/// Outcome of the online algorithm: a verified orbit solution, or no conclusion.
struct OnlineResult {
  std::optional<OrbitSolution> orbit;
  bool inconclusive() const { return !orbit.has_value(); }
};

/// Inversion context for one map and its offline data. Reuses scratch memory
/// across queries; calls on one object are serialized internally.
class Inverter {
 public:
  /// Throws StaleOfflineData when the fingerprint does not match `map`.
  Inverter(const PolyMap& map, OfflineData offline, InvertOptions opts = {});

  const MapView& view() const { return view_; }
  const OfflineData& offline() const { return offline_; }
  const InvertOptions& options() const { return opts_; }

  /// Unique solution on the periodic orbit through y, if y is periodic.
  std::optional<OrbitSolution> invert_in_periodic_orbit(const Point& y) const;
  /// Solutions whose predecessor chain starts at a garden-of-eden point.
  std::vector<ChainSolution> solutions_on_chains(const Point& y) const;
  InversionResult local_invert_complete(const Point& y) const;

 private:
  bool is_periodic(std::uint64_t code, std::uint64_t* lookups) const;
  std::vector<ChainSolution> walk_chains(const Point& y, std::uint64_t* steps,
                                         std::uint64_t* lookups) const;

  PolyMap map_;
  MapView view_;
  OfflineData offline_;
  InvertOptions opts_;

  struct Stamp {
    std::uint32_t walk = 0;
    std::uint32_t index = 0;
  };
  mutable std::mutex scratch_mu_;
  mutable std::vector<std::vector<Stamp>> scratch_;
  mutable std::vector<std::uint32_t> walk_ids_;
};

/// Online orbit inversion without offline data; the order is taken from m(X).
OnlineResult invert_online_bounded(const MapView& map, const Point& y, int max_degree,
                                   const MinpolyOptions& opts = {});

std::optional<OrbitSolution> invert_in_periodic_orbit(const PolyMap& map, const Point& y,
                                                      const OfflineData& offline,
                                                      const InvertOptions& opts = {});
std::vector<ChainSolution> solutions_on_chains(const PolyMap& map, const Point& y,
                                               const OfflineData& offline,
                                               const InvertOptions& opts = {});
InversionResult local_invert_complete(const PolyMap& map, const Point& y, const OfflineData& offline,
                                      const InvertOptions& opts = {});

}  // namespace locinv
