#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/anf.hpp"
#include "locinv/invert.hpp"
#include "locinv/map.hpp"

namespace locinv {

/// Block cipher C = E(K, P) with key, block and output all n bits wide.
/// Components are ANF polynomials in 2n variables: x1..xn is the key K and
/// x(n+1)..x(2n) the plaintext P.
struct BlockCipherSpec {
  int n = 0;
  std::vector<AnfPoly> components;

  Point encrypt(const Point& key, const Point& plain) const;
  /// The map K -> E(K, P) for fixed P.
  PolyMap restrict(const Point& plain) const;
};

/// All keys K with E(K, P) = C, by local inversion of K -> E(K, P). `offline` must
/// belong to restrict(P), otherwise StaleOfflineData is thrown.
InversionResult block_key_recover(const BlockCipherSpec& spec, const Point& plain, const Point& cipher,
                                  const OfflineData& offline, const InvertOptions& opts = {});

/// Stream cipher x(k+1) = F(x(k)), output bit w(k) = f(x(k)).
struct StreamCipherSpec {
  PolyMap F;
  AnfPoly f;

  int n() const { return F.dimension(); }
  /// w(0), ..., w(len-1) from initial state x0.
  std::vector<bool> keystream(const Point& x0, std::size_t len) const;
};

/// n consecutive keystream bits w(k0), ..., w(k0+n-1); bit j is coordinate j+1.
struct KeystreamWindow {
  std::uint64_t k0 = 0;
  Point bits;
};

KeystreamWindow window_at(const StreamCipherSpec& spec, const Point& x0, std::uint64_t k0);

/// Window map x -> (f(x), f(F(x)), ..., f(F^(n-1)(x))) simulated forward.
Point simulate_window(const StreamCipherSpec& spec, const Point& x);

/// The window map as ANF: component j is (F*)^j f, built on truth tables.
PolyMap build_hatF(const StreamCipherSpec& spec);

/// Whether the window map is a permutation, so every window has exactly one state.
bool is_observable(const StreamCipherSpec& spec);

/// Whether every coordinate function lies in span{f, F*f, ..., (F*)^(n-1) f}.
/// Sufficient for observability but not necessary: a nonlinear permutation window
/// map need not have the coordinates in the linear span.
bool coordinates_in_span(const StreamCipherSpec& spec);

/// States x with hatF(x) = window bits; `offline` belongs to build_hatF(spec).
InversionResult recover_internal_state(const StreamCipherSpec& spec, const KeystreamWindow& window,
                                       const OfflineData& offline, const InvertOptions& opts = {});

/// Offline data for F^(k0): periods from K^(k0) on the Koopman space of F, GOE
/// recomputed from the table of F^(k0).
OfflineData offline_for_power(const PolyMap& F, std::uint64_t k0,
                              GoeBackend backend = GoeBackend::brute);

struct InitialStateResult {
  std::vector<Point> states;  // ascending
  /// `identity`, `backward-orbit` (F a permutation) or `local-inversion`.
  std::string method;
  std::uint64_t map_steps = 0;
};

/// All x0 with F^(k0)(x0) = x_k0. Computes the offline data for F^(k0) unless given.
InitialStateResult recover_initial_state(const PolyMap& F, const Point& x_k0, std::uint64_t k0,
                                         const OfflineData* power_offline = nullptr,
                                         const InvertOptions& opts = {});

/// Map file plus an `f = <ANF>` line.
StreamCipherSpec parse_stream_spec(std::string_view text);
std::string serialize_stream_spec(const StreamCipherSpec& spec);

/// Small ciphers for demos and tests.
namespace zoo {

/// The three-bit map with a fixed point, a 4-cycle and two GOE points.
PolyMap three_bit();
/// E(K, P) = F0(K xor P).
BlockCipherSpec whitened(const PolyMap& F0);
/// E(K, P) = K.
BlockCipherSpec identity_in_key(int n);
/// (x1, x2) -> (x2, x1 + x2), f = x1.
StreamCipherSpec shift_register();
/// Fibonacci LFSR: state shifts toward x1, x_n receives the XOR of the tapped
/// coordinates (1-based); f = x1.
StreamCipherSpec fibonacci_lfsr(int n, const std::vector<int>& taps);
/// The 8-bit LFSR with taps 1,3,4,5 seen through the nonlinear coordinate change
/// P(x)_i = x_i + x_(i+1)*x_(i+2) (last two coordinates fixed): F = P^-1 o L o P and
/// f = x1 o P, so the window map is P itself. Observable, with nonlinear F and f.
StreamCipherSpec observable_conjugated();
/// 6-bit LFSR with the filter x1*x2 + x3*x4; not observable.
StreamCipherSpec unobservable_filtered();

}  // namespace zoo

}  // namespace locinv
