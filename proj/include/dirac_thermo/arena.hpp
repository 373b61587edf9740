#pragma once

#include <string>
#include <string_view>

#include "dirac_thermo/types.hpp"

namespace dirac_thermo {

// The four state spaces. Flat coordinate order per arena:
//   P      (q, S, v, W, p, Lambda)   3n+3
//   TstarQ (q, S, p, Lambda)         2n+2
//   M      (q, S, v, p)              3n+1
//   N      (q, S, p)                 2n+1
enum class Arena { P, TstarQ, M, N };

std::string to_string(Arena a);
Arena arena_from_string(std::string_view s);

Index arena_dimension(Arena a, Index n);

// Offsets of each block in the flat coordinates; -1 when the arena lacks it.
struct Layout {
  Index n = 0;
  Index q = 0, S = 0, v = -1, W = -1, p = 0, Lambda = -1;
  Index dim = 0;
};

Layout layout(Arena a, Index n);

struct PointP {
  Vec q;
  double S = 0.0;
  Vec v;
  double W = 0.0;
  Vec p;
  double Lambda = 0.0;

  Vec coords() const;
  static PointP from_coords(Index n, const Vec& x);
};

struct PointTstarQ {
  Vec q;
  double S = 0.0;
  Vec p;
  double Lambda = 0.0;

  Vec coords() const;
  static PointTstarQ from_coords(Index n, const Vec& x);
};

struct PointM {
  Vec q;
  double S = 0.0;
  Vec v;
  Vec p;

  Vec coords() const;
  static PointM from_coords(Index n, const Vec& x);
};

struct PointN {
  Vec q;
  double S = 0.0;
  Vec p;

  Vec coords() const;
  static PointN from_coords(Index n, const Vec& x);
};

/// A base point on some arena, stored as flat coordinates.
struct ArenaPoint {
  Arena arena = Arena::M;
  Index n = 0;
  Vec coords;

  ArenaPoint() = default;
  ArenaPoint(Arena a, Index n_, Vec x);
  explicit ArenaPoint(const PointP& x);
  explicit ArenaPoint(const PointTstarQ& x);
  explicit ArenaPoint(const PointM& x);
  explicit ArenaPoint(const PointN& x);

  Index dim() const { return arena_dimension(arena, n); }
  Vec q() const { return coords.head(n); }
  double S() const { return coords[n]; }
  Vec p() const { return coords.segment(layout(arena, n).p, n); }
};

bool same_base(const ArenaPoint& a, const ArenaPoint& b);
void require_same_base(const ArenaPoint& a, const ArenaPoint& b);

struct TangentVector {
  ArenaPoint base;
  Vec components;
};

struct Covector {
  ArenaPoint base;
  Vec components;
};

/// An element (v_x, alpha_x) of the double bundle at one base point.
struct TangentCovectorPair {
  ArenaPoint base;
  Vec tangent;
  Vec covector;

  TangentCovectorPair() = default;
  TangentCovectorPair(ArenaPoint b, Vec t, Vec c);
  TangentCovectorPair(const TangentVector& t, const Covector& c);
};

/// <<(u, a), (w, b)>> = <b, u> + <a, w>.
double double_pairing(const TangentCovectorPair& x, const TangentCovectorPair& y);

/// The arena's presymplectic two-form: dq^dp on every arena plus dS^dLambda on P and TstarQ.
double presymplectic_pairing(Arena a, const ArenaPoint& point, const Vec& t1, const Vec& t2);

/// omega-flat of a tangent vector, as a covector in the arena's coordinates.
Vec presymplectic_flat(Arena a, Index n, const Vec& t);

}  // namespace dirac_thermo
