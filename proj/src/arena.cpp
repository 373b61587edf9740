#include "dirac_thermo/arena.hpp"

namespace dirac_thermo {

std::string to_string(Arena a) {
  switch (a) {
    case Arena::P: return "P";
    case Arena::TstarQ: return "TstarQ";
    case Arena::M: return "M";
    case Arena::N: return "N";
  }
  throw UnknownArena("unknown arena tag " + std::to_string(static_cast<int>(a)));
}

Arena arena_from_string(std::string_view s) {
  if (s == "P") return Arena::P;
  if (s == "TstarQ" || s == "T*Q") return Arena::TstarQ;
  if (s == "M") return Arena::M;
  if (s == "N") return Arena::N;
  throw UnknownArena("unknown arena '" + std::string(s) + "'");
}

Layout layout(Arena a, Index n) {
  Layout l;
  l.n = n;
  l.q = 0;
  l.S = n;
  switch (a) {
    case Arena::P:
      l.v = n + 1;
      l.W = 2 * n + 1;
      l.p = 2 * n + 2;
      l.Lambda = 3 * n + 2;
      l.dim = 3 * n + 3;
      return l;
    case Arena::TstarQ:
      l.p = n + 1;
      l.Lambda = 2 * n + 1;
      l.dim = 2 * n + 2;
      return l;
    case Arena::M:
      l.v = n + 1;
      l.p = 2 * n + 1;
      l.dim = 3 * n + 1;
      return l;
    case Arena::N:
      l.p = n + 1;
      l.dim = 2 * n + 1;
      return l;
  }
  throw UnknownArena("unknown arena tag " + std::to_string(static_cast<int>(a)));
}

Index arena_dimension(Arena a, Index n) { return layout(a, n).dim; }

Vec PointP::coords() const {
  const Index n = q.size();
  require_size(v.size(), n, "PointP.v");
  require_size(p.size(), n, "PointP.p");
  Vec x(3 * n + 3);
  x << q, S, v, W, p, Lambda;
  return x;
}

PointP PointP::from_coords(Index n, const Vec& x) {
  require_size(x.size(), 3 * n + 3, "PointP coordinates");
  return {x.head(n), x[n], x.segment(n + 1, n), x[2 * n + 1], x.segment(2 * n + 2, n), x[3 * n + 2]};
}

Vec PointTstarQ::coords() const {
  const Index n = q.size();
  require_size(p.size(), n, "PointTstarQ.p");
  Vec x(2 * n + 2);
  x << q, S, p, Lambda;
  return x;
}

PointTstarQ PointTstarQ::from_coords(Index n, const Vec& x) {
  require_size(x.size(), 2 * n + 2, "PointTstarQ coordinates");
  return {x.head(n), x[n], x.segment(n + 1, n), x[2 * n + 1]};
}

Vec PointM::coords() const {
  const Index n = q.size();
  require_size(v.size(), n, "PointM.v");
  require_size(p.size(), n, "PointM.p");
  Vec x(3 * n + 1);
  x << q, S, v, p;
  return x;
}

PointM PointM::from_coords(Index n, const Vec& x) {
  require_size(x.size(), 3 * n + 1, "PointM coordinates");
  return {x.head(n), x[n], x.segment(n + 1, n), x.segment(2 * n + 1, n)};
}

Vec PointN::coords() const {
  const Index n = q.size();
  require_size(p.size(), n, "PointN.p");
  Vec x(2 * n + 1);
  x << q, S, p;
  return x;
}

PointN PointN::from_coords(Index n, const Vec& x) {
  require_size(x.size(), 2 * n + 1, "PointN coordinates");
  return {x.head(n), x[n], x.segment(n + 1, n)};
}

ArenaPoint::ArenaPoint(Arena a, Index n_, Vec x) : arena(a), n(n_), coords(std::move(x)) {
  require_size(coords.size(), arena_dimension(a, n), "arena point");
}
ArenaPoint::ArenaPoint(const PointP& x) : ArenaPoint(Arena::P, x.q.size(), x.coords()) {}
ArenaPoint::ArenaPoint(const PointTstarQ& x) : ArenaPoint(Arena::TstarQ, x.q.size(), x.coords()) {}
ArenaPoint::ArenaPoint(const PointM& x) : ArenaPoint(Arena::M, x.q.size(), x.coords()) {}
ArenaPoint::ArenaPoint(const PointN& x) : ArenaPoint(Arena::N, x.q.size(), x.coords()) {}

bool same_base(const ArenaPoint& a, const ArenaPoint& b) {
  return a.arena == b.arena && a.n == b.n && a.coords.size() == b.coords.size() && a.coords == b.coords;
}

void require_same_base(const ArenaPoint& a, const ArenaPoint& b) {
  if (!same_base(a, b)) throw BaseMismatch("elements live over different base points");
}

TangentCovectorPair::TangentCovectorPair(ArenaPoint b, Vec t, Vec c)
    : base(std::move(b)), tangent(std::move(t)), covector(std::move(c)) {
  require_size(tangent.size(), base.dim(), "tangent vector");
  require_size(covector.size(), base.dim(), "covector");
}

TangentCovectorPair::TangentCovectorPair(const TangentVector& t, const Covector& c)
    : TangentCovectorPair(t.base, t.components, c.components) {
  require_same_base(t.base, c.base);
}

double double_pairing(const TangentCovectorPair& x, const TangentCovectorPair& y) {
  require_same_base(x.base, y.base);
  return y.covector.dot(x.tangent) + x.covector.dot(y.tangent);
}

Vec presymplectic_flat(Arena a, Index n, const Vec& t) {
  const Layout l = layout(a, n);
  require_size(t.size(), l.dim, "tangent vector");
  // omega(t, .) for omega = dq^dp (+ dS^dLambda).
  Vec out = Vec::Zero(l.dim);
  out.segment(l.q, n) = -t.segment(l.p, n);
  out.segment(l.p, n) = t.segment(l.q, n);
  if (l.Lambda >= 0) {
    out[l.S] = -t[l.Lambda];
    out[l.Lambda] = t[l.S];
  }
  return out;
}

double presymplectic_pairing(Arena a, const ArenaPoint& point, const Vec& t1, const Vec& t2) {
  if (point.arena != a) throw BaseMismatch("point does not lie on arena " + to_string(a));
  require_size(t2.size(), layout(a, point.n).dim, "tangent vector");
  return presymplectic_flat(a, point.n, t1).dot(t2);
}

}  // namespace dirac_thermo
