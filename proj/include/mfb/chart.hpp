#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mfb/errors.hpp"
#include "mfb/smooth.hpp"

namespace mfb {

inline constexpr double kUnbounded = 1e30;

struct Box {
  VecD lo, hi;

  static Box unbounded(int dim) {
    Box b;
    b.lo.assign(dim, -kUnbounded);
    b.hi.assign(dim, kUnbounded);
    return b;
  }
  static Box cube(int dim, double half) {
    Box b;
    b.lo.assign(dim, -half);
    b.hi.assign(dim, half);
    return b;
  }

  bool contains(const VecD& c, double tol = 1e-9) const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (c[i] < lo[i] - tol || c[i] > hi[i] + tol) return false;
    return true;
  }
};

// Shift an angle-like value into [lo, lo+period) by a whole number of periods.
// The shift is constant, so dual derivatives pass through untouched.
template <class S>
S wrap_periodic(const S& u, double lo, double period) {
  double k = std::floor((value_of(u) - lo) / period);
  return u - k * period;
}

struct Chart {
  std::string id;
  int dim = 0;
  Box domain;
  VecD periods;  // per coordinate; 0 = not periodic
  std::function<bool(const VecD&)> predicate;  // optional extra cut

  static Chart box_chart(std::string id, int dim, Box domain) {
    Chart c;
    c.id = std::move(id);
    c.dim = dim;
    c.domain = std::move(domain);
    c.periods.assign(dim, 0.0);
    return c;
  }

  VecD wrap(VecD c) const {
    for (int i = 0; i < dim; ++i)
      if (periods[i] > 0.0) c[i] = wrap_periodic(c[i], domain.lo[i], periods[i]);
    return c;
  }

  bool contains(const VecD& c, double tol = 1e-9) const {
    VecD w = wrap(c);
    if (!domain.contains(w, tol)) return false;
    if (predicate && !predicate(w)) return false;
    return true;
  }

  // minimal-image coordinate distance, honouring periodic directions
  double distance(const VecD& a, const VecD& b) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = a[i] - b[i];
      if (periods[i] > 0.0) {
        d = std::fmod(d, periods[i]);
        if (d > 0.5 * periods[i]) d -= periods[i];
        if (d < -0.5 * periods[i]) d += periods[i];
      }
      s += d * d;
    }
    return std::sqrt(s);
  }
};

struct ManifoldPoint {
  std::string chart;
  VecD coords;
};

struct TransitionMap {
  std::string from, to;
  SmoothMap map;
  std::vector<VecD> overlap_samples;  // coords in `from` where the overlap is certified
};

// An atlas of coordinate charts with registered transitions.
class ChartManifold {
 public:
  std::string name;
  std::vector<Chart> charts;
  std::vector<TransitionMap> transitions;

  int dim() const { return charts.empty() ? 0 : charts.front().dim; }

  const Chart& chart(const std::string& id) const {
    for (const auto& c : charts)
      if (c.id == id) return c;
    throw Error("manifold " + name + ": unknown chart \"" + id + "\"");
  }

  bool has_chart(const std::string& id) const {
    for (const auto& c : charts)
      if (c.id == id) return true;
    return false;
  }

  const TransitionMap* find_transition(const std::string& from, const std::string& to) const {
    for (const auto& t : transitions)
      if (t.from == from && t.to == to) return &t;
    return nullptr;
  }

  // Express p in target_chart coordinates (identity or one registered hop).
  ManifoldPoint transition(const ManifoldPoint& p, const std::string& target) const {
    const Chart& src = chart(p.chart);
    if (p.chart == target) return {p.chart, src.wrap(p.coords)};
    const TransitionMap* t = find_transition(p.chart, target);
    if (!t)
      throw NoTransitionPath("manifold " + name + ": no transition " + p.chart + " -> " + target);
    if (!src.contains(p.coords))
      throw NotInOverlap("transition " + p.chart + " -> " + target + ": point outside source chart");
    VecD y = t->map(src.wrap(p.coords));
    const Chart& dst = chart(target);
    y = dst.wrap(y);
    if (!dst.contains(y))
      throw NotInOverlap("transition " + p.chart + " -> " + target +
                         ": image lies outside target chart");
    return {target, y};
  }

  bool contains(const ManifoldPoint& p) const {
    return has_chart(p.chart) && chart(p.chart).contains(p.coords);
  }

  // round-trip certification on every registered overlap sample
  double max_round_trip_error() const {
    double worst = 0.0;
    for (const auto& t : transitions) {
      const TransitionMap* back = find_transition(t.to, t.from);
      if (!back) continue;
      for (const auto& x : t.overlap_samples) {
        VecD y = t.map(x);
        VecD x2 = back->map(y);
        worst = std::max(worst, chart(t.from).distance(chart(t.from).wrap(x2), chart(t.from).wrap(x)));
      }
    }
    return worst;
  }
};

}  // namespace mfb
