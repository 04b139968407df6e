// Independent reference implementations used as test oracles. These stay
// deliberately separate from the library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "densepath/geometry.hpp"

namespace oracles {

// ---- finite differences ----

// Central finite difference d f / d x[i].
inline double central_diff(std::vector<double>& x, std::size_t i,
                           const std::function<double()>& f, double h = 1e-6) {
  const double saved = x[i];
  x[i] = saved + h;
  const double fp = f();
  x[i] = saved - h;
  const double fm = f();
  x[i] = saved;
  return (fp - fm) / (2.0 * h);
}

// max over elements of |analytic - fd| / max(|analytic|, |fd|, floor)
inline double max_grad_rel_err(std::vector<double>& x, const std::vector<double>& analytic,
                               const std::function<double()>& f, double h = 1e-6,
                               double floor = 1e-3) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = central_diff(x, i, f, h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(fd), floor});
    worst = std::max(worst, std::abs(analytic[i] - fd) / denom);
  }
  return worst;
}

// ---- direct formula oracles ----

inline std::vector<double> softmax(const std::vector<double>& x) {
  const double mx = *std::max_element(x.begin(), x.end());
  std::vector<double> out(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

// softmax(Q K^T / sqrt(dk)) V, straight-line re-evaluation.
// q: nq x dk, k: nk x dk, v: nk x dv, all row-major.
inline std::vector<double> attention(const std::vector<double>& q, const std::vector<double>& k,
                                     const std::vector<double>& v, int nq, int nk, int dk, int dv) {
  std::vector<double> out(static_cast<std::size_t>(nq) * dv, 0.0);
  for (int i = 0; i < nq; ++i) {
    std::vector<double> logits(static_cast<std::size_t>(nk));
    for (int j = 0; j < nk; ++j) {
      double dot = 0.0;
      for (int d = 0; d < dk; ++d) dot += q[i * dk + d] * k[j * dk + d];
      logits[static_cast<std::size_t>(j)] = dot / std::sqrt(static_cast<double>(dk));
    }
    const auto w = softmax(logits);
    for (int j = 0; j < nk; ++j) {
      for (int d = 0; d < dv; ++d) out[i * dv + d] += w[static_cast<std::size_t>(j)] * v[j * dv + d];
    }
  }
  return out;
}

// ---- geometric / combinatorial oracles ----

// Greedy NMS written independently: repeatedly take the best-probability
// remaining candidate (lowest index on ties) and erase everything within radius.
inline std::vector<int> nms(const std::vector<densepath::Vec2>& coords,
                            const std::vector<double>& phi, int k, double radius) {
  std::vector<int> remaining(coords.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> out;
  while (static_cast<int>(out.size()) < k && !remaining.empty()) {
    int best_pos = 0;
    for (std::size_t p = 1; p < remaining.size(); ++p) {
      if (phi[static_cast<std::size_t>(remaining[p])] >
          phi[static_cast<std::size_t>(remaining[static_cast<std::size_t>(best_pos)])]) {
        best_pos = static_cast<int>(p);
      }
    }
    const int chosen = remaining[static_cast<std::size_t>(best_pos)];
    out.push_back(chosen);
    std::vector<int> next;
    for (int idx : remaining) {
      if (densepath::dist(coords[static_cast<std::size_t>(idx)],
                          coords[static_cast<std::size_t>(chosen)]) > radius) {
        next.push_back(idx);
      }
    }
    remaining = std::move(next);
  }
  return out;
}

inline int nearest(const std::vector<densepath::Vec2>& coords, densepath::Vec2 p) {
  int best = 0;
  for (std::size_t i = 1; i < coords.size(); ++i) {
    if (densepath::dist(coords[i], p) < densepath::dist(coords[static_cast<std::size_t>(best)], p)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

// All grid points (i*density, j*density) inside the disc and within half a
// width of some lane polyline. Brute force over the whole disc bounding box.
inline std::vector<densepath::Vec2> grid_corridor_points(
    const std::vector<std::pair<std::vector<densepath::Vec2>, double>>& lanes, double density,
    densepath::Vec2 center, double radius) {
  std::vector<densepath::Vec2> out;
  const auto i_lo = static_cast<long>(std::ceil((center.x - radius) / density));
  const auto i_hi = static_cast<long>(std::floor((center.x + radius) / density));
  const auto j_lo = static_cast<long>(std::ceil((center.y - radius) / density));
  const auto j_hi = static_cast<long>(std::floor((center.y + radius) / density));
  for (long j = j_lo; j <= j_hi; ++j) {
    for (long i = i_lo; i <= i_hi; ++i) {
      const densepath::Vec2 p{static_cast<double>(i) * density, static_cast<double>(j) * density};
      if (densepath::dist(p, center) > radius) continue;
      for (const auto& [pts, width] : lanes) {
        if (densepath::point_polyline_distance(p, pts) <= width / 2.0) {
          out.push_back(p);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace oracles
