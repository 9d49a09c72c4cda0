#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "zaslab/errors.hpp"

namespace zaslab {

/// Protocol for limits along spheres r_i = r_min (1 + 2^-i) shrinking onto r_min.
struct LimitOptions {
  int first_index = 4;
  int last_index = 20;
  /// Sequences that keep falling with widening gaps are followed up to here.
  int max_index = 52;
  /// A sequence is declared -inf once its last three values are below this.
  double divergence_threshold = -1e6;
};

inline std::vector<double> approachRadii(double r_min, int first_index, int last_index) {
  std::vector<double> radii;
  for (int i = first_index; i <= last_index; ++i) radii.push_back(r_min + std::ldexp(r_min, -i));
  return radii;
}

struct SequenceLimit {
  double value = 0.0;
  double error_estimate = 0.0;
  bool diverged = false;  // value is -inf
};

/// True when the tail is strictly decreasing and the gaps keep growing, the
/// signature of a sequence heading to -inf rather than settling.
inline bool fallsWithWideningGaps(std::span<const double> seq) {
  if (seq.size() < 4) return false;
  const std::size_t n = seq.size();
  const double g1 = seq[n - 3] - seq[n - 4];
  const double g2 = seq[n - 2] - seq[n - 3];
  const double g3 = seq[n - 1] - seq[n - 2];
  return g1 < 0.0 && g2 < 0.0 && g3 < 0.0 && std::abs(g2) > std::abs(g1) && std::abs(g3) > std::abs(g2);
}

inline bool belowThresholdAndDecreasing(std::span<const double> seq, double threshold) {
  if (seq.size() < 3) return false;
  const std::size_t n = seq.size();
  return seq[n - 3] < threshold && seq[n - 2] < seq[n - 3] && seq[n - 1] < seq[n - 2];
}

namespace detail {

// One Aitken delta-squared sweep. Triples without a clean geometric
// contraction (noise-level curvature, sign flips, non-contracting gaps) pass
// their newest value through unchanged.
inline std::vector<double> aitkenSweep(std::span<const double> x) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 2 < x.size(); ++k) {
    const double d1 = x[k + 1] - x[k];
    const double d2 = x[k + 2] - x[k + 1];
    const double dd = d2 - d1;
    const double noise =
        256.0 * std::numeric_limits<double>::epsilon() * (std::abs(x[k]) + std::abs(x[k + 1]) + std::abs(x[k + 2]));
    const bool contracting = d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1);
    if (!contracting || std::abs(dd) <= noise || std::abs(d2) <= noise) {
      out.push_back(x[k + 2]);
    } else {
      out.push_back(x[k + 2] - d2 * d2 / dd);
    }
  }
  return out;
}

}  // namespace detail

/// Limit of a convergent sequence from its tail by two sweeps of Aitken's
/// delta-squared process. Exact for geometric error decay and removes the
/// two leading terms of mixed power-law errors along a geometric grid.
inline SequenceLimit extrapolateLimit(std::span<const double> seq, std::size_t tail = 9) {
  if (seq.empty()) throw ConvergenceError("extrapolateLimit: empty sequence");
  if (seq.size() < 5) return {seq.back(), seq.size() > 1 ? std::abs(seq.back() - seq[seq.size() - 2]) : 0.0, false};
  const std::size_t n = std::min(tail, seq.size());
  std::vector<double> level(seq.end() - static_cast<std::ptrdiff_t>(n), seq.end());
  std::vector<double> previous = level;
  for (int sweep = 0; sweep < 2 && level.size() >= 3; ++sweep) {
    previous = level;
    level = detail::aitkenSweep(level);
  }
  SequenceLimit out;
  out.value = level.back();
  double err = std::abs(level.back() - previous.back());
  if (level.size() >= 2) err = std::max(err, std::abs(level.back() - level[level.size() - 2]));
  out.error_estimate = err;
  return out;
}

}  // namespace zaslab
