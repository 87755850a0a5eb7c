#pragma once

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domatic/errors.hpp"

namespace domatic {

using BigInt = boost::multiprecision::cpp_int;

/// Point on (R/Z)^d in fixed-precision exact arithmetic: coordinate c stands
/// for c / 2^precision, with 0 <= c < 2^precision.
struct TorusPoint {
  std::vector<BigInt> coords;
  unsigned precision = 96;

  std::size_t dimension() const { return coords.size(); }

  void check() const {
    BigInt one = BigInt(1) << precision;
    for (const BigInt& c : coords)
      if (c < 0 || c >= one)
        throw input_error("torus point: coordinate outside [0,1)");
  }

  /// Doubles carry 53 mantissa bits; the remaining low bits are zero.
  static TorusPoint from_double(const std::vector<double>& xs, unsigned precision) {
    TorusPoint p;
    p.precision = precision;
    for (double x : xs) {
      if (x < 0.0 || x >= 1.0) throw input_error("torus point: coordinate outside [0,1)");
      auto mant = static_cast<std::int64_t>(std::floor(x * 9007199254740992.0));  // 2^53
      BigInt c(mant);
      if (precision >= 53)
        c <<= (precision - 53);
      else
        c >>= (53 - precision);
      p.coords.push_back(c);
    }
    return p;
  }
};

// Strict inequalities at precision P are only trusted with margin above
// 2^{-P+4}; inside that band the verdict is reported as indeterminate.
inline BigInt precision_slack() { return BigInt(16); }

struct AcuteVerdict {
  bool acute = false;
  BigInt margin;  // (1/2 - max gap) scaled by 2^precision; <= 0 when not acute
  unsigned precision = 96;
};

/// Three circle points are in acute position iff their sorted cyclic gaps are
/// all strictly below 1/2. Duplicate points are degenerate: false, margin 0.
inline AcuteVerdict is_acute(const std::array<BigInt, 3>& t, unsigned precision) {
  AcuteVerdict v;
  v.precision = precision;
  BigInt one = BigInt(1) << precision;
  std::array<BigInt, 3> s = t;
  std::sort(s.begin(), s.end());
  if (s[0] == s[1] || s[1] == s[2]) {
    v.margin = 0;
    return v;
  }
  BigInt g0 = s[1] - s[0], g1 = s[2] - s[1], g2 = one - s[2] + s[0];
  BigInt max_gap = std::max({g0, g1, g2});
  v.margin = (one >> 1) - max_gap;
  v.acute = v.margin > 0;
  return v;
}

struct MultiplierResult {
  std::uint64_t multiplier = 0;
  BigInt margin;  // least margin across the scaled triples
};

/// Least 1 <= n <= n_max scaling every triple into acute position with margin
/// above twice the precision slack. A near-boundary verdict is indeterminate;
/// exhausting n_max is an honest failure (nullopt), expected for rationally
/// dependent inputs.
inline std::optional<MultiplierResult> find_acute_multiplier(
    const std::vector<std::array<BigInt, 3>>& triples, std::uint64_t n_max,
    unsigned precision) {
  BigInt one = BigInt(1) << precision;
  for (const auto& t : triples)
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw input_error("find_acute_multiplier: triple has duplicate points");
  BigInt slack = precision_slack();
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    BigInt least_margin = one;
    bool all_acute = true;
    bool near_boundary = false;
    for (const auto& t : triples) {
      std::array<BigInt, 3> scaled{t[0] * n % one, t[1] * n % one, t[2] * n % one};
      AcuteVerdict v = is_acute(scaled, precision);
      if (v.margin >= -slack && v.margin <= slack) near_boundary = true;
      if (!v.acute || v.margin <= 2 * slack) {
        all_acute = false;
        break;
      }
      least_margin = std::min(least_margin, v.margin);
    }
    if (all_acute) return MultiplierResult{n, least_margin};
    if (near_boundary)
      throw indeterminate_error(
          "find_acute_multiplier: verdict within precision slack at n=" +
          std::to_string(n));
  }
  return std::nullopt;
}

/// b . x mod 1, scaled.
inline BigInt linear_form(const std::vector<std::int64_t>& b, const TorusPoint& x) {
  BigInt one = BigInt(1) << x.precision;
  BigInt acc = 0;
  if (b.size() != x.dimension()) throw input_error("linear form: dimension mismatch");
  for (std::size_t i = 0; i < b.size(); ++i) acc += BigInt(b[i]) * x.coords[i];
  acc %= one;
  if (acc < 0) acc += one;
  return acc;
}

/// Scans the Vandermonde vectors b_j = (1, j, ..., j^{d-1}) for the first one
/// whose linear form is injective on every sample set (the finite proxy for
/// an uncountable image). Halts by j = (d-1)*k + 1 or reports the bound hit.
inline std::vector<std::int64_t> select_good_vector(
    const std::vector<std::vector<TorusPoint>>& samples, unsigned precision) {
  if (samples.empty()) throw input_error("select_good_vector: no sample sets");
  std::size_t d = samples[0][0].dimension();
  std::size_t k = samples.size();
  BigInt one = BigInt(1) << precision;
  BigInt slack = precision_slack();
  for (std::uint64_t j = 0; j <= (d - 1) * k + 1; ++j) {
    std::vector<std::int64_t> b(d);
    std::int64_t pw = 1;
    for (std::size_t i = 0; i < d; ++i) {
      b[i] = pw;
      pw *= static_cast<std::int64_t>(j);
    }
    bool injective = true;
    for (const auto& set : samples) {
      for (std::size_t a = 0; a < set.size() && injective; ++a)
        for (std::size_t c = a + 1; c < set.size(); ++c) {
          BigInt da = linear_form(b, set[a]), dc = linear_form(b, set[c]);
          BigInt gap = da > dc ? BigInt(da - dc) : BigInt(dc - da);
          BigInt wrap = one - gap;
          if (wrap < gap) gap = wrap;  // circle distance
          if (gap <= slack) {
            injective = false;
            break;
          }
        }
      if (!injective) break;
    }
    if (injective) return b;
  }
  throw input_error("select_good_vector: scan bound exceeded");
}

/// Semicircle preimage witness: membership in A_j tests whether
/// n*(b.x) mod 1 lies in E_0 = (0,1/2) or E_1 = (1/2,1).
struct TorusPairWitness {
  std::vector<std::int64_t> b;
  std::uint64_t multiplier = 0;
  BigInt margin;  // delta, scaled by 2^precision
  unsigned precision = 96;

  /// 0, 1, or nullopt (boundary of the open semicircles).
  std::optional<int> side(const TorusPoint& x) const {
    BigInt one = BigInt(1) << precision;
    BigInt v = linear_form(b, x) * multiplier % one;
    BigInt half = one >> 1;
    if (v == 0 || v == half) return std::nullopt;
    return v < half ? 0 : 1;
  }
};

/// Composes the good-vector scan and the acute-multiplier search: picks the
/// first index triple of each sample set with pairwise distinct f-images and
/// finds the least multiplier putting all of them in robust acute position.
inline TorusPairWitness torus_open_pair(
    const std::vector<std::vector<TorusPoint>>& samples, unsigned precision,
    std::uint64_t n_max) {
  for (const auto& set : samples) {
    if (set.size() < 3)
      throw input_error("torus_open_pair: each sample set needs >= 3 points");
    for (const auto& p : set) {
      p.check();
      if (p.precision != precision)
        throw input_error("torus_open_pair: sample precision mismatch");
    }
  }
  auto b = select_good_vector(samples, precision);

  BigInt one = BigInt(1) << precision;
  BigInt slack = precision_slack();
  std::vector<std::array<BigInt, 3>> triples;
  for (const auto& set : samples) {
    std::vector<BigInt> imgs;
    for (const auto& p : set) imgs.push_back(linear_form(b, p));
    bool found = false;
    for (std::size_t a = 0; a < imgs.size() && !found; ++a)
      for (std::size_t c = a + 1; c < imgs.size() && !found; ++c)
        for (std::size_t e = c + 1; e < imgs.size() && !found; ++e) {
          auto dist = [&](const BigInt& u, const BigInt& v) {
            BigInt g = u > v ? BigInt(u - v) : BigInt(v - u);
            BigInt wrap = one - g;
            return wrap < g ? wrap : g;
          };
          if (dist(imgs[a], imgs[c]) > slack && dist(imgs[c], imgs[e]) > slack &&
              dist(imgs[a], imgs[e]) > slack) {
            triples.push_back({imgs[a], imgs[c], imgs[e]});
            found = true;
          }
        }
    if (!found)
      throw input_error("torus_open_pair: no triple with distinct images in a sample set");
  }

  auto mult = find_acute_multiplier(triples, n_max, precision);
  if (!mult)
    throw input_error("torus_open_pair: no acute multiplier within bound");
  TorusPairWitness w;
  w.b = std::move(b);
  w.multiplier = mult->multiplier;
  w.margin = mult->margin;
  w.precision = precision;
  return w;
}

}  // namespace domatic
