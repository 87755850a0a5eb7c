#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "domatic/errors.hpp"
#include "domatic/rng.hpp"

namespace domatic {

constexpr std::size_t kQuotientCap = std::size_t{1} << 22;

/// One finite factor group, elements indexed 0..order-1.
struct FactorGroup {
  std::uint32_t order = 0;
  bool cyclic = true;
  std::vector<std::uint32_t> table;    // row-major a*order+b; empty if cyclic
  std::vector<std::uint32_t> inverse;
  std::uint32_t identity = 0;

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return cyclic ? (a + b) % order : table[std::size_t{a} * order + b];
  }
  std::uint32_t inv(std::uint32_t a) const {
    return cyclic ? (order - a) % order : inverse[a];
  }

  static FactorGroup make_cyclic(std::uint32_t order) {
    if (order < 2) throw input_error("factor group: order must be >= 2");
    FactorGroup f;
    f.order = order;
    return f;
  }

  /// Builds from an explicit multiplication table and validates the group
  /// axioms (identity, Latin square, inverses; associativity exhaustively for
  /// small orders, on random triples otherwise).
  static FactorGroup make_table(std::vector<std::uint32_t> table) {
    FactorGroup f;
    f.cyclic = false;
    std::size_t sq = table.size();
    std::uint32_t m = 0;
    while (std::size_t{m} * m < sq) ++m;
    if (std::size_t{m} * m != sq || m < 2)
      throw input_error("factor group: table is not a square of order >= 2");
    f.order = m;
    f.table = std::move(table);
    for (std::uint32_t v : f.table)
      if (v >= m) throw input_error("factor group: table entry out of range");
    // Latin square.
    for (std::uint32_t a = 0; a < m; ++a) {
      std::vector<bool> row(m, false), col(m, false);
      for (std::uint32_t b = 0; b < m; ++b) {
        if (row[f.mul(a, b)] || col[f.mul(b, a)])
          throw input_error("factor group: table is not a Latin square");
        row[f.mul(a, b)] = col[f.mul(b, a)] = true;
      }
    }
    // Identity.
    bool have_id = false;
    for (std::uint32_t e = 0; e < m && !have_id; ++e) {
      bool ok = true;
      for (std::uint32_t a = 0; a < m; ++a)
        if (f.mul(e, a) != a || f.mul(a, e) != a) { ok = false; break; }
      if (ok) { f.identity = e; have_id = true; }
    }
    if (!have_id) throw input_error("factor group: no identity element");
    // Inverses.
    f.inverse.assign(m, 0);
    for (std::uint32_t a = 0; a < m; ++a) {
      bool found = false;
      for (std::uint32_t b = 0; b < m; ++b)
        if (f.mul(a, b) == f.identity && f.mul(b, a) == f.identity) {
          f.inverse[a] = b;
          found = true;
          break;
        }
      if (!found) throw input_error("factor group: missing inverse");
    }
    // Associativity.
    if (m <= 24) {
      for (std::uint32_t a = 0; a < m; ++a)
        for (std::uint32_t b = 0; b < m; ++b)
          for (std::uint32_t c = 0; c < m; ++c)
            if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)))
              throw input_error("factor group: multiplication not associative");
    } else {
      SplitMix64 rng(0x61736f63ULL);
      for (int t = 0; t < 20000; ++t) {
        auto a = static_cast<std::uint32_t>(rng.below(m));
        auto b = static_cast<std::uint32_t>(rng.below(m));
        auto c = static_cast<std::uint32_t>(rng.below(m));
        if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)))
          throw input_error("factor group: multiplication not associative");
      }
    }
    return f;
  }

  friend bool operator==(const FactorGroup& a, const FactorGroup& b) {
    return a.order == b.order && a.cyclic == b.cyclic && a.table == b.table;
  }
};

/// The group Gamma = prod_i Gamma_i, given by its factor list. When `repeat`
/// is set the list cycles forever, so arbitrary depths are available.
class GroupSpec {
 public:
  GroupSpec() = default;
  GroupSpec(std::vector<FactorGroup> factors, bool repeat)
      : factors_(std::move(factors)), repeat_(repeat) {
    if (factors_.empty()) throw input_error("group spec: no factors");
  }

  /// (Z/2)^omega.
  static GroupSpec binary() {
    return GroupSpec({FactorGroup::make_cyclic(2)}, true);
  }

  const FactorGroup& factor(std::size_t i) const {
    if (i < factors_.size()) return factors_[i];
    if (!repeat_) throw input_error("group spec: depth exceeds factor list");
    return factors_[i % factors_.size()];
  }
  bool repeats() const { return repeat_; }
  std::size_t listed_factor_count() const { return factors_.size(); }

  /// |prod_{i<depth} Gamma_i|, enforcing the quotient size cap.
  std::size_t quotient_size(std::size_t depth) const {
    std::size_t size = 1;
    for (std::size_t i = 0; i < depth; ++i) {
      size *= factor(i).order;
      if (size > kQuotientCap)
        throw input_error("group spec: quotient size exceeds cap 2^22");
    }
    return size;
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.repeat_ == b.repeat_ && a.factors_ == b.factors_;
  }

 private:
  std::vector<FactorGroup> factors_;
  bool repeat_ = false;
};

/// A group element truncated at finite depth; entry i indexes Gamma_i.
struct Prefix {
  std::vector<std::uint32_t> word;

  std::size_t depth() const { return word.size(); }

  void check(const GroupSpec& g) const {
    for (std::size_t i = 0; i < word.size(); ++i)
      if (word[i] >= g.factor(i).order)
        throw input_error("prefix: entry out of factor range");
  }

  friend bool operator==(const Prefix& a, const Prefix& b) { return a.word == b.word; }
};

/// Truncation to depth l; a homomorphism for coordinatewise multiplication.
inline Prefix project(const Prefix& x, std::size_t depth) {
  if (x.depth() < depth) throw input_error("project: insufficient prefix depth");
  return Prefix{std::vector<std::uint32_t>(x.word.begin(), x.word.begin() + depth)};
}

inline Prefix mul(const GroupSpec& g, const Prefix& x, const Prefix& y) {
  if (x.depth() != y.depth()) throw input_error("mul: depth mismatch");
  Prefix r = x;
  for (std::size_t i = 0; i < r.word.size(); ++i)
    r.word[i] = g.factor(i).mul(x.word[i], y.word[i]);
  return r;
}

inline Prefix inverse(const GroupSpec& g, const Prefix& x) {
  Prefix r = x;
  for (std::size_t i = 0; i < r.word.size(); ++i)
    r.word[i] = g.factor(i).inv(x.word[i]);
  return r;
}

inline Prefix identity_prefix(std::size_t depth) {
  return Prefix{std::vector<std::uint32_t>(depth, 0)};
}

namespace detail {

/// Mixed-radix rank; coordinate 0 is most significant.
inline std::size_t rank_word(const GroupSpec& g, const std::vector<std::uint32_t>& w) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < w.size(); ++i) r = r * g.factor(i).order + w[i];
  return r;
}

inline std::vector<std::uint32_t> unrank_word(const GroupSpec& g, std::size_t rank,
                                              std::size_t depth) {
  std::vector<std::uint32_t> w(depth);
  for (std::size_t i = depth; i-- > 0;) {
    std::uint32_t m = g.factor(i).order;
    w[i] = static_cast<std::uint32_t>(rank % m);
    rank /= m;
  }
  return w;
}

}  // namespace detail

/// Finite-depth cylinder-based subset of the group, kept in canonical
/// (minimal-depth) form: no shallower depth represents the same set.
class ClopenSet {
 public:
  ClopenSet() = default;

  /// From a membership bitset over the depth-l quotient.
  ClopenSet(const GroupSpec& g, std::size_t depth, std::vector<bool> bits)
      : depth_(depth), bits_(std::move(bits)) {
    if (bits_.size() != g.quotient_size(depth_))
      throw input_error("clopen set: bitset length does not match quotient");
    canonicalize(g);
  }

  static ClopenSet empty_set() { return ClopenSet(0, {false}); }
  static ClopenSet full_set() { return ClopenSet(0, {true}); }

  /// The depth-l cylinder around x.
  static ClopenSet cylinder(const GroupSpec& g, const Prefix& x, std::size_t depth) {
    Prefix p = project(x, depth);
    std::vector<bool> bits(g.quotient_size(depth), false);
    bits[detail::rank_word(g, p.word)] = true;
    return ClopenSet(g, depth, std::move(bits));
  }

  std::size_t depth() const { return depth_; }
  std::size_t size() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
  }
  bool is_empty() const { return size() == 0; }

  /// Membership bitset lifted to a (possibly deeper) depth.
  std::vector<bool> bits_at_depth(const GroupSpec& g, std::size_t depth) const {
    if (depth < depth_) throw input_error("clopen set: cannot view below own depth");
    std::size_t block = g.quotient_size(depth) / g.quotient_size(depth_);
    std::vector<bool> out(g.quotient_size(depth));
    for (std::size_t r = 0; r < bits_.size(); ++r)
      if (bits_[r])
        for (std::size_t j = 0; j < block; ++j) out[r * block + j] = true;
    return out;
  }

  bool contains(const GroupSpec& g, const Prefix& x) const {
    if (x.depth() < depth_) throw input_error("membership: insufficient prefix depth");
    Prefix p = project(x, depth_);
    return bits_[detail::rank_word(g, p.word)];
  }

  friend bool operator==(const ClopenSet& a, const ClopenSet& b) {
    return a.depth_ == b.depth_ && a.bits_ == b.bits_;
  }

  ClopenSet complement(const GroupSpec& g) const {
    std::vector<bool> bits = bits_;
    bits.flip();
    return ClopenSet(g, depth_, std::move(bits));
  }

  static ClopenSet set_union(const GroupSpec& g, const ClopenSet& a, const ClopenSet& b) {
    return combine(g, a, b, [](bool x, bool y) { return x || y; });
  }
  static ClopenSet set_intersection(const GroupSpec& g, const ClopenSet& a,
                                    const ClopenSet& b) {
    return combine(g, a, b, [](bool x, bool y) { return x && y; });
  }
  static bool subset(const GroupSpec& g, const ClopenSet& a, const ClopenSet& b) {
    return set_intersection(g, a, b) == a;
  }

  /// Right translation: { w * project(gamma, depth) : w in this }.
  ClopenSet translate_right(const GroupSpec& g, const Prefix& gamma) const {
    if (gamma.depth() < depth_)
      throw input_error("translate: insufficient translation depth");
    Prefix t = project(gamma, depth_);
    std::vector<bool> out(bits_.size(), false);
    for (std::size_t r = 0; r < bits_.size(); ++r) {
      if (!bits_[r]) continue;
      auto w = detail::unrank_word(g, r, depth_);
      for (std::size_t i = 0; i < depth_; ++i)
        w[i] = g.factor(i).mul(w[i], t.word[i]);
      out[detail::rank_word(g, w)] = true;
    }
    return ClopenSet(g, depth_, std::move(out));
  }

 private:
  ClopenSet(std::size_t depth, std::vector<bool> bits)
      : depth_(depth), bits_(std::move(bits)) {}

  template <typename Op>
  static ClopenSet combine(const GroupSpec& g, const ClopenSet& a, const ClopenSet& b,
                           Op op) {
    std::size_t d = std::max(a.depth_, b.depth_);
    std::vector<bool> av = a.bits_at_depth(g, d), bv = b.bits_at_depth(g, d);
    std::vector<bool> out(av.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(av[i], bv[i]);
    return ClopenSet(g, d, std::move(out));
  }

  /// Quotient test over the last factor: drop the final coordinate while the
  /// set is invariant under it.
  void canonicalize(const GroupSpec& g) {
    while (depth_ > 0) {
      std::uint32_t m = g.factor(depth_ - 1).order;
      std::size_t groups = bits_.size() / m;
      bool constant = true;
      for (std::size_t p = 0; p < groups && constant; ++p)
        for (std::uint32_t j = 1; j < m; ++j)
          if (bits_[p * m + j] != bits_[p * m]) { constant = false; break; }
      if (!constant) break;
      std::vector<bool> reduced(groups);
      for (std::size_t p = 0; p < groups; ++p) reduced[p] = bits_[p * m];
      bits_ = std::move(reduced);
      --depth_;
    }
  }

  std::size_t depth_ = 0;
  std::vector<bool> bits_{false};
};

}  // namespace domatic
