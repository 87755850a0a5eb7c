#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domatic/profinite.hpp"

namespace domatic {

/// A Cantor scheme: for each binary string s, a cylinder U_s and a marked
/// point q_s in U_s (an element of the marked set S). Siblings are disjoint
/// and contained in the parent; cylinder depths strictly increase along
/// branches. Implementations may deepen the tree on demand.
class CantorScheme {
 public:
  virtual ~CantorScheme() = default;

  /// U_s; throws input_error if the node cannot be materialized.
  virtual ClopenSet cylinder(const std::string& node) const = 0;

  /// q_s materialized to at least `min_depth` coordinates.
  virtual Prefix point(const std::string& node, std::size_t min_depth) const = 0;

  /// Largest node length this scheme can materialize (nullopt = unbounded).
  virtual std::optional<std::size_t> max_node_length() const = 0;

  /// When U_node is a single mixed-radix cylinder, its word; lets callers
  /// avoid materializing full quotient bitsets at deep levels.
  virtual std::optional<Prefix> single_cylinder(const std::string& node) const {
    (void)node;
    return std::nullopt;
  }
};

/// The textbook scheme: node s maps to the word with digit s_i in factor i
/// (every factor has order >= 2, so digits 0/1 are valid), U_s = the depth-|s|
/// cylinder of that word, q_s = the word padded with identity. The marked set
/// is the eventually-identity sequences with digits in {0,1}; its closure is
/// the full dyadic subproduct, which is uncountable.
class CanonicalScheme : public CantorScheme {
 public:
  /// With `flip` set, node digits are complemented before embedding — a
  /// second scheme on the same group whose marked set differs from the
  /// plain one's.
  explicit CanonicalScheme(GroupSpec group, bool flip = false)
      : group_(std::move(group)), flip_(flip) {}

  ClopenSet cylinder(const std::string& node) const override {
    return ClopenSet::cylinder(group_, word_of(node, node.size()), node.size());
  }

  Prefix point(const std::string& node, std::size_t min_depth) const override {
    return word_of(node, std::max(node.size(), min_depth));
  }

  std::optional<std::size_t> max_node_length() const override {
    if (group_.repeats()) return std::nullopt;
    return group_.listed_factor_count();
  }

  std::optional<Prefix> single_cylinder(const std::string& node) const override {
    return word_of(node, node.size());
  }

  const GroupSpec& group() const { return group_; }
  bool flipped() const { return flip_; }

 private:
  Prefix word_of(const std::string& node, std::size_t depth) const {
    Prefix p;
    p.word.assign(depth, 0);
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (node[i] != '0' && node[i] != '1')
        throw input_error("scheme node must be a binary string");
      bool one = (node[i] == '1') != flip_;
      p.word[i] = one ? 1u : 0u;
    }
    return p;
  }

  GroupSpec group_;
  bool flip_ = false;
};

/// A finitely materialized scheme given node by node, with no extension
/// oracle. Used for user-supplied schemes and for validation tests.
class ExplicitScheme : public CantorScheme {
 public:
  struct Node {
    ClopenSet cylinder;
    Prefix point;
  };

  explicit ExplicitScheme(GroupSpec group) : group_(std::move(group)) {}

  void add_node(const std::string& node, ClopenSet cyl, Prefix q) {
    max_len_ = std::max(max_len_, node.size());
    nodes_[node] = Node{std::move(cyl), std::move(q)};
  }

  ClopenSet cylinder(const std::string& node) const override {
    return find(node).cylinder;
  }

  Prefix point(const std::string& node, std::size_t min_depth) const override {
    const Prefix& q = find(node).point;
    if (q.depth() < min_depth)
      throw input_error("explicit scheme: marked point too shallow at node '" +
                        node + "'");
    return q;
  }

  std::optional<std::size_t> max_node_length() const override { return max_len_; }

  const GroupSpec& group() const { return group_; }

 private:
  const Node& find(const std::string& node) const {
    auto it = nodes_.find(node);
    if (it == nodes_.end())
      throw input_error("explicit scheme: node '" + node + "' not materialized");
    return it->second;
  }

  GroupSpec group_;
  std::map<std::string, Node> nodes_;
  std::size_t max_len_ = 0;
};

struct SchemeViolation {
  std::string node;
  std::string reason;
};

/// Verifies the scheme invariants exhaustively on all nodes up to `depth`:
/// sibling disjointness, containment in the parent, marked point membership,
/// strictly increasing cylinder depths along branches.
inline std::optional<SchemeViolation> validate_scheme(const GroupSpec& g,
                                                      const CantorScheme& scheme,
                                                      std::size_t depth) {
  std::vector<std::string> frontier{""};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<std::string> next;
    for (const std::string& s : frontier) {
      ClopenSet parent = scheme.cylinder(s);
      ClopenSet c0 = scheme.cylinder(s + "0");
      ClopenSet c1 = scheme.cylinder(s + "1");
      if (!ClopenSet::set_intersection(g, c0, c1).is_empty())
        return SchemeViolation{s, "sibling cylinders overlap"};
      for (char ch : {'0', '1'}) {
        std::string t = s + ch;
        ClopenSet cyl = ch == '0' ? c0 : c1;
        if (cyl.is_empty()) return SchemeViolation{t, "empty cylinder"};
        if (!ClopenSet::subset(g, cyl, parent))
          return SchemeViolation{t, "child cylinder not contained in parent"};
        if (cyl.depth() <= parent.depth())
          return SchemeViolation{t, "cylinder depth does not increase along branch"};
        Prefix q = scheme.point(t, cyl.depth());
        if (!cyl.contains(g, q))
          return SchemeViolation{t, "marked point outside its cylinder"};
        next.push_back(t);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace domatic
