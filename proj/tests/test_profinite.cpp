#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "domatic/profinite.hpp"
#include "domatic/rng.hpp"

using namespace domatic;

namespace {

// Z/2 x Z/3 x Z/2, repeating.
GroupSpec mixed() {
  return GroupSpec({FactorGroup::make_cyclic(2), FactorGroup::make_cyclic(3),
                    FactorGroup::make_cyclic(2)},
                   true);
}

// S_3 as an explicit table: elements e, r, r^2, s, sr, sr^2 with r^3 = s^2 = e
// and rs = sr^2. Index: 0..2 rotations, 3..5 reflections s r^j.
std::vector<std::uint32_t> s3_table() {
  auto mul = [](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
    bool fa = a >= 3, fb = b >= 3;
    std::uint32_t ra = fa ? a - 3 : a, rb = fb ? b - 3 : b;
    // (s^fa r^ra)(s^fb r^rb) = s^(fa xor fb) r^(rb +- ra)
    std::uint32_t rot = fb ? (rb + 3 - ra) % 3 : (ra + rb) % 3;
    return (fa != fb ? 3 : 0) + rot;
  };
  std::vector<std::uint32_t> t;
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = 0; b < 6; ++b) t.push_back(mul(a, b));
  return t;
}

Prefix random_prefix(SplitMix64& rng, const GroupSpec& g, std::size_t depth) {
  Prefix p;
  for (std::size_t i = 0; i < depth; ++i)
    p.word.push_back(static_cast<std::uint32_t>(rng.below(g.factor(i).order)));
  return p;
}

ClopenSet random_clopen(SplitMix64& rng, const GroupSpec& g, std::size_t depth) {
  std::vector<bool> bits(g.quotient_size(depth));
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.below(2) == 1;
  return ClopenSet(g, depth, std::move(bits));
}

}  // namespace

TEST_CASE("factor groups validate their tables") {
  REQUIRE_NOTHROW(FactorGroup::make_table(s3_table()));
  REQUIRE_THROWS_AS(FactorGroup::make_cyclic(1), input_error);
  REQUIRE_THROWS_AS(FactorGroup::make_table({0, 1, 2}), input_error);  // not square
  REQUIRE_THROWS_AS(FactorGroup::make_table({0, 0, 0, 0}), input_error);  // not Latin
  // Subtraction mod 3: a Latin square with no two-sided identity.
  REQUIRE_THROWS_AS(FactorGroup::make_table({0, 2, 1, 1, 0, 2, 2, 1, 0}), input_error);
  REQUIRE_THROWS_AS(FactorGroup::make_table({0, 1, 5, 2}), input_error);  // range
}

TEST_CASE("S_3 arithmetic survives the validator and is noncommutative") {
  FactorGroup s3 = FactorGroup::make_table(s3_table());
  REQUIRE(s3.order == 6);
  REQUIRE(s3.identity == 0);
  bool commutes = true;
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = 0; b < 6; ++b)
      if (s3.mul(a, b) != s3.mul(b, a)) commutes = false;
  REQUIRE_FALSE(commutes);
  for (std::uint32_t a = 0; a < 6; ++a) {
    REQUIRE(s3.mul(a, s3.inv(a)) == s3.identity);
    REQUIRE(s3.mul(s3.inv(a), a) == s3.identity);
  }
}

TEST_CASE("group spec depth handling") {
  GroupSpec fin({FactorGroup::make_cyclic(2), FactorGroup::make_cyclic(3)}, false);
  REQUIRE(fin.quotient_size(2) == 6);
  REQUIRE_THROWS_AS(fin.factor(2), input_error);
  GroupSpec rep = mixed();
  REQUIRE(rep.factor(3).order == 2);  // wraps around
  REQUIRE(rep.quotient_size(3) == 12);
  REQUIRE_THROWS_AS(GroupSpec({}, true), input_error);
}

TEST_CASE("quotient size cap is enforced") {
  GroupSpec g = GroupSpec::binary();
  REQUIRE(g.quotient_size(22) == (std::size_t{1} << 22));
  REQUIRE_THROWS_AS(g.quotient_size(23), input_error);
}

TEST_CASE("rank and unrank are mutually inverse on the mixed-radix quotient") {
  GroupSpec g = mixed();
  std::size_t depth = 5;  // orders 2,3,2,2,3 -> 72
  std::size_t q = g.quotient_size(depth);
  for (std::size_t r = 0; r < q; ++r) {
    auto w = detail::unrank_word(g, r, depth);
    REQUIRE(detail::rank_word(g, w) == r);
  }
  // Coordinate 0 is most significant: rank of (1,0,0,0,0) is q/2.
  REQUIRE(detail::rank_word(g, {1, 0, 0, 0, 0}) == q / 2);
}

TEST_CASE("projection is a homomorphism for coordinatewise multiplication") {
  GroupSpec g = mixed();
  SplitMix64 rng(41);
  for (int t = 0; t < 200; ++t) {
    Prefix x = random_prefix(rng, g, 6), y = random_prefix(rng, g, 6);
    std::size_t l = rng.below(7);
    REQUIRE(project(mul(g, x, y), l) == mul(g, project(x, l), project(y, l)));
    REQUIRE(mul(g, x, inverse(g, x)) == identity_prefix(6));
    REQUIRE(mul(g, identity_prefix(6), x) == x);
  }
  REQUIRE_THROWS_AS(project(random_prefix(rng, g, 2), 3), input_error);
}

TEST_CASE("prefix entries are range-checked against the factors") {
  GroupSpec g = mixed();
  Prefix bad{std::vector<std::uint32_t>{0, 3}};  // factor 1 has order 3
  REQUIRE_THROWS_AS(bad.check(g), input_error);
  Prefix good{std::vector<std::uint32_t>{1, 2, 1}};
  REQUIRE_NOTHROW(good.check(g));
}

TEST_CASE("clopen sets canonicalize to minimal depth") {
  GroupSpec g = GroupSpec::binary();
  // The full set written at depth 3 collapses to depth 0.
  ClopenSet full(g, 3, std::vector<bool>(8, true));
  REQUIRE(full.depth() == 0);
  REQUIRE(full == ClopenSet::full_set());
  // A set depending only on coordinate 0, written at depth 3.
  std::vector<bool> bits(8, false);
  for (std::size_t r = 4; r < 8; ++r) bits[r] = true;  // coordinate 0 == 1
  ClopenSet s(g, 3, std::move(bits));
  REQUIRE(s.depth() == 1);
  ClopenSet direct(g, 1, {false, true});
  REQUIRE(s == direct);
  // A genuinely depth-3 set stays there.
  std::vector<bool> deep(8, false);
  deep[5] = true;
  REQUIRE(ClopenSet(g, 3, std::move(deep)).depth() == 3);
}

TEST_CASE("cylinders contain their defining points") {
  GroupSpec g = mixed();
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    Prefix x = random_prefix(rng, g, 5);
    std::size_t d = rng.below(6);
    ClopenSet c = ClopenSet::cylinder(g, x, d);
    REQUIRE(c.contains(g, x));
    REQUIRE((c.size() == 1 || c.depth() == 0));
  }
}

TEST_CASE("boolean algebra laws on random clopen sets") {
  GroupSpec g = mixed();
  SplitMix64 rng(77);
  for (int t = 0; t < 60; ++t) {
    ClopenSet a = random_clopen(rng, g, 1 + rng.below(4));
    ClopenSet b = random_clopen(rng, g, 1 + rng.below(4));
    // De Morgan.
    REQUIRE(ClopenSet::set_union(g, a, b).complement(g) ==
            ClopenSet::set_intersection(g, a.complement(g), b.complement(g)));
    // Subset via union/intersection.
    ClopenSet meet = ClopenSet::set_intersection(g, a, b);
    REQUIRE(ClopenSet::subset(g, meet, a));
    REQUIRE(ClopenSet::subset(g, meet, b));
    REQUIRE(ClopenSet::subset(g, a, ClopenSet::set_union(g, a, b)));
    REQUIRE(a.complement(g).complement(g) == a);
    REQUIRE(ClopenSet::set_intersection(g, a, a.complement(g)).is_empty());
    REQUIRE(ClopenSet::set_union(g, a, a.complement(g)) == ClopenSet::full_set());
  }
}

TEST_CASE("membership is stable under deepening the view") {
  GroupSpec g = mixed();
  SplitMix64 rng(3);
  for (int t = 0; t < 40; ++t) {
    ClopenSet a = random_clopen(rng, g, 2);
    std::size_t deep = 4;
    auto bits = a.bits_at_depth(g, deep);
    for (std::size_t r = 0; r < bits.size(); ++r) {
      Prefix x{detail::unrank_word(g, r, deep)};
      REQUIRE(a.contains(g, x) == static_cast<bool>(bits[r]));
    }
  }
}

TEST_CASE("right translation is an action compatible with composition") {
  GroupSpec g = mixed();
  SplitMix64 rng(11);
  for (int t = 0; t < 40; ++t) {
    ClopenSet a = random_clopen(rng, g, 3);
    Prefix u = random_prefix(rng, g, 3), v = random_prefix(rng, g, 3);
    REQUIRE(a.translate_right(g, u).translate_right(g, v) ==
            a.translate_right(g, mul(g, u, v)));
    REQUIRE(a.translate_right(g, identity_prefix(3)) == a);
    // Translation preserves size.
    REQUIRE(a.translate_right(g, u).bits_at_depth(g, 3).size() ==
            a.bits_at_depth(g, 3).size());
    // Membership transforms: x in A  <=>  x*u in A*u.
    Prefix x = random_prefix(rng, g, 3);
    REQUIRE(a.contains(g, x) == a.translate_right(g, u).contains(g, mul(g, x, u)));
  }
}

TEST_CASE("clopen constructors reject malformed bitsets") {
  GroupSpec g = GroupSpec::binary();
  REQUIRE_THROWS_AS(ClopenSet(g, 2, std::vector<bool>(3, true)), input_error);
  REQUIRE_THROWS_AS(ClopenSet::cylinder(g, identity_prefix(1), 2), input_error);
  ClopenSet a(g, 2, {true, false, false, false});
  REQUIRE_THROWS_AS(a.bits_at_depth(g, 1), input_error);
  REQUIRE_THROWS_AS(a.contains(g, identity_prefix(1)), input_error);
}
