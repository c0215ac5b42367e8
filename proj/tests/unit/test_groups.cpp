#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "eqsep/errors.hpp"
#include "eqsep/groups.hpp"

using namespace eqsep;

namespace {

Permutation perm(std::vector<Index> v) { return Permutation(std::move(v)); }

std::vector<Permutation> all_permutations(std::size_t n)
{
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  std::vector<Permutation> out;
  do
    out.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// Permutations mapping every cycle edge {i, i+1} to a cycle edge.
std::vector<Permutation> cycle_automorphisms(std::size_t n)
{
  std::vector<Permutation> out;
  for (auto const &p : all_permutations(n)) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto a = p(static_cast<Index>(i));
      auto b = p(static_cast<Index>((i + 1) % n));
      auto diff = (a + n - b) % n;
      ok = diff == 1 || diff == n - 1;
    }
    if (ok)
      out.push_back(p);
  }
  return out;
}

// Flood fill over all group elements.
std::vector<std::vector<Index>> flood_orbits(GSet const &x)
{
  std::vector<int> seen(x.size(), -1);
  std::vector<std::vector<Index>> out;
  for (Index s = 0; s < x.size(); ++s) {
    if (seen[s] >= 0)
      continue;
    std::set<Index> orbit;
    for (std::size_t g = 0; g < x.group()->order(); ++g)
      orbit.insert(x.act(g, s));
    for (auto p : orbit)
      seen[p] = static_cast<int>(out.size());
    out.emplace_back(orbit.begin(), orbit.end());
  }
  return out;
}

void check_action_laws(GSet const &x)
{
  auto const &g = *x.group();
  for (Index p = 0; p < x.size(); ++p)
    CHECK(x.act(g.identity(), p) == p);
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      for (Index p = 0; p < x.size(); ++p)
        REQUIRE(x.act(g.mul(a, b), p) == x.act(a, x.act(b, p)));
}

} // namespace

TEST_SUITE("groups")
{
  TEST_CASE("permutation basics")
  {
    auto p = perm({1, 2, 0});
    auto q = perm({1, 0, 2});
    CHECK((p * q)(0) == p(q(0)));
    CHECK((p * q) == perm({2, 1, 0}));
    CHECK((p * p.inverse()).is_identity());
    CHECK(p.is_even());
    CHECK_FALSE(q.is_even());
    CHECK_THROWS_AS(perm({0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(perm({0, 3}), ValidationError);
    CHECK_THROWS_AS(p * perm({0, 1}), ValidationError);
  }

  TEST_CASE("group orders")
  {
    CHECK(cyclic_group(1)->order() == 1);
    CHECK(cyclic_group(6)->order() == 6);
    CHECK(symmetric_group(4)->order() == 24);
    CHECK(dihedral_group(5)->order() == 10);
    CHECK(direct_product(cyclic_group(2), cyclic_group(3))->order() == 6);
    CHECK(direct_product(cyclic_group(2), cyclic_group(3))->degree() == 5);
    CHECK_THROWS_AS(dihedral_group(2), ValidationError);
    CHECK_THROWS_AS(cyclic_group(0), ValidationError);
  }

  TEST_CASE("symmetric group matches brute force enumeration")
  {
    for (std::size_t n = 1; n <= 5; ++n) {
      auto g = symmetric_group(n);
      CHECK(g->elements() == all_permutations(n));
    }
  }

  TEST_CASE("dihedral group matches cycle automorphisms")
  {
    for (std::size_t n = 3; n <= 7; ++n)
      CHECK(dihedral_group(n)->elements() == cycle_automorphisms(n));
  }

  TEST_CASE("group tables are consistent")
  {
    auto g = dihedral_group(4);
    for (std::size_t a = 0; a < g->order(); ++a) {
      CHECK(g->mul(a, g->inverse(a)) == g->identity());
      for (std::size_t b = 0; b < g->order(); ++b)
        CHECK(g->element(g->mul(a, b)) == g->element(a) * g->element(b));
    }
    CHECK(g->index_of(perm({1, 2, 3, 0})).has_value());
    CHECK_FALSE(g->index_of(perm({1, 0, 2, 3})).has_value());
  }

  TEST_CASE("closure cap")
  {
    CHECK(symmetric_group(7)->order() == 5040);
    CHECK_THROWS_AS(symmetric_group(8), ResourceError);
  }

  TEST_CASE("subgroups")
  {
    auto s3 = symmetric_group(3);
    auto a3 = Subgroup::alternating(s3);
    CHECK(a3.order() == 3);
    CHECK(a3.is_subgroup_of(Subgroup::full(s3)));
    CHECK(Subgroup::trivial(s3).is_subgroup_of(a3));
    CHECK_FALSE(Subgroup::full(s3).is_subgroup_of(a3));
    auto swap = *s3->index_of(perm({1, 0, 2}));
    CHECK_THROWS_AS(Subgroup(s3, {swap}), InvalidSubgroupError);
    CHECK_THROWS_AS(Subgroup(s3, {s3->identity(), swap, *s3->index_of(perm({0, 2, 1}))}),
                    InvalidSubgroupError);
    CHECK(Subgroup::generated(s3, {perm({1, 0, 2})}).order() == 2);
    CHECK_THROWS_AS(Subgroup::generated(cyclic_group(3), {perm({1, 0, 2})}),
                    InvalidSubgroupError);
  }

  TEST_CASE("cosets partition the group")
  {
    auto s4 = symmetric_group(4);
    auto h = Subgroup::generated(s4, {perm({1, 0, 2, 3})});
    auto cs = cosets(h);
    CHECK(cs.cosets.size() == 12);
    std::vector<int> hits(s4->order(), 0);
    for (std::size_t c = 0; c < cs.cosets.size(); ++c) {
      CHECK(cs.cosets[c].size() == 2);
      CHECK(cs.representatives[c] == cs.cosets[c].front());
      for (auto g : cs.cosets[c]) {
        ++hits[g];
        CHECK(cs.coset_of[g] == c);
      }
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    check_action_laws(gset_from_cosets(cs));
  }

  TEST_CASE("double cosets")
  {
    auto s3 = symmetric_group(3);
    auto h = Subgroup::generated(s3, {perm({1, 0, 2})});
    auto dc = double_cosets(h, h);
    CHECK(dc.classes.size() == 2);
    std::size_t total = 0;
    for (auto const &c : dc.classes)
      total += c.size();
    CHECK(total == 6);
    CHECK(double_cosets(Subgroup::trivial(s3), Subgroup::trivial(s3)).classes.size() == 6);
    CHECK(double_cosets(Subgroup::full(s3), h).classes.size() == 1);
  }

  TEST_CASE("orbits agree with flood fill")
  {
    std::vector<GSet> sets{natural_gset(dihedral_group(5)),
                           regular_gset(cyclic_group(4)),
                           gset_power(symmetric_group(3), 2),
                           gset_power(cyclic_group(4), 2),
                           gset_product(natural_gset(cyclic_group(3)),
                                        natural_gset(cyclic_group(3)))};
    for (auto const &x : sets) {
      CHECK(x.orbits() == flood_orbits(x));
      CHECK(orbits(x) == x.orbits());
      check_action_laws(x);
    }
  }

  TEST_CASE("constructed set sizes")
  {
    auto s3 = symmetric_group(3);
    auto nat = natural_gset(s3);
    CHECK(regular_gset(s3).size() == 6);
    CHECK(gset_product(nat, nat).size() == 9);
    CHECK(gset_disjoint_union(nat, regular_gset(s3)).size() == 9);
    CHECK(gset_power(s3, 3).size() == 27);
    CHECK(gset_power(s3, 2).orbits().size() == 2);
    CHECK(gset_power(s3, 3).orbits().size() == 5);
    CHECK(gset_disjoint_union(nat, nat).orbits().size() == 2);
    CHECK_THROWS_AS(gset_power(s3, 0), ValidationError);
    CHECK_THROWS_AS(gset_product(nat, natural_gset(cyclic_group(3))),
                    ValidationError);
  }

  TEST_CASE("action table validation")
  {
    auto c2 = cyclic_group(2);
    CHECK_THROWS_AS(GSet(c2, {{0, 1}}), ValidationError);
    CHECK_THROWS_AS(GSet(c2, {{0, 1}, {0, 0}}), ValidationError);
    CHECK_THROWS_AS(GSet(c2, {{1, 0}, {1, 0}}), ValidationError);
    GSet ok(c2, {{0, 1}, {1, 0}});
    CHECK(ok.orbits().size() == 1);
  }
}
