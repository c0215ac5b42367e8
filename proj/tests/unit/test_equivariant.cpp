#include "doctest.h"
#include "eqsep/equivariant.hpp"
#include "eqsep/errors.hpp"

using namespace eqsep;

namespace {

std::size_t fixed_points(PermRep const &rep, std::size_t g)
{
  std::size_t count = 0;
  for (Index x = 0; x < rep.dim(); ++x)
    count += rep.gset().act(g, x) == x;
  return count;
}

// Burnside: orbits of G on X × Y = average of fix(g, X) · fix(g, Y).
std::size_t burnside_hom_dim(PermRep const &v, PermRep const &w)
{
  std::size_t total = 0;
  auto const &g = *v.group();
  for (std::size_t e = 0; e < g.order(); ++e)
    total += fixed_points(v, e) * fixed_points(w, e);
  return total / g.order();
}

std::vector<PermRep> sample_reps(GroupPtr const &g)
{
  std::vector<PermRep> reps{trivial_rep(g), natural_rep(g), regular_rep(g),
                            power_rep(g, 2)};
  reps.push_back(sum_rep(reps[0], reps[1]));
  reps.push_back(mult_rep(reps[1], 2));
  return reps;
}

} // namespace

TEST_SUITE("equivariant")
{
  TEST_CASE("representation matrices respect products")
  {
    auto g = dihedral_group(4);
    auto rep = power_rep(g, 2);
    for (std::size_t a = 0; a < g->order(); ++a)
      for (std::size_t b = 0; b < g->order(); ++b)
        REQUIRE(rep.matrix(g->mul(a, b)) == rep.matrix(a) * rep.matrix(b));
    CHECK(rep.matrix(g->identity()) == RatMatrix::identity(16));
    CHECK(rep.generator_matrices().size() == g->generators().size());
  }

  TEST_CASE("representation dimensions")
  {
    auto s3 = symmetric_group(3);
    CHECK(regular_rep(s3).dim() == 6);
    CHECK(natural_rep(s3).dim() == 3);
    CHECK(trivial_rep(s3).dim() == 1);
    CHECK(power_rep(s3, 3).dim() == 27);
    CHECK(mult_rep(natural_rep(s3), 4).dim() == 12);
    CHECK(sum_rep(natural_rep(s3), regular_rep(s3)).dim() == 9);
    CHECK(coset_rep(Subgroup::alternating(s3)).dim() == 2);
    CHECK_THROWS_AS(mult_rep(natural_rep(s3), 0), ValidationError);
    CHECK(invariant_basis(power_rep(s3, 2)).size() == 2);
  }

  TEST_CASE("commutant dimension matches Burnside count")
  {
    for (auto const &g : {cyclic_group(4), symmetric_group(3), dihedral_group(4)}) {
      auto reps = sample_reps(g);
      for (auto const &v : reps)
        for (auto const &w : reps) {
          auto basis = commutant_basis(v, w);
          CHECK(basis.generators.size() == burnside_hom_dim(v, w));
          CHECK(span_rank(basis.generators) == basis.generators.size());
          for (auto const &phi : basis.generators)
            REQUIRE(is_equivariant(phi, v, w));
        }
    }
    CHECK_THROWS_AS(commutant_basis(natural_rep(cyclic_group(3)),
                                    natural_rep(symmetric_group(3))),
                    ValidationError);
  }

  TEST_CASE("double coset basis spans the commutant")
  {
    auto s4 = symmetric_group(4);
    std::vector<Subgroup> subs{
        Subgroup::trivial(s4), Subgroup::alternating(s4),
        Subgroup::generated(s4, {Permutation({1, 0, 2, 3})}),
        Subgroup::generated(s4, {Permutation({1, 2, 0, 3}), Permutation({1, 0, 2, 3})})};
    for (auto const &k : subs)
      for (auto const &h : subs) {
        auto dc = double_coset_basis(k, h);
        auto full = commutant_basis(dc.source, dc.target);
        CHECK(dc.generators.size() == double_cosets(h, k).classes.size());
        CHECK(span_rank(dc.generators) == dc.generators.size());
        CHECK(span_rank(dc.generators) == full.generators.size());
        auto joint = dc.generators;
        joint.insert(joint.end(), full.generators.begin(), full.generators.end());
        CHECK(span_rank(joint) == full.generators.size());
      }
  }

  TEST_CASE("layer generator counts")
  {
    CHECK(circular_layer(5, 3).generators().size() == 3);
    CHECK(circular_layer(5, 5).spans_identity());
    CHECK(ign_layer(2, 1, 2, 3).generators().size() == 12);
    // Partitions of four points into at most n blocks.
    CHECK(ign_layer(4, 2, 1, 1).generators().size() == 15);
    CHECK(ign_layer(3, 2, 1, 1).generators().size() == 14);
    CHECK(ign_layer(2, 2, 1, 1).generators().size() == 8);
    CHECK(full_layer(natural_rep(symmetric_group(3)),
                     natural_rep(symmetric_group(3)))
              .generators()
              .size() == 2);
    CHECK_THROWS_AS(circular_layer(3, 4), ValidationError);
    CHECK_THROWS_AS(circular_layer(3, 0), ValidationError);
    CHECK_THROWS_AS(ign_layer(5, 3, 1, 1, 100), ResourceError);
  }

  TEST_CASE("circulant units")
  {
    auto c = circulant_unit(4, 1);
    CHECK(c(1, 0) == 1);
    CHECK(c(0, 3) == 1);
    CHECK(c(0, 0) == 0);
    CHECK(circulant_unit(4, 0) == RatMatrix::identity(4));
  }

  TEST_CASE("layer validation")
  {
    auto s3 = symmetric_group(3);
    auto nat = natural_rep(s3);
    auto not_equivariant = RatMatrix::from_ints({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK_THROWS_AS(LayerSpace(nat, nat, {not_equivariant}, BiasSpec::null()),
                    ValidationError);
    CHECK_THROWS_AS(LayerSpace(nat, nat, {RatMatrix(2, 3)}, BiasSpec::null()),
                    ValidationError);
    auto id = RatMatrix::identity(3);
    CHECK_THROWS_AS(LayerSpace(nat, nat, {id, id}, BiasSpec::null()),
                    ValidationError);
    CHECK_THROWS_AS(
        LayerSpace(nat, nat, {id},
                   BiasSpec::complete(SetPartition::over_range(3, {{0, 1}, {2}}))),
        ValidationError);
    CHECK_THROWS_AS(
        LayerSpace(nat, nat, {id},
                   BiasSpec::complete(SetPartition::over_range(2, {{0, 1}}))),
        ValidationError);
    CHECK_NOTHROW(LayerSpace(nat, nat, {id}, orbit_bias(nat)));
    CHECK_THROWS_AS(LayerSpace(nat, natural_rep(cyclic_group(3)), {id},
                               BiasSpec::null()),
                    ValidationError);
  }

  TEST_CASE("architecture validation and digest")
  {
    auto s3 = symmetric_group(3);
    auto nat = natural_rep(s3);
    auto triv = trivial_rep(s3);
    auto a = full_architecture({nat, nat, triv});
    auto b = full_architecture({nat, nat, triv});
    CHECK(a.depth() == 2);
    CHECK(a.digest() == b.digest());
    CHECK(a.digest().size() == 16);
    CHECK(a.digest() != full_architecture({nat, triv}).digest());
    CHECK_THROWS_AS(Architecture({}), ValidationError);
    CHECK_THROWS_AS(Architecture({full_layer(nat, triv), full_layer(nat, triv)}),
                    ValidationError);
    CHECK_THROWS_AS(full_architecture({nat}), ValidationError);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  }
}
