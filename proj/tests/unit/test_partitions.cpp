#include <algorithm>
#include <random>

#include "doctest.h"
#include "eqsep/errors.hpp"
#include "eqsep/partitions.hpp"

using namespace eqsep;

namespace {

std::vector<Index> range(std::size_t n)
{
  std::vector<Index> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = static_cast<Index>(i);
  return v;
}

RatVector ints(std::vector<long> v)
{
  RatVector out;
  for (auto x : v)
    out.emplace_back(x);
  return out;
}

// Minimal elements of {Q <= base : every block of Q sums to zero}.
std::vector<SetPartition> brute_zero_sum(RatVector const &coeffs,
                                         SetPartition const &base)
{
  auto const &ground = base.ground();
  auto pos = [&](Index p) {
    return static_cast<std::size_t>(
        std::lower_bound(ground.begin(), ground.end(), p) - ground.begin());
  };
  std::vector<SetPartition> zero;
  for (auto const &q : all_partitions(ground)) {
    if (!refines(q, base))
      continue;
    bool ok = true;
    for (auto const &b : q.blocks()) {
      Rational s = 0;
      for (auto p : b)
        s += coeffs[pos(p)];
      ok = ok && sgn(s) == 0;
    }
    if (ok)
      zero.push_back(q);
  }
  std::vector<SetPartition> minimal;
  for (auto const &q : zero) {
    bool has_finer = std::any_of(zero.begin(), zero.end(), [&](auto const &r) {
      return r != q && refines(r, q);
    });
    if (!has_finer)
      minimal.push_back(q);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

std::vector<SetPartition> sorted(std::vector<SetPartition> v)
{
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

TEST_SUITE("partitions")
{
  TEST_CASE("Bell numbers")
  {
    std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203, 877};
    for (std::size_t n = 0; n < bell.size(); ++n) {
      auto all = all_partitions(range(n));
      CHECK(all.size() == bell[n]);
      auto uniq = sorted(all);
      CHECK(std::adjacent_find(uniq.begin(), uniq.end()) == uniq.end());
    }
    CHECK_THROWS_AS(all_partitions(range(11)), ResourceError);
    CHECK_NOTHROW(all_partitions(range(3), 3));
    CHECK_THROWS_AS(all_partitions(range(4), 3), ResourceError);
  }

  TEST_CASE("canonical form and validation")
  {
    SetPartition p({0, 1, 2, 3}, {{3, 1}, {2, 0}});
    CHECK(p.blocks() == std::vector<std::vector<Index>>{{0, 2}, {1, 3}});
    CHECK_THROWS_AS(SetPartition({0, 1}, {{0}}), ValidationError);
    CHECK_THROWS_AS(SetPartition({0, 1}, {{0, 1}, {}}), ValidationError);
    CHECK_THROWS_AS(SetPartition({0, 0}, {{0}}), ValidationError);
    CHECK_THROWS_AS(SetPartition({0, 1}, {{0, 1}, {1}}), ValidationError);
  }

  TEST_CASE("refinement order")
  {
    auto fine = SetPartition::singletons(range(4));
    auto coarse = SetPartition::single_block(range(4));
    auto mid = SetPartition::over_range(4, {{0, 1}, {2, 3}});
    CHECK(refines(fine, mid));
    CHECK(refines(mid, coarse));
    CHECK(refines(mid, mid));
    CHECK_FALSE(refines(coarse, mid));
    CHECK_FALSE(refines(SetPartition::over_range(4, {{0, 2}, {1, 3}}), mid));
    CHECK_THROWS_AS(refines(fine, SetPartition::singletons(range(3))),
                    ValidationError);
  }

  TEST_CASE("duplicate partition")
  {
    auto p = SetPartition::over_range(3, {{0, 2}, {1}});
    auto d = duplicate_partition(p);
    CHECK(d.ground() == range(6));
    CHECK(d.blocks() == std::vector<std::vector<Index>>{{0, 2, 3, 5}, {1, 4}});
  }

  TEST_CASE("zero-sum examples")
  {
    auto base = SetPartition::single_block(range(4));
    auto r = zero_sum_partitions(ints({1, -1, 1, -1}), base);
    // {0,1}{2,3} and {0,3}{1,2}
    CHECK(r.size() == 2);
    CHECK(zero_sum_partitions(ints({1, 1, 1, 1}), base).empty());
    auto zeros = zero_sum_partitions(ints({0, 0, 0, 0}), base);
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0] == SetPartition::singletons(range(4)));
    auto mixed = zero_sum_partitions(ints({2, -1, -1, 0}), base);
    REQUIRE(mixed.size() == 1);
    CHECK(mixed[0] == SetPartition::over_range(4, {{0, 1, 2}, {3}}));
  }

  TEST_CASE("zero-sum partitions match brute force")
  {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<long> d(-2, 2);
    for (int t = 0; t < 300; ++t) {
      std::size_t n = 1 + t % 7;
      RatVector c;
      for (std::size_t i = 0; i < n; ++i)
        c.emplace_back(d(rng));
      auto bases = all_partitions(range(n));
      auto const &base = bases[rng() % bases.size()];
      CAPTURE(t);
      CHECK(sorted(zero_sum_partitions(c, base)) == brute_zero_sum(c, base));
    }
  }

  TEST_CASE("zero-sum partitions on a non-contiguous ground set")
  {
    SetPartition base({1, 4, 6, 9}, {{1, 4}, {6, 9}});
    auto c = ints({3, -3, 1, -1});
    CHECK(sorted(zero_sum_partitions(c, base)) == brute_zero_sum(c, base));
    CHECK(zero_sum_partitions(ints({1, 1, 1, -1}), base).empty());
  }

  TEST_CASE("block size cap and length check")
  {
    auto base = SetPartition::single_block(range(5));
    CHECK_THROWS_AS(zero_sum_partitions(ints({1, -1, 0, 0, 0}), base, 4),
                    ResourceError);
    CHECK_THROWS_AS(zero_sum_partitions(ints({1, -1}), base), DimensionError);
  }
}
