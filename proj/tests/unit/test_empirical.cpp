#include <cmath>
#include <limits>

#include "doctest.h"
#include "eqsep/empirical.hpp"
#include "eqsep/errors.hpp"
#include "eqsep/separation.hpp"
#include "eqsep/suites.hpp"

using namespace eqsep;

namespace {

Graph cycle(std::size_t n)
{
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    g.add_edge(i, (i + 1) % n);
  return g;
}

Graph two_triangles()
{
  Graph g(6);
  for (std::size_t base : {0u, 3u})
    for (std::size_t i = 0; i < 3; ++i)
      g.add_edge(base + i, base + (i + 1) % 3);
  return g;
}

Graph relabel(Graph const &g, std::vector<std::size_t> const &sigma)
{
  Graph out(g.n);
  for (std::size_t u = 0; u < g.n; ++u)
    for (std::size_t v = u + 1; v < g.n; ++v)
      if (g.edge(u, v))
        out.add_edge(sigma[u], sigma[v]);
  return out;
}

Graph from_mask(std::size_t n, unsigned mask)
{
  Graph g(n);
  unsigned bit = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v, ++bit)
      if (mask & (1u << bit))
        g.add_edge(u, v);
  return g;
}

bool isomorphic(Graph const &a, Graph const &b)
{
  std::vector<std::size_t> sigma(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    sigma[i] = i;
  do
    if (relabel(a, sigma).adj == b.adj)
      return true;
  while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

RatVector exact(std::vector<double> const &v)
{
  RatVector out;
  for (auto x : v)
    out.emplace_back(static_cast<long>(x));
  return out;
}

OracleOptions quick(std::size_t samples = 128)
{
  OracleOptions o;
  o.samples = samples;
  o.seed = 99;
  return o;
}

} // namespace

TEST_SUITE("empirical")
{
  TEST_CASE("keyed normal statistics and determinism")
  {
    double sum = 0, sq = 0;
    std::size_t const n = 200000;
    for (std::size_t i = 0; i < n; ++i) {
      double x = keyed_normal(7, 0, i);
      sum += x;
      sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
    CHECK(keyed_normal(1, 2, 3) == keyed_normal(1, 2, 3));
    CHECK(keyed_normal(1, 2, 3) != keyed_normal(1, 3, 2));
  }

  TEST_CASE("activation names")
  {
    CHECK(parse_activation("tanh") == ActivationKind::tanh);
    CHECK(to_string(ActivationKind::sigmoid) == "sigmoid");
    CHECK(is_polynomial(ActivationKind::identity));
    CHECK_FALSE(is_polynomial(ActivationKind::relu));
    CHECK_THROWS_AS(parse_activation("gelu"), ConfigError);
  }

  TEST_CASE("sampled networks have one coefficient per generator and part")
  {
    auto arch = cnn_architecture(4, 3);
    auto net = sample_network(arch, ActivationKind::relu, 5);
    REQUIRE(net.layers.size() == 2);
    CHECK(net.layers[0].linear_coeffs.size() == 3);
    CHECK(net.layers[0].bias_coeffs.size() == 1);
    CHECK(net.layers[1].linear_coeffs.size() == 1);
    auto scaled = sample_network(arch, ActivationKind::relu, 5, 10.0);
    CHECK(scaled.layers[0].linear_coeffs[1] ==
          doctest::Approx(10.0 * net.layers[0].linear_coeffs[1]));
  }

  TEST_CASE("evaluate a hand-built network")
  {
    FloatNetwork net;
    net.activation = ActivationKind::relu;
    FloatNetwork::Layer a;
    a.in_dim = 2;
    a.out_dim = 2;
    a.weights = {1, 0, 0, -1};
    a.bias = {0, 0};
    FloatNetwork::Layer b;
    b.in_dim = 2;
    b.out_dim = 1;
    b.weights = {1, 1};
    b.bias = {-1};
    net.layers = {a, b};
    std::vector<double> x{2, 3};
    auto y = evaluate(net, x);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == doctest::Approx(1.0));
    std::vector<double> bad{1};
    CHECK_THROWS_AS(evaluate(net, bad), DimensionError);
  }

  TEST_CASE("invariant outputs do not change under the group")
  {
    auto arch = cnn_architecture(5, 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto net = sample_network(arch, ActivationKind::tanh, seed);
      std::vector<double> x{0.3, -1.2, 2.0, 0.7, -0.1};
      std::vector<double> shifted{-0.1, 0.3, -1.2, 2.0, 0.7};
      CHECK(evaluate(net, x)[0] == doctest::Approx(evaluate(net, shifted)[0]));
    }
  }

  TEST_CASE("oracle verdicts on known pairs")
  {
    auto arch = cnn_architecture(3, 1);
    std::vector<double> a{1, 2, 3}, b{3, 1, 2}, c{1, 2, 4};
    auto same = mc_separation(arch, ActivationKind::relu, a, b, quick());
    CHECK(same.kind == OracleVerdict::Kind::likely_identified);
    auto diff = mc_separation(arch, ActivationKind::relu, a, c, quick());
    CHECK(diff.separated());
    CHECK(diff.gap > 1e-4);
    auto replay = sample_network(arch, ActivationKind::relu, diff.witness_seed,
                                 diff.witness_scale);
    CHECK(std::abs(evaluate(replay, a)[0] - evaluate(replay, c)[0]) ==
          doctest::Approx(diff.gap));
    CHECK(to_string(OracleVerdict::Kind::undecided) == "undecided");
  }

  TEST_CASE("polynomial activation identifies more pairs")
  {
    auto arch = cnn_architecture(3, 1);
    std::vector<double> a{0, 0, 3}, b{1, 1, 1};
    CHECK_FALSE(mc_separation(arch, ActivationKind::identity, a, b, quick()).separated());
    CHECK(mc_separation(arch, ActivationKind::relu, a, b, quick()).separated());
  }

  TEST_CASE("serial and parallel oracles agree")
  {
    auto arch = regular_orbit_architecture(Subgroup::alternating(symmetric_group(3)));
    std::vector<double> a{1, 0, 2, 0, 0, 1}, b{0, 1, 0, 2, 1, 0};
    auto s = quick(300), p = quick(300);
    s.exec = kernels::Exec::serial;
    p.exec = kernels::Exec::parallel;
    auto vs = mc_separation(arch, ActivationKind::relu, a, b, s);
    auto vp = mc_separation(arch, ActivationKind::relu, a, b, p);
    CHECK(vs.to_json() == vp.to_json());
  }

  TEST_CASE("non-finite outputs make the oracle unreliable")
  {
    auto arch = cnn_architecture(3, 1);
    double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> a{nan, 0, 0}, b{0, 0, 0};
    CHECK_THROWS_AS(mc_separation(arch, ActivationKind::tanh, a, b, quick(64)),
                    OracleUnreliableError);
    // ReLU maps NaN to zero, so the same input stays finite.
    CHECK_NOTHROW(mc_separation(arch, ActivationKind::relu, a, b, quick(64)));
  }

  TEST_CASE("unresolved gray zone is undecided")
  {
    auto g = cyclic_group(3);
    auto arch = full_architecture({natural_rep(g), trivial_rep(g)});
    std::vector<double> a{0, 0, 0}, b{1e-6, 0, 0};
    auto o = quick(64);
    o.tol_id = 1e-12;
    o.tol_sep = 1e-2;
    auto v = mc_separation(arch, ActivationKind::relu, a, b, o);
    CHECK(v.kind == OracleVerdict::Kind::undecided);
    CHECK(v.gray > 0);
    o.tol_id = 1;
    CHECK_THROWS_AS(mc_separation(arch, ActivationKind::relu, a, b, o), ConfigError);
  }

  TEST_CASE("WL on regular graphs")
  {
    auto c6 = cycle(6);
    auto tt = two_triangles();
    CHECK_FALSE(wl_distinguishes(c6, tt, 1));
    CHECK(wl_distinguishes(c6, tt, 2));
    CHECK(wl_distinguishes(cycle(5), cycle(6), 1));
    CHECK_FALSE(wl_distinguishes(c6, relabel(c6, {2, 4, 0, 1, 5, 3}), 2));
    CHECK_THROWS_AS(wl_colors(c6, 3), ConfigError);
    CHECK_THROWS_AS(wl_colors(c6, 1, 0, 4), ResourceError);
  }

  TEST_CASE("WL never separates isomorphic graphs and 2-WL is complete up to four nodes")
  {
    for (std::size_t n = 2; n <= 4; ++n) {
      unsigned const masks = 1u << (n * (n - 1) / 2);
      for (unsigned x = 0; x < masks; ++x)
        for (unsigned y = x; y < masks; ++y) {
          auto gx = from_mask(n, x), gy = from_mask(n, y);
          bool iso = isomorphic(gx, gy);
          REQUIRE(wl_distinguishes(gx, gy, 2) == !iso);
          if (iso)
            REQUIRE_FALSE(wl_distinguishes(gx, gy, 1));
        }
    }
  }

  TEST_CASE("IGN relation is consistent with isomorphism on three nodes")
  {
    auto rel = rho(ign_readout_architecture(3));
    unsigned const masks = 1u << 3;
    for (unsigned x = 0; x < masks; ++x)
      for (unsigned y = 0; y < masks; ++y) {
        auto gx = from_mask(3, x), gy = from_mask(3, y);
        bool same = identifies(rel, exact(gx.flattened()), exact(gy.flattened()));
        CHECK(same == isomorphic(gx, gy));
        CHECK(same == !wl_distinguishes(gx, gy, 2));
      }
  }

  TEST_CASE("edge list parsing")
  {
    auto g = parse_edge_list("# path\nnodes 4\n0 1\n1 2 # middle\n\n");
    CHECK(g.n == 4);
    CHECK(g.edge(1, 0));
    CHECK(g.edge(2, 1));
    CHECK_FALSE(g.edge(2, 3));
    CHECK(parse_edge_list("0 5").n == 6);
    CHECK_THROWS_AS(parse_edge_list("0"), ConfigError);
    CHECK_THROWS_AS(parse_edge_list("0 1 2"), ConfigError);
    CHECK_THROWS_AS(parse_edge_list("a b"), ConfigError);
    CHECK_THROWS_AS(parse_edge_list("1 1"), ValidationError);
    Graph h(3);
    CHECK_THROWS_AS(h.add_edge(0, 3), ValidationError);
  }
}
