#include "eqsep/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eqsep/errors.hpp"

namespace eqsep {

ActivationKind parse_activation(std::string_view name)
{
  if (name == "relu")
    return ActivationKind::relu;
  if (name == "tanh")
    return ActivationKind::tanh;
  if (name == "sigmoid")
    return ActivationKind::sigmoid;
  if (name == "identity")
    return ActivationKind::identity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::string to_string(ActivationKind a)
{
  switch (a) {
  case ActivationKind::relu: return "relu";
  case ActivationKind::tanh: return "tanh";
  case ActivationKind::sigmoid: return "sigmoid";
  case ActivationKind::identity: return "identity";
  }
  return "relu";
}

bool is_polynomial(ActivationKind a)
{ return a == ActivationKind::identity; }

NetworkTemplate::NetworkTemplate(Architecture const &arch)
{
  for (auto const &l : arch.layers()) {
    Layer t;
    t.in_dim = l.source().dim();
    t.out_dim = l.target().dim();
    for (auto const &g : l.generators()) {
      std::vector<double> dense(g.rows() * g.cols());
      for (std::size_t i = 0; i < dense.size(); ++i)
        dense[i] = g.entries()[i].get_d();
      t.generators.push_back(std::move(dense));
    }
    if (l.bias().is_complete())
      t.bias_parts = l.bias().partition.blocks();
    layers.push_back(std::move(t));
  }
}

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix2(std::uint64_t a, std::uint64_t b)
{ return splitmix(a ^ splitmix(b + 0x632be59bd9b4e019ULL)); }

double unit_open(std::uint64_t bits)
{
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double activate(ActivationKind a, double x)
{
  switch (a) {
  case ActivationKind::relu: return x > 0 ? x : 0.0;
  case ActivationKind::tanh: return std::tanh(x);
  case ActivationKind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
  case ActivationKind::identity: return x;
  }
  return x;
}

} // namespace

double keyed_normal(std::uint64_t seed, std::uint64_t layer,
                    std::uint64_t index)
{
  auto const key = mix2(mix2(seed, layer), index);
  double const u1 = unit_open(splitmix(key));
  double const u2 = unit_open(splitmix(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

FloatNetwork sample_network(NetworkTemplate const &tmpl,
                            ActivationKind activation, std::uint64_t seed,
                            double scale)
{
  FloatNetwork net;
  net.activation = activation;
  for (std::size_t l = 0; l < tmpl.layers.size(); ++l) {
    auto const &t = tmpl.layers[l];
    FloatNetwork::Layer layer;
    layer.in_dim = t.in_dim;
    layer.out_dim = t.out_dim;
    layer.weights.assign(t.in_dim * t.out_dim, 0.0);
    layer.bias.assign(t.out_dim, 0.0);
    std::uint64_t index = 0;
    for (auto const &g : t.generators) {
      double const c = scale * keyed_normal(seed, l, index++);
      layer.linear_coeffs.push_back(c);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0.0)
          layer.weights[i] += c * g[i];
    }
    for (auto const &part : t.bias_parts) {
      double const c = scale * keyed_normal(seed, l, index++);
      layer.bias_coeffs.push_back(c);
      for (auto x : part)
        layer.bias[x] += c;
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

FloatNetwork sample_network(Architecture const &arch,
                            ActivationKind activation, std::uint64_t seed,
                            double scale)
{ return sample_network(NetworkTemplate(arch), activation, seed, scale); }

std::vector<double> evaluate(FloatNetwork const &net,
                             std::span<double const> input)
{
  if (net.layers.empty())
    throw ValidationError("network has no layers");
  if (input.size() != net.layers.front().in_dim)
    throw DimensionError("input has length " + std::to_string(input.size()) +
                         ", expected " +
                         std::to_string(net.layers.front().in_dim));
  std::vector<double> cur(input.begin(), input.end()), next;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto const &layer = net.layers[l];
    next.assign(layer.bias.begin(), layer.bias.end());
    for (std::size_t r = 0; r < layer.out_dim; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < layer.in_dim; ++c)
        acc += layer.weights[r * layer.in_dim + c] * cur[c];
      next[r] += acc;
    }
    if (l + 1 < net.layers.size())
      for (auto &x : next)
        x = activate(net.activation, x);
    cur.swap(next);
  }
  return cur;
}

nlohmann::json OracleVerdict::to_json() const
{
  nlohmann::json j{{"verdict", to_string(kind)},
                   {"gap", gap},
                   {"evaluated", evaluated},
                   {"discarded", discarded},
                   {"gray", gray}};
  if (kind == Kind::separated) {
    j["witness_seed"] = witness_seed;
    j["witness_scale"] = witness_scale;
  }
  return j;
}

std::string to_string(OracleVerdict::Kind k)
{
  switch (k) {
  case OracleVerdict::Kind::separated: return "separated";
  case OracleVerdict::Kind::likely_identified: return "likely_identified";
  case OracleVerdict::Kind::undecided: return "undecided";
  }
  return "undecided";
}

namespace {

constexpr std::size_t batch_size = 64;

// Gap of one sampled network; NaN marks a discarded sample.
double sample_gap(NetworkTemplate const &tmpl, ActivationKind activation,
                  std::uint64_t seed, double scale,
                  std::span<double const> alpha, std::span<double const> beta)
{
  auto const net = sample_network(tmpl, activation, seed, scale);
  auto const fa = evaluate(net, alpha);
  auto const fb = evaluate(net, beta);
  double gap = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (!std::isfinite(fa[i]) || !std::isfinite(fb[i]))
      return std::nan("");
    gap = std::max(gap, std::abs(fa[i] - fb[i]));
  }
  return gap;
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t scale_index,
                          std::uint64_t stream, std::uint64_t sample)
{ return mix2(mix2(mix2(seed, scale_index), stream), sample); }

} // namespace

OracleVerdict mc_separation(NetworkTemplate const &tmpl,
                            ActivationKind activation,
                            std::span<double const> alpha,
                            std::span<double const> beta,
                            OracleOptions const &options)
{
  if (alpha.size() != tmpl.input_dim() || beta.size() != tmpl.input_dim())
    throw DimensionError("input vectors must have length " +
                         std::to_string(tmpl.input_dim()));
  if (!(options.tol_id >= 0) || !(options.tol_sep >= options.tol_id))
    throw ConfigError("tolerances must satisfy 0 <= tol_id <= tol_sep");
  if (options.scales.empty())
    throw ConfigError("scale ladder is empty");

  OracleVerdict verdict;
  bool const parallel = options.exec == kernels::Exec::parallel;

  for (std::size_t si = 0; si < options.scales.size(); ++si) {
    double const scale = options.scales[si];
    for (std::size_t start = 0; start < options.samples; start += batch_size) {
      std::size_t const count = std::min(batch_size, options.samples - start);
      std::vector<double> gaps(count);
      auto const n = static_cast<long>(count);
#pragma omp parallel for schedule(static) if (parallel && kernels::may_fork())
      for (long k = 0; k < n; ++k) {
        auto const s = start + static_cast<std::size_t>(k);
        gaps[static_cast<std::size_t>(k)] =
            sample_gap(tmpl, activation, sample_seed(options.seed, si, 0, s),
                       scale, alpha, beta);
      }

      for (std::size_t k = 0; k < count; ++k) {
        auto const s = start + k;
        double gap = gaps[k];
        ++verdict.evaluated;
        if (std::isnan(gap)) {
          ++verdict.discarded;
          continue;
        }
        std::uint64_t seed = sample_seed(options.seed, si, 0, s);
        // Gray zone: redraw until the gap leaves (tol_id, tol_sep].
        for (std::size_t r = 1; gap > options.tol_id &&
                                gap <= options.tol_sep &&
                                r <= options.gray_retries;
             ++r) {
          seed = sample_seed(options.seed, si, r, s);
          gap = sample_gap(tmpl, activation, seed, scale, alpha, beta);
          ++verdict.evaluated;
          if (std::isnan(gap)) {
            ++verdict.discarded;
            gap = 0.0;
            break;
          }
        }
        if (gap > options.tol_sep) {
          verdict.kind = OracleVerdict::Kind::separated;
          verdict.gap = gap;
          verdict.witness_seed = seed;
          verdict.witness_scale = scale;
          return verdict;
        }
        if (gap > options.tol_id)
          ++verdict.gray;
        verdict.gap = std::max(verdict.gap, gap);
      }
    }
  }
  if (2 * verdict.discarded > verdict.evaluated)
    throw OracleUnreliableError(
        std::to_string(verdict.discarded) + " of " +
        std::to_string(verdict.evaluated) +
        " samples produced non-finite outputs");
  verdict.kind = verdict.gray > 0 ? OracleVerdict::Kind::undecided
                                  : OracleVerdict::Kind::likely_identified;
  return verdict;
}

OracleVerdict mc_separation(Architecture const &arch, ActivationKind activation,
                            std::span<double const> alpha,
                            std::span<double const> beta,
                            OracleOptions const &options)
{ return mc_separation(NetworkTemplate(arch), activation, alpha, beta, options); }

void Graph::add_edge(std::size_t u, std::size_t v)
{
  if (u >= n || v >= n)
    throw ValidationError("edge endpoint outside the node range");
  if (u == v)
    throw ValidationError("self-loops are not supported");
  adj[u * n + v] = 1;
  adj[v * n + u] = 1;
}

std::vector<double> Graph::flattened() const
{ return std::vector<double>(adj.begin(), adj.end()); }

Graph parse_edge_list(std::string_view text)
{
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t nodes = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first))
      continue;
    auto fail = [&] {
      throw ConfigError("edge list line " + std::to_string(lineno) +
                        ": expected 'u v'");
    };
    if (first == "nodes") {
      long count = -1;
      if (!(fields >> count) || count < 0)
        fail();
      nodes = std::max(nodes, static_cast<std::size_t>(count));
      continue;
    }
    long u = -1, v = -1;
    try {
      std::size_t used = 0;
      u = std::stol(first, &used);
      if (used != first.size())
        fail();
    } catch (std::logic_error const &) {
      fail();
    }
    std::string extra;
    if (!(fields >> v) || u < 0 || v < 0 || (fields >> extra))
      fail();
    edges.emplace_back(u, v);
    nodes = std::max(nodes, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  Graph g(nodes);
  for (auto [u, v] : edges)
    g.add_edge(u, v);
  return g;
}

namespace {

std::uint64_t hash_sequence(std::uint64_t head,
                            std::vector<std::uint64_t> const &items)
{
  std::uint64_t h = splitmix(head ^ 0x2545f4914f6cdd1dULL);
  for (auto x : items)
    h = mix2(h, x);
  return mix2(h, items.size());
}

} // namespace

std::vector<std::uint64_t> wl_colors(Graph const &g, int k,
                                     std::size_t rounds,
                                     std::size_t node_limit)
{
  if (k != 1 && k != 2)
    throw ConfigError("WL dimension must be 1 or 2");
  if (g.n > node_limit)
    throw ResourceError("graph with " + std::to_string(g.n) +
                        " nodes exceeds the WL node limit of " +
                        std::to_string(node_limit));
  std::size_t const n = g.n;
  if (rounds == 0)
    rounds = k == 1 ? n : n * n;

  std::vector<std::uint64_t> colors, next;
  std::vector<std::uint64_t> items;
  if (k == 1) {
    colors.assign(n, splitmix(1));
    for (std::size_t r = 0; r < rounds; ++r) {
      next.resize(n);
      for (std::size_t v = 0; v < n; ++v) {
        items.clear();
        for (std::size_t u = 0; u < n; ++u)
          if (g.edge(v, u))
            items.push_back(colors[u]);
        std::sort(items.begin(), items.end());
        next[v] = hash_sequence(colors[v], items);
      }
      colors.swap(next);
    }
  } else {
    colors.resize(n * n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        colors[u * n + v] =
            splitmix(u == v ? 3 : (g.edge(u, v) ? 2 : 1));
    for (std::size_t r = 0; r < rounds; ++r) {
      next.resize(n * n);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          items.clear();
          for (std::size_t w = 0; w < n; ++w)
            items.push_back(mix2(colors[u * n + w], colors[w * n + v]));
          std::sort(items.begin(), items.end());
          next[u * n + v] = hash_sequence(colors[u * n + v], items);
        }
      colors.swap(next);
    }
  }
  std::sort(colors.begin(), colors.end());
  return colors;
}

bool wl_distinguishes(Graph const &a, Graph const &b, int k,
                      std::size_t rounds)
{
  if (a.n != b.n)
    return true;
  if (rounds == 0)
    rounds = k == 1 ? a.n : a.n * a.n;
  return wl_colors(a, k, rounds) != wl_colors(b, k, rounds);
}

} // namespace eqsep
