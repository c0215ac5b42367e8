#ifndef EQSEP_EMPIRICAL_HPP
#define EQSEP_EMPIRICAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqsep/equivariant.hpp"
#include "eqsep/kernels.hpp"

namespace eqsep {

enum class ActivationKind { relu, tanh, sigmoid, identity };

ActivationKind parse_activation(std::string_view name);
std::string to_string(ActivationKind a);
/// Identity is the only polynomial activation on offer.
bool is_polynomial(ActivationKind a);

/// Floating-point copy of an architecture's generators and bias parts,
/// shared by every network sampled from it.
struct NetworkTemplate
{
  struct Layer
  {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<std::vector<double>> generators;  // row-major out × in
    std::vector<std::vector<Index>> bias_parts;
  };

  std::vector<Layer> layers;

  explicit NetworkTemplate(Architecture const &arch);
  std::size_t input_dim() const { return layers.front().in_dim; }
};

/// A concrete network: per layer, one coefficient per linear generator and
/// one per bias part, collapsed into a dense weight matrix and bias vector.
struct FloatNetwork
{
  struct Layer
  {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> linear_coeffs;
    std::vector<double> bias_coeffs;
    std::vector<double> weights;  // row-major out × in
    std::vector<double> bias;
  };

  std::vector<Layer> layers;
  ActivationKind activation = ActivationKind::relu;
};

/// Standard normal keyed by (seed, layer, index); no shared generator state.
double keyed_normal(std::uint64_t seed, std::uint64_t layer,
                    std::uint64_t index);

FloatNetwork sample_network(NetworkTemplate const &tmpl,
                            ActivationKind activation, std::uint64_t seed,
                            double scale = 1.0);
FloatNetwork sample_network(Architecture const &arch,
                            ActivationKind activation, std::uint64_t seed,
                            double scale = 1.0);

std::vector<double> evaluate(FloatNetwork const &net,
                             std::span<double const> input);

struct OracleOptions
{
  std::size_t samples = 1000;
  double tol_sep = 1e-4;
  double tol_id = 1e-7;
  std::uint64_t seed = 0;
  std::vector<double> scales{0.1, 1.0, 10.0};
  /// Fresh draws spent on each gray-zone sample before giving up on it.
  std::size_t gray_retries = 4;
  kernels::Exec exec = kernels::Exec::parallel;
};

struct OracleVerdict
{
  enum class Kind { separated, likely_identified, undecided };

  Kind kind = Kind::likely_identified;
  double gap = 0;                 // witness gap, or max observed gap
  std::uint64_t witness_seed = 0; // valid when separated
  double witness_scale = 0;       // valid when separated
  std::size_t evaluated = 0;
  std::size_t discarded = 0;
  std::size_t gray = 0;           // gray-zone samples that stayed gray

  bool separated() const { return kind == Kind::separated; }
  nlohmann::json to_json() const;
};

std::string to_string(OracleVerdict::Kind k);

/// Searches for a sampled network with ‖η(α) - η(β)‖_∞ > tol_sep, walking
/// the coefficient scales in order. Gaps in (tol_id, tol_sep] are redrawn;
/// a pair whose gray samples never resolve is reported undecided.
OracleVerdict mc_separation(Architecture const &arch, ActivationKind activation,
                            std::span<double const> alpha,
                            std::span<double const> beta,
                            OracleOptions const &options = {});
OracleVerdict mc_separation(NetworkTemplate const &tmpl,
                            ActivationKind activation,
                            std::span<double const> alpha,
                            std::span<double const> beta,
                            OracleOptions const &options = {});

/// Undirected simple graph as a symmetric 0/1 adjacency matrix.
struct Graph
{
  std::size_t n = 0;
  std::vector<char> adj;  // n × n

  explicit Graph(std::size_t nodes = 0) : n(nodes), adj(nodes * nodes, 0) {}
  void add_edge(std::size_t u, std::size_t v);
  bool edge(std::size_t u, std::size_t v) const { return adj[u * n + v] != 0; }
  /// Adjacency flattened in the order of `power_rep(S_n, 2)`.
  std::vector<double> flattened() const;
};

inline constexpr std::size_t default_wl_node_limit = 64;

/// Edge list text: one `u v` pair per line, `#` comments, optional leading
/// `nodes N` line for isolated vertices.
Graph parse_edge_list(std::string_view text);

/// Color multiset after exactly `rounds` refinement rounds (0 selects n^k).
/// k = 1 refines vertices by neighbor colors; k = 2 refines ordered pairs
/// by c'(u,v) = mix(c(u,v), {{(c(u,w), c(w,v)) : w}}). Colors are 64-bit
/// mixes, so two runs are comparable only at equal round counts.
std::vector<std::uint64_t> wl_colors(Graph const &g, int k,
                                     std::size_t rounds = 0,
                                     std::size_t node_limit =
                                         default_wl_node_limit);

/// Graphs of different order are always distinguished; otherwise both run
/// for the same number of rounds and the multisets are compared.
bool wl_distinguishes(Graph const &a, Graph const &b, int k,
                      std::size_t rounds = 0);

} // namespace eqsep

#endif // EQSEP_EMPIRICAL_HPP
