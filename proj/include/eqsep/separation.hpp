#ifndef EQSEP_SEPARATION_HPP
#define EQSEP_SEPARATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eqsep/equivariant.hpp"
#include "eqsep/exactlin.hpp"
#include "eqsep/kernels.hpp"
#include "eqsep/partitions.hpp"

namespace eqsep {

/// Intermediate twin layer (α, β) ↦ (φα, φβ) + Σ y_P 1_{P ⊔ P'}.
struct TwinLayer
{
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<RatMatrix> generators;
  SetPartition bias;
};

/// N(M̄_1, ..., M̄_{d-1}, M'_d) over V_0 ⊕ V_0: complete-bias twin layers
/// followed by the null-bias differences [A | -A].
struct TwinArchitecture
{
  std::size_t input_dim = 0;  // 2 · dim V_0
  std::vector<TwinLayer> layers;
  std::vector<RatMatrix> final_generators;
};

TwinArchitecture twin_transform(Architecture const &arch);

struct EngineOptions
{
  std::size_t max_union_members = 10'000;
  std::size_t max_block_size = default_max_block_size;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Deterministic counters; every slot of the memo table is computed once.
struct EngineStats
{
  std::uint64_t nodes = 0;              // recursive subproblems evaluated
  std::uint64_t memo_entries = 0;
  std::uint64_t memo_lookups = 0;
  std::uint64_t coefficient_vectors = 0;  // distinct after scaling
  std::uint64_t partitions = 0;         // minimal zero-sum partitions used
  std::uint64_t max_union_size = 0;

  std::uint64_t memo_hits() const
  { return memo_lookups - memo_entries; }
  nlohmann::json to_json() const;
};

/// Zero locus of a twin network family by the depth recursion
///
///   I = ⋂_{h,k} ⋃_{Q ∈ Ψ_{h,k}} ⋂_{P ∈ Q, i,j ∈ P} I(prefix, (M_last)_{ij})
///
/// where Ψ_{h,k} holds the minimal zero-sum refinements of the last bias
/// partition for row k of final generator h. Subproblems are memoized on
/// (prefix depth, {i, j}); inside a block only the star pairs (min P, j)
/// are visited since the pair equalities are transitive.
class ZeroLocusEngine
{
public:
  ZeroLocusEngine(TwinArchitecture twin, EngineOptions options = {});
  ~ZeroLocusEngine();
  ZeroLocusEngine(ZeroLocusEngine const &) = delete;
  ZeroLocusEngine &operator=(ZeroLocusEngine const &) = delete;

  SubspaceUnion run();

  /// I(M_1, ..., M_{depth-1}, (M_depth)_{ij}); depth counts twin layers
  /// from 1.
  SubspaceUnion pair_locus(std::size_t depth, Index i, Index j);

  /// Same subproblem evaluated without consulting the memo table.
  SubspaceUnion pair_locus_uncached(std::size_t depth, Index i, Index j);

  /// Memo keys currently stored, as (depth, i, j) with i < j.
  std::vector<std::tuple<std::size_t, Index, Index>> memo_keys() const;

  EngineStats stats() const;

private:
  struct State;
  std::unique_ptr<State> state_;
};

/// One-shot zero locus of a twin family.
SubspaceUnion zero_locus(TwinArchitecture const &twin,
                         EngineOptions const &options = {},
                         EngineStats *stats = nullptr);

struct IdentificationRelation
{
  SubspaceUnion relation;       // over V_0 ⊕ V_0
  std::size_t input_dim = 0;    // dim V_0
  std::string architecture_digest;
  EngineStats stats;
  double wall_ms = 0;

  nlohmann::json to_json() const;
};

IdentificationRelation rho(Architecture const &arch,
                           EngineOptions const &options = {});

/// {(β, ρ(h)β)} as the null space of [ρ(h) | -I].
Subspace graph_subspace(RatMatrix const &map);

/// ⋃_{h ∈ H} graph(h) over V ⊕ V.
SubspaceUnion h_orbit_relation(Subgroup const &h, PermRep const &rep);

inline constexpr std::size_t default_permutation_relation_limit = 6;
/// ⋃_{σ ∈ S_n} graph(σ) in ambient 2n.
SubspaceUnion permutation_relation(
    std::size_t n, std::size_t limit = default_permutation_relation_limit);

bool identifies(IdentificationRelation const &rel,
                std::span<Rational const> alpha,
                std::span<Rational const> beta);

enum class Comparison { equal, strict_subset, strict_superset, incomparable };

std::string to_string(Comparison c);
Comparison compare(SubspaceUnion const &a, SubspaceUnion const &b);
Comparison compare(IdentificationRelation const &a,
                   IdentificationRelation const &b);

// Relation-level invariants; each returns true when the property holds.

bool is_reflexive(SubspaceUnion const &rel);
bool is_swap_symmetric(SubspaceUnion const &rel);
bool is_diagonally_equivariant(SubspaceUnion const &rel, PermRep const &rep);
bool is_transitive_sampled(SubspaceUnion const &rel, std::mt19937_64 &rng,
                           std::size_t samples = 100);

/// Random rational vector of a subspace (small integer combinations of the
/// basis).
RatVector random_vector(Subspace const &s, std::mt19937_64 &rng,
                        long range = 5);

struct StabilizationResult
{
  std::optional<std::size_t> threshold;   // smallest R with ρ_R = ρ_{R+1}
  bool monotone = true;                   // ρ_{m+1} ⊆ ρ_m throughout
  std::vector<IdentificationRelation> relations;  // index m-1 ↔ m copies
};

/// Repeats layer `repeat_index` m = 1..max_reps times and reports where the
/// relation chain stops shrinking. The layer must be an endomorphism space
/// containing the identity.
StabilizationResult depth_stabilization_threshold(
    Architecture const &arch, std::size_t repeat_index, std::size_t max_reps,
    EngineOptions const &options = {});

/// ρ with hidden V_i equals ρ with V_i ⊗ R^f (full layers throughout).
bool verify_width_invariance(std::vector<PermRep> const &reps,
                             std::size_t layer_index, std::size_t mult,
                             EngineOptions const &options = {});

/// ρ(... V' ⊕ V'' ...) = ρ(... V' ...) ∩ ρ(... V'' ...).
bool verify_split_law(std::vector<PermRep> const &reps,
                      std::size_t layer_index, PermRep const &first,
                      PermRep const &second,
                      EngineOptions const &options = {});

struct HierarchyResult
{
  Comparison comparison = Comparison::incomparable;
  IdentificationRelation finer;    // hidden R^{G/K}
  IdentificationRelation coarser;  // hidden R^{G/H}
  bool holds() const
  {
    return comparison == Comparison::equal ||
           comparison == Comparison::strict_subset;
  }
};

/// Places R^{G/K} and then R^{G/H} at `reps[slot]` and checks
/// ρ(G/K) ⊆ ρ(G/H). Requires K ≤ H.
HierarchyResult verify_subgroup_hierarchy(Subgroup const &k,
                                          Subgroup const &h,
                                          std::vector<PermRep> reps,
                                          std::size_t slot,
                                          EngineOptions const &options = {});

} // namespace eqsep

#endif // EQSEP_SEPARATION_HPP
