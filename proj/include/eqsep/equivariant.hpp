#ifndef EQSEP_EQUIVARIANT_HPP
#define EQSEP_EQUIVARIANT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eqsep/exactlin.hpp"
#include "eqsep/groups.hpp"
#include "eqsep/partitions.hpp"

namespace eqsep {

/// Permutation representation R^X of a G-set X: g(e_x) = e_{gx}.
class PermRep
{
public:
  explicit PermRep(GSet gset);

  GSet const &gset() const noexcept { return gset_; }
  GroupPtr const &group() const noexcept { return gset_.group(); }
  std::size_t dim() const noexcept { return gset_.size(); }

  /// 0/1 matrices for `group()->generators()`, in the same order.
  std::vector<RatMatrix> const &generator_matrices() const noexcept
  { return matrices_; }
  RatMatrix matrix(std::size_t element) const;

  bool same_as(PermRep const &other) const { return gset_.same_as(other.gset_); }

private:
  GSet gset_;
  std::vector<RatMatrix> matrices_;
};

PermRep regular_rep(GroupPtr const &g);
PermRep natural_rep(GroupPtr const &g);
PermRep trivial_rep(GroupPtr const &g);
PermRep coset_rep(Subgroup const &h);
PermRep sum_rep(PermRep const &v, PermRep const &w);
/// V ⊗ R^f realized as f stacked copies; copy c occupies [c·dim, (c+1)·dim).
PermRep mult_rep(PermRep const &v, std::size_t f);
/// R^{[n]^k} under the natural action on the group's ground set.
PermRep power_rep(GroupPtr const &g, std::size_t k);

/// One indicator vector 1_{X_i} per orbit, in orbit order.
std::vector<RatVector> invariant_basis(PermRep const &rep);

/// Spanning set of Hom_G(source, target); matrices are target.dim × source.dim.
struct EquivariantBasis
{
  PermRep source;
  PermRep target;
  std::vector<RatMatrix> generators;
};

bool is_equivariant(RatMatrix const &phi, PermRep const &source,
                    PermRep const &target);

/// Rank of the generators flattened into row vectors.
std::size_t span_rank(std::vector<RatMatrix> const &mats);

/// Hom_G(v, w) as the null space of φ·ρ_v(g) = ρ_w(g)·φ over the group's
/// generators, reshaped back into matrices.
EquivariantBasis commutant_basis(PermRep const &v, PermRep const &w);

/// One map per double coset HgK, from R^{G/K} to R^{G/H}, with entry 1/|K|
/// at (sH, kK) when sH ⊆ kKg⁻¹H.
EquivariantBasis double_coset_basis(Subgroup const &k, Subgroup const &h);

/// Affine bias part of a layer: either span{1_P : P ∈ partition} or zero.
struct BiasSpec
{
  enum class Kind { complete, null };

  Kind kind = Kind::null;
  SetPartition partition;

  static BiasSpec complete(SetPartition p)
  { return {Kind::complete, std::move(p)}; }
  static BiasSpec null() { return {}; }

  bool is_complete() const noexcept { return kind == Kind::complete; }
  std::size_t part_count() const noexcept
  { return is_complete() ? partition.block_count() : 0; }
};

BiasSpec orbit_bias(PermRep const &target);

/// A space of equivariant affine maps: span of linear generators plus the
/// bias span. Validated on construction.
class LayerSpace
{
public:
  LayerSpace(PermRep source, PermRep target,
             std::vector<RatMatrix> generators, BiasSpec bias);

  PermRep const &source() const noexcept { return source_; }
  PermRep const &target() const noexcept { return target_; }
  std::vector<RatMatrix> const &generators() const noexcept
  { return generators_; }
  BiasSpec const &bias() const noexcept { return bias_; }

  /// True when the identity map lies in the linear span.
  bool spans_identity() const;

private:
  PermRep source_;
  PermRep target_;
  std::vector<RatMatrix> generators_;
  BiasSpec bias_;
};

LayerSpace full_layer(PermRep const &v, PermRep const &w);
LayerSpace circular_layer(std::size_t n, std::size_t k);
/// Default cap on n^k · multiplicity for IGN layers.
inline constexpr std::size_t default_ign_size_limit = 4096;
LayerSpace ign_layer(std::size_t n, std::size_t order, std::size_t mult_in,
                     std::size_t mult_out,
                     std::size_t size_limit = default_ign_size_limit);
LayerSpace double_coset_layer(Subgroup const &k, Subgroup const &h);

/// Circulant C(e_t): ones where row - col ≡ t (mod n).
RatMatrix circulant_unit(std::size_t n, std::size_t t);

/// Validated layer sequence N(M_1, ..., M_d). The activation tag is carried
/// for the empirical module only; the symbolic engine never reads it.
class Architecture
{
public:
  explicit Architecture(std::vector<LayerSpace> layers,
                        std::string activation_tag = "relu");

  std::vector<LayerSpace> const &layers() const noexcept { return layers_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  PermRep const &input() const { return layers_.front().source(); }
  PermRep const &output() const { return layers_.back().target(); }
  GroupPtr const &group() const { return input().group(); }
  std::string const &activation_tag() const noexcept { return activation_; }

  /// Canonical JSON of the structure (group, reps, generators, biases).
  nlohmann::json canonical_json() const;
  /// 64-bit FNV-1a of `canonical_json().dump()`, as 16 hex digits.
  std::string digest() const;

private:
  std::vector<LayerSpace> layers_;
  std::string activation_;
};

/// Full layers between consecutive representations V_0 → ... → V_d.
Architecture full_architecture(std::vector<PermRep> const &reps,
                               std::string activation_tag = "relu");

std::string fnv1a_hex(std::string const &bytes);

} // namespace eqsep

#endif // EQSEP_EQUIVARIANT_HPP
