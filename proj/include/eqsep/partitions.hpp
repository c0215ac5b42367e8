#ifndef EQSEP_PARTITIONS_HPP
#define EQSEP_PARTITIONS_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "eqsep/exactlin.hpp"
#include "eqsep/groups.hpp"

namespace eqsep {

/// Partition of a finite ground set of point indices. Canonical form:
/// elements sorted within blocks, blocks sorted by their minimum.
class SetPartition
{
public:
  SetPartition() = default;
  SetPartition(std::vector<Index> ground,
               std::vector<std::vector<Index>> blocks);

  static SetPartition singletons(std::vector<Index> ground);
  static SetPartition single_block(std::vector<Index> ground);
  /// Ground {0, ..., n-1}.
  static SetPartition over_range(std::size_t n,
                                 std::vector<std::vector<Index>> blocks);

  std::vector<Index> const &ground() const noexcept { return ground_; }
  std::vector<std::vector<Index>> const &blocks() const noexcept
  { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  friend bool operator==(SetPartition const &,
                         SetPartition const &) = default;
  friend auto operator<=>(SetPartition const &,
                          SetPartition const &) = default;

private:
  std::vector<Index> ground_;
  std::vector<std::vector<Index>> blocks_;
};

/// True iff every block of `finer` lies inside a block of `coarser`.
bool refines(SetPartition const &finer, SetPartition const &coarser);

/// Each block Y becomes Y ⊔ Y', where y' = y + |ground|.
SetPartition duplicate_partition(SetPartition const &p);

inline constexpr std::size_t default_enumeration_limit = 10;
inline constexpr std::size_t default_max_block_size = 12;

/// Visits every partition of `ground` exactly once, in restricted-growth
/// string order. Throws ResourceError above `limit` points.
void for_each_partition(std::vector<Index> const &ground,
                        std::function<void(SetPartition const &)> const &visit,
                        std::size_t limit = default_enumeration_limit);
std::vector<SetPartition> all_partitions(
    std::vector<Index> const &ground,
    std::size_t limit = default_enumeration_limit);

/// The finest partitions Q ≤ base whose blocks all have coefficient sum
/// zero. `coeffs[i]` belongs to the i-th point of `base.ground()` in sorted
/// order. Returns an empty list iff no such Q exists.
///
/// The family factorizes over the blocks of `base`: within a block, zero
/// coefficients are singletons in every minimal partition, and the nonzero
/// points split into minimal zero-sum sets (no proper nonempty zero-sum
/// subset). The result is the cross product of the per-block families.
std::vector<SetPartition> zero_sum_partitions(
    std::span<Rational const> coeffs, SetPartition const &base,
    std::size_t max_block_size = default_max_block_size);

} // namespace eqsep

#endif // EQSEP_PARTITIONS_HPP
