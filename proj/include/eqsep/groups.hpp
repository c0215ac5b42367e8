#ifndef EQSEP_GROUPS_HPP
#define EQSEP_GROUPS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eqsep {

using Index = std::uint32_t;

/// Bijection of {0, ..., n-1} in one-line image notation.
class Permutation
{
public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> images);

  static Permutation identity(std::size_t n);

  std::size_t degree() const noexcept { return images_.size(); }
  Index operator()(Index x) const { return images_[x]; }
  std::vector<Index> const &images() const noexcept { return images_; }

  bool is_identity() const;
  bool is_even() const;
  Permutation inverse() const;

  /// (p * q)(x) = p(q(x)): apply q first.
  friend Permutation operator*(Permutation const &p, Permutation const &q);

  friend auto operator<=>(Permutation const &, Permutation const &) = default;
  friend bool operator==(Permutation const &, Permutation const &) = default;

  std::string str() const;

private:
  std::vector<Index> images_;
};

/// Finite permutation group with elements in lexicographic order, so equal
/// groups built from different generating sets compare equal structurally.
class Group
{
public:
  static std::shared_ptr<Group const>
  generate(std::vector<Permutation> const &gens, std::size_t degree = 0);

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t degree() const noexcept { return degree_; }

  Permutation const &element(std::size_t i) const { return elements_[i]; }
  std::vector<Permutation> const &elements() const noexcept
  { return elements_; }

  std::size_t mul(std::size_t a, std::size_t b) const
  { return mul_[a * order() + b]; }
  std::size_t inverse(std::size_t a) const { return inv_[a]; }
  std::size_t identity() const noexcept { return identity_; }

  /// Element indices of the generators, deduplicated and without identity.
  std::vector<std::size_t> const &generators() const noexcept
  { return gens_; }

  std::optional<std::size_t> index_of(Permutation const &p) const;

  /// Structural equality: same degree and same element set.
  bool same_as(Group const &other) const
  { return degree_ == other.degree_ && elements_ == other.elements_; }

private:
  Group() = default;

  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<std::size_t> mul_;
  std::vector<std::size_t> inv_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> gens_;
};

using GroupPtr = std::shared_ptr<Group const>;

GroupPtr cyclic_group(std::size_t n);
GroupPtr symmetric_group(std::size_t n);
GroupPtr dihedral_group(std::size_t n);
/// Acts on the disjoint union of the factors' ground sets.
GroupPtr direct_product(GroupPtr const &a, GroupPtr const &b);

/// Caps group closure; exceeding it raises ResourceError.
inline constexpr std::size_t max_group_order = 5040;

class Subgroup
{
public:
  /// Validates closure and identity; throws InvalidSubgroupError otherwise.
  Subgroup(GroupPtr parent, std::vector<std::size_t> members);

  static Subgroup trivial(GroupPtr parent);
  static Subgroup full(GroupPtr parent);
  static Subgroup alternating(GroupPtr parent);
  static Subgroup generated(GroupPtr parent,
                            std::vector<Permutation> const &gens);

  GroupPtr const &parent() const noexcept { return parent_; }
  std::vector<std::size_t> const &members() const noexcept
  { return members_; }
  std::size_t order() const noexcept { return members_.size(); }
  bool has(std::size_t g) const { return mask_[g] != 0; }
  bool is_subgroup_of(Subgroup const &other) const;

private:
  GroupPtr parent_;
  std::vector<std::size_t> members_;
  std::vector<char> mask_;
};

/// Left cosets gH. Cosets are ordered by their smallest element, which is
/// also the representative.
struct CosetSpace
{
  GroupPtr parent;
  std::vector<std::vector<std::size_t>> cosets;
  std::vector<std::size_t> representatives;
  std::vector<std::size_t> coset_of;           // element -> coset index
  std::vector<std::vector<Index>> action;      // element -> coset permutation
  std::size_t subgroup_order = 0;
};

CosetSpace cosets(Subgroup const &h);

/// Double cosets HgK of the common parent group.
struct DoubleCosetSpace
{
  GroupPtr parent;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> representatives;
};

DoubleCosetSpace double_cosets(Subgroup const &h, Subgroup const &k);

/// A finite set with a left action of a group. `action[g][x]` is g·x.
class GSet
{
public:
  GSet(GroupPtr group, std::vector<std::vector<Index>> action,
       std::vector<std::string> labels = {});

  GroupPtr const &group() const noexcept { return group_; }
  std::size_t size() const noexcept { return size_; }
  Index act(std::size_t g, Index x) const { return action_[g][x]; }
  std::vector<Index> const &action_of(std::size_t g) const
  { return action_[g]; }
  std::vector<std::string> const &labels() const noexcept { return labels_; }

  /// Orbits sorted by smallest point, points sorted within each orbit.
  std::vector<std::vector<Index>> const &orbits() const noexcept
  { return orbits_; }
  std::vector<Index> const &orbit_of() const noexcept { return orbit_of_; }

  /// Same group and identical action tables.
  bool same_as(GSet const &other) const;

private:
  GroupPtr group_;
  std::size_t size_ = 0;
  std::vector<std::vector<Index>> action_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Index>> orbits_;
  std::vector<Index> orbit_of_;
};

/// Orbit partition by union-find over the generators.
std::vector<std::vector<Index>> orbits(GSet const &x);

GSet natural_gset(GroupPtr const &g);
GSet regular_gset(GroupPtr const &g);
GSet gset_from_cosets(CosetSpace const &cs);
/// g(x, y) = (gx, gy); point (x, y) has index x * |Y| + y.
GSet gset_product(GSet const &x, GSet const &y);
/// Points of x first, then points of y shifted by |X|.
GSet gset_disjoint_union(GSet const &x, GSet const &y);
/// k-fold product of the natural action, indices in base-n order.
GSet gset_power(GroupPtr const &g, std::size_t k);

} // namespace eqsep

#endif // EQSEP_GROUPS_HPP
