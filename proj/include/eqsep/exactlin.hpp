#ifndef EQSEP_EXACTLIN_HPP
#define EQSEP_EXACTLIN_HPP

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

namespace eqsep {

/// Exact rational scalar; GMP keeps every value in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using RatVector = std::vector<Rational>;

std::string to_string(Rational const &q);
Rational parse_rational(std::string_view text);

/// Dense row-major matrix of rationals.
class RatMatrix
{
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_ints(std::vector<std::vector<long>> const &rows);
  static RatMatrix from_rows(std::vector<RatVector> const &rows,
                             std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Rational &operator()(std::size_t r, std::size_t c)
  { return entries_[r * cols_ + c]; }
  Rational const &operator()(std::size_t r, std::size_t c) const
  { return entries_[r * cols_ + c]; }

  std::span<Rational const> row(std::size_t r) const
  { return {entries_.data() + r * cols_, cols_}; }
  std::span<Rational> row(std::size_t r)
  { return {entries_.data() + r * cols_, cols_}; }

  std::vector<Rational> const &entries() const noexcept { return entries_; }

  bool is_zero() const;
  RatMatrix transpose() const;
  RatVector apply(std::span<Rational const> v) const;

  /// Appends one row; the matrix must be empty or have `v.size()` columns.
  void push_row(std::span<Rational const> v);

  friend bool operator==(RatMatrix const &, RatMatrix const &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

RatMatrix operator*(RatMatrix const &a, RatMatrix const &b);
RatMatrix operator-(RatMatrix const &a, RatMatrix const &b);
RatMatrix vstack(RatMatrix const &top, RatMatrix const &bottom);
RatMatrix hstack(RatMatrix const &left, RatMatrix const &right);
RatMatrix block_diagonal(RatMatrix const &a, RatMatrix const &b);

/// Lexicographic comparison of equally shaped matrices by value.
std::strong_ordering lex_compare(RatMatrix const &a, RatMatrix const &b);

struct RrefResult
{
  RatMatrix matrix;                 // zero rows dropped
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column per row
};

/// Reduced row-echelon form by Gauss-Jordan elimination. Row updates only
/// touch the nonzero columns of the pivot row, which keeps the sparse
/// commutation systems cheap.
RrefResult rref(RatMatrix const &m);
std::size_t rank(RatMatrix const &m);

/// A linear subspace of Q^n stored by its canonical constraint matrix
/// (RREF, no zero rows). The spanning basis is derived on first use and
/// cached; instances are immutable and safe to share between threads.
class Subspace
{
public:
  Subspace();

  static Subspace full(std::size_t ambient);
  static Subspace zero(std::size_t ambient);
  static Subspace from_constraints(RatMatrix const &constraints,
                                   std::size_t ambient);
  static Subspace span(std::size_t ambient, RatMatrix const &vectors);

  std::size_t ambient_dim() const noexcept;
  std::size_t dim() const noexcept;
  RatMatrix const &constraints() const noexcept;
  std::vector<std::size_t> const &pivots() const noexcept;

  /// Rows form a basis; built from the free columns of the RREF.
  RatMatrix const &basis() const;

  bool contains_vector(std::span<Rational const> v) const;

  friend bool operator==(Subspace const &a, Subspace const &b);

private:
  struct Impl;
  explicit Subspace(std::shared_ptr<Impl const> impl);
  std::shared_ptr<Impl const> impl_;
};

Subspace nullspace(RatMatrix const &m);
Subspace intersect(Subspace const &s, Subspace const &t);
bool contains(Subspace const &s, Subspace const &t);
/// Image under a linear map given as a square matrix acting on columns.
Subspace image(Subspace const &s, RatMatrix const &map);

/// Canonical total order: larger dimension first, then lexicographic RREF.
std::strong_ordering canonical_compare(Subspace const &a, Subspace const &b);

/// A finite union of subspaces in absorbed canonical form. No member is
/// contained in another and members follow `canonical_compare`. Zero
/// members is the empty set.
class SubspaceUnion
{
public:
  SubspaceUnion() = default;
  explicit SubspaceUnion(std::size_t ambient) : ambient_(ambient) {}

  static SubspaceUnion normalize(std::size_t ambient,
                                 std::vector<Subspace> members);
  static SubspaceUnion full(std::size_t ambient);
  static SubspaceUnion single(Subspace s);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::vector<Subspace> const &members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool is_empty() const noexcept { return members_.empty(); }

  friend bool operator==(SubspaceUnion const &,
                         SubspaceUnion const &) = default;

private:
  std::size_t ambient_ = 0;
  std::vector<Subspace> members_;
};

SubspaceUnion intersect(SubspaceUnion const &u, SubspaceUnion const &v);
SubspaceUnion unite(SubspaceUnion const &u, SubspaceUnion const &v);
bool contains(SubspaceUnion const &u, Subspace const &s);
bool is_subset(SubspaceUnion const &u, SubspaceUnion const &v);
bool equivalent(SubspaceUnion const &u, SubspaceUnion const &v);
bool is_member(SubspaceUnion const &u, std::span<Rational const> v);
SubspaceUnion image(SubspaceUnion const &u, RatMatrix const &map);

nlohmann::json to_json(Subspace const &s);
nlohmann::json to_json(SubspaceUnion const &u);
Subspace subspace_from_json(nlohmann::json const &j, std::size_t ambient);
SubspaceUnion union_from_json(nlohmann::json const &j);

} // namespace eqsep

#endif // EQSEP_EXACTLIN_HPP
