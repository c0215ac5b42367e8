#include "eqsep/exactlin.hpp"

#include <algorithm>
#include <mutex>

#include "eqsep/errors.hpp"
#include "eqsep/kernels.hpp"

namespace eqsep {

std::string to_string(Rational const &q)
{ return q.get_str(); }

Rational parse_rational(std::string_view text)
{
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty())
    throw ConfigError("empty rational literal");
  if (s.front() == '+')
    s.erase(s.begin());

  auto slash = s.find('/');
  auto valid_int = [](std::string const &t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i == t.size())
      return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  if (slash == std::string::npos) {
    if (!valid_int(s))
      throw ConfigError("invalid rational literal '" + std::string(text) + "'");
    return Rational(mpz_class(s));
  }
  auto num = s.substr(0, slash);
  auto den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den))
    throw ConfigError("invalid rational literal '" + std::string(text) + "'");
  mpz_class d(den);
  if (d == 0)
    throw ConfigError("zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
: rows_(rows), cols_(cols), entries_(rows * cols)
{}

RatMatrix RatMatrix::identity(std::size_t n)
{
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_ints(std::vector<std::vector<long>> const &rows)
{
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw DimensionError("ragged integer matrix");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix RatMatrix::from_rows(std::vector<RatVector> const &rows,
                               std::size_t cols)
{
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw DimensionError("row length does not match column count");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

bool RatMatrix::is_zero() const
{
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Rational const &q) { return sgn(q) == 0; });
}

RatMatrix RatMatrix::transpose() const
{
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

RatVector RatMatrix::apply(std::span<Rational const> v) const
{
  if (v.size() != cols_)
    throw DimensionError("matrix-vector size mismatch");
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn((*this)(r, c)) != 0 && sgn(v[c]) != 0)
        acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

void RatMatrix::push_row(std::span<Rational const> v)
{
  if (rows_ == 0 && cols_ == 0)
    cols_ = v.size();
  if (v.size() != cols_)
    throw DimensionError("pushed row has wrong length");
  entries_.insert(entries_.end(), v.begin(), v.end());
  ++rows_;
}

RatMatrix operator*(RatMatrix const &a, RatMatrix const &b)
{
  if (a.cols() != b.rows())
    throw DimensionError("matrix product size mismatch");
  RatMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0)
          out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RatMatrix operator-(RatMatrix const &a, RatMatrix const &b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference size mismatch");
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(r, c) = a(r, c) - b(r, c);
  return out;
}

RatMatrix vstack(RatMatrix const &top, RatMatrix const &bottom)
{
  if (top.rows() == 0)
    return bottom;
  if (bottom.rows() == 0)
    return top;
  if (top.cols() != bottom.cols())
    throw DimensionError("vstack column mismatch");
  RatMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    std::copy(top.row(r).begin(), top.row(r).end(), out.row(r).begin());
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    std::copy(bottom.row(r).begin(), bottom.row(r).end(),
              out.row(top.rows() + r).begin());
  return out;
}

RatMatrix hstack(RatMatrix const &left, RatMatrix const &right)
{
  if (left.rows() != right.rows())
    throw DimensionError("hstack row mismatch");
  RatMatrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    std::copy(left.row(r).begin(), left.row(r).end(), out.row(r).begin());
    std::copy(right.row(r).begin(), right.row(r).end(),
              out.row(r).begin() + static_cast<long>(left.cols()));
  }
  return out;
}

RatMatrix block_diagonal(RatMatrix const &a, RatMatrix const &b)
{
  RatMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      out(a.rows() + r, a.cols() + c) = b(r, c);
  return out;
}

std::strong_ordering lex_compare(RatMatrix const &a, RatMatrix const &b)
{
  if (auto c = a.rows() <=> b.rows(); c != 0)
    return c;
  if (auto c = a.cols() <=> b.cols(); c != 0)
    return c;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    int c = cmp(a.entries()[i], b.entries()[i]);
    if (c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

RrefResult rref(RatMatrix const &m)
{
  std::size_t const rows = m.rows(), cols = m.cols();
  std::vector<RatVector> work(rows);
  for (std::size_t r = 0; r < rows; ++r)
    work[r].assign(m.row(r).begin(), m.row(r).end());

  RrefResult res;
  std::size_t lead = 0;
  std::vector<std::size_t> nz;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t p = lead;
    while (p < rows && sgn(work[p][c]) == 0)
      ++p;
    if (p == rows)
      continue;
    std::swap(work[p], work[lead]);

    auto &prow = work[lead];
    if (prow[c] != 1) {
      Rational inv = 1 / prow[c];
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(prow[j]) != 0)
          prow[j] *= inv;
    }
    nz.clear();
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(prow[j]) != 0)
        nz.push_back(j);

    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || sgn(work[r][c]) == 0)
        continue;
      Rational f = work[r][c];
      for (std::size_t j : nz)
        work[r][j] -= f * prow[j];
    }
    res.pivots.push_back(c);
    ++lead;
  }

  res.rank = lead;
  res.matrix = RatMatrix(lead, cols);
  for (std::size_t r = 0; r < lead; ++r)
    std::move(work[r].begin(), work[r].end(), res.matrix.row(r).begin());
  return res;
}

std::size_t rank(RatMatrix const &m)
{ return rref(m).rank; }

// ----------------------------------------------------------------- Subspace

struct Subspace::Impl
{
  std::size_t ambient = 0;
  RatMatrix constraints;
  std::vector<std::size_t> pivots;

  mutable std::once_flag basis_once;
  mutable RatMatrix basis;
};

Subspace::Subspace()
: Subspace(Subspace::full(0))
{}

Subspace::Subspace(std::shared_ptr<Impl const> impl)
: impl_(std::move(impl))
{}

Subspace Subspace::full(std::size_t ambient)
{
  auto impl = std::make_shared<Impl>();
  impl->ambient = ambient;
  impl->constraints = RatMatrix(0, ambient);
  return Subspace(std::move(impl));
}

Subspace Subspace::zero(std::size_t ambient)
{ return from_constraints(RatMatrix::identity(ambient), ambient); }

Subspace Subspace::from_constraints(RatMatrix const &constraints,
                                   std::size_t ambient)
{
  if (constraints.rows() == 0)
    return full(ambient);
  if (constraints.cols() != ambient)
    throw DimensionError("constraint width does not match ambient dimension");
  auto r = rref(constraints);
  auto impl = std::make_shared<Impl>();
  impl->ambient = ambient;
  impl->constraints = std::move(r.matrix);
  if (impl->constraints.rows() == 0)
    impl->constraints = RatMatrix(0, ambient);
  impl->pivots = std::move(r.pivots);
  return Subspace(std::move(impl));
}

Subspace Subspace::span(std::size_t ambient, RatMatrix const &vectors)
{
  if (vectors.rows() == 0)
    return zero(ambient);
  if (vectors.cols() != ambient)
    throw DimensionError("spanning vectors have wrong length");
  // The annihilator of the span is the null space of the vector matrix.
  return from_constraints(nullspace(vectors).basis(), ambient);
}

std::size_t Subspace::ambient_dim() const noexcept
{ return impl_->ambient; }

std::size_t Subspace::dim() const noexcept
{ return impl_->ambient - impl_->constraints.rows(); }

RatMatrix const &Subspace::constraints() const noexcept
{ return impl_->constraints; }

std::vector<std::size_t> const &Subspace::pivots() const noexcept
{ return impl_->pivots; }

RatMatrix const &Subspace::basis() const
{
  auto const &im = *impl_;
  std::call_once(im.basis_once, [&im] {
    std::size_t n = im.ambient;
    std::vector<char> is_pivot(n, 0);
    for (auto p : im.pivots)
      is_pivot[p] = 1;
    RatMatrix b(n - im.pivots.size(), n);
    std::size_t row = 0;
    for (std::size_t f = 0; f < n; ++f) {
      if (is_pivot[f])
        continue;
      b(row, f) = 1;
      for (std::size_t r = 0; r < im.pivots.size(); ++r)
        if (sgn(im.constraints(r, f)) != 0)
          b(row, im.pivots[r]) = -im.constraints(r, f);
      ++row;
    }
    im.basis = std::move(b);
  });
  return im.basis;
}

bool Subspace::contains_vector(std::span<Rational const> v) const
{
  if (v.size() != ambient_dim())
    throw DimensionError("vector length does not match ambient dimension");
  auto const &c = impl_->constraints;
  for (std::size_t r = 0; r < c.rows(); ++r) {
    Rational acc = 0;
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (sgn(c(r, j)) != 0 && sgn(v[j]) != 0)
        acc += c(r, j) * v[j];
    if (sgn(acc) != 0)
      return false;
  }
  return true;
}

bool operator==(Subspace const &a, Subspace const &b)
{
  if (a.impl_ == b.impl_)
    return true;
  return a.ambient_dim() == b.ambient_dim() &&
         a.constraints() == b.constraints();
}

Subspace nullspace(RatMatrix const &m)
{ return Subspace::from_constraints(m, m.cols()); }

namespace {

void check_same_ambient(std::size_t a, std::size_t b)
{
  if (a != b)
    throw DimensionError("ambient dimensions differ: " + std::to_string(a) +
                         " vs " + std::to_string(b));
}

} // namespace

Subspace intersect(Subspace const &s, Subspace const &t)
{
  check_same_ambient(s.ambient_dim(), t.ambient_dim());
  if (s.constraints().rows() == 0)
    return t;
  if (t.constraints().rows() == 0 || s == t)
    return s;
  return Subspace::from_constraints(vstack(s.constraints(), t.constraints()),
                                    s.ambient_dim());
}

bool contains(Subspace const &s, Subspace const &t)
{
  check_same_ambient(s.ambient_dim(), t.ambient_dim());
  if (t.dim() > s.dim())
    return false;
  if (t.dim() == s.dim())
    return s == t;
  auto const &b = t.basis();
  for (std::size_t r = 0; r < b.rows(); ++r)
    if (!s.contains_vector(b.row(r)))
      return false;
  return true;
}

Subspace image(Subspace const &s, RatMatrix const &map)
{
  if (map.rows() != s.ambient_dim() || map.cols() != s.ambient_dim())
    throw DimensionError("image map must be square over the ambient space");
  auto const &b = s.basis();
  RatMatrix mapped(b.rows(), s.ambient_dim());
  for (std::size_t r = 0; r < b.rows(); ++r) {
    auto v = map.apply(b.row(r));
    std::copy(v.begin(), v.end(), mapped.row(r).begin());
  }
  return Subspace::span(s.ambient_dim(), mapped);
}

std::strong_ordering canonical_compare(Subspace const &a, Subspace const &b)
{
  if (auto c = b.dim() <=> a.dim(); c != 0)
    return c;
  if (auto c = a.ambient_dim() <=> b.ambient_dim(); c != 0)
    return c;
  return lex_compare(a.constraints(), b.constraints());
}

// ------------------------------------------------------------ SubspaceUnion

SubspaceUnion SubspaceUnion::normalize(std::size_t ambient,
                                       std::vector<Subspace> members)
{
  for (auto const &m : members)
    check_same_ambient(ambient, m.ambient_dim());

  std::sort(members.begin(), members.end(),
            [](Subspace const &a, Subspace const &b) {
              return canonical_compare(a, b) < 0;
            });
  members.erase(std::unique(members.begin(), members.end()), members.end());

  auto flags = kernels::absorbed_flags(members);
  SubspaceUnion u(ambient);
  u.members_.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    if (!flags[i])
      u.members_.push_back(std::move(members[i]));
  return u;
}

SubspaceUnion SubspaceUnion::full(std::size_t ambient)
{ return single(Subspace::full(ambient)); }

SubspaceUnion SubspaceUnion::single(Subspace s)
{
  SubspaceUnion u(s.ambient_dim());
  u.members_.push_back(std::move(s));
  return u;
}

SubspaceUnion intersect(SubspaceUnion const &u, SubspaceUnion const &v)
{
  check_same_ambient(u.ambient_dim(), v.ambient_dim());
  if (u.is_empty() || v.is_empty())
    return SubspaceUnion(u.ambient_dim());
  return SubspaceUnion::normalize(u.ambient_dim(),
                                  kernels::pairwise_intersect(u, v));
}

SubspaceUnion unite(SubspaceUnion const &u, SubspaceUnion const &v)
{
  check_same_ambient(u.ambient_dim(), v.ambient_dim());
  std::vector<Subspace> all(u.members());
  all.insert(all.end(), v.members().begin(), v.members().end());
  return SubspaceUnion::normalize(u.ambient_dim(), std::move(all));
}

bool contains(SubspaceUnion const &u, Subspace const &s)
{
  check_same_ambient(u.ambient_dim(), s.ambient_dim());
  return std::any_of(u.members().begin(), u.members().end(),
                     [&s](Subspace const &m) { return contains(m, s); });
}

bool is_subset(SubspaceUnion const &u, SubspaceUnion const &v)
{
  check_same_ambient(u.ambient_dim(), v.ambient_dim());
  return std::all_of(u.members().begin(), u.members().end(),
                     [&v](Subspace const &m) { return contains(v, m); });
}

bool equivalent(SubspaceUnion const &u, SubspaceUnion const &v)
{ return is_subset(u, v) && is_subset(v, u); }

bool is_member(SubspaceUnion const &u, std::span<Rational const> v)
{
  if (v.size() != u.ambient_dim())
    throw DimensionError("vector length does not match ambient dimension");
  return std::any_of(u.members().begin(), u.members().end(),
                     [&v](Subspace const &m) { return m.contains_vector(v); });
}

SubspaceUnion image(SubspaceUnion const &u, RatMatrix const &map)
{
  std::vector<Subspace> mapped;
  mapped.reserve(u.size());
  for (auto const &m : u.members())
    mapped.push_back(image(m, map));
  return SubspaceUnion::normalize(u.ambient_dim(), std::move(mapped));
}

// ------------------------------------------------------------ serialization

nlohmann::json to_json(Subspace const &s)
{
  auto rows = nlohmann::json::array();
  auto const &c = s.constraints();
  for (std::size_t r = 0; r < c.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (auto const &q : c.row(r))
      row.push_back(to_string(q));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(SubspaceUnion const &u)
{
  auto members = nlohmann::json::array();
  for (auto const &m : u.members())
    members.push_back(to_json(m));
  return {{"ambient_dim", u.ambient_dim()}, {"members", std::move(members)}};
}

Subspace subspace_from_json(nlohmann::json const &j, std::size_t ambient)
{
  if (!j.is_array())
    throw ConfigError("subspace must be an array of constraint rows");
  RatMatrix c(0, ambient);
  for (auto const &row : j) {
    if (!row.is_array() || row.size() != ambient)
      throw ConfigError("constraint row has wrong length");
    RatVector v;
    for (auto const &e : row)
      v.push_back(e.is_string() ? parse_rational(e.get<std::string>())
                                : Rational(e.get<long>()));
    c.push_row(v);
  }
  return Subspace::from_constraints(c, ambient);
}

SubspaceUnion union_from_json(nlohmann::json const &j)
{
  auto ambient = j.at("ambient_dim").get<std::size_t>();
  std::vector<Subspace> members;
  for (auto const &m : j.at("members"))
    members.push_back(subspace_from_json(m, ambient));
  return SubspaceUnion::normalize(ambient, std::move(members));
}

} // namespace eqsep
