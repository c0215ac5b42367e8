#include "eqsep/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "eqsep/errors.hpp"

namespace eqsep {

// -------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<Index> images)
: images_(std::move(images))
{
  std::vector<char> seen(images_.size(), 0);
  for (auto x : images_) {
    if (x >= images_.size() || seen[x])
      throw ValidationError("not a bijection: " + str());
    seen[x] = 1;
  }
}

Permutation Permutation::identity(std::size_t n)
{
  std::vector<Index> im(n);
  std::iota(im.begin(), im.end(), Index{0});
  return Permutation(std::move(im));
}

bool Permutation::is_identity() const
{
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return false;
  return true;
}

bool Permutation::is_even() const
{
  std::vector<char> seen(images_.size(), 0);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i])
      continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = 1;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

Permutation Permutation::inverse() const
{
  std::vector<Index> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i)
    inv[images_[i]] = static_cast<Index>(i);
  Permutation p;
  p.images_ = std::move(inv);
  return p;
}

Permutation operator*(Permutation const &p, Permutation const &q)
{
  if (p.degree() != q.degree())
    throw ValidationError("composing permutations of different degree");
  Permutation r;
  r.images_.resize(p.degree());
  for (std::size_t i = 0; i < p.degree(); ++i)
    r.images_[i] = p.images_[q.images_[i]];
  return r;
}

std::string Permutation::str() const
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < images_.size(); ++i)
    os << (i ? "," : "") << images_[i];
  os << ']';
  return os.str();
}

// -------------------------------------------------------------------- Group

GroupPtr Group::generate(std::vector<Permutation> const &gens,
                         std::size_t degree)
{
  if (!gens.empty())
    degree = gens.front().degree();
  for (auto const &g : gens)
    if (g.degree() != degree)
      throw ValidationError("generators act on different ground sets");

  // Breadth-first closure; right-multiplying by generators reaches every
  // element of a finite group.
  std::set<Permutation> seen{Permutation::identity(degree)};
  std::vector<Permutation> frontier{Permutation::identity(degree)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (auto const &x : frontier)
      for (auto const &g : gens) {
        auto y = x * g;
        if (seen.insert(y).second) {
          if (seen.size() > max_group_order)
            throw ResourceError("group order exceeds " +
                                std::to_string(max_group_order));
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }

  auto grp = std::shared_ptr<Group>(new Group());
  grp->degree_ = degree;
  grp->elements_.assign(seen.begin(), seen.end());

  std::size_t const n = grp->elements_.size();
  std::map<Permutation, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    index.emplace(grp->elements_[i], i);

  grp->mul_.resize(n * n);
  grp->inv_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      grp->mul_[a * n + b] = index.at(grp->elements_[a] * grp->elements_[b]);
    grp->inv_[a] = index.at(grp->elements_[a].inverse());
    if (grp->elements_[a].is_identity())
      grp->identity_ = a;
  }

  std::set<std::size_t> gidx;
  for (auto const &g : gens)
    if (!g.is_identity())
      gidx.insert(index.at(g));
  grp->gens_.assign(gidx.begin(), gidx.end());
  return grp;
}

std::optional<std::size_t> Group::index_of(Permutation const &p) const
{
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p)
    return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

GroupPtr cyclic_group(std::size_t n)
{
  if (n == 0)
    throw ValidationError("cyclic group needs n >= 1");
  std::vector<Index> im(n);
  for (std::size_t i = 0; i < n; ++i)
    im[i] = static_cast<Index>((i + 1) % n);
  return Group::generate({Permutation(im)}, n);
}

GroupPtr symmetric_group(std::size_t n)
{
  if (n == 0)
    throw ValidationError("symmetric group needs n >= 1");
  std::vector<Permutation> gens;
  if (n >= 2) {
    std::vector<Index> swap(n), cycle(n);
    std::iota(swap.begin(), swap.end(), Index{0});
    std::swap(swap[0], swap[1]);
    for (std::size_t i = 0; i < n; ++i)
      cycle[i] = static_cast<Index>((i + 1) % n);
    gens.emplace_back(swap);
    gens.emplace_back(cycle);
  }
  return Group::generate(gens, n);
}

GroupPtr dihedral_group(std::size_t n)
{
  if (n < 3)
    throw ValidationError("dihedral group needs n >= 3");
  std::vector<Index> rot(n), refl(n);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = static_cast<Index>((i + 1) % n);
    refl[i] = static_cast<Index>((n - i) % n);
  }
  return Group::generate({Permutation(rot), Permutation(refl)}, n);
}

GroupPtr direct_product(GroupPtr const &a, GroupPtr const &b)
{
  std::size_t const da = a->degree(), db = b->degree();
  auto lift = [&](Permutation const &p, bool first) {
    std::vector<Index> im(da + db);
    std::iota(im.begin(), im.end(), Index{0});
    for (std::size_t i = 0; i < p.degree(); ++i) {
      if (first)
        im[i] = p(static_cast<Index>(i));
      else
        im[da + i] = static_cast<Index>(da + p(static_cast<Index>(i)));
    }
    return Permutation(im);
  };
  std::vector<Permutation> gens;
  for (auto g : a->generators())
    gens.push_back(lift(a->element(g), true));
  for (auto g : b->generators())
    gens.push_back(lift(b->element(g), false));
  return Group::generate(gens, da + db);
}

// ----------------------------------------------------------------- Subgroup

Subgroup::Subgroup(GroupPtr parent, std::vector<std::size_t> members)
: parent_(std::move(parent))
{
  std::size_t const n = parent_->order();
  mask_.assign(n, 0);
  for (auto m : members) {
    if (m >= n)
      throw InvalidSubgroupError("subgroup element index out of range");
    mask_[m] = 1;
  }
  if (!mask_[parent_->identity()])
    throw InvalidSubgroupError("subgroup does not contain the identity");
  for (std::size_t a = 0; a < n; ++a) {
    if (!mask_[a])
      continue;
    for (std::size_t b = 0; b < n; ++b)
      if (mask_[b] && !mask_[parent_->mul(a, b)])
        throw InvalidSubgroupError("subgroup is not closed under products");
  }
  for (std::size_t a = 0; a < n; ++a)
    if (mask_[a])
      members_.push_back(a);
  if (n % members_.size() != 0)
    throw InvalidSubgroupError("subgroup order does not divide group order");
}

Subgroup Subgroup::trivial(GroupPtr parent)
{
  auto e = parent->identity();
  return Subgroup(std::move(parent), {e});
}

Subgroup Subgroup::full(GroupPtr parent)
{
  std::vector<std::size_t> all(parent->order());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Subgroup(std::move(parent), std::move(all));
}

Subgroup Subgroup::alternating(GroupPtr parent)
{
  std::vector<std::size_t> even;
  for (std::size_t i = 0; i < parent->order(); ++i)
    if (parent->element(i).is_even())
      even.push_back(i);
  return Subgroup(std::move(parent), std::move(even));
}

Subgroup Subgroup::generated(GroupPtr parent,
                             std::vector<Permutation> const &gens)
{
  for (auto const &g : gens)
    if (!parent->index_of(g))
      throw InvalidSubgroupError("generator " + g.str() +
                                 " is not an element of the parent group");
  auto sub = Group::generate(gens, parent->degree());
  std::vector<std::size_t> idx;
  for (auto const &p : sub->elements())
    idx.push_back(*parent->index_of(p));
  return Subgroup(std::move(parent), std::move(idx));
}

bool Subgroup::is_subgroup_of(Subgroup const &other) const
{
  if (!parent_->same_as(*other.parent_))
    return false;
  return std::all_of(members_.begin(), members_.end(),
                     [&other](std::size_t m) { return other.has(m); });
}

// ----------------------------------------------------------- coset spaces

CosetSpace cosets(Subgroup const &h)
{
  auto const &g = *h.parent();
  std::size_t const n = g.order();
  CosetSpace cs;
  cs.parent = h.parent();
  cs.subgroup_order = h.order();
  cs.coset_of.assign(n, n);

  // Elements are visited in increasing order, so each new coset is
  // discovered through its smallest element.
  for (std::size_t x = 0; x < n; ++x) {
    if (cs.coset_of[x] != n)
      continue;
    std::vector<std::size_t> coset;
    for (auto m : h.members())
      coset.push_back(g.mul(x, m));
    std::sort(coset.begin(), coset.end());
    for (auto y : coset)
      cs.coset_of[y] = cs.cosets.size();
    cs.representatives.push_back(x);
    cs.cosets.push_back(std::move(coset));
  }

  cs.action.assign(n, std::vector<Index>(cs.cosets.size()));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < cs.cosets.size(); ++c)
      cs.action[a][c] = static_cast<Index>(
          cs.coset_of[g.mul(a, cs.representatives[c])]);
  return cs;
}

DoubleCosetSpace double_cosets(Subgroup const &h, Subgroup const &k)
{
  if (!h.parent()->same_as(*k.parent()))
    throw InvalidSubgroupError("double cosets need subgroups of one group");
  auto const &g = *h.parent();
  std::size_t const n = g.order();
  DoubleCosetSpace ds;
  ds.parent = h.parent();
  std::vector<char> seen(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x])
      continue;
    std::set<std::size_t> cls;
    for (auto a : h.members())
      for (auto b : k.members())
        cls.insert(g.mul(g.mul(a, x), b));
    for (auto y : cls)
      seen[y] = 1;
    ds.representatives.push_back(x);
    ds.classes.emplace_back(cls.begin(), cls.end());
  }
  return ds;
}

// --------------------------------------------------------------------- GSet

GSet::GSet(GroupPtr group, std::vector<std::vector<Index>> action,
           std::vector<std::string> labels)
: group_(std::move(group)), action_(std::move(action)),
  labels_(std::move(labels))
{
  if (action_.size() != group_->order())
    throw ValidationError("action table needs one row per group element");
  size_ = action_.empty() ? 0 : action_.front().size();
  for (auto const &row : action_) {
    if (row.size() != size_)
      throw ValidationError("ragged action table");
    std::vector<char> seen(size_, 0);
    for (auto y : row) {
      if (y >= size_ || seen[y])
        throw ValidationError("group element does not act bijectively");
      seen[y] = 1;
    }
  }
  if (!labels_.empty() && labels_.size() != size_)
    throw ValidationError("label count does not match point count");

  // Identity law always; compatibility exhaustively on small instances and
  // on generator pairs otherwise.
  auto const &g = *group_;
  for (std::size_t x = 0; x < size_; ++x)
    if (action_[g.identity()][x] != x)
      throw ValidationError("identity does not act trivially");
  std::vector<std::size_t> left;
  if (g.order() * g.order() * size_ <= 100000) {
    left.resize(g.order());
    std::iota(left.begin(), left.end(), std::size_t{0});
  } else {
    left = g.generators();
  }
  for (auto a : left)
    for (std::size_t b = 0; b < g.order(); ++b) {
      auto ab = g.mul(a, b);
      for (std::size_t x = 0; x < size_; ++x)
        if (action_[a][action_[b][x]] != action_[ab][x])
          throw ValidationError("action is not compatible with products");
    }

  orbits_ = eqsep::orbits(*this);
  orbit_of_.assign(size_, 0);
  for (std::size_t o = 0; o < orbits_.size(); ++o)
    for (auto x : orbits_[o])
      orbit_of_[x] = static_cast<Index>(o);
}

bool GSet::same_as(GSet const &other) const
{
  return group_->same_as(*other.group_) && action_ == other.action_;
}

std::vector<std::vector<Index>> orbits(GSet const &x)
{
  std::size_t const n = x.size();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&parent](Index a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (auto g : x.group()->generators())
    for (Index p = 0; p < n; ++p) {
      auto a = find(p), b = find(x.act(g, p));
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b);
    }

  std::map<Index, std::vector<Index>> parts;
  for (Index p = 0; p < n; ++p)
    parts[find(p)].push_back(p);
  std::vector<std::vector<Index>> out;
  for (auto &kv : parts)
    out.push_back(std::move(kv.second));
  std::sort(out.begin(), out.end());
  return out;
}

GSet natural_gset(GroupPtr const &g)
{
  std::vector<std::vector<Index>> action;
  for (auto const &p : g->elements())
    action.push_back(p.images());
  return GSet(g, std::move(action));
}

GSet regular_gset(GroupPtr const &g)
{
  std::size_t const n = g->order();
  std::vector<std::vector<Index>> action(n, std::vector<Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t x = 0; x < n; ++x)
      action[a][x] = static_cast<Index>(g->mul(a, x));
  std::vector<std::string> labels;
  for (auto const &p : g->elements())
    labels.push_back(p.str());
  return GSet(g, std::move(action), std::move(labels));
}

GSet gset_from_cosets(CosetSpace const &cs)
{
  std::vector<std::string> labels;
  for (auto r : cs.representatives)
    labels.push_back(cs.parent->element(r).str() + "H");
  return GSet(cs.parent, cs.action, std::move(labels));
}

namespace {

void require_same_group(GSet const &x, GSet const &y)
{
  if (!x.group()->same_as(*y.group()))
    throw ValidationError("G-sets are over different groups");
}

} // namespace

GSet gset_product(GSet const &x, GSet const &y)
{
  require_same_group(x, y);
  std::size_t const nx = x.size(), ny = y.size();
  std::vector<std::vector<Index>> action(x.group()->order(),
                                         std::vector<Index>(nx * ny));
  for (std::size_t g = 0; g < action.size(); ++g)
    for (Index a = 0; a < nx; ++a)
      for (Index b = 0; b < ny; ++b)
        action[g][a * ny + b] =
            static_cast<Index>(x.act(g, a) * ny + y.act(g, b));
  return GSet(x.group(), std::move(action));
}

GSet gset_disjoint_union(GSet const &x, GSet const &y)
{
  require_same_group(x, y);
  std::size_t const nx = x.size(), ny = y.size();
  std::vector<std::vector<Index>> action(x.group()->order(),
                                         std::vector<Index>(nx + ny));
  for (std::size_t g = 0; g < action.size(); ++g) {
    for (Index a = 0; a < nx; ++a)
      action[g][a] = x.act(g, a);
    for (Index b = 0; b < ny; ++b)
      action[g][nx + b] = static_cast<Index>(nx + y.act(g, b));
  }
  std::vector<std::string> labels;
  if (!x.labels().empty() && !y.labels().empty()) {
    labels = x.labels();
    labels.insert(labels.end(), y.labels().begin(), y.labels().end());
  }
  return GSet(x.group(), std::move(action), std::move(labels));
}

GSet gset_power(GroupPtr const &g, std::size_t k)
{
  if (k == 0)
    throw ValidationError("tensor power needs k >= 1");
  GSet out = natural_gset(g);
  GSet base = out;
  for (std::size_t i = 1; i < k; ++i)
    out = gset_product(out, base);
  return out;
}

} // namespace eqsep
