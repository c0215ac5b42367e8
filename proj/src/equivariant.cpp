#include "eqsep/equivariant.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "eqsep/errors.hpp"

namespace eqsep {

// ------------------------------------------------------------------ PermRep

PermRep::PermRep(GSet gset)
: gset_(std::move(gset))
{
  for (auto g : group()->generators())
    matrices_.push_back(matrix(g));
}

RatMatrix PermRep::matrix(std::size_t element) const
{
  RatMatrix m(dim(), dim());
  for (Index x = 0; x < dim(); ++x)
    m(gset_.act(element, x), x) = 1;
  return m;
}

PermRep regular_rep(GroupPtr const &g)
{ return PermRep(regular_gset(g)); }

PermRep natural_rep(GroupPtr const &g)
{ return PermRep(natural_gset(g)); }

PermRep trivial_rep(GroupPtr const &g)
{ return coset_rep(Subgroup::full(g)); }

PermRep coset_rep(Subgroup const &h)
{ return PermRep(gset_from_cosets(cosets(h))); }

PermRep sum_rep(PermRep const &v, PermRep const &w)
{ return PermRep(gset_disjoint_union(v.gset(), w.gset())); }

PermRep mult_rep(PermRep const &v, std::size_t f)
{
  if (f == 0)
    throw ValidationError("multiplicity must be at least 1");
  GSet acc = v.gset();
  for (std::size_t i = 1; i < f; ++i)
    acc = gset_disjoint_union(acc, v.gset());
  return PermRep(std::move(acc));
}

PermRep power_rep(GroupPtr const &g, std::size_t k)
{ return PermRep(gset_power(g, k)); }

std::vector<RatVector> invariant_basis(PermRep const &rep)
{
  std::vector<RatVector> out;
  for (auto const &orbit : rep.gset().orbits()) {
    RatVector v(rep.dim());
    for (auto x : orbit)
      v[x] = 1;
    out.push_back(std::move(v));
  }
  return out;
}

// --------------------------------------------------------- equivariant maps

bool is_equivariant(RatMatrix const &phi, PermRep const &source,
                    PermRep const &target)
{
  if (phi.rows() != target.dim() || phi.cols() != source.dim())
    return false;
  // φρ_V(g) = ρ_W(g)φ  ⇔  φ[gy][gx] = φ[y][x] for every generator g.
  for (auto g : source.group()->generators())
    for (Index y = 0; y < target.dim(); ++y)
      for (Index x = 0; x < source.dim(); ++x)
        if (phi(target.gset().act(g, y), source.gset().act(g, x)) != phi(y, x))
          return false;
  return true;
}

std::size_t span_rank(std::vector<RatMatrix> const &mats)
{
  if (mats.empty())
    return 0;
  RatMatrix stacked(0, mats.front().rows() * mats.front().cols());
  for (auto const &m : mats)
    stacked.push_row(m.entries());
  return rank(stacked);
}

EquivariantBasis commutant_basis(PermRep const &v, PermRep const &w)
{
  if (!v.group()->same_as(*w.group()))
    throw ValidationError("commutant needs representations of one group");
  std::size_t const nv = v.dim(), nw = w.dim(), unknowns = nv * nw;
  auto const &grp = *v.group();

  // Unknown φ[y][x] sits at y·nv + x. Each generator contributes the rows
  // φ[y][gx] - φ[g⁻¹y][x] = 0.
  auto const &gens = grp.generators();
  RatMatrix constraints(gens.size() * unknowns, unknowns);
  std::size_t row = 0;
  for (auto g : gens) {
    auto ginv = grp.inverse(g);
    for (Index y = 0; y < nw; ++y)
      for (Index x = 0; x < nv; ++x, ++row) {
        auto a = y * nv + v.gset().act(g, x);
        auto b = w.gset().act(ginv, y) * nv + x;
        if (a != b) {
          constraints(row, a) += 1;
          constraints(row, b) -= 1;
        }
      }
  }

  auto sol = nullspace(constraints).basis();
  EquivariantBasis basis{v, w, {}};
  for (std::size_t r = 0; r < sol.rows(); ++r) {
    RatMatrix phi(nw, nv);
    for (std::size_t i = 0; i < unknowns; ++i)
      phi(i / nv, i % nv) = sol(r, i);
    basis.generators.push_back(std::move(phi));
  }
  return basis;
}

EquivariantBasis double_coset_basis(Subgroup const &k, Subgroup const &h)
{
  if (!k.parent()->same_as(*h.parent()))
    throw InvalidSubgroupError("subgroups belong to different groups");
  auto const &grp = *k.parent();
  std::size_t const n = grp.order();
  auto ck = cosets(k);
  auto ch = cosets(h);
  PermRep source(gset_from_cosets(ck));
  PermRep target(gset_from_cosets(ch));
  auto dcs = double_cosets(h, k);
  Rational const scale(1, static_cast<long>(k.order()));

  EquivariantBasis basis{source, target, {}};
  for (auto g : dcs.representatives) {
    // D = K g⁻¹ H; then sH ⊆ kKg⁻¹H  ⇔  k⁻¹s ∈ D.
    std::vector<char> in_d(n, 0);
    auto ginv = grp.inverse(g);
    for (auto t : k.members())
      for (auto u : h.members())
        in_d[grp.mul(grp.mul(t, ginv), u)] = 1;

    RatMatrix phi(ch.cosets.size(), ck.cosets.size());
    for (std::size_t col = 0; col < ck.cosets.size(); ++col) {
      auto kinv = grp.inverse(ck.representatives[col]);
      for (std::size_t row = 0; row < ch.cosets.size(); ++row)
        if (in_d[grp.mul(kinv, ch.representatives[row])])
          phi(row, col) = scale;
    }
    basis.generators.push_back(std::move(phi));
  }
  return basis;
}

// -------------------------------------------------------------------- layers

BiasSpec orbit_bias(PermRep const &target)
{
  auto const &orbits = target.gset().orbits();
  return BiasSpec::complete(SetPartition::over_range(target.dim(), orbits));
}

LayerSpace::LayerSpace(PermRep source, PermRep target,
                       std::vector<RatMatrix> generators, BiasSpec bias)
: source_(std::move(source)), target_(std::move(target)),
  generators_(std::move(generators)), bias_(std::move(bias))
{
  if (!source_.group()->same_as(*target_.group()))
    throw ValidationError("layer source and target are over different groups");
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    auto const &phi = generators_[i];
    if (phi.rows() != target_.dim() || phi.cols() != source_.dim())
      throw ValidationError("generator " + std::to_string(i) + " has shape " +
                            std::to_string(phi.rows()) + "x" +
                            std::to_string(phi.cols()) + ", expected " +
                            std::to_string(target_.dim()) + "x" +
                            std::to_string(source_.dim()));
    if (!is_equivariant(phi, source_, target_))
      throw ValidationError("generator " + std::to_string(i) +
                            " is not equivariant");
  }
  if (span_rank(generators_) != generators_.size())
    throw ValidationError("layer generators are linearly dependent");

  if (bias_.is_complete()) {
    auto const &p = bias_.partition;
    if (p.ground().size() != target_.dim() ||
        (!p.ground().empty() && p.ground().back() + 1 != target_.dim()))
      throw ValidationError("bias partition must cover the target points");
    auto const &orbit_of = target_.gset().orbit_of();
    for (auto const &blk : p.blocks()) {
      std::set<Index> orbits_hit;
      for (auto x : blk)
        orbits_hit.insert(orbit_of[x]);
      for (auto o : orbits_hit)
        if (target_.gset().orbits()[o].size() >
            static_cast<std::size_t>(std::count_if(
                blk.begin(), blk.end(),
                [&](Index x) { return orbit_of[x] == o; })))
          throw ValidationError(
              "bias part splits an orbit; complete bias parts must be unions "
              "of target orbits");
    }
  }
}

bool LayerSpace::spans_identity() const
{
  if (!source_.same_as(target_))
    return false;
  auto with_id = generators_;
  with_id.push_back(RatMatrix::identity(source_.dim()));
  return span_rank(with_id) == span_rank(generators_);
}

LayerSpace full_layer(PermRep const &v, PermRep const &w)
{
  auto basis = commutant_basis(v, w);
  auto bias = orbit_bias(w);
  return LayerSpace(v, w, std::move(basis.generators), std::move(bias));
}

RatMatrix circulant_unit(std::size_t n, std::size_t t)
{
  RatMatrix c(n, n);
  for (std::size_t col = 0; col < n; ++col)
    c((col + t) % n, col) = 1;
  return c;
}

LayerSpace circular_layer(std::size_t n, std::size_t k)
{
  if (k < 1 || k > n)
    throw ValidationError("filter size must satisfy 1 <= k <= n");
  auto rep = natural_rep(cyclic_group(n));
  std::vector<RatMatrix> gens;
  for (std::size_t t = 0; t < k; ++t)
    gens.push_back(circulant_unit(n, t));
  return LayerSpace(rep, rep, std::move(gens),
                    BiasSpec::complete(SetPartition::single_block(
                        [n] {
                          std::vector<Index> g(n);
                          for (std::size_t i = 0; i < n; ++i)
                            g[i] = static_cast<Index>(i);
                          return g;
                        }())));
}

LayerSpace ign_layer(std::size_t n, std::size_t order, std::size_t mult_in,
                     std::size_t mult_out, std::size_t size_limit)
{
  if (n < 1 || order < 1 || mult_in < 1 || mult_out < 1)
    throw ValidationError("IGN layer needs n, order and multiplicities >= 1");
  std::size_t points = 1;
  for (std::size_t i = 0; i < order; ++i)
    points *= n;
  if (points * std::max(mult_in, mult_out) > size_limit)
    throw ResourceError("IGN layer of size " +
                        std::to_string(points * std::max(mult_in, mult_out)) +
                        " exceeds the limit " + std::to_string(size_limit));

  auto base = power_rep(symmetric_group(n), order);
  auto src = mult_rep(base, mult_in);
  auto dst = mult_rep(base, mult_out);
  auto core = commutant_basis(base, base);

  // Hom(V ⊗ R^f, V ⊗ R^f') ≅ Hom(V, V) ⊗ Hom(R^f, R^f'): place each core
  // generator in one (out, in) block.
  std::vector<RatMatrix> gens;
  for (auto const &phi : core.generators)
    for (std::size_t a = 0; a < mult_out; ++a)
      for (std::size_t b = 0; b < mult_in; ++b) {
        RatMatrix big(dst.dim(), src.dim());
        for (std::size_t r = 0; r < points; ++r)
          for (std::size_t c = 0; c < points; ++c)
            big(a * points + r, b * points + c) = phi(r, c);
        gens.push_back(std::move(big));
      }
  auto bias = orbit_bias(dst);
  return LayerSpace(src, dst, std::move(gens), std::move(bias));
}

LayerSpace double_coset_layer(Subgroup const &k, Subgroup const &h)
{
  auto basis = double_coset_basis(k, h);
  auto bias = orbit_bias(basis.target);
  return LayerSpace(basis.source, basis.target, std::move(basis.generators),
                    std::move(bias));
}

// -------------------------------------------------------------- architecture

Architecture::Architecture(std::vector<LayerSpace> layers,
                           std::string activation_tag)
: layers_(std::move(layers)), activation_(std::move(activation_tag))
{
  if (layers_.empty())
    throw ValidationError("architecture needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!layers_[i].source().group()->same_as(*group()))
      throw ValidationError("layer " + std::to_string(i) +
                            " is over a different group");
    if (i + 1 < layers_.size()) {
      if (!layers_[i].target().same_as(layers_[i + 1].source()))
        throw ValidationError("layer " + std::to_string(i) +
                              " target does not match layer " +
                              std::to_string(i + 1) + " source");
      if (!layers_[i].bias().is_complete())
        throw ValidationError(
            "intermediate layer " + std::to_string(i) +
            " has incomplete bias; the zero-locus recursion requires complete "
            "bias (span of indicators of a partition into unions of orbits) "
            "on every intermediate layer");
    }
  }
}

namespace {

nlohmann::json matrix_json(RatMatrix const &m)
{
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (auto const &q : m.row(r))
      row.push_back(to_string(q));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json rep_json(PermRep const &rep)
{
  auto gens = nlohmann::json::array();
  for (auto g : rep.group()->generators())
    gens.push_back(rep.gset().action_of(g));
  return {{"dim", rep.dim()}, {"generator_actions", gens}};
}

} // namespace

nlohmann::json Architecture::canonical_json() const
{
  auto const &grp = *group();
  auto group_gens = nlohmann::json::array();
  for (auto g : grp.generators())
    group_gens.push_back(grp.element(g).images());

  auto layers = nlohmann::json::array();
  for (auto const &l : layers_) {
    auto gens = nlohmann::json::array();
    for (auto const &g : l.generators())
      gens.push_back(matrix_json(g));
    nlohmann::json bias = nullptr;
    if (l.bias().is_complete())
      bias = l.bias().partition.blocks();
    layers.push_back({{"source", rep_json(l.source())},
                      {"target", rep_json(l.target())},
                      {"generators", gens},
                      {"bias", bias}});
  }
  return {{"group", {{"degree", grp.degree()},
                     {"order", grp.order()},
                     {"generators", group_gens}}},
          {"layers", layers}};
}

std::string fnv1a_hex(std::string const &bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Architecture::digest() const
{ return fnv1a_hex(canonical_json().dump()); }

Architecture full_architecture(std::vector<PermRep> const &reps,
                               std::string activation_tag)
{
  if (reps.size() < 2)
    throw ValidationError("need at least input and output representations");
  std::vector<LayerSpace> layers;
  for (std::size_t i = 0; i + 1 < reps.size(); ++i)
    layers.push_back(full_layer(reps[i], reps[i + 1]));
  return Architecture(std::move(layers), std::move(activation_tag));
}

} // namespace eqsep
