#include "eqsep/separation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <optional>

#include "eqsep/errors.hpp"

namespace eqsep {

TwinArchitecture twin_transform(Architecture const &arch)
{
  auto const &layers = arch.layers();
  TwinArchitecture twin;
  twin.input_dim = 2 * arch.input().dim();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    auto const &layer = layers[l];
    if (!layer.bias().is_complete())
      throw ValidationError("hidden layer " + std::to_string(l + 1) +
                            " needs a complete bias for the twin transform");
    TwinLayer t;
    t.in_dim = 2 * layer.source().dim();
    t.out_dim = 2 * layer.target().dim();
    for (auto const &g : layer.generators())
      t.generators.push_back(block_diagonal(g, g));
    t.bias = duplicate_partition(layer.bias().partition);
    twin.layers.push_back(std::move(t));
  }
  for (auto const &a : layers.back().generators())
    twin.final_generators.push_back(
        hstack(a, RatMatrix(a.rows(), a.cols()) - a));
  return twin;
}

nlohmann::json EngineStats::to_json() const
{
  return {{"nodes", nodes},
          {"memo_entries", memo_entries},
          {"memo_lookups", memo_lookups},
          {"memo_hits", memo_hits()},
          {"coefficient_vectors", coefficient_vectors},
          {"partitions", partitions},
          {"max_union_size", max_union_size}};
}

namespace {

using PairKey = std::pair<Index, Index>;

struct Slot
{
  std::once_flag once;
  SubspaceUnion value;
};

/// Runs `body(i)` for i in [0, n), forking when allowed. The first exception
/// raised by any iteration is rethrown after the loop.
template <class Body>
void for_range(std::size_t n, bool parallel, Body &&body)
{
  if (!parallel || n < 2 || !kernels::may_fork()) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::exception_ptr error;
  auto const count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(eqsep_engine_error)
      if (!error)
        error = std::current_exception();
    }
  }
  if (error)
    std::rethrow_exception(error);
}

void atomic_max(std::atomic<std::uint64_t> &slot, std::uint64_t v)
{
  auto cur = slot.load();
  while (cur < v && !slot.compare_exchange_weak(cur, v)) {
  }
}

} // namespace

struct ZeroLocusEngine::State
{
  TwinArchitecture twin;
  EngineOptions options;

  mutable std::mutex mutex;
  std::vector<std::map<PairKey, std::unique_ptr<Slot>>> memo;

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> entries{0};
  std::atomic<std::uint64_t> lookups{0};
  std::atomic<std::uint64_t> coefficient_vectors{0};
  std::atomic<std::uint64_t> partitions{0};
  std::atomic<std::uint64_t> max_union{0};

  bool parallel() const
  { return options.exec == kernels::Exec::parallel; }

  EngineStats snapshot() const
  {
    EngineStats s;
    s.nodes = nodes.load();
    s.memo_entries = entries.load();
    s.memo_lookups = lookups.load();
    s.coefficient_vectors = coefficient_vectors.load();
    s.partitions = partitions.load();
    s.max_union_size = max_union.load();
    return s;
  }

  void check_cap(SubspaceUnion const &u)
  {
    atomic_max(max_union, u.size());
    if (u.size() > options.max_union_members)
      throw ResourceError("union grew to " + std::to_string(u.size()) +
                              " members, above the cap of " +
                              std::to_string(options.max_union_members),
                          snapshot().to_json().dump());
  }

  std::size_t prefix_dim(std::size_t prefix) const
  { return prefix == 0 ? twin.input_dim : twin.layers[prefix - 1].out_dim; }

  SubspaceUnion const &lookup(std::size_t depth, Index i, Index j)
  {
    Slot *slot;
    {
      std::lock_guard lock(mutex);
      auto &ptr = memo[depth - 1][{i, j}];
      if (!ptr)
        ptr = std::make_unique<Slot>();
      slot = ptr.get();
    }
    std::call_once(slot->once, [&] {
      slot->value = compute_pair(depth, i, j, true);
      entries.fetch_add(1);
    });
    return slot->value;
  }

  SubspaceUnion compute_pair(std::size_t depth, Index i, Index j,
                             bool use_memo)
  {
    auto const &layer = twin.layers.at(depth - 1);
    if (i >= layer.out_dim || j >= layer.out_dim)
      throw DimensionError("pair index outside layer " +
                           std::to_string(depth));
    if (i == j)
      return SubspaceUnion::full(twin.input_dim);
    std::vector<RatMatrix> finals;
    for (auto const &g : layer.generators) {
      RatMatrix diff(1, g.cols());
      for (std::size_t c = 0; c < g.cols(); ++c)
        diff(0, c) = g(i, c) - g(j, c);
      finals.push_back(std::move(diff));
    }
    return solve(depth - 1, finals, use_memo);
  }

  SubspaceUnion pair_value(std::size_t depth, PairKey key, bool use_memo)
  {
    if (use_memo)
      return lookup(depth, key.first, key.second);
    return compute_pair(depth, key.first, key.second, false);
  }

  SubspaceUnion solve(std::size_t prefix, std::vector<RatMatrix> const &finals,
                      bool use_memo)
  {
    nodes.fetch_add(1);
    std::size_t const ambient = twin.input_dim;

    if (prefix == 0) {
      RatMatrix stacked(0, ambient);
      for (auto const &f : finals)
        for (std::size_t r = 0; r < f.rows(); ++r)
          stacked.push_row(f.row(r));
      if (stacked.rows() == 0)
        return SubspaceUnion::full(ambient);
      return SubspaceUnion::single(Subspace::from_constraints(stacked, ambient));
    }

    auto const &layer = twin.layers[prefix - 1];

    // Distinct nonzero rows up to scaling; each contributes one factor.
    std::vector<RatVector> coeffs;
    for (auto const &f : finals)
      for (std::size_t r = 0; r < f.rows(); ++r) {
        auto row = f.row(r);
        auto lead = std::find_if(row.begin(), row.end(),
                                 [](Rational const &q) { return sgn(q) != 0; });
        if (lead == row.end())
          continue;
        Rational const scale = 1 / *lead;
        RatVector a(row.begin(), row.end());
        for (auto &x : a)
          x *= scale;
        coeffs.push_back(std::move(a));
      }
    std::sort(coeffs.begin(), coeffs.end());
    coeffs.erase(std::unique(coeffs.begin(), coeffs.end()), coeffs.end());
    coefficient_vectors.fetch_add(coeffs.size());
    if (coeffs.empty())
      return SubspaceUnion::full(ambient);

    std::vector<SubspaceUnion> factors;
    for (auto const &a : coeffs) {
      auto qs = zero_sum_partitions(a, layer.bias, options.max_block_size);
      partitions.fetch_add(qs.size());
      if (qs.empty())
        return SubspaceUnion(ambient);

      std::vector<std::vector<PairKey>> stars(qs.size());
      std::vector<PairKey> distinct;
      for (std::size_t q = 0; q < qs.size(); ++q)
        for (auto const &blk : qs[q].blocks())
          for (std::size_t t = 1; t < blk.size(); ++t) {
            stars[q].emplace_back(blk.front(), blk[t]);
            distinct.emplace_back(blk.front(), blk[t]);
          }
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());

      if (use_memo) {
        std::size_t refs = 0;
        for (auto const &s : stars)
          refs += s.size();
        lookups.fetch_add(refs);
        for_range(distinct.size(), parallel(), [&](std::size_t k) {
          lookup(prefix, distinct[k].first, distinct[k].second);
        });
      }

      std::vector<SubspaceUnion> per_q(qs.size());
      for_range(qs.size(), parallel(), [&](std::size_t q) {
        auto acc = SubspaceUnion::full(ambient);
        for (auto const &key : stars[q]) {
          acc = intersect(acc, pair_value(prefix, key, use_memo));
          if (acc.is_empty())
            break;
        }
        per_q[q] = std::move(acc);
      });

      std::vector<Subspace> members;
      for (auto const &u : per_q)
        members.insert(members.end(), u.members().begin(), u.members().end());
      auto united = SubspaceUnion::normalize(ambient, std::move(members));
      check_cap(united);
      if (united.is_empty())
        return united;
      factors.push_back(std::move(united));
    }

    std::stable_sort(factors.begin(), factors.end(),
                     [](SubspaceUnion const &x, SubspaceUnion const &y) {
                       return x.size() < y.size();
                     });
    auto acc = std::move(factors.front());
    for (std::size_t f = 1; f < factors.size() && !acc.is_empty(); ++f) {
      acc = intersect(acc, factors[f]);
      check_cap(acc);
    }
    return acc;
  }
};

ZeroLocusEngine::ZeroLocusEngine(TwinArchitecture twin, EngineOptions options)
: state_(std::make_unique<State>())
{
  state_->twin = std::move(twin);
  state_->options = options;
  state_->memo.resize(state_->twin.layers.size());
}

ZeroLocusEngine::~ZeroLocusEngine() = default;

SubspaceUnion ZeroLocusEngine::run()
{
  kernels::ScopedExec scope(state_->options.exec);
  return state_->solve(state_->twin.layers.size(),
                       state_->twin.final_generators, true);
}

SubspaceUnion ZeroLocusEngine::pair_locus(std::size_t depth, Index i, Index j)
{
  if (depth == 0 || depth > state_->twin.layers.size())
    throw DimensionError("no twin layer at depth " + std::to_string(depth));
  kernels::ScopedExec scope(state_->options.exec);
  if (i > j)
    std::swap(i, j);
  if (i == j)
    return SubspaceUnion::full(state_->twin.input_dim);
  state_->lookups.fetch_add(1);
  return state_->lookup(depth, i, j);
}

SubspaceUnion ZeroLocusEngine::pair_locus_uncached(std::size_t depth, Index i,
                                                   Index j)
{
  if (depth == 0 || depth > state_->twin.layers.size())
    throw DimensionError("no twin layer at depth " + std::to_string(depth));
  kernels::ScopedExec scope(state_->options.exec);
  if (i > j)
    std::swap(i, j);
  return state_->compute_pair(depth, i, j, false);
}

std::vector<std::tuple<std::size_t, Index, Index>>
ZeroLocusEngine::memo_keys() const
{
  std::lock_guard lock(state_->mutex);
  std::vector<std::tuple<std::size_t, Index, Index>> keys;
  for (std::size_t d = 0; d < state_->memo.size(); ++d)
    for (auto const &[key, slot] : state_->memo[d])
      keys.emplace_back(d + 1, key.first, key.second);
  return keys;
}

EngineStats ZeroLocusEngine::stats() const
{ return state_->snapshot(); }

SubspaceUnion zero_locus(TwinArchitecture const &twin,
                         EngineOptions const &options, EngineStats *stats)
{
  ZeroLocusEngine engine(twin, options);
  auto result = engine.run();
  if (stats)
    *stats = engine.stats();
  return result;
}

nlohmann::json IdentificationRelation::to_json() const
{
  auto j = eqsep::to_json(relation);
  j["input_dim"] = input_dim;
  j["architecture_digest"] = architecture_digest;
  j["stats"] = stats.to_json();
  return j;
}

IdentificationRelation rho(Architecture const &arch,
                           EngineOptions const &options)
{
  auto const start = std::chrono::steady_clock::now();
  ZeroLocusEngine engine(twin_transform(arch), options);
  IdentificationRelation rel;
  rel.relation = engine.run();
  rel.input_dim = arch.input().dim();
  rel.architecture_digest = arch.digest();
  rel.stats = engine.stats();
  rel.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rel;
}

Subspace graph_subspace(RatMatrix const &map)
{
  if (map.rows() != map.cols())
    throw DimensionError("graph of a non-square map");
  auto const n = map.rows();
  RatMatrix neg_identity(n, n);
  for (std::size_t i = 0; i < n; ++i)
    neg_identity(i, i) = -1;
  return Subspace::from_constraints(hstack(map, neg_identity), 2 * n);
}

SubspaceUnion h_orbit_relation(Subgroup const &h, PermRep const &rep)
{
  if (!h.parent()->same_as(*rep.group()))
    throw ValidationError("subgroup and representation use different groups");
  std::vector<Subspace> members;
  for (auto g : h.members())
    members.push_back(graph_subspace(rep.matrix(g)));
  return SubspaceUnion::normalize(2 * rep.dim(), std::move(members));
}

SubspaceUnion permutation_relation(std::size_t n, std::size_t limit)
{
  if (n > limit)
    throw ResourceError("permutation relation on " + std::to_string(n) +
                        " points exceeds the limit of " +
                        std::to_string(limit));
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i)
    sigma[i] = i;
  std::vector<Subspace> members;
  do {
    RatMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      p(sigma[i], i) = 1;
    members.push_back(graph_subspace(p));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return SubspaceUnion::normalize(2 * n, std::move(members));
}

bool identifies(IdentificationRelation const &rel,
                std::span<Rational const> alpha,
                std::span<Rational const> beta)
{
  if (alpha.size() != rel.input_dim || beta.size() != rel.input_dim)
    throw DimensionError("input vectors must have length " +
                         std::to_string(rel.input_dim));
  RatVector v(alpha.begin(), alpha.end());
  v.insert(v.end(), beta.begin(), beta.end());
  return is_member(rel.relation, v);
}

std::string to_string(Comparison c)
{
  switch (c) {
  case Comparison::equal: return "equal";
  case Comparison::strict_subset: return "strict_subset";
  case Comparison::strict_superset: return "strict_superset";
  case Comparison::incomparable: return "incomparable";
  }
  return "incomparable";
}

Comparison compare(SubspaceUnion const &a, SubspaceUnion const &b)
{
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionError("relations live in different ambient spaces");
  bool const sub = is_subset(a, b);
  bool const sup = is_subset(b, a);
  if (sub && sup)
    return Comparison::equal;
  if (sub)
    return Comparison::strict_subset;
  if (sup)
    return Comparison::strict_superset;
  return Comparison::incomparable;
}

Comparison compare(IdentificationRelation const &a,
                   IdentificationRelation const &b)
{ return compare(a.relation, b.relation); }

namespace {

RatMatrix swap_halves(std::size_t n)
{
  RatMatrix s(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, n + i) = 1;
    s(n + i, i) = 1;
  }
  return s;
}

/// Some γ with (β, γ) in `s`, chosen at random among the solutions.
std::optional<RatVector> random_partner(Subspace const &s,
                                        std::span<Rational const> beta,
                                        std::mt19937_64 &rng)
{
  std::size_t const n = beta.size();
  auto const &basis = s.basis();
  std::size_t const k = basis.rows();
  RatMatrix system(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r)
      system(i, r) = basis(r, i);
    system(i, k) = beta[i];
  }
  auto const red = rref(system);
  if (!red.pivots.empty() && red.pivots.back() == k)
    return std::nullopt;

  std::uniform_int_distribution<long> coin(-3, 3);
  RatVector c(k);
  std::vector<char> is_pivot(k, 0);
  for (auto p : red.pivots)
    is_pivot[p] = 1;
  for (std::size_t f = 0; f < k; ++f)
    if (!is_pivot[f])
      c[f] = coin(rng);
  for (std::size_t r = 0; r < red.rank; ++r) {
    Rational v = red.matrix(r, k);
    for (std::size_t f = 0; f < k; ++f)
      if (!is_pivot[f])
        v -= red.matrix(r, f) * c[f];
    c[red.pivots[r]] = v;
  }
  RatVector gamma(n);
  for (std::size_t r = 0; r < k; ++r)
    if (sgn(c[r]) != 0)
      for (std::size_t i = 0; i < n; ++i)
        gamma[i] += c[r] * basis(r, n + i);
  return gamma;
}

} // namespace

bool is_reflexive(SubspaceUnion const &rel)
{
  auto const n = rel.ambient_dim() / 2;
  return contains(rel, graph_subspace(RatMatrix::identity(n)));
}

bool is_swap_symmetric(SubspaceUnion const &rel)
{
  auto const n = rel.ambient_dim() / 2;
  return equivalent(image(rel, swap_halves(n)), rel);
}

bool is_diagonally_equivariant(SubspaceUnion const &rel, PermRep const &rep)
{
  if (rel.ambient_dim() != 2 * rep.dim())
    throw DimensionError("representation does not match the relation");
  for (auto const &p : rep.generator_matrices())
    if (!equivalent(image(rel, block_diagonal(p, p)), rel))
      return false;
  return true;
}

RatVector random_vector(Subspace const &s, std::mt19937_64 &rng, long range)
{
  std::uniform_int_distribution<long> coin(-range, range);
  RatVector v(s.ambient_dim());
  auto const &basis = s.basis();
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    Rational const c = coin(rng);
    if (sgn(c) == 0)
      continue;
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += c * basis(r, i);
  }
  return v;
}

bool is_transitive_sampled(SubspaceUnion const &rel, std::mt19937_64 &rng,
                           std::size_t samples)
{
  if (rel.is_empty())
    return true;
  auto const n = rel.ambient_dim() / 2;
  auto const &members = rel.members();
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    auto ab = random_vector(members[pick(rng)], rng);
    std::span<Rational const> alpha(ab.data(), n), beta(ab.data() + n, n);

    std::vector<RatVector> partners;
    for (auto const &m : members)
      if (auto g = random_partner(m, beta, rng))
        partners.push_back(std::move(*g));
    if (partners.empty())
      return false;
    std::uniform_int_distribution<std::size_t> which(0, partners.size() - 1);
    auto const &gamma = partners[which(rng)];

    RatVector ag(alpha.begin(), alpha.end());
    ag.insert(ag.end(), gamma.begin(), gamma.end());
    if (!is_member(rel, ag))
      return false;
  }
  return true;
}

StabilizationResult depth_stabilization_threshold(Architecture const &arch,
                                                  std::size_t repeat_index,
                                                  std::size_t max_reps,
                                                  EngineOptions const &options)
{
  auto const &layers = arch.layers();
  if (repeat_index >= layers.size())
    throw ValidationError("repeat index outside the architecture");
  auto const &rep_layer = layers[repeat_index];
  if (!rep_layer.source().same_as(rep_layer.target()))
    throw ValidationError("repeated layer must map a representation to itself");
  if (!rep_layer.spans_identity())
    throw ValidationError("repeated layer must contain the identity");
  if (max_reps < 2)
    throw ValidationError("need at least two repetitions to compare");

  StabilizationResult result;
  for (std::size_t m = 1; m <= max_reps; ++m) {
    std::vector<LayerSpace> seq(layers.begin(), layers.begin() + repeat_index);
    for (std::size_t c = 0; c < m; ++c)
      seq.push_back(rep_layer);
    seq.insert(seq.end(), layers.begin() + repeat_index + 1, layers.end());
    result.relations.push_back(
        rho(Architecture(std::move(seq), arch.activation_tag()), options));
  }
  for (std::size_t m = 0; m + 1 < result.relations.size(); ++m) {
    auto const &cur = result.relations[m].relation;
    auto const &next = result.relations[m + 1].relation;
    if (!is_subset(next, cur))
      result.monotone = false;
    if (!result.threshold && equivalent(cur, next))
      result.threshold = m + 1;
  }
  return result;
}

namespace {

void check_hidden(std::vector<PermRep> const &reps, std::size_t index)
{
  if (reps.size() < 3 || index == 0 || index + 1 >= reps.size())
    throw ValidationError("index " + std::to_string(index) +
                          " is not a hidden representation");
}

} // namespace

bool verify_width_invariance(std::vector<PermRep> const &reps,
                             std::size_t layer_index, std::size_t mult,
                             EngineOptions const &options)
{
  check_hidden(reps, layer_index);
  if (mult == 0)
    throw ValidationError("multiplicity must be positive");
  auto wide = reps;
  wide[layer_index] = mult_rep(reps[layer_index], mult);
  auto const narrow_rel = rho(full_architecture(reps), options);
  auto const wide_rel = rho(full_architecture(wide), options);
  return equivalent(narrow_rel.relation, wide_rel.relation);
}

bool verify_split_law(std::vector<PermRep> const &reps,
                      std::size_t layer_index, PermRep const &first,
                      PermRep const &second, EngineOptions const &options)
{
  check_hidden(reps, layer_index);
  auto with = [&](PermRep const &v) {
    auto r = reps;
    r[layer_index] = v;
    return rho(full_architecture(r), options).relation;
  };
  auto const joint = with(sum_rep(first, second));
  return equivalent(joint, intersect(with(first), with(second)));
}

HierarchyResult verify_subgroup_hierarchy(Subgroup const &k,
                                          Subgroup const &h,
                                          std::vector<PermRep> reps,
                                          std::size_t slot,
                                          EngineOptions const &options)
{
  if (!k.is_subgroup_of(h))
    throw InvalidSubgroupError("K is not a subgroup of H");
  check_hidden(reps, slot);
  HierarchyResult result;
  reps[slot] = coset_rep(k);
  result.finer = rho(full_architecture(reps), options);
  reps[slot] = coset_rep(h);
  result.coarser = rho(full_architecture(reps), options);
  result.comparison = compare(result.finer, result.coarser);
  return result;
}

} // namespace eqsep
