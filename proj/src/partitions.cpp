#include "eqsep/partitions.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "eqsep/errors.hpp"

namespace eqsep {

namespace {

// Cross products beyond this many partitions are refused; each one turns
// into at least one union member downstream.
constexpr std::size_t max_family_size = 2'000'000;

void canonicalize(std::vector<std::vector<Index>> &blocks)
{
  for (auto &b : blocks)
    std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](auto const &a, auto const &b) { return a.front() < b.front(); });
}

} // namespace

SetPartition::SetPartition(std::vector<Index> ground,
                           std::vector<std::vector<Index>> blocks)
: ground_(std::move(ground)), blocks_(std::move(blocks))
{
  std::sort(ground_.begin(), ground_.end());
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end())
    throw ValidationError("partition ground set has duplicates");
  std::size_t covered = 0;
  for (auto const &b : blocks_) {
    if (b.empty())
      throw ValidationError("partition has an empty block");
    covered += b.size();
  }
  canonicalize(blocks_);
  std::vector<Index> all;
  all.reserve(covered);
  for (auto const &b : blocks_)
    all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  if (all != ground_)
    throw ValidationError("blocks do not partition the ground set");
}

SetPartition SetPartition::singletons(std::vector<Index> ground)
{
  std::vector<std::vector<Index>> blocks;
  for (auto x : ground)
    blocks.push_back({x});
  return SetPartition(std::move(ground), std::move(blocks));
}

SetPartition SetPartition::single_block(std::vector<Index> ground)
{
  if (ground.empty())
    return SetPartition();
  auto block = ground;
  return SetPartition(std::move(ground), {std::move(block)});
}

SetPartition SetPartition::over_range(std::size_t n,
                                      std::vector<std::vector<Index>> blocks)
{
  std::vector<Index> ground(n);
  for (std::size_t i = 0; i < n; ++i)
    ground[i] = static_cast<Index>(i);
  return SetPartition(std::move(ground), std::move(blocks));
}

bool refines(SetPartition const &finer, SetPartition const &coarser)
{
  if (finer.ground() != coarser.ground())
    throw ValidationError("partitions are over different ground sets");
  std::map<Index, std::size_t> block_of;
  for (std::size_t b = 0; b < coarser.blocks().size(); ++b)
    for (auto x : coarser.blocks()[b])
      block_of[x] = b;
  for (auto const &blk : finer.blocks()) {
    auto target = block_of.at(blk.front());
    for (auto x : blk)
      if (block_of.at(x) != target)
        return false;
  }
  return true;
}

SetPartition duplicate_partition(SetPartition const &p)
{
  auto const n = static_cast<Index>(p.ground().size());
  std::vector<Index> ground = p.ground();
  for (auto x : p.ground())
    ground.push_back(x + n);
  std::vector<std::vector<Index>> blocks;
  for (auto const &b : p.blocks()) {
    auto d = b;
    for (auto x : b)
      d.push_back(x + n);
    blocks.push_back(std::move(d));
  }
  return SetPartition(std::move(ground), std::move(blocks));
}

void for_each_partition(std::vector<Index> const &ground,
                        std::function<void(SetPartition const &)> const &visit,
                        std::size_t limit)
{
  std::size_t const n = ground.size();
  if (n > limit)
    throw ResourceError("partition enumeration over " + std::to_string(n) +
                        " points exceeds the limit of " +
                        std::to_string(limit));
  if (n == 0) {
    visit(SetPartition());
    return;
  }
  // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i)).
  std::vector<std::size_t> rgs(n, 0), prefix_max(n, 0);
  auto emit = [&] {
    std::vector<std::vector<Index>> blocks(prefix_max[n - 1] + 1);
    for (std::size_t i = 0; i < n; ++i)
      blocks[rgs[i]].push_back(ground[i]);
    visit(SetPartition(ground, std::move(blocks)));
  };
  while (true) {
    emit();
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1])
      --i;
    if (i == 0)
      return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<SetPartition> all_partitions(std::vector<Index> const &ground,
                                         std::size_t limit)
{
  std::vector<SetPartition> out;
  for_each_partition(ground,
                     [&out](SetPartition const &p) { out.push_back(p); },
                     limit);
  return out;
}

namespace {

using Blocks = std::vector<std::vector<Index>>;

/// Minimal zero-sum partitions of one block's nonzero points.
std::vector<Blocks> minimal_block_family(std::vector<Index> const &points,
                                         std::vector<Rational> const &coeffs)
{
  std::size_t const m = points.size();
  if (m == 0)
    return {Blocks{}};
  std::size_t const masks = std::size_t{1} << m;

  std::vector<Rational> sum(masks);
  std::vector<char> zero(masks, 0), proper_zero(masks, 0), minimal(masks, 0);
  for (std::size_t s = 1; s < masks; ++s) {
    auto low = static_cast<std::size_t>(__builtin_ctzll(s));
    sum[s] = sum[s & (s - 1)] + coeffs[low];
    zero[s] = sgn(sum[s]) == 0;
  }
  for (std::size_t s = 1; s < masks; ++s) {
    for (std::size_t rest = s; rest != 0; rest &= rest - 1) {
      std::size_t sub = s & ~(rest & (~rest + 1));
      if (sub != 0 && (zero[sub] || proper_zero[sub])) {
        proper_zero[s] = 1;
        break;
      }
    }
    minimal[s] = zero[s] && !proper_zero[s];
  }

  std::vector<Blocks> family;
  Blocks current;
  auto recurse = [&](auto &&self, std::size_t remaining) -> void {
    if (remaining == 0) {
      family.push_back(current);
      return;
    }
    std::size_t e = remaining & (~remaining + 1);
    std::size_t rest = remaining ^ e;
    // Enumerate submasks of `rest` in increasing order for a stable output.
    std::vector<std::size_t> subs;
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      if (minimal[sub | e])
        subs.push_back(sub | e);
      if (sub == 0)
        break;
    }
    std::sort(subs.begin(), subs.end());
    for (auto cand : subs) {
      std::vector<Index> blk;
      for (std::size_t b = 0; b < m; ++b)
        if (cand >> b & 1)
          blk.push_back(points[b]);
      current.push_back(std::move(blk));
      self(self, remaining ^ cand);
      current.pop_back();
      if (family.size() > max_family_size)
        throw ResourceError("zero-sum partition family too large");
    }
  };
  recurse(recurse, masks - 1);
  return family;
}

} // namespace

std::vector<SetPartition> zero_sum_partitions(std::span<Rational const> coeffs,
                                              SetPartition const &base,
                                              std::size_t max_block_size)
{
  auto const &ground = base.ground();
  if (coeffs.size() != ground.size())
    throw DimensionError("coefficient vector length " +
                         std::to_string(coeffs.size()) +
                         " does not match ground size " +
                         std::to_string(ground.size()));
  std::map<Index, std::size_t> pos;
  for (std::size_t i = 0; i < ground.size(); ++i)
    pos[ground[i]] = i;

  std::vector<std::vector<Blocks>> families;
  Blocks zero_singletons;
  for (auto const &blk : base.blocks()) {
    if (blk.size() > max_block_size)
      throw ResourceError("bias block of size " + std::to_string(blk.size()) +
                          " exceeds max block size " +
                          std::to_string(max_block_size));
    std::vector<Index> nz_points;
    std::vector<Rational> nz_coeffs;
    for (auto x : blk) {
      auto const &a = coeffs[pos.at(x)];
      if (sgn(a) == 0)
        zero_singletons.push_back({x});
      else {
        nz_points.push_back(x);
        nz_coeffs.push_back(a);
      }
    }
    auto fam = minimal_block_family(nz_points, nz_coeffs);
    if (fam.empty())
      return {};
    families.push_back(std::move(fam));
  }

  std::size_t total = 1;
  for (auto const &f : families) {
    total *= f.size();
    if (total > max_family_size)
      throw ResourceError("zero-sum partition family too large");
  }

  std::vector<SetPartition> out;
  out.reserve(total);
  std::vector<std::size_t> choice(families.size(), 0);
  while (true) {
    Blocks blocks = zero_singletons;
    for (std::size_t f = 0; f < families.size(); ++f) {
      auto const &part = families[f][choice[f]];
      blocks.insert(blocks.end(), part.begin(), part.end());
    }
    out.emplace_back(ground, std::move(blocks));

    std::size_t f = 0;
    while (f < families.size() && ++choice[f] == families[f].size())
      choice[f++] = 0;
    if (f == families.size())
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace eqsep
