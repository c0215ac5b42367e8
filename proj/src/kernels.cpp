#include "eqsep/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eqsep::kernels {

namespace {

std::atomic<Exec> g_default_exec{Exec::parallel};
thread_local int t_override = -1;

// Below this many candidate checks the fork/join overhead dominates.
constexpr std::size_t parallel_cutoff = 64;

bool absorbed(std::vector<Subspace> const &sorted, std::size_t i)
{
  for (std::size_t j = 0; j < i; ++j) {
    if (sorted[j].dim() <= sorted[i].dim())
      break;
    if (contains(sorted[j], sorted[i]))
      return true;
  }
  return false;
}

} // namespace

void set_default_exec(Exec exec)
{ g_default_exec.store(exec); }

Exec default_exec()
{
  if (t_override >= 0)
    return static_cast<Exec>(t_override);
  return g_default_exec.load();
}

ScopedExec::ScopedExec(Exec exec) : previous_(t_override)
{ t_override = static_cast<int>(exec); }

ScopedExec::~ScopedExec()
{ t_override = previous_; }

bool may_fork()
{
#ifdef _OPENMP
  return !omp_in_parallel();
#else
  return false;
#endif
}

std::vector<char> absorbed_flags_serial(std::vector<Subspace> const &sorted)
{
  std::vector<char> flags(sorted.size(), 0);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    flags[i] = absorbed(sorted, i) ? 1 : 0;
  return flags;
}

std::vector<char> absorbed_flags_parallel(std::vector<Subspace> const &sorted)
{
  std::vector<char> flags(sorted.size(), 0);
  auto const n = static_cast<long>(sorted.size());
  // Containment is transitive, so testing against every larger member (not
  // only the survivors) gives the same answer as the sequential sweep.
#pragma omp parallel for schedule(dynamic, 8) if (sorted.size() > parallel_cutoff && may_fork())
  for (long i = 0; i < n; ++i)
    flags[static_cast<std::size_t>(i)] =
        absorbed(sorted, static_cast<std::size_t>(i)) ? 1 : 0;
  return flags;
}

std::vector<Subspace> pairwise_intersect_serial(SubspaceUnion const &u,
                                                SubspaceUnion const &v)
{
  std::vector<Subspace> out;
  out.reserve(u.size() * v.size());
  for (auto const &a : u.members())
    for (auto const &b : v.members())
      out.push_back(intersect(a, b));
  return out;
}

std::vector<Subspace> pairwise_intersect_parallel(SubspaceUnion const &u,
                                                  SubspaceUnion const &v)
{
  std::size_t const nu = u.size(), nv = v.size();
  std::vector<Subspace> out(nu * nv);
  auto const total = static_cast<long>(nu * nv);
#pragma omp parallel for schedule(dynamic, 4) if (nu * nv > parallel_cutoff && may_fork())
  for (long k = 0; k < total; ++k) {
    auto idx = static_cast<std::size_t>(k);
    out[idx] = intersect(u.members()[idx / nv], v.members()[idx % nv]);
  }
  return out;
}

std::vector<char> absorbed_flags(std::vector<Subspace> const &sorted)
{
  return default_exec() == Exec::parallel ? absorbed_flags_parallel(sorted)
                                          : absorbed_flags_serial(sorted);
}

std::vector<Subspace> pairwise_intersect(SubspaceUnion const &u,
                                         SubspaceUnion const &v)
{
  return default_exec() == Exec::parallel ? pairwise_intersect_parallel(u, v)
                                          : pairwise_intersect_serial(u, v);
}

} // namespace eqsep::kernels
