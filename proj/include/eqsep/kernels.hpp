#ifndef EQSEP_KERNELS_HPP
#define EQSEP_KERNELS_HPP

#include <vector>

#include "exactlin.hpp"

// Data-parallel hot loops of the library. Each kernel has an OpenMP version
// (used by default) and a serial reference with identical semantics; the
// tests check that the two agree and bench/ compares their throughput.

namespace eqsep::kernels {

enum class Exec { serial, parallel };

/// Sets the process-wide default used by the public wrappers.
void set_default_exec(Exec exec);
Exec default_exec();

/// Overrides the default on the calling thread for its lifetime.
class ScopedExec
{
public:
  explicit ScopedExec(Exec exec);
  ~ScopedExec();
  ScopedExec(ScopedExec const &) = delete;
  ScopedExec &operator=(ScopedExec const &) = delete;

private:
  int previous_;
};

/// False inside an active parallel region; nested regions would only add
/// fork overhead.
bool may_fork();

/// Flags members strictly contained in a member of larger dimension.
/// Input must be sorted canonically and deduplicated.
std::vector<char> absorbed_flags_serial(std::vector<Subspace> const &sorted);
std::vector<char> absorbed_flags_parallel(std::vector<Subspace> const &sorted);

/// All pairwise intersections, row-major over (u, v); not normalized.
std::vector<Subspace> pairwise_intersect_serial(SubspaceUnion const &u,
                                                SubspaceUnion const &v);
std::vector<Subspace> pairwise_intersect_parallel(SubspaceUnion const &u,
                                                  SubspaceUnion const &v);

std::vector<char> absorbed_flags(std::vector<Subspace> const &sorted);
std::vector<Subspace> pairwise_intersect(SubspaceUnion const &u,
                                         SubspaceUnion const &v);

} // namespace eqsep::kernels

#endif // EQSEP_KERNELS_HPP
