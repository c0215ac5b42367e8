#ifndef EQSEP_SUITES_HPP
#define EQSEP_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eqsep/empirical.hpp"
#include "eqsep/separation.hpp"

// Checkable instances of the separation results, grouped into named
// suites. Used by `eqsep verify` and by the acceptance test binary.

namespace eqsep {

/// k-CNN on Z_n: circular_layer(n, k) followed by the sum readout.
Architecture cnn_architecture(std::size_t n, std::size_t k);

/// N(R^G, R^G, R^{G/H}) with full layers and the regular input.
Architecture regular_orbit_architecture(Subgroup const &h);

/// One hidden 2-IGN layer on [n]^2 followed by the invariant readout.
Architecture ign_readout_architecture(std::size_t n);

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json evidence = nlohmann::json::object();
  nlohmann::json counterexample;  // null unless failed
  double seconds = 0;
};

struct SuiteReport
{
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0;

  bool passed() const;
  CheckResult const *first_failure() const;
  /// Deterministic part only; timings are reported separately.
  nlohmann::json to_json() const;
  nlohmann::json timing_json() const;
};

/// A relation computed by a suite, with the input representation needed for
/// the diagonal-equivariance check.
struct LoggedRelation
{
  std::string name;
  SubspaceUnion relation;
  PermRep input;
};

struct SuiteOptions
{
  EngineOptions engine;
  OracleOptions oracle;
  std::uint64_t seed = 20240601;
  std::size_t pairs_per_architecture = 50;
  std::size_t random_algebra_instances = 1000;
  std::vector<LoggedRelation> *log = nullptr;
};

/// regular, cnn, depth, width, hierarchy, activations, basis, partitions,
/// algebra, ign.
std::vector<std::string> const &suite_names();
bool is_suite(std::string const &name);

/// Throws ConfigError for unknown names.
SuiteReport run_suite(std::string const &name, SuiteOptions const &options);

} // namespace eqsep

#endif // EQSEP_SUITES_HPP
