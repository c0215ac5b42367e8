#ifndef EQSEP_CLI_HPP
#define EQSEP_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eqsep/config.hpp"
#include "eqsep/suites.hpp"

namespace eqsep::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_property_failed = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_resource_limit = 3;

inline constexpr int report_schema_version = 1;
inline constexpr char const *tool_version = "0.3.0";

/// Command result before it is wrapped into a report.
struct Outcome
{
  nlohmann::json result;
  nlohmann::json stats = nlohmann::json::object();
  std::string inputs_digest;
  double wall_ms = 0;
  int exit_code = exit_ok;
  std::string text;  // human-readable rendering for --format text
};

/// Global limits from the command line; unset fields keep config values.
struct LimitOverrides
{
  std::optional<std::size_t> max_union_members;
  std::optional<std::size_t> max_block_size;
  kernels::Exec exec = kernels::Exec::parallel;

  EngineOptions apply(EngineOptions base) const;
};

Outcome cmd_rho(ArchitectureConfig const &cfg, LimitOverrides const &lim);
Outcome cmd_identify(ArchitectureConfig const &cfg, RatVector const &alpha,
                     RatVector const &beta, LimitOverrides const &lim,
                     std::optional<bool> expect_identified);
Outcome cmd_compare(ArchitectureConfig const &a, ArchitectureConfig const &b,
                    LimitOverrides const &lim,
                    std::optional<Comparison> expect);
Outcome cmd_stabilize(ArchitectureConfig const &cfg, std::size_t layer,
                      std::size_t max_reps, LimitOverrides const &lim);
Outcome cmd_verify(std::string const &suite, SuiteOptions options);
Outcome cmd_empirical(ArchitectureConfig const &cfg,
                      std::vector<double> const &alpha,
                      std::vector<double> const &beta,
                      ActivationKind activation, OracleOptions const &oracle,
                      std::optional<bool> expect_separated);
Outcome cmd_basis(GroupPtr const &g, RepSpec const &source,
                  RepSpec const &target, std::string const &kind,
                  bool with_matrices);

Comparison parse_comparison(std::string const &text);

/// Full command line front end. Returns the process exit code.
int run(int argc, char const *const *argv, std::ostream &out,
        std::ostream &err);

} // namespace eqsep::cli

#endif // EQSEP_CLI_HPP
