#ifndef EQSEP_CONFIG_HPP
#define EQSEP_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqsep/empirical.hpp"
#include "eqsep/equivariant.hpp"
#include "eqsep/separation.hpp"

// Text front end: group / subgroup / representation spec strings and the
// JSON architecture config.
//
//   group    := cyclic(n) | symmetric(n) | dihedral(n) | product(group, group)
//             | generated([perm, ...])
//   subgroup := trivial | full | alternating | generated_subgroup([perm, ...])
//   rep      := regular | natural | trivial | cosets(subgroup) | power(n, k)
//             | sum(rep, rep, ...) | mult(rep, f)
//   perm     := [i_0, i_1, ...]   (one-line image notation, 0-based)

namespace eqsep {

/// Parsed spec expression: an integer, a bracketed list, or a name with an
/// optional parenthesized argument list.
struct SpecTerm
{
  enum class Kind { integer, list, call };

  Kind kind = Kind::call;
  long value = 0;
  std::string name;
  std::vector<SpecTerm> args;
  bool has_parens = false;

  std::string str() const;
};

SpecTerm parse_spec(std::string_view text);

GroupPtr parse_group(std::string_view text);
Subgroup parse_subgroup(GroupPtr const &g, std::string_view text);

struct RepSpec
{
  PermRep rep;
  std::optional<Subgroup> coset_subgroup;  // set for cosets(...)
};

RepSpec parse_rep(GroupPtr const &g, std::string_view text);

struct ArchitectureConfig
{
  std::string group_spec;
  GroupPtr group;
  Architecture architecture;
  ActivationKind activation = ActivationKind::relu;
  EngineOptions engine;
};

/// Field errors name the JSON path, syntax errors the line.
ArchitectureConfig parse_architecture_config(std::string_view text);
ArchitectureConfig load_architecture_config(std::filesystem::path const &path);

std::string read_text_file(std::filesystem::path const &path);

/// "1,2,3", "[1, 2/3, -4]" or a JSON array of numbers / rational strings.
RatVector parse_rational_vector(std::string_view text);
std::vector<double> to_doubles(RatVector const &v);

} // namespace eqsep

#endif // EQSEP_CONFIG_HPP
