#include "eqsep/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eqsep/errors.hpp"

namespace eqsep::cli {

EngineOptions LimitOverrides::apply(EngineOptions base) const
{
  if (max_union_members)
    base.max_union_members = *max_union_members;
  if (max_block_size)
    base.max_block_size = *max_block_size;
  base.exec = exec;
  return base;
}

Comparison parse_comparison(std::string const &text)
{
  for (auto c : {Comparison::equal, Comparison::strict_subset,
                 Comparison::strict_superset, Comparison::incomparable})
    if (to_string(c) == text)
      return c;
  throw ConfigError("unknown comparison '" + text +
                    "' (expected equal, strict_subset, strict_superset or "
                    "incomparable)");
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

nlohmann::json limits_json(EngineOptions const &e)
{
  return {{"max_union_members", e.max_union_members},
          {"max_block_size", e.max_block_size}};
}

std::string digest_of(nlohmann::json const &inputs)
{ return fnv1a_hex(inputs.dump()); }

nlohmann::json rational_json(RatVector const &v)
{
  auto j = nlohmann::json::array();
  for (auto const &q : v)
    j.push_back(to_string(q));
  return j;
}

std::string render_vector(RatVector const &v)
{
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

std::string render_relation(SubspaceUnion const &u)
{
  std::ostringstream os;
  os << "relation in Q^" << u.ambient_dim() << " with " << u.size()
     << " member(s)\n";
  for (std::size_t m = 0; m < u.size(); ++m) {
    auto const &s = u.members()[m];
    os << "  member " << m << ": dim " << s.dim() << ", "
       << s.constraints().rows() << " constraint(s)\n";
    for (std::size_t r = 0; r < s.constraints().rows(); ++r) {
      os << "    [";
      auto row = s.constraints().row(r);
      for (std::size_t c = 0; c < row.size(); ++c)
        os << (c ? " " : "") << to_string(row[c]);
      os << "]\n";
    }
  }
  return os.str();
}

} // namespace

Outcome cmd_rho(ArchitectureConfig const &cfg, LimitOverrides const &lim)
{
  auto const engine = lim.apply(cfg.engine);
  auto const start = Clock::now();
  auto rel = rho(cfg.architecture, engine);
  Outcome out;
  out.wall_ms = ms_since(start);
  out.result = rel.to_json();
  out.stats = rel.stats.to_json();
  out.inputs_digest = digest_of({{"architecture", rel.architecture_digest},
                                 {"limits", limits_json(engine)}});
  out.text = "architecture " + rel.architecture_digest + "\n" +
             render_relation(rel.relation);
  return out;
}

Outcome cmd_identify(ArchitectureConfig const &cfg, RatVector const &alpha,
                     RatVector const &beta, LimitOverrides const &lim,
                     std::optional<bool> expect_identified)
{
  auto const engine = lim.apply(cfg.engine);
  auto const start = Clock::now();
  auto rel = rho(cfg.architecture, engine);
  bool const same = identifies(rel, alpha, beta);
  Outcome out;
  out.wall_ms = ms_since(start);
  out.result = {{"identified", same},
                {"alpha", rational_json(alpha)},
                {"beta", rational_json(beta)},
                {"relation_members", rel.relation.size()}};
  out.stats = rel.stats.to_json();
  out.inputs_digest = digest_of({{"architecture", rel.architecture_digest},
                                 {"alpha", rational_json(alpha)},
                                 {"beta", rational_json(beta)},
                                 {"limits", limits_json(engine)}});
  out.text = render_vector(alpha) + " and " + render_vector(beta) + " are " +
             (same ? "identified" : "separated") + "\n";
  if (expect_identified && *expect_identified != same) {
    out.exit_code = exit_property_failed;
    out.result["expected"] = *expect_identified ? "identified" : "separated";
  }
  return out;
}

Outcome cmd_compare(ArchitectureConfig const &a, ArchitectureConfig const &b,
                    LimitOverrides const &lim, std::optional<Comparison> expect)
{
  auto const ea = lim.apply(a.engine);
  auto const eb = lim.apply(b.engine);
  auto const start = Clock::now();
  auto ra = rho(a.architecture, ea);
  auto rb = rho(b.architecture, eb);
  auto const c = compare(ra, rb);
  Outcome out;
  out.wall_ms = ms_since(start);
  out.result = {{"comparison", to_string(c)},
                {"members_a", ra.relation.size()},
                {"members_b", rb.relation.size()},
                {"architecture_a", ra.architecture_digest},
                {"architecture_b", rb.architecture_digest}};
  out.stats = {{"a", ra.stats.to_json()}, {"b", rb.stats.to_json()}};
  out.inputs_digest = digest_of({{"a", ra.architecture_digest},
                                 {"b", rb.architecture_digest},
                                 {"limits_a", limits_json(ea)},
                                 {"limits_b", limits_json(eb)}});
  out.text = "rho(A) " + to_string(c) + " rho(B)\n";
  if (expect && *expect != c) {
    out.exit_code = exit_property_failed;
    out.result["expected"] = to_string(*expect);
  }
  return out;
}

Outcome cmd_stabilize(ArchitectureConfig const &cfg, std::size_t layer,
                      std::size_t max_reps, LimitOverrides const &lim)
{
  auto const engine = lim.apply(cfg.engine);
  auto const start = Clock::now();
  auto res =
      depth_stabilization_threshold(cfg.architecture, layer, max_reps, engine);
  Outcome out;
  out.wall_ms = ms_since(start);
  auto members = nlohmann::json::array();
  auto stats = nlohmann::json::array();
  for (auto const &r : res.relations) {
    members.push_back(r.relation.size());
    stats.push_back(r.stats.to_json());
  }
  out.result = {{"layer", layer},
                {"max_reps", max_reps},
                {"monotone", res.monotone},
                {"members_per_repetition", members}};
  if (res.threshold) {
    out.result["threshold"] = *res.threshold;
    out.result["status"] = "stabilized";
  } else {
    out.result["threshold"] = nullptr;
    out.result["status"] = "not stabilized by max_reps";
  }
  out.stats = {{"per_repetition", stats}};
  out.inputs_digest =
      digest_of({{"architecture", cfg.architecture.digest()},
                 {"layer", layer},
                 {"max_reps", max_reps},
                 {"limits", limits_json(engine)}});
  out.text = (res.threshold ? "threshold R = " + std::to_string(*res.threshold)
                            : std::string("not stabilized by max_reps")) +
             ", chain " + (res.monotone ? "monotone" : "NOT monotone") + "\n";
  if (!res.monotone)
    out.exit_code = exit_property_failed;
  return out;
}

Outcome cmd_verify(std::string const &suite, SuiteOptions options)
{
  std::vector<std::string> names;
  if (suite == "all")
    names = suite_names();
  else if (is_suite(suite))
    names = {suite};
  else
    throw ConfigError("unknown suite '" + suite + "'");

  std::vector<LoggedRelation> log;
  options.log = &log;
  auto const start = Clock::now();
  Outcome out;
  auto reports = nlohmann::json::array();
  auto timing = nlohmann::json::object();
  bool all_passed = true;
  std::ostringstream text;
  for (auto const &name : names) {
    auto rep = run_suite(name, options);
    reports.push_back(rep.to_json());
    timing[name] = rep.timing_json();
    for (auto const &c : rep.checks)
      text << (c.passed ? "PASS " : "FAIL ") << name << ": " << c.name
           << " (" << c.detail << ")\n";
    if (!rep.passed() && all_passed) {
      all_passed = false;
      auto const *f = rep.first_failure();
      out.result["first_counterexample"] = {
          {"suite", name},
          {"check", f->name},
          {"detail", f->detail},
          {"counterexample", f->counterexample}};
    }
  }
  out.wall_ms = ms_since(start);
  out.result["suite"] = suite;
  out.result["passed"] = all_passed;
  out.result["reports"] = std::move(reports);
  out.stats = {{"suite_timing", std::move(timing)}};
  out.inputs_digest =
      digest_of({{"suite", suite},
                 {"seed", options.seed},
                 {"oracle_seed", options.oracle.seed},
                 {"samples", options.oracle.samples},
                 {"limits", limits_json(options.engine)}});
  out.text = text.str();
  out.exit_code = all_passed ? exit_ok : exit_property_failed;
  return out;
}

Outcome cmd_empirical(ArchitectureConfig const &cfg,
                      std::vector<double> const &alpha,
                      std::vector<double> const &beta,
                      ActivationKind activation, OracleOptions const &oracle,
                      std::optional<bool> expect_separated)
{
  auto const start = Clock::now();
  auto v = mc_separation(cfg.architecture, activation, alpha, beta, oracle);
  Outcome out;
  out.wall_ms = ms_since(start);
  out.result = {{"oracle", v.to_json()},
                {"activation", to_string(activation)},
                {"polynomial_activation", is_polynomial(activation)},
                {"alpha", alpha},
                {"beta", beta}};
  out.stats = {{"evaluated", v.evaluated}, {"discarded", v.discarded}};
  out.inputs_digest = digest_of({{"architecture", cfg.architecture.digest()},
                                 {"activation", to_string(activation)},
                                 {"alpha", alpha},
                                 {"beta", beta},
                                 {"samples", oracle.samples},
                                 {"tol_sep", oracle.tol_sep},
                                 {"tol_id", oracle.tol_id},
                                 {"seed", oracle.seed},
                                 {"scales", oracle.scales}});
  std::ostringstream text;
  text << "verdict: " << to_string(v.kind) << " (gap " << v.gap << ", "
       << v.evaluated << " samples, " << v.discarded << " discarded)\n";
  if (is_polynomial(activation))
    text << "note: polynomial activation; verdict is not evidence about "
            "the symbolic relation\n";
  out.text = text.str();
  if (expect_separated && *expect_separated != v.separated()) {
    out.exit_code = exit_property_failed;
    out.result["expected"] = *expect_separated ? "separated" : "identified";
  }
  return out;
}

Outcome cmd_basis(GroupPtr const &g, RepSpec const &source,
                  RepSpec const &target, std::string const &kind,
                  bool with_matrices)
{
  auto const start = Clock::now();
  std::vector<RatMatrix> gens;
  if (kind == "commutant")
    gens = commutant_basis(source.rep, target.rep).generators;
  else if (kind == "double_coset") {
    if (!source.coset_subgroup || !target.coset_subgroup)
      throw ConfigError("double_coset basis needs cosets(...) source and "
                        "target");
    gens = double_coset_basis(*source.coset_subgroup, *target.coset_subgroup)
               .generators;
  } else
    throw ConfigError("unknown basis kind '" + kind +
                      "' (expected commutant or double_coset)");
  Outcome out;
  out.wall_ms = ms_since(start);
  out.result = {{"kind", kind},
                {"count", gens.size()},
                {"source_dim", source.rep.dim()},
                {"target_dim", target.rep.dim()},
                {"group_order", g->order()}};
  if (with_matrices) {
    auto mats = nlohmann::json::array();
    for (auto const &m : gens) {
      auto rows = nlohmann::json::array();
      for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (auto const &q : m.row(r))
          row.push_back(to_string(q));
        rows.push_back(std::move(row));
      }
      mats.push_back(std::move(rows));
    }
    out.result["generators"] = std::move(mats);
  }
  out.inputs_digest = digest_of({{"kind", kind},
                                 {"source_dim", source.rep.dim()},
                                 {"target_dim", target.rep.dim()},
                                 {"group_order", g->order()}});
  out.text = std::to_string(gens.size()) + " " + kind + " generator(s), " +
             std::to_string(target.rep.dim()) + "x" +
             std::to_string(source.rep.dim()) + "\n";
  return out;
}

namespace {

struct GlobalFlags
{
  int threads = 0;
  std::optional<std::size_t> max_union_members;
  std::optional<std::size_t> max_block_size;
  std::string output;
  std::string format = "json";
  std::string exec = "parallel";
  bool no_timing = false;
};

struct OracleFlags
{
  std::size_t samples = 1000;
  double tol_sep = 1e-4;
  double tol_id = 1e-7;
  std::uint64_t seed = 0;
  std::string scales = "0.1,1,10";

  OracleOptions options(kernels::Exec exec) const
  {
    OracleOptions o;
    o.samples = samples;
    o.tol_sep = tol_sep;
    o.tol_id = tol_id;
    o.seed = seed;
    o.exec = exec;
    o.scales.clear();
    std::stringstream ss(scales);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size() || !(v > 0))
          throw std::invalid_argument(item);
        o.scales.push_back(v);
      } catch (std::logic_error const &) {
        throw ConfigError("--scales expects positive numbers, got '" + item +
                          "'");
      }
    }
    if (o.scales.empty())
      throw ConfigError("--scales is empty");
    return o;
  }
};

void add_oracle_flags(CLI::App *sub, OracleFlags &f)
{
  sub->add_option("--samples", f.samples, "networks sampled per scale")
      ->capture_default_str();
  sub->add_option("--tol-sep", f.tol_sep, "gap above which a pair is separated")
      ->capture_default_str();
  sub->add_option("--tol-id", f.tol_id, "gap below which a sample agrees")
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "oracle seed")->capture_default_str();
  sub->add_option("--scales", f.scales, "coefficient scale ladder")
      ->capture_default_str();
}

std::string emit(std::string const &command, Outcome const &o,
                 GlobalFlags const &g)
{
  if (g.format == "text")
    return o.text;
  nlohmann::json report{{"schema_version", report_schema_version},
                        {"tool", "eqsep"},
                        {"tool_version", tool_version},
                        {"command", command},
                        {"inputs_digest", o.inputs_digest},
                        {"result", o.result},
                        {"stats", o.stats}};
  if (!g.no_timing)
    report["timing"] = {{"wall_ms", o.wall_ms}};
  return report.dump(2) + "\n";
}

void write_output(std::string const &text, GlobalFlags const &g,
                  std::ostream &out)
{
  if (g.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.output, std::ios::binary);
  if (!f)
    throw ConfigError("cannot write '" + g.output + "'");
  f << text;
}

std::optional<bool> parse_expect(std::string const &text,
                                 std::string const &yes,
                                 std::string const &no)
{
  if (text.empty())
    return std::nullopt;
  if (text == yes)
    return true;
  if (text == no)
    return false;
  throw ConfigError("--expect must be '" + yes + "' or '" + no + "'");
}

} // namespace

int run(int argc, char const *const *argv, std::ostream &out,
        std::ostream &err)
{
  CLI::App app{"Exact separation power of equivariant networks over finite "
               "groups"};
  app.name("eqsep");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--threads", g.threads, "cap on worker threads (0 = all)");
  app.add_option("--max-union-members", g.max_union_members,
                 "cap on subspace union size");
  app.add_option("--max-block-size", g.max_block_size,
                 "cap on bias block size handed to the partition enumerator");
  app.add_option("--output", g.output, "write the report to this path");
  app.add_option("--format", g.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--exec", g.exec, "parallel or serial kernels")
      ->check(CLI::IsMember({"parallel", "serial"}));
  app.add_flag("--no-timing", g.no_timing, "omit the timing field");

  std::string config, config_b, alpha, beta, expect, suite, graph_a, graph_b;
  std::string activation = "relu", group_spec, source_spec, target_spec;
  std::string basis_kind = "commutant";
  std::size_t layer = 0, max_reps = 3;
  bool matrices = false;
  OracleFlags oracle_flags;
  std::uint64_t suite_seed = SuiteOptions{}.seed;

  auto *c_rho = app.add_subcommand("rho", "compute the identification relation");
  c_rho->add_option("config", config, "architecture config (JSON)")->required();

  auto *c_id = app.add_subcommand("identify", "test one input pair");
  c_id->add_option("config", config, "architecture config (JSON)")->required();
  c_id->add_option("--alpha", alpha, "first input, e.g. 1,2,3")->required();
  c_id->add_option("--beta", beta, "second input")->required();
  c_id->add_option("--expect", expect, "identified or separated");

  auto *c_cmp = app.add_subcommand("compare", "compare two relations");
  c_cmp->add_option("config_a", config, "first config")->required();
  c_cmp->add_option("config_b", config_b, "second config")->required();
  c_cmp->add_option("--expect", expect,
                    "equal, strict_subset, strict_superset or incomparable");

  auto *c_stab = app.add_subcommand("stabilize", "depth repetition threshold");
  c_stab->add_option("config", config, "architecture config (JSON)")
      ->required();
  c_stab->add_option("--layer", layer, "0-based index of the repeated layer")
      ->capture_default_str();
  c_stab->add_option("--max", max_reps, "largest repetition count")
      ->capture_default_str();

  auto *c_ver = app.add_subcommand("verify", "run a verification suite");
  c_ver->add_option("suite", suite,
                    "activations | depth | width | hierarchy | cnn | regular "
                    "| basis | partitions | algebra | ign | all")
      ->required();
  c_ver->add_option("--suite-seed", suite_seed, "seed for sampled instances")
      ->capture_default_str();
  add_oracle_flags(c_ver, oracle_flags);

  auto *c_emp = app.add_subcommand("empirical", "Monte Carlo separation oracle");
  c_emp->add_option("config", config, "architecture config (JSON)")->required();
  c_emp->add_option("--alpha", alpha, "first input");
  c_emp->add_option("--beta", beta, "second input");
  c_emp->add_option("--graph-a", graph_a, "edge list used as first input");
  c_emp->add_option("--graph-b", graph_b, "edge list used as second input");
  c_emp->add_option("--activation", activation,
                    "relu, tanh, sigmoid or identity")
      ->capture_default_str();
  c_emp->add_option("--expect", expect, "separated or identified");
  add_oracle_flags(c_emp, oracle_flags);

  auto *c_basis = app.add_subcommand("basis", "equivariant basis of a layer");
  c_basis->add_option("--group", group_spec, "group spec")->required();
  c_basis->add_option("--source", source_spec, "source representation")
      ->required();
  c_basis->add_option("--target", target_spec, "target representation")
      ->required();
  c_basis->add_option("--kind", basis_kind, "commutant or double_coset")
      ->capture_default_str();
  c_basis->add_flag("--matrices", matrices, "include the generator matrices");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input_error;
  }

  std::string command;
  try {
#ifdef _OPENMP
    if (g.threads > 0)
      omp_set_num_threads(g.threads);
#endif
    LimitOverrides lim;
    lim.max_union_members = g.max_union_members;
    lim.max_block_size = g.max_block_size;
    lim.exec = g.exec == "serial" ? kernels::Exec::serial
                                  : kernels::Exec::parallel;
    kernels::set_default_exec(lim.exec);

    Outcome o;
    if (c_rho->parsed()) {
      command = "rho";
      o = cmd_rho(load_architecture_config(config), lim);
    } else if (c_id->parsed()) {
      command = "identify";
      auto cfg = load_architecture_config(config);
      o = cmd_identify(cfg, parse_rational_vector(alpha),
                       parse_rational_vector(beta), lim,
                       parse_expect(expect, "identified", "separated"));
    } else if (c_cmp->parsed()) {
      command = "compare";
      auto a = load_architecture_config(config);
      auto b = load_architecture_config(config_b);
      std::optional<Comparison> exp;
      if (!expect.empty())
        exp = parse_comparison(expect);
      o = cmd_compare(a, b, lim, exp);
    } else if (c_stab->parsed()) {
      command = "stabilize";
      o = cmd_stabilize(load_architecture_config(config), layer, max_reps, lim);
    } else if (c_ver->parsed()) {
      command = "verify";
      SuiteOptions so;
      so.engine = lim.apply(so.engine);
      so.oracle = oracle_flags.options(lim.exec);
      so.seed = suite_seed;
      o = cmd_verify(suite, so);
    } else if (c_emp->parsed()) {
      command = "empirical";
      auto cfg = load_architecture_config(config);
      std::vector<double> a, b;
      bool const graphs = !graph_a.empty() || !graph_b.empty();
      bool const vectors = !alpha.empty() || !beta.empty();
      if (graphs == vectors)
        throw ConfigError("give either --alpha/--beta or --graph-a/--graph-b");
      nlohmann::json wl;
      if (graphs) {
        if (graph_a.empty() || graph_b.empty())
          throw ConfigError("both --graph-a and --graph-b are required");
        auto ga = parse_edge_list(read_text_file(graph_a));
        auto gb = parse_edge_list(read_text_file(graph_b));
        if (ga.n != gb.n)
          throw ConfigError("graphs have different node counts");
        a = ga.flattened();
        b = gb.flattened();
        wl = {{"k1_distinguishes", wl_distinguishes(ga, gb, 1)},
              {"k2_distinguishes", wl_distinguishes(ga, gb, 2)}};
      } else {
        if (alpha.empty() || beta.empty())
          throw ConfigError("both --alpha and --beta are required");
        a = to_doubles(parse_rational_vector(alpha));
        b = to_doubles(parse_rational_vector(beta));
      }
      o = cmd_empirical(cfg, a, b, parse_activation(activation),
                        oracle_flags.options(lim.exec),
                        parse_expect(expect, "separated", "identified"));
      if (!wl.is_null()) {
        o.result["wl"] = wl;
        o.text += std::string("1-WL ") +
                  (wl["k1_distinguishes"].get<bool>() ? "distinguishes"
                                                      : "does not distinguish") +
                  ", 2-WL " +
                  (wl["k2_distinguishes"].get<bool>() ? "distinguishes"
                                                      : "does not distinguish") +
                  "\n";
      }
    } else if (c_basis->parsed()) {
      command = "basis";
      auto grp = parse_group(group_spec);
      o = cmd_basis(grp, parse_rep(grp, source_spec),
                    parse_rep(grp, target_spec), basis_kind, matrices);
    }
    write_output(emit(command, o, g), g, out);
    if (o.exit_code == exit_property_failed && g.format == "json" &&
        o.result.contains("first_counterexample"))
      err << "verification failed: "
          << o.result["first_counterexample"]["check"].get<std::string>()
          << "\n";
    return o.exit_code;
  } catch (ResourceError const &e) {
    err << "resource limit: " << e.what() << "\n";
    nlohmann::json partial = nlohmann::json::parse(e.partial(), nullptr, false);
    if (partial.is_discarded())
      partial = nlohmann::json::object();
    nlohmann::json report{{"schema_version", report_schema_version},
                          {"tool", "eqsep"},
                          {"tool_version", tool_version},
                          {"command", command},
                          {"error", {{"kind", "resource_limit"},
                                     {"message", e.what()}}},
                          {"partial_stats", partial}};
    try {
      write_output(report.dump(2) + "\n", g, out);
    } catch (Error const &) {
    }
    return exit_resource_limit;
  } catch (OracleUnreliableError const &e) {
    err << "oracle unreliable: " << e.what() << "\n";
    return exit_resource_limit;
  } catch (Error const &e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (nlohmann::json::exception const &e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
}

} // namespace eqsep::cli
