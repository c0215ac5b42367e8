#include "eqsep/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "eqsep/config.hpp"
#include "eqsep/errors.hpp"

namespace eqsep {

Architecture cnn_architecture(std::size_t n, std::size_t k)
{
  auto conv = circular_layer(n, k);
  auto readout = full_layer(conv.target(), trivial_rep(conv.target().group()));
  return Architecture({std::move(conv), std::move(readout)});
}

Architecture regular_orbit_architecture(Subgroup const &h)
{
  auto reg = regular_rep(h.parent());
  return full_architecture({reg, reg, coset_rep(h)});
}

Architecture ign_readout_architecture(std::size_t n)
{
  auto hidden = ign_layer(n, 2, 1, 1);
  auto readout =
      full_layer(hidden.target(), trivial_rep(hidden.target().group()));
  return Architecture({std::move(hidden), std::move(readout)});
}

bool SuiteReport::passed() const
{
  return std::all_of(checks.begin(), checks.end(),
                     [](CheckResult const &c) { return c.passed; });
}

CheckResult const *SuiteReport::first_failure() const
{
  for (auto const &c : checks)
    if (!c.passed)
      return &c;
  return nullptr;
}

nlohmann::json SuiteReport::to_json() const
{
  auto arr = nlohmann::json::array();
  for (auto const &c : checks) {
    nlohmann::json j{{"name", c.name},
                     {"passed", c.passed},
                     {"detail", c.detail},
                     {"evidence", c.evidence}};
    if (!c.counterexample.is_null())
      j["counterexample"] = c.counterexample;
    arr.push_back(std::move(j));
  }
  return {{"suite", suite}, {"passed", passed()}, {"checks", std::move(arr)}};
}

nlohmann::json SuiteReport::timing_json() const
{
  auto per = nlohmann::json::object();
  for (auto const &c : checks)
    per[c.name] = c.seconds;
  return {{"suite_seconds", seconds}, {"checks", std::move(per)}};
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start)
{ return std::chrono::duration<double>(Clock::now() - start).count(); }

/// Runs one check; library errors other than resource limits turn into a
/// failed check carrying the message.
CheckResult check(std::string name, std::function<void(CheckResult &)> body)
{
  CheckResult r;
  r.name = std::move(name);
  auto const start = Clock::now();
  try {
    body(r);
  } catch (ResourceError const &) {
    throw;
  } catch (Error const &e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = since(start);
  return r;
}

void log_relation(SuiteOptions const &o, std::string name,
                  SubspaceUnion const &rel, PermRep const &input)
{
  if (o.log)
    o.log->push_back({std::move(name), rel, input});
}

nlohmann::json vector_json(RatVector const &v)
{
  auto j = nlohmann::json::array();
  for (auto const &q : v)
    j.push_back(to_string(q));
  return j;
}

RatVector ints(std::initializer_list<long> xs)
{
  RatVector v;
  for (auto x : xs)
    v.emplace_back(x);
  return v;
}

// --- regular -------------------------------------------------------------

std::vector<std::pair<std::string, Subgroup>> regular_cases()
{
  std::vector<std::pair<std::string, Subgroup>> cases;
  for (std::string spec : {"cyclic(2)", "cyclic(3)"}) {
    auto g = spec == "cyclic(2)" ? cyclic_group(2) : cyclic_group(3);
    cases.emplace_back(spec + "/trivial", Subgroup::trivial(g));
    cases.emplace_back(spec + "/full", Subgroup::full(g));
  }
  auto s3 = symmetric_group(3);
  cases.emplace_back("symmetric(3)/trivial", Subgroup::trivial(s3));
  cases.emplace_back("symmetric(3)/alternating", Subgroup::alternating(s3));
  cases.emplace_back("symmetric(3)/full", Subgroup::full(s3));
  return cases;
}

SuiteReport suite_regular(SuiteOptions const &o)
{
  SuiteReport rep{"regular", {}, 0};
  for (auto const &[name, h] : regular_cases()) {
    rep.checks.push_back(check("orbit law " + name, [&](CheckResult &r) {
      auto arch = regular_orbit_architecture(h);
      auto rel = rho(arch, o.engine);
      auto expected = h_orbit_relation(h, arch.input());
      log_relation(o, "regular " + name, rel.relation, arch.input());
      r.passed = equivalent(rel.relation, expected);
      r.detail = "rho " + to_string(compare(rel.relation, expected)) +
                 " H-orbit relation";
      r.evidence = {{"members", rel.relation.size()},
                    {"expected_members", expected.size()},
                    {"stats", rel.stats.to_json()}};
      if (!r.passed)
        r.counterexample = {{"rho", to_json(rel.relation)},
                            {"expected", to_json(expected)}};
    }));
  }
  return rep;
}

// --- cnn -----------------------------------------------------------------

SuiteReport suite_cnn(SuiteOptions const &o)
{
  SuiteReport rep{"cnn", {}, 0};
  std::vector<IdentificationRelation> rels;
  std::vector<Architecture> archs;
  for (std::size_t k = 1; k <= 3; ++k) {
    archs.push_back(cnn_architecture(3, k));
    rels.push_back(rho(archs.back(), o.engine));
    log_relation(o, "cnn k=" + std::to_string(k), rels.back().relation,
                 archs.back().input());
  }
  rep.checks.push_back(check("3-CNN strictly finer than 1-CNN",
                             [&](CheckResult &r) {
    auto c = compare(rels[2], rels[0]);
    r.passed = c == Comparison::strict_subset;
    r.detail = "compare = " + to_string(c);
    r.evidence = {{"comparison", to_string(c)}};
  }));
  rep.checks.push_back(check("filter chain 3 <= 2 <= 1", [&](CheckResult &r) {
    bool const a = is_subset(rels[2].relation, rels[1].relation);
    bool const b = is_subset(rels[1].relation, rels[0].relation);
    r.passed = a && b;
    r.detail = std::string("rho(3) in rho(2): ") + (a ? "yes" : "no") +
               ", rho(2) in rho(1): " + (b ? "yes" : "no");
    r.evidence = {{"members", {rels[0].relation.size(), rels[1].relation.size(),
                               rels[2].relation.size()}}};
  }));
  rep.checks.push_back(check("1-CNN equals permutation relation",
                             [&](CheckResult &r) {
    auto perm = permutation_relation(3);
    r.passed = equivalent(rels[0].relation, perm);
    r.detail = "rho(1-CNN) " + to_string(compare(rels[0].relation, perm)) +
               " permutation relation";
    if (!r.passed)
      r.counterexample = {{"rho", to_json(rels[0].relation)},
                          {"expected", to_json(perm)}};
  }));
  rep.checks.push_back(check("3-CNN identifies rotations only",
                             [&](CheckResult &r) {
    auto a = ints({1, 2, 3});
    bool const rot = identifies(rels[2], a, ints({2, 3, 1}));
    bool const refl = identifies(rels[2], a, ints({1, 3, 2}));
    r.passed = rot && !refl;
    r.detail = std::string("(1,2,3)~(2,3,1): ") + (rot ? "yes" : "no") +
               ", (1,2,3)~(1,3,2): " + (refl ? "yes" : "no");
  }));
  return rep;
}

// --- depth ---------------------------------------------------------------

SuiteReport suite_depth(SuiteOptions const &o)
{
  SuiteReport rep{"depth", {}, 0};
  auto g = cyclic_group(3);
  auto reg = regular_rep(g);
  auto arch = full_architecture({reg, reg, trivial_rep(g)});
  rep.checks.push_back(check("regular hidden threshold", [&](CheckResult &r) {
    auto res = depth_stabilization_threshold(arch, 0, 3, o.engine);
    for (std::size_t m = 0; m < res.relations.size(); ++m)
      log_relation(o, "depth m=" + std::to_string(m + 1),
                   res.relations[m].relation, reg);
    r.passed = res.threshold == std::size_t{1} && res.monotone;
    r.detail = "threshold " +
               (res.threshold ? std::to_string(*res.threshold)
                              : std::string("not reached")) +
               ", chain " + (res.monotone ? "monotone" : "not monotone");
    auto members = nlohmann::json::array();
    for (auto const &rel : res.relations)
      members.push_back(rel.relation.size());
    r.evidence = {{"members_per_repetition", members}};
  }));
  return rep;
}

// --- width ---------------------------------------------------------------

SuiteReport suite_width(SuiteOptions const &o)
{
  SuiteReport rep{"width", {}, 0};
  auto g = cyclic_group(3);
  auto reg = regular_rep(g);
  std::vector<PermRep> reps{reg, reg, trivial_rep(g)};
  auto const base = rho(full_architecture(reps), o.engine);
  log_relation(o, "width f=1", base.relation, reg);
  for (std::size_t f = 1; f <= 3; ++f) {
    rep.checks.push_back(check("multiplicity f=" + std::to_string(f),
                               [&](CheckResult &r) {
      auto wide = reps;
      wide[1] = mult_rep(reg, f);
      auto rel = rho(full_architecture(wide), o.engine);
      log_relation(o, "width f=" + std::to_string(f), rel.relation, reg);
      bool const direct = equivalent(rel.relation, base.relation);
      bool const api = verify_width_invariance(reps, 1, f, o.engine);
      r.passed = direct && api;
      r.detail = "rho(R^G x R^" + std::to_string(f) + ") " +
                 to_string(compare(rel.relation, base.relation)) + " rho(R^G)";
      r.evidence = {{"members", rel.relation.size()},
                    {"stats", rel.stats.to_json()}};
    }));
  }
  rep.checks.push_back(check("split law R^G + R^G", [&](CheckResult &r) {
    r.passed = verify_split_law(reps, 1, reg, reg, o.engine);
    r.detail = r.passed ? "rho(V'+V'') = rho(V') n rho(V'')"
                        : "split law violated";
  }));
  return rep;
}

// --- hierarchy -----------------------------------------------------------

SuiteReport suite_hierarchy(SuiteOptions const &o)
{
  SuiteReport rep{"hierarchy", {}, 0};
  auto s3 = symmetric_group(3);
  auto nat = natural_rep(s3);
  std::vector<PermRep> reps{nat, nat, trivial_rep(s3)};
  auto const e = Subgroup::trivial(s3);
  auto const a3 = Subgroup::alternating(s3);
  auto const g = Subgroup::full(s3);

  std::vector<std::pair<std::string, std::pair<Subgroup, Subgroup>>> steps{
      {"{e} <= A3", {e, a3}}, {"A3 <= S3", {a3, g}}, {"{e} <= S3", {e, g}}};
  for (auto const &[name, kh] : steps) {
    rep.checks.push_back(check("hierarchy " + name, [&](CheckResult &r) {
      auto res = verify_subgroup_hierarchy(kh.first, kh.second, reps, 1,
                                           o.engine);
      log_relation(o, "hierarchy finer " + name, res.finer.relation, nat);
      log_relation(o, "hierarchy coarser " + name, res.coarser.relation, nat);
      r.passed = res.holds();
      r.detail = "rho(G/K) " + to_string(res.comparison) + " rho(G/H)";
      r.evidence = {{"comparison", to_string(res.comparison)},
                    {"finer_members", res.finer.relation.size()},
                    {"coarser_members", res.coarser.relation.size()}};
    }));
  }
  return rep;
}

// --- activations ---------------------------------------------------------

std::vector<std::pair<std::string, Architecture>> agreement_architectures()
{
  std::vector<std::pair<std::string, Architecture>> out;
  for (auto const &[name, h] : regular_cases())
    out.emplace_back("regular " + name, regular_orbit_architecture(h));
  for (std::size_t k = 1; k <= 3; ++k)
    out.emplace_back("cnn k=" + std::to_string(k), cnn_architecture(3, k));
  return out;
}

struct LabeledPair
{
  RatVector alpha, beta;
  bool identified = false;
};

std::vector<LabeledPair> labeled_pairs(IdentificationRelation const &rel,
                                       std::size_t count, std::mt19937_64 &rng)
{
  std::size_t const n = rel.input_dim;
  std::size_t const half = count / 2;
  std::vector<LabeledPair> pairs;
  auto const &members = rel.relation.members();
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  for (std::size_t i = 0; i < half; ++i) {
    auto v = random_vector(members[pick(rng)], rng);
    pairs.push_back({RatVector(v.begin(), v.begin() + n),
                     RatVector(v.begin() + n, v.end()), true});
  }
  std::uniform_int_distribution<long> coin(-5, 5);
  for (std::size_t attempt = 0; pairs.size() < count && attempt < 100 * count;
       ++attempt) {
    RatVector a(n), b(n);
    for (auto &x : a)
      x = coin(rng);
    if (attempt % 2 == 0) {
      b = a;
      std::shuffle(b.begin(), b.end(), rng);
    } else {
      for (auto &x : b)
        x = coin(rng);
    }
    if (!identifies(rel, a, b))
      pairs.push_back({std::move(a), std::move(b), false});
  }
  return pairs;
}

SuiteReport suite_activations(SuiteOptions const &o)
{
  SuiteReport rep{"activations", {}, 0};
  std::size_t identified = 0, separated = 0;
  std::size_t unsound = 0, decided = 0, agree = 0;
  std::size_t witnessed_relu = 0, witnessed_tanh = 0, undecided = 0;
  nlohmann::json unsound_example, disagreement_example, per_arch =
      nlohmann::json::object();

  auto const archs = agreement_architectures();
  for (std::size_t ai = 0; ai < archs.size(); ++ai) {
    auto const &[name, arch] = archs[ai];
    auto const rel = rho(arch, o.engine);
    NetworkTemplate const tmpl(arch);
    std::mt19937_64 rng(o.seed + 7919 * ai);
    auto const pairs = labeled_pairs(rel, o.pairs_per_architecture, rng);
    std::size_t arch_sep = 0, arch_wit = 0;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      auto const &p = pairs[pi];
      auto const a = to_doubles(p.alpha), b = to_doubles(p.beta);
      auto opts = o.oracle;
      opts.seed = o.oracle.seed ^ (ai << 32) ^ pi;
      auto const vr = mc_separation(tmpl, ActivationKind::relu, a, b, opts);
      auto const vt = mc_separation(tmpl, ActivationKind::tanh, a, b, opts);
      bool const undec = vr.kind == OracleVerdict::Kind::undecided ||
                         vt.kind == OracleVerdict::Kind::undecided;
      if (undec)
        ++undecided;
      else {
        ++decided;
        if (vr.kind == vt.kind)
          ++agree;
        else if (disagreement_example.is_null())
          disagreement_example = nlohmann::json{{"architecture", name},
                                  {"alpha", vector_json(p.alpha)},
                                  {"beta", vector_json(p.beta)},
                                  {"relu", vr.to_json()},
                                  {"tanh", vt.to_json()}};
      }
      if (p.identified) {
        ++identified;
        if (vr.separated() || vt.separated()) {
          ++unsound;
          if (unsound_example.is_null())
            unsound_example = nlohmann::json{{"architecture", name},
                               {"alpha", vector_json(p.alpha)},
                               {"beta", vector_json(p.beta)},
                               {"relu", vr.to_json()},
                               {"tanh", vt.to_json()}};
        }
      } else {
        ++separated;
        ++arch_sep;
        witnessed_relu += vr.separated();
        witnessed_tanh += vt.separated();
        arch_wit += vr.separated() && vt.separated();
      }
    }
    per_arch[name] = {{"pairs", pairs.size()},
                      {"separated_pairs", arch_sep},
                      {"witnessed_by_both", arch_wit}};
  }

  rep.checks.push_back(check("no separation of identified pairs",
                             [&](CheckResult &r) {
    r.passed = unsound == 0 && identified > 0;
    r.detail = std::to_string(unsound) + " of " + std::to_string(identified) +
               " identified pairs reported separated";
    r.evidence = {{"identified_pairs", identified}, {"violations", unsound}};
    if (!r.passed)
      r.counterexample = unsound_example;
  }));
  rep.checks.push_back(check("witnesses for separated pairs",
                             [&](CheckResult &r) {
    double const rate_relu =
        separated ? static_cast<double>(witnessed_relu) / separated : 0.0;
    double const rate_tanh =
        separated ? static_cast<double>(witnessed_tanh) / separated : 0.0;
    r.passed = separated > 0 && rate_relu >= 0.95 && rate_tanh >= 0.95;
    r.detail = "witness rate relu " + std::to_string(rate_relu) + ", tanh " +
               std::to_string(rate_tanh) + " over " +
               std::to_string(separated) + " pairs";
    r.evidence = {{"separated_pairs", separated},
                  {"witnessed_relu", witnessed_relu},
                  {"witnessed_tanh", witnessed_tanh},
                  {"per_architecture", per_arch}};
  }));
  rep.checks.push_back(check("relu and tanh agree", [&](CheckResult &r) {
    r.passed = decided > 0 && agree == decided;
    r.detail = std::to_string(agree) + " of " + std::to_string(decided) +
               " decided pairs agree (" + std::to_string(undecided) +
               " undecided)";
    r.evidence = {{"decided", decided},
                  {"agree", agree},
                  {"undecided", undecided}};
    if (!r.passed)
      r.counterexample = disagreement_example;
  }));
  return rep;
}

// --- basis ---------------------------------------------------------------

/// Every subgroup, by testing closure of each identity-containing subset.
std::vector<Subgroup> brute_force_subgroups(GroupPtr const &g)
{
  std::size_t const n = g->order();
  if (n > 12)
    throw ResourceError("subset enumeration needs a group of order <= 12");
  std::vector<Subgroup> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (!(mask >> g->identity() & 1))
      continue;
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !(mask >> g->mul(a, b) & 1))
          closed = false;
    if (!closed)
      continue;
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < n; ++a)
      if (mask >> a & 1)
        members.push_back(a);
    out.emplace_back(g, std::move(members));
  }
  return out;
}

RatMatrix flattened_rows(std::vector<RatMatrix> const &mats)
{
  RatMatrix rows;
  for (auto const &m : mats)
    rows.push_row(m.entries());
  return rows;
}

SuiteReport suite_basis(SuiteOptions const &)
{
  SuiteReport rep{"basis", {}, 0};
  rep.checks.push_back(check("S4 on pairs commutant", [&](CheckResult &r) {
    auto s4 = symmetric_group(4);
    auto pairs = power_rep(s4, 2);
    auto basis = commutant_basis(pairs, pairs);
    auto const bell4 = all_partitions({0, 1, 2, 3}).size();
    r.passed = basis.generators.size() == 15 && bell4 == 15;
    r.detail = std::to_string(basis.generators.size()) +
               " generators (Bell(4) = " + std::to_string(bell4) + ")";
    r.evidence = {{"generators", basis.generators.size()}};
  }));
  rep.checks.push_back(check("S3 on pairs commutant", [&](CheckResult &r) {
    auto s3 = symmetric_group(3);
    auto pairs = power_rep(s3, 2);
    auto const count = commutant_basis(pairs, pairs).generators.size();
    // Partitions of 4 points with at most 3 blocks.
    std::size_t expected = 0;
    for (auto const &p : all_partitions({0, 1, 2, 3}))
      expected += p.block_count() <= 3;
    r.passed = count == expected;
    r.detail = std::to_string(count) + " generators, expected " +
               std::to_string(expected);
    r.evidence = {{"generators", count}};
  }));
  rep.checks.push_back(check("cyclic regular commutants", [&](CheckResult &r) {
    r.passed = true;
    auto counts = nlohmann::json::object();
    for (std::size_t n = 1; n <= 7; ++n) {
      auto reg = regular_rep(cyclic_group(n));
      auto const count = commutant_basis(reg, reg).generators.size();
      counts[std::to_string(n)] = count;
      if (count != n) {
        r.passed = false;
        r.counterexample = {{"n", n}, {"generators", count}};
      }
    }
    r.detail = r.passed ? "dim = n for n = 1..7" : "dimension mismatch";
    r.evidence = {{"generators", counts}};
  }));
  rep.checks.push_back(check("double cosets span the commutant on S3",
                             [&](CheckResult &r) {
    auto s3 = symmetric_group(3);
    auto subs = brute_force_subgroups(s3);
    std::size_t pairs_checked = 0;
    r.passed = subs.size() == 6;
    for (auto const &k : subs)
      for (auto const &h : subs) {
        auto dc = double_coset_basis(k, h);
        auto comm = commutant_basis(coset_rep(k), coset_rep(h));
        auto const a = rref(flattened_rows(dc.generators)).matrix;
        auto const b = rref(flattened_rows(comm.generators)).matrix;
        auto const classes = double_cosets(h, k).classes.size();
        ++pairs_checked;
        if (!(a == b) || dc.generators.size() != classes) {
          r.passed = false;
          if (r.counterexample.is_null())
            r.counterexample = {{"K_order", k.order()},
                                {"H_order", h.order()},
                                {"double_coset_maps", dc.generators.size()},
                                {"commutant_dim", comm.generators.size()}};
        }
      }
    r.detail = std::to_string(subs.size()) + " subgroups, " +
               std::to_string(pairs_checked) + " pairs compared";
    r.evidence = {{"subgroups", subs.size()}, {"pairs", pairs_checked}};
  }));
  return rep;
}

// --- partitions ----------------------------------------------------------

struct PartitionTable
{
  std::vector<SetPartition> all;
  std::vector<std::vector<std::size_t>> strict_refiners;  // per partition
};

PartitionTable partition_table(std::size_t n)
{
  PartitionTable t;
  std::vector<Index> ground(n);
  std::iota(ground.begin(), ground.end(), Index{0});
  t.all = all_partitions(ground);
  t.strict_refiners.resize(t.all.size());
  for (std::size_t q = 0; q < t.all.size(); ++q)
    for (std::size_t p = 0; p < t.all.size(); ++p)
      if (p != q && refines(t.all[p], t.all[q]))
        t.strict_refiners[q].push_back(p);
  return t;
}

/// Minimal elements of {Q : every block sums to zero} under refinement.
std::vector<SetPartition> brute_minimal_zero_sum(PartitionTable const &t,
                                                 std::vector<Rational> const &a)
{
  std::vector<char> zero(t.all.size(), 1);
  for (std::size_t q = 0; q < t.all.size(); ++q)
    for (auto const &blk : t.all[q].blocks()) {
      Rational s = 0;
      for (auto x : blk)
        s += a[x];
      if (sgn(s) != 0) {
        zero[q] = 0;
        break;
      }
    }
  std::vector<SetPartition> out;
  for (std::size_t q = 0; q < t.all.size(); ++q) {
    if (!zero[q])
      continue;
    bool minimal = true;
    for (auto p : t.strict_refiners[q])
      if (zero[p]) {
        minimal = false;
        break;
      }
    if (minimal)
      out.push_back(t.all[q]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SuiteReport suite_partitions(SuiteOptions const &)
{
  SuiteReport rep{"partitions", {}, 0};
  for (std::size_t len = 1; len <= 6; ++len) {
    rep.checks.push_back(check("zero-sum oracle length " + std::to_string(len),
                               [&](CheckResult &r) {
      auto const table = partition_table(len);
      std::vector<Index> ground(len);
      std::iota(ground.begin(), ground.end(), Index{0});
      auto const base = SetPartition::single_block(ground);
      std::vector<long> digits(len, -2);
      std::size_t cases = 0, empty_cases = 0;
      r.passed = true;
      while (true) {
        std::vector<Rational> a(digits.begin(), digits.end());
        auto const fast = zero_sum_partitions(a, base);
        auto const slow = brute_minimal_zero_sum(table, a);
        ++cases;
        empty_cases += slow.empty();
        if (fast != slow) {
          r.passed = false;
          r.counterexample = {{"coefficients", digits},
                              {"computed", fast.size()},
                              {"expected", slow.size()}};
          break;
        }
        std::size_t i = 0;
        while (i < len && ++digits[i] > 2)
          digits[i++] = -2;
        if (i == len)
          break;
      }
      r.detail = std::to_string(cases) + " coefficient vectors";
      r.evidence = {{"cases", cases}, {"empty_families", empty_cases}};
    }));
  }
  return rep;
}

// --- algebra -------------------------------------------------------------

SubspaceUnion random_union(std::size_t ambient, std::mt19937_64 &rng)
{
  std::uniform_int_distribution<int> members(1, 3);
  std::uniform_int_distribution<std::size_t> rank(0, std::min<std::size_t>(
                                                         ambient, 4));
  std::uniform_int_distribution<long> entry(-2, 2);
  std::vector<Subspace> out;
  for (int m = members(rng); m > 0; --m) {
    RatMatrix vecs(0, ambient);
    for (std::size_t k = rank(rng); k > 0; --k) {
      RatVector v(ambient);
      for (auto &x : v)
        x = entry(rng) * (entry(rng) != 0 ? 1 : 0);
      vecs.push_row(v);
    }
    out.push_back(Subspace::span(ambient, vecs));
  }
  return SubspaceUnion::normalize(ambient, std::move(out));
}

SuiteReport suite_algebra(SuiteOptions const &o)
{
  SuiteReport rep{"algebra", {}, 0};

  std::vector<LoggedRelation> local;
  std::vector<LoggedRelation> const *logged = o.log;
  if (!logged || logged->empty()) {
    auto inner = o;
    inner.log = &local;
    for (auto name : {"regular", "cnn", "depth", "width", "hierarchy"})
      run_suite(name, inner);
    logged = &local;
  }

  rep.checks.push_back(check("relation invariants", [&](CheckResult &r) {
    std::mt19937_64 rng(o.seed);
    r.passed = true;
    std::size_t checked = 0;
    for (auto const &l : *logged) {
      bool const refl = is_reflexive(l.relation);
      bool const swap = is_swap_symmetric(l.relation);
      bool const equi = is_diagonally_equivariant(l.relation, l.input);
      bool const trans = is_transitive_sampled(l.relation, rng, 100);
      ++checked;
      if (!(refl && swap && equi && trans)) {
        r.passed = false;
        if (r.counterexample.is_null())
          r.counterexample = {{"relation", l.name},
                              {"reflexive", refl},
                              {"swap_symmetric", swap},
                              {"equivariant", equi},
                              {"transitive", trans}};
      }
    }
    r.detail = std::to_string(checked) + " relations checked";
    r.evidence = {{"relations", checked}};
  }));

  rep.checks.push_back(check("union lattice laws", [&](CheckResult &r) {
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    r.passed = true;
    std::size_t n = 0;
    for (; n < o.random_algebra_instances && r.passed; ++n) {
      auto const amb = dim(rng);
      auto const u = random_union(amb, rng);
      auto const v = random_union(amb, rng);
      auto const w = random_union(amb, rng);
      auto fail = [&](std::string const &law) {
        r.passed = false;
        r.counterexample = {{"law", law},
                            {"instance", n},
                            {"U", to_json(u)},
                            {"V", to_json(v)},
                            {"W", to_json(w)}};
      };
      if (!(unite(u, v) == unite(v, u)) || !(intersect(u, v) == intersect(v, u)))
        fail("commutativity");
      else if (!(unite(u, u) == u) || !(intersect(u, u) == u))
        fail("idempotence");
      else if (!(unite(u, intersect(u, v)) == u) ||
               !(intersect(u, unite(u, v)) == u))
        fail("absorption");
      else if (!(intersect(u, unite(v, w)) ==
                 unite(intersect(u, v), intersect(u, w))))
        fail("distributivity of intersection");
      else if (!(unite(u, intersect(v, w)) ==
                 intersect(unite(u, v), unite(u, w))))
        fail("distributivity of union");
      else if (!(SubspaceUnion::normalize(amb, u.members()) == u))
        fail("normal form");
      else {
        auto const uv = intersect(u, v);
        for (auto const &m : uv.members()) {
          auto x = random_vector(m, rng);
          if (!is_member(u, x) || !is_member(v, x)) {
            fail("membership");
            break;
          }
        }
      }
    }
    r.detail = std::to_string(n) + " random instances";
    r.evidence = {{"instances", n}};
  }));
  return rep;
}

// --- ign -----------------------------------------------------------------

std::vector<std::pair<std::string, Graph>> three_node_graphs()
{
  Graph empty(3), edge(3), path(3), triangle(3);
  edge.add_edge(0, 1);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  triangle.add_edge(0, 1);
  triangle.add_edge(1, 2);
  triangle.add_edge(0, 2);
  return {{"empty", empty}, {"edge", edge}, {"path", path},
          {"triangle", triangle}};
}

RatVector exact_adjacency(Graph const &g)
{
  RatVector v;
  for (auto x : g.adj)
    v.emplace_back(static_cast<long>(x));
  return v;
}

SuiteReport suite_ign(SuiteOptions const &o)
{
  SuiteReport rep{"ign", {}, 0};
  auto const arch = ign_readout_architecture(3);
  std::optional<IdentificationRelation> rel;
  rep.checks.push_back(check("2-IGN readout relation within caps",
                             [&](CheckResult &r) {
    rel = rho(arch, o.engine);
    log_relation(o, "ign n=3", rel->relation, arch.input());
    r.passed = rel->relation.ambient_dim() == 18;
    r.detail = std::to_string(rel->relation.size()) + " members in ambient " +
               std::to_string(rel->relation.ambient_dim());
    r.evidence = {{"members", rel->relation.size()},
                  {"hidden_generators", arch.layers()[0].generators().size()},
                  {"stats", rel->stats.to_json()}};
  }));
  if (!rel)
    return rep;
  rep.checks.push_back(check("contains the diagonal", [&](CheckResult &r) {
    r.passed = is_reflexive(rel->relation);
    r.detail = r.passed ? "diagonal contained" : "diagonal missing";
  }));
  rep.checks.push_back(check("S3 equivariant", [&](CheckResult &r) {
    r.passed = is_diagonally_equivariant(rel->relation, arch.input());
    r.detail = r.passed ? "invariant under diagonal S3 action"
                        : "not invariant";
  }));

  NetworkTemplate const tmpl(arch);
  auto const graphs = three_node_graphs();
  rep.checks.push_back(check("path vs triangle separated",
                             [&](CheckResult &r) {
    auto const &path = graphs[2].second;
    auto const &tri = graphs[3].second;
    auto const v = mc_separation(tmpl, ActivationKind::relu, path.flattened(),
                                 tri.flattened(), o.oracle);
    bool const wl = wl_distinguishes(path, tri, 2);
    bool const sym = !identifies(*rel, exact_adjacency(path),
                                 exact_adjacency(tri));
    r.passed = v.separated() && wl && sym;
    r.detail = std::string("sampled 2-IGN ") + to_string(v.kind) +
               ", 2-WL " + (wl ? "distinguishes" : "does not distinguish") +
               ", symbolic " + (sym ? "separates" : "identifies");
    r.evidence = {{"oracle", v.to_json()}};
  }));
  rep.checks.push_back(check("IGN separation implies 2-WL separation",
                             [&](CheckResult &r) {
    r.passed = true;
    std::size_t separated = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i)
      for (std::size_t j = i + 1; j < graphs.size(); ++j) {
        auto const &a = graphs[i].second;
        auto const &b = graphs[j].second;
        auto const v = mc_separation(tmpl, ActivationKind::relu, a.flattened(),
                                     b.flattened(), o.oracle);
        if (!v.separated())
          continue;
        ++separated;
        if (!wl_distinguishes(a, b, 2) ||
            identifies(*rel, exact_adjacency(a), exact_adjacency(b))) {
          r.passed = false;
          r.counterexample = {{"graphs", {graphs[i].first, graphs[j].first}}};
        }
      }
    r.detail = std::to_string(separated) + " separated graph pairs, all " +
               (r.passed ? "consistent" : "not consistent");
    r.evidence = {{"separated_pairs", separated}};
  }));
  rep.checks.push_back(check("relabeled path identified", [&](CheckResult &r) {
    Graph other(3);
    other.add_edge(1, 0);
    other.add_edge(0, 2);
    auto const &path = graphs[2].second;
    bool const sym =
        identifies(*rel, exact_adjacency(path), exact_adjacency(other));
    auto const v = mc_separation(tmpl, ActivationKind::relu, path.flattened(),
                                 other.flattened(), o.oracle);
    r.passed = sym && !v.separated();
    r.detail = std::string("symbolic ") + (sym ? "identifies" : "separates") +
               ", sampled " + to_string(v.kind);
  }));
  return rep;
}

} // namespace

std::vector<std::string> const &suite_names()
{
  static std::vector<std::string> const names{
      "regular", "cnn",   "depth",      "width",   "hierarchy",
      "activations", "basis", "partitions", "algebra", "ign"};
  return names;
}

bool is_suite(std::string const &name)
{
  auto const &n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteReport run_suite(std::string const &name, SuiteOptions const &options)
{
  auto const start = Clock::now();
  SuiteReport rep;
  if (name == "regular")
    rep = suite_regular(options);
  else if (name == "cnn")
    rep = suite_cnn(options);
  else if (name == "depth")
    rep = suite_depth(options);
  else if (name == "width")
    rep = suite_width(options);
  else if (name == "hierarchy")
    rep = suite_hierarchy(options);
  else if (name == "activations")
    rep = suite_activations(options);
  else if (name == "basis")
    rep = suite_basis(options);
  else if (name == "partitions")
    rep = suite_partitions(options);
  else if (name == "algebra")
    rep = suite_algebra(options);
  else if (name == "ign")
    rep = suite_ign(options);
  else
    throw ConfigError("unknown suite '" + name + "'");
  rep.seconds = since(start);
  return rep;
}

} // namespace eqsep
