#include "eqsep/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "eqsep/errors.hpp"

namespace eqsep {

std::string SpecTerm::str() const
{
  switch (kind) {
  case Kind::integer: return std::to_string(value);
  case Kind::list: {
    std::string s = "[";
    for (std::size_t i = 0; i < args.size(); ++i)
      s += (i ? "," : "") + args[i].str();
    return s + "]";
  }
  case Kind::call: {
    if (!has_parens)
      return name;
    std::string s = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i)
      s += (i ? "," : "") + args[i].str();
    return s + ")";
  }
  }
  return name;
}

namespace {

class SpecParser
{
public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  SpecTerm parse()
  {
    auto t = term();
    skip();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return t;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::string const &what) const
  {
    throw ConfigError("spec '" + std::string(text_) + "' at column " +
                      std::to_string(pos_ + 1) + ": " + what);
  }

  void skip()
  {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c)
  {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c)
  {
    if (!peek(c))
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::vector<SpecTerm> sequence(char close)
  {
    std::vector<SpecTerm> items;
    if (peek(close)) {
      ++pos_;
      return items;
    }
    while (true) {
      items.push_back(term());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(close);
      return items;
    }
  }

  SpecTerm term()
  {
    skip();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    char const c = text_[pos_];
    SpecTerm t;
    if (c == '[') {
      ++pos_;
      t.kind = SpecTerm::Kind::list;
      t.args = sequence(']');
      return t;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_++;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      auto digits = text_.substr(start, pos_ - start);
      if (digits == "-")
        fail("expected digits");
      t.kind = SpecTerm::Kind::integer;
      try {
        t.value = std::stol(std::string(digits));
      } catch (std::out_of_range const &) {
        fail("integer out of range");
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      t.kind = SpecTerm::Kind::call;
      t.name = std::string(text_.substr(start, pos_ - start));
      if (peek('(')) {
        ++pos_;
        t.has_parens = true;
        t.args = sequence(')');
      }
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

[[noreturn]] void bad_term(SpecTerm const &t, std::string const &what)
{ throw ConfigError("'" + t.str() + "': " + what); }

long integer_arg(SpecTerm const &t, std::size_t i, long min_value)
{
  auto const &a = t.args.at(i);
  if (a.kind != SpecTerm::Kind::integer)
    bad_term(t, "argument " + std::to_string(i + 1) + " must be an integer");
  if (a.value < min_value)
    bad_term(t, "argument " + std::to_string(i + 1) + " must be at least " +
                    std::to_string(min_value));
  return a.value;
}

void expect_arity(SpecTerm const &t, std::size_t n)
{
  if (!t.has_parens || t.args.size() != n)
    bad_term(t, "expected " + std::to_string(n) + " argument(s)");
}

void expect_bare(SpecTerm const &t)
{
  if (t.has_parens)
    bad_term(t, "takes no arguments");
}

Permutation perm_from_term(SpecTerm const &t)
{
  if (t.kind != SpecTerm::Kind::list)
    bad_term(t, "permutation must be a bracketed list");
  std::vector<Index> images;
  for (auto const &x : t.args) {
    if (x.kind != SpecTerm::Kind::integer || x.value < 0)
      bad_term(t, "permutation entries must be nonnegative integers");
    images.push_back(static_cast<Index>(x.value));
  }
  try {
    return Permutation(std::move(images));
  } catch (ValidationError const &e) {
    bad_term(t, e.what());
  }
}

std::vector<Permutation> perms_from_list(SpecTerm const &call)
{
  expect_arity(call, 1);
  auto const &list = call.args[0];
  if (list.kind != SpecTerm::Kind::list)
    bad_term(call, "expected a list of permutations");
  std::vector<Permutation> perms;
  for (auto const &p : list.args)
    perms.push_back(perm_from_term(p));
  return perms;
}

GroupPtr group_from_term(SpecTerm const &t)
{
  if (t.kind != SpecTerm::Kind::call)
    bad_term(t, "expected a group constructor");
  try {
    if (t.name == "cyclic") {
      expect_arity(t, 1);
      return cyclic_group(static_cast<std::size_t>(integer_arg(t, 0, 1)));
    }
    if (t.name == "symmetric") {
      expect_arity(t, 1);
      return symmetric_group(static_cast<std::size_t>(integer_arg(t, 0, 1)));
    }
    if (t.name == "dihedral") {
      expect_arity(t, 1);
      return dihedral_group(static_cast<std::size_t>(integer_arg(t, 0, 3)));
    }
    if (t.name == "product") {
      expect_arity(t, 2);
      return direct_product(group_from_term(t.args[0]),
                            group_from_term(t.args[1]));
    }
    if (t.name == "generated") {
      auto perms = perms_from_list(t);
      if (perms.empty())
        bad_term(t, "needs at least one permutation");
      std::size_t const degree = perms.front().degree();
      for (auto const &p : perms)
        if (p.degree() != degree)
          bad_term(t, "permutations have different degrees");
      return Group::generate(perms, degree);
    }
  } catch (ValidationError const &e) {
    bad_term(t, e.what());
  }
  bad_term(t, "unknown group constructor '" + t.name + "'");
}

Subgroup subgroup_from_term(GroupPtr const &g, SpecTerm const &t)
{
  if (t.kind != SpecTerm::Kind::call)
    bad_term(t, "expected a subgroup spec");
  if (t.name == "trivial") {
    expect_bare(t);
    return Subgroup::trivial(g);
  }
  if (t.name == "full") {
    expect_bare(t);
    return Subgroup::full(g);
  }
  if (t.name == "alternating") {
    expect_bare(t);
    return Subgroup::alternating(g);
  }
  if (t.name == "generated_subgroup") {
    auto perms = perms_from_list(t);
    for (auto const &p : perms)
      if (p.degree() != g->degree())
        bad_term(t, "permutation degree does not match the group");
    try {
      return Subgroup::generated(g, perms);
    } catch (InvalidSubgroupError const &e) {
      bad_term(t, e.what());
    }
  }
  bad_term(t, "unknown subgroup spec '" + t.name + "'");
}

// Cap on the dimension of representations built from spec strings.
constexpr std::size_t max_rep_dim = 4096;

RepSpec rep_from_term(GroupPtr const &g, SpecTerm const &t)
{
  if (t.kind != SpecTerm::Kind::call)
    bad_term(t, "expected a representation spec");
  if (t.name == "regular") {
    expect_bare(t);
    return {regular_rep(g), std::nullopt};
  }
  if (t.name == "natural") {
    expect_bare(t);
    return {natural_rep(g), std::nullopt};
  }
  if (t.name == "trivial") {
    expect_bare(t);
    return {trivial_rep(g), std::nullopt};
  }
  if (t.name == "cosets") {
    expect_arity(t, 1);
    auto h = subgroup_from_term(g, t.args[0]);
    auto rep = coset_rep(h);
    return {std::move(rep), std::move(h)};
  }
  if (t.name == "power") {
    expect_arity(t, 2);
    auto const n = integer_arg(t, 0, 1);
    auto const k = integer_arg(t, 1, 1);
    if (static_cast<std::size_t>(n) != g->degree())
      bad_term(t, "n must equal the group degree " +
                      std::to_string(g->degree()));
    std::size_t dim = 1;
    for (long i = 0; i < k; ++i) {
      dim *= static_cast<std::size_t>(n);
      if (dim > max_rep_dim)
        throw ResourceError("representation '" + t.str() +
                            "' exceeds dimension " +
                            std::to_string(max_rep_dim));
    }
    return {power_rep(g, static_cast<std::size_t>(k)), std::nullopt};
  }
  if (t.name == "sum") {
    if (!t.has_parens || t.args.empty())
      bad_term(t, "needs at least one summand");
    auto acc = rep_from_term(g, t.args[0]).rep;
    for (std::size_t i = 1; i < t.args.size(); ++i)
      acc = sum_rep(acc, rep_from_term(g, t.args[i]).rep);
    if (acc.dim() > max_rep_dim)
      throw ResourceError("representation '" + t.str() +
                          "' exceeds dimension " + std::to_string(max_rep_dim));
    return {std::move(acc), std::nullopt};
  }
  if (t.name == "mult") {
    expect_arity(t, 2);
    auto base = rep_from_term(g, t.args[0]).rep;
    auto const f = static_cast<std::size_t>(integer_arg(t, 1, 1));
    if (base.dim() * f > max_rep_dim)
      throw ResourceError("representation '" + t.str() +
                          "' exceeds dimension " + std::to_string(max_rep_dim));
    return {mult_rep(base, f), std::nullopt};
  }
  bad_term(t, "unknown representation spec '" + t.name + "'");
}

} // namespace

SpecTerm parse_spec(std::string_view text)
{ return SpecParser(text).parse(); }

GroupPtr parse_group(std::string_view text)
{ return group_from_term(parse_spec(text)); }

Subgroup parse_subgroup(GroupPtr const &g, std::string_view text)
{ return subgroup_from_term(g, parse_spec(text)); }

RepSpec parse_rep(GroupPtr const &g, std::string_view text)
{ return rep_from_term(g, parse_spec(text)); }

namespace {

[[noreturn]] void field_error(std::string const &path, std::string const &what)
{ throw ConfigError(path + ": " + what); }

void check_keys(nlohmann::json const &obj, std::string const &path,
                std::set<std::string> const &allowed)
{
  if (!obj.is_object())
    field_error(path, "expected an object");
  for (auto const &[key, value] : obj.items())
    if (!allowed.count(key))
      field_error(path, "unknown field '" + key + "'");
}

std::string string_field(nlohmann::json const &obj, std::string const &key,
                         std::string const &path)
{
  if (!obj.contains(key))
    field_error(path, "missing field '" + key + "'");
  if (!obj.at(key).is_string())
    field_error(path + "." + key, "expected a string");
  return obj.at(key).get<std::string>();
}

Rational rational_from_json(nlohmann::json const &v, std::string const &path)
{
  if (v.is_number_integer())
    return Rational(v.get<long>());
  if (v.is_string())
    return parse_rational(v.get<std::string>());
  field_error(path, "expected an integer or a rational string");
}

RatMatrix matrix_from_json(nlohmann::json const &m, std::string const &path)
{
  if (!m.is_array() || m.empty())
    field_error(path, "expected a nonempty list of rows");
  std::vector<RatVector> rows;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < m.size(); ++r) {
    auto const rpath = path + "[" + std::to_string(r) + "]";
    if (!m[r].is_array())
      field_error(rpath, "expected a row list");
    RatVector row;
    for (std::size_t c = 0; c < m[r].size(); ++c)
      row.push_back(
          rational_from_json(m[r][c], rpath + "[" + std::to_string(c) + "]"));
    if (r == 0)
      cols = row.size();
    else if (row.size() != cols)
      field_error(rpath, "ragged matrix");
    rows.push_back(std::move(row));
  }
  return RatMatrix::from_rows(rows, cols);
}

std::vector<RatMatrix> generators_from_json(nlohmann::json const &spec,
                                            RepSpec const &source,
                                            RepSpec const &target,
                                            std::string const &path,
                                            std::optional<LayerSpace> &whole)
{
  if (spec.is_array()) {
    std::vector<RatMatrix> mats;
    for (std::size_t i = 0; i < spec.size(); ++i)
      mats.push_back(
          matrix_from_json(spec[i], path + "[" + std::to_string(i) + "]"));
    return mats;
  }
  if (!spec.is_string())
    field_error(path, "expected \"full\", \"circular(k)\", \"double_coset\" "
                      "or a list of matrices");
  auto const text = spec.get<std::string>();
  if (text == "full")
    return commutant_basis(source.rep, target.rep).generators;
  if (text == "double_coset") {
    if (!source.coset_subgroup || !target.coset_subgroup)
      field_error(path, "double_coset needs cosets(...) source and target");
    whole.emplace(double_coset_layer(*source.coset_subgroup,
                                     *target.coset_subgroup));
    return whole->generators();
  }
  SpecTerm t;
  try {
    t = parse_spec(text);
  } catch (ConfigError const &e) {
    field_error(path, e.what());
  }
  if (t.kind == SpecTerm::Kind::call && t.name == "circular") {
    if (!t.has_parens || t.args.size() != 1 ||
        t.args[0].kind != SpecTerm::Kind::integer)
      field_error(path, "expected circular(k)");
    auto const n = source.rep.dim();
    if (target.rep.dim() != n)
      field_error(path, "circular layers map R^n to R^n");
    auto const k = t.args[0].value;
    if (k < 1 || static_cast<std::size_t>(k) > n)
      field_error(path, "filter size must satisfy 1 <= k <= " +
                            std::to_string(n));
    std::vector<RatMatrix> mats;
    for (long s = 0; s < k; ++s)
      mats.push_back(circulant_unit(n, static_cast<std::size_t>(s)));
    return mats;
  }
  field_error(path, "unknown generator spec '" + text + "'");
}

BiasSpec bias_from_json(nlohmann::json const &spec, PermRep const &target,
                        std::string const &path)
{
  if (spec.is_string()) {
    auto const text = spec.get<std::string>();
    if (text == "orbit")
      return orbit_bias(target);
    if (text == "null")
      return BiasSpec::null();
    field_error(path, "expected \"orbit\", \"null\" or a partition");
  }
  if (!spec.is_array())
    field_error(path, "expected \"orbit\", \"null\" or a partition");
  std::vector<std::vector<Index>> blocks;
  for (std::size_t b = 0; b < spec.size(); ++b) {
    auto const &blk = spec[b];
    if (!blk.is_array())
      field_error(path + "[" + std::to_string(b) + "]", "expected a block");
    std::vector<Index> points;
    for (auto const &x : blk) {
      if (!x.is_number_unsigned())
        field_error(path + "[" + std::to_string(b) + "]",
                    "points must be nonnegative integers");
      points.push_back(x.get<Index>());
    }
    blocks.push_back(std::move(points));
  }
  try {
    return BiasSpec::complete(
        SetPartition::over_range(target.dim(), std::move(blocks)));
  } catch (ValidationError const &e) {
    field_error(path, e.what());
  }
}

std::size_t positive_field(nlohmann::json const &obj, std::string const &key,
                           std::string const &path)
{
  auto const &v = obj.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    field_error(path + "." + key, "expected a positive integer");
  return v.get<std::size_t>();
}

std::size_t line_of(std::string_view text, std::size_t byte)
{
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n')
      ++line;
  return line;
}

} // namespace

ArchitectureConfig parse_architecture_config(std::string_view text)
{
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (nlohmann::json::parse_error const &e) {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  check_keys(root, "config", {"group", "layers", "activation", "limits"});

  auto const group_spec = string_field(root, "group", "config");
  GroupPtr group;
  try {
    group = parse_group(group_spec);
  } catch (ConfigError const &e) {
    field_error("config.group", e.what());
  }

  ActivationKind activation = ActivationKind::relu;
  if (root.contains("activation")) {
    try {
      activation = parse_activation(string_field(root, "activation", "config"));
    } catch (ConfigError const &e) {
      field_error("config.activation", e.what());
    }
  }

  EngineOptions engine;
  if (root.contains("limits")) {
    auto const &lim = root.at("limits");
    check_keys(lim, "config.limits", {"max_union_members", "max_block_size"});
    if (lim.contains("max_union_members"))
      engine.max_union_members =
          positive_field(lim, "max_union_members", "config.limits");
    if (lim.contains("max_block_size"))
      engine.max_block_size =
          positive_field(lim, "max_block_size", "config.limits");
  }

  if (!root.contains("layers") || !root.at("layers").is_array() ||
      root.at("layers").empty())
    field_error("config.layers", "expected a nonempty list of layers");

  std::vector<LayerSpace> layers;
  std::optional<RepSpec> previous;
  auto const &jl = root.at("layers");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    auto const path = "config.layers[" + std::to_string(i) + "]";
    auto const &obj = jl[i];
    check_keys(obj, path, {"source", "target", "generators", "bias"});
    auto rep_field = [&](std::string const &key) {
      auto const spec = string_field(obj, key, path);
      try {
        return parse_rep(group, spec);
      } catch (ConfigError const &e) {
        field_error(path + "." + key, e.what());
      } catch (ValidationError const &e) {
        field_error(path + "." + key, e.what());
      }
    };
    std::optional<RepSpec> source;
    if (obj.contains("source"))
      source = rep_field("source");
    else if (previous)
      source = *previous;
    else
      field_error(path, "missing field 'source'");
    auto target = rep_field("target");

    std::optional<LayerSpace> whole;
    auto gens = generators_from_json(obj.contains("generators")
                                         ? obj.at("generators")
                                         : nlohmann::json("full"),
                                     *source, target, path + ".generators",
                                     whole);
    auto bias = bias_from_json(
        obj.contains("bias") ? obj.at("bias") : nlohmann::json("orbit"),
        target.rep, path + ".bias");
    try {
      layers.emplace_back(source->rep, target.rep, std::move(gens),
                          std::move(bias));
    } catch (ValidationError const &e) {
      field_error(path, e.what());
    }
    previous = std::move(target);
  }

  try {
    Architecture arch(std::move(layers), to_string(activation));
    return ArchitectureConfig{group_spec, group, std::move(arch), activation,
                              engine};
  } catch (ValidationError const &e) {
    field_error("config.layers", e.what());
  }
}

std::string read_text_file(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ArchitectureConfig load_architecture_config(std::filesystem::path const &path)
{
  auto const text = read_text_file(path);
  try {
    return parse_architecture_config(text);
  } catch (ConfigError const &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RatVector parse_rational_vector(std::string_view text)
{
  std::string s(text);
  auto first = s.find_first_not_of(" \t\n");
  auto last = s.find_last_not_of(" \t\n");
  if (first == std::string::npos)
    return {};
  s = s.substr(first, last - first + 1);
  if (s.front() == '[') {
    if (s.back() != ']')
      throw ConfigError("vector '" + std::string(text) + "' lacks a closing ']'");
    s = s.substr(1, s.size() - 2);
  }
  RatVector out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = item.find_first_not_of(" \t\"");
    auto b = item.find_last_not_of(" \t\"");
    if (a == std::string::npos)
      throw ConfigError("vector '" + std::string(text) + "' has an empty entry");
    out.push_back(parse_rational(item.substr(a, b - a + 1)));
  }
  return out;
}

std::vector<double> to_doubles(RatVector const &v)
{
  std::vector<double> out;
  out.reserve(v.size());
  for (auto const &q : v)
    out.push_back(q.get_d());
  return out;
}

} // namespace eqsep
