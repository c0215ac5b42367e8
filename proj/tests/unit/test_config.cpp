#include <filesystem>
#include <string>

#include "doctest.h"
#include "eqsep/config.hpp"
#include "eqsep/errors.hpp"

using namespace eqsep;

namespace {

std::filesystem::path source_dir() { return EQSEP_SOURCE_DIR; }

std::string config_error(std::string const &text)
{
  try {
    parse_architecture_config(text);
  } catch (ConfigError const &e) {
    return e.what();
  }
  return "";
}

bool mentions(std::string const &haystack, std::string const &needle)
{ return haystack.find(needle) != std::string::npos; }

} // namespace

TEST_SUITE("config")
{
  TEST_CASE("spec terms")
  {
    auto t = parse_spec("product(cyclic(2), symmetric(3))");
    CHECK(t.kind == SpecTerm::Kind::call);
    CHECK(t.name == "product");
    REQUIRE(t.args.size() == 2);
    CHECK(t.args[1].args[0].value == 3);
    auto l = parse_spec("[[1,0,2],[0,2,1]]");
    CHECK(l.kind == SpecTerm::Kind::list);
    CHECK(l.args.size() == 2);
    CHECK_THROWS_AS(parse_spec("cyclic(3"), ConfigError);
    CHECK_THROWS_AS(parse_spec("cyclic(3))"), ConfigError);
    CHECK_THROWS_AS(parse_spec(""), ConfigError);
  }

  TEST_CASE("groups from text")
  {
    CHECK(parse_group("cyclic(5)")->order() == 5);
    CHECK(parse_group("symmetric(4)")->order() == 24);
    CHECK(parse_group("dihedral(6)")->order() == 12);
    CHECK(parse_group("product(cyclic(2), cyclic(3))")->order() == 6);
    CHECK(parse_group("generated([[1,2,0]])")->order() == 3);
    CHECK_THROWS_AS(parse_group("alternating(4)"), ConfigError);
    CHECK_THROWS_AS(parse_group("cyclic(x)"), ConfigError);
    CHECK_THROWS_AS(parse_group("symmetric(9)"), ResourceError);
  }

  TEST_CASE("subgroups and representations from text")
  {
    auto s3 = parse_group("symmetric(3)");
    CHECK(parse_subgroup(s3, "alternating").order() == 3);
    CHECK(parse_subgroup(s3, "trivial").order() == 1);
    CHECK(parse_subgroup(s3, "generated_subgroup([[1,0,2]])").order() == 2);
    CHECK_THROWS_AS(parse_subgroup(s3, "generated_subgroup([[1,2,3]])"),
                    Error);
    CHECK(parse_rep(s3, "regular").rep.dim() == 6);
    CHECK(parse_rep(s3, "power(3,2)").rep.dim() == 9);
    CHECK(parse_rep(s3, "sum(natural, trivial)").rep.dim() == 4);
    CHECK(parse_rep(s3, "mult(natural, 3)").rep.dim() == 9);
    auto c = parse_rep(s3, "cosets(alternating)");
    CHECK(c.rep.dim() == 2);
    REQUIRE(c.coset_subgroup.has_value());
    CHECK(c.coset_subgroup->order() == 3);
    CHECK_THROWS_AS(parse_rep(s3, "power(4,2)"), ConfigError);
    CHECK_THROWS_AS(parse_rep(s3, "power(3,9)"), ResourceError);
    CHECK_THROWS_AS(parse_rep(s3, "tensor(natural)"), ConfigError);
  }

  TEST_CASE("architecture config")
  {
    auto cfg = parse_architecture_config(R"J({
      "group": "cyclic(3)",
      "layers": [
        {"source": "natural", "target": "natural", "generators": "circular(2)"},
        {"target": "trivial", "bias": "null"}
      ],
      "activation": "tanh",
      "limits": {"max_union_members": 50}
    })J");
    CHECK(cfg.group->order() == 3);
    CHECK(cfg.activation == ActivationKind::tanh);
    CHECK(cfg.engine.max_union_members == 50);
    REQUIRE(cfg.architecture.depth() == 2);
    CHECK(cfg.architecture.layers()[0].generators().size() == 2);
    CHECK(cfg.architecture.layers()[0].bias().is_complete());
    CHECK_FALSE(cfg.architecture.layers()[1].bias().is_complete());
  }

  TEST_CASE("explicit matrices and partitions")
  {
    auto cfg = parse_architecture_config(R"J({
      "group": "cyclic(2)",
      "layers": [
        {"source": "natural", "target": "natural",
         "generators": [[[1, 0], [0, 1]], [["1/2", "1/2"], ["1/2", "1/2"]]],
         "bias": [[0, 1]]},
        {"target": "trivial", "bias": "null"}
      ]
    })J");
    CHECK(cfg.architecture.layers()[0].generators().size() == 2);
    CHECK(cfg.architecture.layers()[0].generators()[1](0, 1) == Rational(1, 2));
  }

  TEST_CASE("diagnostics name the offending field")
  {
    auto base = [](std::string layer0) {
      return R"J({"group": "cyclic(3)", "layers": [)J" + layer0 +
             R"J(, {"target": "trivial", "bias": "null"}]})J";
    };
    CHECK(mentions(config_error(base(R"J({"source": "natural", "target": "natural", "bias": "sometimes"})J")),
                   "config.layers[0].bias"));
    CHECK(mentions(config_error(base(R"J({"source": "natural", "target": "natural", "generators": "circular(7)"})J")),
                   "config.layers[0].generators"));
    CHECK(mentions(config_error(base(R"J({"source": "nope", "target": "natural"})J")),
                   "config.layers[0].source"));
    CHECK(mentions(config_error(base(R"J({"target": "natural"})J")),
                   "config.layers[0]"));
    CHECK(mentions(config_error(base(R"J({"source": "natural", "target": "natural", "colour": 1})J")),
                   "unknown field 'colour'"));
    CHECK(mentions(config_error(base(R"J({"source": "natural", "target": "natural", "generators": [[[1, 0, 0], [0, 0, 0], [0, 0, 0]]]})J")),
                   "config.layers[0]"));
    CHECK(mentions(config_error(R"J({"group": "cyclic(3", "layers": []})J"),
                   "config.group"));
    CHECK(mentions(config_error(R"J({"group": "cyclic(3)", "layers": []})J"),
                   "config.layers"));
    CHECK(mentions(config_error(R"J({"group": "cyclic(3)", "layers": [{"source": "natural", "target": "trivial"}], "limits": {"max_block_size": 0}})J"),
                   "config.limits.max_block_size"));
    CHECK(mentions(config_error("{\n\"group\": \"cyclic(3)\",\n\"layers\": [,]\n}"),
                   "config line 3"));
    CHECK(mentions(config_error(R"J({"group": "cyclic(3)", "layers": [{"source": "natural", "target": "trivial"}], "activation": "gelu"})J"),
                   "config.activation"));
  }

  TEST_CASE("shipped configs load")
  {
    std::size_t count = 0;
    for (auto const &entry : std::filesystem::directory_iterator(source_dir() / "configs")) {
      if (entry.path().extension() != ".json")
        continue;
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_architecture_config(entry.path()));
      ++count;
    }
    CHECK(count >= 8);
    CHECK_THROWS_AS(load_architecture_config(source_dir() / "configs" / "absent.json"),
                    ConfigError);
    auto bad = source_dir() / "tests" / "cli" / "malformed_group.json";
    try {
      load_architecture_config(bad);
      FAIL("expected a config error");
    } catch (ConfigError const &e) {
      CHECK(mentions(e.what(), "malformed_group.json"));
      CHECK(mentions(e.what(), "config.group"));
    }
  }

  TEST_CASE("rational vectors")
  {
    auto v = parse_rational_vector("[1, 2/3, -4]");
    REQUIRE(v.size() == 3);
    CHECK(v[1] == Rational(2, 3));
    CHECK(parse_rational_vector("1,2,3").size() == 3);
    CHECK(parse_rational_vector("").empty());
    CHECK_THROWS_AS(parse_rational_vector("[1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_rational_vector("1, x"), ConfigError);
    auto d = to_doubles(v);
    CHECK(d[1] == doctest::Approx(2.0 / 3.0));
  }
}
