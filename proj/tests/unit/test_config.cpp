#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "anisofrac/config.hpp"

using namespace anisofrac;

namespace {

std::string key_of(const Json& j) {
  try {
    parse_problem(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("problem parsing") {
    const Json j = Json::parse(R"({"groups":[{"dim":2,"s":0.25,"a":0.5},{"dim":1}],
                                   "radii":[1.5,2],"dilation":1.25,
                                   "quadrature":{"angular_nodes":32,"tail_mode":"numeric"}})");
    const auto p = parse_problem(j);
    CHECK(p.decomp.dimension() == 3);
    CHECK(p.decomp.order(0) == 0.25);
    CHECK(p.decomp.weight(0) == 0.5);
    CHECK(p.domain.dilation == 1.25);
    CHECK(p.quad.angular_nodes == 32);
    CHECK(p.quad.tail_mode == TailMode::numeric);
    CHECK(p.quad.near_radius == doctest::Approx(0.15));

    const auto d = default_problem();
    CHECK(d.decomp.dimension() == 2);
    CHECK(d.domain.radii == std::vector<double>{1.0, 1.0});
  }

  TEST_CASE("errors name the offending key") {
    CHECK(key_of(Json::parse(R"({"radii":[1,1]})")) == "groups");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":"x"},{"dim":1}],"radii":[1,1]})")) == "groups[0].s");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":0.5},{"dim":1,"s":1}],"radii":[1,1]})")) == "groups[1].s");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":0.5},{"dim":2}],"radii":[1,1]})")) == "groups[1].dim");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":0.5},{"dim":1}],"radii":[1,"a"]})")) == "radii[1]");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":0.5},{"dim":1}],"radii":[1,1],"bogus":1})")) == "bogus");
    CHECK(key_of(Json::parse(R"({"groups":[{"dim":1,"s":0.5},{"dim":1}],"radii":[1,1],
                                  "quadrature":{"tail_mode":"x"}})")) == "quadrature.tail_mode");
  }

  TEST_CASE("fields from presets, expressions and grids") {
    const auto p = default_problem();
    const auto a = parse_field(Json{{"preset", "affine"}, {"c", 1.0}, {"b", 2.0}}, p);
    const std::vector<double> o{0.0, 0.5};
    CHECK(a.field->value(o) == doctest::Approx(2.0));

    const auto e = parse_field(Json::parse(R"({"expr":{"op":"mul","args":[{"coord":0},{"op":"sin","arg":{"coord":1}}]},
                                              "sup_u":1,"sup_dnu":1})"), p);
    CHECK(e.field->value(std::vector<double>{2.0, 0.5}) == doctest::Approx(2.0 * std::sin(0.5)));
    CHECK(*e.sup_u == 1.0);

    const auto g = parse_field(Json::parse(R"({"grid":{"lo":[0,0],"spacing":[1,1],"counts":[2,2],"values":[0,1,2,3]}})"), p);
    CHECK(g.field->value(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.5));

    try {
      parse_field(Json::parse(R"({"expr":{"op":"pow_pos","base":{"coord":0}}})"), p, "rhs");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& err) {
      CHECK(err.key() == "rhs.expr.p");
    }
    CHECK_THROWS_AS(parse_field(Json::parse(R"({"expr":{"coord":5}})"), p), ConfigError);
    CHECK_THROWS_AS(parse_field(Json::parse(R"({"preset":"nope"})"), p), ConfigError);
  }

  TEST_CASE("points CSV") {
    const auto path = std::filesystem::temp_directory_path() / "anisofrac_points_test.csv";
    {
      std::ofstream out(path);
      out << "x0,x1\n# comment\n0,1\n\n0.5,-0.25\n";
    }
    const auto pts = load_points_csv(path, 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1] == std::vector<double>{0.5, -0.25});
    CHECK_THROWS_AS(load_points_csv(path, 3), ConfigError);
    std::filesystem::remove(path);
  }

  TEST_CASE("quadrature round trip") {
    QuadratureSpec q;
    q.radial_nodes = 128;
    const auto back = parse_quadrature(to_json(q), QuadratureSpec{}, "q");
    CHECK(back.radial_nodes == 128);
    CHECK(back.far_cutoff == q.far_cutoff);
    CHECK(parse_probe_ys(Json::parse("[0.1, 0.2]")) == std::vector<double>{0.1, 0.2});
  }
}
