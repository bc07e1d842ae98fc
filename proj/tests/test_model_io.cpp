#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "etcabs/model_io.hpp"

using namespace etcabs;

namespace {

const char* kDoc = R"({
  "plant": {
    "A": [[0, 1], [-2, 3]],
    "B": [[0], [1]],
    "E": [[0], [1]],
    "W": 0.001,
    "gamma": 100,
    "beta": 0.25
  }
})";

}  // namespace

TEST_CASE("benchmark manifest parses with defaults") {
  RunManifest m = parse_manifest(kDoc);
  CHECK(m.plant.A(1, 0) == -2);
  CHECK(m.plant.A(1, 1) == 3);
  CHECK(m.plant.B(1, 0) == 1);
  CHECK(m.plant.W == 0.001);
  CHECK(m.plant.gamma == 100);
  CHECK(m.plant.beta == 0.25);
  // documented defaults
  CHECK(m.config.n_conv == 7);
  CHECK(m.config.l == 800);
  CHECK(m.config.sigma == 8.0);
  CHECK(m.config.m_bar == 10);
  CHECK(m.config.time_scale == 1000);
  CHECK(m.config.psi_scale == 1.0);
  CHECK(m.config.eta_samples == 10);
  CHECK(m.seed == 0);
  CHECK(!m.x0);
  CHECK(m.out_dir == "out");
}

TEST_CASE("dimension mismatch names the field") {
  std::string doc = R"({"plant": {"A": [[0,1],[-2,3]],
    "B": [[0],[1],[2]], "E": [[0],[1]], "W": 0, "gamma": 1, "beta": 1}})";
  CHECK_THROWS_WITH_AS(parse_manifest(doc),
                       doctest::Contains("plant.B"), ManifestError);
}

TEST_CASE("schema violations carry field paths") {
  CHECK_THROWS_AS(parse_manifest("not json"), ManifestError);
  CHECK_THROWS_AS(parse_manifest("{}"), ManifestError);
  std::string bad_entry = R"({"plant": {"A": [[0,"x"],[-2,3]],
    "B": [[0],[1]], "E": [[0],[1]], "W": 0, "gamma": 1, "beta": 1}})";
  CHECK_THROWS_WITH_AS(parse_manifest(bad_entry),
                       doctest::Contains("plant.A[0][1]"), ManifestError);
  std::string ragged = R"({"plant": {"A": [[0,1],[-2]],
    "B": [[0],[1]], "E": [[0],[1]], "W": 0, "gamma": 1, "beta": 1}})";
  CHECK_THROWS_WITH_AS(parse_manifest(ragged), doctest::Contains("plant.A"),
                       ManifestError);
}

TEST_CASE("range validation") {
  auto doc = [](const std::string& extra) {
    return R"({"plant": {"A": [[0,1],[-2,3]], "B": [[0],[1]],
      "E": [[0],[1]], "W": 0.001, "gamma": 100, "beta": 0.25})" + extra + "}";
  };
  CHECK_THROWS_WITH_AS(parse_manifest(doc(R"(, "config": {"sigma": 0})")),
                       doctest::Contains("config.sigma"), ManifestError);
  CHECK_THROWS_WITH_AS(parse_manifest(doc(R"(, "config": {"m_bar": 1})")),
                       doctest::Contains("config.m_bar"), ManifestError);
  CHECK_THROWS_WITH_AS(parse_manifest(doc(R"(, "config": {"l": 2.5})")),
                       doctest::Contains("config.l"), ManifestError);
  CHECK_THROWS_WITH_AS(parse_manifest(doc(R"(, "seed": -4)")),
                       doctest::Contains("seed"), ManifestError);
  CHECK_THROWS_WITH_AS(parse_manifest(doc(R"(, "x0": [[1],[2],[3]])")),
                       doctest::Contains("x0"), ManifestError);
  std::string neg_w = R"({"plant": {"A": [[1]], "B": [[1]], "E": [[1]],
    "W": -1, "gamma": 1, "beta": 1}})";
  CHECK_THROWS_WITH_AS(parse_manifest(neg_w), doctest::Contains("plant.W"),
                       ManifestError);
  std::string bad_gamma = R"({"plant": {"A": [[1]], "B": [[1]], "E": [[1]],
    "W": 0, "gamma": 0, "beta": 1}})";
  CHECK_THROWS_WITH_AS(parse_manifest(bad_gamma),
                       doctest::Contains("plant.gamma"), ManifestError);
}

TEST_CASE("x0 and seed round out the manifest") {
  std::string doc = R"({"plant": {"A": [[0,1],[-2,3]], "B": [[0],[1]],
    "E": [[0],[1]], "W": 0.001, "gamma": 100, "beta": 0.25},
    "seed": 42, "x0": [[1],[0]], "outputs": {"dir": "runs/a"}})";
  RunManifest m = parse_manifest(doc);
  CHECK(m.seed == 42);
  REQUIRE(m.x0.has_value());
  CHECK((*m.x0)(0) == 1);
  CHECK(m.out_dir == "runs/a");
}

TEST_CASE("serialize/parse round-trip") {
  std::string doc = R"({"plant": {"A": [[0,1],[-2,3]], "B": [[0],[1]],
    "E": [[0],[1]], "W": 0.001, "gamma": 100, "beta": 0.25},
    "config": {"l": 400, "sigma": 6.5, "tau_cap": 1.25},
    "seed": 7, "x0": [[0.5],[-0.25]]})";
  RunManifest m = parse_manifest(doc);
  RunManifest m2 = parse_manifest(serialize_manifest(m));
  CHECK(m2.plant.A == m.plant.A);
  CHECK(m2.plant.W == m.plant.W);
  CHECK(m2.config.l == m.config.l);
  CHECK(m2.config.sigma == m.config.sigma);
  CHECK(m2.config.tau_cap == m.config.tau_cap);
  CHECK(m2.seed == m.seed);
  REQUIRE(m2.x0.has_value());
  CHECK(*m2.x0 == *m.x0);
  // serialization is canonical: a second round emits identical bytes
  CHECK(serialize_manifest(m2) == serialize_manifest(m));
}

TEST_CASE("emit_csv one-row shape") {
  Table t;
  t.names = {"s", "tau_lo"};
  t.columns = {{1}, {0.5}};
  CHECK(emit_csv(t) == "s,tau_lo\n1,0.5");
}

TEST_CASE("emit_csv empty table is header only") {
  Table t;
  t.names = {"a", "b"};
  t.columns = {{}, {}};
  CHECK(emit_csv(t) == "a,b");
}

TEST_CASE("emit_csv 20 rows make 21 lines") {
  Table t;
  t.names = {"s"};
  t.columns = {{}};
  for (int i = 1; i <= 20; ++i) t.columns[0].push_back(i);
  std::string out = emit_csv(t);
  CHECK(std::count(out.begin(), out.end(), '\n') == 20);  // 21 lines
}

TEST_CASE("emit_csv rejects ragged columns") {
  Table t;
  t.names = {"a", "b"};
  t.columns = {{1, 2}, {1}};
  CHECK_THROWS_AS(emit_csv(t), EtcabsError);
}

TEST_CASE("emit_csv prints 9 significant digits") {
  Table t;
  t.names = {"v"};
  t.columns = {{0.123456789123}};
  CHECK(emit_csv(t) == "v\n0.123456789");
}
