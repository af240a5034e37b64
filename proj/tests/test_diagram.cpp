#include <catch_amalgamated.hpp>

#include <regex>

#include "diagcalc/diagram.hpp"
#include "diagcalc/error.hpp"
#include "diagcalc/physlib.hpp"
#include "support.hpp"

using namespace diagcalc;
using namespace testing_support;

namespace {

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

}  // namespace

TEST_CASE("heat diagram builds and does not commute", "[diagram]") {
  Diagram d = model_heat(path_graph(3), 3);
  CHECK(d.graph().vertex_count() == 2);
  CHECK(d.graph().edge_count() == 2);
  CHECK(d.dim(0) == 12);
  CHECK(d.dim(1) == 9);
  auto rep = check_commutes(d);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].status == CommuteStatus::Fails);
  CHECK(rep.entries[0].discrepancy > 0.0);
}

TEST_CASE("Maxwell house builds with two product nodes", "[diagram]") {
  Diagram d = model_maxwell_house();
  CHECK(d.products().size() == 2);
  CHECK(d.sum_edges().size() == 2);
  CHECK(check_products(d).ok());
  std::string dot = export_dot(d, "house");
  // Solid arrows of the figure, products included.
  CHECK(count_matches(dot, R"(\n  v\d+ \[label)") == 16);
  CHECK(count_matches(dot, R"(v\d+ -> v\d+)") == 18);
  CHECK(count_matches(dot, "doublecircle") == 2);
}

TEST_CASE("product node that is not a direct sum is rejected", "[diagram]") {
  DiagramBuilder b(Semantics::linear());
  b.object("x", real_space(1));
  b.object("y", real_space(2));
  b.product("p", {"x", "y"}, {"p1", "p2"});
  CHECK(b.build().products().size() == 1);

  // Same shape, but the first projection picks the wrong coordinate.
  Graph g = b.graph();
  Diagram good = b.build();
  std::vector<Object> ob = good.objects();
  std::vector<Morphism> hom = good.morphisms();
  Eigen::MatrixXd wrong(1, 3);
  wrong << 0, 1, 0;
  hom[0] = LinMap::from_dense(as_space(ob[2]), as_space(ob[0]), wrong);
  try {
    build_diagram(Presentation(g), Semantics::linear(), ob, hom, good.products());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'p'") != std::string::npos);
  }
}

TEST_CASE("shape relations must hold semantically", "[diagram]") {
  Graph g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_edge("f", 0, 1);
  g.add_edge("h", 0, 1);
  Presentation p(g, {Relation{make_path(g, 0, {0}), make_path(g, 0, {1})}});
  std::vector<Object> ob{real_space(1), real_space(1)};
  Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
  std::vector<Morphism> same{LinMap::from_dense(real_space(1), real_space(1), one),
                             LinMap::from_dense(real_space(1), real_space(1), one)};
  CHECK_NOTHROW(build_diagram(p, Semantics::linear(), ob, same));
  std::vector<Morphism> diff{same[0], LinMap::from_dense(real_space(1), real_space(1), 2 * one)};
  CHECK_THROWS_AS(build_diagram(p, Semantics::linear(), ob, diff), ValidationError);
}

TEST_CASE("typing errors name the edge", "[diagram]") {
  DiagramBuilder b(Semantics::linear());
  b.object("x", real_space(2));
  b.object("y", real_space(3));
  try {
    b.edge("f", "x", "y", LinMap::identity(real_space(2)));
    b.build();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'f'") != std::string::npos);
  }
}

TEST_CASE("d squared vanishes in the potentials diagram", "[diagram]") {
  Diagram d = model_potentials_with_zero();
  auto rep = check_commutes(d);
  REQUIRE_FALSE(rep.entries.empty());
  CHECK(rep.all_commute());
}

TEST_CASE("single edge commutes vacuously; no products pass", "[diagram]") {
  DiagramBuilder b(Semantics::linear());
  b.object("x", real_space(1));
  b.object("y", real_space(1));
  b.edge("f", "x", "y", LinMap::identity(real_space(1)));
  Diagram d = b.build();
  CHECK(check_commutes(d).entries.empty());
  CHECK(check_products(d).ok());
}

TEST_CASE("product check on the source term diagram", "[diagram]") {
  OpenDiagram o = model_conservation_with_source(path_graph(4), 2);
  CHECK(o.apex.products().size() == 1);
  CHECK(check_products(o.apex).ok());
}

TEST_CASE("symbolic NotProven is reported, not failed", "[diagram]") {
  auto sig = std::make_shared<OperatorSignature>();
  sig->add_sort("A");
  sig->add_op("f", "A", "A");
  sig->add_op("g", "A", "A");
  DiagramBuilder b(Semantics::symbolic(sig));
  b.object("x", Sort("A"));
  b.object("y", Sort("A"));
  b.word_edge("e1", "x", "y", {"f"});
  b.word_edge("e2", "x", "y", {"g"});
  auto rep = check_commutes(b.build());
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].status == CommuteStatus::NotProven);
}

TEST_CASE("dot export", "[diagram]") {
  Diagram empty = build_diagram(Presentation(), Semantics::linear(), {}, {});
  CHECK(export_dot(empty, "E") == "digraph \"E\" {\n}\n");
  std::string heat = export_dot(model_heat(path_graph(2), 1), "heat");
  CHECK(count_matches(heat, R"(\n  v\d+ \[label)") == 2);
  CHECK(count_matches(heat, R"(v\d+ -> v\d+)") == 2);
  CHECK(heat == export_dot(model_heat(path_graph(2), 1), "heat"));
}

TEST_CASE("verdicts are stable under tolerance doubling", "[diagram][property]") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    // Random two-path diagrams whose discrepancy is either zero or far above tol.
    std::size_t n = uniform_index(rng, 1, 3);
    Eigen::MatrixXd a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
    Eigen::MatrixXd c = b * a;
    if (trial % 2) c(0, 0) += 1e-3;
    DiagramBuilder db(Semantics::linear(1e-9));
    for (auto v : {"x", "y", "z"}) db.object(v, real_space(n));
    db.edge("a", "x", "y", LinMap::from_dense(real_space(n), real_space(n), a));
    db.edge("b", "y", "z", LinMap::from_dense(real_space(n), real_space(n), b));
    db.edge("c", "x", "z", LinMap::from_dense(real_space(n), real_space(n), c));
    Diagram d = db.build();
    auto r1 = check_commutes(d);
    auto r2 = check_commutes(with_semantics(d, Semantics::linear(2e-9)));
    REQUIRE(r1.entries.size() == r2.entries.size());
    for (std::size_t i = 0; i < r1.entries.size(); ++i) CHECK(r1.entries[i].status == r2.entries[i].status);
    CHECK(r1.all_commute() == (trial % 2 == 0));
  }
}
