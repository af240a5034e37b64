#include <catch_amalgamated.hpp>

#include "diagcalc/error.hpp"
#include "diagcalc/morphism.hpp"
#include "diagcalc/physlib.hpp"
#include "support.hpp"

using namespace diagcalc;
using namespace testing_support;

namespace {

bool same_morphism(const DiagramMorphism& a, const DiagramMorphism& b) {
  if (!(a.dom == b.dom) || !(a.cod == b.cod)) return false;
  if (a.shape_map.ob != b.shape_map.ob) return false;
  for (EdgeId e = 0; e < a.shape_map.hom.size(); ++e)
    if (paths_equal(a.dom.shape(), a.shape_map.hom[e], b.shape_map.hom[e]) != PathEquality::Equal) return false;
  for (std::size_t j = 0; j < a.components.size(); ++j)
    if (a.dom.semantics().compare(a.components[j], b.components[j]).verdict != Verdict::Equal) return false;
  return true;
}

}  // namespace

TEST_CASE("identity morphism is valid and strict", "[morphism]") {
  Diagram d = model_heat(path_graph(3), 2);
  DiagramMorphism id = identity_morphism(d);
  CHECK(id.strict);
  CHECK(id.strong);
  CHECK(check_naturality(id).ok());
}

TEST_CASE("diffusion to heat morphism", "[morphism]") {
  DiagramMorphism m = model_diffusion_to_heat(cycle_graph(4), 0.5, 2);
  CHECK(m.strict);
  CHECK(check_naturality(m).ok());
  CHECK(check_functor(m.shape_map).ok());
  // Wrong diffusivity: the heat side uses k = 1 while diffusion uses k = 0.5.
  Diagram heat1 = model_heat(cycle_graph(4), 2, 1.0);
  CHECK_THROWS_AS(make_morphism(m.dom, heat1, m.shape_map, m.components), ValidationError);
}

TEST_CASE("Dirichlet projection morphism", "[morphism]") {
  std::vector<std::size_t> omega{1, 2};
  DiagramMorphism m = model_dirichlet(path_graph(5), omega);
  CHECK(check_naturality(m).ok());
  CHECK(m.cod.graph().vertex_count() == 1);
  CHECK(m.dom.graph().vertex_count() == 3);
  CHECK_FALSE(m.strict);
}

TEST_CASE("static Maxwell-Faraday naturality uses d squared", "[morphism]") {
  DiagramMorphism m = model_static_maxwell_faraday();
  CHECK(check_naturality(m).ok());
  CHECK_FALSE(m.assumed);
}

TEST_CASE("perturbed component is a named naturality failure", "[morphism]") {
  DiagramBuilder b(Semantics::linear());
  b.object("x", real_space(1));
  b.object("y", real_space(1));
  b.edge("f", "x", "y", LinMap::from_dense(real_space(1), real_space(1), Eigen::MatrixXd::Constant(1, 1, 2.0)));
  Diagram d = b.build();
  DiagramMorphism id = identity_morphism(d);
  std::vector<Morphism> comps = id.components;
  comps[1] = LinMap::from_dense(real_space(1), real_space(1), Eigen::MatrixXd::Constant(1, 1, 1.5));
  try {
    make_morphism(d, d, id.shape_map, comps);
    FAIL("expected a naturality failure");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'f'") != std::string::npos);
  }
}

TEST_CASE("unproven symbolic naturality needs assume", "[morphism]") {
  DiagramMorphism with = model_lie_derivative(true);
  DiagramMorphism without = model_lie_derivative(false);
  CHECK(check_naturality(with).ok());
  CHECK(check_naturality(without).ok());

  auto sig = std::make_shared<OperatorSignature>();
  sig->add_sort("A");
  sig->add_op("f", "A", "A");
  sig->add_op("g", "A", "A");
  DiagramBuilder b1(Semantics::symbolic(sig));
  b1.object("x", Sort("A"));
  b1.object("y", Sort("A"));
  b1.word_edge("e", "x", "y", {"f"});
  DiagramBuilder b2(Semantics::symbolic(sig));
  b2.object("x", Sort("A"));
  b2.object("y", Sort("A"));
  b2.word_edge("e", "x", "y", {"g"});
  Diagram d1 = b1.build(), d2 = b2.build();
  FinFunctor r{d2.shape(), d1.shape(), {0, 1}, {make_path(d1.graph(), 0, {0})}};
  std::vector<Morphism> ids{SymMorphism::identity("A"), SymMorphism::identity("A")};
  CHECK_THROWS_AS(make_morphism(d1, d2, r, ids), ValidationError);
  DiagramMorphism assumed = make_morphism(d1, d2, r, ids, MorphismOptions{true});
  CHECK(assumed.assumed);
}

TEST_CASE("composition laws", "[morphism]") {
  DiagramMorphism m = model_diffusion_to_heat(path_graph(4), 0.3, 2);
  CHECK(same_morphism(compose_morphisms(m, identity_morphism(m.cod)), m));
  CHECK(same_morphism(compose_morphisms(identity_morphism(m.dom), m), m));
  DiagramMorphism twice = compose_morphisms(identity_morphism(m.dom), identity_morphism(m.dom));
  CHECK(twice.strict);
  CHECK_THROWS_AS(compose_morphisms(m, m), ValidationError);
}

TEST_CASE("collage of identity on heat", "[morphism]") {
  Diagram d = model_heat(path_graph(3), 2);
  Collage c = collage(identity_morphism(d));
  CHECK(c.diagram.graph().vertex_count() == 4);
  CHECK(c.diagram.graph().edge_count() == 6);
  CHECK(c.component_edges.size() == 2);
  CHECK(check_functor(c.dom_inclusion).ok());
  CHECK(check_functor(c.cod_inclusion).ok());
}

TEST_CASE("collage of static Maxwell-Faraday", "[morphism]") {
  DiagramMorphism m = model_static_maxwell_faraday();
  Collage c = collage(m);
  CHECK(c.diagram.graph().vertex_count() == m.dom.graph().vertex_count() + m.cod.graph().vertex_count());
  CHECK(c.diagram.graph().vertex_count() == 12);
}

TEST_CASE("random morphisms: naturality, collage, associativity", "[morphism][property]") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    RandomTriple t = random_triple(rng);
    CHECK(check_naturality(t.morphism).ok());
    Collage c = collage(t.morphism);
    CHECK(check_functor(c.dom_inclusion).ok());
    CHECK(check_functor(c.cod_inclusion).ok());
    CHECK(c.diagram.graph().vertex_count() ==
          t.morphism.dom.graph().vertex_count() + t.morphism.cod.graph().vertex_count());

    DiagramMorphism m = t.morphism;
    DiagramMorphism i1 = identity_morphism(m.dom), i2 = identity_morphism(m.cod);
    DiagramMorphism left = compose_morphisms(compose_morphisms(i1, m), i2);
    DiagramMorphism right = compose_morphisms(i1, compose_morphisms(m, i2));
    REQUIRE(left.components.size() == right.components.size());
    CHECK(left.shape_map.ob == right.shape_map.ob);
    for (std::size_t j = 0; j < left.components.size(); ++j)
      CHECK(lin_identical(as_linear(left.components[j]), as_linear(right.components[j])));
  }
}
