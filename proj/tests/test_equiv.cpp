#include <catch_amalgamated.hpp>

#include "diagcalc/equiv.hpp"
#include "diagcalc/error.hpp"
#include "diagcalc/physlib.hpp"
#include "support.hpp"

using namespace diagcalc;
using namespace testing_support;

namespace {

// K = {a, b} with no edges, J = a -> c <- b.
FinFunctor cospan_legs() {
  Graph k;
  k.add_vertex("a");
  k.add_vertex("b");
  Graph j;
  for (auto n : {"a", "b", "c"}) j.add_vertex(n);
  j.add_edge("f", 0, 2);
  j.add_edge("g", 1, 2);
  return FinFunctor{Presentation(k), Presentation(j), {0, 1}, {}};
}

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

Lift heat_lift(const SWGraph& g, std::size_t T, double k, const Eigen::VectorXd& u0) {
  auto out = solve_lift(model_heat(g, T, k), heat_initial_pin(g, u0));
  return std::get<Unique>(out).lift;
}

}  // namespace

TEST_CASE("is_initial examples", "[equiv]") {
  Diagram heat = model_heat(path_graph(3), 2);
  auto id = is_initial(FinFunctor::identity(heat.shape()));
  CHECK(id.initial);
  CHECK(id.summaries.size() == 2);

  DiagramMorphism m = model_diffusion_to_heat(path_graph(3), 1.0, 2);
  auto res = is_initial(m.shape_map);
  CHECK(res.initial);
  REQUIRE(res.summaries.size() == m.dom.graph().vertex_count());
  for (const auto& s : res.summaries) {
    CHECK(s.object_count >= 1);
    CHECK(s.component_count == 1);
  }
  VertexId cdot = *m.dom.graph().find_vertex("C_dot");
  CHECK(res.summaries[cdot].object_count == 3);

  auto disc = is_initial(cospan_legs());
  CHECK_FALSE(disc.initial);
  CHECK(disc.summaries[2].object_count == 2);
  CHECK(disc.summaries[2].component_count == 2);
}

TEST_CASE("fullness and essential surjectivity", "[equiv]") {
  Diagram heat = model_heat(cycle_graph(3), 2);
  CHECK(is_full_ess_surjective(FinFunctor::identity(heat.shape())));
  DiagramMorphism m = model_diffusion_to_heat(cycle_graph(3), 1.0, 2);
  CHECK_FALSE(is_full_ess_surjective(m.shape_map));

  Graph loop;
  loop.add_vertex("x");
  loop.add_edge("l", 0, 0);
  CHECK_THROWS_AS(is_full_ess_surjective(FinFunctor::identity(Presentation(loop))), NotAcyclicError);
}

TEST_CASE("certificates for the catalogued morphisms", "[equiv]") {
  auto id = certify_weak_equivalence(identity_morphism(model_heat(path_graph(2), 1)));
  REQUIRE(std::holds_alternative<EquivCertificate>(id));
  CHECK(std::get<EquivCertificate>(id).kind == CertificateKind::FullEssSurj);

  DiagramMorphism dh = model_diffusion_to_heat(cycle_graph(4), 0.25, 3);
  auto c = certify_weak_equivalence(dh);
  REQUIRE(std::holds_alternative<EquivCertificate>(c));
  const auto& cert = std::get<EquivCertificate>(c);
  CHECK(cert.kind == CertificateKind::InitialFunctor);
  std::string text = format_certificate(cert, dh.dom.graph());
  CHECK(text.rfind("certificate InitialFunctor\n", 0) == 0);
  CHECK(text.find("comma at C_dot: objects=3 components=1") != std::string::npos);

  auto lie = certify_weak_equivalence(model_lie_derivative(true));
  REQUIRE(std::holds_alternative<EquivCertificate>(lie));
  CHECK(std::get<EquivCertificate>(lie).kind == CertificateKind::RelativelyInitial);

  auto norule = certify_weak_equivalence(model_lie_derivative(false));
  REQUIRE(std::holds_alternative<EquivNotProven>(norule));
  CHECK_FALSE(std::get<EquivNotProven>(norule).reason.empty());

  // The Dirichlet restriction is not invertible.
  std::vector<std::size_t> omega{1};
  CHECK_THROWS_AS(certify_weak_equivalence(model_dirichlet(path_graph(3), omega)), ValidationError);
}

TEST_CASE("relative comma categories of the Lie derivative morphism", "[equiv]") {
  ForwardMorphism with = inverse_forward(model_lie_derivative(true));
  auto yes = is_relatively_initial(with);
  CHECK(yes.verdict == Tri::Yes);
  // At b: (a, L), (a, iota d) and (b, id) are joined once L = iota d is provable.
  CommaCategory at_b = relative_comma_category(with, 2);
  CHECK(at_b.objects.size() == 3);
  CHECK(at_b.nonempty_connected());

  ForwardMorphism without = inverse_forward(model_lie_derivative(false));
  CHECK(is_relatively_initial(without).verdict != Tri::Yes);
  CHECK(to_string(Tri::Inconclusive) != to_string(Tri::No));
}

TEST_CASE("lift transfer along diffusion to heat", "[equiv]") {
  SWGraph g = cycle_graph(4);
  const std::size_t T = 3;
  const double k = 0.25;
  DiagramMorphism m = model_diffusion_to_heat(g, k, T);
  auto cert = std::get<EquivCertificate>(certify_weak_equivalence(m));
  Eigen::Vector4d u0(1, 0, 0, 2);
  Lift target = heat_lift(g, T, k, u0);

  Lift back = transfer_lift_backward(m, cert, target);
  CHECK(verify_lift(m.dom, back).ok());
  Lift again = pushforward_lift(m, back);
  for (std::size_t j = 0; j < 2; ++j) CHECK(max_diff(again.elements[j], target.elements[j]) <= 1e-12);

  Lift rev = transfer_lift_backward(m, cert, target, TransferOptions{true});
  for (std::size_t j = 0; j < back.elements.size(); ++j)
    CHECK(max_diff(rev.elements[j], back.elements[j]) <= 1e-10);

  Lift broken = target;
  broken.elements[1](0) += 1.0;
  CHECK_THROWS_AS(transfer_lift_backward(m, cert, broken), ValidationError);
}

TEST_CASE("fully faithful bijective functors are initial", "[equiv][property]") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    FinFunctor f = random_functor(rng, true);
    REQUIRE(check_functor(f).ok());
    CHECK(is_full_ess_surjective(f));
    CHECK(is_initial(f).initial);
  }
}

TEST_CASE("transfer and pushforward are mutually inverse", "[equiv][property]") {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    SWGraph g = random_connected_graph(rng, uniform_index(rng, 2, 6));
    std::size_t T = uniform_index(rng, 1, 3);
    double k = uniform_real(rng, 0.05, 0.4);
    DiagramMorphism m = model_diffusion_to_heat(g, k, T);
    auto cert = std::get<EquivCertificate>(certify_weak_equivalence(m));
    Lift target = heat_lift(g, T, k, random_vector(rng, g.vertex_count()));

    // Pushforward after transfer recovers the target.
    Lift back = transfer_lift_backward(m, cert, target);
    Lift there = pushforward_lift(m, back);
    for (std::size_t j = 0; j < 2; ++j) CHECK(max_diff(there.elements[j], target.elements[j]) <= 1e-9);

    // Transfer after pushforward recovers the source; the choice of comma object does not matter.
    Lift round = transfer_lift_backward(m, cert, there, TransferOptions{true});
    for (std::size_t j = 0; j < back.elements.size(); ++j)
      CHECK(max_diff(round.elements[j], back.elements[j]) <= 1e-9);
  }
}
