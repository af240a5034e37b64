#include <catch_amalgamated.hpp>

#include "diagcalc/error.hpp"
#include "diagcalc/physlib.hpp"
#include "support.hpp"

using namespace diagcalc;
using namespace testing_support;

namespace {

// Random-walk Laplacian written out entry by entry.
Eigen::MatrixXd laplacian_oracle(const SWGraph& g) {
  const std::size_t n = g.vertex_count();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  for (const auto& e : g.edges()) mu(e.src) += e.weight;
  Eigen::MatrixXd l = -Eigen::MatrixXd::Identity(n, n);
  for (const auto& e : g.edges()) l(e.src, e.tgt) += e.weight / mu(e.src);
  return l;
}

}  // namespace

TEST_CASE("graph constructors", "[physlib]") {
  SWGraph p = path_graph(3);
  CHECK(p.vertex_count() == 3);
  CHECK(p.edge_count() == 4);
  CHECK(p.oriented().size() == 2);
  CHECK(cycle_graph(4).oriented().size() == 4);
  CHECK(complete_graph(4).oriented().size() == 6);
  CHECK(p.names() == std::vector<std::string>{"0", "1", "2"});
  CHECK(vertex_weight(p, 1) == 2.0);
  CHECK(vertex_weight(p, 0) == 1.0);
  CHECK_THROWS_AS(vertex_weight(p, 3), ValidationError);
}

TEST_CASE("graph axioms are enforced", "[physlib]") {
  CHECK_THROWS_AS(SWGraph(2, {{0, 1, 0, 1.0}}), ValidationError);                  // fixed point
  CHECK_THROWS_AS(SWGraph(2, {{0, 1, 1, 1.0}, {0, 1, 0, 1.0}}), ValidationError);  // not reversed
  CHECK_THROWS_AS(SWGraph(2, {{0, 1, 1, 1.0}, {1, 0, 0, 2.0}}), ValidationError);  // weight
  CHECK_THROWS_AS(SWGraph(2, {{0, 1, 1, 0.0}, {1, 0, 0, 0.0}}), ValidationError);  // weight
  CHECK_THROWS_AS(SWGraph(3, {{0, 1, 1, 1.0}, {1, 0, 0, 1.0}}), ValidationError);  // isolated
  CHECK_THROWS_AS(SWGraph(3, {{0, 1, 1, 1.0}, {1, 0, 2, 1.0}, {1, 2, 0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(SWGraph(2, {{0, 1, 1, 1.0}, {1, 0, 0, 1.0}}, {"a"}), ValidationError);
  CHECK_NOTHROW(SWGraph(2, {{0, 1, 1, 1.0}, {1, 0, 0, 1.0}}, {"a", "b"}));
}

TEST_CASE("Laplacian examples", "[physlib]") {
  Eigen::Matrix3d k3;
  k3 << -1, 0.5, 0.5, 0.5, -1, 0.5, 0.5, 0.5, -1;
  CHECK(discrete_laplacian(complete_graph(3)).dense() == k3);
  Eigen::Matrix3d p3;
  p3 << -1, 1, 0, 0.5, -1, 0.5, 0, 1, -1;
  CHECK(discrete_laplacian(path_graph(3)).dense() == p3);

  SWGraph w = SWGraph::from_undirected(3, {{0, 1, 1.0}, {1, 2, 3.0}});
  CHECK(discrete_laplacian(w).dense() == laplacian_oracle(w));
  CHECK(discrete_laplacian(w).dense()(1, 2) == 0.75);
}

TEST_CASE("incidence and averaging", "[physlib]") {
  Eigen::MatrixXd d0(2, 3);
  d0 << -1, 1, 0, 0, -1, 1;
  CHECK(incidence_d0(path_graph(3)).dense() == d0);
  Eigen::MatrixXd avg(2, 3);
  avg << 0.5, 0.5, 0, 0, 0.5, 0.5;
  CHECK(edge_average(path_graph(3)).dense() == avg);
  CHECK(incidence_d0(path_graph(3)).cod.basis == std::vector<std::string>{"0->1", "1->2"});
}

TEST_CASE("Hodge stars", "[physlib]") {
  SWGraph g = SWGraph::from_undirected(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  Stars s = stars(g, 3.0);
  CHECK(s.star0.dense().diagonal() == Eigen::Vector3d(2.0, 2.5, 0.5));
  CHECK(s.star1.dense().diagonal() == Eigen::Vector2d(6.0, 1.5));
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(stars(g, bad), ValidationError);
  std::vector<double> neg{1.0, -1.0};
  CHECK_THROWS_AS(stars(g, neg), ValidationError);
}

TEST_CASE("heat recursion", "[physlib]") {
  Eigen::MatrixXd t = heat_evolve(complete_graph(3), Eigen::Vector3d(1, 0, 0), 2);
  REQUIRE(t.rows() == 3);
  CHECK(t.row(1) == Eigen::RowVector3d(0, 0.5, 0.5));
  CHECK(t.row(2) == Eigen::RowVector3d(0.5, 0.25, 0.25));
  CHECK(heat_evolve(path_graph(2), Eigen::Vector2d(3, 3), 5).row(5) == Eigen::RowVector2d(3, 3));
  CHECK_THROWS_AS(heat_evolve(path_graph(2), Eigen::Vector3d(1, 0, 0), 1), ValidationError);
}

TEST_CASE("boundary operators", "[physlib]") {
  std::vector<std::size_t> omega{3, 1, 2};
  BoundaryOps ops = boundary_ops(path_graph(5), omega);
  CHECK(ops.interior == std::vector<std::size_t>{1, 2, 3});
  CHECK(ops.closure == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(ops.boundary == std::vector<std::size_t>{0, 4});
  CHECK(ops.laplacian.dom.dim == 5);
  CHECK(ops.laplacian.cod.dim == 3);
  Eigen::MatrixXd rest(2, 5);
  rest << 1, 0, 0, 0, 0, 0, 0, 0, 0, 1;
  CHECK(ops.restriction.dense() == rest);

  std::vector<std::size_t> two{0, 1};
  BoundaryOps c = boundary_ops(cycle_graph(4), two);
  CHECK(c.boundary == std::vector<std::size_t>{2, 3});

  std::vector<std::size_t> none, outside{9};
  CHECK_THROWS_AS(boundary_ops(path_graph(3), none), ValidationError);
  CHECK_THROWS_AS(boundary_ops(path_graph(3), outside), ValidationError);
}

TEST_CASE("catalogued diagrams have the documented shapes", "[physlib]") {
  SWGraph g = path_graph(3);
  CHECK(model_diffusion(g, 1.0, 2).apex.graph().vertex_count() == 5);
  CHECK(model_fick(g, 1.0, 2).legs.size() == 2);
  CHECK(model_conservation_with_source(g, 2).legs.size() == 3);
  CHECK(model_potentials_with_zero().graph().vertex_count() > 0);
  DiagramMorphism mf = model_static_maxwell_faraday();
  CHECK(mf.dom.graph().vertex_count() == 6);
  CHECK(mf.cod.graph().vertex_count() == 6);
  CHECK(vertex_history(g, 2).dim == 9);
  CHECK(vertex_rates(g, 2).dim == 6);
  CHECK(edge_history(g, 2).dim == 4);
  CHECK_THROWS_AS(model_heat(g, 0), ValidationError);
  std::vector<double> v{1.0};
  CHECK_THROWS_AS(model_advection(g, v, 1), ValidationError);
}

TEST_CASE("Laplacian factors through the stars", "[physlib][property]") {
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    SWGraph g = random_connected_graph(rng, uniform_index(rng, 2, 8));
    std::vector<double> k;
    for (std::size_t r = 0; r < g.oriented().size(); ++r) k.push_back(uniform_real(rng, 0.2, 3.0));
    Stars s = stars(g, k);
    Eigen::MatrixXd d0 = incidence_d0(g).dense();
    Eigen::MatrixXd lhs = s.star0.dense().inverse() * (-d0.transpose()) * s.star1.dense() * d0;

    // Oracle: conductivity-weighted random-walk Laplacian.
    const std::size_t n = g.vertex_count();
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    for (const auto& e : g.edges()) mu(e.src) += e.weight;
    Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < g.oriented().size(); ++r) {
      const auto& e = g.edges()[g.oriented()[r]];
      double c = k[r] * e.weight;
      oracle(e.src, e.tgt) += c / mu(e.src);
      oracle(e.tgt, e.src) += c / mu(e.tgt);
      oracle(e.src, e.src) -= c / mu(e.src);
      oracle(e.tgt, e.tgt) -= c / mu(e.tgt);
    }
    CHECK((lhs - oracle).cwiseAbs().maxCoeff() <= 1e-12);

    std::vector<double> ones(g.oriented().size(), 1.0);
    Stars s1 = stars(g, ones);
    Eigen::MatrixXd unit = s1.star0.dense().inverse() * (-d0.transpose()) * s1.star1.dense() * d0;
    CHECK((unit - discrete_laplacian(g).dense()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Laplacian invariants and mass conservation", "[physlib][property]") {
  Rng rng(82);
  for (int trial = 0; trial < 50; ++trial) {
    SWGraph g = random_connected_graph(rng, uniform_index(rng, 2, 8));
    Eigen::MatrixXd l = discrete_laplacian(g).dense();
    const std::size_t n = g.vertex_count();
    CHECK((l - laplacian_oracle(g)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((l * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::VectorXd mu(n);
    for (std::size_t x = 0; x < n; ++x) mu(x) = vertex_weight(g, x);
    Eigen::MatrixXd m = mu.asDiagonal() * l;
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd u0 = random_vector(rng, n);
    Eigen::MatrixXd traj = heat_evolve(g, u0, 4);
    for (Eigen::Index t = 0; t < traj.rows(); ++t)
      CHECK(std::abs(traj.row(t).dot(mu) - u0.dot(mu)) <= 1e-10);
  }
}
