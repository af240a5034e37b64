#pragma once

#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "diagcalc/compose.hpp"
#include "diagcalc/diagram.hpp"
#include "diagcalc/equiv.hpp"
#include "diagcalc/morphism.hpp"

namespace diagcalc {

struct DirectedEdge {
  std::size_t src = 0;
  std::size_t tgt = 0;
  std::size_t inv = 0;
  double weight = 1.0;
};

// Symmetric weighted graph: directed edges with a fixed-point-free, weight-preserving involution.
class SWGraph {
 public:
  SWGraph(std::size_t n, std::vector<DirectedEdge> edges, std::vector<std::string> names = {});
  // Each undirected edge {u, v, w} becomes the pair u->v, v->u.
  static SWGraph from_undirected(std::size_t n,
                                 const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                                 std::vector<std::string> names = {});

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  // One representative per {e, i(e)}: the smaller (s, t) pair, ties by edge id.
  const std::vector<std::size_t>& oriented() const { return oriented_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::size_t n_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::size_t> oriented_;
  std::vector<std::string> names_;
};

SWGraph path_graph(std::size_t n);
SWGraph cycle_graph(std::size_t n);
SWGraph complete_graph(std::size_t n);

double vertex_weight(const SWGraph& g, std::size_t x);
LinMap discrete_laplacian(const SWGraph& g);
LinMap incidence_d0(const SWGraph& g);
// Vertex-to-edge averaging over oriented edges.
LinMap edge_average(const SWGraph& g);

struct Stars {
  LinMap star0;
  LinMap star1;
};
Stars stars(const SWGraph& g, std::span<const double> k);
Stars stars(const SWGraph& g, double k = 1.0);

// Rows are time slices 0..steps.
Eigen::MatrixXd heat_evolve(const SWGraph& g, const Eigen::VectorXd& u0, std::size_t steps);

struct BoundaryOps {
  std::vector<std::size_t> interior;  // sorted Omega
  std::vector<std::size_t> closure;
  std::vector<std::size_t> boundary;
  LinMap laplacian;    // R^closure -> R^Omega
  LinMap restriction;  // R^closure -> R^boundary
};
BoundaryOps boundary_ops(const SWGraph& g, std::span<const std::size_t> omega);

// Spaces used by the time-dependent models. Index of (n, x) is n * size + x.
LinSpace vertex_history(const SWGraph& g, std::size_t T);  // slices 0..T
LinSpace vertex_rates(const SWGraph& g, std::size_t T);    // slices 0..T-1
LinSpace edge_history(const SWGraph& g, std::size_t T);    // oriented edges, slices 0..T-1
LinSpace flux_space(const SWGraph& g, std::size_t T);
LinSpace density_rates(const SWGraph& g, std::size_t T);
LinMap forward_difference(const SWGraph& g, std::size_t T);
// Applies m on slices 0..T-1 of a space with `in_slices` slices.
SparseMatrix slice_blocks(const SparseMatrix& m, std::size_t T, std::size_t in_slices);

Diagram model_heat(const SWGraph& g, std::size_t T, double k = 1.0);
Pinning heat_initial_pin(const SWGraph& g, const Eigen::VectorXd& u0);
// Dirichlet problem: cospan (Laplacian on the closure, zero) projecting to boundary values.
DiagramMorphism model_dirichlet(const SWGraph& g, std::span<const std::size_t> omega);
Lift dirichlet_boundary(const SWGraph& g, std::span<const std::size_t> omega,
                        const Eigen::VectorXd& boundary_values);

OpenDiagram model_diffusion(const SWGraph& g, double k, std::size_t T);
OpenDiagram model_fick(const SWGraph& g, double k, std::size_t T);
OpenDiagram model_conservation(const SWGraph& g, std::size_t T);
OpenDiagram model_advection(const SWGraph& g, std::span<const double> v, std::size_t T);
OpenDiagram model_superposition(const SWGraph& g, std::size_t T);
OpenDiagram model_conservation_with_source(const SWGraph& g, std::size_t T);
OpenDiagram model_reaction(const SWGraph& g, double beta, std::size_t T);

UWD transport_uwd(const SWGraph& g, std::size_t T);
UWD advection_diffusion_flux_uwd(const SWGraph& g, std::size_t T);
UWD open_transport_uwd(const SWGraph& g, std::size_t T);
UWD transformation_uwd(const SWGraph& g, std::size_t T);

// Strict morphism from the diffusion diagram to the heat diagram with k * Laplacian.
DiagramMorphism model_diffusion_to_heat(const SWGraph& g, double k, std::size_t T);

std::shared_ptr<const OperatorSignature> maxwell_signature();
Diagram model_maxwell_house();
// Potentials -> fields for static Maxwell-Faraday.
DiagramMorphism model_static_maxwell_faraday();
// Potentials diagram with an extra zero object through which phi also reaches Omega^2.
Diagram model_potentials_with_zero();
// Triangle (iota then d, plus L) mapped onto the single arrow L; with_rule adds L -> iota d.
DiagramMorphism model_lie_derivative(bool with_rule);

}  // namespace diagcalc
