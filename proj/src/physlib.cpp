#include "diagcalc/physlib.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "diagcalc/error.hpp"

namespace diagcalc {

SWGraph::SWGraph(std::size_t n, std::vector<DirectedEdge> edges, std::vector<std::string> names)
    : n_(n), edges_(std::move(edges)), names_(std::move(names)) {
  if (names_.empty())
    for (std::size_t i = 0; i < n_; ++i) names_.push_back(std::to_string(i));
  if (names_.size() != n_) throw ValidationError("graph vertex names do not match the vertex count");
  std::vector<bool> has_out(n_, false);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    const std::string id = "edge " + std::to_string(e);
    if (ed.src >= n_ || ed.tgt >= n_) throw ValidationError(id + " has an endpoint outside the graph");
    if (ed.inv >= edges_.size()) throw ValidationError(id + " has an involution outside the graph");
    const auto& iv = edges_[ed.inv];
    if (ed.inv == e) throw ValidationError(id + " is a fixed point of the involution");
    if (iv.inv != e) throw ValidationError(id + ": involution is not an involution");
    if (iv.src != ed.tgt || iv.tgt != ed.src)
      throw ValidationError(id + ": involution does not reverse the edge");
    if (!(ed.weight > 0.0) || !std::isfinite(ed.weight))
      throw ValidationError(id + " has a nonpositive weight");
    if (iv.weight != ed.weight) throw ValidationError(id + ": weight is not symmetric");
    has_out[ed.src] = true;
  }
  for (std::size_t x = 0; x < n_; ++x)
    if (!has_out[x]) throw ValidationError("vertex " + names_[x] + " is isolated");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    std::size_t i = edges_[e].inv;
    auto key = [&](std::size_t k) { return std::make_tuple(edges_[k].src, edges_[k].tgt, k); };
    if (key(e) < key(i)) oriented_.push_back(e);
  }
}

SWGraph SWGraph::from_undirected(std::size_t n,
                                 const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                                 std::vector<std::string> names) {
  std::vector<DirectedEdge> out;
  for (const auto& [u, v, w] : edges) {
    std::size_t e = out.size();
    out.push_back({u, v, e + 1, w});
    out.push_back({v, u, e, w});
  }
  return SWGraph(n, std::move(out), std::move(names));
}

SWGraph path_graph(std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> es;
  for (std::size_t i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1, 1.0);
  return SWGraph::from_undirected(n, es);
}

SWGraph cycle_graph(std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> es;
  for (std::size_t i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n, 1.0);
  return SWGraph::from_undirected(n, es);
}

SWGraph complete_graph(std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> es;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) es.emplace_back(i, j, 1.0);
  return SWGraph::from_undirected(n, es);
}

double vertex_weight(const SWGraph& g, std::size_t x) {
  if (x >= g.vertex_count()) throw ValidationError("unknown vertex " + std::to_string(x));
  double w = 0.0;
  for (const auto& e : g.edges())
    if (e.src == x) w += e.weight;
  return w;
}

namespace {

LinSpace vertices_space(const SWGraph& g) {
  return LinSpace{g.vertex_count(), "R^V", g.names()};
}

LinSpace oriented_space(const SWGraph& g) {
  std::vector<std::string> basis;
  for (std::size_t e : g.oriented())
    basis.push_back(g.names()[g.edges()[e].src] + "->" + g.names()[g.edges()[e].tgt]);
  return LinSpace{g.oriented().size(), "R^E+", basis};
}

SparseMatrix diagonal(const std::vector<double>& d) {
  SparseMatrix m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), d[i]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::vector<double> vertex_weights(const SWGraph& g) {
  std::vector<double> w(g.vertex_count(), 0.0);
  for (const auto& e : g.edges()) w[e.src] += e.weight;
  return w;
}

}  // namespace

LinMap discrete_laplacian(const SWGraph& g) {
  auto mu = vertex_weights(g);
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& e : g.edges())
    t.emplace_back(static_cast<int>(e.src), static_cast<int>(e.tgt), e.weight / mu[e.src]);
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    t.emplace_back(static_cast<int>(x), static_cast<int>(x), -1.0);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  LinSpace v = vertices_space(g);
  return LinMap::from_sparse(v, v, m);
}

LinMap incidence_d0(const SWGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t r = 0; r < g.oriented().size(); ++r) {
    const auto& e = g.edges()[g.oriented()[r]];
    t.emplace_back(static_cast<int>(r), static_cast<int>(e.tgt), 1.0);
    t.emplace_back(static_cast<int>(r), static_cast<int>(e.src), -1.0);
  }
  SparseMatrix m(static_cast<Eigen::Index>(g.oriented().size()),
                 static_cast<Eigen::Index>(g.vertex_count()));
  m.setFromTriplets(t.begin(), t.end());
  return LinMap::from_sparse(vertices_space(g), oriented_space(g), m);
}

LinMap edge_average(const SWGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t r = 0; r < g.oriented().size(); ++r) {
    const auto& e = g.edges()[g.oriented()[r]];
    t.emplace_back(static_cast<int>(r), static_cast<int>(e.tgt), 0.5);
    t.emplace_back(static_cast<int>(r), static_cast<int>(e.src), 0.5);
  }
  SparseMatrix m(static_cast<Eigen::Index>(g.oriented().size()),
                 static_cast<Eigen::Index>(g.vertex_count()));
  m.setFromTriplets(t.begin(), t.end());
  return LinMap::from_sparse(vertices_space(g), oriented_space(g), m);
}

Stars stars(const SWGraph& g, std::span<const double> k) {
  if (k.size() != g.oriented().size())
    throw ValidationError("need one conductivity per oriented edge");
  std::vector<double> e_w;
  for (std::size_t r = 0; r < k.size(); ++r) {
    if (!(k[r] > 0.0)) throw ValidationError("conductivity must be positive");
    e_w.push_back(k[r] * g.edges()[g.oriented()[r]].weight);
  }
  LinSpace v = vertices_space(g), e = oriented_space(g);
  return Stars{LinMap::from_sparse(v, v, diagonal(vertex_weights(g))),
               LinMap::from_sparse(e, e, diagonal(e_w))};
}

Stars stars(const SWGraph& g, double k) {
  std::vector<double> ks(g.oriented().size(), k);
  return stars(g, ks);
}

Eigen::MatrixXd heat_evolve(const SWGraph& g, const Eigen::VectorXd& u0, std::size_t steps) {
  if (static_cast<std::size_t>(u0.size()) != g.vertex_count())
    throw ValidationError("initial data has the wrong length");
  SparseMatrix lap = discrete_laplacian(g).matrix;
  Eigen::MatrixXd traj(static_cast<Eigen::Index>(steps + 1), u0.size());
  Eigen::VectorXd u = u0;
  traj.row(0) = u.transpose();
  for (std::size_t n = 1; n <= steps; ++n) {
    u = u + lap * u;
    traj.row(static_cast<Eigen::Index>(n)) = u.transpose();
  }
  return traj;
}

BoundaryOps boundary_ops(const SWGraph& g, std::span<const std::size_t> omega) {
  if (omega.empty()) throw ValidationError("Omega must be nonempty");
  std::set<std::size_t> in(omega.begin(), omega.end());
  for (std::size_t x : in)
    if (x >= g.vertex_count()) throw ValidationError("Omega contains an unknown vertex");
  std::set<std::size_t> cl = in;
  for (const auto& e : g.edges())
    if (in.count(e.src)) cl.insert(e.tgt);
  BoundaryOps ops;
  ops.interior.assign(in.begin(), in.end());
  ops.closure.assign(cl.begin(), cl.end());
  for (std::size_t x : ops.closure)
    if (!in.count(x)) ops.boundary.push_back(x);
  auto names = [&](const std::vector<std::size_t>& xs) {
    std::vector<std::string> out;
    for (std::size_t x : xs) out.push_back(g.names()[x]);
    return out;
  };
  LinSpace scl{ops.closure.size(), "R^closure", names(ops.closure)};
  LinSpace sin{ops.interior.size(), "R^Omega", names(ops.interior)};
  LinSpace sbd{ops.boundary.size(), "R^boundary", names(ops.boundary)};
  Eigen::MatrixXd lap = discrete_laplacian(g).dense();
  Eigen::MatrixXd rest(ops.interior.size(), ops.closure.size());
  for (std::size_t r = 0; r < ops.interior.size(); ++r)
    for (std::size_t c = 0; c < ops.closure.size(); ++c)
      rest(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          lap(static_cast<Eigen::Index>(ops.interior[r]), static_cast<Eigen::Index>(ops.closure[c]));
  ops.laplacian = LinMap::from_dense(scl, sin, rest);
  std::vector<std::size_t> pick;
  for (std::size_t x : ops.boundary)
    pick.push_back(static_cast<std::size_t>(
        std::find(ops.closure.begin(), ops.closure.end(), x) - ops.closure.begin()));
  ops.restriction = LinMap::from_sparse(scl, sbd, selection_matrix(ops.closure.size(), pick));
  return ops;
}

namespace {

std::vector<std::string> history_basis(const std::vector<std::string>& names, std::size_t slices) {
  std::vector<std::string> out;
  for (std::size_t n = 0; n < slices; ++n)
    for (const auto& x : names) out.push_back(std::to_string(n) + "," + x);
  return out;
}

}  // namespace

LinSpace vertex_history(const SWGraph& g, std::size_t T) {
  return LinSpace{(T + 1) * g.vertex_count(), "Omega^0_t", history_basis(g.names(), T + 1)};
}

LinSpace vertex_rates(const SWGraph& g, std::size_t T) {
  return LinSpace{T * g.vertex_count(), "dOmega^0_t", history_basis(g.names(), T)};
}

LinSpace edge_history(const SWGraph& g, std::size_t T) {
  return LinSpace{T * g.oriented().size(), "Omega^1_t", history_basis(oriented_space(g).basis, T)};
}

LinSpace flux_space(const SWGraph& g, std::size_t T) {
  return LinSpace{T * g.oriented().size(), "Omega~^2_t", history_basis(oriented_space(g).basis, T)};
}

LinSpace density_rates(const SWGraph& g, std::size_t T) {
  return LinSpace{T * g.vertex_count(), "Omega~^3_t", history_basis(g.names(), T)};
}

SparseMatrix slice_blocks(const SparseMatrix& m, std::size_t T, std::size_t in_slices) {
  if (in_slices < T) throw ValidationError("slice_blocks: not enough input slices");
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t n = 0; n < T; ++n)
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it)
        t.emplace_back(static_cast<int>(n * m.rows() + it.row()),
                       static_cast<int>(n * m.cols() + it.col()), it.value());
  SparseMatrix out(static_cast<Eigen::Index>(T * m.rows()),
                   static_cast<Eigen::Index>(in_slices * m.cols()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

LinMap forward_difference(const SWGraph& g, std::size_t T) {
  const std::size_t v = g.vertex_count();
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t n = 0; n < T; ++n)
    for (std::size_t x = 0; x < v; ++x) {
      t.emplace_back(static_cast<int>(n * v + x), static_cast<int>(n * v + x), -1.0);
      t.emplace_back(static_cast<int>(n * v + x), static_cast<int>((n + 1) * v + x), 1.0);
    }
  SparseMatrix m(static_cast<Eigen::Index>(T * v), static_cast<Eigen::Index>((T + 1) * v));
  m.setFromTriplets(t.begin(), t.end());
  return LinMap::from_sparse(vertex_history(g, T), vertex_rates(g, T), m);
}

namespace {

void require_steps(std::size_t T) {
  if (T == 0) throw ValidationError("time-dependent models need T >= 1");
}

LinMap sliced(const SparseMatrix& m, std::size_t T, std::size_t in_slices, const LinSpace& dom,
              const LinSpace& cod) {
  return LinMap::from_sparse(dom, cod, slice_blocks(m, T, in_slices));
}

}  // namespace

Diagram model_heat(const SWGraph& g, std::size_t T, double k) {
  require_steps(T);
  DiagramBuilder b(Semantics::linear());
  LinSpace u = vertex_history(g, T), du = vertex_rates(g, T);
  b.object("u", u);
  b.object("u_dot", du);
  b.edge("dn", "u", "u_dot", forward_difference(g, T), "∂n");
  SparseMatrix lap = k * discrete_laplacian(g).matrix;
  b.edge("Delta", "u", "u_dot", sliced(lap, T, T + 1, u, du), k == 1.0 ? "Δ" : "kΔ");
  return b.build();
}

Pinning heat_initial_pin(const SWGraph& g, const Eigen::VectorXd& u0) {
  Pin p;
  p.vertex = 0;
  p.values = u0;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) p.indices.push_back(x);
  return {p};
}

DiagramMorphism model_dirichlet(const SWGraph& g, std::span<const std::size_t> omega) {
  BoundaryOps ops = boundary_ops(g, omega);
  DiagramBuilder b(Semantics::linear());
  b.object("u", ops.laplacian.dom);
  b.object("lap_u", ops.laplacian.cod);
  b.object("zero", real_space(0, "0"));
  b.edge("Delta_Omega", "u", "lap_u", ops.laplacian, "Δ|Ω");
  b.edge("zero_map", "zero", "lap_u", LinMap::zero(real_space(0, "0"), ops.laplacian.cod), "0");
  Diagram dom = b.build();

  DiagramBuilder c(Semantics::linear());
  c.object("u_b", ops.restriction.cod);
  Diagram cod = c.build();

  FinFunctor r{cod.shape(), dom.shape(), {dom.graph().vertex("u")}, {}};
  return make_morphism(std::move(dom), std::move(cod), std::move(r), {ops.restriction});
}

Lift dirichlet_boundary(const SWGraph& g, std::span<const std::size_t> omega,
                        const Eigen::VectorXd& boundary_values) {
  BoundaryOps ops = boundary_ops(g, omega);
  if (static_cast<std::size_t>(boundary_values.size()) != ops.boundary.size())
    throw ValidationError("expected " + std::to_string(ops.boundary.size()) + " boundary values");
  return Lift{{boundary_values}};
}

namespace {

struct DiffusionOps {
  LinSpace C, Cdot, dC, phi, dphi;
  LinMap dt, d, kstar, div, star_inv;
};

DiffusionOps diffusion_ops(const SWGraph& g, double k, std::size_t T) {
  require_steps(T);
  if (!(k > 0.0)) throw ValidationError("diffusivity must be positive");
  DiffusionOps o;
  o.C = vertex_history(g, T);
  o.Cdot = vertex_rates(g, T);
  o.dC = edge_history(g, T);
  o.phi = flux_space(g, T);
  o.dphi = density_rates(g, T);
  Stars st = stars(g, k);
  SparseMatrix d0 = incidence_d0(g).matrix;
  SparseMatrix star0_inv = st.star0.matrix;
  for (int i = 0; i < star0_inv.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(star0_inv, i); it; ++it) it.valueRef() = 1.0 / it.value();
  o.dt = forward_difference(g, T);
  o.d = sliced(d0, T, T + 1, o.C, o.dC);
  o.kstar = sliced(st.star1.matrix, T, T, o.dC, o.phi);
  SparseMatrix div = -SparseMatrix(d0.transpose());
  o.div = sliced(div, T, T, o.phi, o.dphi);
  o.star_inv = sliced(star0_inv, T, T, o.dphi, o.Cdot);
  return o;
}

}  // namespace

OpenDiagram model_diffusion(const SWGraph& g, double k, std::size_t T) {
  DiffusionOps o = diffusion_ops(g, k, T);
  DiagramBuilder b(Semantics::linear());
  b.object("C", o.C);
  b.object("C_dot", o.Cdot);
  b.object("dC", o.dC);
  b.object("phi", o.phi);
  b.object("dphi", o.dphi);
  b.edge("dt", "C", "C_dot", o.dt, "∂t");
  b.edge("d", "C", "dC", o.d, "d");
  b.edge("kstar", "dC", "phi", o.kstar, "k⋆");
  b.edge("d_phi", "phi", "dphi", o.div, "d");
  b.edge("star_inv", "dphi", "C_dot", o.star_inv, "⋆⁻¹");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}});
}

OpenDiagram model_fick(const SWGraph& g, double k, std::size_t T) {
  DiffusionOps o = diffusion_ops(g, k, T);
  DiagramBuilder b(Semantics::linear());
  b.object("C", o.C);
  b.object("dC", o.dC);
  b.object("phi", o.phi);
  b.edge("d", "C", "dC", o.d, "d");
  b.edge("kstar", "dC", "phi", o.kstar, "k⋆");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}, {"phi"}});
}

OpenDiagram model_conservation(const SWGraph& g, std::size_t T) {
  DiffusionOps o = diffusion_ops(g, 1.0, T);
  DiagramBuilder b(Semantics::linear());
  b.object("C", o.C);
  b.object("C_dot", o.Cdot);
  b.object("phi", o.phi);
  b.object("dphi", o.dphi);
  b.edge("dt", "C", "C_dot", o.dt, "∂t");
  b.edge("d_phi", "phi", "dphi", o.div, "d");
  b.edge("star_inv", "dphi", "C_dot", o.star_inv, "⋆⁻¹");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}, {"phi"}});
}

OpenDiagram model_advection(const SWGraph& g, std::span<const double> v, std::size_t T) {
  require_steps(T);
  if (v.size() != g.oriented().size()) throw ValidationError("need one velocity per oriented edge");
  LinSpace C = vertex_history(g, T), Ct = density_rates(g, T), phi = flux_space(g, T);
  Stars st = stars(g, 1.0);
  SparseMatrix star0_inv = st.star0.matrix;
  for (int i = 0; i < star0_inv.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(star0_inv, i); it; ++it) it.valueRef() = 1.0 / it.value();
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t r = 0; r < v.size(); ++r) t.emplace_back(static_cast<int>(r), static_cast<int>(r), -v[r]);
  SparseMatrix vel(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  vel.setFromTriplets(t.begin(), t.end());
  SparseMatrix contract = vel * edge_average(g).matrix * star0_inv;
  DiagramBuilder b(Semantics::linear());
  b.object("C", C);
  b.object("C_tilde", Ct);
  b.object("phi", phi);
  b.edge("star", "C", "C_tilde", sliced(st.star0.matrix, T, T + 1, C, Ct), "⋆");
  b.edge("neg_iota_v", "C_tilde", "phi", sliced(contract, T, T, Ct, phi), "-ι_v");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}, {"phi"}});
}

OpenDiagram model_superposition(const SWGraph& g, std::size_t T) {
  require_steps(T);
  LinSpace phi = flux_space(g, T);
  DiagramBuilder b(Semantics::linear());
  b.object("phi1", phi);
  b.object("phi2", phi);
  b.object("phi", phi);
  b.product("phi12", {"phi1", "phi2"}, {"pi1", "pi2"});
  b.sum("plus", "phi12", "phi");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"phi1"}, {"phi2"}, {"phi"}});
}

OpenDiagram model_conservation_with_source(const SWGraph& g, std::size_t T) {
  DiffusionOps o = diffusion_ops(g, 1.0, T);
  DiagramBuilder b(Semantics::linear());
  b.object("C", o.C);
  b.object("C_dot", o.Cdot);
  b.object("div", o.Cdot);
  b.object("S", o.Cdot);
  b.object("phi", o.phi);
  b.object("dphi", o.dphi);
  b.product("rates", {"div", "S"}, {"pi1", "pi2"});
  b.sum("plus", "rates", "C_dot");
  b.edge("dt", "C", "C_dot", o.dt, "∂t");
  b.edge("d_phi", "phi", "dphi", o.div, "d");
  b.edge("star_inv", "dphi", "div", o.star_inv, "⋆⁻¹");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}, {"phi"}, {"S"}});
}

OpenDiagram model_reaction(const SWGraph& g, double beta, std::size_t T) {
  require_steps(T);
  LinSpace C = vertex_history(g, T), S = vertex_rates(g, T);
  SparseMatrix id(static_cast<Eigen::Index>(g.vertex_count()), static_cast<Eigen::Index>(g.vertex_count()));
  id.setIdentity();
  DiagramBuilder b(Semantics::linear());
  b.object("C", C);
  b.object("S", S);
  b.edge("beta", "C", "S", sliced(beta * id, T, T + 1, C, S), "β");
  return make_open(b.build(), std::vector<std::vector<std::string>>{{"C"}, {"S"}});
}

UWD transport_uwd(const SWGraph& g, std::size_t T) {
  UwdSpec s;
  s.junctions = {{"C", {vertex_history(g, T)}}, {"phi", {flux_space(g, T)}}};
  s.boxes = {{"flux", {"C", "phi"}}, {"conservation", {"C", "phi"}}};
  s.outer = {"C"};
  return make_uwd(s);
}

UWD advection_diffusion_flux_uwd(const SWGraph& g, std::size_t T) {
  UwdSpec s;
  LinSpace phi = flux_space(g, T);
  s.junctions = {{"C", {vertex_history(g, T)}}, {"phi1", {phi}}, {"phi2", {phi}}, {"phi", {phi}}};
  s.boxes = {{"diffusion", {"C", "phi1"}},
             {"advection", {"C", "phi2"}},
             {"superposition", {"phi1", "phi2", "phi"}}};
  s.outer = {"C", "phi"};
  return make_uwd(s);
}

UWD open_transport_uwd(const SWGraph& g, std::size_t T) {
  UwdSpec s;
  s.junctions = {{"C", {vertex_history(g, T)}}, {"phi", {flux_space(g, T)}}, {"S", {vertex_rates(g, T)}}};
  s.boxes = {{"flux", {"C", "phi"}}, {"conservation", {"C", "phi", "S"}}};
  s.outer = {"C", "S"};
  return make_uwd(s);
}

UWD transformation_uwd(const SWGraph& g, std::size_t T) {
  UwdSpec s;
  s.junctions = {{"C", {vertex_history(g, T)}}, {"S", {vertex_rates(g, T)}}};
  s.boxes = {{"transport", {"C", "S"}}, {"reaction", {"C", "S"}}};
  s.outer = {"C"};
  return make_uwd(s);
}

DiagramMorphism model_diffusion_to_heat(const SWGraph& g, double k, std::size_t T) {
  Diagram dom = model_diffusion(g, k, T).apex;
  Diagram cod = model_heat(g, T, k);
  const Graph& jg = dom.graph();
  FinFunctor r{cod.shape(), dom.shape(), {jg.vertex("C"), jg.vertex("C_dot")}, {}};
  r.hom.push_back(Path{jg.vertex("C"), {jg.edge_id("dt")}});
  r.hom.push_back(Path{jg.vertex("C"), {jg.edge_id("d"), jg.edge_id("kstar"), jg.edge_id("d_phi"),
                                        jg.edge_id("star_inv")}});
  // Same matrices on both sides; only the space labels differ.
  LinMap c = LinMap::identity(as_space(cod.object(0)));
  LinMap cdot = LinMap::identity(as_space(cod.object(1)));
  c.dom = as_space(dom.object(jg.vertex("C")));
  cdot.dom = as_space(dom.object(jg.vertex("C_dot")));
  std::vector<Morphism> comps{c, cdot};
  return make_morphism(std::move(dom), std::move(cod), std::move(r), std::move(comps));
}

std::shared_ptr<const OperatorSignature> maxwell_signature() {
  auto sig = std::make_shared<OperatorSignature>();
  for (const char* s : {"Omega0_t", "Omega1_t", "Omega2_t", "Omega3_t", "Omega~1_t", "Omega~2_t",
                        "Omega~3_t"})
    sig->add_sort(s);
  sig->add_op("d", "Omega0_t", "Omega1_t");
  sig->add_op("d", "Omega1_t", "Omega2_t");
  sig->add_op("d", "Omega2_t", "Omega3_t");
  sig->add_op("d", "Omega~1_t", "Omega~2_t");
  sig->add_op("d", "Omega~2_t", "Omega~3_t");
  for (const auto& s : std::vector<Sort>(sig->sorts())) sig->add_op("dt", s, s);
  sig->add_op("eps*", "Omega1_t", "Omega~2_t");
  sig->add_op("mu^-1*", "Omega2_t", "Omega~1_t");
  sig->add_op("sigma*", "Omega1_t", "Omega~2_t");
  sig->add_product("Omega1_t^2", {"Omega1_t", "Omega1_t"});
  sig->add_product("Omega~2_t^2", {"Omega~2_t", "Omega~2_t"});
  sig->add_zero_rule({"d", "d"});
  sig->add_rule({"dt", "d"}, {"d", "dt"});
  return sig;
}

Diagram model_maxwell_house() {
  DiagramBuilder b(Semantics::symbolic(maxwell_signature()));
  b.object("phi", Sort("Omega0_t"));
  b.object("-dphi", Sort("Omega1_t"));
  b.object("A", Sort("Omega1_t"));
  b.object("-A_dot", Sort("Omega1_t"));
  b.object("E", Sort("Omega1_t"));
  b.object("B", Sort("Omega2_t"));
  b.object("B_dot", Sort("Omega2_t"));
  b.object("Omega3", Sort("Omega3_t"));
  b.object("rho", Sort("Omega~3_t"));
  b.object("J", Sort("Omega~2_t"));
  b.object("-D_dot", Sort("Omega~2_t"));
  b.object("D", Sort("Omega~2_t"));
  b.object("dH", Sort("Omega~2_t"));
  b.object("H", Sort("Omega~1_t"));
  b.product("sum1", {"-dphi", "-A_dot"}, {"sum1.pi1", "sum1.pi2"});
  b.product("sum2", {"dH", "-D_dot"}, {"sum2.pi1", "sum2.pi2"});
  b.sum("sum1.plus", "sum1", "E");
  b.word_edge("phi.-d", "phi", "-dphi", {"-d"}, "-d");
  b.word_edge("A.-dt", "A", "-A_dot", {"-dt"}, "-∂t");
  b.word_edge("E.-d", "E", "B_dot", {"-d"}, "-d");
  b.word_edge("A.d", "A", "B", {"d"}, "d");
  b.word_edge("B.dt", "B", "B_dot", {"dt"}, "∂t");
  b.word_edge("E.eps", "E", "D", {"eps*"}, "ε⋆");
  b.word_edge("B.mu", "B", "H", {"mu^-1*"}, "μ⁻¹⋆");
  b.word_edge("B.d", "B", "Omega3", {"d"}, "d");
  b.word_edge("D.-dt", "D", "-D_dot", {"-dt"}, "-∂t");
  b.word_edge("H.d", "H", "dH", {"d"}, "d");
  b.word_edge("D.d", "D", "rho", {"d"}, "d");
  b.sum("sum2.plus", "sum2", "J");
  b.word_edge("E.sigma", "E", "J", {"sigma*"}, "σ⋆");
  return b.build();
}

namespace {

std::shared_ptr<const OperatorSignature> static_signature() {
  auto sig = std::make_shared<OperatorSignature>();
  for (const char* s : {"Omega0", "Omega1", "Omega2", "Omega3", "Zero"}) sig->add_sort(s);
  sig->add_op("d", "Omega0", "Omega1");
  sig->add_op("d", "Omega1", "Omega2");
  sig->add_op("d", "Omega2", "Omega3");
  sig->add_zero_rule({"d", "d"});
  return sig;
}

DiagramBuilder potentials_builder(const Semantics& sem) {
  DiagramBuilder b(sem);
  b.object("phi", Sort("Omega0"));
  b.object("E", Sort("Omega1"));
  b.object("dE", Sort("Omega2"));
  b.object("A", Sort("Omega1"));
  b.object("B", Sort("Omega2"));
  b.object("dB", Sort("Omega3"));
  b.word_edge("E_from_phi", "phi", "E", {"-d"}, "-d");
  b.word_edge("curl_E", "E", "dE", {"-d"}, "-d");
  b.word_edge("B_from_A", "A", "B", {"d"}, "d");
  b.word_edge("div_B", "B", "dB", {"d"}, "d");
  return b;
}

}  // namespace

DiagramMorphism model_static_maxwell_faraday() {
  Semantics sem = Semantics::symbolic(static_signature());
  Diagram dom = potentials_builder(sem).build();

  DiagramBuilder c(sem);
  c.object("E", Sort("Omega1"));
  c.object("dE", Sort("Omega2"));
  c.object("zero_E", Sort("Zero"));
  c.object("B", Sort("Omega2"));
  c.object("dB", Sort("Omega3"));
  c.object("zero_B", Sort("Zero"));
  c.word_edge("curl_E", "E", "dE", {"-d"}, "-d");
  c.word_edge("faraday", "zero_E", "dE", {"0"}, "0");
  c.word_edge("div_B", "B", "dB", {"d"}, "d");
  c.word_edge("gauss", "zero_B", "dB", {"0"}, "0");
  Diagram cod = c.build();

  const Graph& jg = dom.graph();
  FinFunctor r{cod.shape(), dom.shape(), {}, {}};
  for (const char* v : {"E", "dE", "phi", "B", "dB", "A"}) r.ob.push_back(jg.vertex(v));
  r.hom = {Path{jg.vertex("E"), {jg.edge_id("curl_E")}},
           Path{jg.vertex("phi"), {jg.edge_id("E_from_phi"), jg.edge_id("curl_E")}},
           Path{jg.vertex("B"), {jg.edge_id("div_B")}},
           Path{jg.vertex("A"), {jg.edge_id("B_from_A"), jg.edge_id("div_B")}}};
  std::vector<Morphism> comps{SymMorphism::identity("Omega1"),
                              SymMorphism::identity("Omega2"),
                              SymMorphism::zero_map("Omega0", "Zero"),
                              SymMorphism::identity("Omega2"),
                              SymMorphism::identity("Omega3"),
                              SymMorphism::zero_map("Omega1", "Zero")};
  return make_morphism(std::move(dom), std::move(cod), std::move(r), std::move(comps));
}

Diagram model_potentials_with_zero() {
  DiagramBuilder b = potentials_builder(Semantics::symbolic(static_signature()));
  b.object("zero", Sort("Zero"));
  b.word_edge("phi_to_zero", "phi", "zero", {"0"}, "0");
  b.word_edge("zero_to_dE", "zero", "dE", {"0"}, "0");
  return b.build();
}

DiagramMorphism model_lie_derivative(bool with_rule) {
  auto sig = std::make_shared<OperatorSignature>();
  sig->add_sort("Omega~3");
  sig->add_sort("Omega~2");
  sig->add_op("L_v", "Omega~3", "Omega~3");
  sig->add_op("iota_v", "Omega~3", "Omega~2");
  sig->add_op("d", "Omega~2", "Omega~3");
  if (with_rule) sig->add_rule({"L_v"}, {"iota_v", "d"});
  Semantics sem = Semantics::symbolic(sig);

  DiagramBuilder t(sem);
  t.object("a", Sort("Omega~3"));
  t.object("m", Sort("Omega~2"));
  t.object("b", Sort("Omega~3"));
  t.word_edge("L", "a", "b", {"L_v"}, "𝓛_v");
  t.word_edge("iota", "a", "m", {"iota_v"}, "ι_v");
  t.word_edge("d", "m", "b", {"d"}, "d");
  Diagram dom = t.build();

  DiagramBuilder s(sem);
  s.object("a", Sort("Omega~3"));
  s.object("b", Sort("Omega~3"));
  s.word_edge("L", "a", "b", {"L_v"}, "𝓛_v");
  Diagram cod = s.build();

  FinFunctor r{cod.shape(), dom.shape(), {0, 2}, {Path{0, {0}}}};
  std::vector<Morphism> comps{SymMorphism::identity("Omega~3"), SymMorphism::identity("Omega~3")};
  return make_morphism(std::move(dom), std::move(cod), std::move(r), std::move(comps));
}

}  // namespace diagcalc
