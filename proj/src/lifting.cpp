#include "diagcalc/lifting.hpp"

#include <Eigen/QR>
#include <Eigen/SparseQR>

#include "diagcalc/error.hpp"

namespace diagcalc {

namespace {

void require_linear(const Diagram& d, const char* op) {
  if (!d.semantics().is_linear())
    throw TypeError(std::string(op) + " needs a diagram with linear semantics");
}

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& t, std::size_t row, std::size_t col, const SparseMatrix& m, double s = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      t.emplace_back(static_cast<int>(row + it.row()), static_cast<int>(col + it.col()),
                     s * it.value());
}

// Edge rows D(f) x_j - x_k = 0 in edge order.
std::size_t edge_rows(const Diagram& d, const std::vector<std::size_t>& offsets, Triplets& t) {
  std::size_t row = 0;
  for (EdgeId e = 0; e < d.graph().edge_count(); ++e) {
    const Edge& ed = d.graph().edge(e);
    const LinMap& f = as_linear(d.morphism(e));
    add_block(t, row, offsets[ed.src], f.matrix);
    for (std::size_t i = 0; i < f.cod.dim; ++i)
      t.emplace_back(static_cast<int>(row + i), static_cast<int>(offsets[ed.tgt] + i), -1.0);
    row += f.cod.dim;
  }
  return row;
}

std::vector<std::size_t> layout(const Diagram& d, std::size_t& total) {
  std::vector<std::size_t> offsets;
  total = 0;
  for (VertexId v = 0; v < d.graph().vertex_count(); ++v) {
    offsets.push_back(total);
    total += d.dim(v);
  }
  return offsets;
}

Lift split(const Diagram& d, const std::vector<std::size_t>& offsets, const Eigen::VectorXd& x) {
  Lift l;
  for (VertexId v = 0; v < offsets.size(); ++v)
    l.elements.push_back(x.segment(static_cast<Eigen::Index>(offsets[v]),
                                   static_cast<Eigen::Index>(d.dim(v))));
  return l;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Lift zero_lift(const Diagram& d) {
  require_linear(d, "zero_lift");
  Lift l;
  for (VertexId v = 0; v < d.graph().vertex_count(); ++v)
    l.elements.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.dim(v))));
  return l;
}

bool LiftReport::ok() const {
  for (double r : residuals)
    if (!(r <= tol)) return false;
  return true;
}

std::optional<EdgeId> LiftReport::worst_edge() const {
  if (residuals.empty()) return std::nullopt;
  EdgeId w = 0;
  for (EdgeId e = 1; e < residuals.size(); ++e)
    if (residuals[e] > residuals[w]) w = e;
  return w;
}

LiftReport verify_lift(const Diagram& d, const Lift& l, double tol) {
  require_linear(d, "verify_lift");
  if (l.elements.size() != d.graph().vertex_count())
    throw ValidationError("lift has " + std::to_string(l.elements.size()) + " elements for " +
                          std::to_string(d.graph().vertex_count()) + " vertices");
  for (VertexId v = 0; v < l.elements.size(); ++v)
    if (static_cast<std::size_t>(l.elements[v].size()) != d.dim(v))
      throw ValidationError("lift element at '" + d.graph().vertex_name(v) + "' has length " +
                            std::to_string(l.elements[v].size()) + ", expected " +
                            std::to_string(d.dim(v)));
  LiftReport rep;
  rep.tol = tol;
  for (EdgeId e = 0; e < d.graph().edge_count(); ++e) {
    const Edge& ed = d.graph().edge(e);
    Eigen::VectorXd r = as_linear(d.morphism(e))(l.elements[ed.src]) - l.elements[ed.tgt];
    rep.residuals.push_back(max_abs(r));
  }
  return rep;
}

LinearSystem assemble_system(const Diagram& d, const Pinning& pins) {
  require_linear(d, "assemble_system");
  LinearSystem sys;
  sys.offsets = layout(d, sys.unknowns);
  Triplets t;
  std::size_t row = edge_rows(d, sys.offsets, t);
  std::vector<double> rhs(row, 0.0);
  for (const auto& p : pins) {
    if (p.vertex >= d.graph().vertex_count()) throw ValidationError("pin on an unknown vertex");
    const std::string& name = d.graph().vertex_name(p.vertex);
    std::vector<std::size_t> idx = p.indices;
    if (idx.empty())
      for (std::size_t i = 0; i < d.dim(p.vertex); ++i) idx.push_back(i);
    if (static_cast<std::size_t>(p.values.size()) != idx.size())
      throw ValidationError("pin at '" + name + "' has " + std::to_string(p.values.size()) +
                            " values for " + std::to_string(idx.size()) + " coordinates");
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= d.dim(p.vertex))
        throw ValidationError("pin at '" + name + "' uses coordinate " + std::to_string(idx[i]) +
                              " outside dimension " + std::to_string(d.dim(p.vertex)));
      t.emplace_back(static_cast<int>(row), static_cast<int>(sys.offsets[p.vertex] + idx[i]), 1.0);
      rhs.push_back(p.values[static_cast<Eigen::Index>(i)]);
      ++row;
    }
  }
  sys.a.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(sys.unknowns));
  sys.a.setFromTriplets(t.begin(), t.end());
  sys.a.makeCompressed();
  sys.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return sys;
}

namespace {

constexpr Eigen::Index kDenseLimit = 400;

SystemSolution dense_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double rank_tol) {
  Eigen::MatrixXd m(a);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  cod.setThreshold(rank_tol);
  SystemSolution s;
  s.rank = static_cast<std::size_t>(cod.rank());
  s.x = cod.solve(b);
  // One step of iterative refinement.
  s.x += cod.solve(b - m * s.x);
  return s;
}

}  // namespace

SystemSolution solve_system(const SparseMatrix& a, const Eigen::VectorXd& b, double rank_tol) {
  SystemSolution s;
  const Eigen::Index n = a.cols();
  if (n == 0) {
    s.x = Eigen::VectorXd::Zero(0);
    s.residual = max_abs(b);
    return s;
  }
  if (a.rows() == 0) {
    s.x = Eigen::VectorXd::Zero(n);
    return s;
  }
  if (n <= kDenseLimit) {
    s = dense_solve(a, b, rank_tol);
  } else {
    SparseMatrix ac = a;
    ac.makeCompressed();
    Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
    qr.setPivotThreshold(rank_tol);
    qr.compute(ac);
    if (qr.info() == Eigen::Success && qr.rank() == n) {
      s.rank = static_cast<std::size_t>(n);
      s.x = qr.solve(b);
      Eigen::VectorXd r = b - ac * s.x;
      s.x += qr.solve(r);
    } else {
      s = dense_solve(a, b, rank_tol);
    }
  }
  s.residual = max_abs(a * s.x - b);
  return s;
}

SolveOutcome classify(const SystemSolution& s, const LinearSystem& sys, double tol) {
  if (s.residual > tol) return Infeasible{s.residual};
  (void)sys;
  std::size_t nullity = static_cast<std::size_t>(s.x.size()) - s.rank;
  if (nullity == 0) return Unique{Lift{}, s.residual};
  return Underdetermined{Lift{}, nullity, s.residual};
}

namespace {

SolveOutcome finish(const Diagram& d, const LinearSystem& sys, double tol) {
  SystemSolution s = solve_system(sys.a, sys.b, kDefaultLinTol);
  SolveOutcome out = classify(s, sys, tol);
  if (auto* u = std::get_if<Unique>(&out)) u->lift = split(d, sys.offsets, s.x);
  if (auto* u = std::get_if<Underdetermined>(&out)) u->particular = split(d, sys.offsets, s.x);
  return out;
}

}  // namespace

SolveOutcome solve_lift(const Diagram& d, const Pinning& pins, double tol) {
  return finish(d, assemble_system(d, pins), tol);
}

SolveOutcome solve_bvp(const DiagramMorphism& m, const Lift& boundary, double tol) {
  require_linear(m.dom, "solve_bvp");
  auto check = verify_lift(m.cod, boundary, tol);
  if (!check.ok())
    throw ValidationError("boundary data is not a lift of the codomain diagram (edge '" +
                          m.cod.graph().edge(*check.worst_edge()).name + "')");
  LinearSystem sys = assemble_system(m.dom, {});
  Triplets t;
  for (int k = 0; k < sys.a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.a, k); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  std::size_t row = static_cast<std::size_t>(sys.a.rows());
  std::vector<double> rhs(sys.b.data(), sys.b.data() + sys.b.size());
  for (VertexId j = 0; j < m.cod.graph().vertex_count(); ++j) {
    const LinMap& rho = as_linear(m.components[j]);
    add_block(t, row, sys.offsets[m.shape_map.ob[j]], rho.matrix);
    for (Eigen::Index i = 0; i < boundary.elements[j].size(); ++i) rhs.push_back(boundary.elements[j][i]);
    row += rho.cod.dim;
  }
  sys.a.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(sys.unknowns));
  sys.a.setFromTriplets(t.begin(), t.end());
  sys.a.makeCompressed();
  sys.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return finish(m.dom, sys, tol);
}

Lift pushforward_lift(const DiagramMorphism& m, const Lift& l, double tol) {
  require_linear(m.dom, "pushforward_lift");
  auto check = verify_lift(m.dom, l, tol);
  if (!check.ok())
    throw ValidationError("lift fails verification at edge '" +
                          m.dom.graph().edge(*check.worst_edge()).name + "'");
  Lift out;
  for (VertexId j = 0; j < m.cod.graph().vertex_count(); ++j)
    out.elements.push_back(as_linear(m.components[j])(l.elements[m.shape_map.ob[j]]));
  // Naturality guarantees this; allow for rounding through longer composites.
  auto back = verify_lift(m.cod, out, tol * 1e3);
  if (!back.ok()) throw Error("pushforward produced a non-lift; the morphism is not natural");
  return out;
}

std::string outcome_name(const SolveOutcome& o) {
  if (std::holds_alternative<Unique>(o)) return "Unique";
  if (std::holds_alternative<Underdetermined>(o)) return "Underdetermined";
  return "Infeasible";
}

const Lift* outcome_lift(const SolveOutcome& o) {
  if (auto* u = std::get_if<Unique>(&o)) return &u->lift;
  if (auto* u = std::get_if<Underdetermined>(&o)) return &u->particular;
  return nullptr;
}

}  // namespace diagcalc
