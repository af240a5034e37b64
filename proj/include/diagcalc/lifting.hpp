#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "diagcalc/diagram.hpp"
#include "diagcalc/morphism.hpp"

namespace diagcalc {

// One vector per shape vertex.
struct Lift {
  std::vector<Eigen::VectorXd> elements;
};

Lift zero_lift(const Diagram& d);

// Known values at a vertex. With `indices` set, only those coordinates are pinned.
struct Pin {
  VertexId vertex = 0;
  Eigen::VectorXd values;
  std::vector<std::size_t> indices;
};
using Pinning = std::vector<Pin>;

struct LiftReport {
  std::vector<double> residuals;  // max-abs residual per edge
  double tol = kDefaultLinTol;
  bool ok() const;
  std::optional<EdgeId> worst_edge() const;
};

LiftReport verify_lift(const Diagram& d, const Lift& l, double tol = kDefaultLinTol);

struct LinearSystem {
  SparseMatrix a;
  Eigen::VectorXd b;
  std::vector<std::size_t> offsets;  // start of each vertex block in the unknown vector
  std::size_t unknowns = 0;
};

LinearSystem assemble_system(const Diagram& d, const Pinning& pins);

struct Unique {
  Lift lift;
  double residual = 0.0;
};
struct Underdetermined {
  Lift particular;  // minimum-norm solution
  std::size_t nullity = 0;
  double residual = 0.0;
};
struct Infeasible {
  double residual = 0.0;
};
using SolveOutcome = std::variant<Unique, Underdetermined, Infeasible>;

struct SystemSolution {
  Eigen::VectorXd x;
  std::size_t rank = 0;
  double residual = 0.0;  // max-abs entry of A x - b
};

// Rank-revealing least squares; minimum-norm when rank deficient.
SystemSolution solve_system(const SparseMatrix& a, const Eigen::VectorXd& b,
                            double rank_tol = kDefaultLinTol);
SolveOutcome classify(const SystemSolution& s, const LinearSystem& sys, double tol);

SolveOutcome solve_lift(const Diagram& d, const Pinning& pins, double tol = kDefaultLinTol);
SolveOutcome solve_bvp(const DiagramMorphism& m, const Lift& boundary, double tol = kDefaultLinTol);
Lift pushforward_lift(const DiagramMorphism& m, const Lift& l, double tol = kDefaultLinTol);

std::string outcome_name(const SolveOutcome& o);
const Lift* outcome_lift(const SolveOutcome& o);

}  // namespace diagcalc
