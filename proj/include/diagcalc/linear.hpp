#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <span>
#include <string>
#include <vector>

namespace diagcalc {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kDefaultLinTol = 1e-10;

struct LinSpace {
  std::size_t dim = 0;
  std::string label;
  std::vector<std::string> basis;  // optional coordinate names, used for printing

  // Basis names are presentation only.
  bool operator==(const LinSpace& o) const { return dim == o.dim && label == o.label; }
};

LinSpace real_space(std::size_t dim, std::string label = {});

struct LinMap {
  LinSpace dom;
  LinSpace cod;
  SparseMatrix matrix;  // cod.dim x dom.dim

  static LinMap identity(const LinSpace& s);
  static LinMap zero(const LinSpace& dom, const LinSpace& cod);
  static LinMap from_dense(const LinSpace& dom, const LinSpace& cod, const Eigen::MatrixXd& m);
  static LinMap from_sparse(const LinSpace& dom, const LinSpace& cod, SparseMatrix m);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

// f then g; the matrix is g.matrix * f.matrix.
LinMap lin_compose(const LinMap& f, const LinMap& g);
LinMap lin_add(const LinMap& f, const LinMap& g);
LinMap lin_scale(double s, const LinMap& f);
double lin_max_abs_difference(const LinMap& f, const LinMap& g);
bool lin_equal(const LinMap& f, const LinMap& g, double tol = kDefaultLinTol);
// Entrywise identical matrices and equal spaces.
bool lin_identical(const LinMap& f, const LinMap& g);

struct DirectSum {
  LinSpace space;
  std::vector<LinMap> projections;
  std::vector<LinMap> injections;
};

DirectSum direct_sum(std::span<const LinSpace> spaces);
LinMap sum_map(std::size_t n, const LinSpace& space);

// Selection matrix R^n -> R^{indices.size()} picking the listed coordinates.
SparseMatrix selection_matrix(std::size_t n, std::span<const std::size_t> indices);

std::string to_matrix_market(const LinMap& f);

}  // namespace diagcalc
