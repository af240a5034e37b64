#include "diagcalc/linear.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "diagcalc/error.hpp"

namespace diagcalc {

namespace {

void check_shape(const LinSpace& dom, const LinSpace& cod, const SparseMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != cod.dim ||
      static_cast<std::size_t>(m.cols()) != dom.dim)
    throw TypeError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    " but the map needs " + std::to_string(cod.dim) + "x" +
                    std::to_string(dom.dim));
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (!std::isfinite(it.value())) throw TypeError("matrix has a non-finite entry");
}

}  // namespace

LinSpace real_space(std::size_t dim, std::string label) {
  if (label.empty()) label = "R^" + std::to_string(dim);
  return LinSpace{dim, std::move(label), {}};
}

LinMap LinMap::identity(const LinSpace& s) {
  SparseMatrix m(static_cast<Eigen::Index>(s.dim), static_cast<Eigen::Index>(s.dim));
  m.setIdentity();
  return LinMap{s, s, std::move(m)};
}

LinMap LinMap::zero(const LinSpace& dom, const LinSpace& cod) {
  return LinMap{dom, cod,
                SparseMatrix(static_cast<Eigen::Index>(cod.dim), static_cast<Eigen::Index>(dom.dim))};
}

LinMap LinMap::from_dense(const LinSpace& dom, const LinSpace& cod, const Eigen::MatrixXd& m) {
  SparseMatrix s = m.sparseView(0.0, 0.0);
  check_shape(dom, cod, s);
  return LinMap{dom, cod, std::move(s)};
}

LinMap LinMap::from_sparse(const LinSpace& dom, const LinSpace& cod, SparseMatrix m) {
  m.prune(0.0, 0.0);
  m.makeCompressed();
  check_shape(dom, cod, m);
  return LinMap{dom, cod, std::move(m)};
}

Eigen::VectorXd LinMap::operator()(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dom.dim)
    throw TypeError("vector of length " + std::to_string(x.size()) + " applied to a map from " +
                    std::to_string(dom.dim) + " dimensions");
  return matrix * x;
}

LinMap lin_compose(const LinMap& f, const LinMap& g) {
  if (f.cod.dim != g.dom.dim)
    throw TypeError("lin_compose: codomain dimension " + std::to_string(f.cod.dim) +
                    " does not match domain dimension " + std::to_string(g.dom.dim));
  SparseMatrix m = (g.matrix * f.matrix).pruned(0.0, 0.0);
  return LinMap{f.dom, g.cod, std::move(m)};
}

LinMap lin_add(const LinMap& f, const LinMap& g) {
  if (f.dom.dim != g.dom.dim || f.cod.dim != g.cod.dim) throw TypeError("lin_add: shape mismatch");
  SparseMatrix m = (f.matrix + g.matrix).pruned(0.0, 0.0);
  return LinMap{f.dom, f.cod, std::move(m)};
}

LinMap lin_scale(double s, const LinMap& f) {
  SparseMatrix m = (s * f.matrix).pruned(0.0, 0.0);
  return LinMap{f.dom, f.cod, std::move(m)};
}

double lin_max_abs_difference(const LinMap& f, const LinMap& g) {
  if (f.dom.dim != g.dom.dim || f.cod.dim != g.cod.dim)
    throw TypeError("lin_equal: shape mismatch");
  SparseMatrix d = f.matrix - g.matrix;
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

bool lin_equal(const LinMap& f, const LinMap& g, double tol) {
  return lin_max_abs_difference(f, g) <= tol;
}

bool lin_identical(const LinMap& f, const LinMap& g) {
  return f.dom == g.dom && f.cod == g.cod && f.dom.dim == g.dom.dim && f.cod.dim == g.cod.dim &&
         lin_max_abs_difference(f, g) == 0.0;
}

DirectSum direct_sum(std::span<const LinSpace> spaces) {
  DirectSum ds;
  std::size_t total = 0;
  std::string label;
  for (const auto& s : spaces) {
    total += s.dim;
    if (!label.empty()) label += " + ";
    label += s.label;
  }
  if (spaces.empty()) label = "0";
  ds.space = LinSpace{total, label, {}};
  std::size_t offset = 0;
  for (const auto& s : spaces) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t i = 0; i < s.dim; ++i)
      trip.emplace_back(static_cast<int>(i), static_cast<int>(offset + i), 1.0);
    SparseMatrix p(static_cast<Eigen::Index>(s.dim), static_cast<Eigen::Index>(total));
    p.setFromTriplets(trip.begin(), trip.end());
    SparseMatrix inj = p.transpose();
    ds.projections.push_back(LinMap{ds.space, s, p});
    ds.injections.push_back(LinMap{s, ds.space, inj});
    offset += s.dim;
  }
  return ds;
}

LinMap sum_map(std::size_t n, const LinSpace& space) {
  std::vector<LinSpace> copies(n, space);
  DirectSum ds = direct_sum(copies);
  SparseMatrix m(static_cast<Eigen::Index>(space.dim), static_cast<Eigen::Index>(ds.space.dim));
  for (const auto& p : ds.projections) m += p.matrix;
  return LinMap{ds.space, space, m};
}

SparseMatrix selection_matrix(std::size_t n, std::span<const std::size_t> indices) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= n) throw TypeError("selection index out of range");
    trip.emplace_back(static_cast<int>(r), static_cast<int>(indices[r]), 1.0);
  }
  SparseMatrix s(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(n));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

std::string to_matrix_market(const LinMap& f) {
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << f.matrix.rows() << " " << f.matrix.cols() << " " << f.matrix.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < f.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(f.matrix, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << it.row() + 1 << " " << it.col() + 1 << " " << buf << "\n";
    }
  return os.str();
}

}  // namespace diagcalc
