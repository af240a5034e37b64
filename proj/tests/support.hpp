#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "diagcalc/equiv.hpp"
#include "diagcalc/lifting.hpp"
#include "diagcalc/morphism.hpp"
#include "diagcalc/physlib.hpp"

namespace testing_support {

using namespace diagcalc;
using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::MatrixXd random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform_real(rng, -1.0, 1.0);
  return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, std::size_t n) {
  return random_matrix(rng, n, 1).col(0);
}

// Connected: random spanning tree plus extra edges, weights in [0.5, 2].
inline SWGraph random_connected_graph(Rng& rng, std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> es;
  for (std::size_t v = 1; v < n; ++v)
    es.emplace_back(uniform_index(rng, 0, v - 1), v, uniform_real(rng, 0.5, 2.0));
  std::size_t extra = uniform_index(rng, 0, n);
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t a = uniform_index(rng, 0, n - 1), b = uniform_index(rng, 0, n - 1);
    if (a != b) es.emplace_back(a, b, uniform_real(rng, 0.5, 2.0));
  }
  return SWGraph::from_undirected(n, es);
}

// Random DAG on n vertices; edges go from lower to higher index.
inline Graph random_dag(Rng& rng, std::size_t n, double density, const std::string& prefix) {
  Graph g;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex(prefix + std::to_string(v));
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t copies = uniform_real(rng, 0, 1) < density ? uniform_index(rng, 1, 2) : 0;
      for (std::size_t c = 0; c < copies; ++c) g.add_edge(prefix + "e" + std::to_string(k++), a, b);
    }
  return g;
}

// Random functor between acyclic presentations. With `fes` the functor is bijective on objects
// and every path of the codomain is the image of one or two generating edges.
inline FinFunctor random_functor(Rng& rng, bool fes) {
  std::size_t nb = uniform_index(rng, 2, 5);
  Presentation b(random_dag(rng, nb, 0.5, "b"));
  if (uniform_real(rng, 0, 1) < 0.3) {
    // Occasionally identify two parallel paths.
    for (VertexId s = 0; s < nb; ++s)
      for (VertexId t = s + 1; t < nb; ++t) {
        auto ps = hom_paths(b, s, t);
        if (ps.size() >= 2) {
          b = Presentation(b.graph(), {Relation{ps[0], ps[1]}});
          s = nb;
          break;
        }
      }
  }
  Graph ag;
  FinFunctor f{{}, b, {}, {}};
  std::size_t na = fes ? nb : uniform_index(rng, 1, 5);
  for (std::size_t a = 0; a < na; ++a) {
    ag.add_vertex("a" + std::to_string(a));
    f.ob.push_back(fes && a < nb ? a : uniform_index(rng, 0, nb - 1));
  }
  // Keep the domain acyclic: only add a -> a' for a < a'.
  std::size_t k = 0;
  for (VertexId a = 0; a < na; ++a)
    for (VertexId c = a + 1; c < na; ++c) {
      auto paths = hom_paths(b, f.ob[a], f.ob[c]);
      if (paths.empty()) continue;
      if (fes) {
        for (const auto& p : paths) {
          std::size_t copies = uniform_index(rng, 1, 2);
          for (std::size_t i = 0; i < copies; ++i) {
            ag.add_edge("f" + std::to_string(k++), a, c);
            f.hom.push_back(p);
          }
        }
      } else if (uniform_real(rng, 0, 1) < 0.6) {
        ag.add_edge("f" + std::to_string(k++), a, c);
        f.hom.push_back(paths[uniform_index(rng, 0, paths.size() - 1)]);
      }
    }
  f.dom = Presentation(std::move(ag));
  return f;
}

struct RandomTriple {
  Diagram dom;
  DiagramMorphism morphism;
  Lift lift;
};

// Random linear diagram with a known lift, a random morphism out of it and the solved lift.
inline RandomTriple random_triple(Rng& rng) {
  const Semantics lin = Semantics::linear();
  std::size_t n = uniform_index(rng, 2, 5);
  Graph g;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex("x" + std::to_string(v));
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < n; ++v) dims.push_back(uniform_index(rng, 1, 3));
  std::vector<Eigen::VectorXd> x(n);
  std::vector<Morphism> hom;
  std::vector<VertexId> roots;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == 0 || uniform_real(rng, 0, 1) < 0.25) {
      roots.push_back(v);
      x[v] = random_vector(rng, dims[v]);
      continue;
    }
    std::size_t p = uniform_index(rng, 0, v - 1);
    Eigen::MatrixXd a = random_matrix(rng, dims[v], dims[p]);
    x[v] = a * x[p];
    g.add_edge("t" + std::to_string(v), p, v);
    hom.push_back(LinMap::from_dense(real_space(dims[p]), real_space(dims[v]), a));
  }
  // Extra edges, adjusted so the known lift satisfies them.
  std::size_t extra = uniform_index(rng, 0, 2);
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t a = uniform_index(rng, 0, n - 1), b = uniform_index(rng, 0, n - 1);
    if (a >= b) continue;
    Eigen::MatrixXd m = random_matrix(rng, dims[b], dims[a]);
    if (x[a].norm() > 1e-3) m += (x[b] - m * x[a]) * x[a].transpose() / x[a].squaredNorm();
    else continue;
    g.add_edge("c" + std::to_string(k), a, b);
    hom.push_back(LinMap::from_dense(real_space(dims[a]), real_space(dims[b]), m));
  }
  std::vector<Object> ob;
  for (auto d : dims) ob.push_back(real_space(d));
  Diagram d = build_diagram(Presentation(g), lin, ob, hom);

  Pinning pins;
  for (VertexId r : roots) pins.push_back(Pin{r, x[r], {}});
  auto outcome = solve_lift(d, pins);
  Lift lift = *outcome_lift(outcome);

  // Codomain: J' maps into J; each J' edge goes to a random path.
  std::size_t m = uniform_index(rng, 1, 4);
  Graph kg;
  FinFunctor r{{}, d.shape(), {}, {}};
  for (std::size_t j = 0; j < m; ++j) {
    kg.add_vertex("y" + std::to_string(j));
    r.ob.push_back(uniform_index(rng, 0, n - 1));
  }
  std::vector<std::pair<std::size_t, std::size_t>> kedges;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      auto paths = hom_paths(d.shape(), r.ob[a], r.ob[b]);
      if (paths.empty() || uniform_real(rng, 0, 1) < 0.3) continue;
      kg.add_edge("h" + std::to_string(kedges.size()), a, b);
      r.hom.push_back(paths[uniform_index(rng, 0, paths.size() - 1)]);
      kedges.emplace_back(a, b);
    }
  std::vector<bool> has_out(m, false);
  for (auto [a, b] : kedges) has_out[a] = true;
  std::vector<Object> kob;
  std::vector<Morphism> rho;
  std::vector<Eigen::MatrixXd> rho_m;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t dj = dims[r.ob[j]];
    Eigen::MatrixXd c;
    if (has_out[j]) {
      c = Eigen::MatrixXd::Identity(dj, dj) + 0.3 * random_matrix(rng, dj, dj);
    } else {
      std::size_t dk = uniform_index(rng, 1, 3);
      c = random_matrix(rng, dk, dj);
    }
    kob.push_back(real_space(static_cast<std::size_t>(c.rows())));
    rho.push_back(LinMap::from_dense(real_space(dj), real_space(c.rows()), c));
    rho_m.push_back(c);
  }
  std::vector<Morphism> khom;
  for (std::size_t e = 0; e < kedges.size(); ++e) {
    auto [a, b] = kedges[e];
    Eigen::MatrixXd path = as_linear(d.evaluate(r.hom[e])).dense();
    Eigen::MatrixXd val = rho_m[b] * path * rho_m[a].inverse();
    khom.push_back(LinMap::from_dense(real_space(rho_m[a].rows()), real_space(rho_m[b].rows()), val));
  }
  Diagram cod = build_diagram(Presentation(kg), lin.with_tolerance(1e-8), kob, khom);
  r.dom = cod.shape();
  Diagram dom_loose = with_semantics(d, lin.with_tolerance(1e-8));
  DiagramMorphism mor = make_morphism(dom_loose, cod, r, rho);
  return RandomTriple{d, std::move(mor), std::move(lift)};
}

}  // namespace testing_support
