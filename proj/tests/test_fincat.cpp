#include <catch_amalgamated.hpp>

#include "diagcalc/error.hpp"
#include "diagcalc/fincat.hpp"
#include "support.hpp"

using namespace diagcalc;
using namespace testing_support;

namespace {

Graph parallel_pair() {
  Graph g;
  g.add_vertex("s");
  g.add_vertex("t");
  g.add_edge("f", 0, 1);
  g.add_edge("g", 0, 1);
  return g;
}

// C -> C_dot directly, and through dC, phi, dphi.
Graph diffusion_shape() {
  Graph g;
  for (auto n : {"C", "dC", "phi", "dphi", "C_dot"}) g.add_vertex(n);
  g.add_edge("dt", 0, 4);
  g.add_edge("d", 0, 1);
  g.add_edge("kstar", 1, 2);
  g.add_edge("d_phi", 2, 3);
  g.add_edge("star_inv", 3, 4);
  return g;
}

Graph heat_shape() {
  Graph g;
  g.add_vertex("C");
  g.add_vertex("C_dot");
  g.add_edge("dt", 0, 1);
  g.add_edge("kDelta", 0, 1);
  return g;
}

FinFunctor heat_to_diffusion() {
  Presentation j(diffusion_shape());
  Presentation k(heat_shape());
  FinFunctor r{k, j, {0, 4}, {}};
  r.hom.push_back(make_path(j.graph(), 0, {0}));
  r.hom.push_back(make_path(j.graph(), 0, {1, 2, 3, 4}));
  return r;
}

}  // namespace

TEST_CASE("graph ids follow insertion order and names are unique", "[fincat]") {
  Graph g = parallel_pair();
  CHECK(g.vertex("t") == 1);
  CHECK(g.edge_id("g") == 1);
  CHECK_THROWS_AS(g.add_vertex("s"), ShapeError);
  CHECK_THROWS_AS(g.add_edge("f", 0, 1), ShapeError);
  CHECK_THROWS_AS(g.add_edge("h", 0, 7), ShapeError);
  CHECK(g.edge_label(0) == "f");
}

TEST_CASE("path composition", "[fincat]") {
  Graph g;
  for (auto n : {"a", "b", "c", "d"}) g.add_vertex(n);
  g.add_edge("e1", 0, 1);
  g.add_edge("e2", 1, 2);
  g.add_edge("e3", 2, 3);
  Path id = Path::identity(1);
  CHECK(path_compose(g, id, id) == id);
  Path p = make_path(g, 0, {0});
  Path q = make_path(g, 1, {1});
  CHECK(path_compose(g, p, q).edges == std::vector<EdgeId>{0, 1});
  Path pq = path_compose(g, p, q);
  Path r = path_compose(g, pq, make_path(g, 2, {2}));
  CHECK(r.edges == std::vector<EdgeId>{0, 1, 2});
  CHECK(r.edges.size() == pq.edges.size() + 1);
  CHECK(path_compose(g, p, Path::identity(1)) == p);
  CHECK(path_compose(g, Path::identity(0), p) == p);
  CHECK_THROWS_AS(path_compose(g, p, p), ShapeError);
  CHECK_THROWS_AS(make_path(g, 0, {1}), ShapeError);
  CHECK(path_end(g, r) == 3);
}

TEST_CASE("enumerate_paths examples", "[fincat]") {
  Presentation pp(parallel_pair());
  auto ps = enumerate_paths(pp, 0, 1, 5);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].edges.size() == 1);
  CHECK(ps[1].edges.size() == 1);
  auto self = enumerate_paths(pp, 0, 0, 5);
  REQUIRE(self.size() == 1);
  CHECK(self[0].is_identity());

  Presentation diff(diffusion_shape());
  auto two = hom_paths(diff, 0, 4);
  REQUIRE(two.size() == 2);
  CHECK(format_path(diff.graph(), two[0]) == "[dt]");
  CHECK(format_path(diff.graph(), two[1]) == "[d, kstar, d_phi, star_inv]");
}

TEST_CASE("paths_equal examples", "[fincat]") {
  Presentation pp(parallel_pair());
  Path f = make_path(pp.graph(), 0, {0});
  Path g = make_path(pp.graph(), 0, {1});
  CHECK(paths_equal(pp, f, f) == PathEquality::Equal);
  CHECK(paths_equal(pp, f, g) == PathEquality::NotProven);

  Graph tri;
  for (auto n : {"a", "m", "b"}) tri.add_vertex(n);
  tri.add_edge("L", 0, 2);
  tri.add_edge("iota", 0, 1);
  tri.add_edge("d", 1, 2);
  Path l = make_path(tri, 0, {0});
  Path id = make_path(tri, 0, {1, 2});
  Presentation rel(tri, {Relation{l, id}});
  CHECK(paths_equal(rel, l, id) == PathEquality::Equal);
  CHECK(paths_equal(rel, id, l) == PathEquality::Equal);
  CHECK_THROWS_AS(paths_equal(rel, l, Path::identity(0)), ShapeError);
}

TEST_CASE("relations must be parallel", "[fincat]") {
  Graph g = parallel_pair();
  CHECK_THROWS_AS(Presentation(g, {Relation{make_path(g, 0, {0}), Path::identity(0)}}), ShapeError);
}

TEST_CASE("cyclic presentations are flagged", "[fincat]") {
  Graph g;
  g.add_vertex("a");
  g.add_edge("loop", 0, 0);
  Presentation c(g);
  CHECK_FALSE(c.acyclic());
  CHECK_THROWS_AS(hom_paths(c, 0, 0), NotAcyclicError);
  CHECK(enumerate_paths(c, 0, 0, 2).size() == 3);
}

TEST_CASE("check_functor examples", "[fincat]") {
  Presentation pp(parallel_pair());
  CHECK(check_functor(FinFunctor::identity(pp)).ok());
  CHECK(check_functor(heat_to_diffusion()).ok());

  FinFunctor bad = heat_to_diffusion();
  bad.hom[1] = make_path(bad.cod.graph(), 1, {2});
  auto rep = check_functor(bad);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.failures[0].find("kDelta") != std::string::npos);
}

TEST_CASE("comma category examples", "[fincat]") {
  Presentation pp(parallel_pair());
  auto c = comma_category(FinFunctor::identity(pp), 1);
  CHECK(c.objects.size() == 3);
  CHECK(c.nonempty_connected());

  auto h = comma_category(heat_to_diffusion(), 4);
  REQUIRE(h.objects.size() == 3);
  CHECK(h.nonempty_connected());

  // Nothing maps to the isolated vertex z.
  Graph g = parallel_pair();
  g.add_vertex("z");
  Presentation big(g);
  FinFunctor inc{pp, big, {0, 1}, {make_path(g, 0, {0}), make_path(g, 0, {1})}};
  auto empty = comma_category(inc, 2);
  CHECK(empty.objects.empty());
  CHECK_FALSE(empty.nonempty_connected());
}

TEST_CASE("pushout examples", "[fincat]") {
  Graph a;
  a.add_vertex("o");
  Graph b = a, c = a;
  b.add_vertex("x");
  b.add_edge("bx", 0, 1);
  c.add_vertex("y");
  c.add_edge("cy", 0, 1);
  Presentation pa(a), pb(b), pc(c);
  FinFunctor f{pa, pb, {0}, {}};
  FinFunctor g{pa, pc, {0}, {}};
  Pushout w = pushout(f, g);
  CHECK(w.apex.vertex_count() == 3);
  CHECK(w.apex.edge_count() == 2);

  Pushout along_id = pushout(FinFunctor::identity(pb), FinFunctor::identity(pb));
  CHECK(along_id.apex.vertex_count() == pb.vertex_count());
  CHECK(along_id.apex.edge_count() == pb.edge_count());
}

TEST_CASE("properties on random acyclic presentations", "[fincat][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Presentation c(random_dag(rng, uniform_index(rng, 2, 6), 0.5, "v"));
    const std::size_t n = c.vertex_count(), m = c.edge_count();
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = 0; b < n; ++b) {
        // Exhaustive at max_len = |edges|.
        auto ps = enumerate_paths(c, a, b, m);
        CHECK(ps == enumerate_paths(c, a, b, m + 1));
        CHECK(std::is_sorted(ps.begin(), ps.end(), [](const Path& x, const Path& y) { return x.edges < y.edges; }));
        for (const auto& p : ps) CHECK(paths_equal(c, p, p) == PathEquality::Equal);
      }
  }
}

TEST_CASE("paths_equal is symmetric and congruent", "[fincat][property]") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    FinFunctor f = random_functor(rng, false);
    const Presentation& b = f.cod;
    const std::size_t n = b.vertex_count();
    for (VertexId x = 0; x < n; ++x)
      for (VertexId y = 0; y < n; ++y) {
        auto ps = hom_paths(b, x, y);
        for (const auto& p : ps)
          for (const auto& q : ps) {
            bool pq = paths_equal(b, p, q) == PathEquality::Equal;
            CHECK(pq == (paths_equal(b, q, p) == PathEquality::Equal));
            if (!pq) continue;
            for (VertexId z = 0; z < n; ++z)
              for (const auto& r : hom_paths(b, y, z))
                CHECK(paths_equal(b, path_compose(b.graph(), p, r), path_compose(b.graph(), q, r)) ==
                      PathEquality::Equal);
          }
      }
  }
}

TEST_CASE("comma objects match brute-force enumeration", "[fincat][property]") {
  Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    FinFunctor r = random_functor(rng, trial % 2 == 0);
    REQUIRE(check_functor(r).ok());
    for (VertexId j = 0; j < r.cod.vertex_count(); ++j) {
      std::size_t expected = 0;
      for (VertexId a = 0; a < r.dom.vertex_count(); ++a) expected += hom_representatives(r.cod, r.ob[a], j).size();
      CHECK(comma_objects(r, j).size() == expected);
    }
  }
}

TEST_CASE("pushout inclusions commute with the span", "[fincat][property]") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    FinFunctor f = random_functor(rng, false);
    FinFunctor g = random_functor(rng, false);
    // Use a common domain: restrict g to f's domain objects by composing with an inclusion.
    g.dom = f.dom;
    g.ob.clear();
    g.hom.clear();
    for (VertexId a = 0; a < f.dom.vertex_count(); ++a) g.ob.push_back(uniform_index(rng, 0, g.cod.vertex_count() - 1));
    bool ok = true;
    for (EdgeId e = 0; e < f.dom.edge_count() && ok; ++e) {
      const Edge& ed = f.dom.graph().edge(e);
      auto ps = hom_paths(g.cod, g.ob[ed.src], g.ob[ed.tgt]);
      if (ps.empty()) ok = false;
      else g.hom.push_back(ps[0]);
    }
    if (!ok || !check_functor(g).ok()) continue;
    Pushout p = pushout(f, g);
    FinFunctor left = compose_functors(f, p.left);
    FinFunctor right = compose_functors(g, p.right);
    CHECK(left.ob == right.ob);
    for (EdgeId e = 0; e < left.hom.size(); ++e)
      CHECK(paths_equal(p.apex, left.hom[e], right.hom[e]) == PathEquality::Equal);
  }
}
