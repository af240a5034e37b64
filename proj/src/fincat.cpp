#include "diagcalc/fincat.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "diagcalc/error.hpp"

namespace diagcalc {

VertexId Graph::add_vertex(std::string name) {
  if (vertex_index_.count(name)) throw ShapeError("duplicate vertex '" + name + "'");
  VertexId id = vertex_names_.size();
  vertex_index_.emplace(name, id);
  vertex_names_.push_back(std::move(name));
  return id;
}

EdgeId Graph::add_edge(std::string name, VertexId src, VertexId tgt, std::string label) {
  if (src >= vertex_count() || tgt >= vertex_count())
    throw ShapeError("edge '" + name + "' has an endpoint outside the graph");
  if (edge_index_.count(name)) throw ShapeError("duplicate edge '" + name + "'");
  EdgeId id = edges_.size();
  edge_index_.emplace(name, id);
  edges_.push_back(Edge{std::move(name), src, tgt, std::move(label)});
  return id;
}

const std::string& Graph::edge_label(EdgeId e) const {
  const Edge& ed = edges_.at(e);
  return ed.label.empty() ? ed.name : ed.label;
}

std::optional<VertexId> Graph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

VertexId Graph::vertex(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) throw ShapeError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

EdgeId Graph::edge_id(std::string_view name) const {
  auto e = find_edge(name);
  if (!e) throw ShapeError("unknown edge '" + std::string(name) + "'");
  return *e;
}

std::vector<EdgeId> Graph::out_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edges_.size(); ++e)
    if (edges_[e].src == v) out.push_back(e);
  return out;
}

Path make_path(const Graph& g, VertexId start, std::vector<EdgeId> edges) {
  if (start >= g.vertex_count()) throw ShapeError("path start outside the graph");
  VertexId cur = start;
  for (EdgeId e : edges) {
    if (e >= g.edge_count()) throw ShapeError("path uses an unknown edge");
    if (g.edge(e).src != cur)
      throw ShapeError("edge '" + g.edge(e).name + "' does not compose in path");
    cur = g.edge(e).tgt;
  }
  return Path{start, std::move(edges)};
}

Path make_path(const Graph& g, std::span<const std::string> edge_names) {
  if (edge_names.empty()) throw ShapeError("a named path needs at least one edge");
  std::vector<EdgeId> ids;
  for (const auto& n : edge_names) ids.push_back(g.edge_id(n));
  VertexId start = g.edge(ids.front()).src;
  return make_path(g, start, std::move(ids));
}

VertexId path_end(const Graph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.edge(p.edges.back()).tgt;
}

Path path_compose(const Graph& g, const Path& p, const Path& q) {
  if (path_end(g, p) != q.start)
    throw ShapeError("cannot compose paths: endpoint mismatch at '" +
                     g.vertex_name(path_end(g, p)) + "' vs '" + g.vertex_name(q.start) + "'");
  Path r = p;
  r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
  return r;
}

std::string format_path(const Graph& g, const Path& p) {
  if (p.edges.empty()) return "id(" + g.vertex_name(p.start) + ")";
  std::string s = "[";
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) s += ", ";
    s += g.edge(p.edges[i]).name;
  }
  return s + "]";
}

namespace {

bool graph_is_acyclic(const Graph& g) {
  std::vector<std::size_t> indeg(g.vertex_count(), 0);
  for (const auto& e : g.edges()) ++indeg[e.tgt];
  std::deque<VertexId> ready;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::size_t seen = 0;
  std::vector<std::vector<EdgeId>> out(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) out[g.edge(e).src].push_back(e);
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    ++seen;
    for (EdgeId e : out[v])
      if (--indeg[g.edge(e).tgt] == 0) ready.push_back(g.edge(e).tgt);
  }
  return seen == g.vertex_count();
}

}  // namespace

Presentation::Presentation(Graph g, std::vector<Relation> relations)
    : graph_(std::move(g)), relations_(std::move(relations)) {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    make_path(graph_, r.lhs.start, r.lhs.edges);
    make_path(graph_, r.rhs.start, r.rhs.edges);
    if (r.lhs.start != r.rhs.start || path_end(graph_, r.lhs) != path_end(graph_, r.rhs))
      throw ShapeError("relation " + std::to_string(i) + " has mismatched endpoints");
  }
  acyclic_ = graph_is_acyclic(graph_);
}

std::vector<Path> enumerate_paths(const Presentation& c, VertexId a, VertexId b,
                                  std::size_t max_len) {
  const Graph& g = c.graph();
  if (a >= g.vertex_count() || b >= g.vertex_count())
    throw ShapeError("enumerate_paths: vertex outside the graph");
  std::vector<std::vector<EdgeId>> out(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) out[g.edge(e).src].push_back(e);

  std::vector<Path> result;
  std::vector<EdgeId> stack;
  auto dfs = [&](auto&& self, VertexId v) -> void {
    if (v == b) result.push_back(Path{a, stack});
    if (stack.size() == max_len) return;
    for (EdgeId e : out[v]) {
      stack.push_back(e);
      self(self, g.edge(e).tgt);
      stack.pop_back();
    }
  };
  dfs(dfs, a);
  return result;
}

std::vector<Path> hom_paths(const Presentation& c, VertexId a, VertexId b) {
  if (!c.acyclic()) throw NotAcyclicError("hom-set query on a cyclic shape");
  return enumerate_paths(c, a, b, c.edge_count());
}

std::vector<Path> hom_representatives(const Presentation& c, VertexId a, VertexId b,
                                      std::size_t budget) {
  auto paths = hom_paths(c, a, b);
  if (c.is_free()) return paths;
  std::vector<Path> reps;
  for (auto& p : paths) {
    bool dup = std::any_of(reps.begin(), reps.end(), [&](const Path& r) {
      return paths_equal(c, r, p, budget) == PathEquality::Equal;
    });
    if (!dup) reps.push_back(std::move(p));
  }
  return reps;
}

namespace {

// Vertex visited before edge k of the word (k = size gives the end vertex).
std::vector<VertexId> visited_vertices(const Graph& g, VertexId start,
                                       const std::vector<EdgeId>& w) {
  std::vector<VertexId> vs{start};
  for (EdgeId e : w) vs.push_back(g.edge(e).tgt);
  return vs;
}

}  // namespace

PathEquality paths_equal(const Presentation& c, const Path& p, const Path& q,
                         std::size_t budget) {
  const Graph& g = c.graph();
  make_path(g, p.start, p.edges);
  make_path(g, q.start, q.edges);
  if (p.start != q.start || path_end(g, p) != path_end(g, q))
    throw ShapeError("paths_equal: endpoint mismatch");
  if (p == q) return PathEquality::Equal;
  if (c.is_free()) return PathEquality::NotProven;

  // Undirected rewriting: each relation may be used in either direction.
  std::vector<std::pair<const Path*, const Path*>> rules;
  for (const auto& r : c.relations()) {
    rules.emplace_back(&r.lhs, &r.rhs);
    rules.emplace_back(&r.rhs, &r.lhs);
  }

  std::set<std::vector<EdgeId>> seen{p.edges};
  std::deque<std::vector<EdgeId>> frontier{p.edges};
  std::size_t steps = 0;
  while (!frontier.empty()) {
    auto w = std::move(frontier.front());
    frontier.pop_front();
    auto verts = visited_vertices(g, p.start, w);
    for (const auto& [from, to] : rules) {
      const auto& pat = from->edges;
      for (std::size_t i = 0; i + pat.size() <= w.size(); ++i) {
        if (verts[i] != from->start) continue;
        if (!std::equal(pat.begin(), pat.end(), w.begin() + static_cast<std::ptrdiff_t>(i)))
          continue;
        std::vector<EdgeId> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(next.end(), to->edges.begin(), to->edges.end());
        next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + pat.size()), w.end());
        if (++steps > budget) return PathEquality::NotProven;
        if (next == q.edges) return PathEquality::Equal;
        if (seen.insert(next).second) frontier.push_back(std::move(next));
      }
    }
  }
  return PathEquality::NotProven;
}

std::vector<VertexId> topological_order(const Presentation& c) {
  if (!c.acyclic()) throw NotAcyclicError("topological order of a cyclic shape");
  const Graph& g = c.graph();
  std::vector<std::size_t> indeg(g.vertex_count(), 0);
  for (const auto& e : g.edges()) ++indeg[e.tgt];
  std::vector<VertexId> order;
  std::set<VertexId> ready;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (indeg[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    VertexId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (EdgeId e : g.out_edges(v))
      if (--indeg[g.edge(e).tgt] == 0) ready.insert(g.edge(e).tgt);
  }
  return order;
}

FinFunctor FinFunctor::identity(const Presentation& c) {
  FinFunctor f{c, c, {}, {}};
  f.ob.resize(c.vertex_count());
  std::iota(f.ob.begin(), f.ob.end(), VertexId{0});
  for (EdgeId e = 0; e < c.edge_count(); ++e)
    f.hom.push_back(Path{c.graph().edge(e).src, {e}});
  return f;
}

Path FinFunctor::apply(const Path& p) const {
  Path out = Path::identity(ob.at(p.start));
  for (EdgeId e : p.edges) out = path_compose(cod.graph(), out, hom.at(e));
  return out;
}

FunctorReport check_functor(const FinFunctor& f, std::size_t budget) {
  FunctorReport rep;
  const Graph& dg = f.dom.graph();
  const Graph& cg = f.cod.graph();
  if (f.ob.size() != dg.vertex_count()) {
    rep.failures.push_back("object map is not total");
    return rep;
  }
  if (f.hom.size() != dg.edge_count()) {
    rep.failures.push_back("edge map is not total");
    return rep;
  }
  for (VertexId v = 0; v < f.ob.size(); ++v)
    if (f.ob[v] >= cg.vertex_count())
      rep.failures.push_back("vertex '" + dg.vertex_name(v) + "' maps outside the codomain");
  if (!rep.ok()) return rep;
  bool endpoints_ok = true;
  for (EdgeId e = 0; e < dg.edge_count(); ++e) {
    const Edge& ed = dg.edge(e);
    const Path& img = f.hom[e];
    try {
      make_path(cg, img.start, img.edges);
    } catch (const ShapeError&) {
      rep.failures.push_back("edge '" + ed.name + "' maps to an ill-formed path");
      endpoints_ok = false;
      continue;
    }
    if (img.start != f.ob[ed.src] || path_end(cg, img) != f.ob[ed.tgt]) {
      rep.failures.push_back("edge '" + ed.name + "' maps to a path with wrong endpoints");
      endpoints_ok = false;
    }
  }
  if (!endpoints_ok) return rep;
  for (std::size_t i = 0; i < f.dom.relations().size(); ++i) {
    const auto& r = f.dom.relations()[i];
    if (paths_equal(f.cod, f.apply(r.lhs), f.apply(r.rhs), budget) != PathEquality::Equal)
      rep.failures.push_back("relation " + std::to_string(i) + " (" + format_path(dg, r.lhs) +
                             " = " + format_path(dg, r.rhs) + ") is not preserved");
  }
  return rep;
}

FinFunctor compose_functors(const FinFunctor& f, const FinFunctor& g) {
  if (!(f.cod == g.dom)) throw ShapeError("compose_functors: codomain/domain mismatch");
  FinFunctor h{f.dom, g.cod, {}, {}};
  for (VertexId v : f.ob) h.ob.push_back(g.ob.at(v));
  for (const Path& p : f.hom) h.hom.push_back(g.apply(p));
  return h;
}

std::vector<std::size_t> CommaCategory::component_labels() const {
  std::vector<std::size_t> parent(objects.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : arrows) parent[find(a.from)] = find(a.to);
  std::map<std::size_t, std::size_t> relabel;
  std::vector<std::size_t> labels(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    auto root = find(i);
    auto it = relabel.emplace(root, relabel.size()).first;
    labels[i] = it->second;
  }
  return labels;
}

std::size_t CommaCategory::component_count() const {
  auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<CommaObject> comma_objects(const FinFunctor& r, VertexId j, std::size_t budget) {
  if (!r.cod.acyclic()) throw NotAcyclicError("comma category over a cyclic codomain");
  if (j >= r.cod.vertex_count()) throw ShapeError("comma target outside the codomain");
  std::vector<CommaObject> objs;
  for (VertexId a = 0; a < r.dom.vertex_count(); ++a)
    for (auto& p : hom_representatives(r.cod, r.ob[a], j, budget))
      objs.push_back(CommaObject{a, std::move(p)});
  return objs;
}

CommaCategory comma_category(const FinFunctor& r, VertexId j, std::size_t budget) {
  CommaCategory cc;
  cc.target = j;
  cc.objects = comma_objects(r, j, budget);
  const Graph& dg = r.dom.graph();
  for (EdgeId e = 0; e < dg.edge_count(); ++e) {
    const Edge& ed = dg.edge(e);
    for (std::size_t i = 0; i < cc.objects.size(); ++i) {
      if (cc.objects[i].source != ed.src) continue;
      for (std::size_t k = 0; k < cc.objects.size(); ++k) {
        if (cc.objects[k].source != ed.tgt) continue;
        Path via = path_compose(r.cod.graph(), r.hom[e], cc.objects[k].arrow);
        if (paths_equal(r.cod, via, cc.objects[i].arrow, budget) == PathEquality::Equal)
          cc.arrows.push_back(CommaArrow{i, k, e});
      }
    }
  }
  return cc;
}

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  return base;
}

}  // namespace

Pushout pushout(const FinFunctor& f, const FinFunctor& g) {
  if (!(f.dom == g.dom)) throw ShapeError("pushout: span legs have different domains");
  if (!check_functor(f).ok() || !check_functor(g).ok())
    throw ShapeError("pushout: invalid span leg");
  const Graph& bg = f.cod.graph();
  const Graph& cg = g.cod.graph();
  const std::size_t nb = bg.vertex_count(), nc = cg.vertex_count();

  std::vector<std::size_t> parent(nb + nc);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (VertexId a = 0; a < f.dom.vertex_count(); ++a) {
    auto x = find(f.ob[a]), y = find(nb + g.ob[a]);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }

  Graph out;
  std::set<std::string> vnames;
  std::map<std::size_t, VertexId> class_vertex;
  std::vector<VertexId> vmap(nb + nc);
  for (std::size_t x = 0; x < nb + nc; ++x) {
    auto root = find(x);
    auto it = class_vertex.find(root);
    if (it == class_vertex.end()) {
      const std::string& base = x < nb ? bg.vertex_name(x) : cg.vertex_name(x - nb);
      std::string name = fresh_name(base, vnames);
      vnames.insert(name);
      it = class_vertex.emplace(root, out.add_vertex(name)).first;
    }
    vmap[x] = it->second;
  }

  std::set<std::string> enames;
  for (const auto& e : bg.edges()) {
    out.add_edge(e.name, vmap[e.src], vmap[e.tgt], e.label);
    enames.insert(e.name);
  }
  auto translate_b = [&](const Path& p) {
    return Path{vmap[p.start], p.edges};
  };

  std::vector<std::optional<Path>> c_subst(cg.edge_count());
  std::vector<std::pair<Path, Path>> pending;  // (apex path, C path)
  for (EdgeId e = 0; e < f.dom.edge_count(); ++e) {
    Path fe = translate_b(f.hom[e]);
    const Path& ge = g.hom[e];
    if (ge.edges.size() == 1 && !c_subst[ge.edges[0]]) {
      c_subst[ge.edges[0]] = fe;
    } else {
      pending.emplace_back(fe, ge);
    }
  }
  for (EdgeId c = 0; c < cg.edge_count(); ++c) {
    if (c_subst[c]) continue;
    const Edge& ce = cg.edge(c);
    std::string name = fresh_name(ce.name, enames);
    enames.insert(name);
    EdgeId id = out.add_edge(name, vmap[nb + ce.src], vmap[nb + ce.tgt], ce.label);
    c_subst[c] = Path{vmap[nb + ce.src], {id}};
  }
  auto translate_c = [&](const Path& p) {
    Path r = Path::identity(vmap[nb + p.start]);
    for (EdgeId e : p.edges) r = path_compose(out, r, *c_subst[e]);
    return r;
  };

  std::vector<Relation> rels;
  for (const auto& r : f.cod.relations()) rels.push_back({translate_b(r.lhs), translate_b(r.rhs)});
  for (const auto& r : g.cod.relations()) rels.push_back({translate_c(r.lhs), translate_c(r.rhs)});
  for (const auto& [fe, ge] : pending) {
    Path rhs = translate_c(ge);
    if (!(fe == rhs)) rels.push_back({fe, rhs});
  }

  Presentation apex(std::move(out), std::move(rels));
  Pushout po{apex, FinFunctor{f.cod, apex, {}, {}}, FinFunctor{g.cod, apex, {}, {}}};
  for (VertexId v = 0; v < nb; ++v) po.left.ob.push_back(vmap[v]);
  for (EdgeId e = 0; e < bg.edge_count(); ++e) po.left.hom.push_back(Path{vmap[bg.edge(e).src], {e}});
  for (VertexId v = 0; v < nc; ++v) po.right.ob.push_back(vmap[nb + v]);
  for (EdgeId c = 0; c < cg.edge_count(); ++c) po.right.hom.push_back(*c_subst[c]);
  return po;
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string export_shape_dot(const Presentation& c, std::string_view name) {
  std::ostringstream os;
  os << "digraph " << dot_quote(std::string(name)) << " {\n";
  const Graph& g = c.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    os << "  v" << v << " [label=" << dot_quote(g.vertex_name(v)) << "];\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    os << "  v" << g.edge(e).src << " -> v" << g.edge(e).tgt
       << " [label=" << dot_quote(g.edge_label(e)) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace diagcalc
