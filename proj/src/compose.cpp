#include "diagcalc/compose.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "diagcalc/error.hpp"

namespace diagcalc {

bool same_type(const PortType& a, const PortType& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!identical(a[i], b[i])) return false;
  return true;
}

std::vector<PortType> OpenDiagram::feet() const {
  std::vector<PortType> out;
  for (const auto& leg : legs) {
    PortType t;
    for (VertexId v : leg) t.push_back(apex.object(v));
    out.push_back(std::move(t));
  }
  return out;
}

OpenDiagram make_open(Diagram apex, std::vector<std::vector<VertexId>> exposed) {
  for (std::size_t f = 0; f < exposed.size(); ++f) {
    std::set<VertexId> seen;
    for (VertexId v : exposed[f]) {
      if (v >= apex.graph().vertex_count())
        throw ValidationError("foot " + std::to_string(f) + " exposes a missing vertex");
      if (!seen.insert(v).second)
        throw ValidationError("foot " + std::to_string(f) + " exposes '" +
                              apex.graph().vertex_name(v) + "' twice");
    }
  }
  return OpenDiagram{std::move(apex), std::move(exposed)};
}

OpenDiagram make_open(Diagram apex, const std::vector<std::vector<std::string>>& exposed) {
  std::vector<std::vector<VertexId>> ids;
  for (const auto& foot : exposed) {
    std::vector<VertexId> leg;
    for (const auto& n : foot) {
      auto v = apex.graph().find_vertex(n);
      if (!v) throw ValidationError("cannot expose missing vertex '" + n + "'");
      leg.push_back(*v);
    }
    ids.push_back(std::move(leg));
  }
  return make_open(std::move(apex), std::move(ids));
}

void UWD::validate() const {
  if (junction_names.size() != junctions.size())
    throw ValidationError("UWD junction names and types differ in length");
  auto check = [&](const PortType& t, std::size_t j, const std::string& where) {
    if (j >= junctions.size()) throw ValidationError(where + " is wired to a missing junction");
    if (!same_type(t, junctions[j]))
      throw ValidationError(where + " has a type different from junction '" + junction_names[j] +
                            "'");
  };
  if (outer_wiring.size() != outer_ports.size())
    throw ValidationError("UWD outer wiring is not total");
  for (std::size_t o = 0; o < outer_ports.size(); ++o)
    check(outer_ports[o], outer_wiring[o], "outer port " + std::to_string(o));
  for (const auto& b : boxes) {
    if (b.wiring.size() != b.ports.size())
      throw ValidationError("box '" + b.name + "' wiring is not total");
    for (std::size_t p = 0; p < b.ports.size(); ++p)
      check(b.ports[p], b.wiring[p], "port " + std::to_string(p) + " of box '" + b.name + "'");
  }
}

UWD make_uwd(const UwdSpec& spec) {
  UWD u;
  std::map<std::string, std::size_t> index;
  for (const auto& [name, type] : spec.junctions) {
    if (!index.emplace(name, u.junctions.size()).second)
      throw ValidationError("duplicate junction '" + name + "'");
    u.junction_names.push_back(name);
    u.junctions.push_back(type);
  }
  auto find = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw ValidationError("unknown junction '" + n + "'");
    return it->second;
  };
  for (const auto& [name, ports] : spec.boxes) {
    UWD::Box b{name, {}, {}};
    for (const auto& p : ports) {
      b.wiring.push_back(find(p));
      b.ports.push_back(u.junctions[b.wiring.back()]);
    }
    u.boxes.push_back(std::move(b));
  }
  for (const auto& o : spec.outer) {
    u.outer_wiring.push_back(find(o));
    u.outer_ports.push_back(u.junctions[u.outer_wiring.back()]);
  }
  u.validate();
  return u;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

OpenDiagram apply_uwd(const UWD& u, std::span<const OpenDiagram> fillers) {
  u.validate();
  if (fillers.size() != u.boxes.size())
    throw ValidationError("UWD has " + std::to_string(u.boxes.size()) + " boxes but " +
                          std::to_string(fillers.size()) + " fillers were given");
  Semantics sem = fillers.empty() ? Semantics::linear() : fillers[0].apex.semantics();
  bool assume = false;
  std::vector<std::size_t> voff, eoff;
  std::size_t nv = 0, ne = 0;
  for (std::size_t i = 0; i < fillers.size(); ++i) {
    const auto& f = fillers[i];
    const auto& box = u.boxes[i];
    if (!f.apex.semantics().same_category(sem))
      throw ValidationError("filler for box '" + box.name + "' uses different semantics");
    if (f.legs.size() != box.ports.size())
      throw ValidationError("filler for box '" + box.name + "' has " +
                            std::to_string(f.legs.size()) + " feet but the box has " +
                            std::to_string(box.ports.size()) + " ports");
    auto feet = f.feet();
    for (std::size_t p = 0; p < feet.size(); ++p)
      if (!same_type(feet[p], box.ports[p]))
        throw ValidationError("filler for box '" + box.name + "': foot " + std::to_string(p) +
                              " does not match the port type");
    assume = assume || f.apex.assumed();
    voff.push_back(nv);
    eoff.push_back(ne);
    nv += f.apex.graph().vertex_count();
    ne += f.apex.graph().edge_count();
  }

  // Global vertices: filler vertices, then fresh vertices for junction slots no box touches.
  std::vector<const Object*> gobj;
  std::vector<std::string> gname;
  std::vector<std::size_t> gbox;
  for (std::size_t i = 0; i < fillers.size(); ++i) {
    const Graph& g = fillers[i].apex.graph();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      gobj.push_back(&fillers[i].apex.object(v));
      gname.push_back(g.vertex_name(v));
      gbox.push_back(i);
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;  // (junction, k) -> global
  for (std::size_t i = 0; i < fillers.size(); ++i)
    for (std::size_t p = 0; p < u.boxes[i].ports.size(); ++p)
      for (std::size_t k = 0; k < fillers[i].legs[p].size(); ++k)
        slot.emplace(std::make_pair(u.boxes[i].wiring[p], k), voff[i] + fillers[i].legs[p][k]);
  for (std::size_t j = 0; j < u.junctions.size(); ++j)
    for (std::size_t k = 0; k < u.junctions[j].size(); ++k)
      if (!slot.count({j, k})) {
        slot.emplace(std::make_pair(j, k), gobj.size());
        gobj.push_back(&u.junctions[j][k]);
        gname.push_back(u.junction_names[j] +
                        (u.junctions[j].size() > 1 ? "." + std::to_string(k) : std::string()));
        gbox.push_back(fillers.size());
      }

  UnionFind uf(gobj.size());
  for (std::size_t i = 0; i < fillers.size(); ++i)
    for (std::size_t p = 0; p < u.boxes[i].ports.size(); ++p)
      for (std::size_t k = 0; k < fillers[i].legs[p].size(); ++k) {
        std::size_t j = u.boxes[i].wiring[p];
        std::size_t a = slot.at({j, k});
        std::size_t b = voff[i] + fillers[i].legs[p][k];
        if (!identical(*gobj[a], *gobj[b]))
          throw ValidationError("junction '" + u.junction_names[j] + "' joins unequal objects " +
                                describe(*gobj[a]) + " and " + describe(*gobj[b]));
        uf.unite(a, b);
      }

  std::map<std::size_t, std::string> least;
  for (std::size_t x = 0; x < gobj.size(); ++x) {
    auto r = uf.find(x);
    auto it = least.find(r);
    if (it == least.end() || gname[x] < it->second) least[r] = gname[x];
  }
  Graph g;
  std::vector<Object> ob;
  std::set<std::string> taken;
  std::map<std::size_t, VertexId> class_vertex;
  std::vector<VertexId> vmap(gobj.size());
  for (std::size_t x = 0; x < gobj.size(); ++x) {
    auto r = uf.find(x);
    auto it = class_vertex.find(r);
    if (it == class_vertex.end()) {
      std::string name = least[r];
      if (taken.count(name)) name += "@" + std::to_string(gbox[x]);
      while (taken.count(name)) name += "'";
      taken.insert(name);
      it = class_vertex.emplace(r, g.add_vertex(name)).first;
      ob.push_back(*gobj[x]);
    }
    vmap[x] = it->second;
  }

  std::vector<Morphism> hom;
  std::vector<Relation> rels;
  std::vector<ProductNode> prods;
  std::vector<EdgeId> sums;
  std::set<std::string> etaken;
  for (std::size_t i = 0; i < fillers.size(); ++i) {
    const Diagram& d = fillers[i].apex;
    const Graph& fg = d.graph();
    for (EdgeId e = 0; e < fg.edge_count(); ++e) {
      const Edge& ed = fg.edge(e);
      std::string name = ed.name;
      if (etaken.count(name)) name += "@" + std::to_string(i);
      while (etaken.count(name)) name += "'";
      etaken.insert(name);
      g.add_edge(name, vmap[voff[i] + ed.src], vmap[voff[i] + ed.tgt],
                 ed.label.empty() ? ed.name : ed.label);
      hom.push_back(d.morphism(e));
    }
    auto tr = [&](const Path& p) {
      Path q{vmap[voff[i] + p.start], {}};
      for (EdgeId e : p.edges) q.edges.push_back(eoff[i] + e);
      return q;
    };
    for (const auto& r : d.shape().relations()) rels.push_back({tr(r.lhs), tr(r.rhs)});
    for (auto p : d.products()) {
      p.vertex = vmap[voff[i] + p.vertex];
      for (auto& f : p.factors) f = vmap[voff[i] + f];
      for (auto& e : p.projections) e += eoff[i];
      auto clash = std::find_if(prods.begin(), prods.end(),
                                [&](const ProductNode& q) { return q.vertex == p.vertex; });
      if (clash == prods.end())
        prods.push_back(p);
      else if (!(*clash == p))
        throw ValidationError("product nodes merged at '" + g.vertex_name(p.vertex) +
                              "' are not identical");
    }
    for (EdgeId e : d.sum_edges()) sums.push_back(eoff[i] + e);
  }

  Diagram apex = build_diagram(Presentation(std::move(g), std::move(rels)), sem, std::move(ob),
                               std::move(hom), std::move(prods), std::move(sums),
                               BuildOptions{assume});
  std::vector<std::vector<VertexId>> legs;
  for (std::size_t o = 0; o < u.outer_ports.size(); ++o) {
    std::vector<VertexId> leg;
    for (std::size_t k = 0; k < u.outer_ports[o].size(); ++k)
      leg.push_back(vmap[slot.at({u.outer_wiring[o], k})]);
    legs.push_back(std::move(leg));
  }
  return make_open(std::move(apex), std::move(legs));
}

UWD substitute_uwd(const UWD& outer, std::span<const std::optional<UWD>> inners) {
  outer.validate();
  if (inners.size() != outer.boxes.size())
    throw ValidationError("substitution needs one entry per box");
  std::vector<std::size_t> joff;
  std::size_t nj = outer.junctions.size();
  for (std::size_t i = 0; i < inners.size(); ++i) {
    joff.push_back(nj);
    if (!inners[i]) continue;
    const UWD& v = *inners[i];
    v.validate();
    const auto& box = outer.boxes[i];
    if (v.outer_ports.size() != box.ports.size())
      throw ValidationError("inner diagram for box '" + box.name + "' has " +
                            std::to_string(v.outer_ports.size()) + " outer ports, expected " +
                            std::to_string(box.ports.size()));
    for (std::size_t p = 0; p < box.ports.size(); ++p)
      if (!same_type(v.outer_ports[p], box.ports[p]))
        throw ValidationError("inner diagram for box '" + box.name + "': outer port " +
                              std::to_string(p) + " type mismatch");
    nj += v.junctions.size();
  }
  std::vector<const PortType*> jtype;
  std::vector<std::string> jname;
  for (std::size_t j = 0; j < outer.junctions.size(); ++j) {
    jtype.push_back(&outer.junctions[j]);
    jname.push_back(outer.junction_names[j]);
  }
  for (const auto& v : inners)
    if (v)
      for (std::size_t j = 0; j < v->junctions.size(); ++j) {
        jtype.push_back(&v->junctions[j]);
        jname.push_back(v->junction_names[j]);
      }
  UnionFind uf(nj);
  for (std::size_t i = 0; i < inners.size(); ++i) {
    if (!inners[i]) continue;
    for (std::size_t p = 0; p < inners[i]->outer_ports.size(); ++p)
      uf.unite(joff[i] + inners[i]->outer_wiring[p], outer.boxes[i].wiring[p]);
  }
  UWD out;
  std::map<std::size_t, std::size_t> cls;
  std::set<std::string> taken;
  auto junction = [&](std::size_t x) {
    auto r = uf.find(x);
    auto it = cls.find(r);
    if (it != cls.end()) return it->second;
    std::string name = jname[r];
    while (taken.count(name)) name += "'";
    taken.insert(name);
    out.junction_names.push_back(name);
    out.junctions.push_back(*jtype[r]);
    return cls.emplace(r, out.junctions.size() - 1).first->second;
  };
  for (std::size_t x = 0; x < nj; ++x) {
    std::size_t j = junction(x);
    if (!same_type(*jtype[x], out.junctions[j]))
      throw ValidationError("substitution merges junctions of different types");
  }
  for (std::size_t i = 0; i < inners.size(); ++i) {
    if (!inners[i]) {
      UWD::Box b = outer.boxes[i];
      for (auto& w : b.wiring) w = junction(w);
      out.boxes.push_back(std::move(b));
      continue;
    }
    for (UWD::Box b : inners[i]->boxes) {
      for (auto& w : b.wiring) w = junction(joff[i] + w);
      out.boxes.push_back(std::move(b));
    }
  }
  out.outer_ports = outer.outer_ports;
  for (std::size_t w : outer.outer_wiring) out.outer_wiring.push_back(junction(w));
  out.validate();
  return out;
}

namespace {

struct IsoSearch {
  const OpenDiagram& a;
  const OpenDiagram& b;
  const Semantics& sem;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> afoot, bfoot;
  std::vector<std::size_t> ain, aout, bin, bout;
  std::vector<std::optional<VertexId>> map;
  std::vector<bool> used;

  IsoSearch(const OpenDiagram& a_, const OpenDiagram& b_)
      : a(a_), b(b_), sem(a_.apex.semantics()) {
    auto index = [](const OpenDiagram& d, auto& foot, auto& in, auto& out) {
      const Graph& g = d.apex.graph();
      foot.assign(g.vertex_count(), {});
      in.assign(g.vertex_count(), 0);
      out.assign(g.vertex_count(), 0);
      for (std::size_t f = 0; f < d.legs.size(); ++f)
        for (std::size_t k = 0; k < d.legs[f].size(); ++k) foot[d.legs[f][k]].emplace_back(f, k);
      for (const auto& e : g.edges()) {
        ++out[e.src];
        ++in[e.tgt];
      }
    };
    index(a, afoot, ain, aout);
    index(b, bfoot, bin, bout);
    map.assign(a.apex.graph().vertex_count(), std::nullopt);
    used.assign(b.apex.graph().vertex_count(), false);
  }

  std::vector<EdgeId> between(const Graph& g, VertexId s, VertexId t) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).src == s && g.edge(e).tgt == t) out.push_back(e);
    return out;
  }

  bool match_edges(const std::vector<EdgeId>& ea, std::vector<EdgeId> eb, std::size_t i) const {
    if (i == ea.size()) return true;
    for (std::size_t k = 0; k < eb.size(); ++k) {
      if (sem.compare(a.apex.morphism(ea[i]), b.apex.morphism(eb[k])).verdict != Verdict::Equal)
        continue;
      auto rest = eb;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      if (match_edges(ea, rest, i + 1)) return true;
    }
    return false;
  }

  bool edges_agree(VertexId u, VertexId v) const {
    auto ea = between(a.apex.graph(), u, v);
    auto eb = between(b.apex.graph(), *map[u], *map[v]);
    return ea.size() == eb.size() && match_edges(ea, eb, 0);
  }

  bool run(VertexId v) {
    if (v == map.size()) return true;
    for (VertexId w = 0; w < used.size(); ++w) {
      if (used[w] || afoot[v] != bfoot[w] || ain[v] != bin[w] || aout[v] != bout[w]) continue;
      if (!identical(a.apex.object(v), b.apex.object(w))) continue;
      map[v] = w;
      used[w] = true;
      bool ok = true;
      for (VertexId u = 0; u <= v && ok; ++u) ok = edges_agree(u, v) && edges_agree(v, u);
      if (ok && run(v + 1)) return true;
      map[v] = std::nullopt;
      used[w] = false;
    }
    return false;
  }
};

}  // namespace

bool open_isomorphic(const OpenDiagram& a, const OpenDiagram& b) {
  if (!a.apex.semantics().same_category(b.apex.semantics())) return false;
  const Graph& ga = a.apex.graph();
  const Graph& gb = b.apex.graph();
  if (ga.vertex_count() != gb.vertex_count() || ga.edge_count() != gb.edge_count()) return false;
  if (a.legs.size() != b.legs.size()) return false;
  for (std::size_t f = 0; f < a.legs.size(); ++f)
    if (a.legs[f].size() != b.legs[f].size()) return false;
  if (a.apex.products().size() != b.apex.products().size()) return false;
  IsoSearch s(a, b);
  if (!s.run(0)) return false;
  std::set<VertexId> bprod;
  for (const auto& p : b.apex.products()) bprod.insert(p.vertex);
  for (const auto& p : a.apex.products())
    if (!bprod.count(*s.map[p.vertex])) return false;
  return true;
}

std::string export_uwd_dot(const UWD& u, std::string_view name) {
  std::ostringstream os;
  os << "graph \"" << name << "\" {\n";
  for (std::size_t j = 0; j < u.junctions.size(); ++j)
    os << "  j" << j << " [shape=point, xlabel=\"" << u.junction_names[j] << "\"];\n";
  for (std::size_t i = 0; i < u.boxes.size(); ++i) {
    os << "  b" << i << " [shape=box, label=\"" << u.boxes[i].name << "\"];\n";
    for (std::size_t p = 0; p < u.boxes[i].wiring.size(); ++p)
      os << "  b" << i << " -- j" << u.boxes[i].wiring[p] << ";\n";
  }
  for (std::size_t o = 0; o < u.outer_wiring.size(); ++o) {
    os << "  o" << o << " [shape=circle, label=\"\", width=0.1];\n";
    os << "  o" << o << " -- j" << u.outer_wiring[o] << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace diagcalc
