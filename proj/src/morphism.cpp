#include "diagcalc/morphism.hpp"

#include <set>

#include "diagcalc/error.hpp"

namespace diagcalc {

namespace {

NaturalityReport naturality(const Diagram& dom, const Diagram& cod, const FinFunctor& r,
                            const std::vector<Morphism>& rho) {
  NaturalityReport rep;
  const Semantics& sem = dom.semantics();
  const Graph& g = cod.graph();
  for (EdgeId f = 0; f < g.edge_count(); ++f) {
    const Edge& e = g.edge(f);
    Morphism lhs = sem.compose(dom.evaluate(r.hom[f]), rho[e.tgt]);
    Morphism rhs = sem.compose(rho[e.src], cod.morphism(f));
    auto c = sem.compare(lhs, rhs);
    rep.entries.push_back({f, c.verdict, c.discrepancy});
  }
  return rep;
}

}  // namespace

bool NaturalityReport::ok() const {
  for (const auto& e : entries)
    if (e.verdict != Verdict::Equal) return false;
  return true;
}

std::vector<std::string> NaturalityReport::failures(const Graph& cod_graph) const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (e.verdict != Verdict::Equal)
      out.push_back("naturality square at edge '" + cod_graph.edge(e.edge).name + "': " +
                    to_string(e.verdict));
  return out;
}

DiagramMorphism make_morphism(Diagram dom, Diagram cod, FinFunctor shape_map,
                              std::vector<Morphism> components, MorphismOptions options) {
  if (!dom.semantics().same_category(cod.semantics()))
    throw ValidationError("morphism between diagrams in different semantic categories");
  if (!(shape_map.dom == cod.shape()))
    throw ValidationError("shape functor domain is not the codomain diagram's shape");
  if (!(shape_map.cod == dom.shape()))
    throw ValidationError("shape functor codomain is not the domain diagram's shape");
  auto fr = check_functor(shape_map, dom.semantics().budget());
  if (!fr.ok()) throw ValidationError("shape functor: " + fr.failures.front());
  const Graph& cg = cod.graph();
  if (components.size() != cg.vertex_count())
    throw ValidationError("expected " + std::to_string(cg.vertex_count()) + " components, got " +
                          std::to_string(components.size()));
  const Semantics& sem = dom.semantics();
  for (VertexId j = 0; j < components.size(); ++j) {
    const std::string where = "component at '" + cg.vertex_name(j) + "'";
    try {
      sem.validate(components[j]);
    } catch (const TypeError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!sem.same_object(sem.dom(components[j]), dom.object(shape_map.ob[j])))
      throw ValidationError(where + ": domain does not match D(R " + cg.vertex_name(j) + ")");
    if (!sem.same_object(sem.cod(components[j]), cod.object(j)))
      throw ValidationError(where + ": codomain does not match D'(" + cg.vertex_name(j) + ")");
  }
  auto rep = naturality(dom, cod, shape_map, components);
  bool assumed = false;
  for (const auto& e : rep.entries) {
    if (e.verdict == Verdict::NotEqual)
      throw ValidationError("naturality fails at edge '" + cg.edge(e.edge).name +
                            "' (discrepancy " + std::to_string(e.discrepancy) + ")");
    if (e.verdict == Verdict::NotProven) {
      if (!options.assume_unproven)
        throw ValidationError("naturality at edge '" + cg.edge(e.edge).name + "' is not proven");
      assumed = true;
    }
  }
  bool strict = true, strong = true;
  for (const auto& c : components) {
    if (!sem.is_identity(c)) strict = false;
    if (!sem.inverse(c)) strong = false;
  }
  return DiagramMorphism{std::move(dom), std::move(cod), std::move(shape_map),
                         std::move(components), strict, strong, assumed};
}

DiagramMorphism identity_morphism(const Diagram& d) {
  std::vector<Morphism> comps;
  for (const auto& o : d.objects()) comps.push_back(d.semantics().identity(o));
  return make_morphism(d, d, FinFunctor::identity(d.shape()), std::move(comps));
}

DiagramMorphism compose_morphisms(const DiagramMorphism& m1, const DiagramMorphism& m2) {
  if (!(m1.cod == m2.dom)) throw ValidationError("compose_morphisms: cod(m1) != dom(m2)");
  FinFunctor r = compose_functors(m2.shape_map, m1.shape_map);
  const Semantics& sem = m1.dom.semantics();
  std::vector<Morphism> comps;
  for (VertexId j = 0; j < m2.components.size(); ++j)
    comps.push_back(sem.compose(m1.components[m2.shape_map.ob[j]], m2.components[j]));
  return make_morphism(m1.dom, m2.cod, std::move(r), std::move(comps),
                       MorphismOptions{m1.assumed || m2.assumed});
}

NaturalityReport check_naturality(const DiagramMorphism& m) {
  return naturality(m.dom, m.cod, m.shape_map, m.components);
}

namespace {

std::string fresh(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  taken.insert(base);
  return base;
}

}  // namespace

Collage collage(const DiagramMorphism& m) {
  const Graph& jg = m.dom.graph();
  const Graph& kg = m.cod.graph();
  const std::size_t nv = jg.vertex_count(), ne = jg.edge_count();
  Graph g;
  std::set<std::string> vnames, enames;
  for (VertexId v = 0; v < nv; ++v) g.add_vertex(fresh(jg.vertex_name(v), vnames));
  for (VertexId v = 0; v < kg.vertex_count(); ++v) g.add_vertex(fresh(kg.vertex_name(v), vnames));
  for (EdgeId e = 0; e < ne; ++e) {
    const Edge& ed = jg.edge(e);
    g.add_edge(fresh(ed.name, enames), ed.src, ed.tgt, ed.label);
  }
  for (EdgeId e = 0; e < kg.edge_count(); ++e) {
    const Edge& ed = kg.edge(e);
    g.add_edge(fresh(ed.name, enames), nv + ed.src, nv + ed.tgt, ed.label);
  }
  std::vector<EdgeId> comp_edges;
  for (VertexId j = 0; j < kg.vertex_count(); ++j)
    comp_edges.push_back(g.add_edge(fresh("rho[" + kg.vertex_name(j) + "]", enames),
                                    m.shape_map.ob[j], nv + j, "ρ_" + kg.vertex_name(j)));

  auto shift = [&](const Path& p) {
    Path q{nv + p.start, {}};
    for (EdgeId e : p.edges) q.edges.push_back(ne + e);
    return q;
  };
  std::vector<Relation> rels = m.dom.shape().relations();
  for (const auto& r : m.cod.shape().relations()) rels.push_back({shift(r.lhs), shift(r.rhs)});
  for (EdgeId f = 0; f < kg.edge_count(); ++f) {
    const Edge& ed = kg.edge(f);
    Path lhs = m.shape_map.hom[f];
    lhs.edges.push_back(comp_edges[ed.tgt]);
    Path rhs{m.shape_map.ob[ed.src], {comp_edges[ed.src], ne + f}};
    rels.push_back({lhs, rhs});
  }

  std::vector<Object> ob = m.dom.objects();
  ob.insert(ob.end(), m.cod.objects().begin(), m.cod.objects().end());
  std::vector<Morphism> hom = m.dom.morphisms();
  hom.insert(hom.end(), m.cod.morphisms().begin(), m.cod.morphisms().end());
  hom.insert(hom.end(), m.components.begin(), m.components.end());
  std::vector<ProductNode> prods = m.dom.products();
  for (auto p : m.cod.products()) {
    p.vertex += nv;
    for (auto& f : p.factors) f += nv;
    for (auto& e : p.projections) e += ne;
    prods.push_back(p);
  }
  std::vector<EdgeId> sums = m.dom.sum_edges();
  for (EdgeId e : m.cod.sum_edges()) sums.push_back(ne + e);

  Presentation shape(std::move(g), std::move(rels));
  bool assume = m.assumed || m.dom.assumed() || m.cod.assumed();
  Diagram d = build_diagram(shape, m.dom.semantics(), std::move(ob), std::move(hom),
                            std::move(prods), std::move(sums), BuildOptions{assume});

  FinFunctor din{m.dom.shape(), shape, {}, {}};
  for (VertexId v = 0; v < nv; ++v) din.ob.push_back(v);
  for (EdgeId e = 0; e < ne; ++e) din.hom.push_back(Path{jg.edge(e).src, {e}});
  FinFunctor cin{m.cod.shape(), shape, {}, {}};
  for (VertexId v = 0; v < kg.vertex_count(); ++v) cin.ob.push_back(nv + v);
  for (EdgeId e = 0; e < kg.edge_count(); ++e) cin.hom.push_back(Path{nv + kg.edge(e).src, {ne + e}});
  return Collage{std::move(d), std::move(din), std::move(cin), std::move(comp_edges)};
}

}  // namespace diagcalc
