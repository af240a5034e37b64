#include "diagcalc/diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "diagcalc/error.hpp"

namespace diagcalc {

Morphism Diagram::evaluate(const Path& p) const {
  Morphism m = semantics_.identity(ob_.at(p.start));
  for (EdgeId e : p.edges) m = semantics_.compose(m, hom_.at(e));
  return m;
}

bool Diagram::operator==(const Diagram& o) const {
  if (!(shape_ == o.shape_) || !semantics_.same_category(o.semantics_)) return false;
  if (products_ != o.products_ || sum_edges_ != o.sum_edges_) return false;
  for (std::size_t i = 0; i < ob_.size(); ++i)
    if (!identical(ob_[i], o.ob_[i])) return false;
  for (std::size_t i = 0; i < hom_.size(); ++i)
    if (!identical(hom_[i], o.hom_[i])) return false;
  return true;
}

namespace {

std::vector<std::string> product_failures(const Graph& g, const Semantics& sem,
                                          const std::vector<Object>& ob,
                                          const std::vector<Morphism>& hom,
                                          const std::vector<ProductNode>& products,
                                          const std::vector<EdgeId>& sums) {
  std::vector<std::string> out;
  std::set<VertexId> seen;
  for (const auto& p : products) {
    if (p.vertex >= g.vertex_count()) {
      out.push_back("product node outside the shape");
      continue;
    }
    const std::string node = "product node '" + g.vertex_name(p.vertex) + "'";
    if (!seen.insert(p.vertex).second) out.push_back(node + " declared twice");
    if (p.factors.size() != p.projections.size()) {
      out.push_back(node + " has " + std::to_string(p.factors.size()) + " factors but " +
                    std::to_string(p.projections.size()) + " projections");
      continue;
    }
    bool shape_ok = true;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
      if (p.factors[i] >= g.vertex_count() || p.projections[i] >= g.edge_count() ||
          g.edge(p.projections[i]).src != p.vertex || g.edge(p.projections[i]).tgt != p.factors[i]) {
        out.push_back(node + ": projection " + std::to_string(i + 1) +
                      " is not an edge to its factor");
        shape_ok = false;
      }
    }
    if (!shape_ok) continue;
    if (sem.is_linear()) {
      std::vector<LinSpace> fs;
      for (VertexId f : p.factors) fs.push_back(as_space(ob[f]));
      DirectSum ds = direct_sum(fs);
      if (as_space(ob[p.vertex]).dim != ds.space.dim) {
        out.push_back(node + " is not the direct sum of its factors (dim " +
                      std::to_string(as_space(ob[p.vertex]).dim) + " vs " +
                      std::to_string(ds.space.dim) + ")");
        continue;
      }
      for (std::size_t i = 0; i < p.factors.size(); ++i)
        if (lin_max_abs_difference(as_linear(hom[p.projections[i]]), ds.projections[i]) != 0.0)
          out.push_back(node + ": edge '" + g.edge(p.projections[i]).name +
                        "' is not the canonical projection " + std::to_string(i + 1));
    } else {
      const auto& sig = sem.signature();
      const Sort& s = as_sort(ob[p.vertex]);
      auto it = sig.products().find(s);
      std::vector<Sort> fs;
      for (VertexId f : p.factors) fs.push_back(as_sort(ob[f]));
      if (it == sig.products().end() || it->second != fs) {
        out.push_back(node + " is not the declared product of its factors");
        continue;
      }
      for (std::size_t i = 0; i < p.factors.size(); ++i) {
        auto proj = sym_normalize(as_symbolic(hom[p.projections[i]]), sig, sem.budget());
        if (proj.zero || proj.negated ||
            proj.word != std::vector<std::string>{OperatorSignature::projection_symbol(i)})
          out.push_back(node + ": edge '" + g.edge(p.projections[i]).name +
                        "' is not the canonical projection " + std::to_string(i + 1));
      }
    }
  }
  for (EdgeId e : sums) {
    if (e >= g.edge_count()) {
      out.push_back("sum edge outside the shape");
      continue;
    }
    const std::string edge = "sum edge '" + g.edge(e).name + "'";
    auto node = std::find_if(products.begin(), products.end(),
                             [&](const ProductNode& p) { return p.vertex == g.edge(e).src; });
    if (node == products.end()) {
      out.push_back(edge + " does not leave a product node");
      continue;
    }
    VertexId tgt = g.edge(e).tgt;
    bool homogeneous = std::all_of(node->factors.begin(), node->factors.end(), [&](VertexId f) {
      return f < ob.size() && sem.same_object(ob[f], ob[tgt]);
    });
    if (!homogeneous) {
      out.push_back(edge + ": factors do not all match the target object");
      continue;
    }
    if (sem.is_linear()) {
      LinMap expect = sum_map(node->factors.size(), as_space(ob[tgt]));
      if (as_space(ob[node->vertex]).dim != expect.dom.dim ||
          lin_max_abs_difference(as_linear(hom[e]), expect) != 0.0)
        out.push_back(edge + " is not the canonical sum map");
    } else {
      auto m = sym_normalize(as_symbolic(hom[e]), sem.signature(), sem.budget());
      if (m.zero || m.negated || m.word != std::vector<std::string>{OperatorSignature::sum_symbol()})
        out.push_back(edge + " is not the canonical sum map");
    }
  }
  return out;
}

}  // namespace

Diagram build_diagram(Presentation shape, Semantics semantics, std::vector<Object> ob,
                      std::vector<Morphism> hom, std::vector<ProductNode> products,
                      std::vector<EdgeId> sum_edges, BuildOptions options) {
  const Graph& g = shape.graph();
  if (ob.size() != g.vertex_count())
    throw ValidationError("object map covers " + std::to_string(ob.size()) + " of " +
                          std::to_string(g.vertex_count()) + " vertices");
  if (hom.size() != g.edge_count())
    throw ValidationError("edge map covers " + std::to_string(hom.size()) + " of " +
                          std::to_string(g.edge_count()) + " edges");
  for (VertexId v = 0; v < ob.size(); ++v) {
    try {
      semantics.validate(ob[v]);
    } catch (const TypeError& e) {
      throw ValidationError("vertex '" + g.vertex_name(v) + "': " + e.what());
    }
  }
  for (EdgeId e = 0; e < hom.size(); ++e) {
    const Edge& ed = g.edge(e);
    try {
      semantics.validate(hom[e]);
    } catch (const TypeError& err) {
      throw ValidationError("edge '" + ed.name + "': " + err.what());
    }
    if (!semantics.same_object(semantics.dom(hom[e]), ob[ed.src]))
      throw ValidationError("edge '" + ed.name + "': domain " + describe(semantics.dom(hom[e])) +
                            " does not match vertex '" + g.vertex_name(ed.src) + "' (" +
                            describe(ob[ed.src]) + ")");
    if (!semantics.same_object(semantics.cod(hom[e]), ob[ed.tgt]))
      throw ValidationError("edge '" + ed.name + "': codomain " + describe(semantics.cod(hom[e])) +
                            " does not match vertex '" + g.vertex_name(ed.tgt) + "' (" +
                            describe(ob[ed.tgt]) + ")");
  }
  auto failures = product_failures(g, semantics, ob, hom, products, sum_edges);
  if (!failures.empty()) throw ValidationError(failures.front());

  Diagram d;
  d.shape_ = std::move(shape);
  d.semantics_ = std::move(semantics);
  d.ob_ = std::move(ob);
  d.hom_ = std::move(hom);
  d.products_ = std::move(products);
  d.sum_edges_ = std::move(sum_edges);

  for (std::size_t i = 0; i < d.shape_.relations().size(); ++i) {
    const auto& r = d.shape_.relations()[i];
    auto c = d.semantics_.compare(d.evaluate(r.lhs), d.evaluate(r.rhs));
    const Graph& dg = d.shape_.graph();
    const std::string what = "relation " + format_path(dg, r.lhs) + " = " + format_path(dg, r.rhs);
    if (c.verdict == Verdict::NotEqual)
      throw ValidationError(what + " fails (discrepancy " + std::to_string(c.discrepancy) + ")");
    if (c.verdict == Verdict::NotProven) {
      if (!options.assume_unproven) throw ValidationError(what + " is not proven");
      d.assumed_ = true;
    }
  }
  return d;
}

Diagram with_semantics(const Diagram& d, const Semantics& s) {
  return build_diagram(d.shape(), s, d.objects(), d.morphisms(), d.products(), d.sum_edges(),
                       BuildOptions{d.assumed()});
}

std::string to_string(CommuteStatus s) {
  switch (s) {
    case CommuteStatus::Commutes: return "Commutes";
    case CommuteStatus::Fails: return "Fails";
    case CommuteStatus::NotProven: return "NotProven";
  }
  return "?";
}

std::size_t CommutativityReport::count(CommuteStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.status == s; }));
}

CommutativityReport check_commutes(const Diagram& d, std::size_t max_len) {
  if (max_len == 0) max_len = d.shape().edge_count();
  CommutativityReport rep;
  const std::size_t n = d.shape().vertex_count();
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = 0; b < n; ++b) {
      auto paths = enumerate_paths(d.shape(), a, b, max_len);
      if (paths.size() < 2) continue;
      std::vector<Morphism> values;
      for (const auto& p : paths) values.push_back(d.evaluate(p));
      for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
          auto c = d.semantics().compare(values[i], values[j]);
          CommuteStatus s = c.verdict == Verdict::Equal      ? CommuteStatus::Commutes
                            : c.verdict == Verdict::NotEqual ? CommuteStatus::Fails
                                                             : CommuteStatus::NotProven;
          rep.entries.push_back({paths[i], paths[j], s, c.discrepancy});
        }
    }
  }
  return rep;
}

ProductReport check_products(const Diagram& d) {
  return ProductReport{product_failures(d.graph(), d.semantics(), d.objects(), d.morphisms(),
                                        d.products(), d.sum_edges())};
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const Diagram& d, std::string_view name) {
  std::ostringstream os;
  os << "digraph " << quote(std::string(name)) << " {\n";
  const Graph& g = d.graph();
  std::set<VertexId> prod;
  std::set<EdgeId> proj;
  for (const auto& p : d.products()) {
    prod.insert(p.vertex);
    proj.insert(p.projections.begin(), p.projections.end());
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    os << "  v" << v << " [label=" << quote(g.vertex_name(v) + "\n" + describe(d.object(v)));
    if (prod.count(v)) os << ", shape=doublecircle, xlabel=\"⊚\"";
    os << "];\n";
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    os << "  v" << g.edge(e).src << " -> v" << g.edge(e).tgt << " [label=" << quote(g.edge_label(e));
    if (proj.count(e)) os << ", arrowhead=none, style=dotted";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

VertexId DiagramBuilder::object(const std::string& name, Object o) {
  semantics_.validate(o);
  VertexId v = graph_.add_vertex(name);
  ob_.push_back(std::move(o));
  return v;
}

EdgeId DiagramBuilder::edge(const std::string& name, const std::string& src,
                            const std::string& tgt, Morphism m, const std::string& label) {
  EdgeId e = graph_.add_edge(name, graph_.vertex(src), graph_.vertex(tgt), label);
  hom_.push_back(std::move(m));
  return e;
}

EdgeId DiagramBuilder::word_edge(const std::string& name, const std::string& src,
                                 const std::string& tgt, const std::vector<std::string>& tokens,
                                 const std::string& label) {
  const Sort& s = as_sort(ob_.at(graph_.vertex(src)));
  const Sort& t = as_sort(ob_.at(graph_.vertex(tgt)));
  return edge(name, src, tgt, sym_parse(semantics_.signature(), s, tokens, t), label);
}

VertexId DiagramBuilder::product(const std::string& name, const std::vector<std::string>& factors,
                                 const std::vector<std::string>& projection_names) {
  if (factors.size() != projection_names.size())
    throw ValidationError("product '" + name + "' needs one projection name per factor");
  ProductNode node;
  for (const auto& f : factors) node.factors.push_back(graph_.vertex(f));
  if (semantics_.is_linear()) {
    std::vector<LinSpace> fs;
    for (VertexId f : node.factors) fs.push_back(as_space(ob_[f]));
    DirectSum ds = direct_sum(fs);
    node.vertex = object(name, ds.space);
    for (std::size_t i = 0; i < factors.size(); ++i)
      node.projections.push_back(edge(projection_names[i], name, factors[i], ds.projections[i],
                                      "π" + std::to_string(i + 1)));
  } else {
    std::vector<Sort> fs;
    for (VertexId f : node.factors) fs.push_back(as_sort(ob_[f]));
    const auto& prods = semantics_.signature().products();
    auto it = std::find_if(prods.begin(), prods.end(), [&](const auto& kv) { return kv.second == fs; });
    if (it == prods.end()) throw ValidationError("no declared product sort for '" + name + "'");
    node.vertex = object(name, it->first);
    for (std::size_t i = 0; i < factors.size(); ++i)
      node.projections.push_back(
          word_edge(projection_names[i], name, factors[i], {OperatorSignature::projection_symbol(i)}));
  }
  products_.push_back(std::move(node));
  return products_.back().vertex;
}

EdgeId DiagramBuilder::sum(const std::string& name, const std::string& product,
                           const std::string& tgt, const std::string& label) {
  VertexId p = graph_.vertex(product);
  auto node = std::find_if(products_.begin(), products_.end(),
                           [&](const ProductNode& n) { return n.vertex == p; });
  if (node == products_.end()) throw ValidationError("'" + product + "' is not a product node");
  EdgeId e;
  if (semantics_.is_linear()) {
    LinMap s = sum_map(node->factors.size(), as_space(ob_[graph_.vertex(tgt)]));
    s.dom = as_space(ob_[p]);
    e = edge(name, product, tgt, s, label);
  } else {
    e = word_edge(name, product, tgt, {OperatorSignature::sum_symbol()}, label);
  }
  sums_.push_back(e);
  return e;
}

Path DiagramBuilder::named_path(const std::vector<std::string>& names, const std::string& at) const {
  if (names.empty()) {
    if (at.empty()) throw ShapeError("identity path needs a vertex");
    return Path::identity(graph_.vertex(at));
  }
  return make_path(graph_, names);
}

void DiagramBuilder::relation(const std::vector<std::string>& lhs,
                              const std::vector<std::string>& rhs, const std::string& at) {
  relations_.push_back({named_path(lhs, at), named_path(rhs, at)});
}

Diagram DiagramBuilder::build(BuildOptions options) const {
  return build_diagram(Presentation(graph_, relations_), semantics_, ob_, hom_, products_, sums_,
                       options);
}

}  // namespace diagcalc
