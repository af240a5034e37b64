#include "diagcalc/specfile.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "diagcalc/error.hpp"

namespace diagcalc {

namespace {

struct Line {
  std::size_t no = 0;
  std::vector<std::string> tok;
};

// Whitespace tokens; "..." quotes; '#' at token start begins a comment; trailing '\' continues.
std::vector<Line> tokenize(std::istream& in, const std::string& source) {
  std::vector<Line> out;
  std::string raw;
  std::size_t no = 0;
  Line cur;
  bool continuing = false;
  while (std::getline(in, raw)) {
    ++no;
    if (!continuing) cur = Line{no, {}};
    continuing = false;
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '#') break;
      if (c == '"') {
        std::size_t j = raw.find('"', i + 1);
        if (j == std::string::npos) throw ParseError(source, no, "unterminated quote");
        cur.tok.push_back(raw.substr(i + 1, j - i - 1));
        i = j + 1;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      std::string t = raw.substr(i, j - i);
      i = j;
      if (t == "\\" && i >= raw.size()) {
        continuing = true;
        break;
      }
      cur.tok.push_back(std::move(t));
    }
    if (!continuing && !cur.tok.empty()) out.push_back(std::move(cur));
  }
  if (continuing && !cur.tok.empty()) out.push_back(std::move(cur));
  return out;
}

std::string quote(const std::string& s) {
  bool plain = !s.empty() && s[0] != '#' && s[0] != '"';
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) plain = false;
  return plain ? s : "\"" + s + "\"";
}

std::vector<std::string> split_on(const std::vector<std::string>& toks, std::size_t from, char sep) {
  std::string joined;
  for (std::size_t i = from; i < toks.size(); ++i) joined += toks[i] + " ";
  std::vector<std::string> parts;
  std::string part;
  for (char c : joined) {
    if (c == sep) {
      parts.push_back(part);
      part.clear();
    } else {
      part += c;
    }
  }
  parts.push_back(part);
  return parts;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

class Parser {
 public:
  Parser(SpecFile& spec, const SpecOptions& opt) : spec_(spec), opt_(opt) {}

  void run(const std::vector<Line>& lines) {
    std::size_t i = 0;
    while (i < lines.size()) {
      const Line& h = lines[i];
      const std::string& kw = h.tok[0];
      if (kw == "model") {
        model(h);
        ++i;
        continue;
      }
      static const std::set<std::string> blocks{"signature", "graph", "diagram", "morphism",
                                                "open",      "uwd",   "lift",    "pins"};
      if (!blocks.count(kw)) fail(h.no, "unknown declaration '" + kw + "'");
      std::vector<Line> body;
      std::size_t j = i + 1;
      while (j < lines.size() && lines[j].tok[0] != "end") {
        if (blocks.count(lines[j].tok[0]) || lines[j].tok[0] == "model")
          fail(lines[j].no, "missing 'end' for " + kw + " block opened at line " + std::to_string(h.no));
        body.push_back(lines[j++]);
      }
      if (j == lines.size()) fail(h.no, "missing 'end' for " + kw + " block");
      if (lines[j].tok.size() != 1) fail(lines[j].no, "'end' takes no arguments");
      block(h, body);
      i = j + 1;
    }
  }

 private:
  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ParseError(spec_.source, line, what);
  }

  std::string where(const Line& h) const {
    return spec_.source + ":" + std::to_string(h.no) + ": " + h.tok[0] + " '" +
           (h.tok.size() > 1 ? h.tok[1] : "") + "': ";
  }

  void declare(const std::string& name, std::size_t line) {
    if (!declared_.insert(name).second) fail(line, "duplicate name '" + name + "'");
    spec_.order.push_back(name);
  }

  void expect(const Line& l, std::size_t i, const std::string& t) const {
    if (i >= l.tok.size() || l.tok[i] != t)
      fail(l.no, "expected '" + t + "'" + (i < l.tok.size() ? " before '" + l.tok[i] + "'" : ""));
  }

  void arity(const Line& l, std::size_t n) const {
    if (l.tok.size() < n) fail(l.no, "'" + l.tok[0] + "' line is incomplete");
  }

  double number(const std::string& t, std::size_t line) const {
    double x = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) fail(line, "bad number '" + t + "'");
    return x;
  }

  std::size_t count(const std::string& t, std::size_t line) const {
    std::size_t x = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) fail(line, "bad count '" + t + "'");
    return x;
  }

  Eigen::VectorXd numbers(const Line& l, std::size_t from) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(l.tok.size() - std::min(from, l.tok.size())));
    for (std::size_t i = from; i < l.tok.size(); ++i) v(static_cast<Eigen::Index>(i - from)) = number(l.tok[i], l.no);
    return v;
  }

  template <class F>
  void guarded(const Line& h, F&& f) {
    try {
      f();
    } catch (const ParseError&) {
      throw;
    } catch (const ShapeError& e) {
      throw ParseError(spec_.source, h.no, std::string(h.tok[0]) + " '" + h.tok.at(1) + "': " + e.what());
    } catch (const TypeError& e) {
      throw ValidationError(where(h) + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where(h) + e.what());
    } catch (const NotAcyclicError& e) {
      throw ValidationError(where(h) + e.what());
    }
  }

  void block(const Line& h, const std::vector<Line>& body) {
    arity(h, 2);
    const std::string& kw = h.tok[0];
    guarded(h, [&] {
      if (kw == "signature") signature(h, body);
      else if (kw == "graph") graph(h, body);
      else if (kw == "diagram") diagram(h, body);
      else if (kw == "morphism") morphism(h, body);
      else if (kw == "open") open(h, body);
      else if (kw == "uwd") uwd(h, body);
      else if (kw == "lift") lift(h, body);
      else pins(h, body);
    });
  }

  std::shared_ptr<const OperatorSignature> find_signature(const std::string& n, std::size_t line) const {
    auto it = spec_.signatures.find(n);
    if (it == spec_.signatures.end()) fail(line, "unknown signature '" + n + "'");
    return it->second;
  }

  const Diagram& find_diagram(const std::string& n, std::size_t line) const {
    if (spec_.kind(n) != "diagram" && spec_.kind(n) != "open") fail(line, "unknown diagram '" + n + "'");
    return spec_.diagram(n);
  }

  void signature(const Line& h, const std::vector<Line>& body) {
    auto sig = std::make_shared<OperatorSignature>();
    for (const auto& l : body) {
      const std::string& k = l.tok[0];
      if (k == "sort") {
        for (std::size_t i = 1; i < l.tok.size(); ++i) sig->add_sort(l.tok[i]);
      } else if (k == "op") {
        // op NAME : DOM -> COD
        arity(l, 6);
        expect(l, 2, ":");
        expect(l, 4, "->");
        sig->add_op(l.tok[1], l.tok[3], l.tok[5]);
      } else if (k == "product") {
        arity(l, 4);
        expect(l, 2, "=");
        sig->add_product(l.tok[1], {l.tok.begin() + 3, l.tok.end()});
      } else if (k == "rule") {
        auto arrow = std::find(l.tok.begin(), l.tok.end(), "->");
        if (arrow == l.tok.end()) fail(l.no, "rule needs '->'");
        std::vector<std::string> lhs(l.tok.begin() + 1, arrow), rhs(arrow + 1, l.tok.end());
        if (rhs == std::vector<std::string>{"0"}) sig->add_zero_rule(lhs);
        else if (rhs == std::vector<std::string>{"id"}) sig->add_rule(lhs, {});
        else sig->add_rule(lhs, rhs);
      } else if (k == "inverse") {
        arity(l, 3);
        sig->add_inverse(l.tok[1], l.tok[2]);
      } else {
        fail(l.no, "unknown signature line '" + k + "'");
      }
    }
    declare(h.tok[1], h.no);
    spec_.signatures.emplace(h.tok[1], sig);
  }

  void graph(const Line& h, const std::vector<Line>& body) {
    std::size_t n = 0;
    std::vector<std::string> names;
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    auto vertex = [&](const std::string& t, std::size_t line) {
      auto it = std::find(names.begin(), names.end(), t);
      if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
      std::size_t v = count(t, line);
      if (v >= n) fail(line, "vertex " + t + " out of range");
      return v;
    };
    for (const auto& l : body) {
      const std::string& k = l.tok[0];
      if (k == "vertices") {
        arity(l, 2);
        n = count(l.tok[1], l.no);
      } else if (k == "names") {
        names.assign(l.tok.begin() + 1, l.tok.end());
        n = names.size();
      } else if (k == "edge") {
        arity(l, 3);
        double w = l.tok.size() > 3 ? number(l.tok[3], l.no) : 1.0;
        edges.emplace_back(vertex(l.tok[1], l.no), vertex(l.tok[2], l.no), w);
      } else {
        fail(l.no, "unknown graph line '" + k + "'");
      }
    }
    declare(h.tok[1], h.no);
    spec_.graphs.emplace(h.tok[1], SWGraph::from_undirected(n, edges, names));
  }

  // Linear maps: rows "a b ; c d", "entries i j v ; ...", identity, zero, projection K, sum.
  LinMap linear_body(const Line& l, std::size_t from, const LinSpace& dom, const LinSpace& cod,
                     const std::vector<LinSpace>* factors) const {
    const auto& t = l.tok;
    std::string head = from < t.size() ? t[from] : "";
    if (head == "identity") {
      if (dom.dim != cod.dim) fail(l.no, "identity between spaces of different dimension");
      SparseMatrix m(static_cast<Eigen::Index>(cod.dim), static_cast<Eigen::Index>(dom.dim));
      m.setIdentity();
      return LinMap::from_sparse(dom, cod, m);
    }
    if (head == "zero") return LinMap::zero(dom, cod);
    if (head == "projection" || head == "sum") {
      if (!factors) fail(l.no, "'" + head + "' needs a source object declared as a product");
      DirectSum ds = direct_sum(*factors);
      if (head == "sum") {
        LinMap s = sum_map(factors->size(), cod);
        s.dom = dom;
        return s;
      }
      if (from + 1 >= t.size()) fail(l.no, "projection needs an index");
      std::size_t k = count(t[from + 1], l.no);
      if (k == 0 || k > factors->size()) fail(l.no, "projection index out of range");
      LinMap p = ds.projections[k - 1];
      p.dom = dom;
      p.cod = cod;
      return p;
    }
    if (head == "entries") {
      std::vector<Eigen::Triplet<double>> trip;
      for (const auto& part : split_on(t, from + 1, ';')) {
        auto w = words(part);
        if (w.empty()) continue;
        if (w.size() != 3) fail(l.no, "entries are 'row col value' triples");
        std::size_t r = count(w[0], l.no), c = count(w[1], l.no);
        if (r >= cod.dim || c >= dom.dim) fail(l.no, "entry outside the matrix");
        trip.emplace_back(static_cast<int>(r), static_cast<int>(c), number(w[2], l.no));
      }
      SparseMatrix m(static_cast<Eigen::Index>(cod.dim), static_cast<Eigen::Index>(dom.dim));
      m.setFromTriplets(trip.begin(), trip.end());
      return LinMap::from_sparse(dom, cod, m);
    }
    auto rows = split_on(t, from, ';');
    if (cod.dim == 0 && rows.size() == 1 && words(rows[0]).empty()) return LinMap::zero(dom, cod);
    if (rows.size() != cod.dim)
      fail(l.no, "expected " + std::to_string(cod.dim) + " rows, got " + std::to_string(rows.size()));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(cod.dim), static_cast<Eigen::Index>(dom.dim));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto w = words(rows[r]);
      if (w.size() != dom.dim)
        fail(l.no, "row " + std::to_string(r + 1) + " has " + std::to_string(w.size()) + " entries, expected " +
                       std::to_string(dom.dim));
      for (std::size_t c = 0; c < w.size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(w[c], l.no);
    }
    return LinMap::from_dense(dom, cod, m);
  }

  SymMorphism symbolic_body(const Line& l, std::size_t from, const OperatorSignature& sig,
                            const Sort& dom, const Sort& cod) const {
    std::vector<std::string> toks(l.tok.begin() + static_cast<long>(std::min(from, l.tok.size())), l.tok.end());
    if (toks.empty()) fail(l.no, "missing operator word");
    if (toks[0] == "identity") return SymMorphism::identity(dom);
    if (toks[0] == "zero") return SymMorphism::zero_map(dom, cod);
    if (toks[0] == "projection") {
      if (toks.size() != 2) fail(l.no, "projection needs an index");
      std::size_t k = count(toks[1], l.no);
      if (k == 0) fail(l.no, "projection index out of range");
      toks = {OperatorSignature::projection_symbol(k - 1)};
    } else if (toks[0] == "sum") {
      toks = {OperatorSignature::sum_symbol()};
    }
    return sym_parse(sig, dom, toks, cod);
  }

  void diagram(const Line& h, const std::vector<Line>& body) {
    arity(h, 3);
    Semantics sem = Semantics::linear(opt_.tol);
    if (h.tok[2] == "symbolic") {
      arity(h, 4);
      sem = Semantics::symbolic(find_signature(h.tok[3], h.no), opt_.budget);
    } else if (h.tok[2] != "linear") {
      fail(h.no, "diagram kind must be 'linear' or 'symbolic'");
    }
    Graph g;
    std::vector<Object> ob;
    std::map<VertexId, std::vector<VertexId>> declared_products;
    std::vector<std::pair<const Line*, std::size_t>> edge_lines;  // line, body start
    std::vector<const Line*> product_lines, sum_lines, relation_lines;
    bool assume = false;
    auto vertex = [&](const std::string& n, std::size_t line) {
      auto v = g.find_vertex(n);
      if (!v) fail(line, "unknown object '" + n + "'");
      return *v;
    };
    for (const auto& l : body) {
      const std::string& k = l.tok[0];
      if (k == "object") {
        arity(l, 3);
        if (g.find_vertex(l.tok[1])) fail(l.no, "duplicate object '" + l.tok[1] + "'");
        if (l.tok[2] == "=") {
          expect(l, 3, "product");
          std::vector<VertexId> fs;
          for (std::size_t i = 4; i < l.tok.size(); ++i) fs.push_back(vertex(l.tok[i], l.no));
          if (sem.is_linear()) {
            std::vector<LinSpace> spaces;
            for (VertexId f : fs) spaces.push_back(as_space(ob[f]));
            ob.push_back(direct_sum(spaces).space);
          } else {
            std::vector<Sort> sorts;
            for (VertexId f : fs) sorts.push_back(as_sort(ob[f]));
            const auto& prods = sem.signature().products();
            auto it = std::find_if(prods.begin(), prods.end(), [&](const auto& kv) { return kv.second == sorts; });
            if (it == prods.end()) fail(l.no, "no declared product sort for these factors");
            ob.push_back(it->first);
          }
          declared_products[g.add_vertex(l.tok[1])] = fs;
        } else if (sem.is_linear()) {
          LinSpace s{count(l.tok[2], l.no), "", {}};
          std::size_t i = 3;
          if (i < l.tok.size() && l.tok[i] == "label") {
            arity(l, i + 2);
            s.label = l.tok[i + 1];
            i += 2;
          }
          if (i < l.tok.size()) {
            expect(l, i, "basis");
            s.basis.assign(l.tok.begin() + static_cast<long>(i) + 1, l.tok.end());
            if (s.basis.size() != s.dim) fail(l.no, "basis has the wrong number of names");
          }
          g.add_vertex(l.tok[1]);
          ob.push_back(s);
        } else {
          if (l.tok.size() != 3) fail(l.no, "symbolic object is 'object NAME SORT'");
          g.add_vertex(l.tok[1]);
          ob.push_back(l.tok[2]);
        }
      } else if (k == "edge") {
        // edge NAME : SRC -> TGT [label L] = BODY
        arity(l, 7);
        expect(l, 2, ":");
        expect(l, 4, "->");
        std::size_t i = 6;
        std::string label;
        if (l.tok[i] == "label") {
          arity(l, i + 3);
          label = l.tok[i + 1];
          i += 2;
        }
        expect(l, i, "=");
        if (g.find_edge(l.tok[1])) fail(l.no, "duplicate edge '" + l.tok[1] + "'");
        g.add_edge(l.tok[1], vertex(l.tok[3], l.no), vertex(l.tok[5], l.no), label);
        edge_lines.emplace_back(&l, i + 1);
      } else if (k == "product") {
        product_lines.push_back(&l);
      } else if (k == "sum") {
        sum_lines.push_back(&l);
      } else if (k == "relation") {
        relation_lines.push_back(&l);
      } else if (k == "assume") {
        assume = true;
      } else {
        fail(l.no, "unknown diagram line '" + k + "'");
      }
    }
    std::vector<Morphism> hom;
    for (EdgeId e = 0; e < edge_lines.size(); ++e) {
      const auto& [l, from] = edge_lines[e];
      const Edge& ed = g.edge(e);
      auto fit = declared_products.find(ed.src);
      if (sem.is_linear()) {
        std::vector<LinSpace> fs;
        if (fit != declared_products.end())
          for (VertexId f : fit->second) fs.push_back(as_space(ob[f]));
        hom.push_back(linear_body(*l, from, as_space(ob[ed.src]), as_space(ob[ed.tgt]),
                                  fit != declared_products.end() ? &fs : nullptr));
      } else {
        hom.push_back(symbolic_body(*l, from, sem.signature(), as_sort(ob[ed.src]), as_sort(ob[ed.tgt])));
      }
    }
    std::vector<ProductNode> products;
    for (const Line* l : product_lines) {
      // product V = P1 P2 ...
      arity(*l, 4);
      expect(*l, 2, "=");
      ProductNode node;
      node.vertex = vertex(l->tok[1], l->no);
      for (std::size_t i = 3; i < l->tok.size(); ++i) {
        auto e = g.find_edge(l->tok[i]);
        if (!e) fail(l->no, "unknown edge '" + l->tok[i] + "'");
        node.projections.push_back(*e);
        node.factors.push_back(g.edge(*e).tgt);
      }
      products.push_back(node);
    }
    std::vector<EdgeId> sums;
    for (const Line* l : sum_lines) {
      for (std::size_t i = 1; i < l->tok.size(); ++i) {
        auto e = g.find_edge(l->tok[i]);
        if (!e) fail(l->no, "unknown edge '" + l->tok[i] + "'");
        sums.push_back(*e);
      }
    }
    std::vector<Relation> rels;
    for (const Line* l : relation_lines) {
      auto eq = std::find(l->tok.begin(), l->tok.end(), "=");
      if (eq == l->tok.end()) fail(l->no, "relation needs '='");
      auto side = [&](std::vector<std::string> names) {
        if (!names.empty() && names[0] == "id") {
          if (names.size() != 2) fail(l->no, "identity path is 'id VERTEX'");
          return Path::identity(vertex(names[1], l->no));
        }
        if (names.empty()) fail(l->no, "empty path in relation");
        for (const auto& n : names)
          if (!g.find_edge(n)) fail(l->no, "unknown edge '" + n + "'");
        return make_path(g, names);
      };
      rels.push_back({side({l->tok.begin() + 1, eq}), side({eq + 1, l->tok.end()})});
    }
    Diagram d = build_diagram(Presentation(std::move(g), std::move(rels)), sem, std::move(ob), std::move(hom),
                              std::move(products), std::move(sums), BuildOptions{assume});
    declare(h.tok[1], h.no);
    spec_.diagrams.emplace(h.tok[1], std::move(d));
  }

  void morphism(const Line& h, const std::vector<Line>& body) {
    // morphism NAME : DOM -> COD
    arity(h, 6);
    expect(h, 2, ":");
    expect(h, 4, "->");
    const Diagram& dom = find_diagram(h.tok[3], h.no);
    const Diagram& cod = find_diagram(h.tok[5], h.no);
    const Graph& jg = dom.graph();
    const Graph& kg = cod.graph();
    std::vector<std::optional<VertexId>> ob(kg.vertex_count());
    std::vector<std::optional<Path>> hom(kg.edge_count());
    std::vector<const Line*> comp_lines(kg.vertex_count(), nullptr);
    bool assume = false;
    auto cod_vertex = [&](const std::string& n, std::size_t line) {
      auto v = kg.find_vertex(n);
      if (!v) fail(line, "unknown codomain object '" + n + "'");
      return *v;
    };
    for (const auto& l : body) {
      const std::string& k = l.tok[0];
      if (k == "object") {
        arity(l, 4);
        expect(l, 2, "->");
        auto v = jg.find_vertex(l.tok[3]);
        if (!v) fail(l.no, "unknown domain object '" + l.tok[3] + "'");
        ob[cod_vertex(l.tok[1], l.no)] = *v;
      } else if (k == "arrow") {
        arity(l, 4);
        expect(l, 2, "->");
        auto e = kg.find_edge(l.tok[1]);
        if (!e) fail(l.no, "unknown codomain edge '" + l.tok[1] + "'");
        if (l.tok[3] == "id") {
          hom[*e] = Path{};  // resolved once the object map is known
          hom[*e]->start = static_cast<VertexId>(-1);
        } else {
          std::vector<std::string> names(l.tok.begin() + 3, l.tok.end());
          for (const auto& n : names)
            if (!jg.find_edge(n)) fail(l.no, "unknown domain edge '" + n + "'");
          hom[*e] = make_path(jg, names);
        }
      } else if (k == "component") {
        arity(l, 4);
        expect(l, 2, "=");
        comp_lines[cod_vertex(l.tok[1], l.no)] = &l;
      } else if (k == "assume") {
        assume = true;
      } else {
        fail(l.no, "unknown morphism line '" + k + "'");
      }
    }
    FinFunctor r{cod.shape(), dom.shape(), {}, {}};
    for (VertexId j = 0; j < ob.size(); ++j) {
      if (!ob[j]) fail(h.no, "object '" + kg.vertex_name(j) + "' is not mapped");
      r.ob.push_back(*ob[j]);
    }
    for (EdgeId e = 0; e < hom.size(); ++e) {
      if (!hom[e]) fail(h.no, "edge '" + kg.edge(e).name + "' is not mapped");
      Path p = *hom[e];
      if (p.start == static_cast<VertexId>(-1)) p = Path::identity(r.ob[kg.edge(e).src]);
      r.hom.push_back(p);
    }
    const Semantics& sem = dom.semantics();
    std::vector<Morphism> comps;
    for (VertexId j = 0; j < kg.vertex_count(); ++j) {
      const Line* l = comp_lines[j];
      if (!l) fail(h.no, "component at '" + kg.vertex_name(j) + "' is missing");
      const Object& a = dom.object(r.ob[j]);
      const Object& b = cod.object(j);
      if (sem.is_linear())
        comps.push_back(linear_body(*l, 3, as_space(a), as_space(b), nullptr));
      else
        comps.push_back(symbolic_body(*l, 3, sem.signature(), as_sort(a), as_sort(b)));
    }
    auto m = make_morphism(dom, cod, std::move(r), std::move(comps), MorphismOptions{assume});
    declare(h.tok[1], h.no);
    spec_.morphisms.emplace(h.tok[1], std::move(m));
  }

  void open(const Line& h, const std::vector<Line>& body) {
    arity(h, 4);
    expect(h, 2, ":");
    const Diagram& d = find_diagram(h.tok[3], h.no);
    std::vector<std::vector<std::string>> feet;
    for (const auto& l : body) {
      if (l.tok[0] != "foot") fail(l.no, "unknown open line '" + l.tok[0] + "'");
      for (std::size_t i = 1; i < l.tok.size(); ++i)
        if (!d.graph().find_vertex(l.tok[i])) fail(l.no, "unknown object '" + l.tok[i] + "'");
      feet.emplace_back(l.tok.begin() + 1, l.tok.end());
    }
    auto od = make_open(d, feet);
    declare(h.tok[1], h.no);
    spec_.opens.emplace(h.tok[1], std::move(od));
  }

  void uwd(const Line& h, const std::vector<Line>& body) {
    std::shared_ptr<const OperatorSignature> sig;
    if (h.tok.size() > 2) {
      if (h.tok[2] == "symbolic") {
        arity(h, 4);
        sig = find_signature(h.tok[3], h.no);
      } else if (h.tok[2] != "linear") {
        fail(h.no, "uwd kind must be 'linear' or 'symbolic'");
      }
    }
    UwdSpec s;
    for (const auto& l : body) {
      const std::string& k = l.tok[0];
      if (k == "junction") {
        // junction J = ITEM [, ITEM ...]; ITEM is DIM [LABEL] or SORT
        arity(l, 3);
        expect(l, 2, "=");
        PortType t;
        std::vector<std::vector<std::string>> items(1);
        for (std::size_t i = 3; i < l.tok.size(); ++i) {
          if (l.tok[i] == ",") items.emplace_back();
          else items.back().push_back(l.tok[i]);
        }
        for (const auto& it : items) {
          if (it.empty()) fail(l.no, "empty junction type item");
          if (sig) {
            if (it.size() != 1 || !sig->has_sort(it[0])) fail(l.no, "unknown sort in junction type");
            t.push_back(it[0]);
          } else {
            if (it.size() > 2) fail(l.no, "linear junction item is 'DIM [LABEL]'");
            t.push_back(LinSpace{count(it[0], l.no), it.size() == 2 ? it[1] : "", {}});
          }
        }
        s.junctions.emplace_back(l.tok[1], t);
      } else if (k == "box") {
        arity(l, 3);
        expect(l, 2, ":");
        s.boxes.emplace_back(l.tok[1], std::vector<std::string>(l.tok.begin() + 3, l.tok.end()));
      } else if (k == "outer") {
        s.outer.assign(l.tok.begin() + 1, l.tok.end());
      } else {
        fail(l.no, "unknown uwd line '" + k + "'");
      }
    }
    UWD u = make_uwd(s);
    declare(h.tok[1], h.no);
    spec_.uwds.emplace(h.tok[1], std::move(u));
  }

  void lift(const Line& h, const std::vector<Line>& body) {
    arity(h, 4);
    expect(h, 2, ":");
    const Diagram& d = find_diagram(h.tok[3], h.no);
    std::vector<std::optional<Eigen::VectorXd>> vals(d.graph().vertex_count());
    for (const auto& l : body) {
      if (l.tok[0] != "value") fail(l.no, "unknown lift line '" + l.tok[0] + "'");
      arity(l, 3);
      expect(l, 2, "=");
      auto v = d.graph().find_vertex(l.tok[1]);
      if (!v) fail(l.no, "unknown object '" + l.tok[1] + "'");
      Eigen::VectorXd x = numbers(l, 3);
      if (!d.semantics().is_linear()) fail(l.no, "lifts need a linear diagram");
      if (static_cast<std::size_t>(x.size()) != d.dim(*v))
        fail(l.no, "object '" + l.tok[1] + "' has dimension " + std::to_string(d.dim(*v)));
      vals[*v] = x;
    }
    Lift out;
    for (VertexId v = 0; v < vals.size(); ++v) {
      if (!vals[v]) {
        if (d.dim(v) != 0) fail(h.no, "no value for object '" + d.graph().vertex_name(v) + "'");
        vals[v] = Eigen::VectorXd(0);
      }
      out.elements.push_back(*vals[v]);
    }
    declare(h.tok[1], h.no);
    spec_.lifts.emplace(h.tok[1], NamedLift{h.tok[3], std::move(out)});
  }

  void pins(const Line& h, const std::vector<Line>& body) {
    arity(h, 4);
    expect(h, 2, ":");
    const Diagram& d = find_diagram(h.tok[3], h.no);
    if (!d.semantics().is_linear()) fail(h.no, "pins need a linear diagram");
    Pinning out;
    for (const auto& l : body) {
      // pin V [at i j ...] = values
      if (l.tok[0] != "pin") fail(l.no, "unknown pins line '" + l.tok[0] + "'");
      arity(l, 3);
      auto v = d.graph().find_vertex(l.tok[1]);
      if (!v) fail(l.no, "unknown object '" + l.tok[1] + "'");
      auto eq = std::find(l.tok.begin(), l.tok.end(), "=");
      if (eq == l.tok.end()) fail(l.no, "pin needs '='");
      Pin p;
      p.vertex = *v;
      std::size_t at = 2;
      if (l.tok[at] == "at") {
        for (auto it = l.tok.begin() + 3; it != eq; ++it) {
          std::size_t i = count(*it, l.no);
          if (i >= d.dim(*v)) fail(l.no, "pin index out of range");
          p.indices.push_back(i);
        }
      } else if (l.tok.begin() + at != eq) {
        fail(l.no, "expected 'at' or '='");
      }
      p.values = numbers(l, static_cast<std::size_t>(eq - l.tok.begin()) + 1);
      std::size_t want = p.indices.empty() ? d.dim(*v) : p.indices.size();
      if (static_cast<std::size_t>(p.values.size()) != want)
        fail(l.no, "expected " + std::to_string(want) + " values");
      out.push_back(std::move(p));
    }
    declare(h.tok[1], h.no);
    spec_.pinnings.emplace(h.tok[1], NamedPins{h.tok[3], std::move(out)});
  }

  void model(const Line& l) {
    arity(l, 3);
    std::map<std::string, std::string> params;
    for (std::size_t i = 3; i < l.tok.size(); ++i) {
      auto eq = l.tok[i].find('=');
      if (eq == std::string::npos || eq == 0) fail(l.no, "model parameters are key=value");
      if (!params.emplace(l.tok[i].substr(0, eq), l.tok[i].substr(eq + 1)).second)
        fail(l.no, "duplicate parameter '" + l.tok[i].substr(0, eq) + "'");
    }
    for (const std::string& n : {l.tok[1], l.tok[1] + ".dom", l.tok[1] + ".cod", l.tok[1] + ".sig"})
      if (declared_.count(n)) fail(l.no, "duplicate name '" + n + "'");
    guarded(l, [&] {
      try {
        instantiate_model(spec_, l.tok[1], l.tok[2], params, opt_);
      } catch (const std::invalid_argument& e) {
        fail(l.no, e.what());
      }
    });
    for (const auto& n : spec_.order) declared_.insert(n);
  }

  SpecFile& spec_;
  const SpecOptions& opt_;
  std::set<std::string> declared_;
};

}  // namespace

const Diagram& SpecFile::diagram(const std::string& name) const {
  if (auto it = diagrams.find(name); it != diagrams.end()) return it->second;
  if (auto it = opens.find(name); it != opens.end()) return it->second.apex;
  throw std::invalid_argument("'" + name + "' is not a diagram");
}

const DiagramMorphism& SpecFile::morphism(const std::string& name) const {
  if (auto it = morphisms.find(name); it != morphisms.end()) return it->second;
  throw std::invalid_argument("'" + name + "' is not a morphism");
}

const OpenDiagram& SpecFile::open(const std::string& name) const {
  if (auto it = opens.find(name); it != opens.end()) return it->second;
  throw std::invalid_argument("'" + name + "' is not an open diagram");
}

const UWD& SpecFile::uwd(const std::string& name) const {
  if (auto it = uwds.find(name); it != uwds.end()) return it->second;
  throw std::invalid_argument("'" + name + "' is not a UWD");
}

std::string SpecFile::kind(const std::string& name) const {
  if (signatures.count(name)) return "signature";
  if (graphs.count(name)) return "graph";
  if (diagrams.count(name)) return "diagram";
  if (morphisms.count(name)) return "morphism";
  if (opens.count(name)) return "open";
  if (uwds.count(name)) return "uwd";
  if (lifts.count(name)) return "lift";
  if (pinnings.count(name)) return "pins";
  return {};
}

SpecFile parse_spec(std::istream& in, const std::string& source, const SpecOptions& options) {
  SpecFile spec;
  spec.source = source;
  Parser(spec, options).run(tokenize(in, source));
  return spec;
}

SpecFile load_spec(const std::string& path, const SpecOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_spec(in, path, options);
}

// ---- models ----

const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> catalog{
      {"heat", "diagram", "graph T [k]", "discrete heat equation u -> u_dot via forward difference and Laplacian"},
      {"dirichlet", "morphism", "graph omega", "discrete Dirichlet problem on the one-step closure of omega"},
      {"diffusion", "open", "graph k T", "diffusion: Fick's law and conservation in one diagram, exposing C"},
      {"fick", "open", "graph k T", "Fick's first law C -> dC -> phi, exposing C and phi"},
      {"conservation", "open", "graph T", "conservation of mass, exposing C and phi"},
      {"advection", "open", "graph v T", "advective flux -iota_v of the density, exposing C and phi"},
      {"superposition", "open", "graph T", "sum of two fluxes through a product node"},
      {"conservation-source", "open", "graph T", "conservation with a source term, exposing C, phi and S"},
      {"reaction", "open", "graph beta T", "linear reaction source S = beta C"},
      {"transport-uwd", "uwd", "graph T", "wiring of flux and conservation boxes"},
      {"advection-diffusion-uwd", "uwd", "graph T", "wiring of diffusive and advective fluxes"},
      {"open-transport-uwd", "uwd", "graph T", "transport with an exposed source"},
      {"transformation-uwd", "uwd", "graph T", "transport coupled to a reaction"},
      {"diffusion-to-heat", "morphism", "graph k T", "strict morphism from diffusion to heat with k times the Laplacian"},
      {"maxwell-house", "diagram", "", "symbolic Maxwell equations with two product nodes"},
      {"static-maxwell-faraday", "morphism", "", "symbolic potentials to fields morphism"},
      {"potentials-zero", "diagram", "", "symbolic potentials diagram with a zero object"},
      {"lie-derivative", "morphism", "[rule]", "symbolic triangle onto the Lie derivative arrow"},
  };
  return catalog;
}

namespace {

std::string param(const std::map<std::string, std::string>& p, const std::string& key,
                  const std::optional<std::string>& fallback = std::nullopt) {
  auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw std::invalid_argument("missing model parameter '" + key + "'");
}

double param_number(const std::map<std::string, std::string>& p, const std::string& key,
                    const std::optional<std::string>& fallback = std::nullopt) {
  std::string s = param(p, key, fallback);
  double x = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("parameter '" + key + "' is not a number");
  return x;
}

std::size_t param_count(const std::map<std::string, std::string>& p, const std::string& key,
                        const std::optional<std::string>& fallback = std::nullopt) {
  std::string s = param(p, key, fallback);
  std::size_t x = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("parameter '" + key + "' is not a count");
  return x;
}

std::vector<std::string> comma_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

SWGraph param_graph(const SpecFile& spec, const std::map<std::string, std::string>& p) {
  std::string g = param(p, "graph");
  if (auto it = spec.graphs.find(g); it != spec.graphs.end()) return it->second;
  auto colon = g.find(':');
  if (colon != std::string::npos) {
    std::map<std::string, std::string> q{{"n", g.substr(colon + 1)}};
    std::size_t n = param_count(q, "n");
    std::string kind = g.substr(0, colon);
    if (kind == "path") return path_graph(n);
    if (kind == "cycle") return cycle_graph(n);
    if (kind == "complete") return complete_graph(n);
  }
  throw std::invalid_argument("unknown graph '" + g + "'");
}

void check_params(const std::map<std::string, std::string>& p, const std::string& allowed_str) {
  std::set<std::string> allowed;
  std::istringstream is(allowed_str);
  std::string w;
  while (is >> w) {
    if (w.front() == '[') w = w.substr(1, w.size() - 2);
    allowed.insert(w);
  }
  for (const auto& [k, v] : p)
    if (!allowed.count(k)) throw std::invalid_argument("unknown model parameter '" + k + "'");
}

}  // namespace

void instantiate_model(SpecFile& spec, const std::string& name, const std::string& kind,
                       const std::map<std::string, std::string>& p, const SpecOptions& options) {
  const auto& cat = model_catalog();
  auto info = std::find_if(cat.begin(), cat.end(), [&](const ModelInfo& m) { return m.kind == kind; });
  if (info == cat.end()) throw std::invalid_argument("unknown model kind '" + kind + "'");
  check_params(p, info->params);
  auto tune = [&](const Diagram& d) {
    Semantics s = d.semantics().is_linear() ? d.semantics().with_tolerance(options.tol)
                                            : d.semantics().with_budget(options.budget);
    return with_semantics(d, s);
  };
  auto add_diagram = [&](const std::string& n, const Diagram& d) {
    if (!d.semantics().is_linear()) {
      bool known = false;
      for (const auto& [sn, sig] : spec.signatures)
        if (*sig == d.semantics().signature()) known = true;
      if (!known) {
        spec.signatures.emplace(name + ".sig", d.semantics().signature_ptr());
        spec.order.push_back(name + ".sig");
      }
    }
    spec.diagrams.emplace(n, tune(d));
    spec.order.push_back(n);
  };
  auto add_morphism = [&](DiagramMorphism m) {
    add_diagram(name + ".dom", m.dom);
    add_diagram(name + ".cod", m.cod);
    m.dom = spec.diagrams.at(name + ".dom");
    m.cod = spec.diagrams.at(name + ".cod");
    spec.morphisms.emplace(name, std::move(m));
    spec.order.push_back(name);
  };
  auto add_open = [&](OpenDiagram o) {
    o.apex = tune(o.apex);
    spec.opens.emplace(name, std::move(o));
    spec.order.push_back(name);
  };
  auto add_uwd = [&](UWD u) {
    spec.uwds.emplace(name, std::move(u));
    spec.order.push_back(name);
  };

  if (kind == "maxwell-house") return add_diagram(name, model_maxwell_house());
  if (kind == "potentials-zero") return add_diagram(name, model_potentials_with_zero());
  if (kind == "static-maxwell-faraday") return add_morphism(model_static_maxwell_faraday());
  if (kind == "lie-derivative") {
    std::string r = param(p, "rule", std::string("true"));
    if (r != "true" && r != "false") throw std::invalid_argument("rule must be true or false");
    return add_morphism(model_lie_derivative(r == "true"));
  }
  SWGraph g = param_graph(spec, p);
  if (kind == "dirichlet") {
    std::vector<std::size_t> omega;
    std::map<std::string, std::string> q;
    for (const auto& s : comma_list(param(p, "omega"))) {
      q["x"] = s;
      omega.push_back(param_count(q, "x"));
    }
    return add_morphism(model_dirichlet(g, omega));
  }
  std::size_t T = param_count(p, "T");
  if (kind == "heat") return add_diagram(name, model_heat(g, T, param_number(p, "k", std::string("1"))));
  if (kind == "diffusion") return add_open(model_diffusion(g, param_number(p, "k"), T));
  if (kind == "fick") return add_open(model_fick(g, param_number(p, "k"), T));
  if (kind == "conservation") return add_open(model_conservation(g, T));
  if (kind == "superposition") return add_open(model_superposition(g, T));
  if (kind == "conservation-source") return add_open(model_conservation_with_source(g, T));
  if (kind == "reaction") return add_open(model_reaction(g, param_number(p, "beta"), T));
  if (kind == "advection") {
    std::vector<double> v;
    std::map<std::string, std::string> q;
    for (const auto& s : comma_list(param(p, "v"))) {
      q["v"] = s;
      v.push_back(param_number(q, "v"));
    }
    if (v.size() == 1) v.assign(g.oriented().size(), v[0]);
    return add_open(model_advection(g, v, T));
  }
  if (kind == "transport-uwd") return add_uwd(transport_uwd(g, T));
  if (kind == "advection-diffusion-uwd") return add_uwd(advection_diffusion_flux_uwd(g, T));
  if (kind == "open-transport-uwd") return add_uwd(open_transport_uwd(g, T));
  if (kind == "transformation-uwd") return add_uwd(transformation_uwd(g, T));
  return add_morphism(model_diffusion_to_heat(g, param_number(p, "k"), T));
}

// ---- serialization ----

std::string format_number(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string linear_text(const LinMap& f) {
  const auto rows = f.matrix.rows(), cols = f.matrix.cols();
  if (f.matrix.nonZeros() == 0) return "zero";
  Eigen::MatrixXd m = f.dense();
  if (rows == cols && m == Eigen::MatrixXd::Identity(rows, cols)) return "identity";
  std::ostringstream os;
  if (static_cast<Eigen::Index>(f.matrix.nonZeros()) * 2 < rows * cols) {
    os << "entries";
    bool first = true;
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r)
        if (m(r, c) != 0.0) {
          os << (first ? " " : " ; ") << r << " " << c << " " << format_number(m(r, c));
          first = false;
        }
    return os.str();
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (r) os << " ;";
    for (Eigen::Index c = 0; c < cols; ++c) os << (r || c ? " " : "") << format_number(m(r, c));
  }
  return os.str();
}

std::string symbolic_text(const SymMorphism& m) {
  if (m.zero) return "0";
  if (m.word.empty()) return m.negated ? "-id" : "id";
  std::string s = m.negated ? "-" : "";
  for (std::size_t i = 0; i < m.word.size(); ++i) s += (i ? " " : "") + quote(m.word[i]);
  return s;
}

std::string morphism_text(const Morphism& m) {
  if (auto* f = std::get_if<LinMap>(&m)) return linear_text(*f);
  return symbolic_text(std::get<SymMorphism>(m));
}

std::string object_text(const Object& o) {
  if (auto* s = std::get_if<LinSpace>(&o)) {
    std::string t = std::to_string(s->dim);
    if (!s->label.empty()) t += " label " + quote(s->label);
    if (!s->basis.empty()) {
      t += " basis";
      for (const auto& b : s->basis) t += " " + quote(b);
    }
    return t;
  }
  return quote(std::get<Sort>(o));
}

std::string path_text(const Graph& g, const Path& p) {
  if (p.edges.empty()) return "id " + quote(g.vertex_name(p.start));
  std::string s;
  for (std::size_t i = 0; i < p.edges.size(); ++i) s += (i ? " " : "") + quote(g.edge(p.edges[i]).name);
  return s;
}

}  // namespace

std::string serialize_signature(const std::string& name, const OperatorSignature& sig) {
  std::ostringstream os;
  os << "signature " << quote(name) << "\n";
  std::set<Sort> product_sorts;
  for (const auto& [p, f] : sig.products()) product_sorts.insert(p);
  // Sorts in declaration order; a product sort is declared by its product line.
  std::vector<Sort> pending;
  std::set<Sort> emitted_products;
  auto flush = [&] {
    if (pending.empty()) return;
    os << "  sort";
    for (const auto& s : pending) os << " " << quote(s);
    os << "\n";
    pending.clear();
  };
  auto emit_product = [&](const Sort& p) {
    flush();
    os << "  product " << quote(p) << " =";
    for (const auto& f : sig.products().at(p)) os << " " << quote(f);
    os << "\n";
    emitted_products.insert(p);
  };
  // Ops and product sorts interleave; product projections are implied.
  std::size_t next_sort = 0;
  const auto& sorts = sig.sorts();
  auto emit_sorts_until = [&](std::size_t end) {
    for (; next_sort < end; ++next_sort) {
      const Sort& s = sorts[next_sort];
      if (product_sorts.count(s)) emit_product(s);
      else pending.push_back(s);
    }
  };
  for (const auto& op : sig.ops()) {
    auto pos = static_cast<std::size_t>(std::find(sorts.begin(), sorts.end(), op.dom) - sorts.begin());
    if (product_sorts.count(op.dom)) {
      emit_sorts_until(pos + 1);
      continue;
    }
    emit_sorts_until(std::max(next_sort, std::max(pos, static_cast<std::size_t>(
        std::find(sorts.begin(), sorts.end(), op.cod) - sorts.begin())) + 1));
    flush();
    os << "  op " << quote(op.name) << " : " << quote(op.dom) << " -> " << quote(op.cod) << "\n";
  }
  emit_sorts_until(sorts.size());
  flush();
  for (const auto& r : sig.rules()) {
    os << "  rule";
    for (const auto& s : r.lhs) os << " " << quote(s);
    os << " ->";
    if (r.rhs_zero) os << " 0";
    else if (r.rhs.empty()) os << " id";
    for (const auto& s : r.rhs) os << " " << quote(s);
    os << "\n";
  }
  for (const auto& [a, b] : sig.inverses()) os << "  inverse " << quote(a) << " " << quote(b) << "\n";
  os << "end\n";
  return os.str();
}

std::string serialize_graph(const std::string& name, const SWGraph& g) {
  std::ostringstream os;
  os << "graph " << quote(name) << "\n";
  bool default_names = true;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    if (g.names()[x] != std::to_string(x)) default_names = false;
  if (default_names) {
    os << "  vertices " << g.vertex_count() << "\n";
  } else {
    os << "  names";
    for (const auto& n : g.names()) os << " " << quote(n);
    os << "\n";
  }
  for (std::size_t e : g.oriented()) {
    const auto& ed = g.edges()[e];
    os << "  edge " << ed.src << " " << ed.tgt << " " << format_number(ed.weight) << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string serialize_diagram(const std::string& name, const Diagram& d, const std::string& signature_name) {
  std::ostringstream os;
  const Graph& g = d.graph();
  os << "diagram " << quote(name) << " ";
  if (d.semantics().is_linear()) os << "linear\n";
  else os << "symbolic " << quote(signature_name) << "\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    os << "  object " << quote(g.vertex_name(v)) << " " << object_text(d.object(v)) << "\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    os << "  edge " << quote(ed.name) << " : " << quote(g.vertex_name(ed.src)) << " -> "
       << quote(g.vertex_name(ed.tgt));
    if (!ed.label.empty()) os << " label " << quote(ed.label);
    os << " = " << morphism_text(d.morphism(e)) << "\n";
  }
  for (const auto& p : d.products()) {
    os << "  product " << quote(g.vertex_name(p.vertex)) << " =";
    for (EdgeId e : p.projections) os << " " << quote(g.edge(e).name);
    os << "\n";
  }
  if (!d.sum_edges().empty()) {
    os << "  sum";
    for (EdgeId e : d.sum_edges()) os << " " << quote(g.edge(e).name);
    os << "\n";
  }
  for (const auto& r : d.shape().relations())
    os << "  relation " << path_text(g, r.lhs) << " = " << path_text(g, r.rhs) << "\n";
  if (d.assumed()) os << "  assume\n";
  os << "end\n";
  return os.str();
}

std::string serialize_morphism(const std::string& name, const DiagramMorphism& m, const std::string& dom_name,
                               const std::string& cod_name) {
  std::ostringstream os;
  const Graph& jg = m.dom.graph();
  const Graph& kg = m.cod.graph();
  os << "morphism " << quote(name) << " : " << quote(dom_name) << " -> " << quote(cod_name) << "\n";
  for (VertexId j = 0; j < kg.vertex_count(); ++j)
    os << "  object " << quote(kg.vertex_name(j)) << " -> " << quote(jg.vertex_name(m.shape_map.ob[j])) << "\n";
  for (EdgeId e = 0; e < kg.edge_count(); ++e) {
    const Path& p = m.shape_map.hom[e];
    os << "  arrow " << quote(kg.edge(e).name) << " -> ";
    if (p.edges.empty()) os << "id";
    else os << path_text(jg, p);
    os << "\n";
  }
  for (VertexId j = 0; j < kg.vertex_count(); ++j)
    os << "  component " << quote(kg.vertex_name(j)) << " = " << morphism_text(m.components[j]) << "\n";
  if (m.assumed) os << "  assume\n";
  os << "end\n";
  return os.str();
}

std::string serialize_open(const std::string& name, const OpenDiagram& o, const std::string& apex_name) {
  std::ostringstream os;
  os << "open " << quote(name) << " : " << quote(apex_name) << "\n";
  for (const auto& leg : o.legs) {
    os << "  foot";
    for (VertexId v : leg) os << " " << quote(o.apex.graph().vertex_name(v));
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string serialize_uwd(const std::string& name, const UWD& u, const std::string& signature_name) {
  std::ostringstream os;
  os << "uwd " << quote(name);
  if (!signature_name.empty()) os << " symbolic " << quote(signature_name);
  os << "\n";
  for (std::size_t j = 0; j < u.junctions.size(); ++j) {
    os << "  junction " << quote(u.junction_names[j]) << " =";
    for (std::size_t i = 0; i < u.junctions[j].size(); ++i) {
      if (i) os << " ,";
      const Object& o = u.junctions[j][i];
      if (auto* s = std::get_if<LinSpace>(&o)) {
        os << " " << s->dim;
        if (!s->label.empty()) os << " " << quote(s->label);
      } else {
        os << " " << quote(std::get<Sort>(o));
      }
    }
    os << "\n";
  }
  for (const auto& b : u.boxes) {
    os << "  box " << quote(b.name) << " :";
    for (std::size_t w : b.wiring) os << " " << quote(u.junction_names[w]);
    os << "\n";
  }
  os << "  outer";
  for (std::size_t w : u.outer_wiring) os << " " << quote(u.junction_names[w]);
  os << "\nend\n";
  return os.str();
}

std::string serialize_lift(const std::string& name, const std::string& diagram_name, const Diagram& d,
                           const Lift& l) {
  std::ostringstream os;
  os << "lift " << quote(name) << " : " << quote(diagram_name) << "\n";
  for (VertexId v = 0; v < l.elements.size(); ++v) {
    os << "  value " << quote(d.graph().vertex_name(v)) << " =";
    for (Eigen::Index i = 0; i < l.elements[v].size(); ++i) os << " " << format_number(l.elements[v](i));
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string serialize_spec(const SpecFile& spec) {
  std::ostringstream os;
  auto signature_name = [&](const Semantics& s) -> std::string {
    if (s.is_linear()) return {};
    for (const auto& [n, sig] : spec.signatures)
      if (sig == s.signature_ptr()) return n;
    for (const auto& [n, sig] : spec.signatures)
      if (*sig == s.signature()) return n;
    throw ValidationError("symbolic diagram with an undeclared signature");
  };
  auto diagram_name = [&](const Diagram& d) -> std::string {
    for (const auto& [n, x] : spec.diagrams)
      if (x == d) return n;
    throw ValidationError("morphism between undeclared diagrams");
  };
  bool first = true;
  for (const auto& n : spec.order) {
    if (!first) os << "\n";
    first = false;
    std::string k = spec.kind(n);
    if (k == "signature") os << serialize_signature(n, *spec.signatures.at(n));
    else if (k == "graph") os << serialize_graph(n, spec.graphs.at(n));
    else if (k == "diagram") os << serialize_diagram(n, spec.diagrams.at(n), signature_name(spec.diagrams.at(n).semantics()));
    else if (k == "morphism") {
      const auto& m = spec.morphisms.at(n);
      os << serialize_morphism(n, m, diagram_name(m.dom), diagram_name(m.cod));
    } else if (k == "open") {
      const auto& o = spec.opens.at(n);
      // Reuse an apex that is already declared as a diagram.
      std::string apex;
      for (const auto& dn : spec.order) {
        if (dn == n) break;
        if (auto it = spec.diagrams.find(dn); it != spec.diagrams.end() && it->second == o.apex) apex = dn;
      }
      if (apex.empty()) {
        apex = n + ".apex";
        os << serialize_diagram(apex, o.apex, signature_name(o.apex.semantics())) << "\n";
      }
      os << serialize_open(n, o, apex);
    } else if (k == "uwd") {
      const UWD& u = spec.uwds.at(n);
      std::string sig;
      for (const auto& t : u.junctions)
        for (const auto& o : t)
          if (std::holds_alternative<Sort>(o))
            for (const auto& [sn, s] : spec.signatures)
              if (s->has_sort(std::get<Sort>(o)) && sig.empty()) sig = sn;
      os << serialize_uwd(n, u, sig);
    } else if (k == "lift") {
      const auto& l = spec.lifts.at(n);
      os << serialize_lift(n, l.diagram, spec.diagram(l.diagram), l.lift);
    } else if (k == "pins") {
      const auto& p = spec.pinnings.at(n);
      const Diagram& d = spec.diagram(p.diagram);
      os << "pins " << quote(n) << " : " << quote(p.diagram) << "\n";
      for (const auto& pin : p.pins) {
        os << "  pin " << quote(d.graph().vertex_name(pin.vertex));
        if (!pin.indices.empty()) {
          os << " at";
          for (auto i : pin.indices) os << " " << i;
        }
        os << " =";
        for (Eigen::Index i = 0; i < pin.values.size(); ++i) os << " " << format_number(pin.values(i));
        os << "\n";
      }
      os << "end\n";
    }
  }
  return os.str();
}

}  // namespace diagcalc
