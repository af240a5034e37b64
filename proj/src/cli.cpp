#include "diagcalc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "diagcalc/equiv.hpp"
#include "diagcalc/error.hpp"
#include "diagcalc/specfile.hpp"

namespace diagcalc {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kUnderdetermined = 2;
constexpr int kFailed = 3;

struct Globals {
  double tol = kDefaultLinTol;
  std::size_t budget = kDefaultRewriteBudget;
  std::size_t max_path_len = 0;
  std::string format;  // empty: text, except export which defaults to dot
};

std::string coordinate(const Diagram& d, VertexId v, Eigen::Index i) {
  const Object& o = d.object(v);
  if (auto* s = std::get_if<LinSpace>(&o); s && static_cast<std::size_t>(i) < s->basis.size())
    return s->basis[static_cast<std::size_t>(i)];
  return std::to_string(i);
}

// Entries below 1e-12 of the largest entry are solver round-off and print as 0.
void print_lift(std::ostream& out, const Diagram& d, const Lift& l) {
  double scale = 1.0;
  for (const auto& x : l.elements)
    if (x.size()) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  for (VertexId v = 0; v < l.elements.size(); ++v)
    for (Eigen::Index i = 0; i < l.elements[v].size(); ++i) {
      double x = l.elements[v](i);
      if (std::abs(x) < 1e-12 * scale) x = 0.0;
      out << d.graph().vertex_name(v) << "(" << coordinate(d, v, i) << ") = " << format_number(x) << "\n";
    }
}

int report_outcome(std::ostream& out, const Diagram& d, const SolveOutcome& o) {
  out << "outcome: " << outcome_name(o) << "\n";
  if (auto* u = std::get_if<Unique>(&o)) {
    out << "residual: " << format_number(u->residual) << "\n";
    print_lift(out, d, u->lift);
    return kOk;
  }
  if (auto* u = std::get_if<Underdetermined>(&o)) {
    out << "nullity: " << u->nullity << "\n";
    out << "residual: " << format_number(u->residual) << "\n";
    out << "minimum-norm particular solution:\n";
    print_lift(out, d, u->particular);
    return kUnderdetermined;
  }
  out << "residual: " << format_number(std::get<Infeasible>(o).residual) << "\n";
  return kFailed;
}

const NamedLift& find_lift(const SpecFile& s, const std::string& name) {
  auto it = s.lifts.find(name);
  if (it == s.lifts.end()) throw std::invalid_argument("'" + name + "' is not a lift");
  return it->second;
}

int check_diagram(std::ostream& out, const std::string& name, const Diagram& d, const Globals& g) {
  auto rep = check_commutes(d, g.max_path_len);
  out << name << ": diagram, " << d.graph().vertex_count() << " objects, " << d.graph().edge_count()
      << " arrows\n";
  out << "  parallel path pairs: " << rep.entries.size() << " (commute " << rep.count(CommuteStatus::Commutes)
      << ", fail " << rep.count(CommuteStatus::Fails) << ", not proven " << rep.count(CommuteStatus::NotProven)
      << ")\n";
  for (const auto& e : rep.entries) {
    if (e.status == CommuteStatus::Commutes) continue;
    out << "    " << to_string(e.status) << ": " << format_path(d.graph(), e.first) << " vs "
        << format_path(d.graph(), e.second);
    if (e.status == CommuteStatus::Fails) out << " (discrepancy " << format_number(e.discrepancy) << ")";
    out << "\n";
  }
  auto prod = check_products(d);
  for (const auto& f : prod.failures) out << "  product failure: " << f << "\n";
  return prod.ok() ? kOk : kFailed;
}

int check_one(std::ostream& out, const SpecFile& s, const std::string& name, const Globals& g) {
  std::string k = s.kind(name);
  if (k.empty()) throw ValidationError("no declaration named '" + name + "'");
  if (k == "diagram") return check_diagram(out, name, s.diagrams.at(name), g);
  if (k == "open") {
    const auto& o = s.open(name);
    out << name << ": open diagram with " << o.legs.size() << " feet\n";
    return check_diagram(out, name + " apex", o.apex, g);
  }
  if (k == "morphism") {
    const auto& m = s.morphism(name);
    auto rep = check_naturality(m);
    out << name << ": morphism, naturality " << (rep.ok() ? "holds" : "fails")
        << (m.assumed ? " (assumed)" : "") << "\n";
    for (const auto& f : rep.failures(m.cod.graph())) out << "  " << f << "\n";
    return rep.ok() ? kOk : kFailed;
  }
  if (k == "lift") {
    const auto& l = s.lifts.at(name);
    const Diagram& d = s.diagram(l.diagram);
    auto rep = verify_lift(d, l.lift, g.tol);
    out << name << ": lift of " << l.diagram << " " << (rep.ok() ? "verified" : "fails") << "\n";
    if (auto w = rep.worst_edge())
      out << "  worst arrow " << d.graph().edge(*w).name << " residual " << format_number(rep.residuals[*w]) << "\n";
    return rep.ok() ? kOk : kFailed;
  }
  if (k == "uwd") {
    const UWD& u = s.uwd(name);
    u.validate();
    out << name << ": uwd with " << u.boxes.size() << " boxes, " << u.junctions.size() << " junctions\n";
    return kOk;
  }
  out << name << ": " << k << "\n";
  return kOk;
}

int cmd_check(std::ostream& out, const SpecFile& s, const std::vector<std::string>& names, const Globals& g) {
  int rc = kOk;
  for (const auto& n : names.empty() ? s.order : names) rc = std::max(rc, check_one(out, s, n, g));
  return rc;
}

int cmd_solve(std::ostream& out, const SpecFile& s, const std::string& dname, const std::string& pname,
              const Globals& g) {
  const Diagram& d = s.diagram(dname);
  Pinning pins;
  if (!pname.empty()) {
    auto it = s.pinnings.find(pname);
    if (it == s.pinnings.end()) throw std::invalid_argument("'" + pname + "' is not a pins block");
    if (it->second.diagram != dname)
      throw ValidationError("pins '" + pname + "' belong to '" + it->second.diagram + "'");
    pins = it->second.pins;
  }
  return report_outcome(out, d, solve_lift(d, pins, g.tol));
}

int cmd_bvp(std::ostream& out, const SpecFile& s, const std::string& mname, const std::string& lname,
            const Globals& g) {
  const auto& m = s.morphism(mname);
  const auto& l = find_lift(s, lname);
  return report_outcome(out, m.dom, solve_bvp(m, l.lift, g.tol));
}

int cmd_push(std::ostream& out, const SpecFile& s, const std::string& mname, const std::string& lname,
             const Globals& g) {
  const auto& m = s.morphism(mname);
  const auto& l = find_lift(s, lname);
  print_lift(out, m.cod, pushforward_lift(m, l.lift, g.tol));
  return kOk;
}

int cmd_compose(std::ostream& out, const SpecFile& s, const std::string& uname,
                const std::vector<std::string>& fillers, const std::vector<std::string>& substitutions,
                const std::string& expect, const Globals& g) {
  UWD u = s.uwd(uname);
  if (!substitutions.empty()) {
    std::vector<std::optional<UWD>> inner(u.boxes.size());
    for (const auto& sub : substitutions) {
      auto eq = sub.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--substitute expects BOX=UWD");
      std::string box = sub.substr(0, eq);
      auto it = std::find_if(u.boxes.begin(), u.boxes.end(), [&](const UWD::Box& b) { return b.name == box; });
      if (it == u.boxes.end()) throw std::invalid_argument("unknown box '" + box + "'");
      inner[static_cast<std::size_t>(it - u.boxes.begin())] = s.uwd(sub.substr(eq + 1));
    }
    u = substitute_uwd(u, inner);
  }
  if (fillers.size() != u.boxes.size())
    throw std::invalid_argument("wiring diagram has " + std::to_string(u.boxes.size()) + " boxes but " +
                                std::to_string(fillers.size()) + " fillers were given");
  std::vector<OpenDiagram> fs;
  for (const auto& f : fillers) fs.push_back(s.open(f));
  OpenDiagram r = apply_uwd(u, fs);
  if (g.format == "dot") {
    out << export_dot(r.apex, uname);
  } else {
    const Graph& gr = r.apex.graph();
    out << "composite: " << gr.vertex_count() << " objects, " << gr.edge_count() << " arrows, "
        << r.legs.size() << " feet\n";
    for (VertexId v = 0; v < gr.vertex_count(); ++v) out << "  object " << gr.vertex_name(v) << "\n";
    for (EdgeId e = 0; e < gr.edge_count(); ++e)
      out << "  arrow " << gr.edge(e).name << " : " << gr.vertex_name(gr.edge(e).src) << " -> "
          << gr.vertex_name(gr.edge(e).tgt) << "\n";
    for (std::size_t i = 0; i < r.legs.size(); ++i) {
      out << "  foot " << i;
      for (VertexId v : r.legs[i]) out << " " << gr.vertex_name(v);
      out << "\n";
    }
  }
  if (!expect.empty()) {
    bool iso = open_isomorphic(r, s.open(expect));
    out << "isomorphic to " << expect << ": " << (iso ? "yes" : "no") << "\n";
    if (!iso) return kFailed;
  }
  return kOk;
}

int cmd_equiv(std::ostream& out, const SpecFile& s, const std::string& mname) {
  const auto& m = s.morphism(mname);
  auto res = certify_weak_equivalence(m);
  if (auto* c = std::get_if<EquivCertificate>(&res)) {
    out << format_certificate(*c, m.dom.graph());
    return kOk;
  }
  const auto& np = std::get<EquivNotProven>(res);
  out << "not proven: " << np.reason << "\n";
  for (const auto& c : np.summaries)
    out << "  " << m.dom.graph().vertex_name(c.object) << ": " << c.object_count << " objects, "
        << c.component_count << " components, " << c.unproven_arrows << " unproven arrows\n";
  return kFailed;
}

int cmd_export(std::ostream& out, const SpecFile& s, const std::string& name, const Globals& g) {
  std::string k = s.kind(name);
  if (g.format == "text") {
    if (k == "diagram") out << serialize_diagram(name, s.diagrams.at(name));
    else out << serialize_spec(s);
    return kOk;
  }
  if (k == "diagram" || k == "open") out << export_dot(s.diagram(name), name);
  else if (k == "uwd") out << export_uwd_dot(s.uwd(name), name);
  else if (k == "morphism") out << export_dot(collage(s.morphism(name)).diagram, name);
  else throw std::invalid_argument("cannot export '" + name + "' as dot");
  return kOk;
}

int cmd_models(std::ostream& out, const std::vector<std::string>& args, bool emit, const Globals& g) {
  if (args.empty()) {
    for (const auto& m : model_catalog())
      out << m.kind << " (" << m.produces << ")" << (m.params.empty() ? "" : " " + m.params) << ": " << m.summary
          << "\n";
    return kOk;
  }
  std::map<std::string, std::string> params;
  for (std::size_t i = 1; i < args.size(); ++i) {
    auto eq = args[i].find('=');
    if (eq == std::string::npos) throw std::invalid_argument("model parameters are key=value");
    params[args[i].substr(0, eq)] = args[i].substr(eq + 1);
  }
  SpecFile s;
  s.source = "<models>";
  SpecOptions opt{g.tol, g.budget};
  instantiate_model(s, args[0], args[0], params, opt);
  if (emit) {
    out << serialize_spec(s);
    return kOk;
  }
  for (const auto& n : s.order) check_one(out, s, n, g);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diagrammatic equations: build, check, solve and compose"};
  app.name("diagcalc");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "linear tolerance")->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "rewrite step budget");
  app.add_option("--max-path-len", g.max_path_len, "longest path checked for commutativity (0 = all)");
  app.add_option("--format", g.format, "output format (export defaults to dot)")->check(CLI::IsMember({"text", "dot"}));

  std::string file, a, b, expect;
  std::vector<std::string> rest, subs;
  bool emit = false;

  auto* check = app.add_subcommand("check", "validate declarations and report commutativity");
  check->add_option("file", file)->required();
  check->add_option("names", rest);
  auto* solve = app.add_subcommand("solve", "solve for a lift of a linear diagram");
  solve->add_option("file", file)->required();
  solve->add_option("diagram", a)->required();
  solve->add_option("pins", b);
  auto* bvp = app.add_subcommand("bvp", "solve a boundary value problem along a morphism");
  bvp->add_option("file", file)->required();
  bvp->add_option("morphism", a)->required();
  bvp->add_option("lift", b)->required();
  auto* push = app.add_subcommand("push", "push a lift forward along a morphism");
  push->add_option("file", file)->required();
  push->add_option("morphism", a)->required();
  push->add_option("lift", b)->required();
  auto* comp = app.add_subcommand("compose", "fill a wiring diagram with open diagrams");
  comp->add_option("file", file)->required();
  comp->add_option("uwd", a)->required();
  comp->add_option("fillers", rest);
  comp->add_option("--substitute", subs, "replace box BOX by wiring diagram UWD (BOX=UWD)");
  comp->add_option("--expect", expect, "open diagram the composite should be isomorphic to");
  auto* equiv = app.add_subcommand("equiv", "certify a morphism as a weak equivalence");
  equiv->add_option("file", file)->required();
  equiv->add_option("morphism", a)->required();
  auto* exp = app.add_subcommand("export", "print a declaration as dot or spec text");
  exp->add_option("file", file)->required();
  exp->add_option("name", a)->required();
  auto* models = app.add_subcommand("models", "list or instantiate library models");
  models->add_option("model", rest, "KIND key=value ...");
  models->add_flag("--emit", emit, "print the model as spec text");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    SpecOptions opt{g.tol, g.budget};
    if (models->parsed()) return cmd_models(out, rest, emit, g);
    SpecFile s = load_spec(file, opt);
    if (check->parsed()) return cmd_check(out, s, rest, g);
    if (solve->parsed()) return cmd_solve(out, s, a, b, g);
    if (bvp->parsed()) return cmd_bvp(out, s, a, b, g);
    if (push->parsed()) return cmd_push(out, s, a, b, g);
    if (comp->parsed()) return cmd_compose(out, s, a, rest, subs, expect, g);
    if (equiv->parsed()) return cmd_equiv(out, s, a);
    return cmd_export(out, s, a, g);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace diagcalc
