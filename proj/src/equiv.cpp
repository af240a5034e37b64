#include "diagcalc/equiv.hpp"

#include <sstream>

#include "diagcalc/error.hpp"

namespace diagcalc {

namespace {

CommaSummary summarize(const CommaCategory& cc) {
  return CommaSummary{cc.target, cc.objects.size(), cc.component_count(), cc.unproven};
}

}  // namespace

InitialityResult is_initial(const FinFunctor& r, std::size_t budget) {
  InitialityResult res;
  res.initial = true;
  for (VertexId j = 0; j < r.cod.vertex_count(); ++j) {
    auto cc = comma_category(r, j, budget);
    res.summaries.push_back(summarize(cc));
    if (!cc.nonempty_connected()) res.initial = false;
  }
  return res;
}

bool is_full_ess_surjective(const FinFunctor& r, std::size_t budget) {
  if (!r.dom.acyclic() || !r.cod.acyclic())
    throw NotAcyclicError("fullness check needs acyclic shapes");
  std::vector<bool> hit(r.cod.vertex_count(), false);
  for (VertexId v : r.ob) hit[v] = true;
  for (bool h : hit)
    if (!h) return false;
  for (VertexId a = 0; a < r.dom.vertex_count(); ++a)
    for (VertexId b = 0; b < r.dom.vertex_count(); ++b) {
      std::vector<Path> images;
      for (const auto& p : hom_paths(r.dom, a, b)) images.push_back(r.apply(p));
      for (const auto& target : hom_representatives(r.cod, r.ob[a], r.ob[b], budget)) {
        bool covered = false;
        for (const auto& img : images)
          if (paths_equal(r.cod, img, target, budget) == PathEquality::Equal) {
            covered = true;
            break;
          }
        if (!covered) return false;
      }
    }
  return true;
}

ForwardMorphism inverse_forward(const DiagramMorphism& m) {
  const Semantics& sem = m.dom.semantics();
  ForwardMorphism f{m.cod, m.dom, m.shape_map, {}};
  for (VertexId j = 0; j < m.components.size(); ++j) {
    auto inv = sem.inverse(m.components[j]);
    if (!inv)
      throw ValidationError("component at '" + m.cod.graph().vertex_name(j) +
                            "' is not invertible");
    f.components.push_back(*inv);
  }
  return f;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "true";
    case Tri::No: return "false";
    case Tri::Inconclusive: return "inconclusive";
  }
  return "?";
}

CommaCategory relative_comma_category(const ForwardMorphism& m, VertexId j) {
  const FinFunctor& r = m.shape_map;
  const Semantics& sem = m.dom.semantics();
  CommaCategory cc;
  cc.target = j;
  cc.objects = comma_objects(r, j, sem.budget());
  const Graph& g = r.dom.graph();
  std::vector<Morphism> legs;  // sigma_{j'} ; D(f)
  for (const auto& o : cc.objects)
    legs.push_back(sem.compose(m.components[o.source], m.cod.evaluate(o.arrow)));
  for (EdgeId h = 0; h < g.edge_count(); ++h) {
    const Edge& e = g.edge(h);
    for (std::size_t i = 0; i < cc.objects.size(); ++i) {
      if (cc.objects[i].source != e.src) continue;
      for (std::size_t k = 0; k < cc.objects.size(); ++k) {
        if (cc.objects[k].source != e.tgt) continue;
        Morphism lhs = sem.compose(m.dom.morphism(h), legs[k]);
        auto c = sem.compare(lhs, legs[i]);
        if (c.verdict == Verdict::Equal)
          cc.arrows.push_back(CommaArrow{i, k, h});
        else if (c.verdict == Verdict::NotProven)
          ++cc.unproven;
      }
    }
  }
  return cc;
}

RelativeInitialityResult is_relatively_initial(const ForwardMorphism& m) {
  if (!(m.shape_map.dom == m.dom.shape()) || !(m.shape_map.cod == m.cod.shape()))
    throw ValidationError("forward morphism shape functor does not match its diagrams");
  RelativeInitialityResult res;
  res.verdict = Tri::Yes;
  for (VertexId j = 0; j < m.cod.shape().vertex_count(); ++j) {
    auto cc = relative_comma_category(m, j);
    res.summaries.push_back(summarize(cc));
    if (cc.nonempty_connected()) continue;
    // Missing arrows that were merely unproven could still connect the comma.
    if (!cc.objects.empty() && cc.unproven > 0) {
      if (res.verdict == Tri::Yes) res.verdict = Tri::Inconclusive;
    } else {
      res.verdict = Tri::No;
    }
  }
  return res;
}

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::FullEssSurj: return "FullEssSurj";
    case CertificateKind::InitialFunctor: return "InitialFunctor";
    case CertificateKind::RelativelyInitial: return "RelativelyInitial";
  }
  return "?";
}

EquivResult certify_weak_equivalence(const DiagramMorphism& m) {
  if (!m.strong) throw ValidationError("morphism is not strong: some component is not invertible");
  const std::size_t budget = m.dom.semantics().budget();
  const FinFunctor& r = m.shape_map;
  if (r.cod.acyclic()) {
    auto init = is_initial(r, budget);
    if (init.initial) {
      bool fes = r.dom.acyclic() && is_full_ess_surjective(r, budget);
      return EquivCertificate{fes ? CertificateKind::FullEssSurj : CertificateKind::InitialFunctor,
                              init.summaries};
    }
  }
  auto rel = is_relatively_initial(inverse_forward(m));
  if (rel.verdict == Tri::Yes) return EquivCertificate{CertificateKind::RelativelyInitial, rel.summaries};
  std::string reason = rel.verdict == Tri::No
                           ? "some relative comma category is empty or disconnected"
                           : "relative initiality is inconclusive (unproven pentagons)";
  return EquivNotProven{reason, rel.summaries};
}

Lift transfer_lift_backward(const DiagramMorphism& m, const EquivCertificate& cert,
                            const Lift& target, TransferOptions options) {
  (void)cert;
  if (!m.dom.semantics().is_linear()) throw TypeError("lift transfer needs linear semantics");
  auto check = verify_lift(m.cod, target, options.tol);
  if (!check.ok()) throw ValidationError("lift does not verify on the codomain diagram");
  ForwardMorphism inv = inverse_forward(m);
  const FinFunctor& r = m.shape_map;
  const std::size_t nj = m.dom.shape().vertex_count();
  std::vector<Eigen::VectorXd> pulled;  // sigma_{j'} x'_{j'}
  for (VertexId jp = 0; jp < r.ob.size(); ++jp)
    pulled.push_back(as_linear(inv.components[jp])(target.elements[jp]));

  Lift out;
  out.elements.resize(nj);
  for (VertexId j = 0; j < nj; ++j) {
    std::optional<VertexId> preimage;
    for (VertexId jp = 0; jp < r.ob.size(); ++jp)
      if (r.ob[jp] == j && (!preimage || options.reverse_order)) preimage = jp;
    if (preimage) {
      out.elements[j] = pulled[*preimage];
      continue;
    }
    auto objs = comma_objects(r, j, m.dom.semantics().budget());
    if (objs.empty())
      throw ValidationError("empty comma category at '" + m.dom.graph().vertex_name(j) + "'");
    const CommaObject& o = options.reverse_order ? objs.back() : objs.front();
    out.elements[j] = as_linear(m.dom.evaluate(o.arrow))(pulled[o.source]);
  }
  auto rep = verify_lift(m.dom, out, options.tol);
  if (!rep.ok())
    throw Error("transferred lift fails at edge '" + m.dom.graph().edge(*rep.worst_edge()).name +
                "'; the certificate does not hold");
  return out;
}

std::string format_certificate(const EquivCertificate& c, const Graph& shape) {
  std::ostringstream os;
  os << "certificate " << to_string(c.kind) << "\n";
  for (const auto& s : c.summaries)
    os << "  comma at " << shape.vertex_name(s.object) << ": objects=" << s.object_count
       << " components=" << s.component_count << "\n";
  return os.str();
}

}  // namespace diagcalc
