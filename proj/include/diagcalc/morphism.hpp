#pragma once

#include <string>
#include <vector>

#include "diagcalc/diagram.hpp"

namespace diagcalc {

// A morphism D -> D' in Diag<-: a shape functor R: J' -> J (backward) and
// components rho_{j'}: D(R j') -> D'(j').
struct DiagramMorphism {
  Diagram dom;
  Diagram cod;
  FinFunctor shape_map;
  std::vector<Morphism> components;  // indexed by cod vertex
  bool strict = false;
  bool strong = false;
  bool assumed = false;  // some naturality square was accepted without proof
};

struct MorphismOptions {
  bool assume_unproven = false;
};

DiagramMorphism make_morphism(Diagram dom, Diagram cod, FinFunctor shape_map,
                              std::vector<Morphism> components, MorphismOptions options = {});
DiagramMorphism identity_morphism(const Diagram& d);
// m1: D -> D', m2: D' -> D''.
DiagramMorphism compose_morphisms(const DiagramMorphism& m1, const DiagramMorphism& m2);

struct NaturalityReport {
  struct Entry {
    EdgeId edge = 0;  // edge of the codomain shape
    Verdict verdict = Verdict::Equal;
    double discrepancy = 0.0;
  };
  std::vector<Entry> entries;
  bool ok() const;
  std::vector<std::string> failures(const Graph& cod_graph) const;
};

NaturalityReport check_naturality(const DiagramMorphism& m);

struct Collage {
  Diagram diagram;
  FinFunctor dom_inclusion;
  FinFunctor cod_inclusion;
  std::vector<EdgeId> component_edges;  // indexed by cod vertex
};

Collage collage(const DiagramMorphism& m);

}  // namespace diagcalc
