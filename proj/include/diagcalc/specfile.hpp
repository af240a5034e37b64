#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diagcalc/compose.hpp"
#include "diagcalc/lifting.hpp"
#include "diagcalc/morphism.hpp"
#include "diagcalc/physlib.hpp"

namespace diagcalc {

struct SpecOptions {
  double tol = kDefaultLinTol;
  std::size_t budget = kDefaultRewriteBudget;
};

struct NamedLift {
  std::string diagram;
  Lift lift;
};

struct NamedPins {
  std::string diagram;
  Pinning pins;
};

// Everything declared in one spec file. Names are unique across all kinds.
struct SpecFile {
  std::string source;
  std::map<std::string, std::shared_ptr<const OperatorSignature>> signatures;
  std::map<std::string, SWGraph> graphs;
  std::map<std::string, Diagram> diagrams;
  std::map<std::string, DiagramMorphism> morphisms;
  std::map<std::string, OpenDiagram> opens;
  std::map<std::string, UWD> uwds;
  std::map<std::string, NamedLift> lifts;
  std::map<std::string, NamedPins> pinnings;
  std::vector<std::string> order;  // declaration order

  // Diagrams, falling back to the apex of an open diagram.
  const Diagram& diagram(const std::string& name) const;
  const DiagramMorphism& morphism(const std::string& name) const;
  const OpenDiagram& open(const std::string& name) const;
  const UWD& uwd(const std::string& name) const;
  std::string kind(const std::string& name) const;  // empty if undeclared
};

SpecFile parse_spec(std::istream& in, const std::string& source, const SpecOptions& options = {});
SpecFile load_spec(const std::string& path, const SpecOptions& options = {});

// Physlib catalog. Parameters are key=value strings; graph values are a graph block name or
// path:N, cycle:N, complete:N.
struct ModelInfo {
  std::string kind;
  std::string produces;  // diagram, morphism, open, uwd
  std::string params;
  std::string summary;
};
const std::vector<ModelInfo>& model_catalog();
// Adds the model to `spec` under `name`. Morphisms also register NAME.dom and NAME.cod.
void instantiate_model(SpecFile& spec, const std::string& name, const std::string& kind,
                       const std::map<std::string, std::string>& params, const SpecOptions& options = {});

// Spec-file text that parses back to equal objects.
std::string serialize_signature(const std::string& name, const OperatorSignature& sig);
std::string serialize_graph(const std::string& name, const SWGraph& g);
std::string serialize_diagram(const std::string& name, const Diagram& d,
                              const std::string& signature_name = {});
std::string serialize_morphism(const std::string& name, const DiagramMorphism& m,
                               const std::string& dom_name, const std::string& cod_name);
std::string serialize_open(const std::string& name, const OpenDiagram& o, const std::string& apex_name);
std::string serialize_uwd(const std::string& name, const UWD& u, const std::string& signature_name = {});
std::string serialize_lift(const std::string& name, const std::string& diagram_name, const Diagram& d,
                           const Lift& l);
// All declarations of the spec in order; models are expanded into plain blocks.
std::string serialize_spec(const SpecFile& spec);

std::string format_number(double x);

}  // namespace diagcalc
