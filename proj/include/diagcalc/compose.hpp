#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diagcalc/diagram.hpp"

namespace diagcalc {

// A discrete diagram: the objects exposed by one foot or carried by one port.
using PortType = std::vector<Object>;

bool same_type(const PortType& a, const PortType& b);

// Apex diagram with discrete feet; each leg is the identity onto apex vertices.
struct OpenDiagram {
  Diagram apex;
  std::vector<std::vector<VertexId>> legs;

  std::vector<PortType> feet() const;
};

OpenDiagram make_open(Diagram apex, std::vector<std::vector<VertexId>> exposed);
OpenDiagram make_open(Diagram apex, const std::vector<std::vector<std::string>>& exposed);

struct UWD {
  struct Box {
    std::string name;
    std::vector<PortType> ports;
    std::vector<std::size_t> wiring;  // port -> junction
  };

  std::vector<std::string> junction_names;
  std::vector<PortType> junctions;
  std::vector<PortType> outer_ports;
  std::vector<std::size_t> outer_wiring;  // outer port -> junction
  std::vector<Box> boxes;

  void validate() const;
};

// Junctions given by name and type; box ports and outer ports are lists of junction names and
// take the junction's type.
struct UwdSpec {
  std::vector<std::pair<std::string, PortType>> junctions;
  std::vector<std::pair<std::string, std::vector<std::string>>> boxes;
  std::vector<std::string> outer;
};
UWD make_uwd(const UwdSpec& spec);

OpenDiagram apply_uwd(const UWD& u, std::span<const OpenDiagram> fillers);
// nullopt keeps the box as is.
UWD substitute_uwd(const UWD& outer, std::span<const std::optional<UWD>> inners);
bool open_isomorphic(const OpenDiagram& a, const OpenDiagram& b);

std::string export_uwd_dot(const UWD& u, std::string_view name = "U");

}  // namespace diagcalc
