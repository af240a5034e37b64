#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace diagcalc {

using VertexId = std::size_t;
using EdgeId = std::size_t;

inline constexpr std::size_t kDefaultRewriteBudget = 10000;

struct Edge {
  std::string name;
  VertexId src = 0;
  VertexId tgt = 0;
  std::string label;  // display text; empty means use name

  bool operator==(const Edge&) const = default;
};

// Directed multigraph with named vertices and edges. Ids are insertion indices.
class Graph {
 public:
  VertexId add_vertex(std::string name);
  EdgeId add_edge(std::string name, VertexId src, VertexId tgt, std::string label = {});

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::string& edge_label(EdgeId e) const;

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;
  VertexId vertex(std::string_view name) const;  // throws ShapeError
  EdgeId edge_id(std::string_view name) const;   // throws ShapeError

  std::vector<EdgeId> out_edges(VertexId v) const;

  bool operator==(const Graph& o) const {
    return vertex_names_ == o.vertex_names_ && edges_ == o.edges_;
  }

 private:
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

// A path is a start vertex and a sequence of composable edges.
struct Path {
  VertexId start = 0;
  std::vector<EdgeId> edges;

  static Path identity(VertexId v) { return Path{v, {}}; }
  bool is_identity() const { return edges.empty(); }

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

Path make_path(const Graph& g, VertexId start, std::vector<EdgeId> edges);
Path make_path(const Graph& g, std::span<const std::string> edge_names);
VertexId path_end(const Graph& g, const Path& p);
Path path_compose(const Graph& g, const Path& p, const Path& q);  // p then q
std::string format_path(const Graph& g, const Path& p);

struct Relation {
  Path lhs;
  Path rhs;
  bool operator==(const Relation&) const = default;
};

enum class PathEquality { Equal, NotProven };

// Finitely presented category: generating graph plus path relations.
class Presentation {
 public:
  Presentation() = default;
  explicit Presentation(Graph g, std::vector<Relation> relations = {});

  const Graph& graph() const { return graph_; }
  const std::vector<Relation>& relations() const { return relations_; }
  bool acyclic() const { return acyclic_; }
  bool is_free() const { return relations_.empty(); }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }

  bool operator==(const Presentation& o) const {
    return graph_ == o.graph_ && relations_ == o.relations_;
  }

 private:
  Graph graph_;
  std::vector<Relation> relations_;
  bool acyclic_ = true;
};

// Paths a -> b of length <= max_len in lexicographic order of edge ids.
std::vector<Path> enumerate_paths(const Presentation& c, VertexId a, VertexId b,
                                  std::size_t max_len);
// All paths a -> b; requires an acyclic shape.
std::vector<Path> hom_paths(const Presentation& c, VertexId a, VertexId b);
// Representatives of hom(a,b) modulo proven equality, first occurrence kept.
std::vector<Path> hom_representatives(const Presentation& c, VertexId a, VertexId b,
                                      std::size_t budget = kDefaultRewriteBudget);

PathEquality paths_equal(const Presentation& c, const Path& p, const Path& q,
                         std::size_t budget = kDefaultRewriteBudget);

std::vector<VertexId> topological_order(const Presentation& c);

struct FinFunctor {
  Presentation dom;
  Presentation cod;
  std::vector<VertexId> ob;  // indexed by dom vertex
  std::vector<Path> hom;     // indexed by dom edge

  static FinFunctor identity(const Presentation& c);
  Path apply(const Path& p) const;
};

struct FunctorReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

FunctorReport check_functor(const FinFunctor& f, std::size_t budget = kDefaultRewriteBudget);
// f then g.
FinFunctor compose_functors(const FinFunctor& f, const FinFunctor& g);

struct CommaObject {
  VertexId source = 0;  // vertex of the functor's domain
  Path arrow;           // R(source) -> target in the codomain
};

struct CommaArrow {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeId witness = 0;
};

struct CommaCategory {
  VertexId target = 0;
  std::vector<CommaObject> objects;
  std::vector<CommaArrow> arrows;
  std::size_t unproven = 0;  // candidate arrows whose condition was NotProven

  std::vector<std::size_t> component_labels() const;
  std::size_t component_count() const;
  bool nonempty_connected() const { return !objects.empty() && component_count() == 1; }
};

std::vector<CommaObject> comma_objects(const FinFunctor& r, VertexId j,
                                       std::size_t budget = kDefaultRewriteBudget);
CommaCategory comma_category(const FinFunctor& r, VertexId j,
                             std::size_t budget = kDefaultRewriteBudget);

struct Pushout {
  Presentation apex;
  FinFunctor left;   // B -> apex
  FinFunctor right;  // C -> apex
};

// Pushout of B <-f- A -g-> C.
Pushout pushout(const FinFunctor& f, const FinFunctor& g);

std::string export_shape_dot(const Presentation& c, std::string_view name);

}  // namespace diagcalc
