#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "diagcalc/fincat.hpp"
#include "diagcalc/semantics.hpp"

namespace diagcalc {

struct ProductNode {
  VertexId vertex = 0;
  std::vector<VertexId> factors;
  std::vector<EdgeId> projections;  // projections[i]: vertex -> factors[i]
  bool operator==(const ProductNode&) const = default;
};

struct BuildOptions {
  bool assume_unproven = false;  // accept relations whose symbolic check is NotProven
};

class Diagram {
 public:
  const Presentation& shape() const { return shape_; }
  const Graph& graph() const { return shape_.graph(); }
  const Semantics& semantics() const { return semantics_; }
  const std::vector<Object>& objects() const { return ob_; }
  const std::vector<Morphism>& morphisms() const { return hom_; }
  const Object& object(VertexId v) const { return ob_.at(v); }
  const Morphism& morphism(EdgeId e) const { return hom_.at(e); }
  const std::vector<ProductNode>& products() const { return products_; }
  const std::vector<EdgeId>& sum_edges() const { return sum_edges_; }
  bool assumed() const { return assumed_; }

  Morphism evaluate(const Path& p) const;
  // Dimension of the space at v (linear semantics).
  std::size_t dim(VertexId v) const { return as_space(ob_.at(v)).dim; }

  // Structural equality: same shape, exactly equal objects and maps.
  bool operator==(const Diagram& o) const;

 private:
  friend Diagram build_diagram(Presentation, Semantics, std::vector<Object>, std::vector<Morphism>,
                               std::vector<ProductNode>, std::vector<EdgeId>, BuildOptions);
  Diagram() = default;

  Presentation shape_;
  Semantics semantics_;
  std::vector<Object> ob_;
  std::vector<Morphism> hom_;
  std::vector<ProductNode> products_;
  std::vector<EdgeId> sum_edges_;
  bool assumed_ = false;
};

Diagram build_diagram(Presentation shape, Semantics semantics, std::vector<Object> ob,
                      std::vector<Morphism> hom, std::vector<ProductNode> products = {},
                      std::vector<EdgeId> sum_edges = {}, BuildOptions options = {});

// Same data with a different tolerance/budget, re-validated.
Diagram with_semantics(const Diagram& d, const Semantics& s);

enum class CommuteStatus { Commutes, Fails, NotProven };
std::string to_string(CommuteStatus s);

struct CommutativityReport {
  struct Entry {
    Path first;
    Path second;
    CommuteStatus status = CommuteStatus::Commutes;
    double discrepancy = 0.0;
  };
  std::vector<Entry> entries;
  std::size_t count(CommuteStatus s) const;
  bool all_commute() const { return count(CommuteStatus::Commutes) == entries.size(); }
};

// max_len = 0 means the number of shape edges.
CommutativityReport check_commutes(const Diagram& d, std::size_t max_len = 0);

struct ProductReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
ProductReport check_products(const Diagram& d);

std::string export_dot(const Diagram& d, std::string_view name = "D");

// Incremental construction by name.
class DiagramBuilder {
 public:
  explicit DiagramBuilder(Semantics s) : semantics_(std::move(s)) {}

  VertexId object(const std::string& name, Object o);
  EdgeId edge(const std::string& name, const std::string& src, const std::string& tgt, Morphism m,
              const std::string& label = {});
  // Symbolic edge from a word of operator tokens ("0" for the zero morphism).
  EdgeId word_edge(const std::string& name, const std::string& src, const std::string& tgt,
                   const std::vector<std::string>& tokens, const std::string& label = {});
  // Adds the product vertex (direct sum, or the declared product sort) and its projections.
  VertexId product(const std::string& name, const std::vector<std::string>& factors,
                   const std::vector<std::string>& projection_names);
  EdgeId sum(const std::string& name, const std::string& product, const std::string& tgt,
             const std::string& label = "+");
  // Paths given as edge names; an empty list denotes the identity at 'at'.
  void relation(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs,
                const std::string& at = {});

  const Graph& graph() const { return graph_; }
  const Semantics& semantics() const { return semantics_; }
  Diagram build(BuildOptions options = {}) const;

 private:
  Path named_path(const std::vector<std::string>& names, const std::string& at) const;

  Semantics semantics_;
  Graph graph_;
  std::vector<Object> ob_;
  std::vector<Morphism> hom_;
  std::vector<Relation> relations_;
  std::vector<ProductNode> products_;
  std::vector<EdgeId> sums_;
};

}  // namespace diagcalc
