#pragma once

#include <string>
#include <variant>
#include <vector>

#include "diagcalc/lifting.hpp"
#include "diagcalc/morphism.hpp"

namespace diagcalc {

struct CommaSummary {
  VertexId object = 0;  // vertex of the functor's codomain
  std::size_t object_count = 0;
  std::size_t component_count = 0;
  std::size_t unproven_arrows = 0;
  bool operator==(const CommaSummary&) const = default;
};

struct InitialityResult {
  bool initial = false;
  std::vector<CommaSummary> summaries;
};

InitialityResult is_initial(const FinFunctor& r, std::size_t budget = kDefaultRewriteBudget);
bool is_full_ess_surjective(const FinFunctor& r, std::size_t budget = kDefaultRewriteBudget);

// A morphism D -> D' in Diag->: R: J -> J' forward and components sigma_j: D(j) -> D'(R j).
struct ForwardMorphism {
  Diagram dom;
  Diagram cod;
  FinFunctor shape_map;
  std::vector<Morphism> components;  // indexed by dom vertex
};

// (R, rho^{-1}): D' -> D for a strong morphism D -> D' in Diag<-.
ForwardMorphism inverse_forward(const DiagramMorphism& m);

enum class Tri { Yes, No, Inconclusive };
std::string to_string(Tri t);

struct RelativeInitialityResult {
  Tri verdict = Tri::No;
  std::vector<CommaSummary> summaries;
};

// Comma (R, sigma)/j: objects of R/j, arrows admitted by the pentagon condition.
CommaCategory relative_comma_category(const ForwardMorphism& m, VertexId j);
RelativeInitialityResult is_relatively_initial(const ForwardMorphism& m);

enum class CertificateKind { FullEssSurj, InitialFunctor, RelativelyInitial };
std::string to_string(CertificateKind k);

struct EquivCertificate {
  CertificateKind kind = CertificateKind::InitialFunctor;
  std::vector<CommaSummary> summaries;
};

struct EquivNotProven {
  std::string reason;
  std::vector<CommaSummary> summaries;
};

using EquivResult = std::variant<EquivCertificate, EquivNotProven>;

EquivResult certify_weak_equivalence(const DiagramMorphism& m);

struct TransferOptions {
  bool reverse_order = false;  // choose the last comma object instead of the first
  double tol = kDefaultLinTol;
};

Lift transfer_lift_backward(const DiagramMorphism& m, const EquivCertificate& cert,
                            const Lift& target, TransferOptions options = {});

std::string format_certificate(const EquivCertificate& c, const Graph& shape);

}  // namespace diagcalc
