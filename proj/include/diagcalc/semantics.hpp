#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "diagcalc/linear.hpp"
#include "diagcalc/symbolic.hpp"

namespace diagcalc {

using Object = std::variant<LinSpace, Sort>;
using Morphism = std::variant<LinMap, SymMorphism>;

enum class Verdict { Equal, NotEqual, NotProven };

std::string to_string(Verdict v);

struct Comparison {
  Verdict verdict = Verdict::NotProven;
  double discrepancy = 0.0;  // max-abs entry difference for linear maps
};

// The target category of a diagram: linear maps or a symbolic operator signature.
class Semantics {
 public:
  static Semantics linear(double tol = kDefaultLinTol);
  static Semantics symbolic(std::shared_ptr<const OperatorSignature> sig,
                            std::size_t budget = kDefaultRewriteBudget);

  bool is_linear() const { return !signature_; }
  const OperatorSignature& signature() const;
  std::shared_ptr<const OperatorSignature> signature_ptr() const { return signature_; }
  double tolerance() const { return tol_; }
  std::size_t budget() const { return budget_; }
  Semantics with_tolerance(double tol) const;
  Semantics with_budget(std::size_t budget) const;

  void validate(const Object& o) const;
  void validate(const Morphism& m) const;
  Object dom(const Morphism& m) const;
  Object cod(const Morphism& m) const;
  // Typing equality: dimensions for linear spaces, names for sorts.
  bool same_object(const Object& a, const Object& b) const;
  Morphism identity(const Object& o) const;
  Morphism zero(const Object& dom, const Object& cod) const;
  Morphism compose(const Morphism& f, const Morphism& g) const;  // f then g
  Comparison compare(const Morphism& a, const Morphism& b) const;
  bool is_identity(const Morphism& m) const;
  std::optional<Morphism> inverse(const Morphism& m) const;

  // Same kind and same signature contents; tolerances are ignored.
  bool same_category(const Semantics& o) const;

 private:
  std::shared_ptr<const OperatorSignature> signature_;
  double tol_ = kDefaultLinTol;
  std::size_t budget_ = kDefaultRewriteBudget;
};

const LinSpace& as_space(const Object& o);
const Sort& as_sort(const Object& o);
const LinMap& as_linear(const Morphism& m);
const SymMorphism& as_symbolic(const Morphism& m);

bool identical(const Object& a, const Object& b);
bool identical(const Morphism& a, const Morphism& b);
std::string describe(const Object& o);
std::string describe(const Morphism& m);

}  // namespace diagcalc
