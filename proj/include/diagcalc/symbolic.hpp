#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diagcalc/fincat.hpp"

namespace diagcalc {

using Sort = std::string;

struct OpSymbol {
  std::string name;
  Sort dom;
  Sort cod;
};

// Rules match on symbol names, so one rule covers every overload of its symbols.
struct RewriteRule {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;  // empty is the identity
  bool rhs_zero = false;
};

// Symbols are resolved by (name, domain sort); a name may be overloaded across sorts.
class OperatorSignature {
 public:
  void add_sort(const Sort& s);
  void add_op(const std::string& name, const Sort& dom, const Sort& cod);
  void add_rule(std::vector<std::string> lhs, std::vector<std::string> rhs);
  void add_zero_rule(std::vector<std::string> lhs);
  void add_inverse(const std::string& a, const std::string& b);
  // Declares a product sort with projections "π1".."πn" and, when all factors
  // agree, the sum symbol "+".
  void add_product(const Sort& product, std::vector<Sort> factors);

  bool has_sort(const Sort& s) const;
  const OpSymbol* resolve(const std::string& name, const Sort& dom) const;
  std::optional<Sort> word_codomain(const Sort& dom, const std::vector<std::string>& word) const;
  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<OpSymbol>& ops() const { return ops_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const std::vector<std::pair<std::string, std::string>>& inverses() const { return inverses_; }
  const std::map<Sort, std::vector<Sort>>& products() const { return products_; }
  std::optional<std::string> inverse_of(const std::string& name) const;

  static std::string projection_symbol(std::size_t i) { return "π" + std::to_string(i + 1); }
  static std::string sum_symbol() { return "+"; }

  bool operator==(const OperatorSignature& o) const;

 private:
  void validate_rule(const RewriteRule& r) const;

  std::vector<Sort> sorts_;
  std::vector<OpSymbol> ops_;
  std::map<std::pair<std::string, Sort>, std::size_t> index_;
  std::vector<RewriteRule> rules_;
  std::vector<std::pair<std::string, std::string>> inverses_;
  std::map<Sort, std::vector<Sort>> products_;
};

// A sorted operator word times a sign, or the formal zero morphism.
struct SymMorphism {
  Sort dom;
  Sort cod;
  std::vector<std::string> word;
  bool negated = false;
  bool zero = false;

  static SymMorphism identity(const Sort& s) { return SymMorphism{s, s, {}, false, false}; }
  static SymMorphism zero_map(const Sort& dom, const Sort& cod) {
    return SymMorphism{dom, cod, {}, false, true};
  }
  bool operator==(const SymMorphism&) const = default;
};

// Tokens are symbol names; a leading '-' negates ("-d"); "id" is the empty word; "0" alone is zero
// (then cod must be supplied).
SymMorphism sym_parse(const OperatorSignature& sig, const Sort& dom,
                      const std::vector<std::string>& tokens,
                      const std::optional<Sort>& cod = std::nullopt);
void sym_validate(const OperatorSignature& sig, const SymMorphism& m);
SymMorphism sym_compose(const SymMorphism& f, const SymMorphism& g);
SymMorphism sym_normalize(const SymMorphism& m, const OperatorSignature& sig,
                          std::size_t budget = kDefaultRewriteBudget);

enum class SymEquality { Equal, NotProven };
SymEquality sym_equal(const SymMorphism& a, const SymMorphism& b, const OperatorSignature& sig,
                      std::size_t budget = kDefaultRewriteBudget);
std::optional<SymMorphism> sym_inverse(const SymMorphism& m, const OperatorSignature& sig);
std::string format_sym(const SymMorphism& m);

}  // namespace diagcalc
