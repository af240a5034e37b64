#include "diagcalc/symbolic.hpp"

#include <algorithm>

#include "diagcalc/error.hpp"

namespace diagcalc {

void OperatorSignature::add_sort(const Sort& s) {
  if (s.empty()) throw TypeError("empty sort name");
  if (!has_sort(s)) sorts_.push_back(s);
}

bool OperatorSignature::has_sort(const Sort& s) const {
  return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
}

void OperatorSignature::add_op(const std::string& name, const Sort& dom, const Sort& cod) {
  if (name.empty() || name == "0" || name == "id" || name[0] == '-')
    throw TypeError("reserved or empty operator name '" + name + "'");
  if (!has_sort(dom)) throw TypeError("operator '" + name + "' uses unknown sort '" + dom + "'");
  if (!has_sort(cod)) throw TypeError("operator '" + name + "' uses unknown sort '" + cod + "'");
  auto key = std::make_pair(name, dom);
  if (index_.count(key))
    throw TypeError("operator '" + name + "' is already declared on sort '" + dom + "'");
  index_.emplace(key, ops_.size());
  ops_.push_back(OpSymbol{name, dom, cod});
}

const OpSymbol* OperatorSignature::resolve(const std::string& name, const Sort& dom) const {
  auto it = index_.find({name, dom});
  return it == index_.end() ? nullptr : &ops_[it->second];
}

std::optional<Sort> OperatorSignature::word_codomain(const Sort& dom,
                                                     const std::vector<std::string>& word) const {
  Sort cur = dom;
  for (const auto& n : word) {
    const OpSymbol* op = resolve(n, cur);
    if (!op) return std::nullopt;
    cur = op->cod;
  }
  return cur;
}

void OperatorSignature::validate_rule(const RewriteRule& r) const {
  if (r.lhs.empty()) throw TypeError("rewrite rule with an empty left-hand side");
  bool applicable = false;
  for (const auto& s : sorts_) {
    auto lcod = word_codomain(s, r.lhs);
    if (!lcod) continue;
    applicable = true;
    if (r.rhs_zero) continue;
    auto rcod = word_codomain(s, r.rhs);
    if (!rcod || *rcod != *lcod)
      throw TypeError("rewrite rule sides disagree on sorts starting at '" + s + "'");
  }
  if (!applicable) throw TypeError("rewrite rule left-hand side is ill-sorted on every sort");
}

void OperatorSignature::add_rule(std::vector<std::string> lhs, std::vector<std::string> rhs) {
  RewriteRule r{std::move(lhs), std::move(rhs), false};
  validate_rule(r);
  rules_.push_back(std::move(r));
}

void OperatorSignature::add_zero_rule(std::vector<std::string> lhs) {
  RewriteRule r{std::move(lhs), {}, true};
  validate_rule(r);
  rules_.push_back(std::move(r));
}

void OperatorSignature::add_inverse(const std::string& a, const std::string& b) {
  bool found = false;
  for (const auto& op : ops_) {
    if (op.name != a) continue;
    const OpSymbol* back = resolve(b, op.cod);
    if (!back || back->cod != op.dom)
      throw TypeError("'" + b + "' is not typed as an inverse of '" + a + "' on '" + op.dom + "'");
    found = true;
  }
  if (!found) throw TypeError("unknown operator '" + a + "' in inverse declaration");
  inverses_.emplace_back(a, b);
}

std::optional<std::string> OperatorSignature::inverse_of(const std::string& name) const {
  for (const auto& [a, b] : inverses_) {
    if (a == name) return b;
    if (b == name) return a;
  }
  return std::nullopt;
}

void OperatorSignature::add_product(const Sort& product, std::vector<Sort> factors) {
  if (has_sort(product)) throw TypeError("product sort '" + product + "' already declared");
  for (const auto& f : factors)
    if (!has_sort(f)) throw TypeError("product factor '" + f + "' is not a declared sort");
  add_sort(product);
  for (std::size_t i = 0; i < factors.size(); ++i) add_op(projection_symbol(i), product, factors[i]);
  if (!factors.empty() &&
      std::all_of(factors.begin(), factors.end(), [&](const Sort& s) { return s == factors[0]; }))
    add_op(sum_symbol(), product, factors[0]);
  products_.emplace(product, std::move(factors));
}

bool OperatorSignature::operator==(const OperatorSignature& o) const {
  auto same_rules = [](const std::vector<RewriteRule>& a, const std::vector<RewriteRule>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].lhs != b[i].lhs || a[i].rhs != b[i].rhs || a[i].rhs_zero != b[i].rhs_zero)
        return false;
    return true;
  };
  if (sorts_ != o.sorts_ || ops_.size() != o.ops_.size()) return false;
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name != o.ops_[i].name || ops_[i].dom != o.ops_[i].dom ||
        ops_[i].cod != o.ops_[i].cod)
      return false;
  return same_rules(rules_, o.rules_) && inverses_ == o.inverses_ && products_ == o.products_;
}

SymMorphism sym_parse(const OperatorSignature& sig, const Sort& dom,
                      const std::vector<std::string>& tokens, const std::optional<Sort>& cod) {
  if (!sig.has_sort(dom)) throw TypeError("unknown sort '" + dom + "'");
  if (tokens.size() == 1 && tokens[0] == "0") {
    if (!cod) throw TypeError("zero morphism needs an explicit codomain");
    if (!sig.has_sort(*cod)) throw TypeError("unknown sort '" + *cod + "'");
    return SymMorphism::zero_map(dom, *cod);
  }
  SymMorphism m = SymMorphism::identity(dom);
  for (const auto& t : tokens) {
    std::string name = t;
    if (name.size() > 1 && name[0] == '-') {
      m.negated = !m.negated;
      name = name.substr(1);
    }
    if (name == "id") continue;
    const OpSymbol* op = sig.resolve(name, m.cod);
    if (!op) throw TypeError("operator '" + name + "' is not defined on sort '" + m.cod + "'");
    m.word.push_back(name);
    m.cod = op->cod;
  }
  if (cod && *cod != m.cod)
    throw TypeError("word ends at sort '" + m.cod + "' but '" + *cod + "' was expected");
  return m;
}

void sym_validate(const OperatorSignature& sig, const SymMorphism& m) {
  if (!sig.has_sort(m.dom) || !sig.has_sort(m.cod))
    throw TypeError("symbolic morphism uses an undeclared sort");
  if (m.zero) return;
  auto c = sig.word_codomain(m.dom, m.word);
  if (!c || *c != m.cod) throw TypeError("ill-sorted operator word '" + format_sym(m) + "'");
}

SymMorphism sym_compose(const SymMorphism& f, const SymMorphism& g) {
  if (f.cod != g.dom)
    throw TypeError("cannot compose '" + f.cod + "' with a morphism from '" + g.dom + "'");
  if (f.zero || g.zero) return SymMorphism::zero_map(f.dom, g.cod);
  SymMorphism h{f.dom, g.cod, f.word, f.negated != g.negated, false};
  h.word.insert(h.word.end(), g.word.begin(), g.word.end());
  return h;
}

SymMorphism sym_normalize(const SymMorphism& m, const OperatorSignature& sig, std::size_t budget) {
  sym_validate(sig, m);
  if (m.zero) return SymMorphism::zero_map(m.dom, m.cod);
  SymMorphism cur = m;
  for (std::size_t step = 0; step < budget; ++step) {
    std::vector<Sort> sorts{cur.dom};
    for (const auto& n : cur.word) sorts.push_back(sig.resolve(n, sorts.back())->cod);
    bool rewrote = false;
    for (std::size_t i = 0; i < cur.word.size() && !rewrote; ++i) {
      for (const auto& rule : sig.rules()) {
        const auto& lhs = rule.lhs;
        if (i + lhs.size() > cur.word.size()) continue;
        if (!std::equal(lhs.begin(), lhs.end(), cur.word.begin() + static_cast<std::ptrdiff_t>(i)))
          continue;
        if (rule.rhs_zero) return SymMorphism::zero_map(m.dom, m.cod);
        auto rc = sig.word_codomain(sorts[i], rule.rhs);
        if (!rc || *rc != sorts[i + lhs.size()]) continue;
        std::vector<std::string> next(cur.word.begin(),
                                      cur.word.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(next.end(), rule.rhs.begin(), rule.rhs.end());
        next.insert(next.end(), cur.word.begin() + static_cast<std::ptrdiff_t>(i + lhs.size()),
                    cur.word.end());
        cur.word = std::move(next);
        rewrote = true;
        break;
      }
    }
    if (!rewrote) break;
  }
  return cur;
}

SymEquality sym_equal(const SymMorphism& a, const SymMorphism& b, const OperatorSignature& sig,
                      std::size_t budget) {
  if (a.dom != b.dom || a.cod != b.cod)
    throw TypeError("sym_equal: sort mismatch (" + a.dom + "->" + a.cod + " vs " + b.dom + "->" +
                    b.cod + ")");
  SymMorphism na = sym_normalize(a, sig, budget);
  SymMorphism nb = sym_normalize(b, sig, budget);
  return na == nb ? SymEquality::Equal : SymEquality::NotProven;
}

std::optional<SymMorphism> sym_inverse(const SymMorphism& m, const OperatorSignature& sig) {
  if (m.zero) return std::nullopt;
  SymMorphism inv{m.cod, m.dom, {}, m.negated, false};
  for (auto it = m.word.rbegin(); it != m.word.rend(); ++it) {
    auto b = sig.inverse_of(*it);
    if (!b) return std::nullopt;
    inv.word.push_back(*b);
  }
  sym_validate(sig, inv);
  return inv;
}

std::string format_sym(const SymMorphism& m) {
  if (m.zero) return "0";
  if (m.word.empty()) return m.negated ? "-id" : "id";
  std::string s;
  for (std::size_t i = 0; i < m.word.size(); ++i) {
    if (i) s += " ";
    if (i == 0 && m.negated) s += "-";
    s += m.word[i];
  }
  return s;
}

}  // namespace diagcalc
