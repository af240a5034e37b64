#include "diagcalc/semantics.hpp"

#include <Eigen/QR>

#include "diagcalc/error.hpp"

namespace diagcalc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::NotEqual: return "NotEqual";
    case Verdict::NotProven: return "NotProven";
  }
  return "?";
}

Semantics Semantics::linear(double tol) {
  Semantics s;
  s.tol_ = tol;
  return s;
}

Semantics Semantics::symbolic(std::shared_ptr<const OperatorSignature> sig, std::size_t budget) {
  if (!sig) throw TypeError("symbolic semantics needs a signature");
  Semantics s;
  s.signature_ = std::move(sig);
  s.budget_ = budget;
  return s;
}

const OperatorSignature& Semantics::signature() const {
  if (!signature_) throw TypeError("linear semantics has no operator signature");
  return *signature_;
}

Semantics Semantics::with_tolerance(double tol) const {
  Semantics s = *this;
  s.tol_ = tol;
  return s;
}

Semantics Semantics::with_budget(std::size_t budget) const {
  Semantics s = *this;
  s.budget_ = budget;
  return s;
}

const LinSpace& as_space(const Object& o) {
  if (auto* p = std::get_if<LinSpace>(&o)) return *p;
  throw TypeError("expected a linear space, found sort '" + std::get<Sort>(o) + "'");
}

const Sort& as_sort(const Object& o) {
  if (auto* p = std::get_if<Sort>(&o)) return *p;
  throw TypeError("expected a sort, found a linear space");
}

const LinMap& as_linear(const Morphism& m) {
  if (auto* p = std::get_if<LinMap>(&m)) return *p;
  throw TypeError("expected a linear map, found a symbolic morphism");
}

const SymMorphism& as_symbolic(const Morphism& m) {
  if (auto* p = std::get_if<SymMorphism>(&m)) return *p;
  throw TypeError("expected a symbolic morphism, found a linear map");
}

void Semantics::validate(const Object& o) const {
  if (is_linear()) {
    as_space(o);
  } else if (!signature_->has_sort(as_sort(o))) {
    throw TypeError("unknown sort '" + as_sort(o) + "'");
  }
}

void Semantics::validate(const Morphism& m) const {
  if (is_linear()) {
    const LinMap& f = as_linear(m);
    if (static_cast<std::size_t>(f.matrix.rows()) != f.cod.dim ||
        static_cast<std::size_t>(f.matrix.cols()) != f.dom.dim)
      throw TypeError("matrix shape does not match its spaces");
  } else {
    sym_validate(*signature_, as_symbolic(m));
  }
}

Object Semantics::dom(const Morphism& m) const {
  if (is_linear()) return as_linear(m).dom;
  return as_symbolic(m).dom;
}

Object Semantics::cod(const Morphism& m) const {
  if (is_linear()) return as_linear(m).cod;
  return as_symbolic(m).cod;
}

bool Semantics::same_object(const Object& a, const Object& b) const {
  if (is_linear()) return as_space(a).dim == as_space(b).dim;
  return as_sort(a) == as_sort(b);
}

Morphism Semantics::identity(const Object& o) const {
  if (is_linear()) return LinMap::identity(as_space(o));
  return SymMorphism::identity(as_sort(o));
}

Morphism Semantics::zero(const Object& dom, const Object& cod) const {
  if (is_linear()) return LinMap::zero(as_space(dom), as_space(cod));
  return SymMorphism::zero_map(as_sort(dom), as_sort(cod));
}

Morphism Semantics::compose(const Morphism& f, const Morphism& g) const {
  if (is_linear()) return lin_compose(as_linear(f), as_linear(g));
  return sym_compose(as_symbolic(f), as_symbolic(g));
}

Comparison Semantics::compare(const Morphism& a, const Morphism& b) const {
  if (is_linear()) {
    double d = lin_max_abs_difference(as_linear(a), as_linear(b));
    return {d <= tol_ ? Verdict::Equal : Verdict::NotEqual, d};
  }
  auto r = sym_equal(as_symbolic(a), as_symbolic(b), *signature_, budget_);
  return {r == SymEquality::Equal ? Verdict::Equal : Verdict::NotProven, 0.0};
}

bool Semantics::is_identity(const Morphism& m) const {
  if (!same_object(dom(m), cod(m))) return false;
  return compare(m, identity(dom(m))).verdict == Verdict::Equal;
}

std::optional<Morphism> Semantics::inverse(const Morphism& m) const {
  if (!is_linear()) {
    auto inv = sym_inverse(sym_normalize(as_symbolic(m), *signature_, budget_), *signature_);
    if (!inv) return std::nullopt;
    return Morphism{*inv};
  }
  const LinMap& f = as_linear(m);
  if (f.dom.dim != f.cod.dim) return std::nullopt;
  if (f.dom.dim == 0) return Morphism{LinMap::zero(f.cod, f.dom)};
  Eigen::MatrixXd a = f.dense();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(tol_);
  if (qr.rank() != a.rows()) return std::nullopt;
  Eigen::MatrixXd inv = qr.inverse();
  return Morphism{LinMap::from_dense(f.cod, f.dom, inv)};
}

bool Semantics::same_category(const Semantics& o) const {
  if (is_linear() != o.is_linear()) return false;
  if (is_linear()) return true;
  return signature_ == o.signature_ || *signature_ == *o.signature_;
}

bool identical(const Object& a, const Object& b) {
  if (a.index() != b.index()) return false;
  if (auto* s = std::get_if<LinSpace>(&a)) return *s == std::get<LinSpace>(b);
  return std::get<Sort>(a) == std::get<Sort>(b);
}

bool identical(const Morphism& a, const Morphism& b) {
  if (a.index() != b.index()) return false;
  if (auto* f = std::get_if<LinMap>(&a)) return lin_identical(*f, std::get<LinMap>(b));
  return std::get<SymMorphism>(a) == std::get<SymMorphism>(b);
}

std::string describe(const Object& o) {
  if (auto* s = std::get_if<LinSpace>(&o)) return s->label + " (dim " + std::to_string(s->dim) + ")";
  return std::get<Sort>(o);
}

std::string describe(const Morphism& m) {
  if (auto* f = std::get_if<LinMap>(&m))
    return std::to_string(f->cod.dim) + "x" + std::to_string(f->dom.dim) + " matrix";
  return format_sym(std::get<SymMorphism>(m));
}

}  // namespace diagcalc
