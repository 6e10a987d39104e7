#include "volflow/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace volflow {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double monomial(const Polynomial::Powers& powers, const Eigen::VectorXd& x) {
  double r = 1.0;
  for (std::size_t i = 0; i < powers.size(); ++i)
    if (powers[i] != 0) r *= ipow(x[static_cast<Eigen::Index>(i)], powers[i]);
  return r;
}

std::string variable_name(int vars, int index) {
  if (vars % 2 == 0) {
    const int n = vars / 2;
    return (index < n ? "q" : "p") + std::to_string(index % n + 1);
  }
  return "x" + std::to_string(index + 1);
}

}  // namespace

Polynomial::Polynomial(int vars) : vars_(vars) {
  if (vars < 0) throw std::invalid_argument("polynomial: negative variable count");
}

Polynomial Polynomial::constant(int vars, double c) {
  Polynomial p(vars);
  p.add_term(c, Powers(static_cast<std::size_t>(vars), 0));
  return p;
}

Polynomial Polynomial::variable(int vars, int index) {
  if (index < 0 || index >= vars) throw std::out_of_range("polynomial: variable index out of range");
  Polynomial p(vars);
  Powers powers(static_cast<std::size_t>(vars), 0);
  powers[static_cast<std::size_t>(index)] = 1;
  p.add_term(1.0, powers);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [powers, c] : terms_) {
    int s = 0;
    for (int k : powers) s += k;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(double c, const Powers& powers) {
  if (static_cast<int>(powers.size()) != vars_)
    throw std::invalid_argument("polynomial: power vector has wrong length");
  for (int k : powers)
    if (k < 0) throw std::invalid_argument("polynomial: negative power");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(powers, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::value(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& [powers, c] : terms_) v += c * monomial(powers, x);
  return v;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(vars_);
  for (const auto& [powers, c] : terms_) {
    for (int i = 0; i < vars_; ++i) {
      const int k = powers[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      Powers reduced = powers;
      reduced[static_cast<std::size_t>(i)] -= 1;
      g[i] += c * k * monomial(reduced, x);
    }
  }
  return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(vars_, vars_);
  for (const auto& [powers, c] : terms_) {
    for (int i = 0; i < vars_; ++i) {
      const int ki = powers[static_cast<std::size_t>(i)];
      if (ki == 0) continue;
      for (int j = i; j < vars_; ++j) {
        Powers reduced = powers;
        double factor = ki;
        reduced[static_cast<std::size_t>(i)] -= 1;
        const int kj = reduced[static_cast<std::size_t>(j)];
        if (kj == 0) continue;
        factor *= kj;
        reduced[static_cast<std::size_t>(j)] -= 1;
        const double v = c * factor * monomial(reduced, x);
        h(i, j) += v;
        if (j != i) h(j, i) += v;
      }
    }
  }
  return h;
}

Polynomial Polynomial::derivative(int index) const {
  if (index < 0 || index >= vars_) throw std::out_of_range("polynomial: variable index out of range");
  Polynomial d(vars_);
  for (const auto& [powers, c] : terms_) {
    const int k = powers[static_cast<std::size_t>(index)];
    if (k == 0) continue;
    Powers reduced = powers;
    reduced[static_cast<std::size_t>(index)] -= 1;
    d.add_term(c * k, reduced);
  }
  return d;
}

void Polynomial::check_vars(const Polynomial& other) const {
  if (other.vars_ != vars_) throw std::invalid_argument("polynomial: variable count mismatch");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_vars(other);
  for (const auto& [powers, c] : other.terms_) add_term(c, powers);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_vars(other);
  for (const auto& [powers, c] : other.terms_) add_term(-c, powers);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [powers, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_vars(b);
  Polynomial r(a.vars_);
  for (const auto& [pa, ca] : a.terms_) {
    for (const auto& [pb, cb] : b.terms_) {
      Polynomial::Powers sum = pa;
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pb[i];
      r.add_term(ca * cb, sum);
    }
  }
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [powers, c] : terms_) {
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    first = false;
    out << std::abs(c);
    for (int i = 0; i < vars_; ++i) {
      const int k = powers[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      out << "*" << variable_name(vars_, i);
      if (k > 1) out << "^" << k;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.
//   expr   := term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := ('+'|'-') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | variable | '(' expr ')'
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what +
                                " in \"" + text_ + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+')) p += term();
      else if (accept('-')) p -= term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (accept('*')) p = p * unary();
    return p;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    const int k = std::stoi(text_.substr(start, pos_ - start));
    Polynomial r = Polynomial::constant(2 * n_, 1.0);
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
  }

  Polynomial atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == 'q' || c == 'p') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      const int i = std::stoi(text_.substr(start, pos_ - start));
      if (i < 1 || i > n_) fail("variable index out of range");
      return Polynomial::variable(2 * n_, (c == 'q' ? 0 : n_) + i - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return Polynomial::constant(2 * n_, v);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, int n) {
  if (n < 1) throw std::invalid_argument("polynomial parse: n must be >= 1");
  return Parser(text, n).parse();
}

}  // namespace volflow
