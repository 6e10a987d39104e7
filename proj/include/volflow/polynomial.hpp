#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace volflow {

// Sparse multivariate polynomial with real coefficients. Variables are
// indexed 0..vars-1; for phase-space use the convention is
// (q1..qn, p1..pn).
class Polynomial {
 public:
  using Powers = std::vector<int>;

  explicit Polynomial(int vars = 0);

  static Polynomial constant(int vars, double c);
  static Polynomial variable(int vars, int index);

  int vars() const { return vars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Powers, double>& terms() const { return terms_; }

  // Adds c * prod x_i^powers[i]; like terms are merged and exact zeros dropped.
  void add_term(double c, const Powers& powers);

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  Polynomial derivative(int index) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  // Human-readable form using phase-space names when vars is even.
  std::string to_string() const;

 private:
  void check_vars(const Polynomial& other) const;

  int vars_;
  std::map<Powers, double> terms_;
};

// Parses expressions such as "0.5*(p1^2 + q1^2) - 3*q1*p2" over the 2n
// phase-space variables q1..qn, p1..pn. Throws std::invalid_argument.
Polynomial parse_polynomial(const std::string& text, int n);

}  // namespace volflow
