#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volflow/exterior.hpp"
#include "volflow/linear_system.hpp"
#include "volflow/polynomial.hpp"

namespace volflow {

// A point (q^1..q^n, p_1..p_n) of R^{2n}.
class PhaseState {
 public:
  PhaseState() = default;
  explicit PhaseState(Eigen::VectorXd coords);
  PhaseState(std::span<const double> q, std::span<const double> p);

  int n() const { return static_cast<int>(coords_.size() / 2); }
  int dim() const { return static_cast<int>(coords_.size()); }
  double q(int i) const { return coords_[i]; }
  double p(int i) const { return coords_[n() + i]; }
  const Eigen::VectorXd& coords() const { return coords_; }
  bool finite() const { return coords_.allFinite(); }

 private:
  Eigen::VectorXd coords_;
};

// Raised when a field evaluates to a non-finite number.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& component, const std::string& detail)
      : std::runtime_error("non-finite value in " + component + ": " + detail), component_(component) {}
  const std::string& component() const { return component_; }

 private:
  std::string component_;
};

// Scalar function on phase space carrying its gradient (and optionally its
// Hessian). Gradient order is (d/dq^1..d/dq^n, d/dp_1..d/dp_n).
//
// User-supplied callables must be stateless: fields are shared between
// copies and may be evaluated concurrently.
class ScalarField {
 public:
  using ValueFn = std::function<double(const PhaseState&)>;
  using GradientFn = std::function<Eigen::VectorXd(const PhaseState&)>;
  using HessianFn = std::function<Eigen::MatrixXd(const PhaseState&)>;

  // The zero field.
  ScalarField() = default;
  ScalarField(ValueFn value, GradientFn gradient, HessianFn hessian = {});

  static ScalarField constant(double c);
  static ScalarField from_polynomial(Polynomial p);
  // Wraps a gradient-free function; derivatives by central differences with
  // step h = 1e-5 * (1 + |x_i|).
  static ScalarField from_function(ValueFn value);

  bool is_zero() const { return !impl_; }
  const Polynomial* polynomial() const;

  double value(const PhaseState& x) const;
  Eigen::VectorXd gradient(const PhaseState& x) const;
  // Falls back to central differences of the gradient when no analytic
  // Hessian was supplied.
  Eigen::MatrixXd hessian(const PhaseState& x) const;
  bool has_analytic_hessian() const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& a);
  friend ScalarField operator*(const ScalarField& a, double c) { return c * a; }
  friend ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

 private:
  struct Impl {
    ValueFn value;
    GradientFn gradient;
    HessianFn hessian;
    std::optional<Polynomial> poly;
  };
  explicit ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

// Relative step used by every central-difference helper in the library.
inline double fd_step(double coordinate) { return 1e-5 * (1.0 + std::abs(coordinate)); }

// Worst componentwise |analytic - FD| / (1 + |analytic|) of the gradient at x.
double gradient_consistency(const ScalarField& f, const PhaseState& x);

// beta = b_i dq^i + c^i dp_i
struct OneFormField {
  int n = 0;
  std::vector<ScalarField> b;  // dq components
  std::vector<ScalarField> c;  // dp components

  explicit OneFormField(int n_ = 0) : n(n_), b(static_cast<std::size_t>(n_)), c(static_cast<std::size_t>(n_)) {}
};

// alpha = 1/2 Q_ij dq^i^dq^j + A^i_j dp_i^dq^j + 1/2 P^ij dp_i^dp_j on R^{2n},
// n >= 2. Q and P are stored for i < j only and reflected on access.
class TwoFormField {
 public:
  explicit TwoFormField(int n);

  int n() const { return n_; }

  ScalarField Q(int i, int j) const;
  ScalarField A(int i, int j) const;
  ScalarField P(int i, int j) const;

  // Setting (i, j) also fixes (j, i) to the negated field. i == j throws.
  void set_Q(int i, int j, ScalarField f);
  void set_A(int i, int j, ScalarField f);
  void set_P(int i, int j, ScalarField f);

  TwoFormField& operator+=(const TwoFormField& other);
  TwoFormField& operator*=(double c);
  friend TwoFormField operator+(TwoFormField a, const TwoFormField& b) { return a += b; }
  friend TwoFormField operator-(TwoFormField a, const TwoFormField& b) { return a += -1.0 * b; }
  friend TwoFormField operator*(double c, TwoFormField a) { return a *= c; }

 private:
  std::size_t upper(int i, int j) const;
  void check_pair(int i, int j) const;

  int n_;
  std::vector<ScalarField> q_upper_;
  std::vector<ScalarField> a_;
  std::vector<ScalarField> p_upper_;
};

// Values and first partials of every component at x.
PointwiseJet jet_at(const TwoFormField& alpha, const PhaseState& x);

// alpha = H omega / (n - 1)
TwoFormField hamiltonian_two_form(const ScalarField& H, int n);

// alpha = H omega / (n - 1) - 1/2 p_k q^k a_ij dq^i^dq^j
TwoFormField linear_system_two_form(const LinearSystemSpec& spec);

// omega itself as a field: A = identity.
TwoFormField omega_field(int n);

// tr alpha = A^i_i
double trace(const TwoFormField& alpha, const PhaseState& x);
ScalarField trace_field(const TwoFormField& alpha);

// alpha - (tr alpha / (n - 1)) omega. Its trace is -tr alpha / (n - 1),
// not zero.
TwoFormField traceless_part(const TwoFormField& alpha);

// d beta in the (Q, A, P) layout. Uses analytic Hessians when the component
// fields provide them.
TwoFormField exterior_derivative(const OneFormField& beta);

// alpha + d beta
TwoFormField gauge_shift(const TwoFormField& alpha, const OneFormField& beta);

}  // namespace volflow
