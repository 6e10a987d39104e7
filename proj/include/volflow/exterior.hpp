#pragma once

// Dense, basis-explicit exterior algebra over the 2n-dimensional cotangent
// fiber of R^{2n}. Coordinates are ordered (q1..qn, p1..pn); basis k-forms
// dx^{i1}^...^dx^{ik} are keyed by strictly increasing index tuples.
//
// Everything here is plain linear algebra on constant forms and serves as
// the reference against which the coordinate formulas elsewhere are checked.

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace volflow {

inline int q_index(int /*n*/, int i) { return i; }
inline int p_index(int n, int i) { return n + i; }

// A tangent vector at a point, components (X^{q1}..X^{qn}, X^{p1}..X^{pn}).
struct FiberVector {
  Eigen::VectorXd components;

  FiberVector() = default;
  explicit FiberVector(Eigen::VectorXd c) : components(std::move(c)) {}
  static FiberVector zero(int n) { return FiberVector(Eigen::VectorXd::Zero(2 * n)); }
  static FiberVector basis(int n, int index);

  int n() const { return static_cast<int>(components.size() / 2); }
  int dim() const { return static_cast<int>(components.size()); }
  double q(int i) const { return components[i]; }
  double p(int i) const { return components[n() + i]; }
  double& q(int i) { return components[i]; }
  double& p(int i) { return components[n() + i]; }
};

class KForm {
 public:
  using Index = std::vector<int>;

  KForm(int dim, int degree);

  static KForm scalar(int dim, double c);
  // c * dx^{idx[0]} ^ ... ; idx need not be sorted. Repeated indices give 0.
  static KForm monomial(int dim, const Index& idx, double c = 1.0);
  static KForm one_form(const Eigen::VectorXd& components);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<Index, double>& terms() const { return terms_; }

  double coeff(const Index& sorted_idx) const;
  void add(const Index& sorted_idx, double c);

  double max_abs() const;
  double norm() const;
  bool approx_equal(const KForm& other, double tol = 1e-12) const;

  // Coefficients over all C(dim, degree) tuples in lexicographic order.
  Eigen::VectorXd to_dense() const;
  static KForm from_dense(int dim, int degree, const Eigen::VectorXd& coeffs);
  static std::vector<Index> basis_tuples(int dim, int degree);

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double c);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(KForm a, double c) { return a *= c; }
  friend KForm operator*(double c, KForm a) { return a *= c; }

 private:
  void check_compatible(const KForm& other) const;

  int dim_;
  int degree_;
  std::map<Index, double> terms_;
};

KForm wedge(const KForm& a, const KForm& b);

// omega = dp_i ^ dq^i on R^{2n}; omega^0 = 1.
KForm omega(int n);
KForm omega_power(int n, int k);

// Interior product i_X a.
KForm contract(const FiberVector& x, const KForm& a);

// nu_k(X) = -i_X(omega^k).
KForm nu_k(const FiberVector& x, int n, int k);

// Unique X with nu_n(X) = target, target a (2n-1)-form.
FiberVector solve_nu_n(const KForm& target, int n);

// trace defined by beta ^ omega^{n-1} = (tr beta / n) omega^n, beta a 2-form.
double trace_of(const KForm& beta, int n);

// Ratio c such that top == c * omega^n for a top-degree form.
double omega_n_ratio(const KForm& top, int n);

// ---------------------------------------------------------------------------
// Pointwise data of a 2-form field
//   alpha = 1/2 Q_ij dq^i^dq^j + A^i_j dp_i^dq^j + 1/2 P^ij dp_i^dp_j
// ---------------------------------------------------------------------------

// n x n x n array, element (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int n() const { return n_; }
  double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }
  double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct PointwiseJet {
  int n = 0;
  Eigen::MatrixXd Q, A, P;
  // dQ_dq(i, j, k) = dQ_ij / dq^k, dQ_dp(i, j, k) = dQ_ij / dp_k, etc.
  Tensor3 dQ_dq, dQ_dp, dA_dq, dA_dp, dP_dq, dP_dp;

  static PointwiseJet zero(int n);

  // Throws std::invalid_argument when Q or P (or their partials) are not
  // antisymmetric in the first two indices.
  void validate(double tol = 1e-12) const;
};

// The 2-form value alpha(x) as a constant form.
KForm alpha_at_point(const PointwiseJet& jet);

// d alpha at the point, as a constant 3-form.
KForm d_at_point(const PointwiseJet& jet);

// ---------------------------------------------------------------------------
// Brute-force verifiers
// ---------------------------------------------------------------------------

struct Lemma1Report {
  int n = 0;
  int k = 0;
  int trials = 0;
  bool all_nonzero = true;
  bool zero_maps_to_zero = true;
  double min_norm_ratio = 0.0;  // min |nu_k(x)| / |x| over the trials
  int rank = 0;                 // rank of nu_k as a linear map
  bool pass = false;
};

struct Lemma2Report {
  int n = 0;
  int k = 0;
  int trials = 0;
  bool all_nonzero = true;
  bool zero_maps_to_zero = true;
  double min_norm_ratio = 0.0;
  bool iota_invertible = false;
  double iota_max_residual = 0.0;  // |iota(solve(b)) - b| over random b
  bool pass = false;
};

struct WedgeIdentityReport {
  int n = 0;
  int triples = 0;
  double max_residual = 0.0;
  bool pass = false;
};

// Norm ratios below this count as "zero" in the injectivity checks.
inline constexpr double kInjectivityFloor = 1e-8;

struct IotaReport {
  int n = 0;
  bool invertible = false;
  double max_residual = 0.0;
};

Lemma1Report verify_lemma1(int n, int k, int trials, std::uint64_t seed = 42);
Lemma2Report verify_lemma2(int n, int k, int trials, std::uint64_t seed = 42);
WedgeIdentityReport verify_wedge_identities(int n, double tol = 1e-12);

// iota(alpha) = alpha ^ omega^{n-2} on 2-forms: invertibility and the
// residual of iota(iota^{-1}(b)) - b over random b. Valid for n >= 2.
IotaReport verify_iota(int n, int trials, std::uint64_t seed = 42);

}  // namespace volflow
