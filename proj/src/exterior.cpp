#include "volflow/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace volflow {

namespace {

// Sorts idx in place, returns the permutation sign, or 0 on a repeat.
int sort_with_sign(KForm::Index& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

void enumerate(int dim, int degree, int start, KForm::Index& cur, std::vector<KForm::Index>& out) {
  if (static_cast<int>(cur.size()) == degree) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < dim; ++i) {
    cur.push_back(i);
    enumerate(dim, degree, i + 1, cur, out);
    cur.pop_back();
  }
}

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
}

Eigen::VectorXd random_vector(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

FiberVector FiberVector::basis(int n, int index) {
  FiberVector v = zero(n);
  v.components[index] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// KForm
// ---------------------------------------------------------------------------

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || degree < 0 || degree > dim)
    throw std::invalid_argument("KForm: degree " + std::to_string(degree) + " invalid for dimension " +
                                std::to_string(dim));
}

KForm KForm::scalar(int dim, double c) {
  KForm f(dim, 0);
  f.add({}, c);
  return f;
}

KForm KForm::monomial(int dim, const Index& idx, double c) {
  KForm f(dim, static_cast<int>(idx.size()));
  for (int i : idx)
    if (i < 0 || i >= dim) throw std::out_of_range("KForm: basis index out of range");
  Index sorted = idx;
  const int sign = sort_with_sign(sorted);
  if (sign != 0) f.add(sorted, sign * c);
  return f;
}

KForm KForm::one_form(const Eigen::VectorXd& components) {
  const int dim = static_cast<int>(components.size());
  KForm f(dim, 1);
  for (int i = 0; i < dim; ++i) f.add({i}, components[i]);
  return f;
}

double KForm::coeff(const Index& sorted_idx) const {
  auto it = terms_.find(sorted_idx);
  return it == terms_.end() ? 0.0 : it->second;
}

void KForm::add(const Index& sorted_idx, double c) {
  if (static_cast<int>(sorted_idx.size()) != degree_)
    throw std::invalid_argument("KForm::add: tuple length does not match degree");
  for (std::size_t i = 0; i < sorted_idx.size(); ++i) {
    if (sorted_idx[i] < 0 || sorted_idx[i] >= dim_) throw std::out_of_range("KForm::add: index out of range");
    if (i > 0 && sorted_idx[i] <= sorted_idx[i - 1])
      throw std::invalid_argument("KForm::add: tuple not strictly increasing");
  }
  if (c == 0.0) return;
  terms_[sorted_idx] += c;
}

double KForm::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double KForm::norm() const {
  double s = 0.0;
  for (const auto& [idx, c] : terms_) s += c * c;
  return std::sqrt(s);
}

bool KForm::approx_equal(const KForm& other, double tol) const {
  if (dim_ != other.dim_ || degree_ != other.degree_) return false;
  return (*this - other).max_abs() <= tol;
}

std::vector<KForm::Index> KForm::basis_tuples(int dim, int degree) {
  std::vector<Index> out;
  Index cur;
  enumerate(dim, degree, 0, cur, out);
  return out;
}

Eigen::VectorXd KForm::to_dense() const {
  const auto basis = basis_tuples(dim_, degree_);
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = coeff(basis[i]);
  return v;
}

KForm KForm::from_dense(int dim, int degree, const Eigen::VectorXd& coeffs) {
  const auto basis = basis_tuples(dim, degree);
  if (static_cast<std::size_t>(coeffs.size()) != basis.size())
    throw std::invalid_argument("KForm::from_dense: coefficient count mismatch");
  KForm f(dim, degree);
  for (std::size_t i = 0; i < basis.size(); ++i) f.add(basis[i], coeffs[static_cast<Eigen::Index>(i)]);
  return f;
}

void KForm::check_compatible(const KForm& other) const {
  if (dim_ != other.dim_ || degree_ != other.degree_)
    throw std::invalid_argument("KForm: dimension or degree mismatch in sum");
}

KForm& KForm::operator+=(const KForm& other) {
  check_compatible(other);
  for (const auto& [idx, c] : other.terms_) terms_[idx] += c;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  check_compatible(other);
  for (const auto& [idx, c] : other.terms_) terms_[idx] -= c;
  return *this;
}

KForm& KForm::operator*=(double c) {
  for (auto& [idx, v] : terms_) v *= c;
  return *this;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.degree() + b.degree() > a.dim()) throw std::invalid_argument("wedge: degree overflow");
  KForm r(a.dim(), a.degree() + b.degree());
  KForm::Index merged;
  merged.reserve(static_cast<std::size_t>(r.degree()));
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      bool repeated = false;
      int inversions = 0;
      for (int y : ib) {
        for (int x : ia) {
          if (x == y) repeated = true;
          else if (x > y) ++inversions;
        }
      }
      if (repeated) continue;
      merged.assign(ia.begin(), ia.end());
      merged.insert(merged.end(), ib.begin(), ib.end());
      std::sort(merged.begin(), merged.end());
      r.add(merged, (inversions % 2 == 0 ? 1.0 : -1.0) * ca * cb);
    }
  }
  return r;
}

KForm omega(int n) {
  check_n(n);
  KForm w(2 * n, 2);
  // dp_i ^ dq^i = -dq^i ^ dp_i
  for (int i = 0; i < n; ++i) w.add({q_index(n, i), p_index(n, i)}, -1.0);
  return w;
}

KForm omega_power(int n, int k) {
  check_n(n);
  if (k < 0 || k > n)
    throw std::invalid_argument("omega_power: k=" + std::to_string(k) + " outside 0.." + std::to_string(n));
  KForm r = KForm::scalar(2 * n, 1.0);
  const KForm w = omega(n);
  for (int i = 0; i < k; ++i) r = wedge(r, w);
  return r;
}

KForm contract(const FiberVector& x, const KForm& a) {
  if (a.degree() < 1) throw std::invalid_argument("contract: cannot contract a 0-form");
  if (x.dim() != a.dim()) throw std::invalid_argument("contract: dimension mismatch");
  KForm r(a.dim(), a.degree() - 1);
  KForm::Index rest;
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const double xi = x.components[idx[pos]];
      if (xi == 0.0) continue;
      rest.assign(idx.begin(), idx.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      r.add(rest, (pos % 2 == 0 ? 1.0 : -1.0) * xi * c);
    }
  }
  return r;
}

KForm nu_k(const FiberVector& x, int n, int k) {
  check_n(n);
  if (k < 1 || k > n) throw std::invalid_argument("nu_k: k outside 1..n");
  if (x.dim() != 2 * n) throw std::invalid_argument("nu_k: vector dimension mismatch");
  return contract(x, omega_power(n, k)) * -1.0;
}

namespace {

Eigen::MatrixXd nu_matrix(int n, int k) {
  const KForm wk = omega_power(n, k);
  const auto rows = KForm::basis_tuples(2 * n, 2 * k - 1).size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), 2 * n);
  for (int j = 0; j < 2 * n; ++j) m.col(j) = (contract(FiberVector::basis(n, j), wk) * -1.0).to_dense();
  return m;
}

}  // namespace

FiberVector solve_nu_n(const KForm& target, int n) {
  check_n(n);
  if (target.dim() != 2 * n || target.degree() != 2 * n - 1)
    throw std::invalid_argument("solve_nu_n: target must be a (2n-1)-form on R^{2n}");
  const Eigen::MatrixXd m = nu_matrix(n, n);
  return FiberVector(m.fullPivLu().solve(target.to_dense()));
}

double omega_n_ratio(const KForm& top, int n) {
  if (top.dim() != 2 * n || top.degree() != 2 * n)
    throw std::invalid_argument("omega_n_ratio: expected a top-degree form");
  KForm::Index all(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) all[static_cast<std::size_t>(i)] = i;
  return top.coeff(all) / omega_power(n, n).coeff(all);
}

double trace_of(const KForm& beta, int n) {
  if (beta.degree() != 2) throw std::invalid_argument("trace_of: expected a 2-form");
  return n * omega_n_ratio(wedge(beta, omega_power(n, n - 1)), n);
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

PointwiseJet PointwiseJet::zero(int n) {
  PointwiseJet j;
  j.n = n;
  j.Q = j.A = j.P = Eigen::MatrixXd::Zero(n, n);
  j.dQ_dq = j.dQ_dp = j.dA_dq = j.dA_dp = j.dP_dq = j.dP_dp = Tensor3(n);
  return j;
}

void PointwiseJet::validate(double tol) const {
  auto fail = [](const std::string& what, int i, int j) {
    throw std::invalid_argument("PointwiseJet: " + what + " not antisymmetric at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (std::abs(Q(i, j) + Q(j, i)) > tol) fail("Q", i, j);
      if (std::abs(P(i, j) + P(j, i)) > tol) fail("P", i, j);
      for (int k = 0; k < n; ++k) {
        if (std::abs(dQ_dq(i, j, k) + dQ_dq(j, i, k)) > tol) fail("dQ/dq", i, j);
        if (std::abs(dQ_dp(i, j, k) + dQ_dp(j, i, k)) > tol) fail("dQ/dp", i, j);
        if (std::abs(dP_dq(i, j, k) + dP_dq(j, i, k)) > tol) fail("dP/dq", i, j);
        if (std::abs(dP_dp(i, j, k) + dP_dp(j, i, k)) > tol) fail("dP/dp", i, j);
      }
    }
  }
}

KForm alpha_at_point(const PointwiseJet& jet) {
  jet.validate();
  const int n = jet.n;
  KForm a(2 * n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i < j) {
        a += KForm::monomial(2 * n, {q_index(n, i), q_index(n, j)}, jet.Q(i, j));
        a += KForm::monomial(2 * n, {p_index(n, i), p_index(n, j)}, jet.P(i, j));
      }
      a += KForm::monomial(2 * n, {p_index(n, i), q_index(n, j)}, jet.A(i, j));
    }
  }
  return a;
}

KForm d_at_point(const PointwiseJet& jet) {
  jet.validate();
  const int n = jet.n;
  const int dim = 2 * n;
  KForm d(dim, 3);
  // d(f) ^ basis for every component f of alpha
  auto add = [&](const Tensor3& by_q, const Tensor3& by_p, int i, int j, const KForm& basis) {
    Eigen::VectorXd grad(dim);
    for (int k = 0; k < n; ++k) {
      grad[q_index(n, k)] = by_q(i, j, k);
      grad[p_index(n, k)] = by_p(i, j, k);
    }
    d += wedge(KForm::one_form(grad), basis);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i < j) {
        add(jet.dQ_dq, jet.dQ_dp, i, j, KForm::monomial(dim, {q_index(n, i), q_index(n, j)}));
        add(jet.dP_dq, jet.dP_dp, i, j, KForm::monomial(dim, {p_index(n, i), p_index(n, j)}));
      }
      add(jet.dA_dq, jet.dA_dp, i, j, KForm::monomial(dim, {p_index(n, i), q_index(n, j)}));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

Lemma1Report verify_lemma1(int n, int k, int trials, std::uint64_t seed) {
  check_n(n);
  if (k < 1 || k > n) throw std::invalid_argument("verify_lemma1: k outside 1..n");
  Lemma1Report rep;
  rep.n = n;
  rep.k = k;
  rep.trials = trials;
  rep.zero_maps_to_zero = nu_k(FiberVector::zero(n), n, k).max_abs() == 0.0;
  rep.min_norm_ratio = trials > 0 ? std::numeric_limits<double>::infinity() : 0.0;

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd x = random_vector(2 * n, rng);
    const double xn = x.norm();
    if (xn == 0.0) continue;
    const double ratio = nu_k(FiberVector(x), n, k).norm() / xn;
    rep.min_norm_ratio = std::min(rep.min_norm_ratio, ratio);
    if (!(ratio > kInjectivityFloor)) rep.all_nonzero = false;
  }
  rep.rank = static_cast<int>(nu_matrix(n, k).fullPivLu().rank());
  rep.pass = rep.all_nonzero && rep.zero_maps_to_zero && rep.rank == 2 * n;
  return rep;
}

namespace {

// Matrix of alpha -> alpha ^ omega^k on basis 2-forms.
Eigen::MatrixXd iota_matrix(int n, int k) {
  const int dim = 2 * n;
  const KForm wk = omega_power(n, k);
  const auto cols = KForm::basis_tuples(dim, 2);
  const auto rows = KForm::basis_tuples(dim, 2 * k + 2);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    m.col(static_cast<Eigen::Index>(j)) = wedge(KForm::monomial(dim, cols[j]), wk).to_dense();
  return m;
}

}  // namespace

Lemma2Report verify_lemma2(int n, int k, int trials, std::uint64_t seed) {
  check_n(n);
  if (n <= 2) throw std::invalid_argument("verify_lemma2: requires n > 2");
  if (k < 1 || k > n - 2) throw std::invalid_argument("verify_lemma2: k outside 1..n-2");
  const int dim = 2 * n;
  const KForm wk = omega_power(n, k);
  const int pairs = dim * (dim - 1) / 2;

  Lemma2Report rep;
  rep.n = n;
  rep.k = k;
  rep.trials = trials;
  rep.zero_maps_to_zero = wedge(KForm(dim, 2), wk).max_abs() == 0.0;
  rep.min_norm_ratio = trials > 0 ? std::numeric_limits<double>::infinity() : 0.0;

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const KForm a = KForm::from_dense(dim, 2, random_vector(pairs, rng));
    const double an = a.norm();
    if (an == 0.0) continue;
    const double ratio = wedge(a, wk).norm() / an;
    rep.min_norm_ratio = std::min(rep.min_norm_ratio, ratio);
    if (!(ratio > kInjectivityFloor)) rep.all_nonzero = false;
  }

  const IotaReport iota = verify_iota(n, trials, seed ^ 0x9e3779b97f4a7c15ULL);
  rep.iota_invertible = iota.invertible;
  rep.iota_max_residual = iota.max_residual;
  rep.pass = rep.all_nonzero && rep.zero_maps_to_zero && rep.iota_invertible && rep.iota_max_residual <= 1e-10;
  return rep;
}

IotaReport verify_iota(int n, int trials, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("verify_iota: requires n >= 2");
  const int dim = 2 * n;
  const Eigen::MatrixXd iota = iota_matrix(n, n - 2);
  const auto lu = iota.fullPivLu();
  IotaReport rep;
  rep.n = n;
  rep.invertible = iota.rows() == iota.cols() && lu.rank() == iota.cols();
  if (!rep.invertible) return rep;
  const KForm w = omega_power(n, n - 2);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd b = random_vector(static_cast<int>(iota.rows()), rng);
    const KForm a = KForm::from_dense(dim, 2, lu.solve(b));
    rep.max_residual = std::max(rep.max_residual, (wedge(a, w).to_dense() - b).cwiseAbs().maxCoeff());
  }
  return rep;
}

WedgeIdentityReport verify_wedge_identities(int n, double tol) {
  if (n < 2) throw std::invalid_argument("verify_wedge_identities: requires n >= 2");
  const int dim = 2 * n;
  const KForm w_nm2 = omega_power(n, n - 2);
  const KForm w_nm1 = omega_power(n, n - 1);
  auto dq = [&](int i) { return KForm::monomial(dim, {q_index(n, i)}); };
  auto dp = [&](int i) { return KForm::monomial(dim, {p_index(n, i)}); };
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  const double s = 1.0 / (n - 1);

  WedgeIdentityReport rep;
  rep.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        // dp_i ^ dp_j ^ dq^k ^ w^{n-2} = (d^k_j dp_i - d^k_i dp_j) ^ w^{n-1} / (n-1)
        const KForm lhs1 = wedge(KForm::monomial(dim, {p_index(n, i), p_index(n, j), q_index(n, k)}), w_nm2);
        const KForm rhs1 = wedge(dp(i) * (delta(k, j) * s) - dp(j) * (delta(k, i) * s), w_nm1);
        // dp_i ^ dq^j ^ dq^k ^ w^{n-2} = (d^j_i dq^k - d^k_i dq^j) ^ w^{n-1} / (n-1)
        const KForm lhs2 = wedge(KForm::monomial(dim, {p_index(n, i), q_index(n, j), q_index(n, k)}), w_nm2);
        const KForm rhs2 = wedge(dq(k) * (delta(j, i) * s) - dq(j) * (delta(k, i) * s), w_nm1);
        rep.max_residual = std::max({rep.max_residual, (lhs1 - rhs1).max_abs(), (lhs2 - rhs2).max_abs()});
        ++rep.triples;
      }
    }
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace volflow
