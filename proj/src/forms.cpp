#include "volflow/forms.hpp"

#include <cmath>
#include <sstream>

namespace volflow {

// ---------------------------------------------------------------------------
// PhaseState
// ---------------------------------------------------------------------------

PhaseState::PhaseState(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() % 2 != 0) throw std::invalid_argument("PhaseState: coordinate count must be even");
}

PhaseState::PhaseState(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw std::invalid_argument("PhaseState: q and p lengths differ");
  const auto n = static_cast<Eigen::Index>(q.size());
  coords_.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    coords_[i] = q[static_cast<std::size_t>(i)];
    coords_[n + i] = p[static_cast<std::size_t>(i)];
  }
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd fd_gradient(const ScalarField::ValueFn& f, const PhaseState& x) {
  Eigen::VectorXd g(x.dim());
  Eigen::VectorXd y = x.coords();
  for (int i = 0; i < x.dim(); ++i) {
    const double h = fd_step(x.coords()[i]);
    y[i] = x.coords()[i] + h;
    const double fp = f(PhaseState(y));
    y[i] = x.coords()[i] - h;
    const double fm = f(PhaseState(y));
    y[i] = x.coords()[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const ScalarField& f, const PhaseState& x) {
  const int d = x.dim();
  Eigen::MatrixXd h(d, d);
  Eigen::VectorXd y = x.coords();
  for (int i = 0; i < d; ++i) {
    const double step = fd_step(x.coords()[i]);
    y[i] = x.coords()[i] + step;
    const Eigen::VectorXd gp = f.gradient(PhaseState(y));
    y[i] = x.coords()[i] - step;
    const Eigen::VectorXd gm = f.gradient(PhaseState(y));
    y[i] = x.coords()[i];
    h.col(i) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

// The field d f / d x^index.
ScalarField partial(const ScalarField& f, int index) {
  if (f.is_zero()) return {};
  if (const Polynomial* p = f.polynomial()) return ScalarField::from_polynomial(p->derivative(index));
  return ScalarField([f, index](const PhaseState& x) { return f.gradient(x)[index]; },
                     [f, index](const PhaseState& x) -> Eigen::VectorXd { return f.hessian(x).row(index).transpose(); });
}

}  // namespace

ScalarField::ScalarField(ValueFn value, GradientFn gradient, HessianFn hessian) {
  if (!value || !gradient) throw std::invalid_argument("ScalarField: value and gradient are required");
  impl_ = std::make_shared<const Impl>(Impl{std::move(value), std::move(gradient), std::move(hessian), std::nullopt});
}

ScalarField ScalarField::constant(double c) {
  if (c == 0.0) return {};
  return ScalarField([c](const PhaseState&) { return c; },
                     [](const PhaseState& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.dim()); },
                     [](const PhaseState& x) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(x.dim(), x.dim()); });
}

ScalarField ScalarField::from_polynomial(Polynomial p) {
  if (p.is_zero()) return {};
  auto poly = std::make_shared<const Polynomial>(std::move(p));
  auto check = [poly](const PhaseState& x) {
    if (x.dim() != poly->vars()) throw std::invalid_argument("ScalarField: polynomial/phase-space dimension mismatch");
  };
  Impl impl{[poly, check](const PhaseState& x) {
              check(x);
              return poly->value(x.coords());
            },
            [poly, check](const PhaseState& x) -> Eigen::VectorXd {
              check(x);
              return poly->gradient(x.coords());
            },
            [poly, check](const PhaseState& x) -> Eigen::MatrixXd {
              check(x);
              return poly->hessian(x.coords());
            },
            *poly};
  return ScalarField(std::make_shared<const Impl>(std::move(impl)));
}

ScalarField ScalarField::from_function(ValueFn value) {
  if (!value) throw std::invalid_argument("ScalarField: empty function");
  auto grad = [value](const PhaseState& x) { return fd_gradient(value, x); };
  return ScalarField(std::move(value), std::move(grad));
}

const Polynomial* ScalarField::polynomial() const {
  return impl_ && impl_->poly ? &*impl_->poly : nullptr;
}

double ScalarField::value(const PhaseState& x) const { return impl_ ? impl_->value(x) : 0.0; }

Eigen::VectorXd ScalarField::gradient(const PhaseState& x) const {
  return impl_ ? impl_->gradient(x) : Eigen::VectorXd::Zero(x.dim());
}

bool ScalarField::has_analytic_hessian() const { return !impl_ || static_cast<bool>(impl_->hessian); }

Eigen::MatrixXd ScalarField::hessian(const PhaseState& x) const {
  if (!impl_) return Eigen::MatrixXd::Zero(x.dim(), x.dim());
  if (impl_->hessian) return impl_->hessian(x);
  return fd_hessian(*this, x);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.polynomial() && b.polynomial()) return ScalarField::from_polynomial(*a.polynomial() + *b.polynomial());
  ScalarField::HessianFn hess;
  if (a.has_analytic_hessian() && b.has_analytic_hessian())
    hess = [a, b](const PhaseState& x) -> Eigen::MatrixXd { return a.hessian(x) + b.hessian(x); };
  return ScalarField([a, b](const PhaseState& x) { return a.value(x) + b.value(x); },
                     [a, b](const PhaseState& x) -> Eigen::VectorXd { return a.gradient(x) + b.gradient(x); },
                     std::move(hess));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + (-1.0 * b); }

ScalarField operator*(double c, const ScalarField& a) {
  if (a.is_zero() || c == 0.0) return {};
  if (c == 1.0) return a;
  if (a.polynomial()) return ScalarField::from_polynomial(*a.polynomial() * c);
  ScalarField::HessianFn hess;
  if (a.has_analytic_hessian()) hess = [a, c](const PhaseState& x) -> Eigen::MatrixXd { return c * a.hessian(x); };
  return ScalarField([a, c](const PhaseState& x) { return c * a.value(x); },
                     [a, c](const PhaseState& x) -> Eigen::VectorXd { return c * a.gradient(x); }, std::move(hess));
}

double gradient_consistency(const ScalarField& f, const PhaseState& x) {
  const Eigen::VectorXd g = f.gradient(x);
  const Eigen::VectorXd fd = fd_gradient([&f](const PhaseState& y) { return f.value(y); }, x);
  double worst = 0.0;
  for (int i = 0; i < x.dim(); ++i) worst = std::max(worst, std::abs(g[i] - fd[i]) / (1.0 + std::abs(g[i])));
  return worst;
}

// ---------------------------------------------------------------------------
// TwoFormField
// ---------------------------------------------------------------------------

TwoFormField::TwoFormField(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("TwoFormField: n must be >= 2 (the 1/(n-1) normalisation is undefined at n = 1)");
  const auto nn = static_cast<std::size_t>(n);
  q_upper_.resize(nn * (nn - 1) / 2);
  p_upper_.resize(nn * (nn - 1) / 2);
  a_.resize(nn * nn);
}

void TwoFormField::check_pair(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("TwoFormField: index out of range");
}

std::size_t TwoFormField::upper(int i, int j) const {
  // row-major index of (i, j), i < j, in the strict upper triangle
  const auto n = static_cast<std::size_t>(n_);
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>(j);
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

ScalarField TwoFormField::Q(int i, int j) const {
  check_pair(i, j);
  if (i == j) return {};
  return i < j ? q_upper_[upper(i, j)] : -q_upper_[upper(j, i)];
}

ScalarField TwoFormField::P(int i, int j) const {
  check_pair(i, j);
  if (i == j) return {};
  return i < j ? p_upper_[upper(i, j)] : -p_upper_[upper(j, i)];
}

ScalarField TwoFormField::A(int i, int j) const {
  check_pair(i, j);
  return a_[static_cast<std::size_t>(i * n_ + j)];
}

void TwoFormField::set_Q(int i, int j, ScalarField f) {
  check_pair(i, j);
  if (i == j) throw std::invalid_argument("TwoFormField: Q_ii is identically zero");
  if (i < j) q_upper_[upper(i, j)] = std::move(f);
  else q_upper_[upper(j, i)] = -f;
}

void TwoFormField::set_P(int i, int j, ScalarField f) {
  check_pair(i, j);
  if (i == j) throw std::invalid_argument("TwoFormField: P^ii is identically zero");
  if (i < j) p_upper_[upper(i, j)] = std::move(f);
  else p_upper_[upper(j, i)] = -f;
}

void TwoFormField::set_A(int i, int j, ScalarField f) {
  check_pair(i, j);
  a_[static_cast<std::size_t>(i * n_ + j)] = std::move(f);
}

TwoFormField& TwoFormField::operator+=(const TwoFormField& other) {
  if (other.n_ != n_) throw std::invalid_argument("TwoFormField: dimension mismatch");
  for (std::size_t i = 0; i < q_upper_.size(); ++i) {
    q_upper_[i] = q_upper_[i] + other.q_upper_[i];
    p_upper_[i] = p_upper_[i] + other.p_upper_[i];
  }
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] = a_[i] + other.a_[i];
  return *this;
}

TwoFormField& TwoFormField::operator*=(double c) {
  for (auto& f : q_upper_) f = c * f;
  for (auto& f : p_upper_) f = c * f;
  for (auto& f : a_) f = c * f;
  return *this;
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

namespace {

std::string component_name(char tag, int i, int j) {
  std::ostringstream s;
  s << tag << (i + 1) << (j + 1);
  return s.str();
}

void require_finite(double v, const Eigen::VectorXd& g, char tag, int i, int j) {
  if (!std::isfinite(v) || !g.allFinite())
    throw EvaluationError(component_name(tag, i, j), std::isfinite(v) ? "gradient" : "value");
}

}  // namespace

PointwiseJet jet_at(const TwoFormField& alpha, const PhaseState& x) {
  const int n = alpha.n();
  if (x.n() != n) throw std::invalid_argument("jet_at: phase point dimension does not match the 2-form");
  PointwiseJet jet = PointwiseJet::zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ScalarField a = alpha.A(i, j);
      if (!a.is_zero()) {
        const double v = a.value(x);
        const Eigen::VectorXd g = a.gradient(x);
        require_finite(v, g, 'A', i, j);
        jet.A(i, j) = v;
        for (int k = 0; k < n; ++k) {
          jet.dA_dq(i, j, k) = g[k];
          jet.dA_dp(i, j, k) = g[n + k];
        }
      }
      if (i >= j) continue;
      // Q and P: evaluate the stored upper entry and reflect.
      for (char tag : {'Q', 'P'}) {
        const ScalarField f = tag == 'Q' ? alpha.Q(i, j) : alpha.P(i, j);
        if (f.is_zero()) continue;
        const double v = f.value(x);
        const Eigen::VectorXd g = f.gradient(x);
        require_finite(v, g, tag, i, j);
        Eigen::MatrixXd& val = tag == 'Q' ? jet.Q : jet.P;
        Tensor3& by_q = tag == 'Q' ? jet.dQ_dq : jet.dP_dq;
        Tensor3& by_p = tag == 'Q' ? jet.dQ_dp : jet.dP_dp;
        val(i, j) = v;
        val(j, i) = -v;
        for (int k = 0; k < n; ++k) {
          by_q(i, j, k) = g[k];
          by_q(j, i, k) = -g[k];
          by_p(i, j, k) = g[n + k];
          by_p(j, i, k) = -g[n + k];
        }
      }
    }
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

TwoFormField hamiltonian_two_form(const ScalarField& H, int n) {
  if (n < 2) throw std::invalid_argument("hamiltonian_two_form: n must be >= 2");
  TwoFormField alpha(n);
  const ScalarField diag = (1.0 / (n - 1)) * H;
  for (int i = 0; i < n; ++i) alpha.set_A(i, i, diag);
  return alpha;
}

TwoFormField linear_system_two_form(const LinearSystemSpec& spec) {
  const int n = spec.n;
  if (n < 2) throw std::invalid_argument("linear_system_two_form: n must be >= 2");
  TwoFormField alpha = hamiltonian_two_form(ScalarField::from_polynomial(spec.hamiltonian()), n);
  // p_k q^k
  Polynomial pq(2 * n);
  for (int k = 0; k < n; ++k) pq += Polynomial::variable(2 * n, k) * Polynomial::variable(2 * n, n + k);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      alpha.set_Q(i, j, ScalarField::from_polynomial(-spec.a(i, j) * pq));
  return alpha;
}

TwoFormField omega_field(int n) {
  TwoFormField w(n);
  for (int i = 0; i < n; ++i) w.set_A(i, i, ScalarField::constant(1.0));
  return w;
}

double trace(const TwoFormField& alpha, const PhaseState& x) {
  double t = 0.0;
  for (int i = 0; i < alpha.n(); ++i) t += alpha.A(i, i).value(x);
  return t;
}

ScalarField trace_field(const TwoFormField& alpha) {
  ScalarField t;
  for (int i = 0; i < alpha.n(); ++i) t = t + alpha.A(i, i);
  return t;
}

TwoFormField traceless_part(const TwoFormField& alpha) {
  const int n = alpha.n();
  const ScalarField shift = (1.0 / (n - 1)) * trace_field(alpha);
  TwoFormField r = alpha;
  for (int i = 0; i < n; ++i) r.set_A(i, i, alpha.A(i, i) - shift);
  return r;
}

TwoFormField exterior_derivative(const OneFormField& beta) {
  const int n = beta.n;
  if (static_cast<int>(beta.b.size()) != n || static_cast<int>(beta.c.size()) != n)
    throw std::invalid_argument("exterior_derivative: malformed 1-form");
  TwoFormField d(n);
  auto qi = [n](int i) { return q_index(n, i); };
  auto pi = [n](int i) { return p_index(n, i); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // A^i_j = db_j/dp_i - dc^i/dq^j
      d.set_A(i, j, partial(beta.b[static_cast<std::size_t>(j)], pi(i)) -
                        partial(beta.c[static_cast<std::size_t>(i)], qi(j)));
      if (i >= j) continue;
      // Q_ij = db_j/dq^i - db_i/dq^j,  P^ij = dc^j/dp_i - dc^i/dp_j
      d.set_Q(i, j, partial(beta.b[static_cast<std::size_t>(j)], qi(i)) -
                        partial(beta.b[static_cast<std::size_t>(i)], qi(j)));
      d.set_P(i, j, partial(beta.c[static_cast<std::size_t>(j)], pi(i)) -
                        partial(beta.c[static_cast<std::size_t>(i)], pi(j)));
    }
  }
  return d;
}

TwoFormField gauge_shift(const TwoFormField& alpha, const OneFormField& beta) {
  if (beta.n != alpha.n()) throw std::invalid_argument("gauge_shift: dimension mismatch");
  return alpha + exterior_derivative(beta);
}

// ---------------------------------------------------------------------------
// LinearSystemSpec
// ---------------------------------------------------------------------------

LinearSystemSpec LinearSystemSpec::from_coefficients(const Eigen::MatrixXd& k) {
  if (k.rows() == 0 || k.rows() != k.cols()) throw std::invalid_argument("LinearSystemSpec: k must be square and non-empty");
  if (!k.allFinite()) throw std::invalid_argument("LinearSystemSpec: non-finite coefficient");
  LinearSystemSpec spec;
  spec.n = static_cast<int>(k.rows());
  spec.k = k;
  spec.s = 0.5 * (k + k.transpose());
  spec.a = 0.5 * (k - k.transpose());
  return spec;
}

Polynomial LinearSystemSpec::hamiltonian() const {
  Polynomial h(2 * n);
  for (int i = 0; i < n; ++i) {
    const Polynomial p = Polynomial::variable(2 * n, n + i);
    h += 0.5 * (p * p);
    for (int j = 0; j < n; ++j)
      h += (0.5 * s(i, j)) * (Polynomial::variable(2 * n, i) * Polynomial::variable(2 * n, j));
  }
  return h;
}

}  // namespace volflow
