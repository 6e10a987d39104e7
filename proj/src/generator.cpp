#include "volflow/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace volflow {

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::FromTwoForm: return "from-two-form";
    case FieldKind::Hamiltonian: return "hamiltonian";
    case FieldKind::FengShang: return "feng-shang";
    case FieldKind::Sum: return "sum";
    case FieldKind::Direct: return "direct";
  }
  return "unknown";
}

GeneratedField::GeneratedField(int n, FieldKind kind, EvalFn eval) : n_(n), kind_(kind), eval_(std::move(eval)) {
  if (n < 1) throw std::invalid_argument("GeneratedField: n must be >= 1");
  if (!eval_) throw std::invalid_argument("GeneratedField: empty evaluator");
}

GeneratedField GeneratedField::zero(int n) {
  return GeneratedField(n, FieldKind::Direct, [n](const PhaseState&) { return FiberVector::zero(n); });
}

FiberVector GeneratedField::operator()(const PhaseState& x) const {
  if (x.n() != n_) throw std::invalid_argument("GeneratedField: phase point dimension mismatch");
  return eval_(x);
}

GeneratedField& GeneratedField::with_source(TwoFormField alpha) {
  two_form_ = std::make_shared<const TwoFormField>(std::move(alpha));
  return *this;
}

GeneratedField& GeneratedField::with_hamiltonian(ScalarField H) {
  hamiltonian_ = std::move(H);
  return *this;
}

GeneratedField operator+(const GeneratedField& a, const GeneratedField& b) {
  if (a.n() != b.n()) throw std::invalid_argument("GeneratedField: cannot add fields of different dimension");
  return GeneratedField(a.n(), FieldKind::Sum,
                        [a, b](const PhaseState& x) { return FiberVector(a(x).components + b(x).components); });
}

FiberVector field_from_jet(const PointwiseJet& jet) {
  const int n = jet.n;
  FiberVector x = FiberVector::zero(n);
  for (int i = 0; i < n; ++i) {
    double qdot = 0.0;
    double pdot = 0.0;
    for (int j = 0; j < n; ++j) {
      qdot += jet.dP_dq(i, j, j) + jet.dA_dp(j, j, i) - jet.dA_dp(i, j, j);
      pdot += jet.dQ_dp(i, j, j) - jet.dA_dq(j, j, i) + jet.dA_dq(j, i, j);
    }
    x.q(i) = qdot;
    x.p(i) = pdot;
  }
  return x;
}

GeneratedField generate(const TwoFormField& alpha) {
  if (alpha.n() < 2) throw std::invalid_argument("generate: n must be >= 2");
  auto shared = std::make_shared<const TwoFormField>(alpha);
  GeneratedField f(alpha.n(), FieldKind::FromTwoForm,
                   [shared](const PhaseState& x) { return field_from_jet(jet_at(*shared, x)); });
  f.with_source(alpha);
  return f;
}

GeneratedField hamiltonian_field(const ScalarField& H, int n) {
  if (n < 1) throw std::invalid_argument("hamiltonian_field: n must be >= 1");
  GeneratedField f(n, FieldKind::Hamiltonian, [H, n](const PhaseState& x) {
    const Eigen::VectorXd g = H.gradient(x);
    FiberVector v = FiberVector::zero(n);
    for (int i = 0; i < n; ++i) {
      v.q(i) = g[n + i];
      v.p(i) = -g[i];
    }
    return v;
  });
  f.with_hamiltonian(H);
  return f;
}

std::pair<GeneratedField, GeneratedField> decompose(const TwoFormField& alpha) {
  return {hamiltonian_field(trace_field(alpha), alpha.n()), generate(traceless_part(alpha))};
}

FengShangTensor feng_shang_from_alpha(const TwoFormField& alpha) {
  const int n = alpha.n();
  if (n < 2) throw std::invalid_argument("feng_shang_from_alpha: n must be >= 2");
  auto shared = std::make_shared<const TwoFormField>(alpha);

  // Block layout: rows/cols 0..n-1 are q, n..2n-1 are p.
  auto assemble = [n](const Eigen::MatrixXd& P, const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    Eigen::MatrixXd a(2 * n, 2 * n);
    a.topLeftCorner(n, n) = P;
    a.topRightCorner(n, n) = -A;
    a.bottomLeftCorner(n, n) = A.transpose();
    a.bottomRightCorner(n, n) = Q;
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::logic_error("feng_shang_from_alpha: assembled tensor is not antisymmetric");
    return a;
  };

  FengShangTensor t;
  t.n_total = 2 * n;
  t.a = [shared, assemble](const PhaseState& x) {
    const PointwiseJet jet = jet_at(*shared, x);
    return assemble(jet.P, jet.A, jet.Q);
  };
  t.partials = [shared, assemble, n](const PhaseState& x) {
    const PointwiseJet jet = jet_at(*shared, x);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(static_cast<std::size_t>(2 * n));
    for (int by_p = 0; by_p < 2; ++by_p) {
      for (int m = 0; m < n; ++m) {
        Eigen::MatrixXd dP(n, n), dA(n, n), dQ(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            dP(i, j) = by_p ? jet.dP_dp(i, j, m) : jet.dP_dq(i, j, m);
            dA(i, j) = by_p ? jet.dA_dp(i, j, m) : jet.dA_dq(i, j, m);
            dQ(i, j) = by_p ? jet.dQ_dp(i, j, m) : jet.dQ_dq(i, j, m);
          }
        }
        out.push_back(assemble(dP, dA, dQ));
      }
    }
    return out;
  };
  return t;
}

GeneratedField feng_shang_field(const FengShangTensor& t) {
  if (t.n_total < 2 || t.n_total % 2 != 0) throw std::invalid_argument("feng_shang_field: bad dimension");
  if (!t.partials) throw std::invalid_argument("feng_shang_field: tensor has no partials");
  const int dim = t.n_total;
  auto partials = t.partials;
  return GeneratedField(dim / 2, FieldKind::FengShang, [partials, dim](const PhaseState& x) {
    const auto d = partials(x);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) v[i] += d[static_cast<std::size_t>(j)](i, j);
    return FiberVector(v);
  });
}

}  // namespace volflow
