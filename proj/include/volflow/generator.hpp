#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "volflow/exterior.hpp"
#include "volflow/forms.hpp"

namespace volflow {

enum class FieldKind { FromTwoForm, Hamiltonian, FengShang, Sum, Direct };

std::string to_string(FieldKind kind);

// A vector field on R^{2n}. Evaluation is pure and deterministic.
class GeneratedField {
 public:
  using EvalFn = std::function<FiberVector(const PhaseState&)>;

  GeneratedField(int n, FieldKind kind, EvalFn eval);

  static GeneratedField zero(int n);

  int n() const { return n_; }
  FieldKind kind() const { return kind_; }

  FiberVector operator()(const PhaseState& x) const;

  // Provenance, when known.
  const TwoFormField* source_two_form() const { return two_form_.get(); }
  const ScalarField* hamiltonian() const { return hamiltonian_ ? &*hamiltonian_ : nullptr; }
  GeneratedField& with_source(TwoFormField alpha);
  GeneratedField& with_hamiltonian(ScalarField H);

  friend GeneratedField operator+(const GeneratedField& a, const GeneratedField& b);

 private:
  int n_;
  FieldKind kind_;
  EvalFn eval_;
  std::shared_ptr<const TwoFormField> two_form_;
  std::optional<ScalarField> hamiltonian_;
};

// The coordinate formula at one jet:
//   qdot^i = dP^ij/dq^j + dA^j_j/dp_i - dA^i_j/dp_j
//   pdot_i = dQ_ij/dp_j - dA^j_j/dq^i + dA^j_i/dq^j
FiberVector field_from_jet(const PointwiseJet& jet);

// X with i_X(omega^n) = -n(n-1) d alpha ^ omega^{n-2}.
GeneratedField generate(const TwoFormField& alpha);

// X_H = (dH/dp_i) d/dq^i - (dH/dq^i) d/dp_i, any n >= 1.
GeneratedField hamiltonian_field(const ScalarField& H, int n);

// (X_{tr alpha}, X') with X' generated by alpha - (tr alpha/(n-1)) omega.
std::pair<GeneratedField, GeneratedField> decompose(const TwoFormField& alpha);

// Antisymmetric tensor field a^{ij} on R^{2n}, coordinates ordered (q, p).
struct FengShangTensor {
  int n_total = 0;
  std::function<Eigen::MatrixXd(const PhaseState&)> a;
  // Element m of the result is the matrix of d a^{ij} / d x^m.
  std::function<std::vector<Eigen::MatrixXd>(const PhaseState&)> partials;
};

// a = [[P, -A], [A^T, Q]]
FengShangTensor feng_shang_from_alpha(const TwoFormField& alpha);

// X^i = d a^{ij} / d x^j
GeneratedField feng_shang_field(const FengShangTensor& t);

}  // namespace volflow
