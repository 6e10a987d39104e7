#pragma once

#include <random>

#include "volflow/forms.hpp"
#include "volflow/polynomial.hpp"
#include "volflow/systems.hpp"

namespace volflow {

using Rng = std::mt19937_64;

// Sum of `terms` monomials of total degree <= max_degree in `vars` variables,
// coefficients uniform in [-amplitude, amplitude].
Polynomial random_polynomial(int vars, int max_degree, int terms, Rng& rng, double amplitude = 1.0);

TwoFormField random_two_form(int n, Rng& rng, const RandomAlphaOptions& options = {});

// Random 1-form with polynomial components (analytic Hessians available).
OneFormField random_one_form(int n, Rng& rng, int max_degree = 3, int terms = 3);

ScalarField random_scalar_field(int n, Rng& rng, int max_degree = 3, int terms = 4);

// Uniform point in [-radius, radius]^{2n}.
PhaseState random_point(int n, Rng& rng, double radius = 1.0);

}  // namespace volflow
