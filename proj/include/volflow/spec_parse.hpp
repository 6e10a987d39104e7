#pragma once

#include <string>
#include <vector>

#include "volflow/forms.hpp"

namespace volflow {

// Alpha specifications accepted by the command line and the Python module:
//   zero | coupled-oscillators | random:<seed>
//   or ';'-separated assignments NAME=<polynomial>, NAME one of
//   Qij, Aij, Pij (1-based indices) or H (adds H omega/(n-1)).
// Example: "A12=q1;H=0.5*p1^2". Throws std::invalid_argument.
TwoFormField parse_alpha_spec(const std::string& spec, int n);

// "1,2.5,-3" -> {1, 2.5, -3}. Throws std::invalid_argument.
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace volflow
