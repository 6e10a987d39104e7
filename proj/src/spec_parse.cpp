#include "volflow/spec_parse.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

#include "volflow/random_fields.hpp"
#include "volflow/systems.hpp"

namespace volflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("bad seed '" + text + "'");
  return v;
}

}  // namespace

TwoFormField parse_alpha_spec(const std::string& spec, int n) {
  if (n < 2) throw std::invalid_argument("alpha spec needs n >= 2, got " + std::to_string(n));
  const std::string s = trim(spec);
  if (s.empty()) throw std::invalid_argument("empty alpha spec");
  if (s == "zero") return TwoFormField(n);
  if (s == "coupled-oscillators") {
    if (n != 2) throw std::invalid_argument("coupled-oscillators is defined for n = 2");
    return *coupled_oscillators().alpha;
  }
  if (s.rfind("random:", 0) == 0) {
    Rng rng(parse_seed(s.substr(7)));
    return random_two_form(n, rng);
  }

  TwoFormField alpha(n);
  for (const std::string& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected NAME=expr in '" + item + "'");
    const std::string name = trim(item.substr(0, eq));
    const ScalarField f = ScalarField::from_polynomial(parse_polynomial(item.substr(eq + 1), n));
    if (name == "H") {
      alpha += hamiltonian_two_form(f, n);
      continue;
    }
    if (name.size() != 3 || !std::isdigit(static_cast<unsigned char>(name[1])) ||
        !std::isdigit(static_cast<unsigned char>(name[2])))
      throw std::invalid_argument("unknown component '" + name + "'");
    const int i = name[1] - '1', j = name[2] - '1';
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("index out of range in '" + name + "' for n = " + std::to_string(n));
    TwoFormField term(n);
    switch (name[0]) {
      case 'Q': term.set_Q(i, j, f); break;
      case 'A': term.set_A(i, j, f); break;
      case 'P': term.set_P(i, j, f); break;
      default: throw std::invalid_argument("unknown component '" + name + "'");
    }
    alpha += term;
  }
  return alpha;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split(text, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& tok : split(text, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace volflow
