#include "calibkit/form_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace calib {

namespace {

struct Term {
  double c = 1.0;
  std::vector<int> idx;  // 1-based
};

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

double parse_number(const std::string& s, std::size_t& i) {
  const std::size_t start = i;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == 'e' || s[i] == 'E' ||
                          ((s[i] == '+' || s[i] == '-') && i > start && (s[i - 1] == 'e' || s[i - 1] == 'E')))) {
    ++i;
  }
  // A coefficient must be joined to its basis term by '*': "2e12" reads as
  // the number 2e12.
  const std::string tok = s.substr(start, i - start);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError("bad coefficient '" + tok + "'");
  return v;
}

std::vector<int> parse_basis(const std::string& s, std::size_t& i) {
  if (i >= s.size() || s[i] != 'e') throw ParseError("expected a basis term 'e<digits>' at position " + std::to_string(i));
  ++i;
  std::vector<int> idx;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    idx.push_back(s[i] - '0');
    ++i;
  }
  if (idx.empty()) throw ParseError("basis term without indices");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] == 0) throw ParseError("indices are 1-based");
    if (k > 0 && idx[k] <= idx[k - 1]) throw ParseError("index tuple is not strictly increasing");
  }
  return idx;
}

std::vector<Term> parse_terms(const std::string& s) {
  std::vector<Term> out;
  std::size_t i = 0;
  skip_ws(s, i);
  if (i == s.size()) throw ParseError("empty form literal");
  bool first = true;
  while (true) {
    skip_ws(s, i);
    if (i == s.size()) break;
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip_ws(s, i);
    } else if (!first) {
      throw ParseError("expected '+' or '-' between terms");
    }
    Term t;
    if (i < s.size() && s[i] == 'e') {
      t.idx = parse_basis(s, i);
    } else {
      t.c = parse_number(s, i);
      skip_ws(s, i);
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip_ws(s, i);
        t.idx = parse_basis(s, i);
      }
    }
    t.c *= sign;
    out.push_back(std::move(t));
    first = false;
  }
  return out;
}

}  // namespace

AltForm parse_form_literal(const std::string& text, int n) {
  const auto terms = parse_terms(text);
  const int p = static_cast<int>(terms.front().idx.size());
  int max_idx = 0;
  for (const auto& t : terms) {
    if (static_cast<int>(t.idx.size()) != p) throw ParseError("terms of different degree");
    for (int i : t.idx) max_idx = std::max(max_idx, i);
  }
  if (n == 0) n = std::max(max_idx, p);
  if (max_idx > n) throw ParseError("index exceeds the ambient dimension");
  if (n > 9) throw ParseError("form literals support n <= 9; use JSON");
  CoeffMap m;
  for (const auto& t : terms) {
    std::vector<int> zero_based(t.idx);
    for (int& i : zero_based) --i;
    const Mask key = mask::from_indices(zero_based, n);
    auto [it, inserted] = m.try_emplace(key, t.c);
    if (!inserted) it->second += t.c;
  }
  return AltForm(n, p, std::move(m));
}

std::string format_form_literal(const AltForm& a) {
  if (a.dim() > 9) throw ParseError("form literals support n <= 9");
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    const double mag = std::abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (a.degree() == 0) {
      os << mag;
    } else {
      if (mag != 1.0) os << mag << "*";
      os << "e";
      for (int i : mask::indices(m)) os << (i + 1);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json form_to_json(const AltForm& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : a.terms()) {
    std::vector<int> idx = mask::indices(m);
    for (int& i : idx) ++i;
    terms.push_back({{"idx", idx}, {"c", c}});
  }
  return {{"n", a.dim()}, {"p", a.degree()}, {"terms", terms}};
}

AltForm form_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int p = j.at("p").get<int>();
    if (n < 0 || n > kMaxDim || p < 0 || p > n) throw ParseError("(n, p) out of range");
    CoeffMap m;
    for (const auto& t : j.at("terms")) {
      std::vector<int> idx = t.at("idx").get<std::vector<int>>();
      if (static_cast<int>(idx.size()) != p) throw ParseError("term length differs from p");
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 1 || idx[k] > n) throw ParseError("index out of range");
        if (k > 0 && idx[k] <= idx[k - 1]) throw ParseError("index tuple is not strictly increasing");
        --idx[k];
      }
      const Mask key = mask::from_indices(idx, n);
      const double c = t.at("c").get<double>();
      auto [it, inserted] = m.try_emplace(key, c);
      if (!inserted) it->second += c;
    }
    return AltForm(n, p, std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed form JSON: ") + e.what());
  }
}

}  // namespace calib
