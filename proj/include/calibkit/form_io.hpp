#pragma once

// Text and JSON encodings of AltForm. Indices are 1-based on the wire.
//
//   literal:  "e123 + e145 - e167", "0.5*e12 - 2*e34", "1" (a 0-form)
//   JSON:     {"n": 7, "p": 3, "terms": [{"idx": [1,2,3], "c": 1.0}, ...]}
//
// Both parsers reject index tuples that are not strictly increasing.

#include <string>

#include <json.hpp>

#include "calibkit/exterior.hpp"

namespace calib {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Single-digit indices, so n <= 9. If n is 0 it is inferred as the largest
// index that appears.
AltForm parse_form_literal(const std::string& text, int n = 0);
std::string format_form_literal(const AltForm& a);

nlohmann::json form_to_json(const AltForm& a);
AltForm form_from_json(const nlohmann::json& j);

}  // namespace calib
