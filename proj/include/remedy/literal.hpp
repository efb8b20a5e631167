#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace remedy {

// A hyperparameter value as it appears in traces, domains and constraints.
using Literal = std::variant<bool, std::int64_t, double, std::string>;

inline bool is_numeric(const Literal& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}
inline bool is_string(const Literal& v) { return std::holds_alternative<std::string>(v); }
inline bool is_bool(const Literal& v) { return std::holds_alternative<bool>(v); }

// Numeric value of an int or double literal; nullopt otherwise.
std::optional<double> as_number(const Literal& v);

// Value equality: ints and doubles compare numerically, other kinds only
// within their own kind.
bool literal_equal(const Literal& a, const Literal& b);

// Python-style source form: "text", True, 3, 0.5 (doubles always carry a
// '.' or exponent so they re-parse as doubles).
std::string to_source(const Literal& v);

// Bare form used in explanations: text, True, 3, 0.5.
std::string to_display(const Literal& v);

// Shortest round-trip decimal form of a double, always marked as real.
std::string format_double(double d);

}  // namespace remedy
