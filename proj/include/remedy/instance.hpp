#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "remedy/literal.hpp"

namespace remedy {

// (operator, hyperparameter) pair; written "Operator.hyperparam" in files.
struct BindingKey {
  std::string op;
  std::string hp;
  auto operator<=>(const BindingKey&) const = default;
};

std::string to_string(const BindingKey& key);

// Splits at the first '.'; nullopt if either side would be empty.
std::optional<BindingKey> parse_binding_key(std::string_view text);

// One evaluated point of the search space. The bindings map is H_p: absent
// keys mean the operator was not chosen (or the hyperparameter is unbound).
struct PipelineInstance {
  std::string id;
  bool success = false;
  std::map<BindingKey, Literal> bindings;
  std::optional<double> loss;

  const Literal* find(const std::string& op, const std::string& hp) const {
    auto it = bindings.find(BindingKey{op, hp});
    return it == bindings.end() ? nullptr : &it->second;
  }
  bool binds_operator(const std::string& op) const;
};

}  // namespace remedy
