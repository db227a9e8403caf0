#pragma once

// Helpers for fully qualified method names such as
// "java.nio.file.Paths.get(java.lang.String, java.lang.String...)".

#include <string>
#include <string_view>

#include "text.hpp"

namespace apiclarify::fqn {

/// "a.b.C.m(int)" -> "a.b.C.m"
inline std::string strip_params(std::string_view name) {
  auto paren = name.find('(');
  return text::collapse_whitespace(name.substr(0, paren));
}

/// "a.b.C.m(int)" -> "int"; no parentheses -> "".
inline std::string params(std::string_view name) {
  auto open = name.find('(');
  auto close = name.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return {};
  return text::collapse_whitespace(name.substr(open + 1, close - open - 1));
}

inline bool has_param_list(std::string_view name) {
  auto open = name.find('(');
  return open != std::string_view::npos && name.find(')', open) != std::string_view::npos;
}

/// "a.b.C.m(int)" -> "m"
inline std::string method_name(std::string_view name) {
  std::string bare = strip_params(name);
  auto dot = bare.rfind('.');
  return dot == std::string::npos ? bare : bare.substr(dot + 1);
}

/// "a.b.C.m(int)" -> "a.b.C"
inline std::string class_name(std::string_view name) {
  std::string bare = strip_params(name);
  auto dot = bare.rfind('.');
  return dot == std::string::npos ? std::string{} : bare.substr(0, dot);
}

/// "a.b.C" -> "C"
inline std::string simple_class_name(std::string_view cls) {
  auto dot = cls.rfind('.');
  return std::string(dot == std::string_view::npos ? cls : cls.substr(dot + 1));
}

/// Parameter-list-insensitive equality: "a.b.C.m" matches "a.b.C.m(int)".
inline bool same_method(std::string_view a, std::string_view b) { return strip_params(a) == strip_params(b); }

}  // namespace apiclarify::fqn
