#pragma once

// Small text utilities shared by ingestion, retrieval and explanation.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace apiclarify::text {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Trims and collapses every whitespace run into one space.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::string normalize_label(std::string_view s) { return to_lower(collapse_whitespace(s)); }

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Alphanumeric runs, with camelCase and digit boundaries split:
/// "getAbsolutePath" -> {"get", "Absolute", "Path"}.
inline std::vector<std::string> identifier_words(std::string_view s) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!is_alpha(c) && !is_digit(c)) {
      flush();
      continue;
    }
    if (!current.empty()) {
      char prev = current.back();
      bool boundary = false;
      if (is_upper(c) && !is_upper(prev) && !is_digit(prev)) boundary = true;
      // "URLConnection": split before the last capital of an acronym run.
      if (is_upper(c) && is_upper(prev) && i + 1 < s.size() && std::islower(static_cast<unsigned char>(s[i + 1])))
        boundary = true;
      if (is_digit(c) != is_digit(prev)) boundary = true;
      if (boundary) flush();
    }
    current.push_back(c);
  }
  flush();
  return words;
}

/// Suffix stripper for index terms (s/es/ed/ing). A trailing "e" is dropped
/// afterwards so "parse", "parses", "parsed" and "parsing" share a stem.
inline std::string stem(std::string_view word) {
  std::string w = to_lower(word);
  auto strip = [&](std::size_t n) { w.erase(w.size() - n); };
  if (w.size() > 4 && ends_with(w, "ies")) {
    strip(3);
    w += 'y';
  } else if (w.size() > 4 && ends_with(w, "ing")) {
    strip(3);
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]) strip(1);
  } else if (w.size() > 3 && ends_with(w, "ed")) {
    strip(2);
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && w.back() != 's') strip(1);
  } else if (w.size() > 3 && (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
                              ends_with(w, "xes") || ends_with(w, "zes"))) {
    strip(2);
  } else if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us")) {
    strip(1);
  }
  if (w.size() > 3 && w.back() == 'e') strip(1);
  return w;
}

/// Base form of a third-person verb: "returns" -> "return", "fetches" ->
/// "fetch", "applies" -> "apply", "parses" -> "parse".
inline std::string verb_lemma(std::string_view word) {
  std::string w = to_lower(word);
  if (w.size() > 3 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
                       ends_with(w, "xes") || ends_with(w, "zes")))
    return w.substr(0, w.size() - 2);
  if (w == "does" || w == "goes") return w.substr(0, w.size() - 2);
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss")) return w.substr(0, w.size() - 1);
  return w;
}

}  // namespace apiclarify::text
