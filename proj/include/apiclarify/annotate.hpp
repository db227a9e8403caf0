#pragma once

// Description normalization and the built-in deterministic annotator.
//
// The annotator is a small lexicon + pattern tagger aimed at javadoc-style
// first sentences ("This method returns the absolute path string of ...").
// Corpora annotated by an external SRL/POS tool bypass it entirely through
// the annotation exchange format (see ingest_io.hpp).

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "kg.hpp"
#include "text.hpp"

namespace apiclarify {

enum class SyntacticRole {
  Verb,
  DirectObject,
  Preposition,
  PrepositionObject,
  DirectObjectModifier,
  PrepositionObjectModifier,
};

inline constexpr std::array<SyntacticRole, 6> kAllSyntacticRoles = {
    SyntacticRole::Verb,       SyntacticRole::DirectObject,         SyntacticRole::Preposition,
    SyntacticRole::PrepositionObject, SyntacticRole::DirectObjectModifier, SyntacticRole::PrepositionObjectModifier};

constexpr std::string_view to_string(SyntacticRole role) {
  switch (role) {
    case SyntacticRole::Verb: return "Verb";
    case SyntacticRole::DirectObject: return "DirectObject";
    case SyntacticRole::Preposition: return "Preposition";
    case SyntacticRole::PrepositionObject: return "PrepositionObject";
    case SyntacticRole::DirectObjectModifier: return "DirectObjectModifier";
    case SyntacticRole::PrepositionObjectModifier: return "PrepositionObjectModifier";
  }
  return "";
}

inline std::optional<SyntacticRole> parse_syntactic_role(std::string_view name) {
  for (auto role : kAllSyntacticRoles)
    if (to_string(role) == name) return role;
  return std::nullopt;
}

/// The nine PropBank modifier roles that become event constraints.
enum class ConstraintRole { Loc, Dir, Mnr, Ext, Tmp, Gol, Prp, Prd, Adv };

inline constexpr std::array<ConstraintRole, 9> kAllConstraintRoles = {
    ConstraintRole::Loc, ConstraintRole::Dir, ConstraintRole::Mnr, ConstraintRole::Ext, ConstraintRole::Tmp,
    ConstraintRole::Gol, ConstraintRole::Prp, ConstraintRole::Prd, ConstraintRole::Adv};

constexpr std::string_view to_string(ConstraintRole role) {
  switch (role) {
    case ConstraintRole::Loc: return "ARGM-LOC";
    case ConstraintRole::Dir: return "ARGM-DIR";
    case ConstraintRole::Mnr: return "ARGM-MNR";
    case ConstraintRole::Ext: return "ARGM-EXT";
    case ConstraintRole::Tmp: return "ARGM-TMP";
    case ConstraintRole::Gol: return "ARGM-GOL";
    case ConstraintRole::Prp: return "ARGM-PRP";
    case ConstraintRole::Prd: return "ARGM-PRD";
    case ConstraintRole::Adv: return "ARGM-ADV";
  }
  return "";
}

/// nullopt for roles outside the nine (ARGM-ADJ, ARGM-DIS, ARGM-CAU, ...),
/// which are not event constraints.
inline std::optional<ConstraintRole> parse_constraint_role(std::string_view name) {
  for (auto role : kAllConstraintRoles)
    if (to_string(role) == name) return role;
  return std::nullopt;
}

constexpr FunctionalRelationKind relation_for(ConstraintRole role) {
  switch (role) {
    case ConstraintRole::Loc: return FunctionalRelationKind::HasLocation;
    case ConstraintRole::Dir: return FunctionalRelationKind::HasDirection;
    case ConstraintRole::Mnr: return FunctionalRelationKind::HasManner;
    case ConstraintRole::Ext: return FunctionalRelationKind::HasExtent;
    case ConstraintRole::Tmp: return FunctionalRelationKind::HasTemporal;
    case ConstraintRole::Gol: return FunctionalRelationKind::HasGoal;
    case ConstraintRole::Prp: return FunctionalRelationKind::HasPurpose;
    case ConstraintRole::Prd: return FunctionalRelationKind::HasResult;
    case ConstraintRole::Adv: return FunctionalRelationKind::HasCondition;
  }
  return FunctionalRelationKind::HasCondition;
}

struct Token {
  std::string surface;
  std::string pos;  // universal tags: NOUN, PROPN, VERB, ADJ, ADV, NUM, DET, ADP, ...
};

struct FunctionalSpan {
  SyntacticRole role;
  std::size_t start;  // token index, inclusive
  std::size_t end;    // exclusive
};

struct ConstraintSpan {
  ConstraintRole role;
  std::size_t start;
  std::size_t end;
};

struct AnnotatedSentence {
  std::vector<Token> tokens;
  std::vector<FunctionalSpan> functional_spans;
  std::vector<ConstraintSpan> constraint_spans;

  std::string span_text(std::size_t start, std::size_t end) const {
    std::vector<std::string> words;
    for (std::size_t i = start; i < end && i < tokens.size(); ++i) words.push_back(tokens[i].surface);
    return text::join(words, " ");
  }

  /// Throws FormatError when a span is out of bounds, empty, or overlaps a
  /// span of the other family.
  void validate() const {
    auto in_bounds = [&](std::size_t s, std::size_t e) { return s < e && e <= tokens.size(); };
    for (const auto& f : functional_spans)
      if (!in_bounds(f.start, f.end)) throw Error(ErrorCode::FormatError, "functional span out of bounds");
    for (const auto& c : constraint_spans) {
      if (!in_bounds(c.start, c.end)) throw Error(ErrorCode::FormatError, "constraint span out of bounds");
      for (const auto& f : functional_spans)
        if (c.start < f.end && f.start < c.end)
          throw Error(ErrorCode::FormatError, "constraint span overlaps a functional span");
    }
  }
};

namespace lexicon {

inline const std::set<std::string, std::less<>>& determiners() {
  static const std::set<std::string, std::less<>> words = {
      "a",    "an",   "the",  "this", "these", "those",   "its",  "their", "his",  "her",  "each", "every",
      "all",  "any",  "some", "no",   "another", "both", "either", "such", "our",  "your", "my",   "whose"};
  return words;
}

inline const std::set<std::string, std::less<>>& prepositions() {
  static const std::set<std::string, std::less<>> words = {
      "of",     "to",     "in",      "at",     "on",      "for",    "from",   "with",    "by",
      "into",   "onto",   "up",      "down",   "over",    "under",  "through", "as",     "within",
      "without", "between", "after", "before", "during",  "until",  "since",  "per",     "via",
      "across", "along",  "against", "toward", "towards", "upon",   "about",  "among",   "beyond",
      "behind", "inside", "outside", "using", "around"};
  return words;
}

inline const std::set<std::string, std::less<>>& conjunctions() {
  static const std::set<std::string, std::less<>> words = {"and", "or", "but", "nor"};
  return words;
}

inline const std::set<std::string, std::less<>>& subordinators() {
  static const std::set<std::string, std::less<>> words = {"when",  "while", "if",   "unless", "whether",
                                                           "because", "although", "though", "once", "whenever",
                                                           "where", "so",    "that", "which",  "who"};
  return words;
}

inline const std::set<std::string, std::less<>>& auxiliaries() {
  static const std::set<std::string, std::less<>> words = {"is",    "are",  "was",   "were",  "be",    "been",
                                                           "being", "can",  "could", "may",   "might", "must",
                                                           "shall", "should", "will", "would", "has",   "have",
                                                           "had",   "do",   "does",  "did"};
  return words;
}

inline const std::set<std::string, std::less<>>& pronouns() {
  static const std::set<std::string, std::less<>> words = {"it", "they", "them", "he", "she", "we", "you", "itself"};
  return words;
}

inline const std::set<std::string, std::less<>>& numerals() {
  static const std::set<std::string, std::less<>> words = {
      "zero", "one",    "two",    "three", "four",     "five",    "six",    "seven",
      "eight", "nine",  "ten",    "eleven", "twelve",  "hundred", "thousand", "million"};
  return words;
}

/// Java built-in type words; as a pre-head noun they are type modifiers.
inline const std::set<std::string, std::less<>>& type_words() {
  static const std::set<std::string, std::less<>> words = {"byte",   "int",    "integer", "float", "char",
                                                           "boolean", "double", "long",    "short"};
  return words;
}

/// Trailing nouns that name a representation rather than a concept
/// ("path string", "path object").
inline const std::set<std::string, std::less<>>& representation_nouns() {
  static const std::set<std::string, std::less<>> words = {"string", "object"};
  return words;
}

inline const std::set<std::string, std::less<>>& extent_adverbs() {
  static const std::set<std::string, std::less<>> words = {"fully", "partially", "completely", "entirely", "wholly"};
  return words;
}

inline const std::set<std::string, std::less<>>& adverbs() {
  static const std::set<std::string, std::less<>> words = {
      "also", "already", "not", "never", "always", "very", "too",  "again", "then",
      "now",  "here",    "there", "still", "just", "only", "even", "otherwise", "immediately"};
  return words;
}

inline const std::set<std::string, std::less<>>& adjectives() {
  static const std::set<std::string, std::less<>> words = {
      "absolute", "abstract", "current",  "default",  "new",      "old",      "full",     "empty",    "true",
      "false",    "next",     "previous", "last",     "first",    "given",    "local",    "remote",   "entire",
      "whole",    "same",     "different", "other",   "single",   "multiple", "unique",   "maximum",  "minimum",
      "real",     "relative", "native",   "temporary", "public",  "private",  "static",   "final",    "null",
      "valid",    "invalid",  "available", "high",    "low",      "large",    "small",    "big",      "little",
      "open",     "active",   "original", "primary",  "secondary", "raw",     "simple",   "main",     "top",
      "bottom",   "left",     "right",    "internal", "external", "lower",    "upper",    "lowercase", "uppercase",
      "random",   "certain",  "particular", "specific", "several", "many",    "few",      "more",     "most",
      "less",     "least",    "own",      "similar",  "equal",    "optional", "mutable",  "immutable", "hidden",
      "visible",  "secure",   "standard", "exact",    "decimal",  "binary",   "hexadecimal", "numeric", "fixed",
      "daily",    "best",     "normal",   "free",     "total",    "average",  "whitespace", "leading", "trailing",
      "pending"};
  return words;
}

inline const std::set<std::string, std::less<>>& adjective_suffix_exceptions() {
  static const std::set<std::string, std::less<>> words = {
      "interval", "traversal", "retrieval", "renewal", "disposal", "reversal", "dismissal", "rental", "signal",  "terminal", "literal", "journal", "portal",   "removal", "proposal", "approval",
      "principal", "trial",  "material", "animal",  "capital", "hospital", "arrival", "archive",  "drive",
      "directive", "topic",  "logic",    "traffic", "music",   "magic",    "table",   "variable", "cable",
      "bible",    "executable", "callable", "runnable", "iterable", "comparable", "closeable", "serializable",
      "throwable", "appendable", "readable"};
  return words;
}

inline const std::set<std::string, std::less<>>& ing_nouns() {
  static const std::set<std::string, std::less<>> words = {
      "string",  "thing",   "nothing", "something", "anything", "everything", "ring",  "spring",  "king",
      "encoding", "padding", "mapping", "setting",  "binding",  "heading",    "ceiling", "rounding", "timing",
      "warning", "listing", "drawing", "building",  "meaning",  "morning",    "evening", "ending",  "beginning",
      "spelling", "casing", "offering", "opening"};
  return words;
}

/// Past participles that do not end in "-ed".
inline const std::set<std::string, std::less<>>& irregular_participles() {
  static const std::set<std::string, std::less<>> words = {"held",  "made", "built", "known", "shown", "written",
                                                           "taken", "found", "sent",  "kept",  "done",  "chosen"};
  return words;
}

inline const std::set<std::string, std::less<>>& ed_nonverbs() {
  static const std::set<std::string, std::less<>> words = {"need", "speed", "seed", "feed", "bed", "red",
                                                           "shed", "hundred", "indeed", "embed"};
  return words;
}

/// Verbs javadoc first sentences start with, in third-person form.
inline const std::set<std::string, std::less<>>& leading_verbs() {
  static const std::set<std::string, std::less<>> words = {
      "returns",  "gets",      "sets",      "converts",  "creates",   "adds",       "removes",   "finds",
      "moves",    "parses",    "fetches",   "destroys",  "writes",    "reads",      "tests",     "checks",
      "compares", "computes",  "obtains",   "appends",   "inserts",   "replaces",   "closes",    "opens",
      "constructs", "tells",   "determines", "indicates", "retrieves", "initializes", "resets",  "clears",
      "copies",   "deletes",   "formats",   "loads",     "stores",    "sends",      "receives",  "starts",
      "stops",    "waits",     "notifies",  "invokes",   "performs",  "prints",     "rounds",    "splits",
      "joins",    "encodes",   "decodes",   "encrypts",  "decrypts",  "updates",    "finishes",  "generates",
      "hashes",   "sorts",     "searches",  "matches",   "flushes",   "skips",      "marks",     "registers",
      "unregisters", "binds",  "connects",  "accepts",   "resolves",  "normalizes", "translates", "truncates",
      "increments", "decrements", "subtracts", "multiplies", "divides", "makes",    "causes",    "ensures",
      "provides", "produces",  "applies",   "executes",  "submits",   "schedules",  "cancels",   "interrupts",
      "allocates", "releases", "acquires",  "locks",     "unlocks",   "wraps",      "lists",     "maps",
      "filters",  "collects",  "counts",    "reverses",  "fills",     "trims",      "concatenates", "extracts",
      "calculates", "queries", "walks",     "visits",    "renames",   "transfers",  "reports",   "answers",
      "yields",   "builds",    "casts",     "adjusts",   "assigns",   "attaches",   "detaches",  "displays",
      "draws",    "paints",    "selects",   "shows",     "hides",     "specifies",  "translates", "verifies",
      "signs",    "digests",   "processes", "handles",   "emits",     "pushes",     "pops",      "peeks",
      "offers",   "polls",     "drains",    "takes",     "puts",      "places",   "associates",  "holds"};
  return words;
}

inline bool is_adjective(std::string_view w) {
  if (adjectives().count(w)) return true;
  if (adjective_suffix_exceptions().count(w)) return false;
  if (w.find('-') != std::string_view::npos) return true;
  for (std::string_view suffix : {"al", "ous", "ive", "able", "ible", "ful", "less", "ic"})
    if (w.size() > suffix.size() + 2 && text::ends_with(w, suffix)) return true;
  return false;
}

}  // namespace lexicon

/// Part-of-speech for one token, without sentence context.
inline std::string tag_token(std::string_view surface) {
  static const std::set<std::string, std::less<>> punct = {",", ".", ";", ":", "!", "?"};
  if (punct.count(surface)) return "PUNCT";
  std::string w = text::to_lower(surface);
  bool all_digits = !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return text::is_digit(c) || c == '.'; });
  if (all_digits || lexicon::numerals().count(w)) return "NUM";
  if (lexicon::determiners().count(w)) return "DET";
  if (lexicon::conjunctions().count(w)) return "CCONJ";
  if (w == "using") return "VERB";
  if (lexicon::prepositions().count(w)) return "ADP";
  if (lexicon::subordinators().count(w)) return "SCONJ";
  if (lexicon::auxiliaries().count(w)) return "AUX";
  if (lexicon::pronouns().count(w)) return "PRON";
  if (lexicon::type_words().count(w)) return "NOUN";
  if (lexicon::extent_adverbs().count(w) || lexicon::adverbs().count(w)) return "ADV";
  if (w.size() > 4 && text::ends_with(w, "ly") && !text::ends_with(w, "ply") && w != "assembly" && w != "family")
    return "ADV";
  if (lexicon::leading_verbs().count(w) || lexicon::irregular_participles().count(w)) return "VERB";
  if (w.size() > 4 && text::ends_with(w, "ing") && !lexicon::ing_nouns().count(w)) return "VERB";
  if (w.size() > 3 && text::ends_with(w, "ed") && !lexicon::ed_nonverbs().count(w)) return "VERB";
  if (lexicon::is_adjective(w)) return "ADJ";
  // camelCase identifiers such as "FileSystem" read as proper nouns.
  bool inner_upper = std::any_of(surface.begin() + 1, surface.end(), [](char c) { return text::is_upper(c); });
  if (surface.size() > 1 && text::is_upper(surface[0]) && inner_upper) return "PROPN";
  return "NOUN";
}

/// Splits words from the punctuation that ends them; hyphenated words and
/// dotted identifiers stay whole.
inline std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  for (const auto& raw : text::split(text::collapse_whitespace(sentence), ' ')) {
    if (raw.empty()) continue;
    std::string word = raw;
    std::vector<std::string> trailing;
    while (!word.empty() && std::string_view(",.;:!?").find(word.back()) != std::string_view::npos) {
      trailing.insert(trailing.begin(), std::string(1, word.back()));
      word.pop_back();
    }
    if (!word.empty()) out.push_back(word);
    for (auto& p : trailing) out.push_back(p);
  }
  return out;
}

inline bool starts_with_verb(std::string_view sentence) {
  auto words = tokenize(sentence);
  std::size_t first = 0;
  while (first + 1 < words.size() && tag_token(words[first]) == "ADV") ++first;
  if (words.empty()) return false;
  std::string w = text::to_lower(words[first]);
  if (lexicon::leading_verbs().count(w)) return true;
  if (!std::all_of(w.begin(), w.end(), [](char c) { return text::is_alpha(c); })) return false;
  return w.size() > 3 && text::ends_with(w, "s") && !text::ends_with(w, "ss") && !text::ends_with(w, "us") &&
         tag_token(w) == "NOUN";
}

/// Removes parenthesized content, keeps only the first sentence, collapses
/// whitespace, and prefixes verb-initial sentences with "This method".
inline std::string normalize_description(std::string_view raw) {
  std::string no_parens;
  int depth = 0;
  for (char c : raw) {
    if (c == '(') {
      ++depth;
      continue;
    }
    if (c == ')' && depth > 0) {
      --depth;
      continue;
    }
    if (depth == 0) no_parens.push_back(c);
  }
  std::string s = text::collapse_whitespace(no_parens);
  // Removing "(...)" can leave "word ," behind.
  std::string tidy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ' ' && i + 1 < s.size() && std::string_view(",.;:").find(s[i + 1]) != std::string_view::npos) continue;
    tidy.push_back(s[i]);
  }
  std::string first;
  for (std::size_t i = 0; i < tidy.size(); ++i) {
    first.push_back(tidy[i]);
    char c = tidy[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == tidy.size() || text::is_space(tidy[i + 1]))) break;
  }
  first = text::collapse_whitespace(first);
  if (first.empty()) return first;
  if (starts_with_verb(first)) {
    first[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(first[0])));
    first = "This method " + first;
  }
  return first;
}

namespace detail {

struct NounPhrase {
  std::size_t start = 0;       // first token, determiners included
  std::size_t end = 0;         // one past the last token, of-chain included
  std::size_t head_start = 0;  // head phrase, e.g. "path string"
  std::size_t head_end = 0;
  std::vector<std::size_t> modifiers;
};

inline bool is_nominal(const Token& t) { return t.pos == "NOUN" || t.pos == "PROPN"; }

inline bool is_type_word(const Token& t) { return lexicon::type_words().count(text::to_lower(t.surface)) > 0; }

/// Parses "[det]* [modifier|noun]* noun (of NP)*" starting at `i`.
inline std::optional<NounPhrase> parse_noun_phrase(const std::vector<Token>& tokens, std::size_t i) {
  NounPhrase np;
  np.start = i;
  while (i < tokens.size() && tokens[i].pos == "DET") ++i;
  std::size_t body = i;
  bool seen_noun = false;
  while (i < tokens.size()) {
    const auto& pos = tokens[i].pos;
    bool nominal = is_nominal(tokens[i]);
    bool modifier = pos == "ADJ" || pos == "NUM" || pos == "ADV" || pos == "VERB";
    if (nominal) {
      seen_noun = true;
    } else if (!modifier || seen_noun) {
      break;  // a participle or adjective after the head starts a post-modifier
    } else if (pos == "VERB" && text::to_lower(tokens[i].surface) == "using") {
      break;
    }
    ++i;
  }
  if (i == body) return std::nullopt;
  std::size_t last = i;
  while (last > body && !is_nominal(tokens[last - 1])) --last;
  if (last == body) {
    // No noun at all: an adjective or participle standing alone is the head.
    last = i;
  }
  std::size_t head_start = last - 1;
  while (head_start > body && is_nominal(tokens[head_start - 1]) && !is_type_word(tokens[head_start - 1]))
    --head_start;
  np.head_start = head_start;
  np.head_end = last;
  for (std::size_t k = body; k < head_start; ++k) np.modifiers.push_back(k);
  np.end = last;
  while (np.end + 1 < tokens.size() && text::to_lower(tokens[np.end].surface) == "of") {
    auto inner = parse_noun_phrase(tokens, np.end + 1);
    if (!inner) break;
    np.end = inner->end;
  }
  return np;
}

struct Cue {
  ConstraintRole role;
  bool clause;         // runs to the next comma; otherwise cue + noun phrase
  std::size_t length;  // tokens consumed by the cue itself
};

inline std::optional<Cue> match_cue(const std::vector<Token>& tokens, std::size_t i) {
  std::string w = text::to_lower(tokens[i].surface);
  std::string next = i + 1 < tokens.size() ? text::to_lower(tokens[i + 1].surface) : "";
  if (w == "so" && next == "that") return Cue{ConstraintRole::Prp, true, 2};
  if (w == "in" && next == "order") return Cue{ConstraintRole::Prp, true, 1};
  if (w == "in" || w == "at" || w == "within") return Cue{ConstraintRole::Loc, false, 1};
  if (w == "when" || w == "while" || w == "after" || w == "before" || w == "until" || w == "once" || w == "whenever")
    return Cue{ConstraintRole::Tmp, true, 1};
  if (w == "using" || w == "by" || w == "via") return Cue{ConstraintRole::Mnr, false, 1};
  if (w == "if" || w == "unless") return Cue{ConstraintRole::Adv, true, 1};
  if (w == "as") return Cue{ConstraintRole::Prd, false, 1};
  if (w == "for") return Cue{ConstraintRole::Gol, false, 1};
  if (w == "down" || w == "up" || w == "into" || w == "toward" || w == "towards")
    return Cue{ConstraintRole::Dir, false, 1};
  if (lexicon::extent_adverbs().count(w)) return Cue{ConstraintRole::Ext, false, 0};
  return std::nullopt;
}

inline std::size_t clause_end(const std::vector<Token>& tokens, std::size_t i) {
  while (i < tokens.size() && tokens[i].pos != "PUNCT") ++i;
  return i;
}

}  // namespace detail

/// Built-in annotator. Expects a normalized sentence; takes the first verb
/// group only.
inline AnnotatedSentence annotate(std::string_view sentence) {
  AnnotatedSentence out;
  for (const auto& w : tokenize(sentence)) out.tokens.push_back({w, tag_token(w)});
  const auto& tokens = out.tokens;

  auto lower = [&](std::size_t i) { return text::to_lower(tokens[i].surface); };
  std::size_t i = 0;
  bool prefixed = tokens.size() >= 2 && lower(0) == "this" && lower(1) == "method";
  if (prefixed) i = 2;

  auto add_constraint = [&](ConstraintRole role, std::size_t s, std::size_t e) {
    if (s < e) out.constraint_spans.push_back({role, s, e});
  };

  // Adverbs before the verb ("fully parses").
  while (i < tokens.size() && tokens[i].pos == "ADV") {
    if (lexicon::extent_adverbs().count(lower(i))) add_constraint(ConstraintRole::Ext, i, i + 1);
    ++i;
  }
  std::optional<std::size_t> verb;
  if (prefixed) {
    if (i < tokens.size()) {
      std::string w = lower(i);
      bool alpha = std::all_of(w.begin(), w.end(), [](char c) { return text::is_alpha(c); });
      if (tokens[i].pos == "VERB" || (alpha && w.size() > 2 && text::ends_with(w, "s") && tokens[i].pos == "NOUN"))
        verb = i;
    }
  } else {
    for (std::size_t k = 0; k < tokens.size(); ++k)
      if (lexicon::leading_verbs().count(lower(k))) {
        verb = k;
        break;
      }
  }
  if (!verb) throw Error(ErrorCode::NoVerbFound, std::string(sentence));
  out.tokens[*verb].pos = "VERB";
  out.functional_spans.push_back({SyntacticRole::Verb, *verb, *verb + 1});
  i = *verb + 1;

  auto add_phrase = [&](const detail::NounPhrase& np, SyntacticRole head_role, SyntacticRole modifier_role) {
    out.functional_spans.push_back({head_role, np.head_start, np.head_end});
    for (auto m : np.modifiers) out.functional_spans.push_back({modifier_role, m, m + 1});
  };

  if (i < tokens.size() && tokens[i].pos != "ADP" && tokens[i].pos != "PUNCT") {
    if (auto np = detail::parse_noun_phrase(tokens, i)) {
      add_phrase(*np, SyntacticRole::DirectObject, SyntacticRole::DirectObjectModifier);
      i = np->end;
    }
  }

  bool skipping = false;
  bool have_po = false;
  while (i < tokens.size()) {
    const auto& t = tokens[i];
    if (t.surface == ",") {
      skipping = false;
      ++i;
      continue;
    }
    if (t.pos == "PUNCT") {
      ++i;
      continue;
    }
    if (auto cue = detail::match_cue(tokens, i)) {
      if (cue->role == ConstraintRole::Ext) {
        add_constraint(ConstraintRole::Ext, i, i + 1);
        ++i;
        continue;
      }
      std::size_t end;
      if (cue->clause) {
        end = detail::clause_end(tokens, i);
      } else {
        std::size_t j = i + cue->length;
        if (j < tokens.size() && tokens[j].pos == "VERB" && text::ends_with(lower(j), "ing")) ++j;
        auto np = detail::parse_noun_phrase(tokens, j);
        end = np ? np->end : detail::clause_end(tokens, i);
      }
      add_constraint(cue->role, i, end);
      i = end;
      continue;
    }
    if (t.pos == "ADP" && !skipping && !have_po) {
      if (auto np = detail::parse_noun_phrase(tokens, i + 1)) {
        out.functional_spans.push_back({SyntacticRole::Preposition, i, i + 1});
        add_phrase(*np, SyntacticRole::PrepositionObject, SyntacticRole::PrepositionObjectModifier);
        have_po = true;
        i = np->end;
        continue;
      }
    }
    if (t.pos == "CCONJ" || t.pos == "SCONJ" || t.pos == "VERB" || t.pos == "AUX") skipping = true;
    ++i;
  }
  return out;
}

}  // namespace apiclarify
