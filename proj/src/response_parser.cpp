// Copyright 2026 The ambiser Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ambiser/response_parser.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ambiser/errors.hpp"

namespace ambiser {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Words allowed between an emotion name and its number ("anger is about 60%").
constexpr std::array<std::string_view, 8> kFillers{
    "is", "at", "of", "about", "around", "approximately", "approx", "roughly"};

bool is_filler(std::string_view w) {
  for (auto f : kFillers)
    if (f == w) return true;
  return false;
}

bool is_separator(char c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r':
    case ':': case '=': case '(': case '[': case '"': case '\'': case '*': case '~':
      return true;
    default:
      return false;
  }
}

struct Word {
  std::size_t begin;
  std::size_t end;
};

std::optional<Word> next_word(std::string_view s, std::size_t from) {
  std::size_t i = from;
  while (i < s.size() && !is_alpha(s[i])) ++i;
  if (i >= s.size()) return std::nullopt;
  std::size_t j = i;
  while (j < s.size() && is_alpha(s[j])) ++j;
  return Word{i, j};
}

// Number following an emotion word at `pos`, if any, and where it ends.
struct NumberMatch {
  double value;
  std::size_t end;
};

std::optional<NumberMatch> read_number_after(std::string_view lower, std::size_t pos,
                                             double max_value) {
  std::size_t i = pos;
  int fillers = 0;
  for (;;) {
    while (i < lower.size()) {
      const char c = lower[i];
      if (is_separator(c)) {
        ++i;
      } else if ((c == '-' || c == '+') && (i + 1 >= lower.size() || !is_digit(lower[i + 1]))) {
        ++i;  // dash used as a separator, not a sign
      } else {
        break;
      }
    }
    if (i < lower.size() && is_alpha(lower[i]) && fillers < 3) {
      std::size_t j = i;
      while (j < lower.size() && is_alpha(lower[j])) ++j;
      if (!is_filler(lower.substr(i, j - i))) return std::nullopt;
      i = j;
      ++fillers;
      continue;
    }
    break;
  }
  if (i >= lower.size()) return std::nullopt;
  bool negative = false;
  if (lower[i] == '-' || lower[i] == '+') {
    negative = lower[i] == '-';
    ++i;
  }
  const std::size_t digits_begin = i;
  while (i < lower.size() && is_digit(lower[i])) ++i;
  if (i == digits_begin) return std::nullopt;
  if (i + 1 < lower.size() && lower[i] == '.' && is_digit(lower[i + 1])) {
    ++i;
    while (i < lower.size() && is_digit(lower[i])) ++i;
  }
  if (i < lower.size() && is_alpha(lower[i])) return std::nullopt;  // "5th", "3d"
  const double magnitude = std::strtod(std::string(lower.substr(digits_begin, i - digits_begin)).c_str(), nullptr);
  if (magnitude > max_value) return std::nullopt;
  return NumberMatch{negative ? -magnitude : magnitude, i};
}

}  // namespace

SynonymTable::SynonymTable(const EmotionSet& set) : num_classes_(set.size()) {
  for (std::size_t i = 0; i < set.size(); ++i) forms_.emplace(set.name(i), i);
  static const std::array<std::pair<std::string_view, std::string_view>, 4> kDefaults{{
      {"angry", "anger"}, {"happy", "happiness"}, {"sad", "sadness"}, {"neutrality", "neutral"}}};
  for (auto [surface, canonical] : kDefaults)
    if (auto cls = set.index_of(canonical)) forms_.emplace(std::string(surface), *cls);
}

void SynonymTable::add(std::string_view surface, std::size_t cls) {
  if (cls >= num_classes_) throw StructuralError("synonym class index out of range");
  if (surface.empty()) throw StructuralError("empty synonym");
  for (char c : surface)
    if (!is_alpha(c))
      throw StructuralError("synonym '" + std::string(surface) + "' is not a single word");
  forms_[to_lower(surface)] = cls;
}

std::optional<std::size_t> SynonymTable::lookup(std::string_view word) const {
  auto it = forms_.find(to_lower(word));
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

ParseOutcome parse_response(const TextResponse& r, const EmotionSet& set,
                            const SynonymTable& synonyms, const ParserOptions& opts) {
  const auto n = static_cast<Eigen::Index>(set.size());
  const std::string lower = to_lower(r.text);
  std::vector<std::optional<double>> found(set.size());

  std::size_t pos = 0;
  while (auto w = next_word(lower, pos)) {
    pos = w->end;
    auto cls = synonyms.lookup(std::string_view(lower).substr(w->begin, w->end - w->begin));
    if (!cls) continue;
    if (auto num = read_number_after(lower, w->end, opts.max_value)) {
      found[*cls] = num->value;  // last occurrence wins
      pos = num->end;
    }
  }

  ParseOutcome out{EmotionDistribution::invalid(InvalidReason::kUnparseable, n), {}, false};
  bool any = false;
  bool all = true;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i]) {
      any = true;
      values(static_cast<Eigen::Index>(i)) = *found[i];
      out.raw_percentages.emplace(set.name(i), *found[i]);
    } else {
      all = false;
    }
  }
  if (!any) return out;
  if (!all && opts.require_all_classes) {
    out.distribution = EmotionDistribution::invalid(InvalidReason::kMissingClasses, n);
    return out;
  }
  out.distribution = make_distribution(values, set);
  if (out.distribution.is_valid())
    out.normalized = std::abs(values.sum() - 100.0) > opts.sum_tolerance;
  return out;
}

ParseOutcome parse_response(const TextResponse& r, const EmotionSet& set) {
  return parse_response(r, set, SynonymTable(set));
}

std::optional<std::size_t> parse_single_label(const TextResponse& r, const EmotionSet& set,
                                              const SynonymTable& synonyms) {
  (void)set;
  std::size_t pos = 0;
  while (auto w = next_word(r.text, pos)) {
    if (auto cls = synonyms.lookup(std::string_view(r.text).substr(w->begin, w->end - w->begin)))
      return cls;
    pos = w->end;
  }
  return std::nullopt;
}

std::optional<std::size_t> parse_single_label(const TextResponse& r, const EmotionSet& set) {
  return parse_single_label(r, set, SynonymTable(set));
}

double exclusion_rate(std::span<const ParseOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("exclusion_rate of an empty list");
  std::size_t invalid = 0;
  for (const auto& o : outcomes)
    if (!o.distribution.is_valid()) ++invalid;
  return static_cast<double>(invalid) / static_cast<double>(outcomes.size());
}

std::string format_percentages(const EmotionDistribution& d, const EmotionSet& set,
                               int decimals) {
  const auto& p = d.probs();
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::string name = set.name(i);
    if (!name.empty() && name[0] >= 'a' && name[0] <= 'z') name[0] = static_cast<char>(name[0] - 'a' + 'A');
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, 100.0 * p(static_cast<Eigen::Index>(i)));
    if (!out.empty()) out += ", ";
    out += name + ": " + buf + "%";
  }
  return out;
}

}  // namespace ambiser
