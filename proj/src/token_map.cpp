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

#include "ambiser/token_map.hpp"

#include <map>
#include <set>

#include "ambiser/errors.hpp"

namespace ambiser {

EmotionTokenMap::EmotionTokenMap(EmotionSet set, std::vector<std::vector<SubwordToken>> pieces)
    : set_(std::move(set)), pieces_(std::move(pieces)) {
  if (pieces_.size() != set_.size())
    throw StructuralError("token map has " + std::to_string(pieces_.size()) +
                          " entries, emotion set has " + std::to_string(set_.size()));
  std::set<std::int64_t> ids;
  for (std::size_t n = 0; n < pieces_.size(); ++n) {
    if (pieces_[n].empty())
      throw StructuralError("token map entry for '" + set_.name(n) + "' has no subword tokens");
    offsets_.push_back(flat_.size());
    for (const auto& tok : pieces_[n]) {
      if (tok.text.empty())
        throw StructuralError("empty subword token for '" + set_.name(n) + "'");
      if (!ids.insert(tok.id).second)
        throw StructuralError("duplicate subword token id " + std::to_string(tok.id));
      if (!by_text_.emplace(tok.text, flat_.size()).second)
        throw StructuralError("duplicate subword token text '" + tok.text + "'");
      flat_.push_back(tok);
    }
  }
}

EmotionTokenMap EmotionTokenMap::example(const EmotionSet& set) {
  static const std::map<std::string, std::vector<std::string>> kPieces{
      {"anger", {"ang", "er"}},
      {"happiness", {"h", "app", "iness"}},
      {"neutral", {"ne", "ut", "ral"}},
      {"sadness", {"sad", "ness"}},
  };
  std::vector<std::vector<SubwordToken>> pieces;
  std::int64_t next_id = 1000;
  for (const auto& name : set.classes()) {
    std::vector<SubwordToken> toks;
    auto it = kPieces.find(name);
    if (it == kPieces.end()) {
      toks.push_back({name, next_id++});
    } else {
      for (const auto& t : it->second) toks.push_back({t, next_id++});
    }
    pieces.push_back(std::move(toks));
  }
  return EmotionTokenMap(set, std::move(pieces));
}

std::optional<std::size_t> EmotionTokenMap::flat_index_of(std::string_view token_text) const {
  auto it = by_text_.find(std::string(token_text));
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ambiser
