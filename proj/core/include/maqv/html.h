// Copyright 2026 The MAQV Toolkit Authors.
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

#ifndef MAQV_HTML_H_
#define MAQV_HTML_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace maqv {

// Boilerplate-stripping and section-priority heuristics for wiki pages.
// Loadable from a JSON config.
struct WalkthroughRules {
  // Section headings tried in order; matched case-insensitively after
  // trimming.
  std::vector<std::string> section_priority = {"Walkthrough", "Quest Stages",
                                               "Description"};
  // Elements whose class attribute contains one of these tokens are removed
  // with their subtree.
  std::vector<std::string> strip_class_tokens = {
      "infobox",  "portable-infobox", "navbox", "toc",      "mw-editsection",
      "reference", "references",      "ad-slot", "wikia-ad", "gpt-ad",
      "advertisement", "noprint",     "notice"};
  // Elements whose id contains one of these tokens are removed.
  std::vector<std::string> strip_id_tokens = {"toc", "ad-", "advert"};
  // Elements always removed.
  std::vector<std::string> strip_tags = {"script", "style", "noscript",
                                         "aside",  "nav",   "figure",
                                         "sup",    "iframe"};

  static WalkthroughRules FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct ParsedWalkthrough {
  std::string text;
  // Heading of the section used, or "intro" for the fallback.
  std::string source_section;
};

// Extracts the highest-priority walkthrough section from raw page HTML.
// Never throws on malformed markup; returns nullopt when no usable text
// remains (the empty-extraction signal).
std::optional<ParsedWalkthrough> ParseWalkthrough(
    std::string_view html, const WalkthroughRules& rules = WalkthroughRules());

// Decodes the common named entities and numeric character references.
std::string DecodeEntities(std::string_view text);

}  // namespace maqv

#endif  // MAQV_HTML_H_
