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

#include "maqv/html.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>

#include "maqv/text.h"

namespace maqv {

namespace {

struct Node {
  std::string tag;  // empty for text nodes
  std::string text;
  std::string cls;
  std::string id;
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;
};

constexpr std::array<std::string_view, 14> kVoidTags = {
    "br", "hr", "img", "input", "meta", "link", "area",
    "base", "col", "embed", "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 26> kBlockTags = {
    "p",  "div", "h1", "h2",  "h3",    "h4",      "h5",     "h6",   "ul",
    "ol", "li",  "dl", "dd",  "dt",    "table",   "tr",     "td",   "th",
    "blockquote", "pre", "section", "article", "aside", "nav", "header",
    "footer"};

bool IsVoid(std::string_view tag) {
  return std::find(kVoidTags.begin(), kVoidTags.end(), tag) != kVoidTags.end();
}

bool IsBlock(std::string_view tag) {
  return std::find(kBlockTags.begin(), kBlockTags.end(), tag) !=
         kBlockTags.end();
}

int HeadingLevel(std::string_view tag) {
  if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') {
    return tag[1] - '0';
  }
  return 0;
}

bool IsNameChar(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' ||
         ch == '_' || ch == ':';
}

class TreeBuilder {
 public:
  TreeBuilder() : root_(std::make_unique<Node>()), current_(root_.get()) {
    root_->tag = "#root";
  }

  std::unique_ptr<Node> Build(std::string_view html) {
    std::size_t i = 0;
    std::string pending;
    auto flush_text = [&] {
      if (!pending.empty()) {
        auto node = std::make_unique<Node>();
        node->text = DecodeEntities(pending);
        node->parent = current_;
        current_->children.push_back(std::move(node));
        pending.clear();
      }
    };
    while (i < html.size()) {
      const char ch = html[i];
      if (ch != '<') {
        pending.push_back(ch);
        ++i;
        continue;
      }
      if (html.compare(i, 4, "<!--") == 0) {
        flush_text();
        std::size_t end = html.find("-->", i + 4);
        i = end == std::string_view::npos ? html.size() : end + 3;
        continue;
      }
      if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
        flush_text();
        std::size_t end = html.find('>', i);
        i = end == std::string_view::npos ? html.size() : end + 1;
        continue;
      }
      const bool closing = i + 1 < html.size() && html[i + 1] == '/';
      std::size_t name_start = i + (closing ? 2 : 1);
      std::size_t j = name_start;
      while (j < html.size() && IsNameChar(html[j])) ++j;
      if (j == name_start) {
        // Stray '<' is literal text.
        pending.push_back(ch);
        ++i;
        continue;
      }
      flush_text();
      std::string tag = ToLower(html.substr(name_start, j - name_start));
      std::size_t tag_end = FindTagEnd(html, j);
      std::string_view attrs =
          html.substr(j, (tag_end == std::string_view::npos ? html.size()
                                                             : tag_end) - j);
      i = tag_end == std::string_view::npos ? html.size() : tag_end + 1;
      if (closing) {
        Close(tag);
        continue;
      }
      bool self_closing = !attrs.empty() && attrs.back() == '/';
      Open(tag, attrs);
      if (tag == "script" || tag == "style") {
        // Raw text content: skip to the matching end tag.
        std::string end_tag = "</" + tag;
        std::size_t k = i;
        while (k < html.size()) {
          k = html.find("</", k);
          if (k == std::string_view::npos) break;
          if (ToLower(html.substr(k, end_tag.size())) == end_tag) break;
          ++k;
        }
        if (k == std::string_view::npos) {
          i = html.size();
        } else {
          std::size_t close = html.find('>', k);
          i = close == std::string_view::npos ? html.size() : close + 1;
        }
        Close(tag);
        continue;
      }
      if (self_closing || IsVoid(tag)) Close(tag);
    }
    flush_text();
    return std::move(root_);
  }

 private:
  static std::size_t FindTagEnd(std::string_view html, std::size_t from) {
    char quote = 0;
    for (std::size_t k = from; k < html.size(); ++k) {
      char c = html[k];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        return k;
      }
    }
    return std::string_view::npos;
  }

  static std::string Attribute(std::string_view attrs, std::string_view name) {
    std::size_t k = 0;
    while (k < attrs.size()) {
      while (k < attrs.size() && !IsNameChar(attrs[k])) ++k;
      std::size_t start = k;
      while (k < attrs.size() && IsNameChar(attrs[k])) ++k;
      std::string key = ToLower(attrs.substr(start, k - start));
      while (k < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[k]))) ++k;
      std::string value;
      if (k < attrs.size() && attrs[k] == '=') {
        ++k;
        while (k < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[k]))) ++k;
        if (k < attrs.size() && (attrs[k] == '"' || attrs[k] == '\'')) {
          char q = attrs[k++];
          std::size_t end = attrs.find(q, k);
          if (end == std::string_view::npos) end = attrs.size();
          value = attrs.substr(k, end - k);
          k = end + 1;
        } else {
          std::size_t vs = k;
          while (k < attrs.size() && !std::isspace(static_cast<unsigned char>(attrs[k])) &&
                 attrs[k] != '>')
            ++k;
          value = attrs.substr(vs, k - vs);
        }
      }
      if (key == name) return value;
      if (start == k) ++k;
    }
    return {};
  }

  bool InStack(std::string_view tag) const {
    for (Node* n = current_; n; n = n->parent) {
      if (n->tag == tag) return true;
    }
    return false;
  }

  void Open(const std::string& tag, std::string_view attrs) {
    // Implicit end of an open paragraph or list item.
    if (IsBlock(tag) && InStack("p")) Close("p");
    if (tag == "li" && current_->tag == "li") Close("li");
    if ((tag == "dd" || tag == "dt") &&
        (current_->tag == "dd" || current_->tag == "dt")) {
      Close(current_->tag);
    }
    auto node = std::make_unique<Node>();
    node->tag = tag;
    node->cls = Attribute(attrs, "class");
    node->id = Attribute(attrs, "id");
    node->parent = current_;
    Node* raw = node.get();
    current_->children.push_back(std::move(node));
    current_ = raw;
  }

  void Close(const std::string& tag) {
    if (!InStack(tag)) return;  // stray end tag
    while (current_ != root_.get()) {
      Node* n = current_;
      current_ = current_->parent;
      if (n->tag == tag) break;
    }
  }

  std::unique_ptr<Node> root_;
  Node* current_;
};

bool ContainsToken(const std::string& haystack,
                   const std::vector<std::string>& tokens) {
  if (haystack.empty()) return false;
  const std::string lowered = ToLower(haystack);
  for (const std::string& t : tokens) {
    if (!t.empty() && lowered.find(ToLower(t)) != std::string::npos) return true;
  }
  return false;
}

struct Event {
  int heading_level = 0;  // 0 for text blocks
  std::string text;
};

class Linearizer {
 public:
  explicit Linearizer(const WalkthroughRules& rules) : rules_(rules) {}

  std::vector<Event> Run(const Node& root) {
    Walk(root);
    FlushLine();
    return std::move(events_);
  }

 private:
  bool Stripped(const Node& n) const {
    if (std::find(rules_.strip_tags.begin(), rules_.strip_tags.end(), n.tag) !=
        rules_.strip_tags.end()) {
      return true;
    }
    return ContainsToken(n.cls, rules_.strip_class_tokens) ||
           ContainsToken(n.id, rules_.strip_id_tokens);
  }

  static void CollectText(const Node& n, const Linearizer& self,
                          std::string& out) {
    if (n.tag.empty()) {
      out += n.text;
      out += ' ';
      return;
    }
    if (self.Stripped(n)) return;
    for (const auto& c : n.children) CollectText(*c, self, out);
  }

  void FlushLine() {
    std::string collapsed;
    for (const std::string& w : SplitWhitespace(line_)) {
      if (!collapsed.empty()) collapsed += ' ';
      collapsed += w;
    }
    if (!collapsed.empty()) events_.push_back({0, std::move(collapsed)});
    line_.clear();
  }

  void Walk(const Node& n) {
    if (n.tag.empty()) {
      line_ += n.text;
      return;
    }
    if (n.tag != "#root" && Stripped(n)) return;
    if (int level = HeadingLevel(n.tag)) {
      FlushLine();
      std::string title;
      CollectText(n, *this, title);
      std::string collapsed;
      for (const std::string& w : SplitWhitespace(title)) {
        if (!collapsed.empty()) collapsed += ' ';
        collapsed += w;
      }
      events_.push_back({level, std::move(collapsed)});
      return;
    }
    const bool block = IsBlock(n.tag) || n.tag == "br";
    if (block) FlushLine();
    for (const auto& c : n.children) Walk(*c);
    if (block) FlushLine();
  }

  const WalkthroughRules& rules_;
  std::vector<Event> events_;
  std::string line_;
};

std::string JoinBlocks(const std::vector<Event>& events, std::size_t begin,
                       std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (events[i].heading_level != 0) continue;
    if (!out.empty()) out += '\n';
    out += events[i].text;
  }
  return out;
}

void AppendUtf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::string DecodeEntities(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 10>
      kNamed = {{{"amp", "&"},
                 {"lt", "<"},
                 {"gt", ">"},
                 {"quot", "\""},
                 {"apos", "'"},
                 {"nbsp", " "},
                 {"ndash", "–"},
                 {"mdash", "—"},
                 {"hellip", "…"},
                 {"rsquo", "’"}}};
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    std::string_view name = text.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      bool ok = name.size() > 1;
      if (ok && (name[1] == 'x' || name[1] == 'X')) {
        ok = name.size() > 2;
        for (std::size_t k = 2; ok && k < name.size(); ++k) {
          const char h = name[k];
          if (!std::isxdigit(static_cast<unsigned char>(h))) {
            ok = false;
          } else {
            cp = cp * 16 + static_cast<unsigned long>(
                               std::isdigit(static_cast<unsigned char>(h))
                                   ? h - '0'
                                   : std::tolower(h) - 'a' + 10);
          }
        }
      } else {
        for (std::size_t k = 1; ok && k < name.size(); ++k) {
          if (!std::isdigit(static_cast<unsigned char>(name[k]))) ok = false;
          else cp = cp * 10 + static_cast<unsigned long>(name[k] - '0');
        }
      }
      if (ok && cp > 0 && cp < 0x110000) {
        AppendUtf8(out, cp == 0xA0 ? 0x20 : cp);
        done = true;
      }
    } else {
      for (const auto& [key, value] : kNamed) {
        if (name == key) {
          out += value;
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

WalkthroughRules WalkthroughRules::FromJson(const nlohmann::json& j) {
  WalkthroughRules rules;
  auto read = [&](const char* key, std::vector<std::string>& out) {
    if (auto it = j.find(key); it != j.end() && it->is_array()) {
      out.clear();
      for (const auto& v : *it) {
        if (v.is_string()) out.push_back(v.get<std::string>());
      }
    }
  };
  read("section_priority", rules.section_priority);
  read("strip_class_tokens", rules.strip_class_tokens);
  read("strip_id_tokens", rules.strip_id_tokens);
  read("strip_tags", rules.strip_tags);
  return rules;
}

nlohmann::json WalkthroughRules::ToJson() const {
  return nlohmann::json{{"section_priority", section_priority},
                        {"strip_class_tokens", strip_class_tokens},
                        {"strip_id_tokens", strip_id_tokens},
                        {"strip_tags", strip_tags}};
}

std::optional<ParsedWalkthrough> ParseWalkthrough(
    std::string_view html, const WalkthroughRules& rules) {
  std::unique_ptr<Node> root = TreeBuilder().Build(html);
  std::vector<Event> events = Linearizer(rules).Run(*root);

  for (const std::string& wanted : rules.section_priority) {
    const std::string key = ToLower(Trim(wanted));
    for (std::size_t i = 0; i < events.size(); ++i) {
      const Event& e = events[i];
      if (e.heading_level == 0 || ToLower(Trim(e.text)) != key) continue;
      std::size_t end = i + 1;
      while (end < events.size() &&
             !(events[end].heading_level != 0 &&
               events[end].heading_level <= e.heading_level)) {
        ++end;
      }
      std::string body = JoinBlocks(events, i + 1, end);
      if (!Trim(body).empty()) return ParsedWalkthrough{body, e.text};
    }
  }

  std::size_t first_heading = 0;
  while (first_heading < events.size() &&
         events[first_heading].heading_level == 0) {
    ++first_heading;
  }
  std::string intro = JoinBlocks(events, 0, first_heading);
  if (!Trim(intro).empty()) return ParsedWalkthrough{intro, "intro"};
  return std::nullopt;
}

}  // namespace maqv
