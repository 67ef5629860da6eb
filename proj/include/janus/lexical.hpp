// Copyright 2026 The Janus Authors. All rights reserved.
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

// Lexical processing of tag names: compound-name tokenization, abbreviation
// expansion, stopword removal, term statistics and association mining.

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "janus/error.hpp"

namespace janus::lexical {

struct TokenizedName {
  std::string original;
  /// Lowercase terms after every normalization step.
  std::vector<std::string> tokens;
  /// Tokens straight out of the splitter, before abbreviations and stopwords.
  std::vector<std::string> raw_tokens;

  friend bool operator==(const TokenizedName&, const TokenizedName&) = default;
};

using AbbreviationTable = std::map<std::string, std::vector<std::string>, std::less<>>;
using StopwordSet = std::set<std::string, std::less<>>;

namespace detail {

inline bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
// Non-ASCII bytes have no case here; they count as lowercase letters so that a
// following capital still opens a new word.
inline bool is_lower(unsigned char c) { return (c >= 'a' && c <= 'z') || c >= 0x80; }
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_letter(unsigned char c) { return is_upper(c) || is_lower(c); }
inline bool is_separator(unsigned char c) { return c < 0x80 && !is_letter(c) && !is_digit(c); }

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (is_upper(static_cast<unsigned char>(ch))) ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

// Splits one separator-free chunk at camel-case and letter/digit boundaries.
inline void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < chunk.size(); ++i) {
    const auto prev = static_cast<unsigned char>(chunk[i - 1]);
    const auto cur = static_cast<unsigned char>(chunk[i]);
    const bool camel = is_lower(prev) && is_upper(cur);
    const bool acronym_end = is_upper(prev) && is_upper(cur) && i + 1 < chunk.size() &&
                             is_lower(static_cast<unsigned char>(chunk[i + 1]));
    const bool digit_edge = (is_letter(prev) && is_digit(cur)) || (is_digit(prev) && is_letter(cur));
    if (camel || acronym_end || digit_edge) {
      out.emplace_back(chunk.substr(start, i - start));
      start = i;
    }
  }
  if (start < chunk.size()) out.emplace_back(chunk.substr(start));
}

}  // namespace detail

/// Splits a tag name into lowercase terms. Rules apply in order: split on
/// separators (`_ - . space / :` and any other ASCII punctuation), at
/// lower-to-upper camel boundaries, before the last capital of an acronym
/// run that continues in lowercase ("XMLSchema" -> XML, Schema), at
/// letter/digit boundaries; finally everything is lowercased.
inline TokenizedName tokenize(std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kEmptyName, "tag name is empty");
  std::vector<std::string> pieces;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= name.size(); ++i) {
    if (i == name.size() || detail::is_separator(static_cast<unsigned char>(name[i]))) {
      if (i > start) detail::split_chunk(name.substr(start, i - start), pieces);
      start = i + 1;
    }
  }
  for (auto& p : pieces) p = detail::ascii_lower(p);
  TokenizedName t;
  t.original = std::string(name);
  t.tokens = pieces;
  t.raw_tokens = std::move(pieces);
  return t;
}

inline TokenizedName expand_abbreviations(TokenizedName t, const AbbreviationTable& table) {
  std::vector<std::string> out;
  out.reserve(t.tokens.size());
  for (auto& tok : t.tokens) {
    auto it = table.find(tok);
    if (it == table.end()) {
      out.push_back(std::move(tok));
    } else {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  t.tokens = std::move(out);
  return t;
}

inline TokenizedName remove_stopwords(TokenizedName t, const StopwordSet& stopwords) {
  std::erase_if(t.tokens, [&](const std::string& tok) { return stopwords.contains(tok); });
  return t;
}

/// tokenize, then expand abbreviations, then drop stopwords.
inline TokenizedName normalize_name(std::string_view name, const AbbreviationTable& abbreviations,
                                    const StopwordSet& stopwords) {
  return remove_stopwords(expand_abbreviations(tokenize(name), abbreviations), stopwords);
}

inline std::string join(const std::vector<std::string>& tokens, std::string_view sep = "_") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

// Resource files ------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One lowercase term per line; '#' starts a comment.
inline StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto term = detail::trim(line);
    if (!term.empty()) out.insert(detail::ascii_lower(term));
  }
  return out;
}

/// Lines of `abbr,expansion tokens separated by spaces`; '#' lines ignored.
inline AbbreviationTable parse_abbreviations(std::string_view text) {
  AbbreviationTable out;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto comma = trimmed.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kParseError, "abbreviations line " + std::to_string(lineno) + ": missing ','");
    }
    auto abbr = detail::ascii_lower(detail::trim(trimmed.substr(0, comma)));
    std::istringstream exp(detail::ascii_lower(trimmed.substr(comma + 1)));
    std::vector<std::string> tokens;
    for (std::string tok; exp >> tok;) tokens.push_back(tok);
    if (abbr.empty() || tokens.empty()) {
      throw Error(ErrorCode::kParseError, "abbreviations line " + std::to_string(lineno) + ": empty field");
    }
    out[abbr] = std::move(tokens);
  }
  return out;
}

// Term statistics -----------------------------------------------------------

/// One normalized name with the family and document it was extracted from.
struct TermOccurrence {
  TokenizedName name;
  std::string family_id;
  std::string doc_id;
};

struct TermStats {
  std::string term;
  std::size_t global_frequency = 0;
  std::map<std::string, std::size_t> per_family_frequency;
  std::size_t document_frequency = 0;

  std::size_t family_attendance() const noexcept { return per_family_frequency.size(); }

  friend bool operator==(const TermStats&, const TermStats&) = default;
};

using TermStatsMap = std::map<std::string, TermStats>;

inline TermStatsMap compute_term_stats(std::span<const TermOccurrence> corpus,
                                       const StopwordSet& stopwords) {
  TermStatsMap stats;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> docs;
  for (const auto& occ : corpus) {
    std::set<std::string_view> seen;
    for (const auto& term : occ.name.tokens) {
      if (stopwords.contains(term) || !seen.insert(term).second) continue;
      auto& s = stats[term];
      s.term = term;
      ++s.global_frequency;
      ++s.per_family_frequency[occ.family_id];
      docs[term].emplace(occ.family_id, occ.doc_id);
    }
  }
  for (auto& [term, s] : stats) s.document_frequency = docs[term].size();
  return stats;
}

// Association mining --------------------------------------------------------

using Itemset = std::vector<std::string>;  // sorted, unique

struct FrequentItemset {
  Itemset items;
  std::size_t count = 0;
};

struct AssociationRule {
  Itemset antecedent;
  std::string consequent;
  double support = 0.0;
  double confidence = 0.0;

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

/// Token sets of compound names (two or more distinct tokens).
inline std::vector<Itemset> transactions_of(std::span<const TokenizedName> names) {
  std::vector<Itemset> out;
  for (const auto& n : names) {
    Itemset items(n.tokens.begin(), n.tokens.end());
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    if (items.size() >= 2) out.push_back(std::move(items));
  }
  return out;
}

namespace detail {

inline bool meets_support(std::size_t count, std::size_t total, double min_support) {
  return total > 0 && static_cast<double>(count) >= min_support * static_cast<double>(total) - 1e-9;
}

}  // namespace detail

/// Level-wise Apriori. Returns every itemset whose support reaches
/// `min_support`, ordered by size then lexicographically.
inline std::vector<FrequentItemset> frequent_itemsets(std::span<const Itemset> transactions,
                                                      double min_support) {
  const std::size_t total = transactions.size();
  std::vector<FrequentItemset> result;
  if (total == 0) return result;

  auto support_count = [&](const Itemset& items) {
    std::size_t c = 0;
    for (const auto& t : transactions) {
      if (std::includes(t.begin(), t.end(), items.begin(), items.end())) ++c;
    }
    return c;
  };

  std::map<std::string, std::size_t> singles;
  for (const auto& t : transactions) {
    for (const auto& item : t) ++singles[item];
  }
  std::vector<FrequentItemset> level;
  for (const auto& [item, c] : singles) {
    if (detail::meets_support(c, total, min_support)) level.push_back({{item}, c});
  }

  while (!level.empty()) {
    result.insert(result.end(), level.begin(), level.end());
    std::set<Itemset> frequent;
    for (const auto& f : level) frequent.insert(f.items);

    std::vector<FrequentItemset> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        const auto& a = level[i].items;
        const auto& b = level[j].items;
        if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) continue;
        Itemset cand = a;
        cand.push_back(b.back());
        if (cand[cand.size() - 2] > cand.back()) std::swap(cand[cand.size() - 2], cand.back());
        // Anti-monotone pruning: every (k-1)-subset must already be frequent.
        bool pruned = false;
        for (std::size_t drop = 0; drop < cand.size() && !pruned; ++drop) {
          Itemset sub;
          for (std::size_t k = 0; k < cand.size(); ++k) {
            if (k != drop) sub.push_back(cand[k]);
          }
          pruned = !frequent.contains(sub);
        }
        if (pruned) continue;
        const auto c = support_count(cand);
        if (detail::meets_support(c, total, min_support)) next.push_back({std::move(cand), c});
      }
    }
    std::sort(next.begin(), next.end(),
              [](const FrequentItemset& x, const FrequentItemset& y) { return x.items < y.items; });
    level = std::move(next);
  }
  return result;
}

/// Single-consequent rules over the token sets of compound names, sorted by
/// confidence desc, support desc, then antecedent and consequent.
inline std::vector<AssociationRule> mine_associations(std::span<const TokenizedName> names,
                                                      double min_support, double min_confidence) {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw InvalidParams("min_support", "must be in (0, 1]");
  }
  if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
    throw InvalidParams("min_confidence", "must be in (0, 1]");
  }
  const auto transactions = transactions_of(names);
  const auto itemsets = frequent_itemsets(transactions, min_support);
  std::map<Itemset, std::size_t> counts;
  for (const auto& f : itemsets) counts[f.items] = f.count;

  const auto total = static_cast<double>(transactions.size());
  std::vector<AssociationRule> rules;
  for (const auto& f : itemsets) {
    if (f.items.size() < 2) continue;
    for (std::size_t k = 0; k < f.items.size(); ++k) {
      Itemset antecedent;
      for (std::size_t j = 0; j < f.items.size(); ++j) {
        if (j != k) antecedent.push_back(f.items[j]);
      }
      const auto ante_count = counts.at(antecedent);
      const double confidence = static_cast<double>(f.count) / static_cast<double>(ante_count);
      if (confidence < min_confidence - 1e-12) continue;
      rules.push_back({std::move(antecedent), f.items[k], static_cast<double>(f.count) / total, confidence});
    }
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

}  // namespace janus::lexical
