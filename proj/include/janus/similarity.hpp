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

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "janus/error.hpp"
#include "janus/lexical.hpp"

namespace janus::similarity {

enum class StringMetric { kLevenshteinNorm, kTrigramDice };

/// Plain edit distance (unit-cost insert, delete, substitute) over bytes.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, subst});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Set of contiguous 3-grams; strings shorter than 3 are their own single gram.
inline std::set<std::string> trigrams(std::string_view s) {
  std::set<std::string> grams;
  if (s.size() < 3) {
    grams.emplace(s);
    return grams;
  }
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) grams.emplace(s.substr(i, 3));
  return grams;
}

inline double string_similarity(std::string_view a, std::string_view b, StringMetric metric) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptyTerm, "similarity of an empty term");
  switch (metric) {
    case StringMetric::kLevenshteinNorm: {
      const auto longest = std::max(a.size(), b.size());
      return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
    }
    case StringMetric::kTrigramDice: {
      const auto ta = trigrams(a);
      const auto tb = trigrams(b);
      std::size_t common = 0;
      for (const auto& g : ta) common += tb.count(g);
      return 2.0 * static_cast<double>(common) / static_cast<double>(ta.size() + tb.size());
    }
  }
  return 0.0;
}

/// Flat synonym sets. Lookup is symmetric because membership is.
class SynonymLexicon {
 public:
  void add_synset(std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.empty()) return;
    const std::size_t id = synsets_.size();
    for (const auto& t : terms) index_[t].insert(id);
    synsets_.push_back(std::move(terms));
  }

  const std::vector<std::vector<std::string>>& synsets() const noexcept { return synsets_; }

  const std::set<std::size_t>* synset_ids(std::string_view term) const {
    auto it = index_.find(term);
    return it == index_.end() ? nullptr : &it->second;
  }

  bool are_synonyms(std::string_view a, std::string_view b) const {
    if (a == b) return true;
    const auto* sa = synset_ids(a);
    const auto* sb = synset_ids(b);
    if (!sa || !sb) return false;
    return std::any_of(sa->begin(), sa->end(), [&](std::size_t id) { return sb->contains(id); });
  }

  bool empty() const noexcept { return synsets_.empty(); }

  friend bool operator==(const SynonymLexicon& a, const SynonymLexicon& b) {
    return a.synsets_ == b.synsets_;
  }

 private:
  std::vector<std::vector<std::string>> synsets_;
  std::map<std::string, std::set<std::size_t>, std::less<>> index_;
};

/// synonyms.tsv: one synset per line, tab-separated lowercase terms.
inline SynonymLexicon parse_synonyms(std::string_view text) {
  SynonymLexicon lex;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> terms;
    std::istringstream fields(line);
    for (std::string term; std::getline(fields, term, '\t');) {
      term = lexical::detail::ascii_lower(lexical::detail::trim(term));
      if (!term.empty()) terms.push_back(term);
    }
    lex.add_synset(std::move(terms));
  }
  return lex;
}

inline double synonym_match(std::string_view a, std::string_view b, const SynonymLexicon& lex) {
  return lex.are_synonyms(a, b) ? 1.0 : 0.0;
}

struct SimilarityScore {
  std::string a;
  std::string b;
  double syntactic = 0.0;
  double semantic = 0.0;
  double combined = 0.0;
};

namespace detail {

/// Maximum-weight assignment on a rows x cols score matrix (Kuhn-Munkres on
/// the padded square cost matrix 1 - s). Returns, per row, the matched column
/// or -1 for rows matched to padding.
inline std::vector<int> best_assignment(const std::vector<std::vector<double>>& score,
                                        std::size_t rows, std::size_t cols) {
  const std::size_t n = std::max(rows, cols);
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? 1.0 - score[i][j] : 1.0;
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials and matching as in the classic O(n^3) formulation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j];
    if (i >= 1 && i <= rows && j <= cols) row_to_col[i - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

/// Sum of the best one-to-one token pairing divided by the longer length.
template <class PairScore>
double aligned_score(const std::vector<std::string>& a, const std::vector<std::string>& b,
                     PairScore&& pair_score) {
  if (a.empty() || b.empty()) return 0.0;
  std::vector<std::vector<double>> s(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) s[i][j] = pair_score(a[i], b[j]);
  }
  const auto assignment = best_assignment(s, a.size(), b.size());
  std::vector<double> matched;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (assignment[i] >= 0) matched.push_back(s[i][static_cast<std::size_t>(assignment[i])]);
  }
  // Summing in a canonical order keeps the result identical for (a,b) and (b,a).
  std::sort(matched.begin(), matched.end(), std::greater<>());
  double total = 0.0;
  for (double x : matched) total += x;
  return std::clamp(total / static_cast<double>(std::max(a.size(), b.size())), 0.0, 1.0);
}

}  // namespace detail

/// Name-level similarity. Token pairs score max(normalized Levenshtein,
/// synonym match); tokens are paired one-to-one to maximise the total and the
/// total is divided by the longer token count. Names without tokens score 0.
inline SimilarityScore name_similarity(const lexical::TokenizedName& a,
                                       const lexical::TokenizedName& b,
                                       const SynonymLexicon& lex) {
  auto lev = [](const std::string& x, const std::string& y) {
    return string_similarity(x, y, StringMetric::kLevenshteinNorm);
  };
  auto syn = [&](const std::string& x, const std::string& y) { return synonym_match(x, y, lex); };
  auto both = [&](const std::string& x, const std::string& y) { return std::max(lev(x, y), syn(x, y)); };

  SimilarityScore out;
  out.a = a.original;
  out.b = b.original;
  out.syntactic = detail::aligned_score(a.tokens, b.tokens, lev);
  out.semantic = detail::aligned_score(a.tokens, b.tokens, syn);
  out.combined = detail::aligned_score(a.tokens, b.tokens, both);
  return out;
}

}  // namespace janus::similarity
