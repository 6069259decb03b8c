/*
 * Copyright 2026 The tagrec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TAGREC_RECOMMEND_H_
#define TAGREC_RECOMMEND_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagrec/corpus.h"
#include "tagrec/tfidf.h"

namespace tagrec::rec {

struct TagScore {
  std::string tag;
  double score = 0.0;

  bool operator==(const TagScore&) const = default;
};

// Ranked recommendation output. Tags are unique, scores non-increasing, and
// equal scores are ordered lexicographically by tag.
struct ScoredTagList {
  std::vector<TagScore> entries;
  std::string algorithm;
  std::size_t k_max = 0;
  // Non-empty when the recommender could not produce a regular result (for
  // example an unindexed query book).
  std::string diagnostic;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<std::string> tags() const;

  bool operator==(const ScoredTagList&) const = default;
};

// Sorts by score descending then tag ascending and keeps the first k.
ScoredTagList rank_scores(const std::map<std::string, double, std::less<>>& scores,
                          std::size_t k);

// True when `list` satisfies the ScoredTagList ordering and uniqueness rules.
bool is_well_formed(const ScoredTagList& list);

enum class Family { kMP, kSIM, kHYB };
enum class TagSource { kEditor, kAmazon, kCombined, kNone };
enum class Context {
  kNone,
  kAuthor,
  kBisac,
  kDescription,
  kTitle,
  kMP,
  kSIM,
  kAll,
  kBest
};

// One of the 19 recommender configurations. Only valid combinations can be
// constructed.
class AlgorithmId {
 public:
  // Throws ConfigError for combinations outside the 19.
  static AlgorithmId make(Family family, TagSource source, Context context);
  // CLI spelling, e.g. "mp-author-editor", "sim-desc-combined", "hyb-best".
  static AlgorithmId parse(std::string_view name);
  // All 19 in canonical order: popularity, similarity, hybrid.
  static const std::vector<AlgorithmId>& all();

  Family family() const { return family_; }
  TagSource source() const { return source_; }
  Context context() const { return context_; }

  std::string name() const;
  // Typeset-style label, e.g. "MP^Author_Editor".
  std::string label() const;

  auto operator<=>(const AlgorithmId&) const = default;

 private:
  AlgorithmId(Family f, TagSource s, Context c)
      : family_(f), source_(s), context_(c) {}

  Family family_;
  TagSource source_;
  Context context_;
};

// Comma-separated algorithm names, or "all". Throws ConfigError naming the
// first unknown id.
std::vector<AlgorithmId> parse_algorithm_list(std::string_view list);

// Global top-k tags of one source, score = assignment count.
ScoredTagList most_popular(const Corpus& corpus, Source source, std::size_t k);

// Tags of books sharing an author (or BISAC) with `query`, the query itself
// excluded. Missing context or a short pool is padded with global most
// popular tags scored strictly below every context entry.
ScoredTagList most_popular_context(const Corpus& corpus, Source source,
                                   Context context, const EBook& query,
                                   std::size_t k);

// Takes position 1 of every list in order, then position 2, ... skipping
// tags already emitted, until k tags. Scores are k, k-1, ...
ScoredTagList round_robin(const std::vector<ScoredTagList>& lists, std::size_t k);

// Tag list of a book for one source, or nullptr.
using TagLookup = std::function<const std::vector<std::string>*(std::string_view)>;

TagLookup corpus_tag_lookup(const Corpus& corpus, Source source);

// Cross-source weighting: W(t) = |S_t| * sum of similarities over S_t,
// S_t being the distinct neighbors annotated with t.
ScoredTagList cross_source_tags(const std::vector<Neighbor>& neighbors,
                                const TagLookup& tag_lookup, std::size_t k);

ScoredTagList sim_recommend(const TfidfIndex& index, const Corpus& corpus,
                            Source source, const EBook& query, std::size_t k,
                            std::size_t top_n = 20);

// Max-normalizes each non-empty member, then applies the cross-source
// weighting with the members as sources. Throws ConfigError with fewer than
// two members.
ScoredTagList cross_algorithm_hybrid(const std::vector<ScoredTagList>& members,
                                     std::size_t k);

// Base algorithms feeding the four hybrids.
struct HybridMembers {
  AlgorithmId mp_none = AlgorithmId::parse("mp-combined");
  AlgorithmId mp_author = AlgorithmId::parse("mp-author-combined");
  AlgorithmId mp_bisac = AlgorithmId::parse("mp-bisac-editor");
  AlgorithmId sim_title = AlgorithmId::parse("sim-title-editor");
  AlgorithmId sim_description = AlgorithmId::parse("sim-desc-editor");
  AlgorithmId best_mp = AlgorithmId::parse("mp-author-combined");
  AlgorithmId best_sim = AlgorithmId::parse("sim-desc-editor");

  // Throws ConfigError when a slot holds an algorithm of the wrong kind.
  void validate() const;
  bool operator==(const HybridMembers&) const = default;
};

// Everything the recommenders read. Built from a corpus that should not
// carry review keywords; see Corpus::without_review_keywords().
struct Resources {
  std::shared_ptr<const Corpus> corpus;
  std::optional<TfidfIndex> title_index;
  std::optional<TfidfIndex> description_index;
  // Why an index is missing, when it is.
  std::string title_index_error;
  std::string description_index_error;
  std::size_t top_n = 20;
  HybridMembers members;

  static Resources build(std::shared_ptr<const Corpus> corpus,
                         const TfidfParams& params = {},
                         const text::StopwordSet& stopwords =
                             text::default_stopwords(),
                         std::size_t top_n = 20);
};

using Recommender = std::function<ScoredTagList(const EBook& query, std::size_t k)>;

// The returned closure references `resources`, which must outlive it.
Recommender make_algorithm(AlgorithmId id, const Resources& resources);

}  // namespace tagrec::rec

#endif  // TAGREC_RECOMMEND_H_
