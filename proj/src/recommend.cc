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

#include "tagrec/recommend.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "tagrec/common.h"

namespace tagrec::rec {
namespace {

struct NamedId {
  const char* name;
  const char* label;
  Family family;
  TagSource source;
  Context context;
};

constexpr NamedId kAlgorithms[] = {
    {"mp-editor", "MP_Editor", Family::kMP, TagSource::kEditor, Context::kNone},
    {"mp-amazon", "MP_Amazon", Family::kMP, TagSource::kAmazon, Context::kNone},
    {"mp-combined", "MP_Combined", Family::kMP, TagSource::kCombined, Context::kNone},
    {"mp-author-editor", "MP^Author_Editor", Family::kMP, TagSource::kEditor,
     Context::kAuthor},
    {"mp-author-amazon", "MP^Author_Amazon", Family::kMP, TagSource::kAmazon,
     Context::kAuthor},
    {"mp-author-combined", "MP^Author_Combined", Family::kMP,
     TagSource::kCombined, Context::kAuthor},
    {"mp-bisac-editor", "MP^BISAC_Editor", Family::kMP, TagSource::kEditor,
     Context::kBisac},
    {"mp-bisac-amazon", "MP^BISAC_Amazon", Family::kMP, TagSource::kAmazon,
     Context::kBisac},
    {"mp-bisac-combined", "MP^BISAC_Combined", Family::kMP, TagSource::kCombined,
     Context::kBisac},
    {"sim-desc-editor", "SIM^Description_Editor", Family::kSIM,
     TagSource::kEditor, Context::kDescription},
    {"sim-desc-amazon", "SIM^Description_Amazon", Family::kSIM,
     TagSource::kAmazon, Context::kDescription},
    {"sim-desc-combined", "SIM^Description_Combined", Family::kSIM,
     TagSource::kCombined, Context::kDescription},
    {"sim-title-editor", "SIM^Title_Editor", Family::kSIM, TagSource::kEditor,
     Context::kTitle},
    {"sim-title-amazon", "SIM^Title_Amazon", Family::kSIM, TagSource::kAmazon,
     Context::kTitle},
    {"sim-title-combined", "SIM^Title_Combined", Family::kSIM,
     TagSource::kCombined, Context::kTitle},
    {"hyb-mp", "HYB^MP", Family::kHYB, TagSource::kNone, Context::kMP},
    {"hyb-sim", "HYB^SIM", Family::kHYB, TagSource::kNone, Context::kSIM},
    {"hyb-all", "HYB^All", Family::kHYB, TagSource::kNone, Context::kAll},
    {"hyb-best", "HYB^Best", Family::kHYB, TagSource::kNone, Context::kBest},
};

const NamedId& lookup(const AlgorithmId& id) {
  for (const NamedId& n : kAlgorithms) {
    if (n.family == id.family() && n.source == id.source() &&
        n.context == id.context()) {
      return n;
    }
  }
  throw ConfigError("invalid algorithm id");  // unreachable for valid ids
}

Source single_source(TagSource s) {
  return s == TagSource::kEditor ? Source::kEditor : Source::kAmazon;
}

ScoredTagList empty_list(std::string diagnostic) {
  ScoredTagList out;
  out.diagnostic = std::move(diagnostic);
  return out;
}

}  // namespace

std::vector<std::string> ScoredTagList::tags() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const TagScore& e : entries) out.push_back(e.tag);
  return out;
}

ScoredTagList rank_scores(const std::map<std::string, double, std::less<>>& scores,
                          std::size_t k) {
  std::vector<TagScore> all;
  all.reserve(scores.size());
  for (const auto& [tag, score] : scores) all.push_back({tag, score});
  const auto better = [](const TagScore& a, const TagScore& b) {
    return a.score != b.score ? a.score > b.score : a.tag < b.tag;
  };
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), better);
  all.resize(keep);
  ScoredTagList out;
  out.entries = std::move(all);
  out.k_max = k;
  return out;
}

bool is_well_formed(const ScoredTagList& list) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    const TagScore& e = list.entries[i];
    if (e.tag.empty() || !(e.score >= 0.0) || !seen.insert(e.tag).second) {
      return false;
    }
    if (i > 0) {
      const TagScore& prev = list.entries[i - 1];
      if (prev.score < e.score) return false;
      if (prev.score == e.score && !(prev.tag < e.tag)) return false;
    }
  }
  return list.k_max == 0 || list.entries.size() <= list.k_max;
}

AlgorithmId AlgorithmId::make(Family family, TagSource source, Context context) {
  for (const NamedId& n : kAlgorithms) {
    if (n.family == family && n.source == source && n.context == context) {
      return AlgorithmId(family, source, context);
    }
  }
  throw ConfigError("no such algorithm combination");
}

AlgorithmId AlgorithmId::parse(std::string_view name) {
  const std::string trimmed = trim(name);
  for (const NamedId& n : kAlgorithms) {
    if (trimmed == n.name) return AlgorithmId(n.family, n.source, n.context);
  }
  throw ConfigError("unknown algorithm id '" + trimmed + "'");
}

const std::vector<AlgorithmId>& AlgorithmId::all() {
  static const std::vector<AlgorithmId>* const kAll = [] {
    auto* ids = new std::vector<AlgorithmId>;
    for (const NamedId& n : kAlgorithms) {
      ids->push_back(AlgorithmId(n.family, n.source, n.context));
    }
    return ids;
  }();
  return *kAll;
}

std::string AlgorithmId::name() const { return lookup(*this).name; }
std::string AlgorithmId::label() const { return lookup(*this).label; }

std::vector<AlgorithmId> parse_algorithm_list(std::string_view list) {
  if (trim(list) == "all") return AlgorithmId::all();
  std::vector<AlgorithmId> out;
  for (const std::string& part : split(list, ',')) {
    if (trim(part).empty()) continue;
    const AlgorithmId id = AlgorithmId::parse(part);
    if (std::find(out.begin(), out.end(), id) != out.end()) {
      throw ConfigError("algorithm '" + id.name() + "' listed twice");
    }
    out.push_back(id);
  }
  if (out.empty()) throw ConfigError("empty algorithm list");
  return out;
}

ScoredTagList most_popular(const Corpus& corpus, Source source, std::size_t k) {
  std::map<std::string, double, std::less<>> scores;
  for (const auto& [tag, count] : corpus.tag_counts(source)) {
    scores.emplace(tag, static_cast<double>(count));
  }
  return rank_scores(scores, k);
}

ScoredTagList most_popular_context(const Corpus& corpus, Source source,
                                   Context context, const EBook& query,
                                   std::size_t k) {
  if (context != Context::kAuthor && context != Context::kBisac) {
    throw ConfigError("most_popular_context needs the Author or BISAC context");
  }
  const AttributeIndex& index = context == Context::kAuthor
                                    ? corpus.author_index()
                                    : corpus.bisac_index();
  const std::vector<std::string>& attributes =
      context == Context::kAuthor ? query.authors : query.bisacs;
  IsbnSet pool;
  for (const std::string& a : attributes) {
    const auto it = index.find(a);
    if (it != index.end()) pool.insert(it->second.begin(), it->second.end());
  }
  pool.erase(query.isbn);

  std::map<std::string, double, std::less<>> counts;
  for (const std::string& isbn : pool) {
    for (const std::string& tag : corpus.at(isbn).tags(source)) counts[tag] += 1.0;
  }
  ScoredTagList out = rank_scores(counts, k);
  if (out.size() >= k) return out;

  const ScoredTagList global = most_popular(corpus, source, k);
  if (out.empty()) return global;
  // Padded entries keep the global order but rank below every context tag.
  const double floor = out.entries.back().score;
  const double scale = global.entries.front().score + 1.0;
  std::unordered_set<std::string> present;
  for (const TagScore& e : out.entries) present.insert(e.tag);
  for (const TagScore& g : global.entries) {
    if (out.size() >= k) break;
    if (present.count(g.tag) != 0) continue;
    out.entries.push_back({g.tag, floor * g.score / scale});
  }
  return out;
}

ScoredTagList round_robin(const std::vector<ScoredTagList>& lists, std::size_t k) {
  ScoredTagList out;
  out.k_max = k;
  std::unordered_set<std::string> seen;
  std::size_t longest = 0;
  for (const ScoredTagList& l : lists) longest = std::max(longest, l.size());
  for (std::size_t pos = 0; pos < longest && out.size() < k; ++pos) {
    for (const ScoredTagList& l : lists) {
      if (out.size() >= k) break;
      if (pos >= l.size() || !seen.insert(l.entries[pos].tag).second) continue;
      out.entries.push_back(
          {l.entries[pos].tag, static_cast<double>(k - out.entries.size())});
    }
  }
  return out;
}

TagLookup corpus_tag_lookup(const Corpus& corpus, Source source) {
  return [&corpus, source](std::string_view isbn) -> const std::vector<std::string>* {
    const EBook* book = corpus.find(isbn);
    return book == nullptr ? nullptr : &book->tags(source);
  };
}

ScoredTagList cross_source_tags(const std::vector<Neighbor>& neighbors,
                                const TagLookup& tag_lookup, std::size_t k) {
  struct Support {
    std::size_t sources = 0;
    double weight = 0.0;
  };
  std::map<std::string, Support, std::less<>> support;
  std::set<std::string, std::less<>> visited;
  for (const Neighbor& n : neighbors) {
    if (!visited.insert(n.isbn).second) continue;
    const std::vector<std::string>* tags = tag_lookup(n.isbn);
    if (tags == nullptr) continue;
    std::unordered_set<std::string> distinct;
    for (const std::string& t : *tags) {
      if (!distinct.insert(t).second) continue;
      Support& s = support[t];
      ++s.sources;
      s.weight += n.similarity;
    }
  }
  std::map<std::string, double, std::less<>> scores;
  for (const auto& [tag, s] : support) {
    scores.emplace(tag, static_cast<double>(s.sources) * s.weight);
  }
  return rank_scores(scores, k);
}

ScoredTagList sim_recommend(const TfidfIndex& index, const Corpus& corpus,
                            Source source, const EBook& query, std::size_t k,
                            std::size_t top_n) {
  if (!index.is_queryable(query.isbn)) {
    ScoredTagList out = empty_list("query " + query.isbn + " has no " +
                                   std::string(field_name(index.field())) +
                                   " vector");
    out.k_max = k;
    return out;
  }
  return cross_source_tags(index.neighbors(query.isbn, top_n),
                           corpus_tag_lookup(corpus, source), k);
}

ScoredTagList cross_algorithm_hybrid(const std::vector<ScoredTagList>& members,
                                     std::size_t k) {
  if (members.size() < 2) {
    throw ConfigError("a hybrid needs at least two member lists");
  }
  struct Support {
    std::size_t members = 0;
    double weight = 0.0;
  };
  std::map<std::string, Support, std::less<>> support;
  for (const ScoredTagList& m : members) {
    if (m.empty() || !(m.entries.front().score > 0.0)) continue;
    const double max_score = m.entries.front().score;
    for (const TagScore& e : m.entries) {
      Support& s = support[e.tag];
      ++s.members;
      s.weight += e.score / max_score;
    }
  }
  std::map<std::string, double, std::less<>> scores;
  for (const auto& [tag, s] : support) {
    scores.emplace(tag, static_cast<double>(s.members) * s.weight);
  }
  return rank_scores(scores, k);
}

void HybridMembers::validate() const {
  const auto expect = [](const AlgorithmId& id, const char* slot, Family family,
                         std::optional<Context> context) {
    if (id.family() != family || (context && id.context() != *context)) {
      throw ConfigError(std::string("hybrid member '") + slot +
                        "' cannot be " + id.name());
    }
  };
  expect(mp_none, "mp_none", Family::kMP, Context::kNone);
  expect(mp_author, "mp_author", Family::kMP, Context::kAuthor);
  expect(mp_bisac, "mp_bisac", Family::kMP, Context::kBisac);
  expect(sim_title, "sim_title", Family::kSIM, Context::kTitle);
  expect(sim_description, "sim_description", Family::kSIM, Context::kDescription);
  expect(best_mp, "best_mp", Family::kMP, std::nullopt);
  expect(best_sim, "best_sim", Family::kSIM, std::nullopt);
}

Resources Resources::build(std::shared_ptr<const Corpus> corpus,
                           const TfidfParams& params,
                           const text::StopwordSet& stopwords,
                           std::size_t top_n) {
  if (top_n == 0) throw ConfigError("top_n must be >= 1");
  Resources r;
  r.corpus = std::move(corpus);
  r.top_n = top_n;
  try {
    r.title_index = TfidfIndex::build(*r.corpus, TextField::kTitle, params, stopwords);
  } catch (const DataError& e) {
    r.title_index_error = e.what();
  }
  try {
    r.description_index =
        TfidfIndex::build(*r.corpus, TextField::kDescription, params, stopwords);
  } catch (const DataError& e) {
    r.description_index_error = e.what();
  }
  return r;
}

Recommender make_algorithm(AlgorithmId id, const Resources& resources) {
  const std::string name = id.name();
  const auto named = [name](Recommender inner) -> Recommender {
    return [name, inner = std::move(inner)](const EBook& query, std::size_t k) {
      ScoredTagList out = inner(query, k);
      out.algorithm = name;
      out.k_max = k;
      return out;
    };
  };
  const Resources* r = &resources;

  switch (id.family()) {
    case Family::kMP: {
      const Context context = id.context();
      const auto single = [r, context](Source s, const EBook& q, std::size_t k) {
        return context == Context::kNone
                   ? most_popular(*r->corpus, s, k)
                   : most_popular_context(*r->corpus, s, context, q, k);
      };
      if (id.source() == TagSource::kCombined) {
        // Inputs of length k yield the same interleaving as full lists: k
        // rounds over a list of k distinct tags always emit k tags.
        return named([single](const EBook& q, std::size_t k) {
          return round_robin(
              {single(Source::kEditor, q, k), single(Source::kAmazon, q, k)}, k);
        });
      }
      const Source source = single_source(id.source());
      return named([single, source](const EBook& q, std::size_t k) {
        return single(source, q, k);
      });
    }
    case Family::kSIM: {
      const bool title = id.context() == Context::kTitle;
      const auto single = [r, title](Source s, const EBook& q, std::size_t k) {
        const std::optional<TfidfIndex>& index =
            title ? r->title_index : r->description_index;
        if (!index) {
          ScoredTagList out = empty_list(title ? r->title_index_error
                                               : r->description_index_error);
          out.k_max = k;
          return out;
        }
        return sim_recommend(*index, *r->corpus, s, q, k, r->top_n);
      };
      if (id.source() == TagSource::kCombined) {
        return named([single](const EBook& q, std::size_t k) {
          ScoredTagList editor = single(Source::kEditor, q, k);
          ScoredTagList amazon = single(Source::kAmazon, q, k);
          ScoredTagList out = round_robin({editor, amazon}, k);
          if (out.empty()) out.diagnostic = editor.diagnostic;
          return out;
        });
      }
      const Source source = single_source(id.source());
      return named([single, source](const EBook& q, std::size_t k) {
        return single(source, q, k);
      });
    }
    case Family::kHYB:
      break;
  }

  const HybridMembers& m = resources.members;
  m.validate();
  std::vector<AlgorithmId> member_ids;
  switch (id.context()) {
    case Context::kMP:
      member_ids = {m.mp_none, m.mp_author, m.mp_bisac};
      break;
    case Context::kSIM:
      member_ids = {m.sim_title, m.sim_description};
      break;
    case Context::kAll:
      member_ids = {m.mp_none, m.mp_author, m.mp_bisac, m.sim_title,
                    m.sim_description};
      break;
    default:
      member_ids = {m.best_mp, m.best_sim};
      break;
  }
  std::vector<Recommender> members;
  for (const AlgorithmId& member : member_ids) {
    members.push_back(make_algorithm(member, resources));
  }
  return named([members = std::move(members)](const EBook& q, std::size_t k) {
    std::vector<ScoredTagList> lists;
    lists.reserve(members.size());
    for (const Recommender& member : members) lists.push_back(member(q, k));
    return cross_algorithm_hybrid(lists, k);
  });
}

}  // namespace tagrec::rec
