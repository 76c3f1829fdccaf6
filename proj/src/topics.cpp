#include "ctscope/topics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <set>

#include "ctscope/error.hpp"
#include "ctscope/util.hpp"

namespace ctscope::topics {

double TfIdfModel::weight(std::size_t doc, const std::string& term) const {
  auto it = vocabulary.find(term);
  if (it == vocabulary.end()) return 0.0;
  const auto& row = docs.at(doc);
  auto col = static_cast<std::uint32_t>(it->second);
  auto pos = std::lower_bound(row.begin(), row.end(), col, [](const auto& p, std::uint32_t c) { return p.first < c; });
  return (pos != row.end() && pos->first == col) ? pos->second : 0.0;
}

TfIdfModel fit_tfidf(const std::vector<std::vector<std::string>>& docs) {
  TfIdfModel m;
  m.doc_count = docs.size();
  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    std::set<std::string_view> uniq(d.begin(), d.end());
    for (auto t : uniq) ++df[std::string(t)];
  }
  if (df.empty()) throw DataError("TF-IDF needs at least one non-empty document");
  for (const auto& [term, count] : df) {
    m.vocabulary.emplace(term, m.terms.size());
    m.terms.push_back(term);
    m.df.push_back(count);
    double n = static_cast<double>(m.doc_count);
    m.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  m.docs.resize(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i) {
    std::map<std::uint32_t, double> tf;
    for (const auto& t : docs[i]) tf[static_cast<std::uint32_t>(m.vocabulary.at(t))] += 1.0;
    double norm2 = 0.0;
    auto& row = m.docs[i];
    for (const auto& [col, count] : tf) {
      double w = count * m.idf[col];
      row.emplace_back(col, w);
      norm2 += w * w;
    }
    if (norm2 > 0.0) {
      double inv = 1.0 / std::sqrt(norm2);
      for (auto& p : row) p.second *= inv;
    }
  }
  return m;
}

std::vector<TermScore> top_terms(const TfIdfModel& model, std::span<const std::size_t> doc_ids, std::size_t n) {
  if (doc_ids.empty()) throw DataError("top_terms: empty document subset");
  std::vector<double> score(model.terms.size(), 0.0);
  for (auto d : doc_ids) {
    if (d >= model.docs.size()) throw DataError("top_terms: document index out of range");
    for (const auto& [col, w] : model.docs[d]) score[col] += w;
  }
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < score.size(); ++c) {
    if (score[c] > 0.0) cols.push_back(c);
  }
  // Columns are in lexicographic term order, so the index breaks ties.
  auto better = [&](std::size_t a, std::size_t b) { return score[a] != score[b] ? score[a] > score[b] : a < b; };
  std::size_t take = std::min(n, cols.size());
  std::partial_sort(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(take), cols.end(), better);
  std::vector<TermScore> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({model.terms[cols[i]], score[cols[i]]});
  return out;
}

std::string Scope::str() const {
  std::string s = cluster < 0 ? "overall" : "cluster:" + std::to_string(cluster);
  if (label) s += ":" + std::string(to_string(*label));
  return s;
}

namespace {

KeywordReport excluded_report(const TfIdfModel& model, const std::vector<std::size_t>& docs, Scope scope,
                              const std::vector<TermScore>& exclude, std::size_t n) {
  KeywordReport r;
  r.scope = scope;
  if (docs.empty()) {
    r.empty = true;
    return r;
  }
  auto all = top_terms(model, docs, model.terms.size());
  std::set<std::string> ex;
  for (const auto& t : exclude) ex.insert(t.term);
  for (auto& t : all) {
    if (ex.count(t.term)) {
      r.excluded_terms.push_back(t.term);
    } else if (r.ranked_terms.size() < n) {
      r.ranked_terms.push_back(std::move(t));
    }
  }
  return r;
}

}  // namespace

ClusterKeywords cluster_keywords(const TfIdfModel& model, const std::vector<int>& assignments, std::size_t k,
                                 std::size_t n) {
  if (assignments.size() != model.doc_count) throw ShapeError("assignments do not cover the TF-IDF documents");
  std::vector<std::size_t> all(model.doc_count);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  ClusterKeywords out;
  out.overall.scope = Scope{};
  out.overall.ranked_terms = top_terms(model, all, n);
  auto exclude = top_terms(model, all, kExcludeTop);

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] < 0) continue;
    if (static_cast<std::size_t>(assignments[i]) >= k) throw DataError("assignment outside [0,k)");
    members[static_cast<std::size_t>(assignments[i])].push_back(i);
  }
  for (std::size_t c = 0; c < k; ++c) {
    out.clusters.push_back(excluded_report(model, members[c], Scope{static_cast<int>(c), std::nullopt}, exclude, n));
  }
  return out;
}

std::vector<SentimentKeywords> sentiment_keywords(const TfIdfModel& model, const std::vector<int>& assignments,
                                                  const std::vector<Polarity>& labels, std::size_t k, std::size_t n) {
  if (assignments.size() != model.doc_count || labels.size() != model.doc_count) {
    throw ShapeError("assignments/labels do not cover the TF-IDF documents");
  }
  std::vector<SentimentKeywords> out;
  for (auto label : kPolarities) {
    SentimentKeywords sk;
    sk.label = label;
    std::vector<std::size_t> docs;
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != label) continue;
      docs.push_back(i);
      if (assignments[i] >= 0) members.at(static_cast<std::size_t>(assignments[i])).push_back(i);
    }
    sk.overall.scope = Scope{-1, label};
    std::vector<TermScore> exclude;
    if (docs.empty()) {
      sk.overall.empty = true;
    } else {
      sk.overall.ranked_terms = top_terms(model, docs, n);
      exclude = top_terms(model, docs, kExcludeTop);
    }
    for (std::size_t c = 0; c < k; ++c) {
      sk.clusters.push_back(excluded_report(model, members[c], Scope{static_cast<int>(c), label}, exclude, n));
    }
    out.push_back(std::move(sk));
  }
  return out;
}

std::string reports_csv(const std::vector<KeywordReport>& reports) {
  std::string out = "scope,rank,term,score\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.ranked_terms.size(); ++i) {
      out += r.scope.str() + "," + std::to_string(i + 1) + "," + util::csv_escape(r.ranked_terms[i].term) + "," +
             util::format_double(r.ranked_terms[i].score) + "\n";
    }
  }
  return out;
}

std::string reports_json(const std::vector<KeywordReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["scope"] = r.scope.str();
    j["cluster"] = r.scope.cluster;
    j["sentiment"] = r.scope.label ? nlohmann::ordered_json(std::string(to_string(*r.scope.label))) : nullptr;
    j["empty"] = r.empty;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : r.ranked_terms) terms.push_back({{"term", t.term}, {"score", t.score}});
    j["ranked_terms"] = std::move(terms);
    j["excluded_terms"] = r.excluded_terms;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<KeywordReport> reports_from_json(std::string_view json_text) {
  auto arr = nlohmann::json::parse(json_text);
  std::vector<KeywordReport> out;
  for (const auto& j : arr) {
    KeywordReport r;
    r.scope.cluster = j.at("cluster").get<int>();
    if (!j.at("sentiment").is_null()) r.scope.label = parse_polarity(j.at("sentiment").get<std::string>());
    r.empty = j.at("empty").get<bool>();
    for (const auto& t : j.at("ranked_terms")) r.ranked_terms.push_back({t.at("term"), t.at("score")});
    r.excluded_terms = j.at("excluded_terms").get<std::vector<std::string>>();
    out.push_back(std::move(r));
  }
  return out;
}

std::string vocabulary_tsv(const TfIdfModel& model) {
  std::string out = "# " + model.variant + "\nterm\tindex\tdf\tidf\n";
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    out += model.terms[i] + "\t" + std::to_string(i) + "\t" + std::to_string(model.df[i]) + "\t" +
           util::format_double(model.idf[i]) + "\n";
  }
  return out;
}

}  // namespace ctscope::topics
