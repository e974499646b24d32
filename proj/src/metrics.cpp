#include "kpdrop/metrics.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "kpdrop/error.hpp"

namespace kpdrop {

namespace {

DocScore make_score(std::size_t n_matched, std::size_t n_pred, std::size_t n_gold,
                    double precision_denominator) {
  DocScore s;
  s.n_pred = n_pred;
  s.n_gold = n_gold;
  s.n_matched = n_matched;
  s.precision = precision_denominator > 0 ? static_cast<double>(n_matched) / precision_denominator : 0.0;
  s.recall = n_gold > 0 ? static_cast<double>(n_matched) / static_cast<double>(n_gold) : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

std::size_t matched_in_top(const MatchResult& m, std::size_t k) {
  const std::size_t n = std::min(k, m.predictions.size());
  return static_cast<std::size_t>(std::count(m.matched.begin(), m.matched.begin() + n, true));
}

} // namespace

std::string_view to_string(Category c) { return c == Category::Present ? "present" : "absent"; }

Category parse_category(std::string_view s) {
  if (s == "present") return Category::Present;
  if (s == "absent") return Category::Absent;
  throw ContractViolation("unknown category \"" + std::string(s) + "\"");
}

std::vector<Phrase> to_phrases(std::span<const std::string> raw) {
  std::vector<Phrase> out;
  out.reserve(raw.size());
  for (const std::string& r : raw) {
    try {
      out.push_back(make_phrase(r));
    } catch (const InvalidKeyphrase&) {
      // nothing to match
    }
  }
  return out;
}

MatchResult match(std::span<const Phrase> preds, std::span<const Phrase> gold) {
  MatchResult m;
  std::unordered_map<std::string, bool> gold_used;
  for (const Phrase& g : gold) gold_used.emplace(g.key, false);
  m.n_gold = gold_used.size();

  std::unordered_set<std::string> seen;
  for (const Phrase& p : preds) {
    if (!seen.insert(p.key).second) continue;
    m.predictions.push_back(p);
    auto it = gold_used.find(p.key);
    const bool hit = it != gold_used.end() && !it->second;
    if (hit) it->second = true;
    m.matched.push_back(hit);
  }
  return m;
}

DocScore f1_at_m(std::span<const Phrase> preds, std::span<const Phrase> gold) {
  const MatchResult m = match(preds, gold);
  const std::size_t n = m.predictions.size();
  return make_score(matched_in_top(m, n), n, m.n_gold, static_cast<double>(n));
}

DocScore f1_at_k(std::span<const Phrase> preds, std::span<const Phrase> gold, std::size_t k) {
  if (k == 0) throw ContractViolation("f1_at_k requires k >= 1");
  const MatchResult m = match(preds, gold);
  const std::size_t n = std::min(k, m.predictions.size());
  return make_score(matched_in_top(m, n), n, m.n_gold, static_cast<double>(n));
}

DocScore f1_at_5c(std::span<const Phrase> preds, std::span<const Phrase> gold) {
  const MatchResult m = match(preds, gold);
  const std::size_t n = std::min<std::size_t>(5, m.predictions.size());
  return make_score(matched_in_top(m, n), n, m.n_gold, 5.0);
}

double recall_at_k(std::span<const Phrase> preds, std::span<const Phrase> gold, std::size_t k) {
  const MatchResult m = match(preds, gold);
  if (m.n_gold == 0) return 0.0;
  return static_cast<double>(matched_in_top(m, k)) / static_cast<double>(m.n_gold);
}

std::array<double, 5> DocRow::values() const {
  return {at_m.f1, at_5.f1, at_5c.f1, recall_10, recall_50};
}

double ScoreReport::value(std::string_view metric) const {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == metric) return macro[i];
  }
  throw ContractViolation("unknown metric \"" + std::string(metric) + "\"");
}

ScoreReport score_corpus(std::span<const Prediction> preds, std::span<const Example> corpus,
                         Category category) {
  std::unordered_map<std::string_view, std::size_t> doc_index;
  for (std::size_t i = 0; i < corpus.size(); ++i) doc_index.emplace(corpus[i].doc.id, i);

  std::vector<const Prediction*> by_doc(corpus.size(), nullptr);
  for (const Prediction& p : preds) {
    auto it = doc_index.find(p.doc_id);
    if (it == doc_index.end()) throw CorpusError("prediction for unknown document \"" + p.doc_id + "\"");
    if (by_doc[it->second] != nullptr) {
      throw CorpusError("duplicate predictions for document \"" + p.doc_id + "\"");
    }
    by_doc[it->second] = &p;
  }

  ScoreReport report;
  report.category = category;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Example& ex = corpus[i];
    std::vector<Phrase> gold;
    if (category == Category::Present) {
      for (const PresentPhrase& p : ex.keyphrases.present) gold.push_back(p.phrase);
    } else {
      gold = ex.keyphrases.absent;
    }
    if (gold.empty()) {
      ++report.n_docs_skipped;
      continue;
    }

    std::vector<Phrase> selected;
    if (by_doc[i] != nullptr) {
      for (Phrase& p : to_phrases(by_doc[i]->phrases)) {
        const bool present = !find_matches(ex.doc.full, p.tokens).empty();
        if (present == (category == Category::Present)) selected.push_back(std::move(p));
      }
    }

    DocRow row;
    row.doc_id = ex.doc.id;
    row.at_m = f1_at_m(selected, gold);
    row.at_5 = f1_at_k(selected, gold, 5);
    row.at_5c = f1_at_5c(selected, gold);
    row.recall_10 = recall_at_k(selected, gold, 10);
    row.recall_50 = recall_at_k(selected, gold, 50);
    const auto values = row.values();
    for (std::size_t m = 0; m < values.size(); ++m) report.macro[m] += values[m];
    report.per_doc.push_back(std::move(row));
  }
  report.n_docs_scored = report.per_doc.size();
  if (report.n_docs_scored > 0) {
    for (double& v : report.macro) v /= static_cast<double>(report.n_docs_scored);
  }
  return report;
}

} // namespace kpdrop
