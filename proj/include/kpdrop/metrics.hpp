#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpdrop/augmentor.hpp"
#include "kpdrop/partitioner.hpp"

namespace kpdrop {

// Ranked predictions for one document, best first.
struct Prediction {
  std::string doc_id;
  std::vector<std::string> phrases;
};

struct DocScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  std::size_t n_matched = 0;
};

enum class Category { Present, Absent };

std::string_view to_string(Category c);
Category parse_category(std::string_view s); // throws ContractViolation

// Tokenizes raw strings, silently skipping ones without tokens.
std::vector<Phrase> to_phrases(std::span<const std::string> raw);

struct MatchResult {
  std::vector<Phrase> predictions; // deduplicated by stem key, rank kept
  std::vector<bool> matched;       // parallel to predictions
  std::size_t n_gold = 0;          // distinct gold phrases
};

// Exact stem-key matching; each gold phrase absorbs at most one prediction.
MatchResult match(std::span<const Phrase> preds, std::span<const Phrase> gold);

DocScore f1_at_m(std::span<const Phrase> preds, std::span<const Phrase> gold);
// Top k of the deduplicated predictions, or all when fewer.
DocScore f1_at_k(std::span<const Phrase> preds, std::span<const Phrase> gold, std::size_t k);
// Top 5, with the precision denominator fixed at 5.
DocScore f1_at_5c(std::span<const Phrase> preds, std::span<const Phrase> gold);
double recall_at_k(std::span<const Phrase> preds, std::span<const Phrase> gold, std::size_t k);

inline constexpr std::array<std::string_view, 5> kMetricNames = {"F1@M", "F1@5", "F1@5C", "R@10",
                                                                 "R@50"};

struct DocRow {
  std::string doc_id;
  DocScore at_m;
  DocScore at_5;
  DocScore at_5c;
  double recall_10 = 0.0;
  double recall_50 = 0.0;

  // Values in kMetricNames order.
  std::array<double, 5> values() const;
};

struct ScoreReport {
  Category category = Category::Present;
  std::array<double, 5> macro{}; // kMetricNames order
  std::vector<DocRow> per_doc;
  std::size_t n_docs_scored = 0;
  std::size_t n_docs_skipped = 0;

  double value(std::string_view metric) const; // throws ContractViolation
};

// Predictions are split into present/absent against the original document;
// documents whose gold subset for `category` is empty are skipped. Throws
// CorpusError for unknown or repeated prediction ids.
ScoreReport score_corpus(std::span<const Prediction> preds, std::span<const Example> corpus,
                         Category category);

} // namespace kpdrop
