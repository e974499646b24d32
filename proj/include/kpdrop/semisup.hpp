#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpdrop/corpus_io.hpp"
#include "kpdrop/partitioner.hpp"

namespace kpdrop {

struct SplitSpec {
  std::size_t n_labeled = 5000;
  std::uint64_t seed = 0;
};

struct CorpusSplit {
  std::vector<CorpusRecord> labeled;   // keyphrases intact
  std::vector<CorpusRecord> unlabeled; // keyphrases removed
};

// Seeded uniform choice of n_labeled records; both parts keep input order.
// Throws ContractViolation when n_labeled exceeds the corpus size.
CorpusSplit split_corpus(std::span<const CorpusRecord> corpus, const SplitSpec& spec);

// Fixed English stopword list shipped with the library.
inline constexpr std::string_view kStopwordListVersion = "en-2026.1";
bool is_stopword(std::string_view norm);

struct CandidateOptions {
  std::size_t max_length = 5;
};

struct Candidate {
  Phrase phrase;
  std::size_t first_position = 0; // in Document::full
};

// Contiguous n-grams of doc.full (1..max_length tokens) without <digit> or
// mask tokens and without a stopword at either end; deduplicated by stem
// key, in order of first occurrence.
std::vector<Candidate> extract_candidates(const Document& doc, const CandidateOptions& options = {});

// Scores every candidate of one document; higher is better. Scores are
// only compared within a document.
class CandidateScorer {
public:
  virtual ~CandidateScorer() = default;
  virtual std::vector<double> score(const Document& doc,
                                    std::span<const Candidate> candidates) const = 0;
};

// Adapts a per-candidate function.
class FunctionScorer final : public CandidateScorer {
public:
  using Fn = std::function<double(const Document&, const Candidate&)>;
  explicit FunctionScorer(Fn fn) : fn_(std::move(fn)) {}

  std::vector<double> score(const Document& doc, std::span<const Candidate> candidates) const override;

private:
  Fn fn_;
};

// Document frequencies of stems.
class DocumentFrequencies {
public:
  void add(const Document& doc);
  void merge(const DocumentFrequencies& other);

  std::size_t n_docs() const { return n_docs_; }
  std::size_t count(const std::string& stem) const;
  const std::map<std::string, std::size_t>& counts() const { return counts_; }

  // "# documents N" then "stem\tcount" lines sorted by stem.
  void save(const std::filesystem::path& path) const;
  static DocumentFrequencies load(const std::filesystem::path& path); // throws CorpusError

  friend bool operator==(const DocumentFrequencies&, const DocumentFrequencies&) = default;

private:
  std::size_t n_docs_ = 0;
  std::map<std::string, std::size_t> counts_;
};

// sum over candidate tokens of tf(stem) * idf(stem), divided by
// (1 + first position); idf = ln((N + 1) / (df + 1)) + 1.
class TfIdfScorer final : public CandidateScorer {
public:
  explicit TfIdfScorer(DocumentFrequencies df) : df_(std::move(df)) {}

  std::vector<double> score(const Document& doc, std::span<const Candidate> candidates) const override;

private:
  DocumentFrequencies df_;
};

// Top k candidates by score; ties go to the earlier first occurrence, then
// the shorter phrase.
std::vector<Phrase> rank_and_label(const Document& doc, std::size_t k, const CandidateScorer& scorer,
                                   const CandidateOptions& options = {});

// Gives each record synthetic keyphrases taken from its own text.
std::vector<CorpusRecord> label_synthetic(std::span<const CorpusRecord> unlabeled, std::size_t k,
                                          const CandidateScorer& scorer,
                                          const CandidateOptions& options = {});

CorpusRecord label_record(const CorpusRecord& record, std::size_t k, const CandidateScorer& scorer,
                          const CandidateOptions& options = {});

} // namespace kpdrop
