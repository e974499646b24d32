#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "kpdrop/augmentor.hpp"
#include "kpdrop/metrics.hpp"

namespace kpdrop {

// {"id": str, "title": str, "abstract": str, "keyphrases": [str]} per line;
// "keyphrases" may be missing for unlabeled records.
struct CorpusRecord {
  std::string id;
  std::string title;
  std::string abstract;
  std::optional<std::vector<std::string>> keyphrases;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

struct LineIssue {
  std::size_t line = 0; // 1-based
  std::string message;
};

// Streaming JSONL corpus reader. Malformed lines and lines missing a
// required field are skipped and reported in errors(); keyphrases that
// contain the target delimiter or have no tokens are dropped and reported
// in warnings(). A repeated id throws CorpusError.
class CorpusReader {
public:
  explicit CorpusReader(std::istream& in);

  std::optional<CorpusRecord> next();

  const std::vector<LineIssue>& errors() const { return errors_; }
  const std::vector<LineIssue>& warnings() const { return warnings_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  std::unordered_set<std::string> ids_;
  std::vector<LineIssue> errors_;
  std::vector<LineIssue> warnings_;
};

struct IngestReport {
  std::vector<CorpusRecord> records;
  std::vector<LineIssue> errors;
  std::vector<LineIssue> warnings;
};

IngestReport ingest(std::istream& in);
IngestReport ingest(const std::filesystem::path& path); // throws CorpusError if unreadable

// One JSON object, no trailing newline.
std::string emit(const CorpusRecord& record);
// Throws CorpusError for malformed lines. Keyphrases are not filtered.
CorpusRecord parse_corpus_record(const std::string& line);

// Tokenizes and partitions a labeled record (missing keyphrases = none).
Example to_example(const CorpusRecord& record, const TokenizeOptions& options = {});

// Self-describing augmented sample. Keyphrase lists are written in target
// order (see target_order), so a reader can recover the ordering without
// the source document.
struct AugmentedRecord {
  std::string id;
  std::string source_id;
  std::string masked_text; // masked title + "\n" + masked abstract
  std::vector<std::string> present;
  std::vector<std::string> absent_natural;
  std::vector<std::string> absent_artificial;
  std::vector<std::string> collateral;
  std::string strategy;
  std::uint64_t epoch = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const AugmentedRecord&, const AugmentedRecord&) = default;
};

AugmentedRecord to_record(const AugmentedSample& sample, std::string id, std::string strategy,
                          std::uint64_t epoch, std::uint64_t seed);
std::string emit(const AugmentedRecord& record);
// Throws CorpusError on malformed input.
AugmentedRecord parse_augmented(const std::string& line);
// Rebuilds a sample whose formatter output equals that of the sample the
// record was made from.
AugmentedSample to_sample(const AugmentedRecord& record, const TokenizeOptions& options = {});

// {"id": str, "predictions": [str]} per line.
Prediction parse_prediction(const std::string& line); // throws CorpusError
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

} // namespace kpdrop
