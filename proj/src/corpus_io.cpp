#include "kpdrop/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <utility>

#include "json.hpp"

#include "kpdrop/error.hpp"
#include "kpdrop/target_formats.hpp"

namespace kpdrop {

using nlohmann::json;

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

const json& require(const json& obj, const char* field, json::value_t type) {
  auto it = obj.find(field);
  if (it == obj.end()) throw CorpusError(std::string("missing field \"") + field + "\"");
  if (it->type() != type) throw CorpusError(std::string("field \"") + field + "\" has the wrong type");
  return *it;
}

std::vector<std::string> string_list(const json& obj, const char* field) {
  const json& arr = require(obj, field, json::value_t::array);
  std::vector<std::string> out;
  for (const json& v : arr) {
    if (!v.is_string()) throw CorpusError(std::string("field \"") + field + "\" must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json parse_object(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw CorpusError("malformed JSON");
  if (!j.is_object()) throw CorpusError("line is not a JSON object");
  return j;
}

} // namespace

CorpusReader::CorpusReader(std::istream& in) : in_(in) {}

std::optional<CorpusRecord> CorpusReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (blank(line)) continue;
    CorpusRecord rec;
    try {
      rec = parse_corpus_record(line);
    } catch (const CorpusError& e) {
      errors_.push_back({line_no_, e.what()});
      continue;
    }
    std::vector<std::string> raw_phrases;
    if (rec.keyphrases) raw_phrases = std::exchange(*rec.keyphrases, {});
    if (!ids_.insert(rec.id).second) {
      throw CorpusError("line " + std::to_string(line_no_) + ": duplicate id \"" + rec.id + "\"");
    }
    for (std::string& p : raw_phrases) {
      if (p.find(kTargetDelimiter) != std::string::npos) {
        warnings_.push_back({line_no_, "dropped keyphrase containing ';': \"" + p + "\""});
      } else if (tokenize(p).empty()) {
        warnings_.push_back({line_no_, "dropped keyphrase without tokens: \"" + p + "\""});
      } else {
        rec.keyphrases->push_back(std::move(p));
      }
    }
    return rec;
  }
  return std::nullopt;
}

IngestReport ingest(std::istream& in) {
  IngestReport report;
  CorpusReader reader(in);
  while (auto rec = reader.next()) report.records.push_back(std::move(*rec));
  report.errors = reader.errors();
  report.warnings = reader.warnings();
  return report;
}

IngestReport ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open " + path.string());
  return ingest(in);
}

std::string emit(const CorpusRecord& record) {
  json j = {{"id", record.id}, {"title", record.title}, {"abstract", record.abstract}};
  if (record.keyphrases) j["keyphrases"] = *record.keyphrases;
  return dump(j);
}

CorpusRecord parse_corpus_record(const std::string& line) {
  const json j = parse_object(line);
  CorpusRecord rec;
  rec.id = require(j, "id", json::value_t::string).get<std::string>();
  rec.title = require(j, "title", json::value_t::string).get<std::string>();
  rec.abstract = require(j, "abstract", json::value_t::string).get<std::string>();
  if (j.contains("keyphrases") && !j["keyphrases"].is_null()) rec.keyphrases = string_list(j, "keyphrases");
  return rec;
}

Example to_example(const CorpusRecord& record, const TokenizeOptions& options) {
  Example ex;
  ex.doc = Document::from_text(record.id, record.title, record.abstract, options);
  static const std::vector<std::string> kNone;
  ex.keyphrases = partition(ex.doc, record.keyphrases ? *record.keyphrases : kNone, options);
  return ex;
}

AugmentedRecord to_record(const AugmentedSample& sample, std::string id, std::string strategy,
                          std::uint64_t epoch, std::uint64_t seed) {
  AugmentedRecord r;
  r.id = std::move(id);
  r.source_id = sample.original_id;
  r.masked_text = sample.doc_new.text();
  const One2SetTarget slots = format_one2set(sample);
  r.present = slots.present_slots;
  const std::size_t n_artificial = sample.absent_artificial.size();
  r.absent_artificial.assign(slots.absent_slots.begin(), slots.absent_slots.begin() + n_artificial);
  r.absent_natural.assign(slots.absent_slots.begin() + n_artificial, slots.absent_slots.end());
  for (const Phrase& p : sample.collateral) r.collateral.push_back(p.text);
  r.strategy = std::move(strategy);
  r.epoch = epoch;
  r.seed = seed;
  return r;
}

std::string emit(const AugmentedRecord& r) {
  const json j = {{"id", r.id},
                  {"source_id", r.source_id},
                  {"masked_text", r.masked_text},
                  {"present", r.present},
                  {"absent_natural", r.absent_natural},
                  {"absent_artificial", r.absent_artificial},
                  {"collateral", r.collateral},
                  {"strategy", r.strategy},
                  {"epoch", r.epoch},
                  {"seed", r.seed}};
  return dump(j);
}

AugmentedRecord parse_augmented(const std::string& line) {
  const json j = parse_object(line);
  AugmentedRecord r;
  r.id = require(j, "id", json::value_t::string).get<std::string>();
  r.source_id = require(j, "source_id", json::value_t::string).get<std::string>();
  r.masked_text = require(j, "masked_text", json::value_t::string).get<std::string>();
  r.present = string_list(j, "present");
  r.absent_natural = string_list(j, "absent_natural");
  r.absent_artificial = string_list(j, "absent_artificial");
  if (j.contains("collateral")) r.collateral = string_list(j, "collateral");
  r.strategy = require(j, "strategy", json::value_t::string).get<std::string>();
  const auto number = [&](const char* field) -> std::uint64_t {
    auto it = j.find(field);
    if (it == j.end() || !it->is_number_unsigned()) {
      throw CorpusError(std::string("field \"") + field + "\" must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
  };
  r.epoch = number("epoch");
  r.seed = number("seed");
  return r;
}

AugmentedSample to_sample(const AugmentedRecord& record, const TokenizeOptions& options) {
  AugmentedSample s;
  s.original_id = record.source_id;
  s.doc_new = Document::from_text(record.id, "", record.masked_text, options);
  for (std::size_t i = 0; i < record.present.size(); ++i) {
    s.present_new.push_back({make_phrase(record.present[i], options), i});
  }
  for (std::size_t i = 0; i < record.absent_artificial.size(); ++i) {
    s.absent_artificial.push_back({make_phrase(record.absent_artificial[i], options), i});
  }
  for (const std::string& p : record.absent_natural) s.absent_natural.push_back(make_phrase(p, options));
  for (const std::string& p : record.collateral) s.collateral.push_back(make_phrase(p, options));
  return s;
}

Prediction parse_prediction(const std::string& line) {
  const json j = parse_object(line);
  return {require(j, "id", json::value_t::string).get<std::string>(), string_list(j, "predictions")};
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      out.push_back(parse_prediction(line));
    } catch (const CorpusError& e) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

} // namespace kpdrop
