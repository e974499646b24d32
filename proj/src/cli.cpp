#include "kpdrop/cli.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kpdrop/augmentor.hpp"
#include "kpdrop/corpus_io.hpp"
#include "kpdrop/error.hpp"
#include "kpdrop/metrics.hpp"
#include "kpdrop/semisup.hpp"
#include "kpdrop/target_formats.hpp"

namespace kpdrop::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kChunkSize = 4096;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

// Applies fn to every item on `threads` workers; results keep input order.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, unsigned threads, Fn fn) {
  using Out = decltype(fn(items.front()));
  std::vector<Out> out(items.size());
  if (threads <= 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
          try {
            out[i] = fn(items[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

class Input {
public:
  explicit Input(const std::string& path) {
    if (path == "-") {
      in_ = &std::cin;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw CorpusError("cannot open " + path);
      in_ = &file_;
    }
  }
  std::istream& stream() { return *in_; }

private:
  std::ifstream file_;
  std::istream* in_ = nullptr;
};

class Output {
public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      out_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw CorpusError("cannot write " + path);
      out_ = &file_;
    }
  }
  void line(const std::string& s) { *out_ << s << '\n'; }
  void finish() {
    out_->flush();
    if (!*out_) throw CorpusError("write failed");
  }

private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

// Reads corpus records chunk by chunk and hands each chunk to `sink`.
template <typename Sink>
int for_each_chunk(const std::string& path, std::size_t chunk_size, std::ostream& err, Sink sink) {
  Input input(path);
  CorpusReader reader(input.stream());
  std::vector<CorpusRecord> chunk;
  chunk.reserve(chunk_size);
  while (auto rec = reader.next()) {
    chunk.push_back(std::move(*rec));
    if (chunk.size() == chunk_size) {
      sink(chunk);
      chunk.clear();
    }
  }
  if (!chunk.empty()) sink(chunk);
  for (const LineIssue& w : reader.warnings()) err << path << ":" << w.line << ": warning: " << w.message << '\n';
  for (const LineIssue& e : reader.errors()) err << path << ":" << e.line << ": error: " << e.message << '\n';
  if (!reader.errors().empty()) {
    err << "kpdrop: " << reader.errors().size() << " malformed line(s) skipped\n";
    return 1;
  }
  return 0;
}

json spans_json(const std::vector<Span>& spans) {
  json arr = json::array();
  for (const Span& s : spans) arr.push_back({s.start, s.end});
  return arr;
}

struct CommonFlags {
  std::string input = "-";
  std::string output = "-";
  std::string mask_token = std::string(kDefaultMaskToken);
  unsigned threads = 1;
};

int cmd_partition(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  Output sink(f.output, out);
  const TokenizeOptions opts{f.mask_token};
  const int status = for_each_chunk(f.input, kChunkSize, err, [&](const std::vector<CorpusRecord>& chunk) {
    const auto lines = parallel_map(chunk, f.threads, [&](const CorpusRecord& r) {
      const Example ex = to_example(r, opts);
      json present = json::array();
      json spans = json::array();
      json absent = json::array();
      for (const PresentPhrase& p : ex.keyphrases.present) {
        present.push_back(p.phrase.text);
        spans.push_back(spans_json(p.spans));
      }
      for (const Phrase& p : ex.keyphrases.absent) absent.push_back(p.text);
      return dump({{"id", r.id}, {"present", present}, {"spans", spans}, {"absent", absent}});
    });
    for (const std::string& l : lines) sink.line(l);
  });
  sink.finish();
  return status;
}

struct AugmentFlags {
  double rate = 0.7;
  std::string strategy = "replace";
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::size_t batch_size = 64;
};

int cmd_augment(const CommonFlags& f, const AugmentFlags& a, std::ostream& out, std::ostream& err) {
  DropConfig cfg;
  cfg.rate = a.rate;
  cfg.mask_token = f.mask_token;
  cfg.seed = a.seed;
  cfg.validate();
  const bool append = a.strategy == "append";
  const TokenizeOptions opts{f.mask_token};
  const std::string dropped_suffix = "#kpd" + std::to_string(a.epoch);

  Output sink(f.output, out);
  const std::size_t chunk = append ? a.batch_size : kChunkSize;
  const int status = for_each_chunk(f.input, chunk, err, [&](const std::vector<CorpusRecord>& batch) {
    struct Pair {
      std::string original;
      std::string dropped;
    };
    const auto pairs = parallel_map(batch, f.threads, [&](const CorpusRecord& r) {
      const Example ex = to_example(r, opts);
      Pair p;
      if (append) {
        p.original = emit(to_record(unchanged_sample(ex.doc, ex.keyphrases), r.id, a.strategy,
                                    a.epoch, a.seed));
      }
      p.dropped = emit(to_record(kpdrop(ex, cfg, a.epoch), r.id + dropped_suffix, a.strategy,
                                 a.epoch, a.seed));
      return p;
    });
    if (append) {
      for (const Pair& p : pairs) sink.line(p.original);
    }
    for (const Pair& p : pairs) sink.line(p.dropped);
  });
  sink.finish();
  return status;
}

json target_json(const std::string& id, const std::string& source, const AugmentedSample& s,
                 const std::string& format) {
  json j = {{"id", id}, {"source", source}};
  if (format == "one2many") {
    j["target"] = format_one2many(s).sequence;
  } else if (format == "one2one") {
    j["targets"] = format_one2one(s).phrases;
  } else {
    const One2SetTarget t = format_one2set(s);
    j["present"] = t.present_slots;
    j["absent"] = t.absent_slots;
  }
  return j;
}

int cmd_format(const CommonFlags& f, const std::string& format, std::ostream& out, std::ostream& err) {
  const TokenizeOptions opts{f.mask_token};
  Output sink(f.output, out);

  // Augmented records are recognised by their masked_text field; anything
  // else is read as a corpus file with nothing dropped.
  if (f.input == "-") throw ContractViolation("format-targets needs a file for --input");
  bool augmented = false;
  {
    Input probe(f.input);
    std::string line;
    while (std::getline(probe.stream(), line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json j = json::parse(line, nullptr, false);
      augmented = j.is_object() && j.contains("masked_text");
      break;
    }
  }

  int status = 0;
  if (augmented) {
    Input input(f.input);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input.stream(), line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      AugmentedRecord rec;
      try {
        rec = parse_augmented(line);
      } catch (const CorpusError& e) {
        err << f.input << ":" << line_no << ": error: " << e.what() << '\n';
        status = 1;
        continue;
      }
      sink.line(dump(target_json(rec.id, rec.masked_text, to_sample(rec, opts), format)));
    }
  } else {
    status = for_each_chunk(f.input, kChunkSize, err, [&](const std::vector<CorpusRecord>& chunk) {
      const auto lines = parallel_map(chunk, f.threads, [&](const CorpusRecord& r) {
        const Example ex = to_example(r, opts);
        return dump(target_json(r.id, ex.doc.text(), unchanged_sample(ex.doc, ex.keyphrases), format));
      });
      for (const std::string& l : lines) sink.line(l);
    });
  }
  sink.finish();
  return status;
}

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

int cmd_score(const std::string& gold_path, const std::string& preds_path, const std::string& category,
              const std::string& per_doc, std::ostream& out, std::ostream& err) {
  const Category cat = parse_category(category);
  IngestReport gold = ingest(std::filesystem::path(gold_path));
  for (const LineIssue& e : gold.errors) err << gold_path << ":" << e.line << ": error: " << e.message << '\n';
  std::vector<Example> corpus;
  corpus.reserve(gold.records.size());
  for (const CorpusRecord& r : gold.records) corpus.push_back(to_example(r));
  const std::vector<Prediction> preds = read_predictions(preds_path);
  const ScoreReport report = score_corpus(preds, corpus, cat);

  out << std::left << std::setw(14) << "category" << to_string(report.category) << '\n';
  out << std::setw(14) << "docs_scored" << report.n_docs_scored << '\n';
  out << std::setw(14) << "docs_skipped" << report.n_docs_skipped << '\n';
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    out << std::setw(14) << kMetricNames[i] << fixed4(report.macro[i]) << '\n';
  }

  if (!per_doc.empty()) {
    std::ofstream csv(per_doc, std::ios::binary | std::ios::trunc);
    if (!csv) throw CorpusError("cannot write " + per_doc);
    csv << "id,n_pred,n_gold,n_matched";
    for (std::string_view m : kMetricNames) csv << ',' << m;
    csv << '\n';
    for (const DocRow& row : report.per_doc) {
      csv << '"';
      for (char c : row.doc_id) {
        if (c == '"') csv << '"';
        csv << c;
      }
      csv << '"' << ',' << row.at_m.n_pred << ',' << row.at_m.n_gold << ',' << row.at_m.n_matched;
      csv << std::fixed << std::setprecision(6);
      for (double v : row.values()) csv << ',' << v;
      csv << '\n';
    }
  }
  return gold.errors.empty() ? 0 : 1;
}

int cmd_split(const std::string& input, const std::string& labeled_out, const std::string& unlabeled_out,
              const SplitSpec& spec, std::ostream& out, std::ostream& err) {
  IngestReport corpus = ingest(std::filesystem::path(input));
  for (const LineIssue& e : corpus.errors) err << input << ":" << e.line << ": error: " << e.message << '\n';
  const CorpusSplit split = split_corpus(corpus.records, spec);
  Output lr(labeled_out, out);
  for (const CorpusRecord& r : split.labeled) lr.line(emit(r));
  lr.finish();
  Output uc(unlabeled_out, out);
  for (const CorpusRecord& r : split.unlabeled) uc.line(emit(r));
  uc.finish();
  err << "labeled " << split.labeled.size() << ", unlabeled " << split.unlabeled.size() << '\n';
  return corpus.errors.empty() ? 0 : 1;
}

struct LabelFlags {
  std::size_t top_k = 10;
  std::string scorer = "tfidf";
  std::string df_in;
  std::string df_out;
  std::size_t max_length = 5;
};

int cmd_label(const CommonFlags& f, const LabelFlags& l, std::ostream& out, std::ostream& err) {
  if (f.input == "-") throw ContractViolation("label-synthetic needs a file for --input");
  DocumentFrequencies df;
  if (!l.df_in.empty()) {
    df = DocumentFrequencies::load(l.df_in);
  } else {
    std::ostringstream discard;
    for_each_chunk(f.input, kChunkSize, discard, [&](const std::vector<CorpusRecord>& chunk) {
      for (const CorpusRecord& r : chunk) df.add(Document::from_text(r.id, r.title, r.abstract));
    });
  }
  if (!l.df_out.empty()) df.save(l.df_out);

  const TfIdfScorer scorer(std::move(df));
  const CandidateOptions options{l.max_length};
  Output sink(f.output, out);
  const int status = for_each_chunk(f.input, kChunkSize, err, [&](const std::vector<CorpusRecord>& chunk) {
    const auto lines = parallel_map(chunk, f.threads, [&](const CorpusRecord& r) {
      return emit(label_record(r, l.top_k, scorer, options));
    });
    for (const std::string& line : lines) sink.line(line);
  });
  sink.finish();
  return status;
}

} // namespace

int run_pipeline(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyphrase dropout augmentation, target formatting and evaluation", "kpdrop"};
  app.require_subcommand(1);

  CommonFlags common;
  auto add_io = [&](CLI::App* sub, bool with_output) {
    sub->add_option("--input,-i", common.input, "Input JSONL file ('-' for stdin)")->required();
    if (with_output) sub->add_option("--output,-o", common.output, "Output JSONL file ('-' for stdout)");
    sub->add_option("--mask-token", common.mask_token, "Mask token literal");
    sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* partition_cmd = app.add_subcommand("partition", "Split gold keyphrases into present and absent");
  add_io(partition_cmd, true);

  AugmentFlags aug;
  auto* augment_cmd = app.add_subcommand("augment", "Apply keyphrase dropout");
  add_io(augment_cmd, true);
  augment_cmd->add_option("--rate", aug.rate, "Drop probability per present keyphrase")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  augment_cmd->add_option("--strategy", aug.strategy, "replace or append")
      ->capture_default_str()
      ->check(CLI::IsMember({"replace", "append"}));
  augment_cmd->add_option("--seed", aug.seed, "Random seed")->required();
  augment_cmd->add_option("--epoch", aug.epoch, "Epoch counter")->capture_default_str();
  augment_cmd->add_option("--batch-size", aug.batch_size, "Batch size for the append strategy")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string format;
  auto* format_cmd = app.add_subcommand("format-targets", "Serialize training targets");
  add_io(format_cmd, true);
  format_cmd->add_option("--format", format, "one2many, one2one or one2set")
      ->required()
      ->check(CLI::IsMember({"one2many", "one2one", "one2set"}));

  std::string gold_path, preds_path, category, per_doc;
  auto* score_cmd = app.add_subcommand("score", "Score predicted keyphrases");
  score_cmd->add_option("--gold", gold_path, "Gold corpus JSONL")->required();
  score_cmd->add_option("--preds", preds_path, "Predictions JSONL")->required();
  score_cmd->add_option("--category", category, "present or absent")
      ->required()
      ->check(CLI::IsMember({"present", "absent"}));
  score_cmd->add_option("--per-doc", per_doc, "Write per-document scores as CSV");

  SplitSpec split;
  std::string split_input, labeled_out, unlabeled_out;
  auto* split_cmd = app.add_subcommand("split-semi", "Split a corpus into labeled and unlabeled parts");
  split_cmd->add_option("--input,-i", split_input, "Corpus JSONL")->required();
  split_cmd->add_option("--labeled-out", labeled_out, "Labeled part output")->required();
  split_cmd->add_option("--unlabeled-out", unlabeled_out, "Unlabeled part output")->required();
  split_cmd->add_option("--n-labeled", split.n_labeled, "Labeled records to keep")->capture_default_str();
  split_cmd->add_option("--seed", split.seed, "Random seed")->required();

  LabelFlags label;
  auto* label_cmd = app.add_subcommand("label-synthetic", "Label documents with extracted keyphrases");
  add_io(label_cmd, true);
  label_cmd->add_option("--top-k", label.top_k, "Keyphrases per document")->capture_default_str();
  label_cmd->add_option("--scorer", label.scorer, "Candidate scorer")
      ->capture_default_str()
      ->check(CLI::IsMember({"tfidf"}));
  label_cmd->add_option("--df-in", label.df_in, "Load document frequencies instead of counting");
  label_cmd->add_option("--df-out", label.df_out, "Save document frequencies");
  label_cmd->add_option("--max-length", label.max_length, "Longest candidate in tokens")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("kpdrop");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "kpdrop: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*partition_cmd) return cmd_partition(common, out, err);
    if (*augment_cmd) return cmd_augment(common, aug, out, err);
    if (*format_cmd) return cmd_format(common, format, out, err);
    if (*score_cmd) return cmd_score(gold_path, preds_path, category, per_doc, out, err);
    if (*split_cmd) return cmd_split(split_input, labeled_out, unlabeled_out, split, out, err);
    if (*label_cmd) return cmd_label(common, label, out, err);
  } catch (const std::exception& e) {
    err << "kpdrop: error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

} // namespace kpdrop::cli
