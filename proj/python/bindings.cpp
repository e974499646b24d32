#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <string>
#include <vector>

#include "kpdrop/augmentor.hpp"
#include "kpdrop/cli.hpp"
#include "kpdrop/corpus_io.hpp"
#include "kpdrop/error.hpp"
#include "kpdrop/metrics.hpp"
#include "kpdrop/partitioner.hpp"
#include "kpdrop/porter.hpp"
#include "kpdrop/semisup.hpp"
#include "kpdrop/target_formats.hpp"
#include "kpdrop/text_norm.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace kpdrop;

namespace {

std::vector<Phrase> phrases_of(const std::vector<std::string>& raw, const std::string& mask_token) {
  std::vector<Phrase> out;
  for (const std::string& r : raw) out.push_back(make_phrase(r, TokenizeOptions{mask_token}));
  return out;
}

std::vector<std::string> texts(const std::vector<Phrase>& phrases) {
  std::vector<std::string> out;
  for (const Phrase& p : phrases) out.push_back(p.text);
  return out;
}

std::vector<std::string> texts(const std::vector<PlacedPhrase>& phrases) {
  std::vector<std::string> out;
  for (const PlacedPhrase& p : phrases) out.push_back(p.phrase.text);
  return out;
}

std::vector<Example> examples_of(const std::vector<std::pair<Document, KeyphraseSet>>& batch) {
  std::vector<Example> out;
  out.reserve(batch.size());
  for (const auto& [doc, kps] : batch) out.push_back({doc, kps});
  return out;
}

std::string_view kind_name(TokenKind k) {
  switch (k) {
  case TokenKind::Word: return "word";
  case TokenKind::Digit: return "digit";
  case TokenKind::Mask: return "mask";
  }
  return "word";
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Keyphrase dropout augmentation, target formatting and evaluation";

  py::register_exception<Error>(m, "KpdropError", PyExc_RuntimeError);
  py::register_exception<InvalidKeyphrase>(m, "InvalidKeyphrase", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<CorpusError>(m, "CorpusError", PyExc_RuntimeError);

  py::class_<Token>(m, "Token")
      .def_readonly("surface", &Token::surface)
      .def_readonly("norm", &Token::norm)
      .def_readonly("stem", &Token::stem)
      .def_property_readonly("kind", [](const Token& t) { return std::string(kind_name(t.kind)); })
      .def_readonly("hyphen_joined", &Token::hyphen_joined)
      .def_readonly("offset", &Token::offset)
      .def_readonly("length", &Token::length)
      .def("__repr__", [](const Token& t) { return "<Token " + t.norm + ">"; });

  py::class_<Span>(m, "Span")
      .def(py::init<std::size_t, std::size_t>(), py::arg("start"), py::arg("end"))
      .def_readonly("start", &Span::start)
      .def_readonly("end", &Span::end)
      .def("__eq__", [](const Span& a, const Span& b) { return a == b; })
      .def("__repr__", [](const Span& s) {
        return "Span(" + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
      });

  py::class_<Phrase>(m, "Phrase")
      .def_readonly("text", &Phrase::text)
      .def_readonly("key", &Phrase::key)
      .def_readonly("tokens", &Phrase::tokens)
      .def("__repr__", [](const Phrase& p) { return "<Phrase '" + p.text + "'>"; });

  py::class_<Document>(m, "Document")
      .def_static(
          "from_text",
          [](std::string id, std::string title, std::string body, const std::string& mask_token) {
            return Document::from_text(std::move(id), std::move(title), std::move(body),
                                       TokenizeOptions{mask_token});
          },
          py::arg("id"), py::arg("title"), py::arg("body"),
          py::arg("mask_token") = std::string(kDefaultMaskToken))
      .def_readonly("id", &Document::id)
      .def_readonly("title_text", &Document::title_text)
      .def_readonly("body_text", &Document::body_text)
      .def_readonly("full", &Document::full)
      .def("text", &Document::text);

  py::class_<PresentPhrase>(m, "PresentPhrase")
      .def_readonly("phrase", &PresentPhrase::phrase)
      .def_readonly("spans", &PresentPhrase::spans);

  py::class_<KeyphraseSet>(m, "KeyphraseSet")
      .def_readonly("all", &KeyphraseSet::all)
      .def_readonly("present_phrases", &KeyphraseSet::present)
      .def_property_readonly("present",
                             [](const KeyphraseSet& k) {
                               std::vector<std::string> out;
                               for (const PresentPhrase& p : k.present) out.push_back(p.phrase.text);
                               return out;
                             })
      .def_property_readonly("absent", [](const KeyphraseSet& k) { return texts(k.absent); });

  m.def("tokenize",
        [](const std::string& raw, const std::string& mask_token) {
          return tokenize(raw, TokenizeOptions{mask_token});
        },
        py::arg("text"), py::arg("mask_token") = std::string(kDefaultMaskToken));
  m.def("porter_stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"));
  m.def("stem_seq", &stem_seq, py::arg("tokens"));
  m.def("find_matches", &find_matches, py::arg("doc"), py::arg("phrase"));
  m.def("partition",
        [](const Document& doc, const std::vector<std::string>& gold, const std::string& mask_token) {
          return partition(doc, gold, TokenizeOptions{mask_token});
        },
        py::arg("doc"), py::arg("gold"), py::arg("mask_token") = std::string(kDefaultMaskToken));

  py::class_<DropConfig>(m, "DropConfig")
      .def(py::init([](double rate, std::string mask_token, std::uint64_t seed) {
             DropConfig c{rate, std::move(mask_token), seed};
             c.validate();
             return c;
           }),
           py::arg("rate") = 0.7, py::arg("mask_token") = std::string(kDefaultMaskToken),
           py::arg("seed") = 0)
      .def_readwrite("rate", &DropConfig::rate)
      .def_readwrite("mask_token", &DropConfig::mask_token)
      .def_readwrite("seed", &DropConfig::seed);

  py::class_<AugmentedSample>(m, "AugmentedSample")
      .def_readonly("original_id", &AugmentedSample::original_id)
      .def_readonly("doc_new", &AugmentedSample::doc_new)
      .def_property_readonly("masked_text", [](const AugmentedSample& s) { return s.doc_new.text(); })
      .def_property_readonly("present_new", [](const AugmentedSample& s) { return texts(s.present_new); })
      .def_property_readonly("absent_natural", [](const AugmentedSample& s) { return texts(s.absent_natural); })
      .def_property_readonly("absent_artificial",
                             [](const AugmentedSample& s) { return texts(s.absent_artificial); })
      .def_property_readonly("collateral", [](const AugmentedSample& s) { return texts(s.collateral); })
      .def_property_readonly("mask_spans", [](const AugmentedSample& s) {
        std::vector<std::pair<Span, std::size_t>> out;
        for (const MaskedSpan& ms : s.mask_spans) out.emplace_back(ms.source, ms.position);
        return out;
      });

  m.def("sample_drop_set",
        [](const KeyphraseSet& kps, const DropConfig& cfg, const std::string& doc_id, std::uint64_t epoch) {
          DropRng rng(cfg.seed, doc_id, epoch);
          return texts(sample_drop_set(kps, cfg, rng));
        },
        py::arg("keyphrases"), py::arg("config"), py::arg("doc_id"), py::arg("epoch") = 0);
  m.def("apply_drop",
        [](const Document& doc, const KeyphraseSet& kps, const std::vector<std::string>& drop,
           const DropConfig& cfg) { return apply_drop(doc, kps, phrases_of(drop, cfg.mask_token), cfg); },
        py::arg("doc"), py::arg("keyphrases"), py::arg("drop"), py::arg("config") = DropConfig{});
  m.def("kpdrop_replace",
        [](const std::vector<std::pair<Document, KeyphraseSet>>& batch, const DropConfig& cfg,
           std::uint64_t epoch) { return kpdrop_replace(examples_of(batch), cfg, epoch); },
        py::arg("batch"), py::arg("config"), py::arg("epoch") = 0);
  m.def("kpdrop_append",
        [](const std::vector<std::pair<Document, KeyphraseSet>>& batch, const DropConfig& cfg,
           std::uint64_t epoch) { return kpdrop_append(examples_of(batch), cfg, epoch); },
        py::arg("batch"), py::arg("config"), py::arg("epoch") = 0);

  m.def("format_one2many", [](const AugmentedSample& s) { return format_one2many(s).sequence; });
  m.def("format_one2one", [](const AugmentedSample& s) { return format_one2one(s).phrases; });
  m.def("format_one2set", [](const AugmentedSample& s) {
    auto t = format_one2set(s);
    return std::make_pair(t.present_slots, t.absent_slots);
  });

  py::class_<DocScore>(m, "DocScore")
      .def_readonly("precision", &DocScore::precision)
      .def_readonly("recall", &DocScore::recall)
      .def_readonly("f1", &DocScore::f1)
      .def_readonly("n_pred", &DocScore::n_pred)
      .def_readonly("n_gold", &DocScore::n_gold)
      .def_readonly("n_matched", &DocScore::n_matched);

  m.def("match",
        [](const std::vector<std::string>& preds, const std::vector<std::string>& gold) {
          return match(to_phrases(preds), to_phrases(gold)).matched;
        },
        py::arg("preds"), py::arg("gold"));
  m.def("f1_at_m",
        [](const std::vector<std::string>& preds, const std::vector<std::string>& gold) {
          return f1_at_m(to_phrases(preds), to_phrases(gold));
        },
        py::arg("preds"), py::arg("gold"));
  m.def("f1_at_k",
        [](const std::vector<std::string>& preds, const std::vector<std::string>& gold, std::size_t k) {
          return f1_at_k(to_phrases(preds), to_phrases(gold), k);
        },
        py::arg("preds"), py::arg("gold"), py::arg("k") = 5);
  m.def("f1_at_5c",
        [](const std::vector<std::string>& preds, const std::vector<std::string>& gold) {
          return f1_at_5c(to_phrases(preds), to_phrases(gold));
        },
        py::arg("preds"), py::arg("gold"));
  m.def("recall_at_k",
        [](const std::vector<std::string>& preds, const std::vector<std::string>& gold, std::size_t k) {
          return recall_at_k(to_phrases(preds), to_phrases(gold), k);
        },
        py::arg("preds"), py::arg("gold"), py::arg("k"));

  py::class_<ScoreReport>(m, "ScoreReport")
      .def_property_readonly("category", [](const ScoreReport& r) { return std::string(to_string(r.category)); })
      .def_property_readonly("macro",
                             [](const ScoreReport& r) {
                               py::dict d;
                               for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
                                 d[py::str(std::string(kMetricNames[i]))] = r.macro[i];
                               }
                               return d;
                             })
      .def_readonly("n_docs_scored", &ScoreReport::n_docs_scored)
      .def_readonly("n_docs_skipped", &ScoreReport::n_docs_skipped);

  m.def("score_corpus",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& preds,
           const std::vector<std::pair<Document, KeyphraseSet>>& corpus, const std::string& category) {
          std::vector<Prediction> p;
          for (const auto& [id, phrases] : preds) p.push_back({id, phrases});
          return score_corpus(p, examples_of(corpus), parse_category(category));
        },
        py::arg("preds"), py::arg("corpus"), py::arg("category"));

  py::class_<CorpusRecord>(m, "CorpusRecord")
      .def(py::init([](std::string id, std::string title, std::string abstract,
                       std::optional<std::vector<std::string>> keyphrases) {
             return CorpusRecord{std::move(id), std::move(title), std::move(abstract), std::move(keyphrases)};
           }),
           py::arg("id"), py::arg("title"), py::arg("abstract"), py::arg("keyphrases") = py::none())
      .def_readonly("id", &CorpusRecord::id)
      .def_readonly("title", &CorpusRecord::title)
      .def_readonly("abstract", &CorpusRecord::abstract)
      .def_readonly("keyphrases", &CorpusRecord::keyphrases);

  m.def("split_corpus",
        [](const std::vector<CorpusRecord>& corpus, std::size_t n_labeled, std::uint64_t seed) {
          auto split = split_corpus(corpus, SplitSpec{n_labeled, seed});
          return std::make_pair(std::move(split.labeled), std::move(split.unlabeled));
        },
        py::arg("corpus"), py::arg("n_labeled") = 5000, py::arg("seed"));
  m.def("extract_candidates",
        [](const Document& doc, std::size_t max_length) {
          std::vector<std::pair<std::string, std::size_t>> out;
          for (const Candidate& c : extract_candidates(doc, CandidateOptions{max_length})) {
            out.emplace_back(c.phrase.text, c.first_position);
          }
          return out;
        },
        py::arg("doc"), py::arg("max_length") = 5);
  m.def("rank_and_label",
        [](const Document& doc, std::size_t k,
           std::optional<std::function<double(const Document&, const std::string&, std::size_t)>> scorer,
           const std::vector<Document>& corpus) {
          if (scorer) {
            FunctionScorer fs([&](const Document& d, const Candidate& c) {
              return (*scorer)(d, c.phrase.text, c.first_position);
            });
            return texts(rank_and_label(doc, k, fs));
          }
          DocumentFrequencies df;
          if (corpus.empty()) {
            df.add(doc);
          } else {
            for (const Document& d : corpus) df.add(d);
          }
          return texts(rank_and_label(doc, k, TfIdfScorer(std::move(df))));
        },
        py::arg("doc"), py::arg("k") = 10, py::arg("scorer") = py::none(),
        py::arg("corpus") = std::vector<Document>{});
  m.def("label_synthetic",
        [](const std::vector<CorpusRecord>& records, std::size_t k) {
          DocumentFrequencies df;
          for (const CorpusRecord& r : records) df.add(Document::from_text(r.id, r.title, r.abstract));
          return label_synthetic(records, k, TfIdfScorer(std::move(df)));
        },
        py::arg("records"), py::arg("k") = 10);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          py::gil_scoped_release release;
          return cli::run_pipeline(args, std::cout, std::cerr);
        },
        py::arg("args"));

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
