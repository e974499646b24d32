#include "kpdrop/semisup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "kpdrop/augmentor.hpp"
#include "kpdrop/error.hpp"

namespace kpdrop {

namespace {

// Sorted for binary search.
constexpr std::string_view kStopwords[] = {
    "a",          "about",   "above",   "after",    "again",   "against", "all",     "also",
    "am",         "among",   "an",      "and",      "any",     "are",     "as",      "at",
    "be",         "because", "been",    "before",   "being",   "below",   "between", "both",
    "but",        "by",      "can",     "could",    "did",     "do",      "does",    "doing",
    "down",       "during",  "each",    "either",   "etc",     "few",     "for",     "from",
    "further",    "had",     "has",     "have",     "having",  "he",      "her",     "here",
    "hers",       "herself", "him",     "himself",  "his",     "how",     "however", "i",
    "if",         "in",      "into",    "is",       "it",      "its",     "itself",  "just",
    "may",        "me",      "might",   "more",     "most",    "must",    "my",      "myself",
    "neither",    "no",      "nor",     "not",      "now",     "of",      "off",     "on",
    "once",       "only",    "or",      "other",    "our",     "ours",    "ourselves", "out",
    "over",       "own",     "paper",   "same",     "shall",   "she",     "should",  "so",
    "some",       "such",    "than",    "that",     "the",     "their",   "theirs",  "them",
    "themselves", "then",    "there",   "therefore", "these",  "they",    "this",    "those",
    "through",    "thus",    "to",      "too",      "under",   "until",   "up",      "upon",
    "us",         "using",   "very",    "via",      "was",     "we",      "were",    "what",
    "when",       "where",   "whether", "which",    "while",   "who",     "whom",    "why",
    "will",       "with",    "within",  "without",  "would",   "you",     "your",    "yours",
    "yourself",   "yourselves",
};

std::string candidate_text(const TokenSeq& tokens, std::size_t start, std::size_t end) {
  std::string text;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) text.push_back(tokens[i].hyphen_joined ? '-' : ' ');
    text += tokens[i].norm;
  }
  return text;
}

} // namespace

bool is_stopword(std::string_view norm) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords), norm);
}

CorpusSplit split_corpus(std::span<const CorpusRecord> corpus, const SplitSpec& spec) {
  if (spec.n_labeled > corpus.size()) {
    throw ContractViolation("n_labeled (" + std::to_string(spec.n_labeled) +
                            ") exceeds corpus size (" + std::to_string(corpus.size()) + ")");
  }
  // Partial Fisher-Yates: the first n_labeled slots are a uniform sample.
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  DropRng rng(spec.seed);
  for (std::size_t i = 0; i < spec.n_labeled; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> labeled(corpus.size(), false);
  for (std::size_t i = 0; i < spec.n_labeled; ++i) labeled[order[i]] = true;

  CorpusSplit out;
  out.labeled.reserve(spec.n_labeled);
  out.unlabeled.reserve(corpus.size() - spec.n_labeled);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (labeled[i]) {
      out.labeled.push_back(corpus[i]);
    } else {
      CorpusRecord r = corpus[i];
      r.keyphrases.reset();
      out.unlabeled.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Candidate> extract_candidates(const Document& doc, const CandidateOptions& options) {
  const TokenSeq& tokens = doc.full;
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    if (tokens[start].kind != TokenKind::Word || is_stopword(tokens[start].norm)) continue;
    for (std::size_t len = 1; len <= options.max_length && start + len <= tokens.size(); ++len) {
      const Token& last = tokens[start + len - 1];
      if (last.kind != TokenKind::Word) break;
      if (is_stopword(last.norm)) continue;
      Phrase p;
      p.text = candidate_text(tokens, start, start + len);
      p.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                      tokens.begin() + static_cast<std::ptrdiff_t>(start + len));
      p.tokens.front().hyphen_joined = false;
      p.key = stem_key(p.tokens);
      if (!seen.insert(p.key).second) continue;
      out.push_back({std::move(p), start});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.first_position < b.first_position;
  });
  return out;
}

void DocumentFrequencies::add(const Document& doc) {
  std::unordered_set<std::string> stems;
  for (const Token& t : doc.full) {
    if (t.kind == TokenKind::Word) stems.insert(t.stem);
  }
  for (const std::string& s : stems) ++counts_[s];
  ++n_docs_;
}

void DocumentFrequencies::merge(const DocumentFrequencies& other) {
  n_docs_ += other.n_docs_;
  for (const auto& [stem, n] : other.counts_) counts_[stem] += n;
}

std::size_t DocumentFrequencies::count(const std::string& stem) const {
  auto it = counts_.find(stem);
  return it == counts_.end() ? 0 : it->second;
}

void DocumentFrequencies::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusError("cannot write " + path.string());
  out << "# documents " << n_docs_ << '\n';
  for (const auto& [stem, n] : counts_) out << stem << '\t' << n << '\n';
}

DocumentFrequencies DocumentFrequencies::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open " + path.string());
  DocumentFrequencies df;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# documents ", 0) != 0) {
    throw CorpusError(path.string() + ": missing \"# documents N\" header");
  }
  try {
    df.n_docs_ = std::stoull(line.substr(12));
  } catch (const std::exception&) {
    throw CorpusError(path.string() + ": bad document count");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": expected stem<TAB>count");
    }
    try {
      df.counts_[line.substr(0, tab)] = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": bad count");
    }
  }
  return df;
}

std::vector<double> FunctionScorer::score(const Document& doc,
                                          std::span<const Candidate> candidates) const {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) out.push_back(fn_(doc, c));
  return out;
}

std::vector<double> TfIdfScorer::score(const Document& doc,
                                       std::span<const Candidate> candidates) const {
  std::unordered_map<std::string_view, double> token_weight;
  for (const Token& t : doc.full) token_weight[t.stem] += 1.0;
  const double n = static_cast<double>(df_.n_docs());
  for (auto& [stem, w] : token_weight) {
    const double df = static_cast<double>(df_.count(std::string(stem)));
    w *= std::log((n + 1.0) / (df + 1.0)) + 1.0;
  }
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    double weight = 0.0;
    for (const Token& t : c.phrase.tokens) weight += token_weight[t.stem];
    out.push_back(weight / (1.0 + static_cast<double>(c.first_position)));
  }
  return out;
}

std::vector<Phrase> rank_and_label(const Document& doc, std::size_t k, const CandidateScorer& scorer,
                                   const CandidateOptions& options) {
  if (k == 0) return {};
  std::vector<Candidate> candidates = extract_candidates(doc, options);
  const std::vector<double> scores = scorer.score(doc, candidates);
  if (scores.size() != candidates.size()) {
    throw ContractViolation("scorer returned " + std::to_string(scores.size()) + " scores for " +
                            std::to_string(candidates.size()) + " candidates");
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scored.emplace_back(scores[i], i);
  std::stable_sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    const Candidate& ca = candidates[a.second];
    const Candidate& cb = candidates[b.second];
    if (ca.first_position != cb.first_position) return ca.first_position < cb.first_position;
    return ca.phrase.tokens.size() < cb.phrase.tokens.size();
  });
  std::vector<Phrase> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < k; ++i) {
    out.push_back(std::move(candidates[scored[i].second].phrase));
  }
  return out;
}

CorpusRecord label_record(const CorpusRecord& record, std::size_t k, const CandidateScorer& scorer,
                          const CandidateOptions& options) {
  const Document doc = Document::from_text(record.id, record.title, record.abstract);
  CorpusRecord out = record;
  out.keyphrases.emplace();
  for (Phrase& p : rank_and_label(doc, k, scorer, options)) out.keyphrases->push_back(std::move(p.text));
  return out;
}

std::vector<CorpusRecord> label_synthetic(std::span<const CorpusRecord> unlabeled, std::size_t k,
                                          const CandidateScorer& scorer,
                                          const CandidateOptions& options) {
  std::vector<CorpusRecord> out;
  out.reserve(unlabeled.size());
  for (const CorpusRecord& r : unlabeled) out.push_back(label_record(r, k, scorer, options));
  return out;
}

} // namespace kpdrop
