#pragma once

// Random corpora and a brute-force metric scorer shared by the unit and
// acceptance suites.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kpdrop/corpus_io.hpp"

namespace kpdrop::testing {

// Words whose Porter stems are fixed by hand, so the scorer below does not
// depend on the library's stemmer. Several surface forms share a stem.
inline const std::map<std::string, std::string>& hand_stems() {
  static const std::map<std::string, std::string> table = {
      {"model", "model"},     {"models", "model"},     {"network", "network"},
      {"networks", "network"}, {"graph", "graph"},     {"graphs", "graph"},
      {"learning", "learn"},  {"learn", "learn"},      {"data", "data"},
      {"speech", "speech"},   {"hearing", "hear"},     {"aids", "aid"},
      {"aid", "aid"},         {"signal", "signal"},    {"signals", "signal"},
      {"index", "index"},
  };
  return table;
}

inline std::vector<std::string> hand_vocab() {
  std::vector<std::string> out;
  for (const auto& [w, s] : hand_stems()) out.push_back(w);
  return out;
}

struct MetricInstance {
  std::vector<std::string> preds; // rank order
  std::vector<std::string> gold;
};

// Phrases of one or two hand-stemmed words.
inline MetricInstance random_metric_instance(std::mt19937_64& rng, std::size_t max_preds = 8,
                                             std::size_t max_gold = 8) {
  static const std::vector<std::string> vocab = hand_vocab();
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(1, 2);
  // A small phrase pool makes collisions between preds and gold common.
  std::vector<std::string> pool;
  for (int i = 0; i < 10; ++i) {
    std::string p = vocab[word(rng)];
    if (len(rng) == 2) p += " " + vocab[word(rng)];
    pool.push_back(p);
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  MetricInstance inst;
  const std::size_t np = std::uniform_int_distribution<std::size_t>(0, max_preds)(rng);
  const std::size_t ng = std::uniform_int_distribution<std::size_t>(1, max_gold)(rng);
  for (std::size_t i = 0; i < np; ++i) inst.preds.push_back(pool[pick(rng)]);
  for (std::size_t i = 0; i < ng; ++i) inst.gold.push_back(pool[pick(rng)]);
  return inst;
}

inline std::string hand_key(const std::string& phrase) {
  std::string key;
  std::size_t i = 0;
  while (i < phrase.size()) {
    std::size_t j = phrase.find(' ', i);
    if (j == std::string::npos) j = phrase.size();
    if (!key.empty()) key += ' ';
    key += hand_stems().at(phrase.substr(i, j - i));
    i = j + 1;
  }
  return key;
}

struct BruteScores {
  double f1_m = 0, f1_5 = 0, f1_5c = 0, r10 = 0, r50 = 0;
  std::size_t n_pred = 0;
};

// Exhaustive maximum matching between the top-k predictions and the gold
// set, by dynamic programming over subsets of gold.
inline std::size_t max_matching(const std::vector<std::string>& p, const std::vector<std::string>& g) {
  const std::size_t full = std::size_t{1} << g.size();
  std::vector<int> best(full, -1);
  best[0] = 0;
  for (const std::string& pk : p) {
    std::vector<int> next = best;
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (best[mask] < 0) continue;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if ((mask >> j) & 1U || g[j] != pk) continue;
        next[mask | (std::size_t{1} << j)] = std::max(next[mask | (std::size_t{1} << j)], best[mask] + 1);
      }
    }
    best = std::move(next);
  }
  return static_cast<std::size_t>(*std::max_element(best.begin(), best.end()));
}

inline double brute_f1(std::size_t m, double p_den, std::size_t n_gold) {
  const double p = p_den > 0 ? m / p_den : 0.0;
  const double r = n_gold > 0 ? static_cast<double>(m) / static_cast<double>(n_gold) : 0.0;
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

inline BruteScores brute_score(const MetricInstance& inst) {
  std::vector<std::string> preds;
  for (const std::string& p : inst.preds) {
    const std::string k = hand_key(p);
    if (std::find(preds.begin(), preds.end(), k) == preds.end()) preds.push_back(k);
  }
  std::vector<std::string> gold;
  for (const std::string& g : inst.gold) {
    const std::string k = hand_key(g);
    if (std::find(gold.begin(), gold.end(), k) == gold.end()) gold.push_back(k);
  }
  auto top = [&](std::size_t k) {
    return std::vector<std::string>(preds.begin(), preds.begin() + std::min(k, preds.size()));
  };
  BruteScores s;
  s.n_pred = preds.size();
  const std::size_t m_all = max_matching(preds, gold);
  const std::size_t m5 = max_matching(top(5), gold);
  s.f1_m = brute_f1(m_all, static_cast<double>(preds.size()), gold.size());
  s.f1_5 = brute_f1(m5, static_cast<double>(std::min<std::size_t>(5, preds.size())), gold.size());
  s.f1_5c = brute_f1(m5, 5.0, gold.size());
  s.r10 = gold.empty() ? 0.0 : static_cast<double>(max_matching(top(10), gold)) / gold.size();
  s.r50 = gold.empty() ? 0.0 : static_cast<double>(max_matching(top(50), gold)) / gold.size();
  return s;
}

// Random scientific-looking corpora. Gold lists mix phrases lifted from the
// text, phrases assembled from the vocabulary (usually absent), inflected
// variants and duplicates.
class CorpusGenerator {
public:
  explicit CorpusGenerator(std::uint64_t seed) : rng_(seed) {}

  CorpusRecord record(const std::string& id, std::size_t body_words = 60, std::size_t n_gold = 6) {
    CorpusRecord r;
    r.id = id;
    std::vector<std::string> title_words = words(std::uniform_int_distribution<std::size_t>(3, 9)(rng_));
    std::vector<std::string> body = words(body_words);
    r.title = render(title_words);
    r.abstract = render(body);

    std::vector<std::string> all = title_words;
    all.insert(all.end(), body.begin(), body.end());
    std::vector<std::string> gold;
    std::uniform_int_distribution<int> kind(0, 9);
    for (std::size_t i = 0; i < n_gold; ++i) {
      const int k = kind(rng_);
      const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 3)(rng_);
      if (k < 5) {
        const std::size_t at = std::uniform_int_distribution<std::size_t>(0, all.size() - len)(rng_);
        gold.push_back(join(all, at, len));
      } else if (k < 8) {
        gold.push_back(join(words(len), 0, len));
      } else if (k < 9 && !gold.empty()) {
        gold.push_back(gold.front());
      } else {
        gold.push_back(join(all, 0, std::min<std::size_t>(len, all.size())) + "s");
      }
    }
    r.keyphrases = std::move(gold);
    return r;
  }

  std::vector<CorpusRecord> corpus(std::size_t n, std::size_t body_words = 60, std::size_t n_gold = 6) {
    std::vector<CorpusRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(record("doc" + std::to_string(i), body_words, n_gold));
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

private:
  std::vector<std::string> words(std::size_t n) {
    static const std::vector<std::string> vocab = {
        "the",       "of",        "a",          "for",       "and",        "in",
        "model",     "models",    "network",    "networks",  "graph",      "neural",
        "learning",  "speech",    "hearing",    "aid",       "aids",       "auditory",
        "signal",    "index",     "loss",       "noise",     "estimation", "robust",
        "sparse",    "kernel",    "method",     "methods",   "analysis",   "perception",
        "adaptive",  "filter",    "filtering",  "deep",      "temporal",   "structure",
        "retrieval", "semantic",  "clustering", "optimal",   "control",    "data"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(vocab[pick(rng_)]);
    return out;
  }

  // Words separated by spaces, with the odd hyphen, comma, capital or
  // number thrown in.
  std::string render(const std::vector<std::string>& ws) {
    std::uniform_int_distribution<int> roll(0, 19);
    std::string out;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (i > 0) {
        const int r = roll(rng_);
        out += r == 0 ? "-" : r == 1 ? ", " : r == 2 ? " 42 " : " ";
      }
      std::string w = ws[i];
      if (roll(rng_) == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
      out += w;
    }
    return out + ".";
  }

  static std::string join(const std::vector<std::string>& ws, std::size_t at, std::size_t len) {
    std::string out;
    for (std::size_t i = at; i < at + len; ++i) {
      if (i > at) out += ' ';
      out += ws[i];
    }
    return out;
  }

  std::mt19937_64 rng_;
};

} // namespace kpdrop::testing
