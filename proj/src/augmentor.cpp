#include "kpdrop/augmentor.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "kpdrop/error.hpp"

namespace kpdrop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Replacement {
  std::size_t begin;
  std::size_t end;
  bool insert_mask;
};

std::string render(const std::string& raw, std::vector<Replacement> edits, std::string_view mask) {
  std::sort(edits.begin(), edits.end(),
            [](const Replacement& a, const Replacement& b) { return a.begin < b.begin; });
  std::string out;
  out.reserve(raw.size());
  std::size_t cursor = 0;
  for (const Replacement& e : edits) {
    out.append(raw, cursor, e.begin - cursor);
    if (e.insert_mask) out.append(mask);
    cursor = e.end;
  }
  out.append(raw, cursor, std::string::npos);
  return out;
}

std::size_t token_end(const Token& t) { return t.offset + t.length; }

} // namespace

void DropConfig::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ContractViolation("drop rate must lie in [0, 1], got " + std::to_string(rate));
  }
  if (mask_token.empty()) throw ContractViolation("mask token must not be empty");
  for (char c : mask_token) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      throw ContractViolation("mask token must not contain whitespace");
    }
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view doc_id, std::uint64_t epoch) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a64(doc_id));
  return splitmix64(h ^ epoch);
}

DropRng::DropRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

DropRng::DropRng(std::uint64_t seed, std::string_view doc_id, std::uint64_t epoch)
    : engine_(mix_seed(seed, doc_id, epoch)) {}

double DropRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t DropRng::below(std::uint64_t n) {
  if (n == 0) throw ContractViolation("DropRng::below requires n > 0");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::vector<Phrase> AugmentedSample::dropped() const {
  std::unordered_set<std::string> extra;
  for (const Phrase& p : collateral) extra.insert(p.key);
  std::vector<Phrase> out;
  for (const PlacedPhrase& p : absent_artificial) {
    if (!extra.contains(p.phrase.key)) out.push_back(p.phrase);
  }
  return out;
}

std::vector<Phrase> sample_drop_set(const KeyphraseSet& kps, const DropConfig& cfg, DropRng& rng) {
  cfg.validate();
  std::vector<Phrase> out;
  for (const PresentPhrase& p : kps.present) {
    // Draw for every phrase, even at rate 0 or 1, so the stream position
    // does not depend on the rate.
    if (rng.uniform() < cfg.rate) out.push_back(p.phrase);
  }
  return out;
}

AugmentedSample unchanged_sample(const Document& doc, const KeyphraseSet& kps) {
  AugmentedSample s;
  s.original_id = doc.id;
  s.doc_new = doc;
  for (const PresentPhrase& p : kps.present) s.present_new.push_back({p.phrase, p.first_position()});
  s.absent_natural = kps.absent;
  return s;
}

AugmentedSample apply_drop(const Document& doc, const KeyphraseSet& kps,
                           std::span<const Phrase> drop, const DropConfig& cfg) {
  cfg.validate();
  std::unordered_map<std::string, const PresentPhrase*> present_by_key;
  for (const PresentPhrase& p : kps.present) present_by_key.emplace(p.phrase.key, &p);

  std::unordered_set<std::string> drop_keys;
  for (const Phrase& p : drop) {
    if (!present_by_key.contains(p.key)) {
      throw ContractViolation("cannot drop \"" + p.text + "\": not a present keyphrase of " +
                              doc.id);
    }
    drop_keys.insert(p.key);
  }
  if (drop_keys.empty()) return unchanged_sample(doc, kps);

  // Greedy non-overlapping cover: longest phrase first, then leftmost.
  std::vector<Span> candidates;
  for (const std::string& key : drop_keys) {
    const auto& spans = present_by_key.at(key)->spans;
    candidates.insert(candidates.end(), spans.begin(), spans.end());
  }
  std::sort(candidates.begin(), candidates.end(), [](const Span& a, const Span& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.start < b.start;
  });
  std::vector<bool> covered(doc.full.size(), false);
  std::vector<Span> chosen;
  for (const Span& s : candidates) {
    bool free = true;
    for (std::size_t i = s.start; i < s.end && free; ++i) free = !covered[i];
    if (!free) continue;
    for (std::size_t i = s.start; i < s.end; ++i) covered[i] = true;
    chosen.push_back(s);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });

  // Substitute in the raw text so the masked document re-tokenizes to
  // exactly the expected token sequence.
  const std::size_t n_title = doc.title.size();
  std::vector<Replacement> title_edits;
  std::vector<Replacement> body_edits;
  for (const Span& s : chosen) {
    if (s.end <= n_title) {
      title_edits.push_back({doc.title[s.start].offset, token_end(doc.title[s.end - 1]), true});
    } else if (s.start >= n_title) {
      body_edits.push_back(
          {doc.body[s.start - n_title].offset, token_end(doc.body[s.end - 1 - n_title]), true});
    } else {
      // Crosses the title/body boundary: the mask stays in the title.
      title_edits.push_back({doc.title[s.start].offset, token_end(doc.title.back()), true});
      body_edits.push_back({doc.body.front().offset, token_end(doc.body[s.end - 1 - n_title]), false});
    }
  }

  AugmentedSample out;
  out.original_id = doc.id;
  TokenizeOptions opts{cfg.mask_token};
  out.doc_new = Document::from_text(doc.id, render(doc.title_text, title_edits, cfg.mask_token),
                                    render(doc.body_text, body_edits, cfg.mask_token), opts);

  std::size_t removed = 0;
  for (const Span& s : chosen) {
    out.mask_spans.push_back({s, s.start - removed});
    removed += s.size() - 1;
  }

  for (const PresentPhrase& p : kps.present) {
    PlacedPhrase placed{p.phrase, p.first_position()};
    if (drop_keys.contains(p.phrase.key)) {
      out.absent_artificial.push_back(std::move(placed));
    } else if (find_matches(out.doc_new.full, p.phrase.tokens).empty()) {
      out.collateral.push_back(p.phrase);
      out.absent_artificial.push_back(std::move(placed));
    } else {
      out.present_new.push_back(std::move(placed));
    }
  }
  out.absent_natural = kps.absent;
  return out;
}

AugmentedSample kpdrop(const Example& example, const DropConfig& cfg, std::uint64_t epoch) {
  DropRng rng(cfg.seed, example.doc.id, epoch);
  const auto drop = sample_drop_set(example.keyphrases, cfg, rng);
  return apply_drop(example.doc, example.keyphrases, drop, cfg);
}

std::vector<AugmentedSample> kpdrop_replace(std::span<const Example> batch, const DropConfig& cfg,
                                            std::uint64_t epoch) {
  std::vector<AugmentedSample> out;
  out.reserve(batch.size());
  for (const Example& ex : batch) out.push_back(kpdrop(ex, cfg, epoch));
  return out;
}

std::vector<AugmentedSample> kpdrop_append(std::span<const Example> batch, const DropConfig& cfg,
                                           std::uint64_t epoch) {
  std::vector<AugmentedSample> out;
  out.reserve(2 * batch.size());
  for (const Example& ex : batch) out.push_back(unchanged_sample(ex.doc, ex.keyphrases));
  auto dropped = kpdrop_replace(batch, cfg, epoch);
  std::move(dropped.begin(), dropped.end(), std::back_inserter(out));
  return out;
}

} // namespace kpdrop
