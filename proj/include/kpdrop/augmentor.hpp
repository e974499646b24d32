#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpdrop/partitioner.hpp"

namespace kpdrop {

struct DropConfig {
  double rate = 0.7;
  std::string mask_token = std::string(kDefaultMaskToken);
  std::uint64_t seed = 0;

  // Throws ContractViolation for a rate outside [0, 1] or an empty /
  // whitespace-containing mask token.
  void validate() const;
};

// Deterministic random stream. The keyed constructor derives the state from
// (seed, document id, epoch) so a document's draw does not depend on where
// it sits in the corpus or which worker handles it. Draws are computed from
// raw engine output, which the standard fixes for mt19937_64, so streams
// agree across platforms and standard libraries.
class DropRng {
public:
  explicit DropRng(std::uint64_t seed);
  DropRng(std::uint64_t seed, std::string_view doc_id, std::uint64_t epoch);

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);

private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view doc_id, std::uint64_t epoch);

// A phrase together with its first token position in the source document.
struct PlacedPhrase {
  Phrase phrase;
  std::size_t first_position = 0;
};

struct MaskedSpan {
  Span source;          // span of Document::full that was removed
  std::size_t position; // index of the replacing mask token in doc_new.full
};

struct AugmentedSample {
  std::string original_id;
  Document doc_new;
  std::vector<PlacedPhrase> present_new;       // author order
  std::vector<Phrase> absent_natural;          // author order
  std::vector<PlacedPhrase> absent_artificial; // author order
  // Phrases that were not sampled but lost every occurrence inside masked
  // spans of dropped phrases. They are also listed in absent_artificial.
  std::vector<Phrase> collateral;
  std::vector<MaskedSpan> mask_spans; // left to right, non-overlapping

  // absent_artificial without the collateral phrases, i.e. the sampled O.
  std::vector<Phrase> dropped() const;
};

struct Example {
  Document doc;
  KeyphraseSet keyphrases;
};

// Each present phrase is included independently with probability cfg.rate;
// result keeps the order of kps.present.
std::vector<Phrase> sample_drop_set(const KeyphraseSet& kps, const DropConfig& cfg, DropRng& rng);

// Masks every occurrence of every phrase in `drop`. Overlapping occurrences
// are resolved greedily, longest phrase first and then leftmost first; each
// chosen span collapses to one mask token. Throws ContractViolation when a
// phrase of `drop` is not present in `kps`.
AugmentedSample apply_drop(const Document& doc, const KeyphraseSet& kps,
                           std::span<const Phrase> drop, const DropConfig& cfg);

// Sample with nothing dropped.
AugmentedSample unchanged_sample(const Document& doc, const KeyphraseSet& kps);

AugmentedSample kpdrop(const Example& example, const DropConfig& cfg, std::uint64_t epoch);

// One KPDropped counterpart per input, in input order.
std::vector<AugmentedSample> kpdrop_replace(std::span<const Example> batch, const DropConfig& cfg,
                                            std::uint64_t epoch);

// The originals (nothing dropped) followed by kpdrop_replace(batch). Pairs
// are kept even when nothing was sampled, so the result is always 2x.
std::vector<AugmentedSample> kpdrop_append(std::span<const Example> batch, const DropConfig& cfg,
                                           std::uint64_t epoch);

} // namespace kpdrop
