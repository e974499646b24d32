#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpdrop/text_norm.hpp"

namespace kpdrop {

// A keyphrase as the pipeline sees it: normalized text (lowercase, single
// spaces), its tokens, and its stem key.
struct Phrase {
  std::string text;
  TokenSeq tokens;
  std::string key;

  friend bool operator==(const Phrase& a, const Phrase& b) { return a.key == b.key; }
};

// Throws InvalidKeyphrase naming `raw` when it has no tokens.
Phrase make_phrase(std::string_view raw, const TokenizeOptions& options = {});

// Title and body are kept as raw text alongside their tokens; `full` is
// title tokens followed by body tokens and is what phrases are matched
// against.
struct Document {
  std::string id;
  std::string title_text;
  std::string body_text;
  TokenSeq title;
  TokenSeq body;
  TokenSeq full;

  static Document from_text(std::string id, std::string title, std::string body,
                            const TokenizeOptions& options = {});

  // Title and body joined by a newline.
  std::string text() const;
};

struct PresentPhrase {
  Phrase phrase;
  std::vector<Span> spans; // against Document::full, left to right

  std::size_t first_position() const { return spans.front().start; }
};

struct KeyphraseSet {
  std::vector<Phrase> all; // author order, deduplicated by stem key
  std::vector<PresentPhrase> present;
  std::vector<Phrase> absent;
};

// Present iff the phrase has at least one match in doc.full. Duplicates by
// stem key are collapsed to the first occurrence.
KeyphraseSet partition(const Document& doc, std::span<const std::string> gold,
                       const TokenizeOptions& options = {});

// Same, for phrases that are already tokenized.
KeyphraseSet partition_phrases(const Document& doc, std::span<const Phrase> gold);

} // namespace kpdrop
