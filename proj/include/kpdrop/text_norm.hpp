#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kpdrop {

inline constexpr std::string_view kDigitToken = "<digit>";
inline constexpr std::string_view kDefaultMaskToken = "[MASK]";

enum class TokenKind : std::uint8_t { Word, Digit, Mask };

struct Token {
  std::string surface;
  std::string norm;
  std::string stem;
  TokenKind kind = TokenKind::Word;
  // Attached to the previous token of the same text by a single '-'.
  // "Hearing-Aid" yields [hearing, aid(joined)]; a phrase only matches a
  // window whose join pattern agrees with its own.
  bool hyphen_joined = false;
  // Byte range of the token in the text it was read from.
  std::size_t offset = 0;
  std::size_t length = 0;
};

using TokenSeq = std::vector<Token>;

struct Span {
  std::size_t start = 0; // inclusive
  std::size_t end = 0;   // exclusive

  std::size_t size() const { return end - start; }
  bool overlaps(const Span& other) const { return start < other.end && other.start < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct TokenizeOptions {
  // Occurrences of this literal in the text become opaque mask tokens.
  std::string mask_token = std::string(kDefaultMaskToken);
};

// Maximal runs of alphanumeric bytes (any byte >= 0x80 counts as a letter,
// so UTF-8 words stay whole). Pure digit runs collapse to <digit>.
TokenSeq tokenize(std::string_view raw, const TokenizeOptions& options = {});

std::string lowercase_ascii(std::string_view s);

std::vector<std::string> stem_seq(const TokenSeq& seq);

// Every window of `doc` whose stems and hyphen joins equal those of
// `phrase`, left to right. Windows may overlap; windows containing a mask
// token never match. Throws InvalidKeyphrase when `phrase` is empty.
std::vector<Span> find_matches(const TokenSeq& doc, const TokenSeq& phrase);

// True when doc[start, start + phrase.size()) matches phrase.
bool matches_at(const TokenSeq& doc, std::size_t start, const TokenSeq& phrase);

// Canonical stemmed form used for deduplication and exact matching,
// e.g. "hear aid" or "hear-aid".
std::string stem_key(const TokenSeq& seq);

} // namespace kpdrop
