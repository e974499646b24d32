#include "kpdrop/text_norm.hpp"

#include "kpdrop/error.hpp"
#include "kpdrop/porter.hpp"

namespace kpdrop {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool all_digits(std::string_view s) {
  for (unsigned char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

// The mask literal counts only where it does not glue onto a neighbouring
// word (relevant for alphanumeric literals such as "MASK").
bool mask_at(std::string_view raw, std::size_t i, std::string_view mask) {
  if (mask.empty() || raw.compare(i, mask.size(), mask) != 0) return false;
  const auto front = static_cast<unsigned char>(mask.front());
  const auto back = static_cast<unsigned char>(mask.back());
  if (i > 0 && is_word_byte(front) && is_word_byte(static_cast<unsigned char>(raw[i - 1]))) {
    return false;
  }
  const std::size_t after = i + mask.size();
  if (after < raw.size() && is_word_byte(back) &&
      is_word_byte(static_cast<unsigned char>(raw[after]))) {
    return false;
  }
  return true;
}

} // namespace

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

TokenSeq tokenize(std::string_view raw, const TokenizeOptions& options) {
  TokenSeq out;
  const std::string_view mask = options.mask_token;
  std::size_t prev_end = 0;
  bool have_prev = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    Token tok;
    if (mask_at(raw, i, mask)) {
      tok.kind = TokenKind::Mask;
      tok.surface = tok.norm = tok.stem = std::string(mask);
      tok.offset = i;
      tok.length = mask.size();
    } else if (is_word_byte(static_cast<unsigned char>(raw[i]))) {
      std::size_t j = i;
      while (j < raw.size() && is_word_byte(static_cast<unsigned char>(raw[j]))) ++j;
      const std::string_view run = raw.substr(i, j - i);
      tok.offset = i;
      tok.length = run.size();
      if (all_digits(run)) {
        tok.kind = TokenKind::Digit;
        tok.surface = tok.norm = tok.stem = std::string(kDigitToken);
      } else {
        tok.surface = std::string(run);
        tok.norm = lowercase_ascii(run);
        tok.stem = porter_stem(tok.norm);
      }
    } else {
      ++i;
      continue;
    }
    tok.hyphen_joined = have_prev && tok.offset == prev_end + 1 && raw[prev_end] == '-';
    prev_end = tok.offset + tok.length;
    have_prev = true;
    i = prev_end;
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<std::string> stem_seq(const TokenSeq& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (const Token& t : seq) out.push_back(t.stem);
  return out;
}

bool matches_at(const TokenSeq& doc, std::size_t start, const TokenSeq& phrase) {
  if (phrase.empty() || start + phrase.size() > doc.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    const Token& d = doc[start + k];
    const Token& p = phrase[k];
    if (d.kind == TokenKind::Mask || p.kind == TokenKind::Mask) return false;
    if (d.stem != p.stem) return false;
    if (k > 0 && d.hyphen_joined != p.hyphen_joined) return false;
  }
  return true;
}

std::vector<Span> find_matches(const TokenSeq& doc, const TokenSeq& phrase) {
  if (phrase.empty()) throw InvalidKeyphrase("keyphrase has no tokens");
  std::vector<Span> spans;
  if (phrase.size() > doc.size()) return spans;
  for (std::size_t i = 0; i + phrase.size() <= doc.size(); ++i) {
    if (matches_at(doc, i, phrase)) spans.push_back({i, i + phrase.size()});
  }
  return spans;
}

std::string stem_key(const TokenSeq& seq) {
  std::string key;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) key.push_back(seq[i].hyphen_joined ? '-' : ' ');
    key += seq[i].stem;
  }
  return key;
}

} // namespace kpdrop
