#include "kpdrop/partitioner.hpp"

#include <unordered_set>

#include "kpdrop/error.hpp"

namespace kpdrop {

namespace {

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

} // namespace

Phrase make_phrase(std::string_view raw, const TokenizeOptions& options) {
  Phrase p;
  p.text = lowercase_ascii(collapse_whitespace(raw));
  p.tokens = tokenize(p.text, options);
  if (p.tokens.empty()) {
    throw InvalidKeyphrase("keyphrase \"" + std::string(raw) + "\" has no tokens");
  }
  p.key = stem_key(p.tokens);
  return p;
}

Document Document::from_text(std::string id, std::string title, std::string body,
                             const TokenizeOptions& options) {
  Document d;
  d.id = std::move(id);
  d.title_text = std::move(title);
  d.body_text = std::move(body);
  d.title = tokenize(d.title_text, options);
  d.body = tokenize(d.body_text, options);
  d.full.reserve(d.title.size() + d.body.size());
  d.full.insert(d.full.end(), d.title.begin(), d.title.end());
  d.full.insert(d.full.end(), d.body.begin(), d.body.end());
  return d;
}

std::string Document::text() const { return title_text + "\n" + body_text; }

KeyphraseSet partition_phrases(const Document& doc, std::span<const Phrase> gold) {
  KeyphraseSet out;
  std::unordered_set<std::string> seen;
  for (const Phrase& p : gold) {
    if (p.tokens.empty()) throw InvalidKeyphrase("keyphrase \"" + p.text + "\" has no tokens");
    if (!seen.insert(p.key).second) continue;
    out.all.push_back(p);
    auto spans = find_matches(doc.full, p.tokens);
    if (spans.empty()) {
      out.absent.push_back(p);
    } else {
      out.present.push_back({p, std::move(spans)});
    }
  }
  return out;
}

KeyphraseSet partition(const Document& doc, std::span<const std::string> gold,
                       const TokenizeOptions& options) {
  std::vector<Phrase> phrases;
  phrases.reserve(gold.size());
  for (const std::string& g : gold) phrases.push_back(make_phrase(g, options));
  return partition_phrases(doc, phrases);
}

} // namespace kpdrop
