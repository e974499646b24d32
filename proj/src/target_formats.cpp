#include "kpdrop/target_formats.hpp"

#include <algorithm>

#include "kpdrop/error.hpp"

namespace kpdrop {

namespace {

std::vector<const PlacedPhrase*> by_first_occurrence(const std::vector<PlacedPhrase>& phrases) {
  std::vector<const PlacedPhrase*> out;
  out.reserve(phrases.size());
  for (const PlacedPhrase& p : phrases) out.push_back(&p);
  std::stable_sort(out.begin(), out.end(), [](const PlacedPhrase* a, const PlacedPhrase* b) {
    if (a->first_position != b->first_position) return a->first_position < b->first_position;
    return a->phrase.tokens.size() > b->phrase.tokens.size();
  });
  return out;
}

std::vector<std::string> present_in_order(const AugmentedSample& s) {
  std::vector<std::string> out;
  for (const PlacedPhrase* p : by_first_occurrence(s.present_new)) out.push_back(p->phrase.text);
  return out;
}

std::vector<std::string> absent_in_order(const AugmentedSample& s) {
  std::vector<std::string> out;
  for (const PlacedPhrase* p : by_first_occurrence(s.absent_artificial)) {
    out.push_back(p->phrase.text);
  }
  for (const Phrase& p : s.absent_natural) out.push_back(p.text);
  return out;
}

} // namespace

std::vector<std::string> target_order(const AugmentedSample& sample) {
  auto out = present_in_order(sample);
  auto absent = absent_in_order(sample);
  out.insert(out.end(), absent.begin(), absent.end());
  return out;
}

One2ManyTarget format_one2many(const AugmentedSample& sample) {
  One2ManyTarget t;
  bool first = true;
  for (const std::string& p : target_order(sample)) {
    if (p.find(kTargetDelimiter) != std::string::npos) {
      throw InvalidKeyphrase("keyphrase \"" + p + "\" contains the target delimiter");
    }
    if (!first) t.sequence.push_back(kTargetDelimiter);
    t.sequence += p;
    first = false;
  }
  return t;
}

One2OneTarget format_one2one(const AugmentedSample& sample) { return {target_order(sample)}; }

One2SetTarget format_one2set(const AugmentedSample& sample) {
  return {present_in_order(sample), absent_in_order(sample)};
}

} // namespace kpdrop
