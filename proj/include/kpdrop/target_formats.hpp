#pragma once

#include <string>
#include <vector>

#include "kpdrop/augmentor.hpp"

namespace kpdrop {

inline constexpr char kTargetDelimiter = ';';

struct One2ManyTarget {
  std::string sequence;
};

struct One2OneTarget {
  std::vector<std::string> phrases;
};

struct One2SetTarget {
  std::vector<std::string> present_slots;
  std::vector<std::string> absent_slots;
};

// Global keyphrase order shared by all formatters: remaining present
// phrases by first occurrence in the source document (longer phrase first
// on ties), then artificial absents by first occurrence, then natural
// absents in author order.
std::vector<std::string> target_order(const AugmentedSample& sample);

// Throws InvalidKeyphrase if a phrase contains the delimiter.
One2ManyTarget format_one2many(const AugmentedSample& sample);
One2OneTarget format_one2one(const AugmentedSample& sample);
One2SetTarget format_one2set(const AugmentedSample& sample);

} // namespace kpdrop
