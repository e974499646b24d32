#include "kpdrop/porter.hpp"

#include <vector>

namespace kpdrop {

namespace {

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Working buffer for one word. All predicates look at word_[0, len) where
// len is passed explicitly so a candidate stem can be examined in place.
class Stemmer {
public:
  explicit Stemmer(std::string_view w) : word_(w) {}

  std::string run() {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return word_;
  }

private:
  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  bool consonant(std::size_t i) const {
    const char c = word_[i];
    if (is_vowel_letter(c)) return false;
    if (c != 'y') return true;
    // y is a consonant at the start or after a vowel, a vowel after a consonant.
    bool negate = false;
    while (i > 0 && word_[i] == 'y') {
      negate = !negate;
      --i;
    }
    return (!is_vowel_letter(word_[i])) != negate;
  }

  // m in [C](VC){m}[V] over word_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < len; ++i) {
      const bool cons = consonant(i);
      if (cons && prev_vowel) ++m;
      prev_vowel = !cons;
    }
    return m;
  }

  bool contains_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool ends_double_consonant(std::size_t len) const {
    return len >= 2 && word_[len - 1] == word_[len - 2] && consonant(len - 1);
  }

  // *o: stem ends cvc where the final c is not w, x or y.
  bool ends_cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 3) || consonant(len - 2) || !consonant(len - 1)) {
      return false;
    }
    const char c = word_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return word_.size() >= suffix.size() &&
           std::string_view(word_).substr(word_.size() - suffix.size()) == suffix;
  }

  void replace_tail(std::size_t suffix_len, std::string_view replacement) {
    word_.resize(word_.size() - suffix_len);
    word_.append(replacement);
  }

  // First rule whose suffix matches decides; if its condition fails the
  // word is left alone.
  template <typename Cond>
  void apply_rules(std::initializer_list<Rule> rules, Cond cond) {
    for (const Rule& r : rules) {
      if (!ends_with(r.suffix)) continue;
      const std::size_t stem_len = word_.size() - r.suffix.size();
      if (cond(stem_len)) replace_tail(r.suffix.size(), r.replacement);
      return;
    }
  }

  void step1a() {
    if (ends_with("sses")) {
      replace_tail(4, "ss");
    } else if (ends_with("ies")) {
      replace_tail(3, "i");
    } else if (ends_with("ss")) {
      // unchanged
    } else if (ends_with("s")) {
      replace_tail(1, "");
    }
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(word_.size() - 3) > 0) replace_tail(3, "ee");
      return;
    }
    std::size_t cut = 0;
    if (ends_with("ed") && contains_vowel(word_.size() - 2)) {
      cut = 2;
    } else if (ends_with("ing") && contains_vowel(word_.size() - 3)) {
      cut = 3;
    }
    if (cut == 0) return;
    word_.resize(word_.size() - cut);

    if (ends_with("at")) {
      word_.append("e");
    } else if (ends_with("bl")) {
      word_.append("e");
    } else if (ends_with("iz")) {
      word_.append("e");
    } else if (ends_double_consonant(word_.size())) {
      const char last = word_.back();
      if (last != 'l' && last != 's' && last != 'z') word_.pop_back();
    } else if (measure(word_.size()) == 1 && ends_cvc(word_.size())) {
      word_.append("e");
    }
  }

  void step1c() {
    if (ends_with("y") && contains_vowel(word_.size() - 1)) {
      word_.back() = 'i';
    }
  }

  void step2() {
    apply_rules(
        {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
            {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
            {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
            {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
            {"iviti", "ive"},   {"biliti", "ble"},
        },
        [this](std::size_t len) { return measure(len) > 0; });
  }

  void step3() {
    apply_rules(
        {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        },
        [this](std::size_t len) { return measure(len) > 0; });
  }

  void step4() {
    auto m_gt_1 = [this](std::size_t len) { return measure(len) > 1; };
    // "ion" carries an extra (*S or *T) condition, and must be tried in
    // its place in the list.
    static constexpr std::string_view kBefore[] = {
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent"};
    static constexpr std::string_view kAfter[] = {"ou", "ism", "ate", "iti", "ous", "ive", "ize"};
    for (std::string_view s : kBefore) {
      if (ends_with(s)) {
        if (m_gt_1(word_.size() - s.size())) replace_tail(s.size(), "");
        return;
      }
    }
    if (ends_with("ion")) {
      const std::size_t len = word_.size() - 3;
      if (m_gt_1(len) && len > 0 && (word_[len - 1] == 's' || word_[len - 1] == 't')) {
        replace_tail(3, "");
      }
      return;
    }
    for (std::string_view s : kAfter) {
      if (ends_with(s)) {
        if (m_gt_1(word_.size() - s.size())) replace_tail(s.size(), "");
        return;
      }
    }
  }

  void step5a() {
    if (!ends_with("e")) return;
    const std::size_t len = word_.size() - 1;
    const int m = measure(len);
    if (m > 1 || (m == 1 && !ends_cvc(len))) word_.pop_back();
  }

  void step5b() {
    if (ends_with("ll") && measure(word_.size() - 1) > 1) word_.pop_back();
  }

  std::string word_;
};

} // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty()) return {};
  return Stemmer(word).run();
}

} // namespace kpdrop
