#include <algorithm>
#include <map>

#include "doctest.h"
#include "haspi.hpp"
#include "kpdrop/augmentor.hpp"
#include "kpdrop/corpus_io.hpp"
#include "kpdrop/error.hpp"
#include "synthetic.hpp"

using namespace kpdrop;

namespace {

std::vector<std::string> texts(const std::vector<PlacedPhrase>& ps) {
  std::vector<std::string> out;
  for (const PlacedPhrase& p : ps) out.push_back(p.phrase.text);
  return out;
}

std::size_t mask_count(const Document& d) {
  return static_cast<std::size_t>(std::count_if(d.full.begin(), d.full.end(),
                                                [](const Token& t) { return t.kind == TokenKind::Mask; }));
}

std::vector<Phrase> phrases(std::initializer_list<const char*> raw) {
  std::vector<Phrase> out;
  for (const char* r : raw) out.push_back(make_phrase(r));
  return out;
}

Example haspi() {
  Document d = Document::from_text("haspi", testing::kHaspiTitle, testing::kHaspiAbstract);
  KeyphraseSet k = partition(d, testing::kHaspiGold);
  return {std::move(d), std::move(k)};
}

std::vector<std::string> sorted_keys(const AugmentedSample& s) {
  std::vector<std::string> keys;
  for (const PlacedPhrase& p : s.present_new) keys.push_back(p.phrase.key);
  for (const Phrase& p : s.absent_natural) keys.push_back(p.key);
  for (const PlacedPhrase& p : s.absent_artificial) keys.push_back(p.phrase.key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

} // namespace

TEST_CASE("DropConfig validation") {
  CHECK_NOTHROW(DropConfig{}.validate());
  CHECK_THROWS_AS(DropConfig{1.5}.validate(), ContractViolation);
  CHECK_THROWS_AS(DropConfig{-0.1}.validate(), ContractViolation);
  CHECK_THROWS_AS((DropConfig{0.5, ""}.validate()), ContractViolation);
  CHECK_THROWS_AS((DropConfig{0.5, "A B"}.validate()), ContractViolation);
}

TEST_CASE("DropRng is reproducible and keyed") {
  DropRng a(1, "doc", 0);
  DropRng b(1, "doc", 0);
  DropRng c(1, "doc", 1);
  DropRng d(1, "dod", 0);
  std::vector<double> va, vb, vc, vd;
  for (int i = 0; i < 8; ++i) {
    va.push_back(a.uniform());
    vb.push_back(b.uniform());
    vc.push_back(c.uniform());
    vd.push_back(d.uniform());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  for (double v : va) CHECK((v >= 0.0 && v < 1.0));

  DropRng e(5);
  for (int i = 0; i < 1000; ++i) CHECK(e.below(7) < 7);
  CHECK_THROWS_AS(e.below(0), ContractViolation);
}

TEST_CASE("DropRng stream is pinned") {
  // Values from a separate implementation of splitmix64, FNV-1a and
  // mt19937_64. A change here changes every augmented corpus.
  CHECK(mix_seed(42, "doc0", 0) == 0xaf5f0bb0e5b4040bULL);
  DropRng r(42, "doc0", 0);
  CHECK(r.uniform() == 0.6381050232334649);
  CHECK(r.uniform() == 0.1043969994573476);
  CHECK(r.uniform() == 0.4403140631567716);
}

TEST_CASE("sample_drop_set degenerate rates") {
  const Example ex = haspi();
  DropRng rng(3);
  CHECK(sample_drop_set(ex.keyphrases, DropConfig{0.0}, rng).empty());
  const auto all = sample_drop_set(ex.keyphrases, DropConfig{1.0}, rng);
  REQUIRE(all.size() == 3);
  CHECK(all[0].text == "speech intelligibility");
  CHECK(all[2].text == "hearing loss");
}

TEST_CASE("sample_drop_set matches the drop rate") {
  const Example ex = haspi();
  const DropConfig cfg{0.7};
  std::vector<int> hits(3, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    DropRng rng(cfg.seed, ex.doc.id, static_cast<std::uint64_t>(i));
    for (const Phrase& p : sample_drop_set(ex.keyphrases, cfg, rng)) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (ex.keyphrases.present[j].phrase == p) ++hits[j];
      }
    }
  }
  for (int h : hits) {
    const double f = static_cast<double>(h) / n;
    CHECK(f >= 0.68);
    CHECK(f <= 0.72);
  }
}

TEST_CASE("apply_drop on HASPI example") {
  const Example ex = haspi();
  const auto drop = phrases({"auditory model"});
  const AugmentedSample s = apply_drop(ex.doc, ex.keyphrases, drop, DropConfig{});
  CHECK(mask_count(s.doc_new) == 2);
  CHECK(s.mask_spans.size() == 2);
  CHECK(s.doc_new.title_text == testing::kHaspiTitle);
  CHECK(s.doc_new.body_text == testing::kHaspiMaskedAbstract);
  CHECK(texts(s.present_new) == std::vector<std::string>{"speech intelligibility", "hearing loss"});
  CHECK(texts(s.absent_artificial) == std::vector<std::string>{"auditory model"});
  REQUIRE(s.absent_natural.size() == 2);
  CHECK(s.collateral.empty());
  CHECK(s.dropped().size() == 1);
  CHECK(s.doc_new.full.size() == ex.doc.full.size() - 2);
  for (const MaskedSpan& m : s.mask_spans) CHECK(s.doc_new.full[m.position].kind == TokenKind::Mask);
}

TEST_CASE("apply_drop small cases") {
  SUBCASE("empty drop set is the identity") {
    const Example ex = haspi();
    const AugmentedSample s = apply_drop(ex.doc, ex.keyphrases, {}, DropConfig{});
    CHECK(s.doc_new.text() == ex.doc.text());
    CHECK(s.present_new.size() == 3);
    CHECK(s.absent_artificial.empty());
  }
  SUBCASE("each span collapses to one mask") {
    const Document d = Document::from_text("abab", "", "a b a b");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"a b"});
    const AugmentedSample s = apply_drop(d, k, phrases({"a b"}), DropConfig{});
    CHECK(s.doc_new.body_text == "[MASK] [MASK]");
    CHECK(s.doc_new.full.size() == 2);
  }
  SUBCASE("longest phrase wins an overlap") {
    const Document d = Document::from_text("o", "", "deep neural network and neural network");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"neural network", "deep neural network"});
    const AugmentedSample s = apply_drop(d, k, phrases({"neural network", "deep neural network"}), DropConfig{});
    CHECK(s.doc_new.body_text == "[MASK] and [MASK]");
  }
  SUBCASE("leftmost wins among equal lengths") {
    const Document d = Document::from_text("l", "", "a b c");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"b c", "a b"});
    const AugmentedSample s = apply_drop(d, k, phrases({"b c", "a b"}), DropConfig{});
    CHECK(s.doc_new.body_text == "[MASK] c");
    // "b c" lost its only occurrence to the mask, so it is absent as well.
    CHECK(s.absent_artificial.size() == 2);
    CHECK(find_matches(s.doc_new.full, k.present[0].phrase.tokens).empty());
  }
  SUBCASE("undropped phrase swallowed by a mask becomes collateral") {
    const Document d = Document::from_text("c", "", "deep neural network");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"neural network", "deep neural network"});
    const AugmentedSample s = apply_drop(d, k, phrases({"deep neural network"}), DropConfig{});
    CHECK(s.present_new.empty());
    REQUIRE(s.collateral.size() == 1);
    CHECK(s.collateral[0].text == "neural network");
    CHECK(texts(s.absent_artificial) == std::vector<std::string>{"neural network", "deep neural network"});
    CHECK(s.dropped().size() == 1);
  }
  SUBCASE("span across title and body") {
    const Document d = Document::from_text("x", "Sparse", "kernel methods");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"sparse kernel"});
    const AugmentedSample s = apply_drop(d, k, phrases({"sparse kernel"}), DropConfig{});
    CHECK(s.doc_new.title_text == "[MASK]");
    CHECK(s.doc_new.body_text == " methods");
    CHECK(s.doc_new.full.size() == 2);
  }
  SUBCASE("custom mask token") {
    const Document d = Document::from_text("m", "", "graph models here");
    const KeyphraseSet k = partition(d, std::vector<std::string>{"graph model"});
    const AugmentedSample s = apply_drop(d, k, phrases({"graph model"}), DropConfig{0.7, "<kp>"});
    CHECK(s.doc_new.body_text == "<kp> here");
    CHECK(s.doc_new.full[0].kind == TokenKind::Mask);
  }
  SUBCASE("dropping a non-present phrase is a contract violation") {
    const Example ex = haspi();
    CHECK_THROWS_AS(apply_drop(ex.doc, ex.keyphrases, phrases({"hearing aids"}), DropConfig{}),
                    ContractViolation);
  }
}

TEST_CASE("strategies") {
  testing::CorpusGenerator gen(5);
  std::vector<Example> batch;
  for (const CorpusRecord& r : gen.corpus(4)) batch.push_back(to_example(r));

  const DropConfig cfg{0.7, "[MASK]", 9};
  const auto rep = kpdrop_replace(batch, cfg, 0);
  CHECK(rep.size() == 4);
  const auto app = kpdrop_append(batch, cfg, 0);
  REQUIRE(app.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(app[i].doc_new.text() == batch[i].doc.text());
    CHECK(app[i].absent_artificial.empty());
    CHECK(app[4 + i].doc_new.text() == rep[i].doc_new.text());
    for (const PlacedPhrase& a : app[4 + i].absent_artificial) {
      const auto& present = batch[i].keyphrases.present;
      CHECK(std::any_of(present.begin(), present.end(),
                        [&](const PresentPhrase& p) { return p.phrase == a.phrase; }));
    }
  }

  const auto again = kpdrop_replace(batch, cfg, 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(again[i].doc_new.text() == rep[i].doc_new.text());

  const auto zero = kpdrop_append(batch, DropConfig{0.0}, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(zero[i].doc_new.text() == batch[i].doc.text());
    CHECK(zero[4 + i].doc_new.text() == batch[i].doc.text());
    CHECK(texts(zero[4 + i].present_new) == texts(zero[i].present_new));
  }
}

TEST_CASE("augmentation invariants on random documents") {
  testing::CorpusGenerator gen(21);
  const DropConfig cfg{0.7, "[MASK]", 3};
  for (int i = 0; i < 400; ++i) {
    const Example ex = to_example(gen.record("d" + std::to_string(i)));
    const AugmentedSample s = kpdrop::kpdrop(ex, cfg, static_cast<std::uint64_t>(i % 3));

    // Conservation.
    std::vector<std::string> gold;
    for (const Phrase& p : ex.keyphrases.all) gold.push_back(p.key);
    std::sort(gold.begin(), gold.end());
    CHECK(sorted_keys(s) == gold);

    // Mask accounting and shrinkage.
    CHECK(mask_count(s.doc_new) == s.mask_spans.size() + mask_count(ex.doc));
    std::size_t shrink = 0;
    for (const MaskedSpan& m : s.mask_spans) shrink += m.source.size() - 1;
    CHECK(s.doc_new.full.size() == ex.doc.full.size() - shrink);

    // Truly absent, still present.
    for (const PlacedPhrase& p : s.absent_artificial) CHECK(find_matches(s.doc_new.full, p.phrase.tokens).empty());
    for (const PlacedPhrase& p : s.present_new) CHECK_FALSE(find_matches(s.doc_new.full, p.phrase.tokens).empty());

    // Round trip: re-partitioning the masked document agrees.
    std::vector<std::string> raw;
    for (const Phrase& p : ex.keyphrases.all) raw.push_back(p.text);
    const KeyphraseSet again = partition(s.doc_new, raw);
    CHECK(again.present.size() == s.present_new.size());
    CHECK(again.absent.size() == s.absent_natural.size() + s.absent_artificial.size());
  }
}
