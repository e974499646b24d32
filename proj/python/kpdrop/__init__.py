"""Keyphrase dropout augmentation, training-target formatting and evaluation."""

from ._core import (
    AugmentedSample,
    ContractViolation,
    CorpusError,
    CorpusRecord,
    Document,
    DocScore,
    DropConfig,
    InvalidKeyphrase,
    KeyphraseSet,
    KpdropError,
    Phrase,
    PresentPhrase,
    ScoreReport,
    Span,
    Token,
    __version__,
    apply_drop,
    extract_candidates,
    f1_at_5c,
    f1_at_k,
    f1_at_m,
    find_matches,
    format_one2many,
    format_one2one,
    format_one2set,
    kpdrop_append,
    kpdrop_replace,
    label_synthetic,
    match,
    partition,
    porter_stem,
    rank_and_label,
    recall_at_k,
    run_cli,
    sample_drop_set,
    score_corpus,
    split_corpus,
    stem_seq,
    tokenize,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
