"""Set-valued part-of-speech tagging for historical corpora."""

from .corpus import (
    Corpus,
    CorpusError,
    Document,
    SplitPlan,
    SplitSpec,
    TagSet,
    Token,
    assemble_scenario,
    levenshtein,
    normalize_orthography,
    parse_corpus,
    read_corpus,
    split_document,
)
from .setpred import (
    PredictionSet,
    UtilityConfig,
    argmax_tag,
    expected_utility,
    g_beta,
    ubop,
    utility,
)
from .taggers import (
    BaselineTagger,
    HmmTagger,
    MemmTagger,
    Tagger,
    TaggerError,
    load_model,
    make_tagger,
)
from .evaluation import (
    EvalReport,
    SetSizeHistogram,
    SweepTable,
    beta_sweep,
    emit_report,
    evaluate,
    run_scenario,
)

__version__ = "0.1.0"
