"""wordcamo: deterministic word camouflage, adversarial dataset generation,
and classifier robustness evaluation."""

from .corpus import CORPUS_SEED, bundled_corpus, write_bundled_corpus
from .engines import (
    ModificationRecord,
    camouflage_word,
    invert_syllables,
    leet_transform,
    punct_transform,
    select_method,
    swap_syllables,
)
from .evaluation import (
    BaselineModel,
    EvalError,
    PredictionSet,
    RobustnessReport,
    f1_macro,
    featurize,
    performance_reduction,
    predict_baseline,
    read_predictions,
    robustness_report,
    train_baseline,
    write_predictions,
)
from .experiments import run_trend_experiment
from .glyphs import GlyphTable, GlyphTableError, default_table, load_glyph_tables
from .levels import (
    DEFAULT_SYMBOLS,
    INV_CAMO,
    LEETSPEAK,
    METHOD_KINDS,
    PUNCT_CAMO,
    VERSIONS,
    ConfigError,
    LevelSpec,
    SeedPath,
    all_canonical_specs,
    apply_overrides,
    canonical_spec,
    derive_rng,
    load_overrides,
)
from .pipeline import (
    PERCENTS,
    CamouflagedInstance,
    DatasetError,
    Instance,
    IntegrityError,
    SuiteManifest,
    camouflage_instance,
    dynamic_view,
    entry_key,
    epoch_views,
    file_checksum,
    generate_suite,
    read_camouflaged,
    read_dataset,
    revert,
    select_instances,
    static_training_set,
    transform_dataset,
    write_dataset,
)
from .textual import (
    Keyword,
    Token,
    content_word_count,
    default_stopwords,
    extract_keywords,
    keywords_from_tokens,
    load_stopwords,
    syllabify,
    target_keyword_count,
    tokenize,
)

__version__ = "0.1.0"
