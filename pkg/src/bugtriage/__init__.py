"""Bug-report classification toolkit.

Pipeline: preprocess summaries, fuse TF-IDF field-frequency scores with a
summary embedding, min-max normalize, train one of five from-scratch
classifiers, and score with stratified ten-fold cross-validation. The
three feature configurations (text, text+freq, text+freq+intention) form
the ablation grid.
"""

from .corpus import (
    BugReport,
    Dataset,
    DatasetStats,
    FoldPlan,
    Intention,
    Label,
    ValidationReport,
    load_csv,
    stats,
    stratified_kfold,
    train_test_split,
    validate,
)
from .features import (
    FeatureConfig,
    FeatureMatrix,
    FeatureMode,
    HashingEmbedder,
    MinMaxParams,
    SidecarEmbedder,
    TfidfModel,
    apply_minmax,
    build_features,
    embed,
    fit_minmax,
    fit_tfidf,
    tfidf_score,
)
from .evaluation import (
    AblationResult,
    CVResult,
    cross_validate,
    render_report,
    run_ablation,
)
from .metrics import ConfusionMatrix, Metrics, confusion, metrics
from .preprocess import StopwordList, bundled_stopwords, normalize_case, preprocess, remove_stopwords, tokenize
from .porter import stem
from .synth import SynthSpec, generate_synthetic, load_synth_spec

__version__ = "0.1.0"
