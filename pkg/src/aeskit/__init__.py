"""aeskit: learning-based assistants for automation engineering code.

Capabilities: classify code snippets into functional categories, retrieve
similar code by embedding cosine, and complete partial hardware
configurations — plus an HTTP assistant service that turns these into
accept/reject recommendations.
"""

from .autoencoder import (
    AutoencoderModel,
    ae_complete,
    ae_reconstruct,
    train_autoencoder,
)
from .bayesnet import (
    BayesNet,
    bic_score,
    bn_conditional,
    fit_bn_cpts,
    learn_bn_structure,
)
from .corpus import CodeDocument, SplitSpec, load_corpus, save_corpus, stratified_split
from .doc2vec import Doc2VecModel, Doc2VecParams, infer_doc_vector, train_doc2vec
from .features import FeatureBundle, FeatureSetSpec, extract_features, select_features
from .hwrec import (
    PAtKReport,
    ae_recommender,
    bn_recommender,
    evaluate_p_at_k,
    random_recommender,
    recommend_top_k,
)
from .lexer import Token, TokenKind, lex_source
from .logreg import LogRegModel, predict_labels, predict_proba, train_logreg
from .metrics import EvalReport, evaluate_f1
from .search import Neighbor, SearchIndex, build_index, query_knn
from .synth import (
    demo_l1_generator,
    generate_synthetic_corpus,
    generate_synthetic_hwconfigs,
)
from .taxonomy import (
    HardwareConfig,
    Taxonomy,
    builtin_taxonomy,
    load_taxonomy,
    normalize_components,
)
from .tfidf import TfIdfModel, fit_tfidf, tfidf_transform
from .vectors import cosine, random_embedding

__version__ = "0.1.0"

__all__ = [
    "AutoencoderModel", "ae_complete", "ae_reconstruct", "train_autoencoder",
    "BayesNet", "bic_score", "bn_conditional", "fit_bn_cpts", "learn_bn_structure",
    "CodeDocument", "SplitSpec", "load_corpus", "save_corpus", "stratified_split",
    "Doc2VecModel", "Doc2VecParams", "infer_doc_vector", "train_doc2vec",
    "FeatureBundle", "FeatureSetSpec", "extract_features", "select_features",
    "PAtKReport", "ae_recommender", "bn_recommender", "evaluate_p_at_k",
    "random_recommender", "recommend_top_k",
    "Token", "TokenKind", "lex_source",
    "LogRegModel", "predict_labels", "predict_proba", "train_logreg",
    "EvalReport", "evaluate_f1",
    "Neighbor", "SearchIndex", "build_index", "query_knn",
    "demo_l1_generator", "generate_synthetic_corpus", "generate_synthetic_hwconfigs",
    "HardwareConfig", "Taxonomy", "builtin_taxonomy", "load_taxonomy",
    "normalize_components",
    "TfIdfModel", "fit_tfidf", "tfidf_transform",
    "cosine", "random_embedding",
]
