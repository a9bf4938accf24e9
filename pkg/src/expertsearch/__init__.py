"""Expertise search combining organizational structure with document content."""

from .corpus import Corpus, Document, load_corpus, save_corpus
from .evaluation import (
    Judgment,
    Qrels,
    RunEntry,
    RunFile,
    Topic,
    compare_runs,
    macro_average,
    paired_ttest,
    precision_at_k,
    quantize,
)
from .evidence import (
    EvidenceFragment,
    EvidenceSet,
    PropagationConfig,
    TypeFactorConfig,
    build_baseline_evidence,
    build_evidence,
    find_name_mentions,
    propagate_from_seeds,
    type_factor,
)
from .org import OrgModel, Person, Project, SeedPoint, Unit, attach_db_documents, extract_seeds, parse_org
from .pipeline import BuildConfig, Collection, build_artifacts, execute_run, load_artifacts, write_artifacts
from .retrieval import FragmentIndex, IndexConfig, build_index, okapi_score, rank_experts, tokenize
from .synthetic import SyntheticConfig, gen_synthetic
from .urls import AliasMap, EdgeDirection, classify_edge, normalize_url
from .webgraph import WebGraph, build_web_graph

__version__ = "0.1.0"
