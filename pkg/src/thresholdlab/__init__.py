"""Threshold laboratory: exact thresholds, expectation-thresholds and the
fragment-based random cover process for small explicit hypergraphs."""

from .cover import CoverCertificate, QResult, cover_cost, is_cover, min_cover_cost, q_exact, verify_certificate
from .experiments import InstanceSpec, KKReport, generate, run_kk_report
from .fragments import (
    build_schedule,
    check_success1,
    empirical_lemma31,
    lemma31_bruteforce,
    lemma31_table,
    min_fragment,
    run_process,
    split_round,
    verify_transcript,
)
from .hypergraph import Hypergraph, in_upset, largest_minimal_element, minimal_antichain, validate
from .measures import MeasureEstimate, mu_exact, mu_mc, p_c_bisect, p_c_search, sample_uniform_m_subset
from .rng import RandomSeed

__version__ = "0.1.0"
