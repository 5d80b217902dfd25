import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thresholdlab import documents as docs
from thresholdlab.cover import CoverCertificate, q_exact
from thresholdlab.errors import EdgeOutOfRange, MalformedDocument
from thresholdlab.experiments import InstanceSpec, KKConfig, run_kk_report
from thresholdlab.fragments import build_schedule, run_process
from thresholdlab.hypergraph import Hypergraph
from thresholdlab.rng import RandomSeed


def through_json(doc):
    return json.loads(json.dumps(doc))


hypergraphs = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.sets(st.integers(0, n - 1), max_size=n), max_size=8).map(lambda es: Hypergraph.from_sets(n, es))
)


@settings(max_examples=100, deadline=None)
@given(hypergraphs)
def test_hypergraph_round_trip(h):
    assert docs.hypergraph_from_doc(through_json(docs.hypergraph_to_doc(h))) == h


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2**20 - 1), max_size=6), st.floats(0, 1))
def test_certificate_round_trip(masks, p):
    cert = CoverCertificate(tuple(masks), p)
    back = docs.certificate_from_doc(through_json(docs.certificate_to_doc(cert)))
    assert back == cert and back.p == p


def test_qresult_round_trip():
    r = q_exact(Hypergraph.from_sets(3, [[0, 1], [1, 2]]))
    assert docs.qresult_from_doc(through_json(docs.qresult_to_doc(r))) == r


def test_transcript_round_trip_bit_identical():
    h = Hypergraph.from_sets(24, [[0, 1, 2], [2, 3, 4], [5, 6, 7], [8, 9]])
    s = build_schedule(2, 3, 0.02, 24, exploratory=True)
    for k in range(20):
        tr = run_process(h, s, RandomSeed(7, k))
        text = docs.dump(docs.transcript_to_doc(tr))
        assert docs.transcript_from_doc(json.loads(text)) == tr


def test_kk_report_round_trip():
    cfg = KKConfig(seeds=4, L=2, exploratory=True, extra_ps=(0.01,))
    r = run_kk_report(InstanceSpec.of("triangles", v=4), config=cfg)
    assert docs.kk_report_from_doc(through_json(docs.kk_report_to_doc(r))) == r


@pytest.mark.parametrize(
    "doc, exc",
    [
        ({"edges": []}, MalformedDocument),
        ({"n": "3", "edges": []}, MalformedDocument),
        ({"n": 3, "edges": [[0, "1"]]}, MalformedDocument),
        ({"n": 3, "edges": [0, 1]}, MalformedDocument),
        ({"n": 3, "edges": [[0, 3]]}, EdgeOutOfRange),
    ],
)
def test_malformed_hypergraph(doc, exc):
    with pytest.raises(exc):
        docs.hypergraph_from_doc(doc)


def test_reals_survive_text():
    for x in [0.1, 1 / 3, 2**-0.5, 5e-324, 0.0, 1.0]:
        assert docs.unreal(docs.real(x)) == x


def test_fmt():
    assert docs.fmt(None) == "NA"
    assert docs.fmt(2**-0.5) == "0.707106781187"


def test_csv_columns():
    r = run_kk_report(InstanceSpec.of("singletons", n=3), seeds=2)
    text = docs.to_csv(docs.kk_rows([r]), docs.KK_COLUMNS)
    header, row = text.strip().splitlines()
    assert header == "family,params,n,ell,q,p_c,ratio,seeds,success_rate,mean_cost"
    assert row.split(",")[6] == "NA"
