"""JSON documents for hypergraphs, certificates, transcripts and reports.

Reals are written as ``repr`` strings so that parsing returns the identical
double.  Subsets are written as sorted lists of element indices.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from .cover import CoverCertificate, QResult
from .errors import MalformedDocument
from .experiments import InstanceSpec, KKReport, ProcessStats
from .fragments import ProcessTranscript, RoundRecord, ScheduleParams
from .hypergraph import Hypergraph, members, to_mask
from .rng import RandomSeed

SIG = 12


def real(x: float) -> str:
    return repr(float(x))


def unreal(s: Any) -> float:
    try:
        return float(s)
    except (TypeError, ValueError):
        raise MalformedDocument(f"expected a decimal string, got {s!r}") from None


def fmt(x: float | None) -> str:
    """12 significant digits for human-facing reports; NA for undefined."""
    return "NA" if x is None else f"{x:.{SIG}g}"


def _sets(masks) -> list[list[int]]:
    return [members(m) for m in masks]


def _mask(doc, what: str) -> int:
    if not isinstance(doc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in doc):
        raise MalformedDocument(f"{what} must be an array of integers")
    return to_mask(doc)


def _masks(doc, what: str) -> list[int]:
    if not isinstance(doc, list):
        raise MalformedDocument(f"{what} must be an array of arrays of integers")
    return [_mask(s, what) for s in doc]


def _field(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedDocument(f"missing field {key!r}")
    return doc[key]


def hypergraph_to_doc(h: Hypergraph) -> dict:
    return {"n": h.n, "edges": _sets(h.edges)}


def hypergraph_from_doc(doc: dict) -> Hypergraph:
    n = _field(doc, "n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedDocument("field 'n' must be an integer")
    return Hypergraph.from_masks(n, _masks(_field(doc, "edges"), "edges"))


def certificate_to_doc(cert: CoverCertificate) -> dict:
    return {"p": real(cert.p), "sets": _sets(cert.sets), "cost": real(cert.cost)}


def certificate_from_doc(doc: dict) -> CoverCertificate:
    return CoverCertificate(tuple(_masks(_field(doc, "sets"), "sets")), unreal(_field(doc, "p")))


def qresult_to_doc(r: QResult) -> dict:
    return {"q": real(r.q), "witness": certificate_to_doc(r.witness)}


def qresult_from_doc(doc: dict) -> QResult:
    return QResult(unreal(_field(doc, "q")), certificate_from_doc(_field(doc, "witness")))


def schedule_to_doc(s: ScheduleParams) -> dict:
    return {
        "L": real(s.L),
        "ell": s.ell,
        "p": real(s.p),
        "n": s.n,
        "gamma": s.gamma,
        "ell_i": [real(x) for x in s.ells],
        "L_i": [real(x) for x in s.Ls],
        "w_i": list(s.ws),
        "exploratory": s.exploratory,
    }


def schedule_from_doc(doc: dict) -> ScheduleParams:
    return ScheduleParams(
        L=unreal(_field(doc, "L")),
        ell=int(_field(doc, "ell")),
        p=unreal(_field(doc, "p")),
        n=int(_field(doc, "n")),
        gamma=int(_field(doc, "gamma")),
        ells=tuple(unreal(x) for x in _field(doc, "ell_i")),
        Ls=tuple(unreal(x) for x in _field(doc, "L_i")),
        ws=tuple(int(x) for x in _field(doc, "w_i")),
        exploratory=bool(_field(doc, "exploratory")),
    )


def _round_to_doc(r: RoundRecord) -> dict:
    return {
        "i": r.i,
        "W": members(r.W),
        "threshold": real(r.threshold),
        "good": list(r.good),
        "cover": _sets(r.cover),
        "leftover": _sets(r.leftover.edges),
        "cost": real(r.cost),
        "log_cost": real(r.log_cost),
        "success1": r.success1,
        "success2": r.success2,
    }


def _round_from_doc(doc: dict, n: int) -> RoundRecord:
    return RoundRecord(
        i=int(_field(doc, "i")),
        W=_mask(_field(doc, "W"), "W"),
        threshold=unreal(_field(doc, "threshold")),
        good=tuple(int(j) for j in _field(doc, "good")),
        cover=tuple(_masks(_field(doc, "cover"), "cover")),
        leftover=Hypergraph(n, tuple(_masks(_field(doc, "leftover"), "leftover"))),
        cost=unreal(_field(doc, "cost")),
        log_cost=unreal(_field(doc, "log_cost")),
        success1=bool(_field(doc, "success1")),
        success2=bool(_field(doc, "success2")),
    )


def transcript_to_doc(tr: ProcessTranscript) -> dict:
    return {
        "hypergraph": hypergraph_to_doc(tr.hypergraph),
        "schedule": schedule_to_doc(tr.schedule),
        "seed": None if tr.seed is None else {"master": tr.seed.master, "stream": tr.seed.stream},
        "rounds": [_round_to_doc(r) for r in tr.rounds],
        "i_max": tr.i_max,
        "terminated_successfully": tr.terminated_successfully,
        "assembled_cover": _sets(tr.assembled_cover),
        "W_union": members(tr.W_union),
    }


def transcript_from_doc(doc: dict) -> ProcessTranscript:
    h = hypergraph_from_doc(_field(doc, "hypergraph"))
    seed = doc.get("seed")
    return ProcessTranscript(
        hypergraph=h,
        schedule=schedule_from_doc(_field(doc, "schedule")),
        seed=None if seed is None else RandomSeed(int(seed["master"]), int(seed["stream"])),
        rounds=tuple(_round_from_doc(r, h.n) for r in _field(doc, "rounds")),
        i_max=int(_field(doc, "i_max")),
        terminated_successfully=bool(_field(doc, "terminated_successfully")),
        assembled_cover=tuple(_masks(_field(doc, "assembled_cover"), "assembled_cover")),
        W_union=_mask(_field(doc, "W_union"), "W_union"),
    )


def _opt(x: float | None):
    return None if x is None else real(x)


def _unopt(x) -> float | None:
    return None if x is None else unreal(x)


def kk_report_to_doc(r: KKReport) -> dict:
    return {
        "instance": str(r.instance),
        "n": r.n,
        "ell": r.ell,
        "q": _opt(r.q),
        "p_c": real(r.p_c),
        "p_c_exact": r.p_c_exact,
        "ratio": _opt(r.ratio),
        "seeds": r.seeds,
        "process_stats": [
            {"p": real(s.p), "runs": s.runs, "success_rate": _opt(s.success_rate), "mean_cost": _opt(s.mean_cost), "note": s.note}
            for s in r.process_stats
        ],
    }


def kk_report_from_doc(doc: dict) -> KKReport:
    stats = tuple(
        ProcessStats(unreal(s["p"]), int(s["runs"]), _unopt(s["success_rate"]), _unopt(s["mean_cost"]), s.get("note", ""))
        for s in _field(doc, "process_stats")
    )
    return KKReport(
        instance=InstanceSpec.parse(_field(doc, "instance")),
        n=int(_field(doc, "n")),
        ell=int(_field(doc, "ell")),
        q=_unopt(_field(doc, "q")),
        p_c=unreal(_field(doc, "p_c")),
        p_c_exact=bool(_field(doc, "p_c_exact")),
        seeds=int(_field(doc, "seeds")),
        process_stats=stats,
    )


KK_COLUMNS = ["family", "params", "n", "ell", "q", "p_c", "ratio", "seeds", "success_rate", "mean_cost"]


def kk_rows(reports: list[KKReport]) -> list[dict]:
    rows = []
    for r in reports:
        head = r.headline
        rows.append(
            {
                "family": r.instance.family,
                "params": ";".join(f"{k}={v}" for k, v in r.instance.params),
                "n": r.n,
                "ell": r.ell,
                "q": fmt(r.q),
                "p_c": fmt(r.p_c),
                "ratio": fmt(r.ratio),
                "seeds": r.seeds,
                "success_rate": fmt(head.success_rate if head else None),
                "mean_cost": fmt(head.mean_cost if head else None),
            }
        )
    return rows


ROUND_COLUMNS = ["seed", "i", "ell_i", "L_i", "w_i", "cost", "log_cost", "log_bound", "success1", "success2", "leftover_edges"]


def round_rows(transcripts: list[ProcessTranscript]) -> list[dict]:
    from .fragments import success1_log_bound

    rows = []
    for tr in transcripts:
        s = tr.schedule
        for r in tr.rounds:
            rows.append(
                {
                    "seed": "" if tr.seed is None else f"{tr.seed.master}/{tr.seed.stream}",
                    "i": r.i,
                    "ell_i": fmt(s.ell_at(r.i)),
                    "L_i": fmt(s.L_at(r.i)),
                    "w_i": s.w_at(r.i),
                    "cost": fmt(r.cost),
                    "log_cost": fmt(r.log_cost),
                    "log_bound": fmt(success1_log_bound(s.L_at(r.i), s.ell_at(r.i))),
                    "success1": int(r.success1),
                    "success2": int(r.success2),
                    "leftover_edges": len(r.leftover.edges),
                }
            )
    return rows


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def dump(doc: dict, path: str | Path | None = None) -> str:
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: {exc}") from None
    except OSError as exc:
        raise MalformedDocument(f"{path}: {exc.strerror}") from None
