"""Serialization of matrices, specs, paths, ledgers and reports.

Text-based JSON with explicit [re, im] pairs; complex literals are avoided
so the files stay portable.  Floats are written with shortest-exact
repr (up to 17 significant digits), which round-trips bit-exactly;
staircases are flat signed-integer arrays of length d including zeros.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from equichan.channels import ChoiMatrix, ExtremalSpec, ExtremalTriple
from equichan.gtpaths import GtPath
from equichan.staircases import Staircase
from equichan.streaming import ResourceLedger
from equichan.verify import CaseResult, VerificationReport


def staircase_to_obj(s: Staircase) -> list[int]:
    return list(s.entries)


def staircase_from_obj(obj: list[int]) -> Staircase:
    return Staircase(tuple(int(x) for x in obj))


def matrix_to_obj(M: np.ndarray, layout: list[dict] | None = None) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    obj: dict[str, Any] = {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "data": [[float(x.real), float(x.imag)] for x in M.reshape(-1)],
    }
    if layout is not None:
        obj["layout"] = layout
    return obj


def matrix_from_obj(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"data length {len(data)} != rows*cols {rows * cols}")
    flat = np.array([complex(re, im) for re, im in data])
    if not np.all(np.isfinite(flat)):
        raise ValueError("matrix entries must be finite")
    return flat.reshape(rows, cols)


def choi_to_obj(choi: ChoiMatrix) -> dict:
    obj = matrix_to_obj(choi.matrix)
    obj.update({"m": choi.m, "n": choi.n, "d": choi.d})
    return obj


def choi_from_obj(obj: dict) -> ChoiMatrix:
    return ChoiMatrix(matrix_from_obj(obj), int(obj["m"]), int(obj["n"]), int(obj["d"]))


def vector_to_obj(v: np.ndarray) -> list[list[float]]:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex).reshape(-1)]


def vector_from_obj(obj: list[list[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in obj])


def spec_to_obj(spec: ExtremalSpec) -> dict:
    return {
        "m": spec.m,
        "n": spec.n,
        "d": spec.d,
        "assignments": [
            {
                "lambda": staircase_to_obj(lam),
                "mu": staircase_to_obj(t.mu),
                "gamma": staircase_to_obj(t.gamma),
                "psi": vector_to_obj(t.psi),
            }
            for lam, t in spec.assignments.items()
        ],
    }


def spec_from_obj(obj: dict) -> ExtremalSpec:
    assignments = {}
    for a in obj["assignments"]:
        lam = staircase_from_obj(a["lambda"])
        assignments[lam] = ExtremalTriple(
            staircase_from_obj(a["mu"]),
            staircase_from_obj(a["gamma"]),
            vector_from_obj(a["psi"]),
        )
    return ExtremalSpec(int(obj["m"]), int(obj["n"]), int(obj["d"]), assignments)


def path_to_obj(p: GtPath) -> list[list[int]]:
    """A path is an array of staircase arrays; (k, l) is recovered from the
    box counts, which rise for additions and fall for removals."""
    return [staircase_to_obj(s) for s in p.steps]


def path_from_obj(obj: list[list[int]]) -> GtPath:
    steps = tuple(staircase_from_obj(row) for row in obj)
    sizes = [s.size for s in steps]
    k = int(np.argmax(sizes))
    l = len(steps) - 1 - k
    return GtPath(steps, k, l)


def report_to_obj(r: VerificationReport) -> dict:
    return {
        "suite": r.suite,
        "seed": r.seed,
        "passed": r.passed,
        "cases": [
            {
                "id": c.case_id,
                "value": c.value,
                "threshold": c.threshold,
                "kind": c.kind,
                "pass": c.passed,
            }
            for c in r.cases
        ],
    }


def report_from_obj(obj: dict) -> VerificationReport:
    r = VerificationReport(obj["suite"], int(obj["seed"]))
    for c in obj["cases"]:
        r.cases.append(CaseResult(c["id"], c["value"], c["threshold"], c["kind"]))
    return r


def ledger_to_obj(ledger: ResourceLedger) -> dict:
    return ledger.as_dict()


def app_result_to_obj(output: np.ndarray, ledger: ResourceLedger, fidelity=None) -> dict:
    return {
        "output": matrix_to_obj(output),
        "ledger": ledger_to_obj(ledger),
        "fidelity": None if fidelity is None else float(fidelity),
    }


def save_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def load_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
