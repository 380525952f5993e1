"""Shared verification primitives: Haar sampling, distances, reports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from equichan.gtpaths import RemovalDistribution
from equichan.staircases import Staircase


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SU(d).

    QR of a complex Gaussian matrix with the R diagonal made positive gives
    Haar on U(d); dividing by the d-th root of the determinant lands in SU(d).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    Q = Q * ph
    det = np.linalg.det(Q)
    return Q / det ** (1.0 / d)


def frob(A: np.ndarray, B: np.ndarray | None = None) -> float:
    """Frobenius norm of A, or of A - B."""
    if B is None:
        return float(np.linalg.norm(A))
    return float(np.linalg.norm(A - B))


def tv_distance(empirical: dict[Staircase, float], exact: RemovalDistribution) -> float:
    """Total variation distance between an empirical histogram and an exact
    distribution; empirical counts are normalized first."""
    extra = set(empirical) - set(exact.probs)
    if extra:
        raise ValueError(f"empirical support outside exact support: {extra}")
    total = sum(empirical.values())
    if total <= 0:
        raise ValueError("empty histogram")
    acc = 0.0
    for mu, p in exact.probs.items():
        q = empirical.get(mu, 0) / total
        acc += abs(float(p) - q)
    return 0.5 * acc


@dataclass
class CaseResult:
    case_id: str
    value: float
    threshold: float
    kind: str = "residual"  # residual: pass iff value <= threshold
    #                         pvalue:   pass iff value >= threshold

    @property
    def passed(self) -> bool:
        if self.kind == "pvalue":
            return self.value >= self.threshold
        return self.value <= self.threshold


@dataclass
class VerificationReport:
    suite: str
    seed: int
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, case_id: str, value: float, threshold: float, kind: str = "residual"):
        self.cases.append(CaseResult(case_id, float(value), float(threshold), kind))

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.cases:
            status = "PASS" if c.passed else "FAIL"
            op = ">=" if c.kind == "pvalue" else "<="
            lines.append(
                f"[{status}] {self.suite}/{c.case_id}: {c.value:.3e} {op} {c.threshold:.3e}"
            )
        return lines

    def __str__(self) -> str:
        return "\n".join(self.summary_lines())
