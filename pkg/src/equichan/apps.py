"""Worked applications: state symmetrization, symmetric cloning, purity
amplification.

Each runs through the streamed executor and returns the output state with
the resource ledger; independent dense oracles for all three live in the
test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from equichan.channels import (
    ExtremalSpec,
    ExtremalTriple,
    purity_spec,
    symmetrization_spec,
)
from equichan.staircases import staircase, sym_dim
from equichan.streaming import (
    ResourceLedger,
    ScheduleStep,
    _absorb_phase,
    _emission_phase,
    _stream_embed_trace_sites,
    _unique_path,
    validate_schedule,
)
from equichan.transforms import permutation_operator

SYMMETRIC_SUPPORT_TOL = 1e-8


@dataclass
class AppResult:
    """Output state, resource ledger and (where defined) a fidelity."""

    output: np.ndarray
    ledger: ResourceLedger
    fidelity: float | None = None

    def __post_init__(self):
        tr = np.trace(self.output)
        assert abs(tr - 1.0) < 1e-10, f"output trace {tr}"
        evals = np.linalg.eigvalsh((self.output + self.output.conj().T) / 2)
        assert evals.min() > -1e-9, "output not positive semidefinite"


def symmetrize(
    rho: np.ndarray,
    m: int,
    d: int,
    mode: str = "exact",
    seed: int = 0,
    trajectories: int = 10_000,
) -> AppResult:
    """Average a state over all permutations of its m tensor factors.

    Runs the streaming schedule of the spec assigning the identity channel
    to every label; equals the average over all m! permutations.
    """
    from equichan.streaming import streamed_apply

    spec = symmetrization_spec(m, d)
    out, ledger = streamed_apply(
        spec, rho, seed=seed, mode=mode, trajectories=trajectories
    )
    return AppResult(out, ledger)


def symmetric_projector(n: int, d: int) -> np.ndarray:
    acc = np.zeros((d**n, d**n))
    for perm in itertools.permutations(range(n)):
        acc += permutation_operator(perm, n, d)
    return acc / factorial(n)


def clone(
    state: np.ndarray,
    m: int,
    n: int,
    d: int,
    reference: np.ndarray | None = None,
) -> AppResult:
    """Optimal symmetric cloning of m copies into n > m approximate copies.

    ``state`` is either a single-qudit pure vector psi (cloned from
    psi^(x m)) or a density matrix on the m-qudit symmetric subspace.
    Inputs with mass outside the symmetric subspace are rejected, because
    the cloning map only preserves trace there.  The fidelity field holds
    tr[(psi psi)^(x n) output] when a pure state is given or passed as
    ``reference``.
    """
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    psi = None
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if state.shape != (d,):
            raise ValueError(f"pure input must be a length-{d} vector")
        psi = state / np.linalg.norm(state)
        rho = np.array([1.0 + 0j])
        for _ in range(m):
            rho = np.kron(rho, np.outer(psi, psi.conj()))
        rho = rho.reshape(d**m, d**m)
    else:
        rho = state
        if rho.shape != (d**m, d**m):
            raise ValueError(f"input shape {rho.shape}, expected {(d**m,) * 2}")
        P = symmetric_projector(m, d)
        off = np.linalg.norm(rho - P @ rho @ P)
        if off > SYMMETRIC_SUPPORT_TOL:
            raise ValueError(
                f"input has mass {off:.2e} outside the symmetric subspace; "
                "the cloning map is only trace preserving on it"
            )
    if reference is not None:
        psi = np.asarray(reference, dtype=complex).reshape(-1)
        psi = psi / np.linalg.norm(psi)

    ledger = ResourceLedger()
    schedule: list[ScheduleStep] = []
    sigma = _absorb_phase(rho, m, d, ledger, schedule)
    lam = staircase(*((m,) + (0,) * (d - 1)))
    mu = staircase(*((n,) + (0,) * (d - 1)))
    # all symmetric-subspace weight sits in the single-row block
    stray = sum(
        float(np.trace(blk).real) for label, blk in sigma.items() if label != lam
    )
    if stray > SYMMETRIC_SUPPORT_TOL:
        raise ValueError(f"non-symmetric weight {stray:.2e} after absorption")
    path = _unique_path(mu, lam, 0, n - m)
    assert path is not None, "single-row removal path must be unique"
    ledger.r_prime = max(ledger.r_prime, 1)
    aux_counter = itertools.count(1)
    out_mu = _stream_embed_trace_sites(
        lam, path, sigma[lam], ledger, schedule, aux_counter
    )
    tau = {mu: out_mu}
    out = _emission_phase(
        tau, n, d, ledger, schedule, mode="exact", seed=0, trajectories=0
    )
    validate_schedule(schedule)
    fidelity = None
    if psi is not None:
        target = np.array([1.0 + 0j])
        for _ in range(n):
            target = np.kron(target, psi)
        fidelity = float(np.real(target.conj() @ out @ target))
    return AppResult(out, ledger, fidelity)


def cloning_fidelity(m: int, n: int, d: int) -> float:
    """The optimal global cloning fidelity: dim sym(m) / dim sym(n)."""
    return sym_dim(m, d) / sym_dim(n, d)


def purity_amplify(
    rho: np.ndarray,
    m: int,
    d: int,
    reference: np.ndarray | None = None,
) -> AppResult:
    """Distill one qudit from m noisy copies by keeping one box per label.

    Implements the first-descent box-removal rule; the channel never
    references the depolarization strength.  When ``reference`` is given the
    fidelity field holds <ref| output |ref>.
    """
    from equichan.streaming import streamed_apply

    if m == 1:
        ledger = ResourceLedger()
        ledger.bump(d)
        ledger.r = ledger.r_prime = 1
        out = rho.astype(complex)
    else:
        spec = purity_spec(m, d)
        out, ledger = streamed_apply(spec, rho)
    fidelity = None
    if reference is not None:
        psi = np.asarray(reference, dtype=complex).reshape(-1)
        psi = psi / np.linalg.norm(psi)
        fidelity = float(np.real(psi.conj() @ out @ psi))
    return AppResult(out, ledger, fidelity)


def depolarized_copies(psi: np.ndarray, alpha: float, m: int, d: int) -> np.ndarray:
    """(1-alpha) psi psi + alpha/d, tensored m times."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    single = (1 - alpha) * np.outer(psi, psi.conj()) + (alpha / d) * np.eye(d)
    rho = np.array([1.0 + 0j])
    for _ in range(m):
        rho = np.kron(rho, single)
    return rho.reshape(d**m, d**m)
