"""Choi machinery and the classification of symmetric channels.

A channel from m to n qudits that commutes with collective SU(d) rotations
and with independent input/output permutations is determined by one
positive multiplicity-space matrix per admissible label triple
(lambda, mu, gamma), with unit trace sum per lambda.  The extremal channels
pin a single triple and a rank-one multiplicity state per input label, and
factor as Schur sampling, an irrep-level channel, and the reverse Schur
sampling.  This module builds all of these as dense objects and checks them
against each other.

Conventions: the Choi matrix of Phi is sum_ij |i><j| (x) Phi(|i><j|), so
its first tensor slot carries the conjugate action on the input space.
Conjugate-transforming coordinates are rotated into canonical realizations
of the dual label with the dual_structure intertwiners.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from equichan.limits import check_dense
from equichan.realize import canonical_realization, dual_structure
from equichan.staircases import (
    Staircase,
    dim_gl_irrep,
    dim_perm_irrep,
    lr_coeff,
    partitions_of,
)
from equichan.transforms import (
    PathTransform,
    general_cg,
    permutation_operator,
    schur_transform,
)
from equichan.verify import haar_unitary

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
TP_TOL = 1e-8


# ---------------------------------------------------------------------------
# channel objects
# ---------------------------------------------------------------------------


class Channel:
    """A completely positive map given by whatever lets us apply it."""

    in_dim: int
    out_dim: int

    def apply(self, rho: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def choi(self) -> np.ndarray:
        """C = sum_ij |i><j| (x) apply(|i><j|)."""
        D = self.in_dim
        C = np.zeros((D * self.out_dim, D * self.out_dim), dtype=complex)
        for i in range(D):
            for j in range(D):
                E = np.zeros((D, D), dtype=complex)
                E[i, j] = 1.0
                out = self.apply(E)
                C[
                    i * self.out_dim : (i + 1) * self.out_dim,
                    j * self.out_dim : (j + 1) * self.out_dim,
                ] = out
        return C


class KrausChannel(Channel):
    def __init__(self, ops: list[np.ndarray], in_dim: int, out_dim: int):
        self.ops = ops
        self.in_dim = in_dim
        self.out_dim = out_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        acc = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for K in self.ops:
            acc += K @ rho @ K.conj().T
        return acc


class ChoiChannel(Channel):
    def __init__(self, choi: np.ndarray, in_dim: int, out_dim: int):
        self.choi_matrix = choi
        self.in_dim = in_dim
        self.out_dim = out_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_choi(self.choi_matrix, rho, self.in_dim, self.out_dim)

    def choi(self) -> np.ndarray:
        return self.choi_matrix


class SandwichChannel(Channel):
    """Phi(A) = scale * V^dag (A (x) 1_aux) V."""

    def __init__(self, V: np.ndarray, aux_dim: int, scale: float):
        self.V = V
        self.aux_dim = aux_dim
        self.scale = scale
        self.in_dim = V.shape[0] // aux_dim
        self.out_dim = V.shape[1]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        big = np.kron(rho, np.eye(self.aux_dim))
        return self.scale * (self.V.conj().T @ big @ self.V)


class CompositeChannel(Channel):
    def __init__(self, stages: list[Channel]):
        for a, b in zip(stages, stages[1:]):
            if a.out_dim != b.in_dim:
                raise ValueError("stage dimensions do not chain")
        self.stages = stages
        self.in_dim = stages[0].in_dim
        self.out_dim = stages[-1].out_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        for stage in self.stages:
            rho = stage.apply(rho)
        return rho


# ---------------------------------------------------------------------------
# Choi matrices
# ---------------------------------------------------------------------------


def apply_choi(C: np.ndarray, rho: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    """Phi(rho) = tr_in[C (rho^T (x) 1_out)]."""
    if rho.shape != (in_dim, in_dim):
        raise ValueError(f"state has shape {rho.shape}, expected {(in_dim,) * 2}")
    C4 = C.reshape(in_dim, out_dim, in_dim, out_dim)
    return np.einsum("kalb,kl->ab", C4, rho)


@dataclass
class ChoiMatrix:
    """Dense Choi matrix with its channel dimensions."""

    matrix: np.ndarray
    m: int
    n: int
    d: int

    def __post_init__(self):
        dim = self.d**self.m * self.d**self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape}, expected {(dim, dim)}")

    @property
    def in_dim(self) -> int:
        return self.d**self.m

    @property
    def out_dim(self) -> int:
        return self.d**self.n

    def validate(self, psd_tol: float = PSD_TOL, tp_tol: float = TP_TOL) -> None:
        M = self.matrix
        assert np.linalg.norm(M - M.conj().T) < HERMITIAN_TOL, "not Hermitian"
        evals = np.linalg.eigvalsh((M + M.conj().T) / 2)
        assert evals.min() > -psd_tol, f"not PSD: min eigenvalue {evals.min():.2e}"
        C4 = M.reshape(self.in_dim, self.out_dim, self.in_dim, self.out_dim)
        red = np.einsum("iaja->ij", C4)
        assert (
            np.linalg.norm(red - np.eye(self.in_dim)) < tp_tol
        ), "not trace preserving"

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_choi(self.matrix, rho, self.in_dim, self.out_dim)

    @classmethod
    def from_channel(cls, ch: Channel, m: int, n: int, d: int) -> "ChoiMatrix":
        return cls(ch.choi(), m, n, d)


def apply_channel(choi: ChoiMatrix, rho: np.ndarray) -> np.ndarray:
    """Apply a channel given by its Choi matrix to a state."""
    return choi.apply(rho)


# ---------------------------------------------------------------------------
# symmetry certification
# ---------------------------------------------------------------------------


@dataclass
class SymmetryReport:
    unitary_residuals: list[float]
    permutation_residuals: list[float]

    @property
    def max_unitary_residual(self) -> float:
        return max(self.unitary_residuals, default=0.0)

    @property
    def max_permutation_residual(self) -> float:
        return max(self.permutation_residuals, default=0.0)

    def passed(self, tol: float) -> bool:
        return (
            self.max_unitary_residual <= tol
            and self.max_permutation_residual <= tol
        )


def check_symmetries(
    choi: ChoiMatrix,
    trials: int = 20,
    tol: float = 1e-8,
    rng: np.random.Generator | None = None,
) -> SymmetryReport:
    """Residuals of the Choi commuting with conj U^(x m) (x) U^(x n) for Haar
    unitaries and with all adjacent input/output transpositions."""
    rng = np.random.default_rng(7) if rng is None else rng
    m, n, d = choi.m, choi.n, choi.d
    C = choi.matrix
    unitary = []
    for _ in range(trials):
        U = haar_unitary(d, rng)
        big = np.eye(1, dtype=complex)
        for _ in range(m):
            big = np.kron(big, U.conj())
        for _ in range(n):
            big = np.kron(big, U)
        unitary.append(float(np.linalg.norm(big @ C - C @ big)))
    perm = []
    for a in range(m - 1):
        sigma = list(range(m))
        sigma[a], sigma[a + 1] = sigma[a + 1], sigma[a]
        P = np.kron(permutation_operator(tuple(sigma), m, d), np.eye(d**n))
        perm.append(float(np.linalg.norm(P @ C - C @ P)))
    for a in range(n - 1):
        tau = list(range(n))
        tau[a], tau[a + 1] = tau[a + 1], tau[a]
        P = np.kron(np.eye(d**m), permutation_operator(tuple(tau), n, d))
        perm.append(float(np.linalg.norm(P @ C - C @ P)))
    return SymmetryReport(unitary, perm)


# ---------------------------------------------------------------------------
# extremal specifications
# ---------------------------------------------------------------------------


@dataclass
class ExtremalTriple:
    mu: Staircase
    gamma: Staircase
    psi: np.ndarray

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex).reshape(-1)


@dataclass
class ExtremalSpec:
    """One extremal channel: a triple (mu, gamma, psi) per input label."""

    m: int
    n: int
    d: int
    assignments: dict[Staircase, ExtremalTriple]

    def __post_init__(self):
        labels = partitions_of(self.m, self.d)
        if set(self.assignments) != set(labels):
            raise ValueError("assignments must cover every input label exactly once")
        for lam, t in self.assignments.items():
            if not t.mu.is_partition or t.mu.size != self.n or t.mu.d != self.d:
                raise ValueError(f"mu for {lam} is not a partition of n: {t.mu}")
            c = lr_coeff(lam.dual(), t.mu, t.gamma)
            if c < 1:
                raise ValueError(f"gamma {t.gamma} not admissible for {lam} -> {t.mu}")
            if t.psi.shape != (c,):
                raise ValueError(
                    f"psi for {lam} has length {t.psi.shape[0]}, multiplicity is {c}"
                )
            if abs(np.linalg.norm(t.psi) - 1.0) > 1e-10:
                raise ValueError(f"psi for {lam} is not normalized")

    def triple(self, lam: Staircase) -> ExtremalTriple:
        return self.assignments[lam]


def enumerate_extremal_triples(
    m: int, n: int, d: int
) -> list[tuple[Staircase, Staircase, Staircase, int]]:
    """All admissible (lambda, mu, gamma) with the multiplicity dimension."""
    out = []
    for lam in partitions_of(m, d):
        lam_dual = lam.dual()
        for mu in partitions_of(n, d):
            shift = lam.entries[0]
            lam_v = lam_dual.shift(shift)  # partition with the same label
            total = lam_v.size + mu.size
            for gp in partitions_of(total, d):
                c = lr_coeff(lam_v, mu, gp)
                if c >= 1:
                    out.append((lam, mu, gp.shift(-shift), c))
    return out


def symmetrization_spec(m: int, d: int) -> ExtremalSpec:
    """The spec of the permutation-averaging channel: identity on every label."""
    zero = Staircase((0,) * d)
    assignments = {
        lam: ExtremalTriple(lam, zero, np.ones(1)) for lam in partitions_of(m, d)
    }
    return ExtremalSpec(m, m, d, assignments)


def gamma_min(lam: Staircase) -> Staircase:
    """Remove a box from the first strictly descending row of a partition."""
    if not lam.is_partition or lam.size == 0:
        raise ValueError("need a nonempty partition")
    e = lam.entries
    for i in range(lam.d):
        nxt = e[i + 1] if i + 1 < lam.d else 0
        if e[i] > nxt:
            return lam.bump(i, -1)
    raise AssertionError("unreachable")


def purity_spec(m: int, d: int) -> ExtremalSpec:
    """Spec of the purity amplification channel: keep one box per label."""
    from equichan.staircases import box_label

    box = box_label(d)
    assignments = {}
    for lam in partitions_of(m, d):
        assignments[lam] = ExtremalTriple(box, gamma_min(lam).dual(), np.ones(1))
    return ExtremalSpec(m, 1, d, assignments)


# ---------------------------------------------------------------------------
# classification isometry and extremal Choi matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassBlock:
    lam: Staircase
    mu: Staircase
    gamma: Staircase
    offset: int
    p_lam: int
    p_mu: int
    mult: int
    q_gamma: int

    @property
    def size(self) -> int:
        return self.p_lam * self.p_mu * self.mult * self.q_gamma


@dataclass
class ClassificationIsometry:
    """The unitary bringing every symmetric Choi matrix to block form.

    Rows are grouped per (lam, mu, gamma) with index nesting
    (p_lam, p_mu, mult, q_gamma).
    """

    m: int
    n: int
    d: int
    matrix: np.ndarray
    blocks: list[ClassBlock]

    def block(self, lam: Staircase, mu: Staircase, gamma: Staircase) -> ClassBlock:
        for b in self.blocks:
            if (b.lam, b.mu, b.gamma) == (lam, mu, gamma):
                return b
        raise KeyError(f"no block ({lam}, {mu}, {gamma})")

    def block_rows(self, b: ClassBlock) -> np.ndarray:
        return self.matrix[b.offset : b.offset + b.size, :]


_CLASS_ISO_CACHE: dict[tuple[int, int, int], ClassificationIsometry] = {}


def classification_isometry(m: int, n: int, d: int) -> ClassificationIsometry:
    """Conjugated Schur transforms on both legs followed by a CG transform.

    Maps the Choi space (conj C^d)^(x m) (x) (C^d)^(x n) onto
    sum_(lam,mu,gamma) P_lam (x) P_mu (x) C^mult (x) Q_gamma coordinates.
    """
    key = (m, n, d)
    if key in _CLASS_ISO_CACHE:
        return _CLASS_ISO_CACHE[key]
    check_dense(d ** (m + n))
    Sm = schur_transform(m, 0, d)
    Sn = schur_transform(n, 0, d)
    A = np.kron(np.conj(Sm.matrix), Sn.matrix)
    D = d ** (m + n)
    dn = d**n
    out = np.zeros((D, D), dtype=complex)
    blocks: list[ClassBlock] = []
    offset = 0
    for sl in Sm.sectors:
        lam = sl.label
        q_lam = sl.q_dim
        Zl = dual_structure(lam)  # canonical(dual lam) -> conj-of-canonical(lam)
        for sn_ in Sn.sectors:
            mu = sn_.label
            q_mu = sn_.q_dim
            cg = general_cg(
                canonical_realization(lam.dual()), canonical_realization(mu)
            )
            # convert the conjugate-lambda coordinates to canonical dual-lambda
            G = cg.matrix @ np.kron(Zl.conj().T, np.eye(q_mu))
            gammas = cg.labels()
            sector_rows: dict[Staircase, list[np.ndarray]] = {g: [] for g in gammas}
            for pl in range(sl.p_dim):
                for pm in range(sn_.p_dim):
                    rows_idx = []
                    for a in range(q_lam):
                        base = (sl.offset + pl * q_lam + a) * dn
                        rows_idx.extend(
                            base + sn_.offset + pm * q_mu + b for b in range(q_mu)
                        )
                    sub = A[rows_idx, :]
                    transformed = G @ sub
                    for g in gammas:
                        qg = dim_gl_irrep(g)
                        mult = cg.multiplicity(g)
                        chunk = np.concatenate(
                            [
                                transformed[
                                    cg.block(g, j).offset : cg.block(g, j).offset + qg, :
                                ]
                                for j in range(mult)
                            ],
                            axis=0,
                        )
                        sector_rows[g].append(chunk)
            for g in gammas:
                qg = dim_gl_irrep(g)
                mult = cg.multiplicity(g)
                size = sl.p_dim * sn_.p_dim * mult * qg
                stacked = np.concatenate(sector_rows[g], axis=0)
                out[offset : offset + size, :] = stacked
                blocks.append(
                    ClassBlock(lam, mu, g, offset, sl.p_dim, sn_.p_dim, mult, qg)
                )
                offset += size
    assert offset == D
    iso = ClassificationIsometry(m, n, d, out, blocks)
    resid = np.linalg.norm(out @ out.conj().T - np.eye(D))
    assert resid < 1e-9, f"classification isometry not unitary: {resid:.2e}"
    _CLASS_ISO_CACHE[key] = iso
    return iso


def extremal_choi(spec: ExtremalSpec) -> ChoiMatrix:
    """Choi matrix of the extremal channel selected by the spec."""
    iso = classification_isometry(spec.m, spec.n, spec.d)
    D = spec.d ** (spec.m + spec.n)
    C = np.zeros((D, D), dtype=complex)
    for lam, t in spec.assignments.items():
        b = iso.block(lam, t.mu, t.gamma)
        R = iso.block_rows(b)
        p_mu = dim_perm_irrep(t.mu)
        scale = (dim_gl_irrep(lam) / dim_gl_irrep(t.gamma)) / p_mu
        psi_proj = np.outer(t.psi, t.psi.conj())
        W = scale * np.kron(
            np.eye(b.p_lam * b.p_mu), np.kron(psi_proj, np.eye(b.q_gamma))
        )
        C += R.conj().T @ W @ R
    return ChoiMatrix(C, spec.m, spec.n, spec.d)


class NotSymmetricError(ValueError):
    """Raised when a Choi matrix is not in the symmetric channel set."""


def block_decompose_choi(
    choi: ChoiMatrix, tol: float = 1e-8
) -> dict[tuple[Staircase, Staircase, Staircase], np.ndarray]:
    """Extract the multiplicity-space matrices of a symmetric Choi matrix.

    Conjugates by the classification isometry, reads off one matrix per
    (gamma, dual lambda, mu) by partial trace over the identity factors, and
    verifies that rebuilding from the prescribed block structure reproduces
    the input; if not, the channel is not in the symmetric set.
    """
    iso = classification_isometry(choi.m, choi.n, choi.d)
    Dmat = iso.matrix @ choi.matrix @ iso.matrix.conj().T
    out: dict[tuple[Staircase, Staircase, Staircase], np.ndarray] = {}
    rebuilt = np.zeros_like(Dmat)
    for b in iso.blocks:
        sl = slice(b.offset, b.offset + b.size)
        blk = Dmat[sl, sl]
        shape = (b.p_lam * b.p_mu, b.mult, b.q_gamma)
        six = blk.reshape(*shape, *shape)
        q_lam = dim_gl_irrep(b.lam)
        p_lam = b.p_lam
        M = np.einsum("paqpbq->ab", six) / (p_lam * q_lam)
        out[(b.gamma, b.lam.dual(), b.mu)] = M
        scale = (q_lam / b.q_gamma) / dim_perm_irrep(b.mu)
        rec = scale * np.einsum(
            "pq,ab,cd->pacqbd",
            np.eye(b.p_lam * b.p_mu),
            M,
            np.eye(b.q_gamma),
        ).reshape(b.size, b.size)
        rebuilt[sl, sl] = rec
    resid = np.linalg.norm(Dmat - rebuilt)
    if resid > tol:
        raise NotSymmetricError(
            f"off-block or non-isotropic mass {resid:.2e} exceeds {tol:.2e}"
        )
    return out


# ---------------------------------------------------------------------------
# Schur sampling channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SumBlock:
    label: Staircase
    offset: int
    size: int


def direct_sum_layout(transform: PathTransform) -> list[SumBlock]:
    blocks = []
    offset = 0
    for s in transform.sectors:
        blocks.append(SumBlock(s.label, offset, s.q_dim))
        offset += s.q_dim
    return blocks


class UssChannel(KrausChannel):
    """Schur transform, measure the label, discard the path register.

    Output lives on the direct sum of the irrep spaces, flattened with an
    explicit layout.
    """

    def __init__(self, m: int, n: int, d: int):
        S = schur_transform(m, n, d)
        layout = direct_sum_layout(S)
        out_dim = sum(b.size for b in layout)
        ops = []
        for s, blk in zip(S.sectors, layout):
            for i in range(s.p_dim):
                K = np.zeros((out_dim, S.dim))
                K[blk.offset : blk.offset + blk.size, :] = S.path_rows(s.label, i)
                ops.append(K)
        super().__init__(ops, S.dim, out_dim)
        self.m, self.n, self.d = m, n, d
        self.transform = S
        self.layout = layout

    def adjoint_apply(self, A: np.ndarray) -> np.ndarray:
        """True adjoint with respect to the trace inner product."""
        acc = np.zeros((self.in_dim, self.in_dim), dtype=complex)
        for K in self.ops:
            acc += K.conj().T @ A @ K
        return acc


class DualUssChannel(KrausChannel):
    """Append the maximally mixed path register and undo the Schur transform.

    With weighting="mixed" (the default) each sector is weighted by
    1/dim(P); this is the trace-preserving reverse channel appearing in the
    factorization.  weighting="adjoint" drops the factor and gives the exact
    trace-inner-product adjoint of the sampling channel, which is unital
    but not trace preserving when some path space has dimension > 1.
    """

    def __init__(self, m: int, n: int, d: int, weighting: str = "mixed"):
        if weighting not in ("mixed", "adjoint"):
            raise ValueError(f"unknown weighting {weighting!r}")
        S = schur_transform(m, n, d)
        layout = direct_sum_layout(S)
        in_dim = sum(b.size for b in layout)
        ops = []
        for s, blk in zip(S.sectors, layout):
            w = 1.0 / s.p_dim if weighting == "mixed" else 1.0
            for i in range(s.p_dim):
                K = np.zeros((S.dim, in_dim))
                K[:, blk.offset : blk.offset + blk.size] = (
                    np.sqrt(w) * S.path_rows(s.label, i).conj().T
                )
                ops.append(K)
        super().__init__(ops, in_dim, S.dim)
        self.m, self.n, self.d = m, n, d
        self.transform = S
        self.layout = layout
        self.weighting = weighting


def uss_channel(m: int, n: int, d: int) -> UssChannel:
    return UssChannel(m, n, d)


def dual_uss_channel(m: int, n: int, d: int, weighting: str = "mixed") -> DualUssChannel:
    return DualUssChannel(m, n, d, weighting)


# ---------------------------------------------------------------------------
# irrep-level channels
# ---------------------------------------------------------------------------


def _cg_restriction_tensor(lam: Staircase, mu: Staircase, gamma: Staircase):
    """The CG transform restricted to the gamma blocks, as a 4-tensor.

    Returns K0 with K0[x, y, g, a] the matrix element of the restriction of
    the inverse CG transform on Q_duallam (x) Q_mu at (x, y; g, mult a).
    """
    A = canonical_realization(lam.dual())
    B = canonical_realization(mu)
    cg = general_cg(A, B)
    c = cg.multiplicity(gamma)
    if c == 0:
        raise ValueError(f"gamma {gamma} does not occur in {lam.dual()} (x) {mu}")
    qg = dim_gl_irrep(gamma)
    K0 = np.zeros((A.dim, B.dim, qg, c), dtype=complex)
    for a in range(c):
        rows = cg.block_rows(gamma, a)  # (qg, qlam*qmu)
        K0[:, :, :, a] = rows.conj().T.reshape(A.dim, B.dim, qg)
    return K0, c, qg, A.dim, B.dim


def irrep_channel(
    lam: Staircase,
    mu: Staircase,
    gamma: Staircase,
    psi: np.ndarray | None = None,
    form: str = "embed-trace",
) -> Channel:
    """The extremal unitary-equivariant channel from Q_lam to Q_mu.

    Three equivalent computations: "choi" builds the Choi matrix from the
    CG projector onto the gamma block; "embed-trace" embeds Q_lam into
    Q_mu (x) Q_dualgamma and traces out the second factor; "sandwich"
    conjugates by the embedding of Q_mu into Q_lam (x) Q_gamma with the
    conjugated multiplicity vector.  All agree to numerical precision.
    """
    c = lr_coeff(lam.dual(), mu, gamma)
    if c < 1:
        raise ValueError(f"gamma {gamma} not admissible for {lam} -> {mu}")
    if psi is None:
        psi = np.zeros(c)
        psi[0] = 1.0
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (c,):
        raise ValueError(f"psi must have length {c}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    K0, c, qg, q_lam, q_mu = _cg_restriction_tensor(lam, mu, gamma)
    scale_lg = dim_gl_irrep(lam) / dim_gl_irrep(gamma)

    if form == "choi":
        Zl = dual_structure(lam)
        R = K0.reshape(q_lam * q_mu, qg * c)  # inverse CG restricted, as a matrix
        psi_proj = np.kron(np.eye(qg), np.outer(psi, psi.conj()))
        Ccg = scale_lg * (R @ psi_proj @ R.conj().T)
        conv = np.kron(Zl.conj().T, np.eye(q_mu))
        C = conv.conj().T @ Ccg @ conv
        return ChoiChannel(C, q_lam, q_mu)

    if form == "embed-trace":
        Zl = dual_structure(lam)
        Zg = dual_structure(gamma)
        # K0 slots: (dual-lam ket, mu ket, conj gamma, mult); rotate slot 1
        # to a conjugate-lam slot and slot 3 to a canonical dual-gamma ket.
        Kp = np.einsum("zx,xyga,hg->zyha", Zl, K0, Zg.conj().T)
        iota = np.sqrt(scale_lg) * np.einsum("zyha,a->yhz", Kp, psi).reshape(
            q_mu * qg, q_lam
        )
        resid = np.linalg.norm(iota.conj().T @ iota - np.eye(q_lam))
        assert resid < 1e-8, f"embedding not isometric: {resid:.2e}"
        ops = [iota.reshape(q_mu, qg, q_lam)[:, h, :] for h in range(qg)]
        return KrausChannel(ops, q_lam, q_mu)

    if form == "sandwich":
        Zlbar = dual_structure(lam.dual())
        K3 = np.einsum("zx,xyga->zyga", Zlbar.conj().T, K0.conj())
        iota3 = np.sqrt(q_mu / qg) * np.einsum("zyga,a->zgy", K3, psi.conj()).reshape(
            q_lam * qg, q_mu
        )
        resid = np.linalg.norm(iota3.conj().T @ iota3 - np.eye(q_mu))
        assert resid < 1e-8, f"sandwich embedding not isometric: {resid:.2e}"
        return SandwichChannel(iota3, qg, dim_gl_irrep(lam) / dim_gl_irrep(mu))

    raise ValueError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# the factored channel
# ---------------------------------------------------------------------------


class BlockDiagonalChannel(Channel):
    """Apply a per-label channel between two direct-sum layouts."""

    def __init__(
        self,
        in_layout: list[SumBlock],
        out_layout: list[SumBlock],
        routes: list[tuple[SumBlock, SumBlock, Channel]],
    ):
        self.in_dim = sum(b.size for b in in_layout)
        self.out_dim = sum(b.size for b in out_layout)
        self.routes = routes

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for src, dst, ch in self.routes:
            blk = rho[src.offset : src.offset + src.size, src.offset : src.offset + src.size]
            res = ch.apply(blk)
            out[dst.offset : dst.offset + dst.size, dst.offset : dst.offset + dst.size] += res
        return out


def factored_channel(spec: ExtremalSpec) -> ChoiMatrix:
    """Compose reverse sampling, irrep channels and sampling; return the Choi.

    This is the executable form of the factorization theorem: the result
    agrees with extremal_choi(spec) to numerical precision.
    """
    uss = uss_channel(spec.m, 0, spec.d)
    dual = dual_uss_channel(spec.n, 0, spec.d)
    in_layout = uss.layout
    out_layout = dual.layout
    routes = []
    for blk in in_layout:
        t = spec.triple(blk.label)
        dst = next(b for b in out_layout if b.label == t.mu)
        ch = irrep_channel(blk.label, t.mu, t.gamma, t.psi, form="embed-trace")
        routes.append((blk, dst, ch))
    middle = BlockDiagonalChannel(in_layout, out_layout, routes)
    composite = CompositeChannel([uss, middle, dual])
    return ChoiMatrix(composite.choi(), spec.m, spec.n, spec.d)
