"""Schur and Clebsch-Gordan transforms as dense block isometries.

The simple CG transform decomposes (irrep) (x) C^d by spectral projection
of the split Casimir; iterating it over all GT paths yields the (mixed)
Schur transform, whose permutation-register basis is indexed by paths.  The
general CG transform decomposes a product of two arbitrary irreps, locating
each isotypic component through its highest-weight space; the multiplicity
basis is the deterministic orthonormalization of that space.

All block maps land in the canonical realization coordinates of their
label, with the sign of each block fixed by its first sizable entry, so
transforms built along different routes agree exactly and not just up to
convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from equichan.gtpaths import GtPath
from equichan.limits import check_dense
from equichan.realize import (
    CONSTRUCTION_TOL,
    IrrepRealization,
    RANK_TOL,
    _block_columns,
    _extend_step,
    _simple_generators,
    _step_generators,
    _step_targets,
    apply_recipe,
    canonical_realization,
    intertwiner,
    krylov_recipe,
    site_generator,
)
from equichan.staircases import (
    Staircase,
    dim_gl_irrep,
    empty_staircase,
    lr_coeff,
)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Row-major vectorization: vec(M) = sum_ij M_ij |i>(x)|j>."""
    return np.asarray(matrix).reshape(-1)


def unvec(vector: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Inverse of vec for the given (rows, cols)."""
    vector = np.asarray(vector)
    if vector.size != dims[0] * dims[1]:
        raise ValueError(f"cannot reshape length {vector.size} into {dims}")
    return vector.reshape(dims)


def permutation_operator(
    sigma: tuple[int, ...], m: int, d: int, transposed_tail: int = 0
) -> np.ndarray:
    """Permutation of m tensor factors, partially transposed on the last few.

    ``sigma`` is one-line notation on range(m): output site k carries the
    input content of site sigma^{-1}(k).  With transposed_tail = t the
    operator is the partial transpose of the permutation matrix on the last
    t factors.
    """
    if sorted(sigma) != list(range(m)):
        raise ValueError(f"not a permutation of range({m}): {sigma}")
    if not 0 <= transposed_tail <= m:
        raise ValueError("transposed_tail out of range")
    dim = d**m
    idx = np.arange(dim)
    digits = np.stack([(idx // d ** (m - 1 - k)) % d for k in range(m)])
    inv = [0] * m
    for k, v in enumerate(sigma):
        inv[v] = k
    new_idx = sum(digits[inv[k]] * d ** (m - 1 - k) for k in range(m))
    P = np.zeros((dim, dim))
    P[new_idx, idx] = 1.0
    if transposed_tail == 0:
        return P
    head = d ** (m - transposed_tail)
    tail = d**transposed_tail
    P4 = P.reshape(head, tail, head, tail)
    return np.ascontiguousarray(P4.transpose(0, 3, 2, 1)).reshape(dim, dim)


@dataclass(frozen=True)
class Block:
    """One target block of a block isometry."""

    label: Staircase
    mult: int
    offset: int
    size: int


@dataclass
class BlockIsometry:
    """Dense isometry with an indexed block layout on its rows."""

    matrix: np.ndarray
    blocks: list[Block]

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    def labels(self) -> list[Staircase]:
        seen = []
        for b in self.blocks:
            if b.label not in seen:
                seen.append(b.label)
        return seen

    def block(self, label: Staircase, mult: int = 0) -> Block:
        for b in self.blocks:
            if b.label == label and b.mult == mult:
                return b
        raise KeyError(f"no block ({label}, {mult})")

    def block_rows(self, label: Staircase, mult: int = 0) -> np.ndarray:
        b = self.block(label, mult)
        return self.matrix[b.offset : b.offset + b.size, :]

    def multiplicity(self, label: Staircase) -> int:
        return sum(1 for b in self.blocks if b.label == label)

    def validate(self, tol: float = CONSTRUCTION_TOL) -> None:
        got = self.matrix.conj().T @ self.matrix
        assert np.linalg.norm(got - np.eye(self.source_dim)) < tol, "not an isometry"
        covered = sorted((b.offset, b.size) for b in self.blocks)
        pos = 0
        for off, size in covered:
            assert off == pos, "blocks do not tile the rows"
            pos += size
        assert pos == self.target_dim


def _sign_fix(block_map: np.ndarray) -> np.ndarray:
    """Make the first entry of modulus > 1e-8 (row-major) real positive."""
    flat = block_map.reshape(-1)
    lead = np.argmax(np.abs(flat) > 1e-8)
    pivot = flat[lead]
    if abs(pivot) <= 1e-8:
        return block_map
    return block_map * (abs(pivot) / pivot)


_SIMPLE_CG_CACHE: dict[tuple[tuple[int, ...], bool], BlockIsometry] = {}


def simple_cg(nu: IrrepRealization, dual: bool = False) -> BlockIsometry:
    """Decompose Q_nu (x) C^d (or (x) conj C^d) into single-box blocks.

    Blocks are separated by the split Casimir, whose eigenvalues for
    single-box moves are distinct integers, and each block is rotated onto
    the canonical realization of its label by the unique intertwiner.
    Block order follows add_boxes/remove_boxes order.
    """
    key = (nu.label.entries, dual)
    if key in _SIMPLE_CG_CACHE:
        return _SIMPLE_CG_CACHE[key]
    d = nu.d
    q = nu.dim
    _, evals, evecs = _extend_step(nu.generators, d, dual)
    rows = []
    blocks = []
    offset = 0
    for s, eig in _step_targets(nu.label, dual):
        C = _block_columns(evals, evecs, eig)
        qs = dim_gl_irrep(s)
        if C.shape[1] != qs:
            raise RuntimeError(f"Casimir block for {s} has wrong dimension")
        target = canonical_realization(s)
        H = _step_generators(nu.generators, d, dual, C)
        T = intertwiner(H, target.generators, d)
        block_map = _sign_fix(T @ C.conj().T)
        rows.append(block_map)
        blocks.append(Block(s, 0, offset, qs))
        offset += qs
    iso = BlockIsometry(np.concatenate(rows, axis=0), blocks)
    assert iso.target_dim == q * d
    iso.validate()
    _SIMPLE_CG_CACHE[key] = iso
    return iso


@dataclass(frozen=True)
class PathSector:
    """One isotypic sector of an iterated CG transform.

    Rows are path-major: path p of the sector's path list occupies rows
    [offset + p*q_dim, offset + (p+1)*q_dim).
    """

    label: Staircase
    offset: int
    q_dim: int
    paths: tuple[GtPath, ...]

    @property
    def p_dim(self) -> int:
        return len(self.paths)

    @property
    def size(self) -> int:
        return self.p_dim * self.q_dim


@dataclass
class PathTransform:
    """Unitary decomposing Q_mu (x) sites into path (x) irrep sectors."""

    base: Staircase
    flags: tuple[bool, ...]
    matrix: np.ndarray
    sectors: list[PathSector]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def sector(self, label: Staircase) -> PathSector:
        for s in self.sectors:
            if s.label == label:
                return s
        raise KeyError(f"no sector {label}")

    def sector_rows(self, label: Staircase) -> np.ndarray:
        s = self.sector(label)
        return self.matrix[s.offset : s.offset + s.size, :]

    def path_rows(self, label: Staircase, path_index: int) -> np.ndarray:
        s = self.sector(label)
        start = s.offset + path_index * s.q_dim
        return self.matrix[start : start + s.q_dim, :]


_ITERATED_CACHE: dict[tuple[tuple[int, ...], tuple[bool, ...]], PathTransform] = {}


def iterated_cg(mu: Staircase, flags: tuple[bool, ...]) -> PathTransform:
    """Iterate simple (dual) CG transforms over every GT path from mu.

    ``flags`` lists the site kinds in order (False = defining factor,
    True = conjugate factor).  The result is a unitary on
    Q_mu (x) C^d^(x k) (x) conj C^d^(x l) whose rows are grouped by final
    label, path-major within each sector.
    """
    key = (mu.entries, flags)
    if key in _ITERATED_CACHE:
        return _ITERATED_CACHE[key]
    d = mu.d
    q0 = dim_gl_irrep(mu)
    check_dense(q0 * d ** len(flags))
    # running blocks: (path steps, current label, row offset, q)
    U = np.eye(q0)
    running: list[tuple[tuple[Staircase, ...], Staircase, int, int]] = [
        ((mu,), mu, 0, q0)
    ]
    for t, dual in enumerate(flags):
        dim_new = U.shape[0] * d
        Uex = np.kron(U, np.eye(d))
        newU = np.zeros((dim_new, dim_new))
        new_running = []
        offset = 0
        for steps, label, off, q in running:
            cg = simple_cg(canonical_realization(label), dual)
            chunk = cg.matrix @ Uex[off * d : off * d + q * d, :]
            newU[offset : offset + q * d, :] = chunk
            for b in cg.blocks:
                new_running.append(
                    (steps + (b.label,), b.label, offset + b.offset, b.size)
                )
            offset += q * d
        U = newU
        running = new_running
    k = sum(1 for f in flags if not f)
    l = len(flags) - k
    by_label: dict[Staircase, list[tuple[tuple[Staircase, ...], int, int]]] = {}
    for steps, label, off, q in running:
        by_label.setdefault(label, []).append((steps, off, q))
    order = sorted(by_label, key=lambda s: s.entries, reverse=True)
    final = np.zeros_like(U)
    sectors = []
    offset = 0
    for label in order:
        entries = by_label[label]
        qdim = entries[0][2]
        paths = []
        sector_offset = offset
        for steps, off, q in entries:  # DFS order = lexicographic path order
            final[offset : offset + q, :] = U[off : off + q, :]
            paths.append(GtPath(steps, k, l))
            offset += q
        sectors.append(PathSector(label, sector_offset, qdim, tuple(paths)))
    out = PathTransform(mu, flags, final, sectors)
    _ITERATED_CACHE[key] = out
    return out


def schur_transform(m: int, n: int, d: int) -> PathTransform:
    """Mixed Schur transform on m defining and n conjugate factors of C^d.

    Unitary with block layout (paths to gamma) (x) Q_gamma over all
    staircases gamma reachable with m additions then n removals; built by
    iterating the simple CG transform m times and its dual n times.
    """
    if m < 0 or n < 0 or d < 1:
        raise ValueError("need m, n >= 0 and d >= 1")
    check_dense(d ** (m + n))
    return iterated_cg(empty_staircase(d), (False,) * m + (True,) * n)


# ---------------------------------------------------------------------------
# general Clebsch-Gordan transform
# ---------------------------------------------------------------------------


def _product_generators(a: IrrepRealization, b: IrrepRealization) -> np.ndarray:
    d = a.d
    qa, qb = a.dim, b.dim
    out = np.zeros((d, d, qa * qb, qa * qb))
    for i in range(d):
        for j in range(d):
            out[i, j] = np.kron(a.generators[i, j], np.eye(qb)) + np.kron(
                np.eye(qa), b.generators[i, j]
            )
    return out


def _highest_weight_space(
    gens: np.ndarray, weight_index: np.ndarray, wt: tuple[int, ...], d: int
) -> np.ndarray:
    """Orthonormal basis (columns) of the highest-weight space of weight wt.

    Deterministic: Gram-Schmidt of the null-space projections of the weight
    block's standard basis vectors, in index order.
    """
    S = np.nonzero([tuple(w) == wt for w in weight_index])[0]
    if len(S) == 0:
        return np.zeros((gens.shape[2], 0))
    raisers = [gens[i, i + 1][:, S] for i in range(d - 1)]
    M = np.concatenate(raisers, axis=0) if raisers else np.zeros((0, len(S)))
    if M.shape[0] == 0:
        null = np.eye(len(S))
    else:
        u, s, vh = np.linalg.svd(M)
        rank = int(np.sum(s > RANK_TOL * max(1.0, s[0] if len(s) else 1.0)))
        null = vh[rank:].conj().T  # (|S|, c)
    c = null.shape[1]
    if c == 0:
        return np.zeros((gens.shape[2], 0))
    P = null @ null.conj().T
    cols = []
    for kpos in range(len(S)):
        u_vec = P[:, kpos].copy()
        for col in cols:
            u_vec -= col * (col.conj() @ u_vec)
        nrm = np.linalg.norm(u_vec)
        if nrm > RANK_TOL:
            cols.append(u_vec / nrm)
        if len(cols) == c:
            break
    assert len(cols) == c
    out = np.zeros((gens.shape[2], c))
    block = np.stack(cols, axis=1)
    out[S, :] = block
    return out


_GENERAL_CG_CACHE: dict[tuple[tuple[int, ...], tuple[int, ...]], BlockIsometry] = {}


def general_cg(a: IrrepRealization, b: IrrepRealization) -> BlockIsometry:
    """Decompose Q_a (x) Q_b into irreps with multiplicity.

    Each isotypic component is located through its highest-weight space;
    copy j of label gamma is spanned by applying one shared lowering recipe
    to the j-th canonical highest-weight vector, so the multiplicity slots
    of all copies correspond exactly.  Block dimensions are checked against
    the Littlewood-Richardson coefficients.
    """
    if a.d != b.d:
        raise ValueError("realizations live over different d")
    key = (a.label.entries, b.label.entries)
    if key in _GENERAL_CG_CACHE:
        return _GENERAL_CG_CACHE[key]
    d = a.d
    Q = a.dim * b.dim
    gens = _product_generators(a, b)
    weight_index = [
        tuple(a.weights[u] + b.weights[v]) for u in range(a.dim) for v in range(b.dim)
    ]
    dominant = sorted(
        {w for w in weight_index if all(x >= y for x, y in zip(w, w[1:]))},
        reverse=True,
    )
    rows = []
    blocks = []
    offset = 0
    for wt in dominant:
        hw = _highest_weight_space(gens, weight_index, wt, d)
        c = hw.shape[1]
        label = Staircase(wt)
        expected = lr_coeff(a.label, b.label, label)
        if c != expected:
            raise RuntimeError(
                f"multiplicity mismatch for {label}: highest-weight space has "
                f"dim {c}, LR coefficient is {expected}"
            )
        if c == 0:
            continue
        qdim = dim_gl_irrep(label)
        target = canonical_realization(label)
        recipe, W = krylov_recipe(gens, hw[:, 0], qdim, d)
        B0 = apply_recipe(gens, hw[:, 0], recipe) @ W
        H = np.einsum("ab,ijbc,cd->ijad", B0.conj().T, gens, B0)
        T = intertwiner(H, target.generators, d)
        first_map = T @ B0.conj().T
        flat = first_map.reshape(-1)
        lead = np.argmax(np.abs(flat) > 1e-8)
        pivot = flat[lead]
        T = T * (abs(pivot) / pivot)
        for j in range(c):
            Bj = B0 if j == 0 else apply_recipe(gens, hw[:, j], recipe) @ W
            assert (
                np.linalg.norm(Bj.conj().T @ Bj - np.eye(qdim)) < 1e-9
            ), "copy basis failed to mirror"
            rows.append(T @ Bj.conj().T)
            blocks.append(Block(label, j, offset, qdim))
            offset += qdim
    iso = BlockIsometry(np.concatenate(rows, axis=0), blocks)
    if iso.target_dim != Q:
        raise RuntimeError("isotypic blocks do not exhaust the product space")
    iso.validate()
    _GENERAL_CG_CACHE[key] = iso
    return iso
