"""Concrete realizations of SU(d) irreps inside mixed tensor spaces.

An irrep labelled by a staircase gamma is realized as an invariant subspace
of (C^d)^(x a) (x) (conj C^d)^(x b), where a and b count the positive and
negative boxes of gamma.  The subspace is grown one tensor factor at a time
along a fixed path of staircases: at each step the split Casimir
Omega = sum_ij E_ij (x) E_ji separates the single-box blocks, because its
eigenvalue on a block is the content of the added box (or minus content
minus d for a removed one) and those are pairwise distinct integers.

The gl(d) generators E_ij act on C^d as matrix units, on the conjugate
factor as -E_ji, and on tensor products by the Leibniz rule.  All matrices
in this module are real; complex numbers appear only downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from equichan.staircases import (
    Staircase,
    add_boxes,
    dim_gl_irrep,
    empty_staircase,
    remove_boxes,
)

CONSTRUCTION_TOL = 1e-10
RANK_TOL = 1e-8


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    out = np.zeros((d, d))
    out[i, j] = 1.0
    return out


def site_generator(d: int, i: int, j: int, dual: bool) -> np.ndarray:
    """Action of E_ij on a single defining (or conjugate defining) factor."""
    if dual:
        return -matrix_unit(d, j, i)
    return matrix_unit(d, i, j)


def ambient_generator(d: int, i: int, j: int, factors: tuple[bool, ...]) -> np.ndarray:
    """E_ij on the full tensor space with the given dual flags, by Leibniz."""
    dim = d ** len(factors)
    out = np.zeros((dim, dim))
    for pos, dual in enumerate(factors):
        left = d**pos
        right = d ** (len(factors) - pos - 1)
        op = site_generator(d, i, j, dual)
        out += np.kron(np.kron(np.eye(left), op), np.eye(right))
    return out


def ambient_weights(d: int, factors: tuple[bool, ...]) -> np.ndarray:
    """Integer weight vector of every product-basis index, shape (d^#factors, d)."""
    nfac = len(factors)
    dim = d**nfac
    out = np.zeros((dim, d), dtype=int)
    idx = np.arange(dim)
    for pos, dual in enumerate(factors):
        digit = (idx // d ** (nfac - pos - 1)) % d
        sign = -1 if dual else 1
        for value in range(d):
            out[digit == value, value] += sign
    return out


@dataclass(frozen=True)
class IrrepRealization:
    """An SU(d) irrep realized as an invariant subspace of a tensor space.

    ``embedding`` is an isometry from the abstract irrep space (dimension q)
    into the tensor space; ``generators`` holds the d*d matrices of E_ij in
    the realized basis, shape (d, d, q, q); ``weights`` the integer weight of
    each basis vector.  The basis diagonalizes all E_ii, is real, and is
    ordered by weight, lexicographically descending, highest weight first.
    """

    label: Staircase
    factors: tuple[bool, ...]
    embedding: np.ndarray
    generators: np.ndarray
    weights: np.ndarray

    @property
    def d(self) -> int:
        return self.label.d

    @property
    def dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.embedding.shape[0]

    def generator(self, i: int, j: int) -> np.ndarray:
        return self.generators[i, j]

    def group_element(self, U: np.ndarray) -> np.ndarray:
        """Image of U in SU(d) under the realized representation."""
        from scipy.linalg import expm, logm

        X = logm(U)
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.d):
            for j in range(self.d):
                acc += X[i, j] * self.generators[i, j]
        return expm(acc)

    def validate(self, tol: float = CONSTRUCTION_TOL) -> None:
        V = self.embedding
        q = self.dim
        assert np.linalg.norm(V.conj().T @ V - np.eye(q)) < tol, "not an isometry"
        d = self.d
        G = self.generators
        for i in range(d):
            offdiag = G[i, i] - np.diag(np.diag(G[i, i]))
            assert np.linalg.norm(offdiag) < tol, "Cartan not diagonal"
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        comm = G[i, j] @ G[k, l] - G[k, l] @ G[i, j]
                        expect = (k == j) * G[i, l] - (i == l) * G[k, j]
                        assert np.linalg.norm(comm - expect) < tol, "bad commutator"


def _restricted_casimir(gens: np.ndarray, d: int, dual: bool) -> np.ndarray:
    """Split Casimir on (current irrep) (x) C^d in restricted coordinates."""
    q = gens.shape[2]
    omega = np.zeros((q * d, q * d))
    for i in range(d):
        for j in range(d):
            omega += np.kron(gens[i, j], site_generator(d, j, i, dual))
    return omega


def _step_targets(nu: Staircase, dual: bool) -> list[tuple[Staircase, int]]:
    """Single-box moves from nu with their split-Casimir eigenvalues.

    Adding a box in row r (0-based) has eigenvalue nu_r - r (the content of
    the new box); removing one has eigenvalue -(nu_r - 1 - r) - d.
    """
    out = []
    if not dual:
        for s in add_boxes(nu):
            r = next(i for i in range(nu.d) if s.entries[i] != nu.entries[i])
            out.append((s, nu.entries[r] - r))
    else:
        for s in remove_boxes(nu):
            r = next(i for i in range(nu.d) if s.entries[i] != nu.entries[i])
            out.append((s, -(nu.entries[r] - 1 - r) - nu.d))
    eigs = [e for _, e in out]
    assert len(set(eigs)) == len(eigs)
    assert all(abs(a - b) >= 1 for a in eigs for b in eigs if a != b)
    return out


def _extend_step(
    gens: np.ndarray, d: int, dual: bool
) -> tuple[np.ndarray, np.ndarray, list[tuple[Staircase, np.ndarray]]]:
    """Eigendecompose the split Casimir once; callers slice out blocks."""
    omega = _restricted_casimir(gens, d, dual)
    evals, evecs = np.linalg.eigh(omega)
    return omega, evals, evecs


def _block_columns(evals: np.ndarray, evecs: np.ndarray, target: int) -> np.ndarray:
    cols = np.abs(evals - target) < 0.25
    return evecs[:, cols]


def _step_generators(gens: np.ndarray, d: int, dual: bool, C: np.ndarray) -> np.ndarray:
    """Generators restricted to the selected block of (irrep) (x) C^d."""
    q = gens.shape[2]
    qnew = C.shape[1]
    out = np.zeros((d, d, qnew, qnew))
    for i in range(d):
        for j in range(d):
            big = np.kron(gens[i, j], np.eye(d)) + np.kron(
                np.eye(q), site_generator(d, i, j, dual)
            )
            out[i, j] = C.T @ big @ C
    return out


def canonical_path(gamma: Staircase) -> list[Staircase]:
    """Deterministic GT path from the empty staircase to gamma.

    Boxes of the positive part are added row by row, top to bottom; then
    boxes are removed choosing at each step the smallest row index that
    keeps the sequence weakly decreasing.
    """
    d = gamma.d
    path = [empty_staircase(d)]
    for row in range(d):
        for _ in range(max(gamma.entries[row], 0)):
            path.append(path[-1].bump(row, +1))
    cur = path[-1]
    while cur != gamma:
        for row in range(d):
            if cur.entries[row] <= gamma.entries[row]:
                continue
            if row == d - 1 or cur.entries[row] - 1 >= cur.entries[row + 1]:
                cur = cur.bump(row, -1)
                path.append(cur)
                break
        else:  # pragma: no cover - unreachable by construction
            raise RuntimeError(f"stuck while descending to {gamma}")
    return path


def _canonicalize_basis(
    V: np.ndarray, amb_weights: np.ndarray
) -> np.ndarray:
    """Rotate the subspace basis V to the canonical weight-ordered basis.

    Within each ambient weight block (taken in lexicographically descending
    weight order) the basis is the Gram-Schmidt orthonormalization of the
    projections of the standard basis vectors, in index order, with the
    leading ambient coordinate made positive.  Returns the rotated V.
    """
    q = V.shape[1]
    weight_of = [tuple(w) for w in amb_weights]
    order = sorted(set(weight_of), reverse=True)
    cols: list[np.ndarray] = []
    for wt in order:
        idxs = [k for k, w in enumerate(weight_of) if w == wt]
        for k in idxs:
            u = V[k, :].conj().copy()  # V^dag e_k, coordinates in the subspace
            for c in cols:
                u -= c * (c.conj() @ u)
            nrm = np.linalg.norm(u)
            if nrm > RANK_TOL:
                cols.append(u / nrm)
            if len(cols) == q:
                break
        if len(cols) == q:
            break
    assert len(cols) == q, "weight sweep did not exhaust the subspace"
    R = np.stack(cols, axis=1)
    Vnew = V @ R
    for c in range(q):
        col = Vnew[:, c]
        lead = np.argmax(np.abs(col) > RANK_TOL)
        if col[lead].real < 0:
            Vnew[:, c] = -col
            R[:, c] = -R[:, c]
    return Vnew


_REALIZATION_CACHE: dict[tuple[tuple[int, ...],], IrrepRealization] = {}


def canonical_realization(gamma: Staircase, d: int | None = None) -> IrrepRealization:
    """Deterministic realization of the irrep labelled by gamma.

    Grown along canonical_path(gamma) by split-Casimir projection, then the
    basis is canonicalized to be real, weight-diagonal and weight-ordered.
    Results are cached per label.
    """
    if d is not None and d != gamma.d:
        raise ValueError("row count mismatch")
    key = (gamma.entries,)
    if key in _REALIZATION_CACHE:
        return _REALIZATION_CACHE[key]
    d = gamma.d
    path = canonical_path(gamma)
    V = np.ones((1, 1))
    gens = np.zeros((d, d, 1, 1))
    factors: tuple[bool, ...] = ()
    for prev, nxt in zip(path, path[1:]):
        dual = nxt.size < prev.size
        targets = dict()
        for s, eig in _step_targets(prev, dual):
            targets[s] = eig
        _, evals, evecs = _extend_step(gens, d, dual)
        C = _block_columns(evals, evecs, targets[nxt])
        assert C.shape[1] == dim_gl_irrep(nxt), (prev, nxt, C.shape)
        V = np.kron(V, np.eye(d)) @ C
        gens = _step_generators(gens, d, dual, C)
        factors = factors + (dual,)
    amb_w = ambient_weights(d, factors)
    q = V.shape[1]
    Vc = _canonicalize_basis(V, amb_w)
    R = V.conj().T @ Vc  # rotation in abstract coordinates
    gens_c = np.einsum("ab,ijbc,cd->ijad", R.conj().T, gens, R)
    weights = np.zeros((q, d), dtype=int)
    for i in range(d):
        diag = np.diag(gens_c[i, i])
        weights[:, i] = np.round(diag.real)
        assert np.max(np.abs(diag - weights[:, i])) < CONSTRUCTION_TOL
    real = IrrepRealization(
        label=gamma,
        factors=factors,
        embedding=Vc,
        generators=gens_c,
        weights=weights,
    )
    real.validate()
    _REALIZATION_CACHE[key] = real
    return real


def _simple_generators(d: int) -> list[tuple[int, int]]:
    """Index pairs generating gl(d): raising/lowering neighbours plus Cartan."""
    pairs = []
    for i in range(d - 1):
        pairs.append((i, i + 1))
        pairs.append((i + 1, i))
    for i in range(d):
        pairs.append((i, i))
    return pairs


def highest_weight_vector(gens: np.ndarray, d: int) -> np.ndarray:
    """The (unique up to phase) joint kernel of the raising operators.

    Raises if the kernel is not one-dimensional, which signals that the
    generator stack does not describe a single irrep copy.
    """
    q = gens.shape[2]
    raisers = [gens[i, i + 1] for i in range(d - 1)]
    if not raisers:
        M = np.zeros((1, q))
    else:
        M = np.concatenate(raisers, axis=0)
    u, s, vh = np.linalg.svd(M)
    tol = RANK_TOL * max(1.0, s[0] if len(s) else 1.0)
    nnull = int(np.sum(s < tol)) + (q - len(s))
    if nnull != 1:
        raise ValueError(f"highest-weight space has dimension {nnull}, expected 1")
    v = vh[-1].conj()
    lead = np.argmax(np.abs(v) > 1e-8)
    v = v * (abs(v[lead]) / v[lead])
    return v


def krylov_recipe(
    gens: np.ndarray, seed: np.ndarray, qdim: int, d: int
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Lowering words spanning the irrep generated by seed, plus the
    orthonormalizing column transform.

    Returns (recipe, W): recipe[t] = (source index, lowering row i) meaning
    raw[t+1] = E_{i+1,i} raw[source] normalized; the columns of
    (raw matrix) @ W are orthonormal with the first equal to the seed.  The
    raw-vector norms and Gram matrix depend only on the abstract irrep, so
    replaying the recipe in any other copy yields the mirrored basis.
    """
    raw = [seed / np.linalg.norm(seed)]
    ortho = [raw[0]]
    recipe: list[tuple[int, int]] = []
    src = 0
    while len(ortho) < qdim:
        if src >= len(raw):
            raise RuntimeError("Krylov sweep exhausted before reaching irrep dim")
        for i in range(d - 1):
            cand = gens[i + 1, i] @ raw[src]
            nrm = np.linalg.norm(cand)
            if nrm < RANK_TOL:
                continue
            cand = cand / nrm
            resid = cand.copy()
            for col in ortho:
                resid -= col * (col.conj() @ resid)
            if np.linalg.norm(resid) > RANK_TOL:
                raw.append(cand)
                recipe.append((src, i))
                ortho.append(resid / np.linalg.norm(resid))
                if len(ortho) == qdim:
                    break
        src += 1
    K = np.stack(raw, axis=1)
    Q, R = np.linalg.qr(K)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    W = np.linalg.inv(R) * signs[None, :]
    return recipe, W


def apply_recipe(
    gens: np.ndarray, seed: np.ndarray, recipe: list[tuple[int, int]]
) -> np.ndarray:
    """Replay a lowering recipe from a new seed; returns the raw-vector matrix."""
    raw = [seed / np.linalg.norm(seed)]
    for src, i in recipe:
        cand = gens[i + 1, i] @ raw[src]
        raw.append(cand / np.linalg.norm(cand))
    return np.stack(raw, axis=1)


def intertwiner(gens_a: np.ndarray, gens_b: np.ndarray, d: int) -> np.ndarray:
    """The unitary intertwiner T with T E_ij^(a) = E_ij^(b) T, up to phase.

    Both generator stacks must realize a single copy of the same irrep.
    The highest-weight vectors are matched and extended along a shared
    lowering recipe, giving mirrored orthonormal bases B_a, B_b in the two
    copies; T = B_b B_a^dag.  The residual of the intertwining relation is
    asserted, and a non-unique highest weight raises.
    """
    qa = gens_a.shape[2]
    qb = gens_b.shape[2]
    if qa != qb:
        raise ValueError("dimension mismatch: not the same irrep")
    va = highest_weight_vector(gens_a, d)
    vb = highest_weight_vector(gens_b, d)
    recipe, W = krylov_recipe(gens_a, va, qa, d)
    Ba = apply_recipe(gens_a, va, recipe) @ W
    Bb = apply_recipe(gens_b, vb, recipe) @ W
    if np.linalg.norm(Bb.conj().T @ Bb - np.eye(qb)) > 1e-8:
        raise ValueError("second copy failed to mirror: not the same irrep?")
    T = Bb @ Ba.conj().T
    resid = max(
        np.linalg.norm(T @ gens_a[i, j] - gens_b[i, j] @ T)
        for (i, j) in _simple_generators(d)
    )
    if resid > 1e-8:
        raise ValueError(f"intertwining residual {resid:.2e}; labels differ?")
    flat = T.reshape(-1)
    lead = np.argmax(np.abs(flat) > 1e-8)
    phase = flat[lead] / abs(flat[lead])
    T = T / phase
    if np.iscomplexobj(T) and np.linalg.norm(T.imag) < CONSTRUCTION_TOL:
        T = T.real
    return T


def realization_intertwiner(a: IrrepRealization, b: IrrepRealization) -> np.ndarray:
    if a.label != b.label:
        raise ValueError(f"labels differ: {a.label} vs {b.label}")
    return intertwiner(a.generators, b.generators, a.d)


def dual_generators(gens: np.ndarray) -> np.ndarray:
    """Generators of the dual representation: E_ij -> -(E_ij)^T.

    Matches the conjugate-site action -e_ji used on conj C^d factors.
    """
    d = gens.shape[0]
    out = np.zeros_like(gens)
    for i in range(d):
        for j in range(d):
            out[i, j] = -gens[i, j].T
    return out


_DUAL_CACHE: dict[tuple[int, ...], np.ndarray] = {}


def dual_structure(nu: Staircase) -> np.ndarray:
    """Real orthogonal Z with Z E_ij^(dual(nu)) = -(E_ji^(nu))^T Z.

    Z identifies the canonical realization of the dual label with the dual
    of the canonical realization of nu; it converts conjugate-transforming
    coordinates into canonical ones and is unique up to sign.
    """
    key = nu.entries
    if key in _DUAL_CACHE:
        return _DUAL_CACHE[key]
    a = canonical_realization(nu.dual())
    b_gens = dual_generators(canonical_realization(nu).generators)
    Z = intertwiner(a.generators, b_gens, nu.d)
    _DUAL_CACHE[key] = Z
    return Z
