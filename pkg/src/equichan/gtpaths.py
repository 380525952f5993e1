"""Gel'fand-Tsetlin path spaces and random sampling of GT basis vectors.

A GT basis vector of a permutation-algebra irrep is labelled by a path of
staircases that first adds k boxes one at a time and then removes l boxes
one at a time.  Uniform sampling of such paths reduces to repeatedly
sampling a single box removal with probability proportional to the
dimension of the smaller irrep, which the hook walk does without computing
any dimensions.

Two equivalent walks are provided: ``alg1`` walks on the boxes of the Young
diagram itself (pick a uniformly random box, then repeatedly jump to a
uniformly random box strictly to the right in the same row or strictly
below in the same column, until a corner is reached); ``alg3`` walks on the
squashed diagram in which maximal rectangles of equal rows/columns are
contracted to single weighted cells, which needs only O(r) random draws for
r distinct row lengths.  Note: the while-loop condition of the box-walk is
interpreted as moves within the same row or the same column only; the
squashed variant and the worked removal example pin this down.

All probabilities are exact rationals; floating point enters only at the
final inverse-CDF draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from equichan.staircases import (
    Staircase,
    add_boxes,
    dim_perm_irrep,
    empty_staircase,
    remove_boxes,
)


@dataclass(frozen=True)
class GtPath:
    """A sequence of staircases with k single-box additions then l removals."""

    steps: tuple[Staircase, ...]
    k: int
    l: int

    def __post_init__(self):
        if len(self.steps) != self.k + self.l + 1:
            raise ValueError("path must have k + l + 1 staircases")
        for t in range(self.k + self.l):
            cur, nxt = self.steps[t], self.steps[t + 1]
            moves = add_boxes(cur) if t < self.k else remove_boxes(cur)
            if nxt not in moves:
                kind = "addition" if t < self.k else "removal"
                raise ValueError(f"step {t} is not a single-box {kind}: {cur} -> {nxt}")

    @property
    def d(self) -> int:
        return self.steps[0].d

    @property
    def start(self) -> Staircase:
        return self.steps[0]

    @property
    def end(self) -> Staircase:
        return self.steps[-1]

    def row_sequence(self) -> tuple[int, ...]:
        """Row index changed at each step (0-based)."""
        rows = []
        for cur, nxt in zip(self.steps, self.steps[1:]):
            diff = [i for i in range(cur.d) if cur.entries[i] != nxt.entries[i]]
            rows.append(diff[0])
        return tuple(rows)


@dataclass(frozen=True)
class RemovalDistribution:
    """Exact probability distribution over single-box removals."""

    probs: dict[Staircase, Fraction]

    def __post_init__(self):
        if any(p <= 0 for p in self.probs.values()):
            raise ValueError("probabilities must be positive")
        if sum(self.probs.values()) != 1:
            raise ValueError("probabilities must sum to one exactly")

    def support(self) -> list[Staircase]:
        return sorted(self.probs, key=lambda s: s.entries, reverse=True)

    def __getitem__(self, mu: Staircase) -> Fraction:
        return self.probs[mu]

    def sample(self, rng: np.random.Generator) -> Staircase:
        u = rng.random()
        acc = 0.0
        items = [(mu, self.probs[mu]) for mu in self.support()]
        for mu, p in items:
            acc += float(p)
            if u < acc:
                return mu
        return items[-1][0]


def enumerate_paths(mu: Staircase, k: int, l: int) -> dict[Staircase, list[GtPath]]:
    """All paths of k additions then l removals starting at mu, grouped by endpoint.

    Endpoints are ordered lexicographically descending; within an endpoint
    the paths are in lexicographic order of their row sequences.
    """
    if k < 0 or l < 0:
        raise ValueError("need k, l >= 0")
    partial = [(mu,)]
    for t in range(k + l):
        nxt = []
        for steps in partial:
            moves = add_boxes(steps[-1]) if t < k else remove_boxes(steps[-1])
            for s in moves:
                nxt.append(steps + (s,))
        partial = nxt
    out: dict[Staircase, list[GtPath]] = {}
    for steps in partial:
        out.setdefault(steps[-1], []).append(GtPath(steps, k, l))
    return {key: out[key] for key in sorted(out, key=lambda s: s.entries, reverse=True)}


def path_space_dim(mu: Staircase, lam: Staircase, k: int, l: int) -> int:
    """Number of paths mu -> lam with k additions then l removals."""
    counts: dict[Staircase, int] = {mu: 1}
    for t in range(k + l):
        nxt: dict[Staircase, int] = {}
        for nu, c in counts.items():
            moves = add_boxes(nu) if t < k else remove_boxes(nu)
            for s in moves:
                nxt[s] = nxt.get(s, 0) + c
        counts = nxt
    return counts.get(lam, 0)


def exact_removal_distribution(lam: Staircase) -> RemovalDistribution:
    """Marginal of a uniformly random GT path at the last addition step.

    P(mu) = dim_perm_irrep(mu) / dim_perm_irrep(lam) over mu obtained from
    the partition lam by removing one box.
    """
    if not lam.is_partition:
        raise ValueError("exact_removal_distribution needs a partition")
    if lam.size == 0:
        raise ValueError("cannot remove a box from the empty partition")
    dim_lam = dim_perm_irrep(lam)
    probs = {
        mu: Fraction(dim_perm_irrep(mu), dim_lam)
        for mu in remove_boxes(lam)
        if mu.is_partition
    }
    return RemovalDistribution(probs)


# ---------------------------------------------------------------------------
# hook walks
# ---------------------------------------------------------------------------


def _pick(weights: list[int], u: float) -> int:
    """Inverse-CDF pick of an index from integer weights, one uniform draw."""
    target = u * sum(weights)
    acc = 0
    for idx, w in enumerate(weights):
        acc += w
        if target < acc:
            return idx
    return len(weights) - 1


def _walk_boxes(rows: list[int], draws) -> int:
    """Box walk on the Young diagram with given row lengths.

    ``draws`` yields uniform [0,1) numbers, one per decision.  Returns the
    0-based row index of the removable corner the walk ends on.
    """
    m = sum(rows)
    boxes = [(i, j) for i, r in enumerate(rows) for j in range(r)]
    i, j = boxes[_pick([1] * m, next(draws))]
    while True:
        right = [(i, jj) for jj in range(j + 1, rows[i])]
        below = [(ii, j) for ii in range(i + 1, len(rows)) if rows[ii] > j]
        options = right + below
        if not options:
            return i
        i, j = options[_pick([1] * len(options), next(draws))]


def _squash(rows: list[int]) -> tuple[list[int], list[int], list[int], list[int]]:
    """Contract equal rows and columns of a Young diagram.

    Returns (nu, v, w, corner_rows): distinct row lengths nu (descending)
    with vertical multiplicities v, column-group widths w (left to right),
    and for each row group the 0-based index of its last original row.
    """
    nu: list[int] = []
    v: list[int] = []
    corner_rows: list[int] = []
    for i, r in enumerate(rows):
        if nu and r == nu[-1]:
            v[-1] += 1
            corner_rows[-1] = i
        else:
            nu.append(r)
            v.append(1)
            corner_rows.append(i)
    widths_asc = sorted(set(nu))
    w = [widths_asc[0]] + [b - a for a, b in zip(widths_asc, widths_asc[1:])]
    return nu, v, w, corner_rows


def _walk_squashed(rows: list[int], draws) -> int:
    """Weighted walk on the squashed diagram; returns the removable row index.

    Cell (k, l) of the squashed diagram stands for a v(k) x w(l) rectangle
    of original boxes.  The start cell is drawn with probability
    proportional to v(k)w(l); subsequent moves go right with weight w(l')
    or down with weight v(k'), and the walk stops on the anti-diagonal.
    """
    nu, v, w, corner_rows = _squash(rows)
    K = len(nu)
    cells = [(k, l) for k in range(K) for l in range(K - k)]
    weights = [v[k] * w[l] for k, l in cells]
    k, l = cells[_pick(weights, next(draws))]
    while True:
        right = [(k, ll) for ll in range(l + 1, K - k)]
        below = [(kk, l) for kk in range(k + 1, K - l)]
        options = right + below
        if not options:
            return corner_rows[k]
        opt_weights = [w[ll] for _, ll in right] + [v[kk] for kk, _ in below]
        k, l = options[_pick(opt_weights, next(draws))]


def sample_remove_box(
    lam: Staircase, rng: np.random.Generator, mode: str = "alg3"
) -> Staircase:
    """Sample mu from lam by removing one box via a hook walk.

    The result is distributed as exact_removal_distribution(lam).  ``mode``
    selects the box walk ("alg1") or the squashed weighted walk ("alg3");
    the two are isomorphic.
    """
    if not lam.is_partition or lam.size == 0:
        raise ValueError("need a nonempty partition")
    rows = [e for e in lam.entries if e > 0]

    def draws():
        while True:
            yield rng.random()

    if mode == "alg1":
        row = _walk_boxes(rows, draws())
    elif mode == "alg3":
        row = _walk_squashed(rows, draws())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return lam.bump(row, -1)


def next_step_distribution(lam: Staircase, mode: str = "alg1") -> RemovalDistribution:
    """Exact removal distribution induced by the hook walk, by rational DP.

    Solves the end-corner probabilities of the walk recursion exactly; for
    both modes this reproduces exact_removal_distribution, which is the
    content of the walk's correctness.
    """
    if not lam.is_partition or lam.size == 0:
        raise ValueError("need a nonempty partition")
    rows = [e for e in lam.entries if e > 0]
    if mode == "alg1":
        probs_by_row = _dp_boxes(rows)
    elif mode == "alg3":
        probs_by_row = _dp_squashed(rows)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    probs = {lam.bump(i, -1): p for i, p in probs_by_row.items() if p > 0}
    return RemovalDistribution(probs)


def _dp_boxes(rows: list[int]) -> dict[int, Fraction]:
    """End-corner distribution of the box walk, exactly."""
    m = sum(rows)
    nrows = len(rows)
    corners = [i for i in range(nrows) if i == nrows - 1 or rows[i] > rows[i + 1]]
    # p[(i, j)][c] = probability of ending at corner row c starting from box (i, j)
    p: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(nrows - 1, -1, -1):
        for j in range(rows[i] - 1, -1, -1):
            right = [(i, jj) for jj in range(j + 1, rows[i])]
            below = [(ii, j) for ii in range(i + 1, nrows) if rows[ii] > j]
            options = right + below
            if not options:
                p[(i, j)] = {i: Fraction(1)}
                continue
            acc: dict[int, Fraction] = {}
            share = Fraction(1, len(options))
            for cell in options:
                for c, q in p[cell].items():
                    acc[c] = acc.get(c, Fraction(0)) + share * q
            p[(i, j)] = acc
    out = {c: Fraction(0) for c in corners}
    for cell_probs in p.values():
        for c, q in cell_probs.items():
            out[c] += Fraction(1, m) * q
    return out


def _dp_squashed(rows: list[int]) -> dict[int, Fraction]:
    """End-corner distribution of the squashed weighted walk, exactly."""
    nu, v, w, corner_rows = _squash(rows)
    K = len(nu)
    m = sum(rows)
    p: dict[tuple[int, int], dict[int, Fraction]] = {}
    for k in range(K - 1, -1, -1):
        for l in range(K - k - 1, -1, -1):
            right = [(k, ll) for ll in range(l + 1, K - k)]
            below = [(kk, l) for kk in range(k + 1, K - l)]
            if not right and not below:
                p[(k, l)] = {corner_rows[k]: Fraction(1)}
                continue
            denom = sum(w[ll] for _, ll in right) + sum(v[kk] for kk, _ in below)
            acc: dict[int, Fraction] = {}
            for (kk, ll) in right:
                for c, q in p[(kk, ll)].items():
                    acc[c] = acc.get(c, Fraction(0)) + Fraction(w[ll], denom) * q
            for (kk, ll) in below:
                for c, q in p[(kk, ll)].items():
                    acc[c] = acc.get(c, Fraction(0)) + Fraction(v[kk], denom) * q
            p[(k, l)] = acc
    out: dict[int, Fraction] = {}
    for (k, l), cell_probs in p.items():
        start = Fraction(v[k] * w[l], m)
        for c, q in cell_probs.items():
            out[c] = out.get(c, Fraction(0)) + start * q
    return out


def sample_gt_path(
    lam: Staircase, rng: np.random.Generator, mode: str = "alg3"
) -> GtPath:
    """Uniformly random GT path from the empty staircase up to the partition lam.

    Repeatedly removes a hook-walk-sampled box down to the empty shape and
    reverses; uniform over all dim_perm_irrep(lam) paths.
    """
    if not lam.is_partition:
        raise ValueError("need a partition")
    down = [lam]
    cur = lam
    while cur.size > 0:
        cur = sample_remove_box(cur, rng, mode=mode)
        down.append(cur)
    return GtPath(tuple(reversed(down)), k=lam.size, l=0)


class CountingRng:
    """Wrapper around a numpy Generator that counts uniform draws."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self.count = 0

    def random(self):
        self.count += 1
        return self._rng.random()
