"""Independent brute-force oracles used to freeze expected values.

Everything here is deliberately naive and separate from the package
implementations: standard tableaux are enumerated by recursion on the last
box, semistandard tableaux and LR fillings by filtering raw assignments.
"""

from __future__ import annotations

import itertools
from math import factorial

import numpy as np


def syt_count(shape: tuple[int, ...]) -> int:
    """Number of standard Young tableaux, by recursion on removable corners."""
    rows = tuple(r for r in shape if r > 0)
    if sum(rows) == 0:
        return 1
    total = 0
    for i in range(len(rows)):
        if i == len(rows) - 1 or rows[i] > rows[i + 1]:
            smaller = list(rows)
            smaller[i] -= 1
            total += syt_count(tuple(smaller))
    return total


def ssyt_count(shape: tuple[int, ...], d: int) -> int:
    """Number of semistandard Young tableaux with entries in 1..d, brute force."""
    rows = tuple(r for r in shape if r > 0)
    cells = [(i, j) for i, r in enumerate(rows) for j in range(r)]
    if not cells:
        return 1
    count = 0
    for values in itertools.product(range(1, d + 1), repeat=len(cells)):
        t = {c: v for c, v in zip(cells, values)}
        ok = True
        for (i, j), v in t.items():
            if (i, j + 1) in t and t[(i, j + 1)] < v:
                ok = False
                break
            if (i + 1, j) in t and t[(i + 1, j)] <= v:
                ok = False
                break
        if ok:
            count += 1
    return count


def lr_count(lam: tuple[int, ...], mu: tuple[int, ...], gamma: tuple[int, ...]) -> int:
    """LR coefficient for partitions, by filtering raw skew fillings."""
    d = len(gamma)
    lam = tuple(lam) + (0,) * (d - len(lam))
    if any(gamma[i] < lam[i] for i in range(d)):
        return 0
    cells = [(i, j) for i in range(d) for j in range(lam[i], gamma[i])]
    nvals = len([e for e in mu if e > 0])
    if not cells:
        return 1 if nvals == 0 else 0
    count = 0
    for values in itertools.product(range(1, nvals + 1), repeat=len(cells)):
        t = {c: v for c, v in zip(cells, values)}
        content = [0] * (nvals + 1)
        for v in values:
            content[v] += 1
        if tuple(content[1:]) != tuple(mu[:nvals]):
            continue
        ok = True
        for (i, j), v in t.items():
            if (i, j + 1) in t and t[(i, j + 1)] < v:
                ok = False
                break
            if (i + 1, j) in t and t[(i + 1, j)] <= v:
                ok = False
                break
        if not ok:
            continue
        # reverse reading word: rows top to bottom, right to left
        word = []
        for i in range(d):
            for j in range(gamma[i] - 1, lam[i] - 1, -1):
                if (i, j) in t:
                    word.append(t[(i, j)])
        seen = [0] * (nvals + 1)
        for v in word:
            seen[v] += 1
            if v > 1 and seen[v] > seen[v - 1]:
                ok = False
                break
        if ok:
            count += 1
    return count


def permutation_matrix(perm: tuple[int, ...], d: int) -> np.ndarray:
    """Operator permuting tensor factors: site k of the output carries the
    input content of site perm^{-1}(k)."""
    m = len(perm)
    dim = d**m
    idx = np.arange(dim)
    digits = np.stack([(idx // d ** (m - 1 - k)) % d for k in range(m)])
    inv = [0] * m
    for k, v in enumerate(perm):
        inv[v] = k
    new_digits = digits[inv, :]
    new_idx = sum(new_digits[k] * d ** (m - 1 - k) for k in range(m))
    out = np.zeros((dim, dim))
    out[new_idx, idx] = 1.0
    return out


def symmetrize_brute(rho: np.ndarray, m: int, d: int) -> np.ndarray:
    """Average of rho over all m! tensor-factor permutations."""
    acc = np.zeros_like(rho, dtype=complex)
    for perm in itertools.permutations(range(m)):
        P = permutation_matrix(perm, d)
        acc += P @ rho @ P.T
    return acc / factorial(m)


def symmetric_projector(n: int, d: int) -> np.ndarray:
    """Projector onto the symmetric subspace of n qudits."""
    acc = np.zeros((d**n, d**n))
    for perm in itertools.permutations(range(n)):
        acc += permutation_matrix(perm, d)
    return acc / factorial(n)


def werner_cloner(rho: np.ndarray, m: int, n: int, d: int) -> np.ndarray:
    """(d[m]/d[n]) P_sym (rho x 1^(n-m)) P_sym on the symmetric subspace."""
    from math import comb

    dm = comb(m + d - 1, m)
    dn = comb(n + d - 1, n)
    P = symmetric_projector(n, d)
    big = np.kron(rho, np.eye(d ** (n - m)))
    return (dm / dn) * (P @ big @ P)
