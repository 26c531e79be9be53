"""Certified spectral-radius brackets for nonnegative integer transfer graphs.

The bracket comes from one positive vector ``x``: for a nonnegative matrix
``B`` the minimum and maximum of ``(Bx)_i / x_i`` enclose the Perron root.
The iteration runs on ``A + I`` (aperiodic, same Perron vector, root shifted
by one) separately on every nontrivial strongly connected component.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix, identity
from scipy.sparse.csgraph import connected_components

from .numerics import Interval, log2_interval

_SCALE_BITS = 80


def recurrent_part(n: int, edges: list[tuple[int, int]]) -> set[int]:
    """Vertices left after repeatedly deleting those with no in- or out-edge."""
    alive = set(range(n))
    out_deg = [0] * n
    in_deg = [0] * n
    succ = [[] for _ in range(n)]
    pred = [[] for _ in range(n)]
    for a, b in edges:
        out_deg[a] += 1
        in_deg[b] += 1
        succ[a].append(b)
        pred[b].append(a)
    queue = [v for v in range(n) if out_deg[v] == 0 or in_deg[v] == 0]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for b in succ[v]:
            in_deg[b] -= 1
            if in_deg[b] == 0 and b in alive:
                queue.append(b)
        for a in pred[v]:
            out_deg[a] -= 1
            if out_deg[a] == 0 and a in alive:
                queue.append(a)
    return alive


def _component_bracket(edges: list[tuple[int, int]], size: int, rel_tol: float,
                       max_iter: int) -> tuple[Fraction, Fraction]:
    rows = [a for a, _ in edges]
    cols = [b for _, b in edges]
    A = csr_matrix((np.ones(len(edges)), (rows, cols)), shape=(size, size))
    B = A + identity(size, format="csr")
    x = np.ones(size)
    for _ in range(max_iter):
        y = B @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        x = y / y.max()
        if hi - lo <= rel_tol * lo:
            break
    return _certify(edges, size, x)


def _certify(edges, size, x_float) -> tuple[Fraction, Fraction]:
    """Exact Collatz-Wielandt bracket for ``A + I`` at an integerized vector."""
    x = [max(int(v * 2.0**_SCALE_BITS), 1) for v in np.asarray(x_float, dtype=float)]
    succ = [[] for _ in range(size)]
    for a, b in edges:
        succ[a].append(b)
    y = [x[i] + sum(x[j] for j in succ[i]) for i in range(size)]
    lo = min(Fraction(y[i], x[i]) for i in range(size))
    hi = max(Fraction(y[i], x[i]) for i in range(size))
    return lo - 1, hi - 1


def perron_bracket(n: int, edges: list[tuple[int, int]], rel_tol: float = 1e-13,
                   max_iter: int = 200_000) -> tuple[Fraction, Fraction]:
    """Rational ``[lo, hi]`` containing the spectral radius of the 0/1 graph."""
    core = sorted(recurrent_part(n, edges))
    if not core:
        return Fraction(0), Fraction(0)
    pos = {v: i for i, v in enumerate(core)}
    sub = [(pos[a], pos[b]) for a, b in edges if a in pos and b in pos]
    m = len(core)
    G = csr_matrix((np.ones(len(sub)), ([a for a, _ in sub], [b for _, b in sub])), shape=(m, m))
    ncomp, labels = connected_components(G, directed=True, connection="strong")
    members: dict[int, list[int]] = {}
    for v in range(m):
        members.setdefault(int(labels[v]), []).append(v)
    local = {v: i for vs in members.values() for i, v in enumerate(vs)}
    grouped: dict[int, list[tuple[int, int]]] = {}
    for a, b in sub:
        if labels[a] == labels[b]:
            grouped.setdefault(int(labels[a]), []).append((local[a], local[b]))
    best_lo, best_hi = Fraction(0), Fraction(0)
    for c, cedges in sorted(grouped.items()):
        lo, hi = _component_bracket(cedges, len(members[c]), rel_tol, max_iter)
        # any cycle forces a root of at least one
        lo = max(lo, Fraction(1))
        best_lo, best_hi = max(best_lo, lo), max(best_hi, hi)
    return best_lo, best_hi


def log2_perron(n: int, edges: list[tuple[int, int]], tol: Fraction = Fraction(1, 10**9)) -> Interval:
    """Enclosure of log2 of the spectral radius; ``neg_inf`` for a nilpotent graph."""
    rel = 1e-13
    while True:
        lo, hi = perron_bracket(n, edges, rel_tol=rel)
        if hi == 0:
            return Interval.neg_inf()
        enc = Interval(log2_interval(lo).lo, log2_interval(hi).hi)
        if enc.width <= tol or rel < 1e-15:
            return enc
        rel /= 100
