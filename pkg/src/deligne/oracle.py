"""Brute-force check of the diagram calculus against matrices.

A diagram ``a -> b`` acts on ``(C^t0)^{(x) a}`` by the classical rule: the
matrix entry for a bottom labeling ``j`` and top labeling ``i`` is 1 exactly
when the joint labeling is constant on every block.  Nothing here uses the
union-find composition of :mod:`deligne.diagrams`; the matrices are built by
enumerating the block-constant labelings directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import sympy

from . import diagrams as dg
from . import morphisms as mm
from .diagrams import PartitionDiagram
from .morphisms import Morphism
from .scalars import evaluate_scalar

__all__ = [
    "OracleError",
    "ORACLE_CAP",
    "SparseMatrix",
    "realize",
    "realize_morphism",
    "HomomorphismReport",
    "check_homomorphism",
    "exhaustive_pairs",
    "random_pairs",
    "realization_rank",
]

ORACLE_CAP = 10**6


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: dict  # (row, col) -> int or Fraction, zeros never stored

    def __post_init__(self):
        if not all(self.entries.values()):
            object.__setattr__(self, "entries", {k: v for k, v in self.entries.items() if v})

    @classmethod
    def build(cls, rows: int, cols: int, entries: dict) -> "SparseMatrix":
        return cls(rows, cols, entries)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise OracleError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + u * v
        return SparseMatrix.build(self.rows, other.cols, out)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        out = {}
        for (i1, j1), u in self.entries.items():
            for (i2, j2), v in other.entries.items():
                out[i1 * other.rows + i2, j1 * other.cols + j2] = u * v
        return SparseMatrix.build(self.rows * other.rows, self.cols * other.cols, out)

    def scale(self, c) -> "SparseMatrix":
        return SparseMatrix.build(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return SparseMatrix.build(self.rows, self.cols, out)

    def trace(self) -> Fraction:
        return sum((v for (i, j), v in self.entries.items() if i == j), Fraction(0))

    def to_dense(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            m[i][j] = v
        return m


def realize(d: PartitionDiagram, t0: int, cap: int = ORACLE_CAP) -> SparseMatrix:
    a, b = d.top, d.bottom
    if t0 < 1:
        raise OracleError("t0 must be a positive integer")
    if t0 ** max(a, b) > cap:
        raise OracleError(f"oracle cap exceeded: {t0}^{max(a, b)} > {cap}")
    # a labeling constant on every block is one label per block; each block
    # then adds label * (its positional weight) to the row and column indices
    weights = []
    for blk in d.blocks:
        col = sum(t0 ** (a - 1 - v) for v in blk if v < a)
        row = sum(t0 ** (a + b - 1 - v) for v in blk if v >= a)
        weights.append((row, col))
    out = {}
    for choice in product(range(t0), repeat=len(weights)):
        r = c = 0
        for x, (wr, wc) in zip(choice, weights):
            r += x * wr
            c += x * wc
        out[r, c] = 1
    return SparseMatrix(t0**b, t0**a, out)


def realize_morphism(f: Morphism, t0: int, cap: int = ORACLE_CAP) -> SparseMatrix:
    total = SparseMatrix(t0**f.target, t0**f.source, {})
    for d, c in f.terms.items():
        total = total + realize(d, t0, cap).scale(evaluate_scalar(c, {"t": t0}))
    return total


@dataclass
class HomomorphismReport:
    t0: int
    pairs: int = 0
    compose_failures: list = field(default_factory=list)
    tensor_failures: list = field(default_factory=list)
    trace_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.compose_failures or self.tensor_failures or self.trace_failures)

    def first_mismatch(self):
        for kind, lst in (("compose", self.compose_failures), ("tensor", self.tensor_failures), ("trace", self.trace_failures)):
            if lst:
                return kind, lst[0]
        return None


def check_homomorphism(pairs: Iterable[tuple[PartitionDiagram, PartitionDiagram]], t0: int, cap: int = ORACLE_CAP) -> HomomorphismReport:
    """Compare composition, tensor product and trace with their matrix counterparts.

    Each pair ``(f, g)`` is checked as ``f o g`` when the arities allow,
    as ``f (x) g`` always, and each square member's trace once.
    """
    rep = HomomorphismReport(t0)
    cache: dict[PartitionDiagram, SparseMatrix] = {}

    def R(d):
        m = cache.get(d)
        if m is None:
            m = cache[d] = realize(d, t0, cap)
        return m

    traced = set()
    for f, g in pairs:
        rep.pairs += 1
        if g.bottom == f.top:
            # g drawn above f
            h, loops = dg.compose(g, f)
            if R(h).scale(t0**loops) != R(f) @ R(g):
                rep.compose_failures.append((f, g))
        if realize(dg.tensor(f, g), t0, cap) != R(f).kron(R(g)):
            rep.tensor_failures.append((f, g))
        for d in (f, g):
            if d.top == d.bottom and d not in traced:
                traced.add(d)
                want = evaluate_scalar(mm.categorical_trace(Morphism.from_diagram(d)), {"t": t0})
                if R(d).trace() != want:
                    rep.trace_failures.append(d)
    return rep


def exhaustive_pairs(n: int):
    ds = list(dg.enumerate_diagrams(n, n))
    return [(f, g) for f in ds for g in ds]


def random_pairs(n: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    total = dg.bell(2 * n)

    def pick():
        return PartitionDiagram.from_labels(n, n, tuple(dg.unrank_rgs(rng.randrange(total), 2 * n)))

    return [(pick(), pick()) for _ in range(count)]


def realization_rank(diagrams: Sequence[PartitionDiagram], t0: int) -> int:
    """Rank of the flattened matrices; equals ``len(diagrams)`` iff they act independently."""
    rows = []
    for d in diagrams:
        m = realize(d, t0)
        rows.append([m.entries.get((i, j), 0) for i in range(m.rows) for j in range(m.cols)])
    return sympy.Matrix(rows).rank()
