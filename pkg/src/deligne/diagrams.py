"""Partition diagrams ``a -> b`` and their combinatorics.

Vertices are encoded as integers: ``0 .. a-1`` are the top row ``T1..Ta`` and
``a .. a+b-1`` the bottom row ``B1..Bb``.  A diagram is stored by its
restricted growth string (``labels[v]`` is the index of the block containing
``v``, blocks numbered in order of their least vertex), which is exactly the
canonical form: blocks sorted by least vertex, vertices sorted within blocks.

Composition stacks the lower diagram beneath the upper one, so
``compose(g, f)`` is the diagram of ``f o g`` ("compose down the page").
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DEFAULT_CAP",
    "DiagramError",
    "EnumerationLimitError",
    "UnionFind",
    "PartitionDiagram",
    "DiagramClass",
    "bell",
    "canonicalize",
    "compose",
    "tensor",
    "flip",
    "identity",
    "permutation_diagram",
    "sigma_I",
    "x_diagram",
    "classify",
    "perm_sign",
    "restrictions",
    "reconstruct",
    "enumerate_diagrams",
    "count_completions",
    "unrank_rgs",
    "rgs_range",
    "format_diagram",
    "parse_diagram",
]

DEFAULT_CAP = 14


class DiagramError(ValueError):
    pass


class EnumerationLimitError(DiagramError):
    pass


class UnionFind:
    """Disjoint sets over ``0 .. n-1`` with path halving."""

    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


def _relabel(labels: Iterable[int]) -> tuple[int, ...]:
    """Renumber arbitrary component ids in order of first occurrence."""
    seen: dict[int, int] = {}
    out = []
    for x in labels:
        y = seen.get(x)
        if y is None:
            y = seen[x] = len(seen)
        out.append(y)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class PartitionDiagram:
    """A set partition of ``a`` top and ``b`` bottom vertices."""

    top: int
    bottom: int
    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, top: int, bottom: int, labels: Iterable[int]) -> "PartitionDiagram":
        labels = _relabel(labels)
        if len(labels) != top + bottom:
            raise DiagramError("label count does not match arities")
        return cls(top, bottom, labels)

    @property
    def size(self) -> int:
        return self.top + self.bottom

    @property
    def num_blocks(self) -> int:
        return max(self.labels, default=-1) + 1

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for v, lab in enumerate(self.labels):
            out[lab].append(v)
        return tuple(tuple(b) for b in out)

    def is_square(self) -> bool:
        return self.top == self.bottom

    def __str__(self) -> str:
        return format_diagram(self)

    def __repr__(self) -> str:
        return f"PartitionDiagram({self.top}, {self.bottom}, {format_diagram(self)!r})"


def canonicalize(blocks: Iterable[Iterable[int]], a: int, b: int) -> PartitionDiagram:
    """Build the canonical diagram from raw blocks of integer vertices."""
    labels = [-1] * (a + b)
    for k, block in enumerate(blocks):
        block = list(block)
        if not block:
            raise DiagramError("not a partition: empty block")
        for v in block:
            if not 0 <= v < a + b or labels[v] != -1:
                raise DiagramError("not a partition: overlapping or out-of-range vertex")
            labels[v] = k
    if -1 in labels:
        raise DiagramError("not a partition: blocks do not cover all vertices")
    return PartitionDiagram.from_labels(a, b, labels)


def compose(upper: PartitionDiagram, lower: PartitionDiagram) -> tuple[PartitionDiagram, int]:
    """Stack ``lower`` beneath ``upper``.

    Returns the induced diagram on the outer vertices together with the
    number of components made only of identified middle vertices; the caller
    multiplies by ``t`` to that power.
    """
    a, b = upper.top, upper.bottom
    if lower.top != b:
        raise DiagramError(f"arity mismatch: {a}->{b} atop {lower.top}->{lower.bottom}")
    c = lower.bottom
    ul, ll = upper.labels, lower.labels
    m1 = max(ul, default=-1) + 1
    m2 = max(ll, default=-1) + 1
    uf = UnionFind(m1 + m2)
    for j in range(b):
        uf.union(ul[a + j], m1 + ll[j])
    find = uf.find
    out = [find(ul[i]) for i in range(a)]
    out.extend(find(m1 + ll[b + k]) for k in range(c))
    roots = {find(x) for x in range(m1 + m2)}
    loops = len(roots) - len(set(out))
    return PartitionDiagram.from_labels(a, c, out), loops


def tensor(d1: PartitionDiagram, d2: PartitionDiagram) -> PartitionDiagram:
    """Place ``d2`` to the right of ``d1``."""
    m1 = d1.num_blocks
    l1, l2 = d1.labels, d2.labels
    a1, a2 = d1.top, d2.top
    labels = list(l1[:a1]) + [m1 + x for x in l2[:a2]] + list(l1[a1:]) + [m1 + x for x in l2[a2:]]
    return PartitionDiagram.from_labels(a1 + a2, d1.bottom + d2.bottom, labels)


def flip(d: PartitionDiagram) -> PartitionDiagram:
    """Exchange the top and bottom rows."""
    return PartitionDiagram.from_labels(d.bottom, d.top, d.labels[d.top:] + d.labels[: d.top])


def identity(n: int) -> PartitionDiagram:
    return PartitionDiagram(n, n, tuple(range(n)) * 2)


def permutation_diagram(sigma: Sequence[int]) -> PartitionDiagram:
    """Blocks ``{T_i, B_sigma(i)}`` for a 0-based permutation ``sigma``."""
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise DiagramError(f"not a permutation: {sigma!r}")
    labels = list(range(n)) + [0] * n
    for i, j in enumerate(sigma):
        labels[n + j] = i
    return PartitionDiagram.from_labels(n, n, labels)


def sigma_I(sigma: Sequence[int], I: Iterable[int]) -> PartitionDiagram:
    """``permutation_diagram(sigma)`` with the edges at top vertices in ``I`` removed."""
    n = len(sigma)
    I = set(I)
    if not I <= set(range(n)):
        raise DiagramError("I must be a subset of the strand indices")
    labels = list(range(n)) + [0] * n
    nxt = n
    for i, j in enumerate(sigma):
        if i in I:
            labels[n + j] = nxt
            nxt += 1
        else:
            labels[n + j] = i
    return PartitionDiagram.from_labels(n, n, labels)


def x_diagram(n: int) -> PartitionDiagram:
    """``x_n``: the identity with the last strand cut into two singletons."""
    return sigma_I(tuple(range(n)), {n - 1})


def perm_sign(sigma: Sequence[int]) -> int:
    seen = [False] * len(sigma)
    sign = 1
    for i in range(len(sigma)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class DiagramClass:
    """``kind`` is ``"permutation"``, ``"punctured"`` or ``"other"``.

    For punctured permutations ``perm`` sends the punctured top index
    ``index`` to the unique isolated bottom index; this is the only
    permutation whose ``sigma_I(perm, {index})`` is the diagram.
    """

    kind: str
    perm: tuple[int, ...] | None = None
    index: int | None = None

    @property
    def sign(self) -> int:
        return 0 if self.perm is None else perm_sign(self.perm)


OTHER = DiagramClass("other")


def _classify_labels(n: int, top_ids: Sequence[int], bot_ids: Sequence[int]) -> DiagramClass:
    # top_ids/bot_ids: component id of each top/bottom vertex of an n->n diagram
    tmap: dict[int, int] = {}
    for i, x in enumerate(top_ids):
        if x in tmap:
            return OTHER
        tmap[x] = i
    sigma = [-1] * n
    bot_single = -1
    seen_b: set[int] = set()
    for j, x in enumerate(bot_ids):
        if x in seen_b:
            return OTHER
        seen_b.add(x)
        i = tmap.get(x)
        if i is None:
            if bot_single >= 0:
                return OTHER
            bot_single = j
        else:
            sigma[i] = j
    if bot_single < 0:
        return DiagramClass("permutation", tuple(sigma))
    top_single = sigma.index(-1)
    sigma[top_single] = bot_single
    return DiagramClass("punctured", tuple(sigma), top_single)


def classify(d: PartitionDiagram) -> DiagramClass:
    """Sort a square diagram into ``S_n``, ``S_n^-`` or neither."""
    if not d.is_square():
        raise DiagramError("classify needs a square diagram")
    n = d.top
    return _classify_labels(n, d.labels[:n], d.labels[n:])


def _induced(d: PartitionDiagram, tops: Sequence[int], bots: Sequence[int]) -> PartitionDiagram:
    lab = d.labels
    return PartitionDiagram.from_labels(len(tops), len(bots), [lab[v] for v in tops] + [lab[v] for v in bots])


def restrictions(pi: PartitionDiagram):
    """Return ``(pi_L, pi_R, pi_LR)`` for a diagram on ``2n + 2n`` vertices.

    ``pi_LR`` is ``None`` unless both halves are permutations.
    """
    if not pi.is_square() or pi.top % 2:
        raise DiagramError("restrictions need a square diagram of even arity")
    n = pi.top // 2
    N = 2 * n
    left = _induced(pi, range(n), range(N, N + n))
    right = _induced(pi, range(n, N), range(N + n, 2 * N))
    cl, cr = classify(left), classify(right)
    if cl.kind != "permutation" or cr.kind != "permutation":
        return left, right, None
    lab = pi.labels
    sizes: dict[int, int] = {}
    for x in lab:
        sizes[x] = sizes.get(x, 0) + 1
    I = {i for i in range(n) if sizes[lab[i]] == 2}
    right_top = {lab[n + j]: j for j in range(n)}
    sigma = [-1] * n
    for i in range(n):
        if i not in I:
            sigma[i] = right_top[lab[i]]
    free = sorted(set(range(n)) - set(sigma))
    for i, j in zip(sorted(I), free):
        sigma[i] = j
    return left, right, sigma_I(sigma, I)


def reconstruct(pi_L: PartitionDiagram, pi_R: PartitionDiagram, pi_LR: PartitionDiagram) -> PartitionDiagram:
    """Rebuild the diagram on ``2n + 2n`` vertices from its three restrictions."""
    cl, cr = classify(pi_L), classify(pi_R)
    if cl.kind != "permutation" or cr.kind != "permutation":
        raise DiagramError("both halves must be permutations")
    n = pi_L.top
    lr = pi_LR.labels
    N = 2 * n
    labels = [0] * (2 * N)
    for i in range(n):
        labels[i] = labels[N + cl.perm[i]] = i
    for k in range(n):
        labels[n + k] = labels[N + n + cr.perm[k]] = n + k
    # a top-left vertex still joined to a bottom vertex in pi_LR merges with the
    # matching right-hand pair
    for i in range(n):
        for j in range(n):
            if lr[n + j] == lr[i]:
                blk = labels[n + j]
                for v in range(2 * N):
                    if labels[v] == blk:
                        labels[v] = i
    return PartitionDiagram.from_labels(N, N, labels)


# -- enumeration -----------------------------------------------------------


@lru_cache(maxsize=None)
def count_completions(remaining: int, blocks: int) -> int:
    """Number of ways to extend a growth string that already uses ``blocks`` blocks."""
    if remaining == 0:
        return 1
    return blocks * count_completions(remaining - 1, blocks) + count_completions(remaining - 1, blocks + 1)


def bell(n: int) -> int:
    return 1 if n == 0 else count_completions(n - 1, 1)


def unrank_rgs(index: int, n: int) -> list[int]:
    """The ``index``-th restricted growth string of length ``n`` in lexicographic order."""
    if not 0 <= index < bell(n):
        raise IndexError(index)
    if n == 0:
        return []
    out = [0]
    m = 1
    for pos in range(1, n):
        rem = n - pos - 1
        for v in range(m + 1):
            cnt = count_completions(rem, max(m, v + 1))
            if index < cnt:
                out.append(v)
                m = max(m, v + 1)
                break
            index -= cnt
    return out


def rgs_range(n: int, start: int = 0, stop: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield growth strings of length ``n`` with lexicographic rank in ``[start, stop)``."""
    total = bell(n)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    if n == 0:
        yield ()
        return
    a = unrank_rgs(start, n)
    # prefix maxima: mx[i] = 1 + max(a[:i+1])
    mx = [0] * n
    m = 0
    for i, x in enumerate(a):
        m = max(m, x + 1)
        mx[i] = m
    remaining = stop - start
    last = n - 1
    while True:
        yield tuple(a)
        remaining -= 1
        if not remaining:
            return
        i = last
        while a[i] >= mx[i - 1]:
            i -= 1
        a[i] += 1
        m = max(mx[i - 1], a[i] + 1)
        mx[i] = m
        for k in range(i + 1, n):
            a[k] = 0
            mx[k] = m


def enumerate_diagrams(a: int, b: int, cap: int = DEFAULT_CAP, start: int = 0, stop: int | None = None) -> Iterator[PartitionDiagram]:
    """Stream every diagram ``a -> b`` once, in growth-string order."""
    if a + b > cap:
        raise EnumerationLimitError(
            f"a+b = {a + b} exceeds the enumeration cap {cap} (would enumerate Bell({a + b}) = {bell(a + b)} diagrams)"
        )
    for labels in rgs_range(a + b, start, stop):
        yield PartitionDiagram(a, b, labels)


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return permutations(range(n))


# -- text format -----------------------------------------------------------


def format_diagram(d: PartitionDiagram) -> str:
    """Blocks in braces, top vertices ``1..a``, bottom vertices primed."""
    if d.size == 0:
        return "{}"
    a = d.top

    def name(v: int) -> str:
        return str(v + 1) if v < a else f"{v - a + 1}'"

    return "".join("{" + ",".join(name(v) for v in block) + "}" for block in d.blocks)


_BLOCK = re.compile(r"\{([^{}]*)\}")


def parse_diagram(text: str, top: int | None = None, bottom: int | None = None) -> PartitionDiagram:
    """Parse ``"{1,2'}{2,1'}"``; arities default to the largest labels present."""
    s = re.sub(r"\s+", "", text)
    pos = 0
    raw: list[list[tuple[bool, int]]] = []
    for m in _BLOCK.finditer(s):
        if m.start() != pos:
            raise DiagramError(f"cannot parse diagram {text!r}")
        pos = m.end()
        body = m.group(1)
        if not body:
            continue
        block = []
        for item in body.split(","):
            primed = item.endswith("'")
            num = item[:-1] if primed else item
            if not num.isdigit() or int(num) < 1:
                raise DiagramError(f"bad vertex {item!r} in {text!r}")
            block.append((primed, int(num)))
        raw.append(block)
    if pos != len(s):
        raise DiagramError(f"cannot parse diagram {text!r}")
    a = max((k for blk in raw for p, k in blk if not p), default=0)
    b = max((k for blk in raw for p, k in blk if p), default=0)
    a = a if top is None else top
    b = b if bottom is None else bottom
    blocks = [[(a + k - 1) if p else (k - 1) for p, k in blk] for blk in raw]
    for blk, rblk in zip(blocks, raw):
        for (p, k) in rblk:
            if (p and k > b) or (not p and k > a):
                raise DiagramError(f"vertex out of range in {text!r}")
    return canonicalize(blocks, a, b)
