"""Morphisms of Rep(S_t): finite linear combinations of partition diagrams.

``f @ g`` is the composite ``f o g`` (``g`` is drawn atop ``f``).  Coefficients
are :class:`~deligne.scalars.TPoly` by default; the graded category reuses the
same class with :class:`~deligne.scalars.QLaurent` coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import diagrams as dg
from .diagrams import DiagramError, PartitionDiagram, UnionFind
from .scalars import QLaurent, TPoly, as_fraction, evaluate_scalar, format_scalar, parse_scalar, times_t_power

__all__ = [
    "Morphism",
    "RetractObject",
    "LEFT",
    "RIGHT",
    "mor_compose",
    "mor_tensor",
    "identity",
    "zero",
    "ev",
    "coev",
    "ev_prime",
    "coev_prime",
    "structure_maps",
    "braiding",
    "permutation",
    "partial_trace",
    "partial_trace_via_duality",
    "categorical_trace",
    "is_idempotent",
    "is_negligible",
    "closed_loops",
    "format_morphism",
    "parse_morphism",
]

LEFT = "left"
RIGHT = "right"


def _coerce_coeff(c):
    if isinstance(c, (TPoly, QLaurent)):
        return c
    return TPoly.const(as_fraction(c))


class Morphism:
    """A linear combination of diagrams ``source -> target``."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: int, target: int, terms: Mapping[PartitionDiagram, object] | None = None):
        self.source = source
        self.target = target
        clean: dict[PartitionDiagram, object] = {}
        for d, c in (terms or {}).items():
            if d.top != source or d.bottom != target:
                raise DiagramError(f"diagram {d} does not have arities {source}->{target}")
            c = _coerce_coeff(c)
            if c:
                clean[d] = c
        self.terms = clean

    @classmethod
    def _raw(cls, source: int, target: int, terms: dict) -> "Morphism":
        m = object.__new__(cls)
        m.source, m.target, m.terms = source, target, terms
        return m

    @classmethod
    def from_diagram(cls, d: PartitionDiagram, coeff=1) -> "Morphism":
        return cls(d.top, d.bottom, {d: coeff})

    def is_square(self) -> bool:
        return self.source == self.target

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.terms == other.terms

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def _check_same(self, other: "Morphism"):
        if (self.source, self.target) != (other.source, other.target):
            raise DiagramError("cannot add morphisms with different arities")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_same(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            s = terms[d] + c if d in terms else c
            if s:
                terms[d] = s
            else:
                terms.pop(d, None)
        return Morphism._raw(self.source, self.target, terms)

    def __neg__(self) -> "Morphism":
        return Morphism._raw(self.source, self.target, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, s) -> "Morphism":
        s = _coerce_coeff(s)
        terms = {}
        for d, c in self.terms.items():
            v = c * s
            if v:
                terms[d] = v
        return Morphism._raw(self.source, self.target, terms)

    def __mul__(self, s) -> "Morphism":
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return mor_compose(self, other)

    def tensor(self, other: "Morphism") -> "Morphism":
        return mor_tensor(self, other)

    def coefficient(self, d: PartitionDiagram):
        return self.terms.get(d, TPoly())

    def map_coefficients(self, fn) -> "Morphism":
        return Morphism(self.source, self.target, {d: fn(c) for d, c in self.terms.items()})

    def evaluate(self, t0) -> "Morphism":
        """Specialize ``t`` to a rational value (coefficients become constants)."""
        return self.map_coefficients(lambda c: evaluate_scalar(c, {"t": t0}))

    def __str__(self) -> str:
        return format_morphism(self)

    def __repr__(self) -> str:
        return f"Morphism({self.source}, {self.target}, {format_morphism(self)!r})"


def mor_compose(f: Morphism, g: Morphism) -> Morphism:
    """``f o g``: each diagram product is scaled by ``t`` to the number of middle loops."""
    if g.target != f.source:
        raise DiagramError(f"arity mismatch composing {f.source}->{f.target} after {g.source}->{g.target}")
    terms: dict[PartitionDiagram, object] = {}
    for dg_, cg in g.terms.items():
        for df, cf in f.terms.items():
            d, loops = dg.compose(dg_, df)
            c = times_t_power(cg * cf, loops)
            if d in terms:
                c = terms[d] + c
            terms[d] = c
    return Morphism._raw(g.source, f.target, {d: c for d, c in terms.items() if c})


def mor_tensor(f: Morphism, g: Morphism) -> Morphism:
    terms: dict[PartitionDiagram, object] = {}
    for df, cf in f.terms.items():
        for dg_, cg in g.terms.items():
            d = dg.tensor(df, dg_)
            c = cf * cg
            if d in terms:
                c = terms[d] + c
            terms[d] = c
    return Morphism._raw(f.source + g.source, f.target + g.target, {d: c for d, c in terms.items() if c})


def identity(n: int) -> Morphism:
    return Morphism.from_diagram(dg.identity(n))


def zero(a: int, b: int) -> Morphism:
    return Morphism(a, b)


def permutation(sigma) -> Morphism:
    return Morphism.from_diagram(dg.permutation_diagram(sigma))


def ev(n: int) -> Morphism:
    """``ev_n: [2n] -> [0]`` with nested arcs ``{T_i, T_(2n+1-i)}``."""
    return Morphism.from_diagram(dg.canonicalize([[i, 2 * n - 1 - i] for i in range(n)], 2 * n, 0))


def coev(n: int) -> Morphism:
    return Morphism.from_diagram(dg.flip(next(iter(ev(n).terms))))


def braiding(n: int, m: int) -> Morphism:
    """Move the first ``n`` strands past the last ``m``."""
    sigma = [m + i for i in range(n)] + list(range(m))
    return permutation(sigma)


def ev_prime(n: int) -> Morphism:
    # the twist on [n] is the identity, so ev' = ev o c
    return ev(n) @ braiding(n, n)


def coev_prime(n: int) -> Morphism:
    return braiding(n, n) @ coev(n)


def structure_maps(n: int) -> dict[str, Morphism]:
    return {"ev": ev(n), "coev": coev(n), "ev_prime": ev_prime(n), "coev_prime": coev_prime(n)}


def _partial_trace_diagram(d: PartitionDiagram, side: str, w: int) -> tuple[PartitionDiagram, int]:
    n = d.top
    m = n - w
    lab = d.labels
    uf = UnionFind(d.num_blocks)
    if side == RIGHT:
        traced, kept = range(m, n), range(m)
    else:
        traced, kept = range(w), range(w, n)
    for i in traced:
        uf.union(lab[i], lab[n + i])
    find = uf.find
    out = [find(lab[i]) for i in kept] + [find(lab[n + i]) for i in kept]
    loops = len({find(x) for x in range(d.num_blocks)}) - len(set(out))
    return dg.PartitionDiagram.from_labels(m, m, out), loops


def partial_trace(f: Morphism, side: str, w: int) -> Morphism:
    """Close ``w`` strands on the given side by joining ``T_i`` to ``B_i``."""
    if not f.is_square():
        raise DiagramError("partial trace needs a square morphism")
    if not 0 <= w <= f.source:
        raise DiagramError(f"cannot trace {w} strands of a {f.source}-strand morphism")
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    if w == 0:
        return f
    terms: dict[PartitionDiagram, object] = {}
    for d, c in f.terms.items():
        r, loops = _partial_trace_diagram(d, side, w)
        c = times_t_power(c, loops)
        if r in terms:
            c = terms[r] + c
        terms[r] = c
    m = f.source - w
    return Morphism._raw(m, m, {d: c for d, c in terms.items() if c})


def partial_trace_via_duality(f: Morphism, side: str, w: int) -> Morphism:
    """The same partial trace, built from ev/coev/ev'/coev' by composition."""
    m = f.source - w
    if side == RIGHT:
        closing = identity(m).tensor(ev_prime(w))
        opening = identity(m).tensor(coev(w))
        return closing @ f.tensor(identity(w)) @ opening
    closing = ev(w).tensor(identity(m))
    opening = coev_prime(w).tensor(identity(m))
    return closing @ identity(w).tensor(f) @ opening


def categorical_trace(f: Morphism):
    """Close every strand; the coefficient of the empty diagram."""
    r = partial_trace(f, RIGHT, f.source)
    return r.coefficient(dg.identity(0))


def is_idempotent(e: Morphism, t0=None) -> bool:
    """``e o e == e`` exactly, in Q[t] or (with ``t0``) after setting ``t = t0``."""
    if not e.is_square():
        return False
    if t0 is None:
        return e @ e == e
    return (e @ e).evaluate(t0) == e.evaluate(t0)


def closed_loops(d: PartitionDiagram, h: PartitionDiagram) -> int:
    """Number of components of the closure of ``d o h`` (``h`` atop ``d``)."""
    # h: a -> b, d: b -> a; glue h-bottom to d-top and d-bottom to h-top
    a, b = h.top, h.bottom
    hl, dl = h.labels, d.labels
    m1 = h.num_blocks
    uf = UnionFind(m1 + d.num_blocks)
    for j in range(b):
        uf.union(hl[a + j], m1 + dl[j])
    for i in range(a):
        uf.union(m1 + dl[b + i], hl[i])
    find = uf.find
    return len({find(x) for x in range(m1 + d.num_blocks)})


def is_negligible(g: Morphism, t0, cap: int = dg.DEFAULT_CAP) -> bool:
    """True iff ``tr(g o h)`` vanishes at ``t = t0`` for every diagram ``h``."""
    t0 = as_fraction(t0)
    a, b = g.source, g.target
    if a + b > cap:
        raise dg.EnumerationLimitError(f"a+b = {a + b} exceeds the enumeration cap {cap}")
    coeffs = [(d, evaluate_scalar(c, {"t": t0})) for d, c in g.terms.items()]
    coeffs = [(d, c) for d, c in coeffs if c]
    if not coeffs:
        return True
    for h in dg.enumerate_diagrams(b, a, cap=cap):
        total = Fraction(0)
        for d, c in coeffs:
            total += c * t0 ** closed_loops(d, h)
        if total:
            return False
    return True


@dataclass(frozen=True, init=False)
class RetractObject:
    """The object ``([n], e)`` for an idempotent ``e`` on ``[n]``."""

    arity: int
    idempotent: Morphism

    def __init__(self, arity: int, idempotent: Morphism, check: bool = True, t0=None):
        if idempotent.source != arity or idempotent.target != arity:
            raise DiagramError("idempotent must be an endomorphism of [arity]")
        if check and not is_idempotent(idempotent, t0):
            raise DiagramError("morphism is not idempotent")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "idempotent", idempotent)


# -- text format -----------------------------------------------------------


def format_morphism(f: Morphism) -> str:
    """``(c1)*{...} + (c2)*{...}`` with terms in growth-string order; ``0`` if empty."""
    if not f.terms:
        return "0"
    items = sorted(f.terms.items(), key=lambda kv: kv[0].labels)
    return " + ".join(f"({format_scalar(c)})*{dg.format_diagram(d)}" for d, c in items)


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_morphism(text: str, source: int | None = None, target: int | None = None) -> Morphism:
    """Inverse of :func:`format_morphism`; a bare diagram means coefficient 1."""
    text = text.strip()
    if text == "0":
        if source is None or target is None:
            raise DiagramError("the zero morphism needs explicit arities")
        return zero(source, target)
    parsed = []
    for term in _split_terms(text):
        brace = term.find("{")
        if brace < 0:
            raise DiagramError(f"term without a diagram: {term!r}")
        head, body = term[:brace].strip(), term[brace:]
        if head:
            if not head.endswith("*"):
                raise DiagramError(f"cannot parse term {term!r}")
            coeff = parse_scalar(head[:-1])
        else:
            coeff = 1
        parsed.append((coeff, body))
    tops = source
    bots = target
    if tops is None or bots is None:
        guesses = [dg.parse_diagram(body) for _, body in parsed]
        tops = max(d.top for d in guesses) if tops is None else tops
        bots = max(d.bottom for d in guesses) if bots is None else bots
    out = zero(tops, bots)
    for coeff, body in parsed:
        out = out + Morphism.from_diagram(dg.parse_diagram(body, tops, bots), coeff)
    return out

