"""The object ``M_n = ([n], s_n)``, its ambidextrous trace and modified dimensions.

``End(M_n)`` has basis ``s_n`` and ``s_n x_n s_n``; elements are stored as
coordinates ``(alpha, beta)`` in that basis.  ``t_n`` sends both basis vectors
to 1.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable

import sympy

from . import diagrams as dg
from . import morphisms as mm
from .diagrams import DiagramError, PartitionDiagram, perm_sign
from .morphisms import LEFT, RIGHT, Morphism, RetractObject
from .scalars import TPoly, as_fraction, evaluate_scalar, simplify

__all__ = [
    "EndMnElement",
    "AmbidexterityReport",
    "SolutionSpace",
    "NotInEndMn",
    "antisymmetrizer",
    "basis_element",
    "coordinates",
    "decompose_end_Mn",
    "is_sandwiched",
    "project",
    "t_n",
    "theta",
    "theta_full",
    "verify_ambidextrous",
    "ambidextrous_solution_space",
    "mod_trace",
    "mod_dimension",
    "antisymmetric_dimension",
    "sandwich_vanishes",
]

log = logging.getLogger(__name__)


class NotInEndMn(DiagramError):
    pass


_S_CACHE: dict[int, Morphism] = {}


def antisymmetrizer(n: int) -> Morphism:
    """``s_n = (1/n!) sum sgn(sigma) sigma``."""
    s = _S_CACHE.get(n)
    if s is None:
        f = math.factorial(n)
        terms = {dg.permutation_diagram(p): Fraction(perm_sign(p), f) for p in permutations(range(n))}
        s = _S_CACHE[n] = Morphism(n, n, terms)
    return s


def _zero():
    return TPoly()


@dataclass(frozen=True)
class EndMnElement:
    """``alpha * s_n + beta * s_n x_n s_n``."""

    n: int
    alpha: object = field(default_factory=_zero)
    beta: object = field(default_factory=_zero)

    def __add__(self, other: "EndMnElement") -> "EndMnElement":
        if self.n != other.n:
            raise ValueError("elements of different End(M_n)")
        return EndMnElement(self.n, self.alpha + other.alpha, self.beta + other.beta)

    def scale(self, c) -> "EndMnElement":
        return EndMnElement(self.n, self.alpha * c, self.beta * c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndMnElement):
            return NotImplemented
        return self.n == other.n and self.alpha == other.alpha and self.beta == other.beta

    def __hash__(self):
        return hash((self.n, self.alpha, self.beta))

    def is_zero(self) -> bool:
        return not self.alpha and not self.beta

    def to_morphism(self) -> Morphism:
        s = antisymmetrizer(self.n)
        sxs = basis_element(self.n)
        return s.scale(self.alpha) + sxs.scale(self.beta)


def basis_element(n: int) -> Morphism:
    """``s_n x_n s_n``."""
    s = antisymmetrizer(n)
    return s @ Morphism.from_diagram(dg.x_diagram(n)) @ s


def coordinates(f: Morphism) -> EndMnElement:
    """Coordinates of ``s_n f s_n`` read off from the diagram classes of ``f``."""
    n = f.source
    alpha, beta = TPoly(), TPoly()
    for d, c in f.terms.items():
        cls = dg.classify(d)
        if cls.kind == "permutation":
            alpha = alpha + c * cls.sign
        elif cls.kind == "punctured":
            beta = beta + c * cls.sign
    return EndMnElement(n, alpha, beta)


def project(h: Morphism, n: int) -> Morphism:
    """``(s_n (x) id_k) h (s_n (x) id_k)`` for ``h`` on ``n + k`` strands."""
    k = h.source - n
    if n <= 1:
        return h
    p = antisymmetrizer(n).tensor(mm.identity(k))
    return p @ h @ p


def is_sandwiched(h: Morphism, n: int) -> bool:
    return h.is_square() and h.source >= n and project(h, n) == h


def decompose_end_Mn(f: Morphism) -> EndMnElement:
    if not f.is_square():
        raise NotInEndMn("not in End(M_n): morphism is not square")
    if not is_sandwiched(f, f.source):
        raise NotInEndMn("not in End(M_n)")
    return coordinates(f)


def t_n(e: EndMnElement):
    return e.alpha + e.beta


# -- Theta ------------------------------------------------------------------


_PERMS: dict[int, list[tuple[tuple[int, ...], int]]] = {}


def _signed_perms(n: int):
    p = _PERMS.get(n)
    if p is None:
        p = _PERMS[n] = [(r, perm_sign(r)) for r in permutations(range(n))]
    return p


def _closures(lab: tuple[int, ...], n: int, which: int, perms):
    """For each rho: (sgn rho, loops, class of the traced composite)."""
    nb = max(lab) + 1
    N = 2 * n
    out = []
    if which == 1:
        glue_top, glue_bot, keep_top, keep_bot = n, 3 * n, 0, N
    else:
        glue_top, glue_bot, keep_top, keep_bot = 0, N, n, 3 * n
    for rho, sg in perms:
        parent = list(range(nb))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in range(n):
            x, y = find(lab[glue_top + rho[k]]), find(lab[glue_bot + k])
            if x != y:
                parent[y] = x
        tops = [find(lab[keep_top + i]) for i in range(n)]
        bots = [find(lab[keep_bot + i]) for i in range(n)]
        roots = len({find(x) for x in range(nb)})
        loops = roots - len(set(tops) | set(bots))
        out.append((sg, loops, dg._classify_labels(n, tops, bots)))
    return out


def _row_fixed_by_transposition(lab, start: int, n: int, sizes: dict[int, int]) -> bool:
    # two vertices of the row in one block, or two singleton blocks of pi
    seen = set()
    singles = 0
    for v in range(start, start + n):
        x = lab[v]
        if x in seen:
            return True
        seen.add(x)
        if sizes[x] == 1:
            singles += 1
            if singles == 2:
                return True
    return False


def sandwich_vanishes(lab, n: int) -> bool:
    """True when a transposition inside one half-row fixes ``pi``.

    Then ``(s_n (x) s_n) pi (s_n (x) s_n) = 0`` and both Thetas vanish.  The
    test looks at blocks of ``pi`` itself; singletons of the restrictions
    ``pi_L``/``pi_R`` that are joined to the other half do not count.
    """
    sizes: dict[int, int] = {}
    for x in lab:
        sizes[x] = sizes.get(x, 0) + 1
    return any(_row_fixed_by_transposition(lab, k * n, n, sizes) for k in range(4))


def theta(pi: PartitionDiagram, which: int) -> EndMnElement:
    """``Theta_1`` (right partial trace) or ``Theta_2`` (left partial trace) of the
    ``(s_n (x) s_n)``-sandwich of ``pi``, in basis coordinates."""
    if not pi.is_square() or pi.top % 2:
        raise DiagramError("theta needs a square diagram of even arity")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    n = pi.top // 2
    f = math.factorial(n)
    alpha: dict[int, int] = {}
    beta: dict[int, int] = {}
    for sg, loops, cls in _closures(pi.labels, n, which, _signed_perms(n)):
        if cls.kind == "other":
            continue
        target = alpha if cls.kind == "permutation" else beta
        target[loops] = target.get(loops, 0) + sg * cls.sign
    return EndMnElement(n, TPoly(alpha) / f, TPoly(beta) / f)


def theta_full(pi: PartitionDiagram, which: int) -> EndMnElement:
    """Same as :func:`theta`, computed from the explicit sandwich morphism."""
    n = pi.top // 2
    s = antisymmetrizer(n)
    ss = s.tensor(s)
    h = ss @ Morphism.from_diagram(pi) @ ss
    side = RIGHT if which == 1 else LEFT
    return decompose_end_Mn(mm.partial_trace(h, side, n))


def _tn_scaled(lab, n: int, which: int, perms) -> dict[int, int]:
    """``n! * t_n(Theta_which(pi))`` as ``{power of t: integer}``."""
    acc: dict[int, int] = {}
    for sg, loops, cls in _closures(lab, n, which, perms):
        if cls.kind != "other":
            acc[loops] = acc.get(loops, 0) + sg * cls.sign
    return {k: v for k, v in acc.items() if v}


@dataclass
class AmbidexterityReport:
    n: int
    mode: str
    diagrams_checked: int
    expected: int
    failures: list = field(default_factory=list)
    short_circuited: int = 0
    elapsed: float = 0.0

    @property
    def complete(self) -> bool:
        return self.diagrams_checked == self.expected

    @property
    def verdict(self) -> bool:
        return self.complete and not self.failures


def _evaluate_scaled(poly: dict[int, int], t0) -> Fraction:
    return sum((c * t0**k for k, c in poly.items()), Fraction(0))


def _verify_chunk(n: int, t0, start: int, stop: int, debug: bool):
    perms = _signed_perms(n)
    N = 2 * n
    checked = skipped = 0
    failures = []
    for lab in dg.rgs_range(4 * n, start, stop):
        checked += 1
        if sandwich_vanishes(lab, n):
            skipped += 1
            if debug:
                pi = PartitionDiagram(N, N, lab)
                if not (theta_full(pi, 1).is_zero() and theta_full(pi, 2).is_zero()):
                    raise AssertionError(f"short circuit disagrees with full computation at {pi}")
            continue
        v1 = _tn_scaled(lab, n, 1, perms)
        v2 = _tn_scaled(lab, n, 2, perms)
        if t0 is not None:
            v1, v2 = _evaluate_scaled(v1, t0), _evaluate_scaled(v2, t0)
        if debug:
            pi = PartitionDiagram(N, N, lab)
            for which, v in ((1, v1), (2, v2)):
                full = t_n(theta_full(pi, which)) * math.factorial(n)
                fast = TPoly(v) if t0 is None else v
                if t0 is not None:
                    full = evaluate_scalar(full, {"t": t0})
                if full != fast:
                    raise AssertionError(f"fast Theta_{which} disagrees with full computation at {pi}")
        if v1 != v2:
            failures.append((lab, v1, v2))
    return checked, skipped, failures


def verify_ambidextrous(
    n: int,
    t0=None,
    jobs: int = 1,
    cap: int = dg.DEFAULT_CAP,
    debug: bool = False,
    chunk: int = 100_000,
    progress: Callable[[int, int], None] | None = None,
) -> AmbidexterityReport:
    """Check ``t_n(Theta_1(pi)) == t_n(Theta_2(pi))`` for every ``pi`` in ``P_2n``.

    ``t0=None`` checks the identity in Q[t]; otherwise at ``t = t0``.
    The diagram stream is split into rank ranges of ``chunk`` diagrams, which
    are farmed out to ``jobs`` worker processes.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if 4 * n > cap:
        raise dg.EnumerationLimitError(
            f"4n = {4 * n} exceeds the enumeration cap {cap} (would enumerate Bell({4 * n}) = {dg.bell(4 * n)} diagrams)"
        )
    if t0 is not None:
        t0 = as_fraction(t0)
        if t0.denominator == 1:
            t0 = t0.numerator
    total = dg.bell(4 * n)
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    start_time = time.perf_counter()
    checked = skipped = 0
    raw_failures = []

    def absorb(res):
        nonlocal checked, skipped
        c, s, f = res
        checked += c
        skipped += s
        raw_failures.extend(f)
        if progress is not None:
            progress(checked, total)

    if jobs <= 1 or len(ranges) == 1:
        for s, e in ranges:
            absorb(_verify_chunk(n, t0, s, e, debug))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_verify_chunk, n, t0, s, e, debug) for s, e in ranges]
            for fut in futures:
                absorb(fut.result())

    fact = math.factorial(n)
    failures = []
    for lab, v1, v2 in sorted(raw_failures, key=lambda r: r[0]):
        pi = PartitionDiagram(2 * n, 2 * n, lab)
        if t0 is None:
            failures.append((pi, TPoly(v1) / fact, TPoly(v2) / fact))
        else:
            failures.append((pi, Fraction(v1) / fact, Fraction(v2) / fact))
    return AmbidexterityReport(
        n=n,
        mode="generic" if t0 is None else f"t={t0}",
        diagrams_checked=checked,
        expected=total,
        failures=failures,
        short_circuited=skipped,
        elapsed=time.perf_counter() - start_time,
    )


# -- uniqueness at n = 1 ---------------------------------------------------


@dataclass(frozen=True)
class SolutionSpace:
    """Linear functionals ``lambda`` on End(M_1) with ``lambda(tr_L h) = lambda(tr_R h)``.

    Basis vectors list ``(lambda(id_1), lambda(x_1))``.
    """

    dimension: int
    basis: tuple[tuple[object, object], ...]
    constraints: int


def ambidextrous_solution_space(t0=None) -> SolutionSpace:
    """Solve the ambidexterity constraints on End(M_1) exactly.

    With ``t0=None`` the system is solved over Q(t).
    """
    basis = (dg.identity(1), dg.x_diagram(1))
    tsym = sympy.Symbol("t")

    def to_sympy(c):
        if t0 is not None:
            return sympy.Rational(str(evaluate_scalar(c, {"t": t0})))
        return sum((sympy.Rational(str(v)) * tsym**e for e, v in c.coeffs.items()), sympy.Integer(0))

    rows = []
    for h in dg.enumerate_diagrams(2, 2):
        hm = Morphism.from_diagram(h)
        diff = mm.partial_trace(hm, LEFT, 1) - mm.partial_trace(hm, RIGHT, 1)
        rows.append([to_sympy(diff.coefficient(d)) for d in basis])
    M = sympy.Matrix(rows)
    null = M.nullspace(simplify=True)
    vecs = []
    for v in null:
        v = v.applyfunc(sympy.simplify)
        pivot = next(x for x in v if x != 0)
        v = (v / pivot).applyfunc(sympy.simplify)
        vecs.append(tuple(_from_sympy(x, tsym) for x in v))
    return SolutionSpace(dimension=len(vecs), basis=tuple(vecs), constraints=len(rows))


def _from_sympy(x, tsym):
    x = sympy.nsimplify(x)
    if x.is_Rational:
        return Fraction(int(x.p), int(x.q))
    poly = sympy.Poly(x, tsym)
    return simplify(TPoly({int(m[0]): Fraction(str(c)) for m, c in poly.terms()}))


# -- modified trace on the ideal generated by M_n ---------------------------


def mod_trace(h: Morphism, n: int):
    """``t_n(tr_R(h))`` for ``h`` in End(M_n (x) [k]) sandwiched on the first ``n`` strands."""
    if not h.is_square() or h.source < n:
        raise NotInEndMn(f"not an endomorphism of M_{n} (x) [k]")
    if not is_sandwiched(h, n):
        raise NotInEndMn(f"morphism is not sandwiched by s_{n} on its first {n} strands")
    k = h.source - n
    return t_n(coordinates(mm.partial_trace(h, RIGHT, k)))


def mod_dimension(obj: RetractObject, n: int):
    """Modified dimension of ``([n+k], e)`` using the trace built from ``t_n``."""
    return mod_trace(obj.idempotent, n)


def antisymmetric_dimension(m: int, t0=None, check_limit: int = 5):
    """``d(([m], s_m))`` using the trace generated by ``t_1`` (``L_m`` when ``t0 == 0``).

    Idempotence of ``s_m`` is verified for ``m <= check_limit``; above that the
    n!^2 products are skipped.
    """
    obj = RetractObject(m, antisymmetrizer(m), check=m <= check_limit)
    d = mod_dimension(obj, 1)
    if t0 is None:
        return simplify(d)
    return evaluate_scalar(d, {"t": t0})
