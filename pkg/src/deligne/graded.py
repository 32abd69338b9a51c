"""The graded variant: objects ``[a, b]`` of degree ``a - b`` with a q-scaled braiding.

Morphism bodies are ordinary diagram combinations on ``a + b`` strands with
:class:`~deligne.scalars.QLaurent` coefficients.  Hom spaces between objects of
different degree are zero, so constructing or composing across degrees is an
error.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import morphisms as mm
from .diagrams import DiagramError
from .modtrace import antisymmetrizer, coordinates, is_sandwiched, t_n, NotInEndMn
from .morphisms import LEFT, RIGHT, Morphism
from .scalars import QLaurent, ScalarError, TPoly

__all__ = [
    "GradedObject",
    "GradedMorphism",
    "GradingError",
    "M_ab",
    "graded_identity",
    "graded_braiding",
    "graded_braiding_inverse",
    "graded_twist",
    "graded_ev",
    "graded_coev",
    "graded_ev_prime",
    "graded_coev_prime",
    "graded_partial_trace",
    "degrade",
    "graded_mod_trace",
    "graded_ambidexterity_failures",
]


class GradingError(DiagramError):
    pass


def _q(k: int) -> QLaurent:
    return QLaurent.q_power(k)


def _lift(f: Morphism) -> Morphism:
    """Re-coefficient a morphism over QLaurent."""
    return Morphism(f.source, f.target, {d: QLaurent({0: c}) if isinstance(c, TPoly) else c for d, c in f.terms.items()})


@dataclass(frozen=True)
class GradedObject:
    a: int
    b: int
    idempotent: Morphism | None = None

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("[a,b] needs nonnegative a, b")
        e = self.idempotent
        if e is not None:
            if e.source != self.a + self.b or e.target != self.a + self.b:
                raise GradingError("idempotent has the wrong arity")
            if e @ e != e:
                raise GradingError("idempotent is not idempotent")

    @property
    def degree(self) -> int:
        return self.a - self.b

    @property
    def arity(self) -> int:
        return self.a + self.b

    def dual(self) -> "GradedObject":
        return GradedObject(self.b, self.a)

    def tensor(self, other: "GradedObject") -> "GradedObject":
        return GradedObject(self.a + other.a, self.b + other.b)

    def identity_body(self) -> Morphism:
        return self.idempotent if self.idempotent is not None else mm.identity(self.arity)

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


UNIT = GradedObject(0, 0)


def M_ab(a: int, b: int) -> GradedObject:
    """``([a,b], s_(a+b))``."""
    return GradedObject(a, b, antisymmetrizer(a + b))


@dataclass(frozen=True)
class GradedMorphism:
    source: GradedObject
    target: GradedObject
    body: Morphism

    def __post_init__(self):
        if self.source.degree != self.target.degree:
            if self.body:
                raise GradingError(
                    f"no nonzero morphisms {self.source} -> {self.target}: degrees {self.source.degree} != {self.target.degree}"
                )
        if self.body.source != self.source.arity or self.body.target != self.target.arity:
            raise GradingError("body arities do not match the objects")
        object.__setattr__(self, "body", _lift(self.body))

    def __matmul__(self, other: "GradedMorphism") -> "GradedMorphism":
        if other.target.degree != self.source.degree or other.target.arity != self.source.arity:
            raise GradingError(f"cannot compose {self.source}->{self.target} after {other.source}->{other.target}")
        return GradedMorphism(other.source, self.target, self.body @ other.body)

    def tensor(self, other: "GradedMorphism") -> "GradedMorphism":
        return GradedMorphism(
            self.source.tensor(other.source), self.target.tensor(other.target), self.body.tensor(other.body)
        )

    def scale(self, c) -> "GradedMorphism":
        return GradedMorphism(self.source, self.target, self.body.scale(c))

    def __add__(self, other: "GradedMorphism") -> "GradedMorphism":
        return GradedMorphism(self.source, self.target, self.body + other.body)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMorphism):
            return NotImplemented
        return (
            (self.source.a, self.source.b, self.target.a, self.target.b) == (other.source.a, other.source.b, other.target.a, other.target.b)
            and self.body == other.body
        )

    __hash__ = None


def graded_identity(V: GradedObject) -> GradedMorphism:
    return GradedMorphism(V, V, V.identity_body())


def graded_braiding(V: GradedObject, W: GradedObject) -> GradedMorphism:
    """``c_{V,W} = q^(deg V * deg W) beta``."""
    body = mm.braiding(V.arity, W.arity).scale(_q(V.degree * W.degree))
    return GradedMorphism(V.tensor(W), W.tensor(V), body)


def graded_braiding_inverse(V: GradedObject, W: GradedObject) -> GradedMorphism:
    """``c_{V,W}^-1 : W (x) V -> V (x) W``."""
    body = mm.braiding(W.arity, V.arity).scale(_q(-V.degree * W.degree))
    return GradedMorphism(W.tensor(V), V.tensor(W), body)


def graded_twist(V: GradedObject) -> GradedMorphism:
    return GradedMorphism(V, V, mm.identity(V.arity).scale(_q(V.degree**2)))


def graded_ev(V: GradedObject) -> GradedMorphism:
    """``ev : V* (x) V -> 1``, the ungraded nested pairing."""
    return GradedMorphism(V.dual().tensor(V), UNIT, mm.ev(V.arity))


def graded_coev(V: GradedObject) -> GradedMorphism:
    """``coev : 1 -> V (x) V*``."""
    return GradedMorphism(UNIT, V.tensor(V.dual()), mm.coev(V.arity))


def graded_ev_prime(V: GradedObject) -> GradedMorphism:
    """``ev o c_{V,V*} o (theta_V (x) id)``."""
    Vs = V.dual()
    return graded_ev(V) @ graded_braiding(V, Vs) @ graded_twist(V).tensor(graded_identity(Vs))


def graded_coev_prime(V: GradedObject) -> GradedMorphism:
    """``(id (x) theta_V) o c_{V,V*} o coev``."""
    Vs = V.dual()
    return graded_identity(Vs).tensor(graded_twist(V)) @ graded_braiding(V, Vs) @ graded_coev(V)


def graded_partial_trace(h: GradedMorphism, V: GradedObject, W: GradedObject, side: str) -> GradedMorphism:
    """``Tr_R`` (closing ``W``) or ``Tr_L`` (closing ``V``) of ``h`` in End(V (x) W)."""
    plain_V, plain_W = GradedObject(V.a, V.b), GradedObject(W.a, W.b)
    VW = plain_V.tensor(plain_W)
    if (h.source.a, h.source.b) != (VW.a, VW.b) or (h.target.a, h.target.b) != (VW.a, VW.b):
        raise GradingError("h must be an endomorphism of V (x) W")
    if side == RIGHT:
        idV = graded_identity(plain_V)
        opening = idV.tensor(graded_coev(plain_W))
        closing = idV.tensor(graded_ev_prime(plain_W))
        middle = h.tensor(graded_identity(plain_W.dual()))
        out = closing @ middle @ opening
        return GradedMorphism(V, V, out.body)
    if side == LEFT:
        idW = graded_identity(plain_W)
        opening = graded_coev_prime(plain_V).tensor(idW)
        closing = graded_ev(plain_V).tensor(idW)
        middle = graded_identity(plain_V.dual()).tensor(h)
        out = closing @ middle @ opening
        return GradedMorphism(W, W, out.body)
    raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")


def degrade(f: GradedMorphism, q=None) -> Morphism:
    """The degrading functor: the same diagram combination, viewed ungraded.

    ``q=None`` refuses bodies that still involve ``q``; ``q="symbolic"`` keeps
    Laurent coefficients; a rational ``q`` specializes.
    """
    body = f.body
    if q == "symbolic":
        return body
    if q is None:
        if any(c.involves_q() for c in body.terms.values()):
            raise ScalarError("specify q handling: the morphism still depends on q")
        return body.map_coefficients(lambda c: c.q_free_part())
    return body.map_coefficients(lambda c: c.specialize_q(q))


def graded_mod_trace(h: GradedMorphism):
    """``t_n`` of the degraded body, carrying powers of ``q`` linearly."""
    n = h.source.arity
    if h.target.arity != n:
        raise GradingError("graded_mod_trace needs an endomorphism")
    if not is_sandwiched(h.body, n):
        raise NotInEndMn(f"body is not sandwiched by s_{n}")
    return t_n(coordinates(h.body))


def graded_ambidexterity_failures(V: GradedObject) -> list:
    """Generators ``h`` of End(V (x) V) where the lifted trace is not ambidextrous.

    ``V`` must be some ``M_{a,b}``.  Each partition diagram on ``2n + 2n``
    strands is sandwiched by ``s_n (x) s_n`` and closed on either side; both
    closures are compared through :func:`graded_mod_trace`.  Also checked: the
    degraded right trace equals the ungraded right trace of the degraded ``h``.
    """
    from .diagrams import enumerate_diagrams

    n = V.arity
    s = V.identity_body()
    p = s.tensor(s)
    VV = GradedObject(2 * V.a, 2 * V.b)
    bad = []
    for pi in enumerate_diagrams(2 * n, 2 * n):
        h = GradedMorphism(VV, VV, p @ Morphism.from_diagram(pi) @ p)
        right = graded_partial_trace(h, V, V, RIGHT)
        left = graded_partial_trace(h, V, V, LEFT)
        if graded_mod_trace(left) != graded_mod_trace(right):
            bad.append((pi, "ambidexterity"))
        elif degrade(right, "symbolic") != mm.partial_trace(degrade(h, "symbolic"), RIGHT, n):
            bad.append((pi, "degrading"))
    return bad
