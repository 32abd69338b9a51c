"""Acceptance criteria, each run at its stated tolerance and time budget.

Every criterion prints one line, ``PASS`` or ``FAIL`` with timing, and then
asserts.  Run directly (``python tests/test_acceptance.py``) for the summary
alone.
"""

from __future__ import annotations

import contextlib
import io
import random
import time
from fractions import Fraction
from itertools import permutations, product
from math import factorial

import pytest

from deligne import diagrams as dg
from deligne import graded as gr
from deligne import knots as kn
from deligne import modtrace as mt
from deligne import morphisms as mm
from deligne import oracle as orc
from deligne.cli import main
from deligne.scalars import QLaurent, T, TPoly


def _cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, buf.getvalue()


# -- the criteria ------------------------------------------------------------------
# each returns (ok, detail, budget_seconds or None)


def crit_dimensions():
    code, out = _cli("dims", "--t", "0", "--n", "8", "--format", "machine")
    got = [line.split("\t") for line in out.splitlines()]
    want = [[str(m), str(Fraction((-1) ** (m + 1), m))] for m in range(1, 9)]
    return code == 0 and got == want, "d_n = (-1)^(n+1)/n, n = 1..8", 10


def crit_ambidexterity():
    r1 = mt.verify_ambidextrous(1)
    r2 = mt.verify_ambidextrous(2)
    ok = r1.verdict and r1.diagrams_checked == 15 and r2.verdict and r2.diagrams_checked == 4140
    return ok, f"generic t: n=1 {r1.diagrams_checked} diagrams, n=2 {r2.diagrams_checked} diagrams, 0 failures", 60


def crit_ambidexterity_n3():
    r = mt.verify_ambidextrous(3, Fraction(2), jobs=4)
    detail = f"t=2, n=3: {r.diagrams_checked} diagrams, {len(r.failures)} failures, {r.short_circuited} short-circuited"
    return r.verdict and r.diagrams_checked == 4_213_597, detail, 30 * 60


def crit_uniqueness():
    sol = mt.ambidextrous_solution_space(0)
    return sol.dimension == 1 and sol.basis == ((1, 1),), "t=0: span of lambda(id_1) = lambda(x_1) = 1", None


def crit_sandwich_suite():
    for n in (1, 2, 3):
        s, sxs = mt.antisymmetrizer(n), mt.basis_element(n)
        for sigma in permutations(range(n)):
            p, sign = mm.permutation(sigma), dg.perm_sign(sigma)
            if not (p @ s == s.scale(sign) == s @ p):
                return False, f"sign absorption fails at {sigma}", 30
            for i in range(n):
                got = s @ mm.Morphism.from_diagram(dg.sigma_I(sigma, {i})) @ s
                if got != sxs.scale(sign):
                    return False, f"punctured sandwich fails at {sigma}, {i}", 30
        for pi in dg.enumerate_diagrams(n, n):
            if dg.classify(pi).kind == "other" and (s @ mm.Morphism.from_diagram(pi) @ s):
                return False, f"sandwich of {dg.format_diagram(pi)} is nonzero", 30
    return True, "sign absorption, vanishing and punctured sandwiches, n <= 3", 30


def _cycles(sigma) -> int:
    seen, count = set(), 0
    for i in range(len(sigma)):
        if i not in seen:
            count += 1
            while i not in seen:
                seen.add(i)
                i = sigma[i]
    return count


def crit_negligibility():
    for n in range(1, 5):
        s = mt.antisymmetrizer(n)
        for t0 in range(7):
            if mm.is_negligible(s, t0) != (t0 < n):
                return False, f"is_negligible(s_{n}, {t0}) is wrong", None
    for n in range(1, 6):
        falling = TPoly.const(1)
        for k in range(n):
            falling = falling * (T - k)
        falling = falling * Fraction(1, factorial(n))
        # a permutation closes into one loop per cycle
        perm_sum = TPoly({})
        for sigma in permutations(range(n)):
            perm_sum = perm_sum + TPoly.monomial(_cycles(sigma), Fraction(dg.perm_sign(sigma), factorial(n)))
        if not (mm.categorical_trace(s := mt.antisymmetrizer(n)) == perm_sum == falling):
            return False, f"dim s_{n} mismatch", None
    return True, "negligible iff t0 < n (n <= 4, t0 <= 6); dim s_n = t(t-1)..(t-n+1)/n! (n <= 5)", None


def crit_graded_lift():
    bad = gr.graded_ambidexterity_failures(gr.M_ab(1, 0)) + gr.graded_ambidexterity_failures(gr.M_ab(0, 1))
    return not bad, "q symbolic, M_{1,0} and M_{0,1}: 15 generators each, ambidextrous and F(Tr_R h) = Tr_R(F h)", None


def crit_writhe():
    import warnings

    corpus = kn.knot_corpus()
    for name, word in corpus.items():
        w = kn.writhe(word)
        for a, b in ((1, 0), (2, 0), (2, 1)):
            if kn.evaluate_knot(word, (a, b)) != QLaurent.q_power((a - b) ** 2 * w):
                return False, f"{name} at ({a},{b})", 5
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if kn.evaluate_knot(word, (1, 1)) != 1:
                return False, f"{name} at (1,1) is not 1", 5
    if kn.writhe(corpus["figure-eight"]) != 0:
        return False, "figure-eight writhe", 5
    return True, f"{len(corpus)} words, labels (1,0) (2,0) (2,1) (1,1)", 5


def crit_oracle():
    reps = [orc.check_homomorphism(orc.exhaustive_pairs(2), t0) for t0 in (2, 3)]
    reps.append(orc.check_homomorphism(orc.random_pairs(3, 1000, seed=0), 3))
    ok = all(r.ok for r in reps) and orc.realization_rank(list(dg.enumerate_diagrams(2, 2)), 4) == 15
    return ok, "P_2 x P_2 at t0=2,3 and 1000 random P_3 pairs at t0=3 (compose, Kronecker, trace)", 60


def crit_structure():
    rng = random.Random(0)

    def rand(a, b):
        return dg.PartitionDiagram.from_labels(a, b, dg.unrank_rgs(rng.randrange(dg.bell(a + b)), a + b))

    p2 = list(dg.enumerate_diagrams(2, 2))
    for f, g, h in product(p2, repeat=3):
        fg, l1 = dg.compose(f, g)
        left, l2 = dg.compose(fg, h)
        gh, l3 = dg.compose(g, h)
        right, l4 = dg.compose(f, gh)
        if left != right or l1 + l2 != l3 + l4:
            return False, "associativity", None
    for _ in range(300):
        f, f2, g, g2 = rand(1, 2), rand(2, 2), rand(2, 1), rand(1, 3)
        lhs, l = dg.compose(dg.tensor(f, g), dg.tensor(f2, g2))
        d1, l1 = dg.compose(f, f2)
        d2, l2 = dg.compose(g, g2)
        if lhs != dg.tensor(d1, d2) or l != l1 + l2:
            return False, "interchange", None
    for n in range(4):
        idn, ev, coev = mm.identity(n), mm.ev(n), mm.coev(n)
        evp, coevp = mm.ev_prime(n), mm.coev_prime(n)
        if not (idn.tensor(ev) @ coev.tensor(idn) == idn == ev.tensor(idn) @ idn.tensor(coev)):
            return False, "snake", None
        if not (evp.tensor(idn) @ idn.tensor(coevp) == idn == idn.tensor(evp) @ coevp.tensor(idn)):
            return False, "primed snake", None
    ms = [mm.Morphism.from_diagram(d) for d in p2]
    for f, g in product(ms, repeat=2):
        if mm.categorical_trace(f @ g) != mm.categorical_trace(g @ f):
            return False, "cyclicity", None
        if mm.categorical_trace(f.tensor(g)) != mm.categorical_trace(f) * mm.categorical_trace(g):
            return False, "multiplicativity", None
    counts = [sum(1 for _ in dg.enumerate_diagrams(k, k)) for k in (1, 2, 4)]
    if counts != [2, 15, 4140]:
        return False, f"enumeration counts {counts}", None
    return True, "associativity, interchange, snakes, trace cyclicity/multiplicativity, Bell(2,4,8) = 2,15,4140", None


CRITERIA = [
    ("1 modified dimensions at t=0", crit_dimensions),
    ("2 ambidexterity n<=2 (generic t)", crit_ambidexterity),
    ("2 ambidexterity n=3 stress (t=2)", crit_ambidexterity_n3),
    ("3 uniqueness at n=1", crit_uniqueness),
    ("4 antisymmetrizer sandwich suite", crit_sandwich_suite),
    ("5 negligibility and dim s_n", crit_negligibility),
    ("6 graded lift", crit_graded_lift),
    ("7 writhe invariant", crit_writhe),
    ("8 oracle equivalence", crit_oracle),
    ("9 structural suites", crit_structure),
]


def evaluate(name, fn) -> tuple[bool, str]:
    start = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - start
    within = budget is None or elapsed < budget
    limit = "" if budget is None else f" / {budget}s"
    line = f"{'PASS' if ok and within else 'FAIL'}  {name}: {detail} [{elapsed:.1f}s{limit}]"
    return ok and within, line


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0].split()[0] + "-" + c[1].__name__ for c in CRITERIA])
def test_acceptance(name, fn, capsys):
    passed, line = evaluate(name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(n, f) for n, f in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(p for p, _ in results) else 1)
