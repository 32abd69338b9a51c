import random
from itertools import permutations, product

import pytest

from deligne import diagrams as dg
from deligne.diagrams import PartitionDiagram, canonicalize, compose, flip, tensor

# vertex helpers for hand-built diagrams: T(i), B(i) are 1-based as in the text format


def T(i):
    return ("T", i)


def B(i):
    return ("B", i)


def make(blocks, a, b):
    return canonicalize([[v[1] - 1 if v[0] == "T" else a + v[1] - 1 for v in blk] for blk in blocks], a, b)


def bell_by_counting(n):
    """Count restricted growth strings directly; no recursion shared with the package."""
    count = 0
    for s in product(range(n), repeat=n):
        if all(s[i] <= max(s[:i], default=-1) + 1 for i in range(n)):
            count += 1
    return count


ID1 = dg.identity(1)
X1 = dg.x_diagram(1)
SWAP = dg.permutation_diagram((1, 0))


def random_diagram(rng, a, b):
    n = a + b
    return PartitionDiagram.from_labels(a, b, dg.unrank_rgs(rng.randrange(dg.bell(n)), n))


# -- canonical form -------------------------------------------------------------


def test_canonicalize_examples():
    assert make([[B(1), T(1)]], 1, 1) == ID1
    assert make([[T(2), B(1)], [B(2), T(1)]], 2, 2) == SWAP
    assert dg.format_diagram(SWAP) == "{1,2'}{2,1'}"
    assert make([[T(1)], [B(1)]], 1, 1) == X1
    assert X1 != ID1


@pytest.mark.parametrize("blocks", [[[0, 1], [1]], [[0]], [[0, 5], [1]]])
def test_canonicalize_rejects_non_partitions(blocks):
    with pytest.raises(dg.DiagramError, match="not a partition"):
        canonicalize(blocks, 1, 1)


# -- composition -------------------------------------------------------------------


def test_compose_examples():
    for d in dg.enumerate_diagrams(2, 2):
        assert compose(dg.identity(2), d) == (d, 0)
        assert compose(d, dg.identity(2)) == (d, 0)
    assert compose(X1, X1) == (X1, 1)
    ev = make([[T(1), T(2)]], 2, 0)
    coev = make([[B(1), B(2)]], 0, 2)
    # coev drawn above ev: the middle row closes into one loop
    assert compose(coev, ev) == (dg.identity(0), 1)


def test_compose_arity_mismatch():
    with pytest.raises(dg.DiagramError):
        compose(dg.identity(2), dg.identity(1))


def test_composition_associative_exhaustive_n2():
    ds = list(dg.enumerate_diagrams(2, 2))
    for f, g, h in product(ds, repeat=3):
        fg, l1 = compose(f, g)
        left, l2 = compose(fg, h)
        gh, l3 = compose(g, h)
        right, l4 = compose(f, gh)
        assert left == right and l1 + l2 == l3 + l4


def test_composition_associative_random_n3():
    rng = random.Random(3)
    for _ in range(400):
        a, b, c, d = (rng.randint(0, 3) for _ in range(4))
        f, g, h = random_diagram(rng, a, b), random_diagram(rng, b, c), random_diagram(rng, c, d)
        fg, l1 = compose(f, g)
        left, l2 = compose(fg, h)
        gh, l3 = compose(g, h)
        right, l4 = compose(f, gh)
        assert left == right and l1 + l2 == l3 + l4


# -- tensor and flip --------------------------------------------------------------


def test_tensor_examples():
    assert tensor(ID1, ID1) == dg.identity(2)
    assert tensor(X1, ID1) == make([[T(1)], [B(1)], [T(2), B(2)]], 2, 2)
    for d in dg.enumerate_diagrams(1, 2):
        assert tensor(dg.identity(0), d) == d == tensor(d, dg.identity(0))


def test_tensor_associative_and_interchange():
    rng = random.Random(5)
    for _ in range(300):
        a, b, c = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        a2, b2, c2 = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        f, f2 = random_diagram(rng, a, b), random_diagram(rng, b, c)
        g, g2 = random_diagram(rng, a2, b2), random_diagram(rng, b2, c2)
        h = random_diagram(rng, 1, 2)
        assert tensor(tensor(f, g), h) == tensor(f, tensor(g, h))
        lhs, l = compose(tensor(f, g), tensor(f2, g2))
        d1, l1 = compose(f, f2)
        d2, l2 = compose(g, g2)
        assert lhs == tensor(d1, d2) and l == l1 + l2


def test_flip_examples_and_laws():
    assert flip(dg.identity(3)) == dg.identity(3)
    assert flip(make([[T(1), T(2)]], 2, 0)) == make([[B(1), B(2)]], 0, 2)
    for sigma in permutations(range(3)):
        inv = tuple(sorted(range(3), key=lambda i: sigma[i]))
        assert flip(dg.permutation_diagram(sigma)) == dg.permutation_diagram(inv)
    ds = list(dg.enumerate_diagrams(2, 2))
    for f in ds:
        assert flip(flip(f)) == f
        for g in ds:
            d, loops = compose(f, g)
            assert (flip(d), loops) == compose(flip(g), flip(f))


# -- permutations, sigma_I, classification -------------------------------------------


def test_permutation_diagram_examples():
    assert dg.permutation_diagram((0,)) == ID1
    assert SWAP == make([[T(1), B(2)], [T(2), B(1)]], 2, 2)
    assert dg.permutation_diagram((1, 2, 0)) == make([[T(1), B(2)], [T(2), B(3)], [T(3), B(1)]], 3, 3)


def test_sigma_I_examples():
    for n in (1, 2, 3):
        assert dg.sigma_I(tuple(range(n)), {n - 1}) == dg.x_diagram(n)
        for sigma in permutations(range(n)):
            assert dg.sigma_I(sigma, set()) == dg.permutation_diagram(sigma)
    assert dg.sigma_I((1, 0), {0}) == make([[T(1)], [T(2), B(1)], [B(2)]], 2, 2)


def test_classify_examples():
    c = dg.classify(X1)
    assert (c.kind, c.perm, c.index) == ("punctured", (0,), 0)
    assert dg.classify(make([[T(1), T(2), B(1), B(2)]], 2, 2)).kind == "other"
    c = dg.classify(dg.permutation_diagram((1, 2, 0)))
    assert (c.kind, c.perm) == ("permutation", (1, 2, 0))


def test_classify_rejects_non_square():
    with pytest.raises(dg.DiagramError):
        dg.classify(make([[T(1), T(2)]], 2, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classify_counts(n):
    from math import factorial

    counts = {"permutation": 0, "punctured": 0, "other": 0}
    for d in dg.enumerate_diagrams(n, n):
        c = dg.classify(d)
        counts[c.kind] += 1
        if c.kind == "permutation":
            assert d == dg.permutation_diagram(c.perm)
        elif c.kind == "punctured":
            assert d == dg.sigma_I(c.perm, {c.index})
    assert counts["permutation"] == factorial(n)
    assert counts["punctured"] == n * factorial(n)
    assert sum(counts.values()) == dg.bell(2 * n)


def test_punctured_witness_is_the_unique_completion():
    # sigma_I(sigma, {i}) forgets sigma(i); the witness must put it back
    for n in (2, 3):
        for sigma in permutations(range(n)):
            for i in range(n):
                c = dg.classify(dg.sigma_I(sigma, {i}))
                assert (c.perm, c.index) == (sigma, i)


# -- restrictions ------------------------------------------------------------------


def test_restrictions_of_tensor_products():
    for n in (1, 2):
        for s in permutations(range(n)):
            for u in permutations(range(n)):
                pi = tensor(dg.permutation_diagram(s), dg.permutation_diagram(u))
                L, R, LR = dg.restrictions(pi)
                assert L == dg.permutation_diagram(s) and R == dg.permutation_diagram(u)
                assert LR == canonicalize([[v] for v in range(2 * n)], n, n)


def test_restrictions_hand_example():
    # n = 2: the block {T1, B1', T3, B3'} plus identity strands at 2 and 4
    pi = make([[T(1), B(1), T(3), B(3)], [T(2), B(2)], [T(4), B(4)]], 4, 4)
    L, R, LR = dg.restrictions(pi)
    assert L == dg.identity(2) and R == dg.identity(2)
    # top 1 meets top-right 1 in a block of size four: index 1 keeps its edge, index 2 is removed
    assert LR == make([[T(1), B(1)], [T(2)], [B(2)]], 2, 2)
    assert dg.reconstruct(L, R, LR) == pi


def test_restrictions_undefined_outside_domain():
    pi = make([[T(1), T(2), B(1), B(2)], [T(3), B(3)], [T(4), B(4)]], 4, 4)
    assert dg.restrictions(pi)[2] is None


@pytest.mark.parametrize("n", [1, 2])
def test_reconstruction_is_identity(n):
    checked = 0
    for pi in dg.enumerate_diagrams(2 * n, 2 * n):
        L, R, LR = dg.restrictions(pi)
        if LR is not None:
            assert dg.reconstruct(L, R, LR) == pi
            checked += 1
    assert checked > 0


# -- enumeration -------------------------------------------------------------------


@pytest.mark.parametrize("a,b,count", [(1, 1, 2), (2, 2, 15), (4, 4, 4140), (1, 0, 1), (0, 0, 1)])
def test_enumeration_counts(a, b, count):
    ds = list(dg.enumerate_diagrams(a, b))
    assert len(ds) == count == len(set(ds))
    for d in ds:
        assert PartitionDiagram.from_labels(a, b, d.labels) == d
        assert canonicalize(d.blocks, a, b) == d


@pytest.mark.parametrize("n", range(0, 9))
def test_bell_against_independent_counter(n):
    assert dg.bell(n) == bell_by_counting(n)


def test_enumeration_cap_names_bell_number():
    with pytest.raises(dg.EnumerationLimitError, match="1382958545"):
        next(dg.enumerate_diagrams(7, 8))


def test_rank_ranges_partition_the_stream():
    full = list(dg.rgs_range(6))
    pieces = [s for lo in range(0, 203, 50) for s in dg.rgs_range(6, lo, min(lo + 50, 203))]
    assert pieces == full
    assert [dg.unrank_rgs(i, 6) for i in (0, 17, 202)] == [list(full[i]) for i in (0, 17, 202)]


# -- text format -------------------------------------------------------------------


def test_text_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        d = random_diagram(rng, rng.randint(0, 3), rng.randint(0, 3))
        text = dg.format_diagram(d)
        assert dg.parse_diagram(text, d.top, d.bottom) == d
    assert dg.parse_diagram(" {1, 2'} {2,1'} ") == SWAP
    assert dg.format_diagram(dg.identity(0)) == "{}"


@pytest.mark.parametrize("bad", ["{1,2", "{0}", "{a}", "{1}{1}"])
def test_parse_errors(bad):
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram(bad, 2, 2)
