import warnings

import pytest

from deligne import knots as kn
from deligne.knots import TangleError, evaluate_knot, parse_tangle, writhe
from deligne.scalars import QLaurent

LABELS = [(1, 0), (2, 0), (2, 1), (0, 1), (3, 1)]
CORPUS = kn.knot_corpus()
ONE_KINK = "cup 0 / cup 2 / x+ 1 / cap 0 / cap 0"


def expected(word, label):
    a, b = label
    return QLaurent.q_power((a - b) ** 2 * writhe(word))


# -- parsing -------------------------------------------------------------------


def test_parse_examples():
    assert parse_tangle("cup 0 / cap 0").events == kn.unknot().events
    w = parse_tangle("# a curl\ncup 0\ncup 2   # new pair\nx+ 1\ncap 0\ncap 0\n")
    assert w.events == parse_tangle(ONE_KINK).events
    assert writhe(w) == 1
    assert parse_tangle(kn.format_tangle(kn.trefoil())).events == kn.trefoil().events


@pytest.mark.parametrize(
    "text,message",
    [
        ("cup 0 / cap 1", "out of range"),
        ("cup 0 / cap -1", "negative position"),
        ("cup 0", "open strands"),
        ("cup 0 / twist 0 / cap 0", "expected"),
        ("cup 0 / cap x", "bad position"),
        ("cup 0 / x+ 1 / cap 0", "out of range"),
        ("", "empty"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(TangleError, match=message):
        parse_tangle(text)


def test_links_are_rejected():
    # nested cups with one crossing between the inner legs close into two circles
    with pytest.raises(TangleError, match="2 components"):
        parse_tangle("cup 0 / cup 1 / x+ 1 / cap 1 / cap 0")
    with pytest.raises(TangleError, match="2 components"):
        parse_tangle("cup 0 / cup 0 / cap 0 / cap 0")


def test_orientations_alternate_along_cups():
    levels = kn.orientations(kn.trefoil())
    assert levels[0] == ()
    assert levels[1] == (kn.UP, kn.DOWN)
    assert all(len(set(level)) <= 2 for level in levels)


# -- writhe oracle ----------------------------------------------------------------


def test_writhe_examples():
    assert writhe(kn.unknot()) == 0
    assert writhe(kn.kink_word(1)) == 1
    assert writhe(kn.trefoil(1)) == 3
    assert writhe(kn.trefoil(-1)) == -3
    assert writhe(kn.figure_eight()) == 0


# -- evaluation ------------------------------------------------------------------


def test_evaluate_examples():
    assert evaluate_knot(kn.unknot(), (1, 0)) == 1
    assert evaluate_knot(parse_tangle(ONE_KINK), (1, 0)) == QLaurent.q_power(1)
    assert evaluate_knot(kn.trefoil(), (2, 0)) == QLaurent.q_power(12)


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("label", LABELS)
def test_corpus_matches_writhe_formula(name, label):
    word = CORPUS[name]
    assert evaluate_knot(word, label) == expected(word, label)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_degree_zero_label_is_trivial(name):
    for label in ((1, 1), (2, 2)) if name in ("unknot", "trefoil+") else ((1, 1),):
        with pytest.warns(UserWarning, match="identically 1"):
            assert evaluate_knot(CORPUS[name], label) == 1


def test_no_warning_for_graded_labels():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        evaluate_knot(kn.trefoil(), (1, 0))


@pytest.mark.parametrize("name", ["unknot", "kink+1", "kink-2", "trefoil+", "figure-eight"])
def test_framing_changes_by_twist_factor(name):
    word = CORPUS[name]
    for at in range(1, len(word)):
        if not kn.orientations(word)[at]:
            continue
        for sign in (1, -1):
            kinked = kn.insert_kink(word, sign, at)
            assert writhe(kinked) == writhe(word) + sign
            for label in ((1, 0), (2, 1), (2, 0)):
                d2 = (label[0] - label[1]) ** 2
                assert evaluate_knot(kinked, label) == evaluate_knot(word, label) * QLaurent.q_power(sign * d2)


@pytest.mark.parametrize("name", ["unknot", "trefoil+", "trefoil-", "figure-eight", "kink+1 # kink+2"])
def test_reidemeister_ii_invariance(name):
    word = CORPUS[name]
    levels = kn.orientations(word)
    moved = 0
    for at in range(1, len(word)):
        for pos in range(len(levels[at]) - 1):
            w2 = kn.with_reidemeister_ii(word, at, pos)
            for label in ((1, 0), (2, 1)):
                assert evaluate_knot(w2, label) == evaluate_knot(word, label)
            moved += 1
    assert moved > 0


def test_reidemeister_ii_needs_two_strands():
    with pytest.raises(TangleError):
        kn.with_reidemeister_ii(kn.unknot(), 1, 1)


@pytest.mark.parametrize("sign", [1, -1])
def test_reidemeister_iii_invariance(sign):
    word = kn.figure_eight()
    lhs, rhs = kn.with_reidemeister_iii(word, 3, 0, sign)
    assert writhe(lhs) == writhe(rhs) == writhe(word)
    for label in ((1, 0), (2, 0), (2, 1)):
        assert evaluate_knot(lhs, label) == evaluate_knot(rhs, label) == evaluate_knot(word, label)


def test_reidemeister_iii_rejects_mixed_orientations():
    word = parse_tangle("cup 0 / cup 2 / cap 1 / cap 0")
    with pytest.raises(TangleError, match="parallel"):
        kn.with_reidemeister_iii(word, 2, 0)


@pytest.mark.parametrize("name", ["unknot", "kink+1", "kink-1", "trefoil+", "figure-eight"])
def test_projected_evaluation_agrees(name):
    word = CORPUS[name]
    for label in ((1, 0), (0, 1), (2, 0)):
        assert kn.evaluate_knot_projected(word, label) == evaluate_knot(word, label)


def test_connected_sum_adds_writhes():
    for a in ("kink+1", "trefoil-", "figure-eight"):
        for b in ("kink-2", "trefoil+"):
            s = kn.connected_sum(CORPUS[a], CORPUS[b])
            assert writhe(s) == writhe(CORPUS[a]) + writhe(CORPUS[b])
            assert evaluate_knot(s, (2, 1)) == evaluate_knot(CORPUS[a], (2, 1)) * evaluate_knot(CORPUS[b], (2, 1))
