from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qfa_lab.constructions import (complement_qfa, complete_unitary, convex_hull, probabilistic_union,
                                   probability_points, region_corners, separating_line, union_weights)
from qfa_lab.dfa import DFA, dfa_accepts, dfa_combine
from qfa_lab.qfa import acceptance_table, recognition_margin, run_word, validate_qfa
from qfa_lab.randomqfa import random_qfa
from qfa_lab.words import iter_words


def exact_weights(p1, p2):
    p1, p2 = Fraction(p1), Fraction(p2)
    d = p1 + p2 + p1 * p2
    return p2 / d, p1 / d, p1 * p2 / d, 2 * p1 * p2 / d


def sweep_margin(below, above, steps=20000):
    """Best half-gap over a grid of normal directions (independent of the hull code)."""
    below, above = np.asarray(below, float), np.asarray(above, float)
    theta = np.linspace(0, 2 * np.pi, steps, endpoint=False)
    normals = np.stack([np.cos(theta), np.sin(theta)])
    gap = (above @ normals).min(axis=0) - (below @ normals).max(axis=0)
    return gap.max() / 2


class TestK2K3:
    def test_valid(self, k2, k3):
        assert validate_qfa(k2) == [] and validate_qfa(k3) == []

    def test_layout(self, k2):
        assert k2.dim == 8
        assert k2.nonhalting == ("q1", "q2", "q3", "q4")
        assert k2.accept == {"q5", "q8"} and k2.reject == {"q6", "q7"}

    def test_k2_empty_word(self, k2):
        assert run_word(k2, "").p_acc == pytest.approx(2 / 3, abs=1e-12)

    def test_k3_a(self, k3):
        assert run_word(k3, "a").p_acc == pytest.approx(2 / 3, abs=1e-12)

    def test_k3_b_rejects_two_thirds_at_once(self, k3):
        t = run_word(k3, "b")
        assert t.events[1].rejected == pytest.approx(2 / 3, abs=1e-12)


class TestComplement:
    def test_rejects_empty(self, k2):
        assert run_word(complement_qfa(k2), "").p_rej == pytest.approx(2 / 3, abs=1e-12)

    def test_involution(self, k2):
        back = complement_qfa(complement_qfa(k2))
        for w in iter_words(k2.alphabet, 10):
            a, b = run_word(back, w), run_word(k2, w)
            assert (a.p_acc, a.p_rej) == (b.p_acc, b.p_rej)

    def test_tie_stays_tie(self):
        from qfa_lab.qfa import LEFT, QFA, RIGHT
        h = np.sqrt(0.5)
        k = QFA(("n", "acc", "rej"), ("a",), "n", {"acc"}, {"rej"},
                {LEFT: np.eye(3), "a": np.eye(3), RIGHT: np.array([[0, 1, 0], [h, 0, h], [h, 0, -h]])})
        assert run_word(complement_qfa(k), "a").verdict == "tie"

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), w=st.lists(st.sampled_from("ab"), max_size=12))
    def test_swaps_exactly(self, seed, w):
        k = random_qfa(np.random.default_rng(seed), 6)
        a, b = run_word(k, w), run_word(complement_qfa(k), w)
        assert (a.p_acc, a.p_rej) == (b.p_rej, b.p_acc)


class TestUnionWeights:
    def test_limit_case(self):
        w = union_weights(2 / 3, 2 / 3)
        assert w.guaranteed_p == 0.5
        assert not w.hypothesis_holds

    def test_ones(self):
        w = union_weights(1, 1)
        assert (w.alpha1, w.alpha2, w.alpha3) == pytest.approx((1 / 3, 1 / 3, 1 / 3))
        assert w.guaranteed_p == pytest.approx(2 / 3)

    def test_one_and_two_thirds(self):
        w = union_weights(1, 2 / 3)
        assert w.guaranteed_p == pytest.approx(4 / 7, abs=1e-15)
        assert (w.alpha1, w.alpha2, w.alpha3) == pytest.approx((2 / 7, 3 / 7, 2 / 7), abs=1e-15)
        assert w.hypothesis_holds

    @pytest.mark.parametrize("p", [0.5, 0.2, 1.01])
    def test_out_of_range(self, p):
        with pytest.raises(ValueError):
            union_weights(p, 0.9)

    @given(n1=st.integers(51, 100), n2=st.integers(51, 100))
    def test_grid_against_exact(self, n1, n2):
        p1, p2 = n1 / 100, n2 / 100
        w = union_weights(p1, p2)
        a1, a2, a3, g = exact_weights(Fraction(n1, 100), Fraction(n2, 100))
        assert w.alpha1 + w.alpha2 + w.alpha3 == pytest.approx(1, abs=1e-12)
        assert (w.alpha1, w.alpha2, w.alpha3, w.guaranteed_p) == pytest.approx(
            tuple(map(float, (a1, a2, a3, g))), abs=1e-15)
        exact_hyp = 1 / Fraction(n1, 100) + 1 / Fraction(n2, 100) < 3
        assert w.hypothesis_holds == exact_hyp
        assert (g > Fraction(1, 2)) == exact_hyp


class TestProbabilisticUnion:
    @pytest.fixture
    def union(self, parity, k2):
        return probabilistic_union(parity, 1.0, k2, 2 / 3)

    def test_valid(self, union):
        assert validate_qfa(union) == []
        assert union.dim == 4 + 8 + 1

    def test_mixture_law(self, union, parity, k2):
        w = union_weights(1.0, 2 / 3)
        table = acceptance_table(union, 10)
        for word in iter_words(k2.alphabet, 10):
            expected = w.alpha1 * run_word(parity, word).p_acc + w.alpha2 * run_word(k2, word).p_acc + w.alpha3
            assert table[word][0] == pytest.approx(expected, abs=1e-9)

    def test_margin(self, union, even_a, g2):
        p, _ = recognition_margin(union, dfa_combine(even_a, g2, "union"), 10)
        assert p >= 4 / 7 - 1e-9
        assert p == pytest.approx(4 / 7, abs=1e-9)

    def test_cases(self, union, even_a, g2):
        g = union_weights(1.0, 2 / 3).guaranteed_p
        for w in iter_words(g2.alphabet, 8):
            t = run_word(union, w)
            in1, in2 = dfa_accepts(even_a, w), dfa_accepts(g2, w)
            if in1 and in2:
                assert t.p_acc >= g - 1e-9
            elif in1 or in2:
                assert t.p_acc >= g - 1e-9
            else:
                assert t.p_rej >= g - 1e-9

    def test_both_members_with_perfect_components(self, parity):
        u = probabilistic_union(parity, 1.0, parity, 1.0)
        for w in iter_words(parity.alphabet, 6):
            t = run_word(u, w)
            if w.count("a") % 2 == 0:
                assert t.p_acc == pytest.approx(1.0, abs=1e-12)

    def test_hypothesis_violation(self, k2, k3):
        with pytest.raises(ValueError, match="not below 3"):
            probabilistic_union(k2, 2 / 3, k3, 2 / 3)

    def test_alphabet_mismatch(self, k2):
        other = random_qfa(np.random.default_rng(0), 4, alphabet=("x",))
        with pytest.raises(ValueError, match="alphabet"):
            probabilistic_union(k2, 0.9, other, 0.9)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), p1=st.floats(0.7, 1.0), p2=st.floats(0.7, 1.0))
    def test_mixture_random(self, seed, p1, p2):
        rng = np.random.default_rng(seed)
        a, b = random_qfa(rng, 4), random_qfa(rng, 5)
        u = probabilistic_union(a, p1, b, p2)
        w = union_weights(p1, p2)
        ta, tb, tu = (acceptance_table(k, 5) for k in (a, b, u))
        for word in tu:
            assert tu[word][0] == pytest.approx(w.alpha1 * ta[word][0] + w.alpha2 * tb[word][0] + w.alpha3,
                                                abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 9), pos=st.integers(0, 8))
def test_complete_unitary(seed, n, pos):
    pos = pos % n
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    u = complete_unitary(v, pos)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-10)
    np.testing.assert_allclose(u[:, pos], v)


class TestPoints:
    def test_members_max_at_least_two_thirds(self, k2, k3, g1):
        for p in probability_points(k2, k3, g1, 6):
            if p.member:
                assert max(p.x, p.y) >= 2 / 3 - 1e-9
            assert 0 <= p.x <= 1 + 1e-12 and 0 <= p.y <= 1 + 1e-12

    def test_empty_word(self, k2, k3, g1):
        p = probability_points(k2, k3, g1, 0)
        assert len(p) == 1 and p[0].word == ()
        assert (p[0].x, p[0].y) == pytest.approx((2 / 3, 1 / 3))
        assert p[0].member

    def test_empty_alphabet(self):
        rng = np.random.default_rng(1)
        a, b = random_qfa(rng, 3, alphabet=()), random_qfa(rng, 3, alphabet=())
        d = DFA(("s",), (), {}, "s", {"s"})
        assert len(probability_points(a, b, d, 50)) == 1

    def test_l2_l3_points_not_separable(self, k2, k3, g1):
        pts = probability_points(k2, k3, g1, 6)
        below = [(p.x, p.y) for p in pts if not p.member]
        above = [(p.x, p.y) for p in pts if p.member]
        assert separating_line(below, above) is None


class TestSeparatingLine:
    def test_two_points(self):
        a, b, c, m = separating_line([(0.2, 0.2)], [(0.8, 0.8)])
        assert (a, b) == pytest.approx((np.sqrt(0.5), np.sqrt(0.5)))
        assert c == pytest.approx(np.sqrt(0.5))
        assert m == pytest.approx(0.3 * np.sqrt(2))

    def test_fig9_limit_case(self):
        below, above = region_corners(2 / 3, 2 / 3)
        assert separating_line(below, above) is None

    def test_fig8_point_separable(self):
        below, above = region_corners(0.6, 0.6, floor1=0.4, floor2=0.4)
        assert set(below) == {(0.4, 0.4)}
        line = separating_line(below, above)
        assert line is not None
        a, b, c, m = line
        assert m == pytest.approx(sweep_margin(below, above), abs=1e-6)
        # nearest member edge is x + y = 1, at distance 0.2/sqrt(2); margin is half of that
        assert m == pytest.approx(0.1 / np.sqrt(2), abs=1e-12)

    def test_fig6_without_floors_fails(self):
        assert separating_line(*region_corners(0.6, 0.6)) is None

    def test_fig5_separable(self):
        below, above = region_corners(0.9, 0.9)
        assert separating_line(below, above) is not None

    def test_empty(self):
        with pytest.raises(ValueError):
            separating_line([], [(0, 0)])

    def test_overlapping_segments(self):
        assert separating_line([(0, 0), (1, 0)], [(0.5, 0), (2, 0)]) is None

    def test_nested(self):
        assert separating_line([(0.5, 0.5)], [(0, 0), (1, 0), (0, 1), (1, 1)]) is None

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n1=st.integers(1, 6), n2=st.integers(1, 6),
           shift=st.floats(-0.5, 0.8))
    def test_against_sweep(self, seed, n1, n2, shift):
        rng = np.random.default_rng(seed)
        below = rng.uniform(0, 0.5, (n1, 2))
        above = rng.uniform(0, 0.5, (n2, 2)) + shift
        line = separating_line(below, above)
        ref = sweep_margin(below, above)
        if line is None:
            assert ref <= 1e-3
        else:
            a, b, c, m = line
            assert a * a + b * b == pytest.approx(1)
            assert m == pytest.approx(ref, abs=1e-3)
            assert np.all(below @ (a, b) < c) and np.all(above @ (a, b) > c)
            assert np.min(np.abs(np.vstack([below, above]) @ (a, b) - c)) == pytest.approx(m, abs=1e-9)

    @given(n1=st.integers(51, 100), n2=st.integers(51, 100))
    def test_separable_iff_weights_hypothesis(self, n1, n2):
        p1, p2 = n1 / 100, n2 / 100
        slack = abs(1 / p1 + 1 / p2 - 3)
        assume(slack > 1e-9)
        assert (separating_line(*region_corners(p1, p2)) is not None) == union_weights(p1, p2).hypothesis_holds


def test_hull_square_with_interior():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (0.5, 0)]
    assert sorted(convex_hull(pts)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
