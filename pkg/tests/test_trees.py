"""Tree length functions: both evaluation routes, markings, the pairing."""

from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, strategies as st

from currents_lab.automorphisms import apply, inverse, parse_automorphism, simple_twist
from currents_lab.corpus import random_reduced_word
from currents_lab.currents import rational_current, scale
from currents_lab.errors import (
    IdentityElementError,
    NotStabilizedError,
    ParseError,
)
from currents_lab.trees import (
    cayley_tree,
    double_twist_tree,
    intersection_form,
    length,
    length_britton,
    length_limit,
    parse_tree,
    projective_tree_vector,
    tree_projective_eq,
    twist_tree,
)
from currents_lab.words import Basis, concat, cyclic_reduce, free_reduce, invert, word, word_power

B2 = Basis(2)
B3 = Basis(3)
B5 = Basis(5)
T_D3 = twist_tree(B3, [(1, 2, Fraction(1))])
T_D5 = twist_tree(B5, [(1, 2, Fraction(1))])


def raw_letters(basis, max_size=16):
    return st.lists(st.sampled_from(basis.signed_letters()), max_size=max_size)


def nonempty_words(basis, max_size=16):
    return (
        raw_letters(basis, max_size)
        .map(lambda ls: free_reduce(basis, ls))
        .filter(lambda u: len(u) > 0)
    )


class TestTwistTreeValues:
    def test_witness_class(self):
        assert length(T_D3, word(B3, "ca")) == 1

    def test_stable_letter(self):
        assert length(T_D3, word(B3, "a")) == 1
        assert length_limit(T_D3, word(B3, "a")) == 1

    def test_vertex_group_elements(self):
        assert length(T_D3, word(B3, "b")) == 0
        assert length(T_D3, word(B3, "abAc")) == 0
        assert length_limit(T_D3, word(B3, "abAc")) == 0

    def test_double_twist_tree_values(self):
        for rho in (Fraction(1), Fraction(1, 2), Fraction(3)):
            for theta in (Fraction(1), Fraction(3, 2)):
                delta = double_twist_tree(B5, rho, theta)
                assert length(delta, word(B5, "ae")) == rho + theta
                assert length(delta, word(B5, "a")) == rho
                for text in ("b", "d", "abA", "edE", "c"):
                    assert length(delta, word(B5, text)) == 0

    def test_identity_rejected(self):
        with pytest.raises(IdentityElementError):
            length(T_D3, word(B3, "aA"))


class TestMarkings:
    def test_marked_tree_values(self):
        prime = parse_tree(B3, "twist (a:b,1) marking=c->ca | c->cA")
        assert length(prime, word(B3, "ca")) == 0
        assert length(prime, word(B3, "b")) == 0
        assert length(prime, word(B3, "a")) == 1

    def test_headline_marked_lengths(self):
        marked = parse_tree(B5, "twist (a:b,1) marking=prime-basis-change")
        assert length(marked, word(B5, "b")) == 1
        assert length(marked, word(B5, "d")) == 1

    @given(nonempty_words(B3, 12))
    def test_marking_moves_evaluation(self, g):
        phi = simple_twist(B3, 3, 1)
        plain = twist_tree(B3, [(1, 2, Fraction(1))])
        marked = twist_tree(B3, [(1, 2, Fraction(1))], marking=phi)
        assert length(marked, g) == length(plain, apply(inverse(phi), g))

    def test_scale(self):
        half = twist_tree(B3, [(1, 2, Fraction(1))], scale=Fraction(1, 2))
        assert length(half, word(B3, "a")) == Fraction(1, 2)


class TestCayleyTrees:
    def test_weighted_lengths(self):
        tree = parse_tree(B2, "cayley w(a)=1 w(b)=3/2")
        assert length(tree, word(B2, "ab")) == Fraction(5, 2)
        assert length(tree, word(B2, "abA")) == Fraction(3, 2)

    @given(nonempty_words(B3, 20))
    def test_matches_current_length(self, g):
        from currents_lab.currents import length as current_length

        assert length(cayley_tree(B3), g) == current_length(rational_current(g))


class TestRoutesAgree:
    def test_randomized_cross_check(self):
        rng = Random(5)
        trees = [
            T_D5,
            double_twist_tree(B5, Fraction(1), Fraction(1, 2)),
            double_twist_tree(B5, Fraction(3), Fraction(1)),
        ]
        for _ in range(150):
            g = random_reduced_word(rng, B5, 30)
            for tree in trees:
                assert length_britton(tree, g) == length_limit(tree, g)

    def test_long_twistor_run_needs_iterations(self):
        g = word(B3, "a" + "b" * 20 + "ca")
        with pytest.raises(NotStabilizedError):
            length_limit(T_D3, g, cap=16)
        assert length_limit(T_D3, g, cap=32) == length_britton(T_D3, g)

    def test_small_cap_rejected(self):
        with pytest.raises(ValueError):
            length_limit(T_D3, word(B3, "a"), cap=4)


class TestLengthSymmetries:
    @given(nonempty_words(B3, 14), raw_letters(B3, 6))
    def test_conjugacy_and_inversion(self, g, extra):
        h = free_reduce(B3, extra)
        conjugate = concat(concat(h, g), invert(h))
        assert length(T_D3, conjugate) == length(T_D3, g)
        assert length(T_D3, invert(g)) == length(T_D3, g)

    @given(nonempty_words(B3, 10), st.integers(min_value=1, max_value=5))
    def test_homogeneity(self, g, n):
        assert length(T_D3, word_power(g, n)) == n * length(T_D3, g)


class TestPairing:
    @given(nonempty_words(B3, 14))
    def test_extends_length(self, g):
        assert intersection_form(T_D3, rational_current(g)) == length(T_D3, g)

    @given(nonempty_words(B3, 10))
    def test_linear(self, g):
        nu = rational_current(g)
        assert intersection_form(T_D3, scale(Fraction(2, 3), nu)) == Fraction(2, 3) * intersection_form(T_D3, nu)

    def test_zero_current(self):
        from currents_lab.currents import zero_current

        assert intersection_form(T_D3, zero_current(B3)) == 0


class TestProjectiveVectors:
    def test_scale_invariance(self):
        p = projective_tree_vector(T_D3, 2)
        q = projective_tree_vector(
            twist_tree(B3, [(1, 2, Fraction(1))], scale=Fraction(7)), 2
        )
        assert tree_projective_eq(p, q)

    def test_witness_separates(self):
        plain = projective_tree_vector(T_D3, 2)
        marked = projective_tree_vector(
            parse_tree(B3, "twist (a:b,1) marking=c->ca | c->cA"), 2
        )
        assert not tree_projective_eq(plain, marked)

    def test_uniform_cayley(self):
        p = projective_tree_vector(cayley_tree(B3), 1)
        assert len(set(p.entries)) == 1


class TestParsing:
    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            parse_tree(B3, "orchard (a:b,1)")

    def test_empty_twist(self):
        with pytest.raises(ParseError):
            parse_tree(B3, "twist")

    def test_bad_edge(self):
        with pytest.raises(ParseError):
            parse_tree(B3, "twist (a,b,1)")

    def test_repeated_stable_letter_rejected(self):
        with pytest.raises(ValueError):
            twist_tree(B3, [(1, 2, Fraction(1)), (1, 3, Fraction(1))])

    def test_twistor_equal_stable_rejected(self):
        with pytest.raises(ValueError):
            twist_tree(B3, [(1, 2, Fraction(1)), (2, 3, Fraction(1))])
