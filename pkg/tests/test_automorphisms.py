"""Automorphism tables: twists, basis changes, parsing, group laws."""

import pytest
from hypothesis import given, strategies as st

from currents_lab.automorphisms import (
    apply,
    apply_cyclic,
    automorphism_str,
    compose,
    double_prime_basis_change,
    double_twist,
    identity_automorphism,
    inverse,
    parse_automorphism,
    power,
    prime_basis_change,
    simple_twist,
)
from currents_lab.errors import ParseError, RankError
from currents_lab.words import Basis, concat, cyclic_reduce, free_reduce, invert, word

B3 = Basis(3)
B5 = Basis(5)
D = simple_twist(B3, 1, 2)


def raw_letters(basis, max_size=14):
    return st.lists(st.sampled_from(basis.signed_letters()), max_size=max_size)


def words(basis, max_size=14):
    return raw_letters(basis, max_size).map(lambda ls: free_reduce(basis, ls))


def small_automorphisms(basis):
    pool = [i for i in basis.generators()]

    def build(picks):
        phi = identity_automorphism(basis)
        for t, z, flip in picks:
            if t == z:
                continue
            step = simple_twist(basis, t, z)
            phi = compose(inverse(step) if flip else step, phi)
        return phi

    pick = st.tuples(st.sampled_from(pool), st.sampled_from(pool), st.booleans())
    return st.lists(pick, max_size=3).map(build)


class TestTwists:
    def test_simple_twist_images(self):
        assert str(apply(D, word(B3, "a"))) == "ab"
        assert str(apply(D, word(B3, "b"))) == "b"
        assert str(apply(power(D, 3), word(B3, "a"))) == "abbb"
        assert str(apply(inverse(D), word(B3, "a"))) == "aB"

    def test_degenerate_twist_rejected(self):
        with pytest.raises(ValueError):
            simple_twist(B3, 1, 1)

    def test_linear_growth(self):
        for n in range(20):
            assert len(apply(power(D, n), word(B3, "a"))) == n + 1

    def test_double_twist(self):
        phi = double_twist(B5)
        assert str(apply(phi, word(B5, "a"))) == "ab"
        assert str(apply(phi, word(B5, "e"))) == "ed"
        assert str(apply(phi, word(B5, "c"))) == "c"
        left = compose(simple_twist(B5, 1, 2), simple_twist(B5, 5, 4))
        right = compose(simple_twist(B5, 5, 4), simple_twist(B5, 1, 2))
        assert left == right == phi

    def test_double_twist_needs_rank_five(self):
        with pytest.raises(RankError):
            double_twist(B3)

    def test_headline_orbit_words(self):
        phi = double_twist(B5)
        for n in range(5):
            assert str(apply(power(phi, n), word(B5, "Ac"))) == "B" * n + "Ac"
            assert str(apply(power(phi, -n), word(B5, "Ac"))) == "b" * n + "Ac"


class TestBasisChanges:
    def test_prime_images(self):
        prime = prime_basis_change(B5)
        assert str(apply(prime, word(B5, "b"))) == "Ac"
        assert str(apply(prime, word(B5, "a"))) == "a"
        assert str(apply(prime, word(B5, "e"))) == "e"

    def test_double_prime_images(self):
        second = double_prime_basis_change(B5)
        assert str(apply(second, word(B5, "b"))) == "Ec"

    def test_defining_relation(self):
        # the b-image times the a- and c-images collapses back to b
        prime = prime_basis_change(B5)
        pieces = [apply(prime, word(B5, text)) for text in ("b", "a", "c")]
        assert str(concat(concat(pieces[0], pieces[1]), pieces[2])) == "b"

    def test_roundtrip(self):
        for change in (prime_basis_change(B5), double_prime_basis_change(B5)):
            assert compose(change, inverse(change)) == identity_automorphism(B5)


class TestGroupLaws:
    @given(small_automorphisms(B3), small_automorphisms(B3), words(B3))
    def test_compose(self, phi, psi, u):
        assert apply(compose(phi, psi), u) == apply(phi, apply(psi, u))

    @given(small_automorphisms(B3), words(B3))
    def test_inverse(self, phi, u):
        assert apply(inverse(phi), apply(phi, u)) == u

    @given(small_automorphisms(B3), st.integers(min_value=-4, max_value=4))
    def test_power(self, phi, n):
        direct = identity_automorphism(B3)
        step = phi if n >= 0 else inverse(phi)
        for _ in range(abs(n)):
            direct = compose(step, direct)
        assert power(phi, n) == direct

    @given(small_automorphisms(B3), words(B3, 18), words(B3, 6))
    def test_cyclic_action_well_defined(self, phi, u, g):
        if u.is_identity():
            return
        conjugate = concat(concat(g, u), invert(g))
        expected = cyclic_reduce(apply(phi, conjugate))[0]
        assert apply_cyclic(phi, cyclic_reduce(u)[0]) == expected


class TestParsing:
    def test_builtins(self):
        assert parse_automorphism(B5, "phi") == double_twist(B5)
        assert parse_automorphism(B3, "twist(a,b)") == D
        assert parse_automorphism(B3, "identity") == identity_automorphism(B3)
        assert parse_automorphism(B5, "prime-basis-change") == prime_basis_change(B5)

    def test_table_literal(self):
        phi = parse_automorphism(B3, "c->ca | c->cA")
        assert str(apply(phi, word(B3, "c"))) == "ca"
        assert str(apply(inverse(phi), word(B3, "c"))) == "cA"

    def test_bad_inverse_rejected(self):
        with pytest.raises(ParseError):
            parse_automorphism(B3, "a->ab | a->ab")

    def test_missing_inverse_rejected(self):
        with pytest.raises(ParseError):
            parse_automorphism(B3, "a->ab")

    def test_unknown_name(self):
        with pytest.raises(ParseError):
            parse_automorphism(B3, "frobenius")

    @given(small_automorphisms(B3))
    def test_str_roundtrip(self, phi):
        assert parse_automorphism(B3, automorphism_str(phi)) == phi
