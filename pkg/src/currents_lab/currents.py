"""Rational geodesic currents with exact rational weights.

A rational current is a finite nonnegative combination of conjugacy classes
of power-free elements.  The class of ``g = f^m`` (``f`` power-free)
contributes its root ``f`` with weight ``m``, so currents of proper powers
fold into weights at construction time and ``mu_{f^m} = m * mu_f`` holds by
definition.

Coordinates ``(v; nu)`` count starting vertices reading ``v`` or ``v^-1``
around each root circle, weighted; wrapping reads make the count well
defined for ``|v|`` larger than the circle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .automorphisms import FreeAutomorphism, apply_cyclic
from .errors import BasisMismatchError, LevelMismatchError, ParseError, ZeroCurrentError
from .words import (
    Basis,
    CyclicWord,
    Word,
    _canonical_rotation,
    count_subwords,
    cyclic_reduce,
    invert,
    inverse_cyclic,
    letter_key,
    occurrences,
    primitive_root,
    rotation_key,
    word as _word,
)


@dataclass(frozen=True)
class ConjugacyClass:
    """Conjugacy class of a power-free element, keyed by its canonical root."""

    root: CyclicWord

    def __post_init__(self):
        _, exponent = primitive_root(self.root)
        if exponent != 1:
            raise ValueError(f"{self.root} is a proper power; use the root with a weight")

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.root), rotation_key(self.root))

    def __str__(self) -> str:
        return f"[{self.root}]"


@dataclass(frozen=True)
class RationalCurrent:
    """Finite sum of positive rational weights on conjugacy classes."""

    basis: Basis
    terms: tuple[tuple[ConjugacyClass, Fraction], ...]

    def __post_init__(self):
        previous = None
        for cls, weight in self.terms:
            if cls.root.basis != self.basis:
                raise BasisMismatchError("class basis differs from current basis")
            if weight <= 0:
                raise ValueError(f"weight of {cls} must be positive, got {weight}")
            key = cls.sort_key()
            if previous is not None and key <= previous:
                raise ValueError("terms must be strictly sorted by class")
            previous = key

    def as_dict(self) -> dict[ConjugacyClass, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        return current_str(self)


def current_from_terms(
    basis: Basis, items: Iterable[tuple[ConjugacyClass, Fraction]]
) -> RationalCurrent:
    merged: dict[ConjugacyClass, Fraction] = {}
    for cls, weight in items:
        merged[cls] = merged.get(cls, Fraction(0)) + Fraction(weight)
    for cls, weight in merged.items():
        if weight <= 0:
            raise ValueError(f"weight of {cls} must be positive, got {weight}")
    ordered = tuple(sorted(merged.items(), key=lambda item: item[0].sort_key()))
    return RationalCurrent(basis, ordered)


def zero_current(basis: Basis) -> RationalCurrent:
    return RationalCurrent(basis, ())


def rational_current(g: Word) -> RationalCurrent:
    """The counting current of the conjugacy class of ``g`` (nontrivial)."""
    cycle, _ = cyclic_reduce(g)
    root, exponent = primitive_root(cycle)
    return RationalCurrent(g.basis, ((ConjugacyClass(root), Fraction(exponent)),))


def coordinate(v: Word, nu: RationalCurrent) -> Fraction:
    """The coordinate ``(v; nu)``: weighted occurrence count over all roots."""
    if v.basis != nu.basis:
        raise BasisMismatchError("word and current use different bases")
    total = Fraction(0)
    for cls, weight in nu.terms:
        total += weight * occurrences(v, cls.root)
    return total


def length(nu: RationalCurrent) -> Fraction:
    """``||nu||``: the sum of single-letter coordinates, i.e. weighted root lengths."""
    return sum((weight * len(cls.root) for cls, weight in nu.terms), Fraction(0))


def add(nu1: RationalCurrent, nu2: RationalCurrent) -> RationalCurrent:
    if nu1.basis != nu2.basis:
        raise BasisMismatchError("cannot add currents over different bases")
    return current_from_terms(nu1.basis, nu1.terms + nu2.terms)


def scale(r: Fraction, nu: RationalCurrent) -> RationalCurrent:
    r = Fraction(r)
    if r <= 0:
        raise ValueError(f"scale factor must be positive, got {r}")
    return RationalCurrent(nu.basis, tuple((cls, r * w) for cls, w in nu.terms))


def act(phi: FreeAutomorphism, nu: RationalCurrent) -> RationalCurrent:
    """Push a current forward: roots map through the induced class map."""
    if phi.basis != nu.basis:
        raise BasisMismatchError("automorphism and current use different bases")
    items = []
    for cls, weight in nu.terms:
        image = apply_cyclic(phi, cls.root)
        root, exponent = primitive_root(image)
        # automorphisms preserve power-freeness, so the exponent stays 1
        assert exponent == 1
        items.append((ConjugacyClass(root), weight))
    return current_from_terms(nu.basis, items)


def pair_representative(v: Word) -> Word:
    """The smaller of ``v`` and ``v^-1`` in the letter order, as a pair label."""
    w = invert(v)
    vk = tuple(letter_key(x) for x in v.letters)
    wk = tuple(letter_key(x) for x in w.letters)
    return v if vk <= wk else w


@dataclass(frozen=True)
class ProjectiveCurrentVector:
    """Normalized coordinates ``(v; nu) / ||nu||`` at all ``1 <= |v| <= level``.

    Entries are stored sparsely, one per inverse pair ``{v, v^-1}`` keyed by
    the smaller member; absent pairs have coordinate zero.
    """

    basis: Basis
    level: int
    entries: tuple[tuple[Word, Fraction], ...]

    def as_dict(self) -> dict[Word, Fraction]:
        return dict(self.entries)


def projective_vector(nu: RationalCurrent, level: int) -> ProjectiveCurrentVector:
    if level < 1:
        raise ValueError("level must be >= 1")
    if nu.is_zero():
        raise ZeroCurrentError("the zero current has no projective class")
    total = length(nu)
    acc: dict[tuple[int, ...], Fraction] = {}
    for cls, weight in nu.terms:
        counts = count_subwords(cls.root, level)
        for key, value in counts.items():
            rep = min(key, tuple(-x for x in reversed(key)), key=lambda t: tuple(letter_key(x) for x in t))
            acc[rep] = acc.get(rep, Fraction(0)) + weight * value
    entries = []
    for rep in sorted(acc, key=lambda t: (len(t), tuple(letter_key(x) for x in t))):
        entries.append((Word(nu.basis, rep), acc[rep] / total))
    vector = ProjectiveCurrentVector(nu.basis, level, tuple(entries))
    ones = sum((val for w, val in entries if len(w) == 1), Fraction(0))
    assert ones == 1, "single-letter coordinates must sum to 1"
    return vector


def projective_distance(p: ProjectiveCurrentVector, q: ProjectiveCurrentVector) -> Fraction:
    """Max absolute entry difference; both vectors must share basis and level."""
    if p.level != q.level:
        raise LevelMismatchError(f"levels differ: {p.level} vs {q.level}")
    if p.basis != q.basis:
        raise BasisMismatchError("vectors use different bases")
    a = p.as_dict()
    b = q.as_dict()
    best = Fraction(0)
    for key in set(a) | set(b):
        diff = abs(a.get(key, Fraction(0)) - b.get(key, Fraction(0)))
        if diff > best:
            best = diff
    return best


@dataclass(frozen=True)
class CriticalCheck:
    """Witness triple for membership in the critical set of a twist t -> tz."""

    member: bool
    half_twisted: Fraction
    with_twistor: Fraction
    with_twistor_inverse: Fraction

    def witness(self) -> str:
        return (
            f"(t;nu)/2={self.half_twisted}, (tz;nu)={self.with_twistor}, "
            f"(tz^-1;nu)={self.with_twistor_inverse}"
        )


def in_critical_set(nu: RationalCurrent, twisted: int, twistor: int) -> CriticalCheck:
    """Check ``(t;nu)/2 == (tz;nu) == (tz^-1;nu)`` for the twist ``t -> tz``."""
    if nu.is_zero():
        raise ZeroCurrentError("criticality is undefined for the zero current")
    basis = nu.basis
    basis.check_letter(twisted)
    basis.check_letter(twistor)
    t = Word(basis, (twisted,))
    tz = Word(basis, (twisted, twistor))
    tz_inv = Word(basis, (twisted, -twistor))
    half = coordinate(t, nu) / 2
    a = coordinate(tz, nu)
    b = coordinate(tz_inv, nu)
    return CriticalCheck(half == a == b, half, a, b)


def power_free_classes(basis: Basis, max_len: int) -> tuple[ConjugacyClass, ...]:
    """All power-free classes of cyclic length <= max_len, one per inverse pair.

    Sorted by length then canonical rotation key; used as the test set for
    projective comparisons of length functions.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    found: set[CyclicWord] = set()
    alphabet = basis.signed_letters()

    def extend(prefix: list[int], remaining: int):
        if prefix and remaining == 0:
            if prefix[-1] != -prefix[0]:
                cycle = CyclicWord(basis, _canonical(prefix))
                _, exponent = primitive_root(cycle)
                if exponent == 1:
                    mirror = inverse_cyclic(cycle)
                    found.add(min(cycle, mirror, key=rotation_key))
            return
        for x in alphabet:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            extend(prefix, remaining - 1)
            prefix.pop()

    for n in range(1, max_len + 1):
        extend([], n)
    ordered = sorted(found, key=lambda w: (len(w), rotation_key(w)))
    return tuple(ConjugacyClass(w) for w in ordered)


def _canonical(letters: list[int]) -> tuple[int, ...]:
    return _canonical_rotation(letters)


_TERM_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?\[([^\]]*)\]\s*")


def parse_current(basis: Basis, text: str) -> RationalCurrent:
    """Parse a current literal like ``"3/2*[ab] + 1*[c]"``.

    Each term is ``weight*[word]`` (weight omitted means 1); the parser
    cyclically reduces each word and folds proper powers into the weight.
    An empty bracket is rejected since classes must be nontrivial.
    """
    items: list[tuple[ConjugacyClass, Fraction]] = []
    pos = 0
    first = True
    while pos < len(text):
        rest = text[pos:]
        if rest.strip() == "":
            break
        if not first:
            plus = rest.find("+")
            if plus < 0 or rest[:plus].strip():
                raise ParseError(text, pos, "expected '+' between terms")
            pos += plus + 1
            rest = text[pos:]
        match = _TERM_RE.match(rest)
        if not match:
            raise ParseError(text, pos, "expected a term like '3/2*[ab]'")
        weight = Fraction(match.group(1)) if match.group(1) else Fraction(1)
        if weight <= 0:
            raise ParseError(text, pos, "weights must be positive")
        body = match.group(2)
        w = _word(basis, body)
        if w.is_identity():
            raise ParseError(text, pos, f"class [{body}] reduces to the identity")
        cycle, _ = cyclic_reduce(w)
        root, exponent = primitive_root(cycle)
        items.append((ConjugacyClass(root), weight * exponent))
        pos += match.end()
        first = False
    if first:
        raise ParseError(text, 0, "empty current literal; write e.g. '1*[ab]'")
    return current_from_terms(basis, items)


def current_str(nu: RationalCurrent) -> str:
    if nu.is_zero():
        return "0"
    return " + ".join(f"{weight}*[{cls.root}]" for cls, weight in nu.terms)
