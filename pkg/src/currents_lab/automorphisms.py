"""Automorphisms of a free group, given by explicit generator images.

Every automorphism carries the images of the inverse map as well, and the
constructor checks both compositions on all generators, so an inconsistent
table cannot be built.  Named constructors cover the maps used throughout
the package: simple Dehn twists, the rank >= 5 double twist, and the two
basis changes that re-express the standard generators through a twisted
basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import AutomorphismTableError, BasisMismatchError, ParseError, RankError
from .words import Basis, CyclicWord, Letter, Word, _reduced, cyclic_reduce, parse_letters, word


def _apply_table(images: Sequence[tuple[Letter, ...]], letters: Sequence[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x in letters:
        if x > 0:
            out.extend(images[x - 1])
        else:
            out.extend(-y for y in reversed(images[-x - 1]))
    return _reduced(out)


@dataclass(frozen=True)
class FreeAutomorphism:
    """Automorphism with explicit forward and inverse generator images."""

    basis: Basis
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...]

    def __post_init__(self):
        k = self.basis.rank
        if len(self.images) != k or len(self.inverse_images) != k:
            raise AutomorphismTableError(f"need images for all {k} generators")
        for im in self.images + self.inverse_images:
            if im.basis != self.basis:
                raise BasisMismatchError("image words use a different basis")
        fwd = [im.letters for im in self.images]
        bwd = [im.letters for im in self.inverse_images]
        for i in range(1, k + 1):
            if _apply_table(fwd, bwd[i - 1]) != (i,) or _apply_table(bwd, fwd[i - 1]) != (i,):
                raise AutomorphismTableError(
                    f"tables are not mutually inverse at generator {self.basis.letter_name(i)}"
                )

    def image_letters(self) -> list[tuple[Letter, ...]]:
        return [im.letters for im in self.images]

    def inverse_letters(self) -> list[tuple[Letter, ...]]:
        return [im.letters for im in self.inverse_images]

    def __str__(self) -> str:
        return automorphism_str(self)


def apply(phi: FreeAutomorphism, u: Word) -> Word:
    if phi.basis != u.basis:
        raise BasisMismatchError("automorphism and word use different bases")
    return Word(u.basis, _apply_table(phi.image_letters(), u.letters))


def apply_inverse(phi: FreeAutomorphism, u: Word) -> Word:
    if phi.basis != u.basis:
        raise BasisMismatchError("automorphism and word use different bases")
    return Word(u.basis, _apply_table(phi.inverse_letters(), u.letters))


def apply_cyclic(phi: FreeAutomorphism, w: CyclicWord) -> CyclicWord:
    """Induced map on conjugacy classes: apply to any representative, reduce."""
    image, _ = cyclic_reduce(apply(phi, w.as_word()))
    return image


def identity_automorphism(basis: Basis) -> FreeAutomorphism:
    gens = tuple(Word(basis, (i,)) for i in basis.generators())
    return FreeAutomorphism(basis, gens, gens)


def compose(phi: FreeAutomorphism, psi: FreeAutomorphism) -> FreeAutomorphism:
    """The automorphism ``x -> phi(psi(x))``."""
    if phi.basis != psi.basis:
        raise BasisMismatchError("cannot compose over different bases")
    basis = phi.basis
    fwd = phi.image_letters()
    psi_bwd = psi.inverse_letters()
    images = tuple(Word(basis, _apply_table(fwd, im.letters)) for im in psi.images)
    inverse_images = tuple(
        Word(basis, _apply_table(psi_bwd, im.letters)) for im in phi.inverse_images
    )
    return FreeAutomorphism(basis, images, inverse_images)


def inverse(phi: FreeAutomorphism) -> FreeAutomorphism:
    return FreeAutomorphism(phi.basis, phi.inverse_images, phi.images)


def power(phi: FreeAutomorphism, n: int) -> FreeAutomorphism:
    if n < 0:
        return power(inverse(phi), -n)
    acc = identity_automorphism(phi.basis)
    for _ in range(n):
        acc = compose(phi, acc)
    return acc


def _table_automorphism(basis: Basis, fwd: dict[int, str], bwd: dict[int, str]) -> FreeAutomorphism:
    images = []
    inverse_images = []
    for i in basis.generators():
        images.append(word(basis, fwd.get(i, basis.letter_name(i))))
        inverse_images.append(word(basis, bwd.get(i, basis.letter_name(i))))
    return FreeAutomorphism(basis, tuple(images), tuple(inverse_images))


def simple_twist(basis: Basis, twisted: int, twistor: int) -> FreeAutomorphism:
    """The Dehn twist sending the ``twisted`` generator t to t*z, fixing the rest."""
    basis.check_letter(twisted)
    basis.check_letter(twistor)
    if twisted <= 0 or twistor <= 0 or twisted == twistor:
        raise ValueError("twist needs two distinct generators")
    t = basis.letter_name(twisted)
    z = basis.letter_name(twistor)
    return _table_automorphism(basis, {twisted: t + z}, {twisted: t + z.upper()})


def double_twist(basis: Basis) -> FreeAutomorphism:
    """The commuting product of the twists a -> ab and e -> ed (rank >= 5)."""
    if basis.rank < 5:
        raise RankError(f"the double twist requires rank >= 5, got {basis.rank}")
    return _table_automorphism(basis, {1: "ab", 5: "ed"}, {1: "aB", 5: "eD"})


def prime_basis_change(basis: Basis) -> FreeAutomorphism:
    """Carry the standard basis to the twisted basis a, a^-1 c, a^-1 c^-1 ab, c^-1 d, e.

    The target letters generate freely and satisfy b = b'a'c', c = a'b',
    d = a'b'd', hence the inverse table below.  Requires rank >= 5.
    """
    if basis.rank < 5:
        raise RankError(f"this basis change requires rank >= 5, got {basis.rank}")
    return _table_automorphism(
        basis,
        {2: "Ac", 3: "ACab", 4: "Cd"},
        {2: "bac", 3: "ab", 4: "abd"},
    )


def double_prime_basis_change(basis: Basis) -> FreeAutomorphism:
    """Like :func:`prime_basis_change` with c re-expressed through e: c = e''b''."""
    if basis.rank < 5:
        raise RankError(f"this basis change requires rank >= 5, got {basis.rank}")
    return _table_automorphism(
        basis,
        {2: "Ec", 3: "ACeb", 4: "CeAd"},
        {2: "bac", 3: "eb", 4: "abd"},
    )


_BUILTINS = {
    "identity": identity_automorphism,
    "phi": double_twist,
    "prime-basis-change": prime_basis_change,
    "double-prime-basis-change": double_prime_basis_change,
}


def parse_automorphism(basis: Basis, text: str) -> FreeAutomorphism:
    """Parse an automorphism literal.

    Accepts a built-in name (``identity``, ``phi``, ``twist(a,b)``,
    ``prime-basis-change``, ``double-prime-basis-change``) or a full table
    ``"a->ab; b->b | a->aB; b->b"`` whose part after ``|`` lists the inverse
    images.  Generators missing from a table are fixed.  Custom tables must
    include the inverse part; both directions are validated.
    """
    stripped = text.strip()
    if stripped.lower() in _BUILTINS:
        return _BUILTINS[stripped.lower()](basis)
    if stripped.startswith("twist(") and stripped.endswith(")"):
        inner = stripped[len("twist(") : -1]
        parts = [p.strip() for p in inner.split(",")]
        if len(parts) != 2 or any(len(p) != 1 for p in parts):
            raise ParseError(text, 0, "twist takes two generator letters, e.g. twist(a,b)")
        try:
            t = parse_letters(basis, parts[0])[0]
            z = parse_letters(basis, parts[1])[0]
        except ParseError:
            raise ParseError(text, 0, f"unknown generators in {stripped!r}")
        return simple_twist(basis, t, z)
    if "->" not in stripped:
        raise ParseError(text, 0, f"unknown automorphism {stripped!r}")
    halves = stripped.split("|")
    if len(halves) != 2:
        raise ParseError(
            text, 0, "a table literal needs an inverse part: 'a->ab; ... | a->aB; ...'"
        )
    fwd = _parse_half_table(basis, text, halves[0])
    bwd = _parse_half_table(basis, text, halves[1])
    try:
        return _table_automorphism(basis, fwd, bwd)
    except AutomorphismTableError as exc:
        raise ParseError(text, 0, str(exc))


def _parse_half_table(basis: Basis, full_text: str, half: str) -> dict[int, str]:
    table: dict[int, str] = {}
    for chunk in half.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "->" not in chunk:
            raise ParseError(full_text, full_text.find(chunk), f"missing '->' in {chunk!r}")
        left, right = chunk.split("->", 1)
        left = left.strip()
        gens = parse_letters(basis, left)
        if len(gens) != 1 or gens[0] <= 0:
            raise ParseError(full_text, full_text.find(chunk), f"left side of {chunk!r} must be one generator")
        if gens[0] in table:
            raise ParseError(full_text, full_text.find(chunk), f"generator {left!r} listed twice")
        table[gens[0]] = right.strip()
    return table


def automorphism_str(phi: FreeAutomorphism) -> str:
    fwd = "; ".join(
        f"{phi.basis.letter_name(i)}->{phi.images[i - 1]}" for i in phi.basis.generators()
    )
    bwd = "; ".join(
        f"{phi.basis.letter_name(i)}->{phi.inverse_images[i - 1]}" for i in phi.basis.generators()
    )
    return f"{fwd} | {bwd}"
