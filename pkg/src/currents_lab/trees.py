"""Translation length functions of simplicial free group trees.

Two kinds of cores are supported.  A weighted Cayley core evaluates the
weighted cyclic length with respect to the basis.  A twist splitting core is
the Bass-Serre tree of an iterated HNN splitting with one loop edge per
twist: edge ``i`` has a stable generator ``t_i``, a twistor generator
``z_i`` elliptic in the vertex group, and a positive rational edge length.

A :class:`TreeLengthFunction` is a core together with a marking automorphism
(``||g||_{phi.T} = ||phi^-1(g)||_T``) and a positive scale.

Translation lengths on twist cores come from two independent routes that the
test suite cross-validates:

* :func:`length_britton` pinches the cyclic word over an extended alphabet
  (fresh symbols stand for ``t_i z_i t_i^-1``) until no pinch applies and
  charges each surviving stable letter its edge length.
* :func:`length_limit` iterates the core's multi-twist ``t_i -> t_i z_i`` and
  reads off the stabilized growth rate of the twistor-weighted cyclic
  length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .automorphisms import FreeAutomorphism, apply_inverse, identity_automorphism, parse_automorphism
from .currents import ConjugacyClass, RationalCurrent, power_free_classes
from .errors import (
    AllEllipticError,
    BasisMismatchError,
    IdentityElementError,
    LevelMismatchError,
    NotStabilizedError,
    ParseError,
    RankError,
)
from .words import Basis, Word, _reduced, cyclic_reduce


@dataclass(frozen=True)
class WeightedCayleyCore:
    """Cayley tree core with a positive rational length per generator."""

    basis: Basis
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.basis.rank:
            raise ValueError("need one weight per generator")
        for w in self.weights:
            if w <= 0:
                raise ValueError(f"edge weights must be positive, got {w}")


@dataclass(frozen=True)
class TwistEdge:
    stable: int
    twistor: int
    length: Fraction

    def __post_init__(self):
        if self.stable <= 0 or self.twistor <= 0 or self.stable == self.twistor:
            raise ValueError("a twist edge needs two distinct generators")
        if self.length <= 0:
            raise ValueError(f"edge length must be positive, got {self.length}")


@dataclass(frozen=True)
class TwistSplittingCore:
    """Iterated HNN core: one loop edge per twist, vertex group on the rest."""

    basis: Basis
    twists: tuple[TwistEdge, ...]

    def __post_init__(self):
        if not self.twists:
            raise ValueError("a twist core needs at least one twist")
        stables = [t.stable for t in self.twists]
        twistors = [t.twistor for t in self.twists]
        if len(set(stables)) != len(stables):
            raise ValueError("stable letters must be pairwise distinct")
        if len(set(twistors)) != len(twistors):
            raise ValueError("twistor letters must be pairwise distinct")
        for t in self.twists:
            self.basis.check_letter(t.stable)
            self.basis.check_letter(t.twistor)
            if t.twistor in stables:
                raise ValueError("a twistor cannot be another edge's stable letter")


Core = WeightedCayleyCore | TwistSplittingCore


@dataclass(frozen=True)
class TreeLengthFunction:
    core: Core
    marking: FreeAutomorphism
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.marking.basis != self.core.basis:
            raise BasisMismatchError("marking and core use different bases")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def basis(self) -> Basis:
        return self.core.basis


def cayley_tree(
    basis: Basis,
    weights: Sequence[Fraction] | None = None,
    marking: FreeAutomorphism | None = None,
    scale: Fraction = Fraction(1),
) -> TreeLengthFunction:
    """The (weighted) Cayley tree; unit weights by default."""
    if weights is None:
        weights = [Fraction(1)] * basis.rank
    core = WeightedCayleyCore(basis, tuple(Fraction(w) for w in weights))
    if marking is None:
        marking = identity_automorphism(basis)
    return TreeLengthFunction(core, marking, Fraction(scale))


def twist_tree(
    basis: Basis,
    twists: Sequence[tuple[int, int, Fraction]],
    marking: FreeAutomorphism | None = None,
    scale: Fraction = Fraction(1),
) -> TreeLengthFunction:
    core = TwistSplittingCore(
        basis, tuple(TwistEdge(t, z, Fraction(l)) for t, z, l in twists)
    )
    if marking is None:
        marking = identity_automorphism(basis)
    return TreeLengthFunction(core, marking, Fraction(scale))


def double_twist_tree(basis: Basis, rho: Fraction, theta: Fraction) -> TreeLengthFunction:
    """Two loop edges: a twisted by b with length rho, e twisted by d with length theta."""
    if basis.rank < 5:
        raise RankError(f"the double twist tree requires rank >= 5, got {basis.rank}")
    return twist_tree(basis, [(1, 2, Fraction(rho)), (5, 4, Fraction(theta))])


def _cyclic_reduce_list(letters: list[int]) -> list[int]:
    reduced = list(_reduced(letters))
    while len(reduced) >= 2 and reduced[0] == -reduced[-1]:
        reduced = reduced[1:-1]
    return reduced


def _britton_weight(core: TwistSplittingCore, letters: Sequence[int]) -> Fraction:
    """Edge-length total of the stable letters surviving cyclic pinching.

    Works over the extended alphabet where letter ``rank + 1 + i`` stands for
    ``t_i z_i t_i^-1``.  A pinch replaces ``t_i z_i^m t_i^-1`` by the fresh
    symbol to the ``m`` and ``t_i^-1 (fresh)^m t_i`` by ``z_i^m``; the vertex
    group is free on the non-stable generators plus the fresh symbols, so a
    subword lies in an edge group exactly when it is such a power.
    """
    rank = core.basis.rank
    stable_index = {t.stable: i for i, t in enumerate(core.twists)}
    current = list(letters)
    while True:
        current = _cyclic_reduce_list(current)
        if not current:
            return Fraction(0)
        positions = [p for p, x in enumerate(current) if abs(x) in stable_index]
        if not positions:
            return Fraction(0)
        pinched = False
        n = len(current)
        for which in range(len(positions)):
            p1 = positions[which]
            p2 = positions[(which + 1) % len(positions)]
            s1 = current[p1]
            s2 = current[p2]
            if s2 != -s1:
                continue
            i = stable_index[abs(s1)]
            edge = core.twists[i]
            fresh = rank + 1 + i
            inner = edge.twistor if s1 > 0 else fresh
            outer = fresh if s1 > 0 else edge.twistor
            segment = [current[(p1 + 1 + j) % n] for j in range((p2 - p1 - 1) % n)]
            if all(x == inner for x in segment):
                replacement = [outer] * len(segment)
            elif all(x == -inner for x in segment):
                replacement = [-outer] * len(segment)
            else:
                continue
            rotated = current[p1:] + current[:p1]
            span = (p2 - p1) % n
            current = replacement + rotated[span + 1 :]
            pinched = True
            break
        if not pinched:
            return sum(
                (core.twists[stable_index[abs(x)]].length for x in current if abs(x) in stable_index),
                Fraction(0),
            )


def _core_letters(tree: TreeLengthFunction, g: Word) -> tuple[int, ...]:
    if g.basis != tree.basis:
        raise BasisMismatchError("tree and word use different bases")
    if g.is_identity():
        raise IdentityElementError("translation length needs a nontrivial element")
    pulled = apply_inverse(tree.marking, g)
    cycle, _ = cyclic_reduce(pulled)
    return cycle.letters


def length_britton(tree: TreeLengthFunction, g: Word) -> Fraction:
    """Translation length on a twist core via cyclic Britton pinching."""
    if not isinstance(tree.core, TwistSplittingCore):
        raise ValueError("length_britton needs a twist splitting core")
    return tree.scale * _britton_weight(tree.core, _core_letters(tree, g))


def _max_cyclic_run(letters: Sequence[int], targets: set[int]) -> int:
    """Longest cyclic run of a single letter whose absolute value is a target."""
    n = len(letters)
    if n == 0:
        return 0
    if all(abs(x) in targets and x == letters[0] for x in letters):
        return n
    best = 0
    run = 0
    prev = None
    for x in list(letters) + list(letters):  # doubled pass covers wrap-around runs
        if abs(x) in targets and x == prev:
            run += 1
        elif abs(x) in targets:
            run = 1
        else:
            run = 0
        prev = x
        best = max(best, min(run, n))
    return best


def length_limit(tree: TreeLengthFunction, g: Word, cap: int = 64) -> Fraction:
    """Translation length on a twist core as a stabilized growth rate.

    Iterates the core's multi-twist ``t_i -> t_i z_i`` on the pulled-back
    word and watches the twistor-weighted cyclic length.  That sequence is a
    sum of absolute values of affine functions of the step, one per twistor
    run, so it is convex with breakpoints bounded by the longest twistor run
    of the starting word; the first difference is read off from a window of
    three equal values placed after that transient.  Raises
    :class:`NotStabilizedError` when ``cap`` iterations do not suffice.
    """
    if not isinstance(tree.core, TwistSplittingCore):
        raise ValueError("length_limit needs a twist splitting core")
    if cap < 8:
        raise ValueError(f"cap must be at least 8, got {cap}")
    core = tree.core
    weights = {t.twistor: t.length for t in core.twists}
    images: dict[int, tuple[int, ...]] = {}
    for i in core.basis.generators():
        images[i] = (i,)
    for t in core.twists:
        images[t.stable] = (t.stable, t.twistor)

    def step(letters: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for x in letters:
            if x > 0:
                out.extend(images[x])
            else:
                out.extend(-y for y in reversed(images[-x]))
        return _reduced(out)

    def weighted_cyclic(letters: tuple[int, ...]) -> Fraction:
        cycle = _cyclic_reduce_list(list(letters))
        return sum((weights.get(abs(x), Fraction(0)) for x in cycle), Fraction(0))

    current = _core_letters(tree, g)
    transient = _max_cyclic_run(current, set(weights))
    if transient + 3 > cap:
        raise NotStabilizedError(
            f"need {transient + 3} iterations but cap is {cap} for {g}", ()
        )
    values = [weighted_cyclic(current)]
    diffs: list[Fraction] = []
    for n in range(cap):
        current = step(current)
        values.append(weighted_cyclic(current))
        diffs.append(values[-1] - values[-2])
        if n + 1 >= transient + 3 and diffs[-1] == diffs[-2] == diffs[-3]:
            return tree.scale * diffs[-1]
    raise NotStabilizedError(
        f"no stable growth rate within {cap} iterations for {g}", values
    )


def length(tree: TreeLengthFunction, g: Word) -> Fraction:
    """Translation length of ``g`` on the marked, scaled tree."""
    letters = _core_letters(tree, g)
    if isinstance(tree.core, WeightedCayleyCore):
        total = sum((tree.core.weights[abs(x) - 1] for x in letters), Fraction(0))
        return tree.scale * total
    return tree.scale * _britton_weight(tree.core, letters)


def intersection_form(tree: TreeLengthFunction, nu: RationalCurrent) -> Fraction:
    """Length pairing: weighted sum of root translation lengths."""
    if tree.basis != nu.basis:
        raise BasisMismatchError("tree and current use different bases")
    total = Fraction(0)
    for cls, weight in nu.terms:
        total += weight * length(tree, cls.root.as_word())
    return total


@dataclass(frozen=True)
class ProjectiveTreeVector:
    """Normalized translation lengths over the level's power-free test classes."""

    basis: Basis
    level: int
    classes: tuple[ConjugacyClass, ...]
    entries: tuple[Fraction, ...]


def projective_tree_vector(tree: TreeLengthFunction, level: int) -> ProjectiveTreeVector:
    classes = power_free_classes(tree.basis, level)
    values = [length(tree, cls.root.as_word()) for cls in classes]
    total = sum(values, Fraction(0))
    if total == 0:
        raise AllEllipticError("every test class is elliptic; no projective class")
    return ProjectiveTreeVector(
        tree.basis, level, classes, tuple(v / total for v in values)
    )


def tree_projective_eq(p: ProjectiveTreeVector, q: ProjectiveTreeVector) -> bool:
    if p.level != q.level:
        raise LevelMismatchError(f"levels differ: {p.level} vs {q.level}")
    if p.basis != q.basis:
        raise BasisMismatchError("vectors use different bases")
    return p.entries == q.entries


def parse_tree(basis: Basis, text: str) -> TreeLengthFunction:
    """Parse a tree literal.

    Forms::

        cayley [w(a)=1 w(b)=3/2 ...] [scale=p/q] [marking=<automorphism>]
        twist (a:b,1) [(e:d,3/2) ...] [scale=p/q] [marking=<automorphism>]

    ``marking=`` must come last; it consumes the rest of the line.
    """
    stripped = text.strip()
    marking = None
    marker = stripped.find("marking=")
    if marker >= 0:
        marking = parse_automorphism(basis, stripped[marker + len("marking=") :])
        stripped = stripped[:marker].strip()
    scale = Fraction(1)
    tokens = stripped.split()
    if not tokens:
        raise ParseError(text, 0, "empty tree literal")
    kind = tokens[0].lower()
    body = tokens[1:]
    plain: list[str] = []
    for tok in body:
        if tok.startswith("scale="):
            scale = _parse_fraction(text, tok[len("scale=") :])
        else:
            plain.append(tok)
    if kind == "cayley":
        weights = [Fraction(1)] * basis.rank
        for tok in plain:
            if not (tok.startswith("w(") and ")=" in tok):
                raise ParseError(text, text.find(tok), f"unexpected token {tok!r}")
            name, _, value = tok[2:].partition(")=")
            gen = _single_generator(basis, text, name)
            weights[gen - 1] = _parse_fraction(text, value)
        return cayley_tree(basis, weights, marking, scale)
    if kind == "twist":
        twists = []
        for tok in plain:
            if not (tok.startswith("(") and tok.endswith(")")):
                raise ParseError(text, text.find(tok), f"unexpected token {tok!r}")
            inner = tok[1:-1]
            head, _, tail = inner.partition(",")
            t_name, _, z_name = head.partition(":")
            if not tail or not z_name:
                raise ParseError(text, text.find(tok), "twist edges look like (a:b,1)")
            t = _single_generator(basis, text, t_name)
            z = _single_generator(basis, text, z_name)
            twists.append((t, z, _parse_fraction(text, tail)))
        if not twists:
            raise ParseError(text, 0, "twist tree needs at least one (t:z,length) edge")
        return twist_tree(basis, twists, marking, scale)
    raise ParseError(text, 0, f"unknown tree kind {kind!r}; use 'cayley' or 'twist'")


def _single_generator(basis: Basis, text: str, name: str) -> int:
    from .words import parse_letters

    letters = parse_letters(basis, name.strip())
    if len(letters) != 1 or letters[0] <= 0:
        raise ParseError(text, text.find(name), f"{name!r} is not a single generator")
    return letters[0]


def _parse_fraction(text: str, value: str) -> Fraction:
    try:
        out = Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(text, text.find(value), f"bad rational {value!r}")
    if out <= 0:
        raise ParseError(text, text.find(value), f"expected a positive rational, got {value!r}")
    return out
