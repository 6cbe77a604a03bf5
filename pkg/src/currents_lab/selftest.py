"""Seeded randomized invariant suites covering every module.

Each check draws a deterministic corpus from its own generator, verifies an
exact identity, and reports the first failure with a witness.  The quick
profile shrinks corpora roughly tenfold for smoke runs; results are
deterministic given (seed, quick).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable

from .automorphisms import (
    apply,
    apply_cyclic,
    compose,
    inverse,
    power,
    simple_twist,
)
from .corpus import random_current, random_cyclic_word, random_reduced_word
from .currents import (
    act,
    coordinate,
    in_critical_set,
    length as current_length,
    projective_distance,
    projective_vector,
    rational_current,
)
from .dynamics import (
    escape_from_critical,
    run_theorem_main,
    tree_orbit_limit,
    walk_to_target,
)
from .trees import (
    cayley_tree,
    double_twist_tree,
    intersection_form,
    length as tree_length,
    length_britton,
    length_limit,
    projective_tree_vector,
    tree_projective_eq,
    twist_tree,
)
from .words import (
    Basis,
    Word,
    concat,
    count_subwords,
    cyclic_reduce,
    free_reduce,
    invert,
    occurrences,
    word,
    word_power,
)

RANKS = (2, 3, 5)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    trials: int
    witness: str | None = None


@dataclass(frozen=True)
class SuiteResult:
    module: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _rng(seed: int, label: str) -> Random:
    return Random(f"{seed}:{label}")


def _size(full: int, quick: bool) -> int:
    return max(full // 10, 5) if quick else full


def _raw_letters(rng: Random, basis: Basis, max_len: int) -> list[int]:
    alphabet = basis.signed_letters()
    return [rng.choice(alphabet) for _ in range(rng.randint(0, max_len))]


# ---------------------------------------------------------------- word suite


def _check_reduction(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "words/reduction")
    trials = _size(600, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        u = free_reduce(basis, _raw_letters(rng, basis, 20))
        again = free_reduce(basis, u.letters)
        if again != u:
            return CheckResult("words", "free reduction idempotent", False, trials, str(u))
        v = random_reduced_word(rng, basis, 12)
        if len(concat(u, v)) > len(u) + len(v):
            return CheckResult(
                "words", "free reduction idempotent", False, trials, f"{u} * {v}"
            )
    return CheckResult("words", "free reduction idempotent", True, trials)


def _check_occurrence_symmetry(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "words/symmetry")
    trials = _size(400, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        v = random_reduced_word(rng, basis, 5)
        w = random_cyclic_word(rng, basis, 30)
        if occurrences(v, w) != occurrences(invert(v), w):
            return CheckResult(
                "words", "occurrence inversion symmetry", False, trials, f"v={v} w={w}"
            )
    return CheckResult("words", "occurrence inversion symmetry", True, trials)


def _check_power_coherence(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "words/powers")
    trials = _size(200, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        root = random_cyclic_word(rng, basis, 6)
        m = rng.randint(2, 4)
        high, _ = cyclic_reduce(word_power(root.as_word(), m))
        base = count_subwords(root, 5)
        lifted = count_subwords(high, 5)
        keys = set(base) | set(lifted)
        for key in keys:
            if lifted.get(key, 0) != m * base.get(key, 0):
                name = "".join(basis.letter_name(x) for x in key)
                return CheckResult(
                    "words", "power coherence", False, trials, f"f={root} m={m} v={name}"
                )
    return CheckResult("words", "power coherence", True, trials)


def _rotations(letters: tuple[int, ...]) -> set[tuple[int, ...]]:
    return {letters[i:] + letters[:i] for i in range(len(letters))}


def _check_canonical_rotation(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "words/rotation")
    trials = _size(300, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        u = random_reduced_word(rng, basis, 8)
        g = random_reduced_word(rng, basis, 6)
        conjugate = concat(concat(g, u), invert(g))
        cu, _ = cyclic_reduce(u)
        cv, _ = cyclic_reduce(conjugate)
        if cu != cv:
            return CheckResult(
                "words", "canonical rotation vs conjugacy", False, trials, f"u={u} g={g}"
            )
        # canonical rotations agree exactly when one word is a rotation of the other
        other = random_reduced_word(rng, basis, 8)
        co, _ = cyclic_reduce(other)
        rotation_related = co.letters in _rotations(cu.letters)
        if (cu == co) != rotation_related:
            return CheckResult(
                "words", "canonical rotation vs conjugacy", False, trials, f"{cu} {co}"
            )
    return CheckResult("words", "canonical rotation vs conjugacy", True, trials)


# ------------------------------------------------------- automorphism suite


def _random_automorphism(rng: Random, basis: Basis):
    phi = None
    for _ in range(rng.randint(1, 3)):
        t = rng.choice(list(basis.generators()))
        z = rng.choice([i for i in basis.generators() if i != t])
        step = simple_twist(basis, t, z)
        if rng.random() < 0.5:
            step = inverse(step)
        phi = step if phi is None else compose(step, phi)
    return phi


def _check_composition(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "autos/composition")
    trials = _size(300, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        phi = _random_automorphism(rng, basis)
        psi = _random_automorphism(rng, basis)
        u = random_reduced_word(rng, basis, 12)
        if apply(compose(phi, psi), u) != apply(phi, apply(psi, u)):
            return CheckResult("automorphisms", "composition", False, trials, str(u))
        if apply(inverse(phi), apply(phi, u)) != u:
            return CheckResult("automorphisms", "composition", False, trials, str(u))
    return CheckResult("automorphisms", "composition", True, trials)


def _check_cyclic_action(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "autos/cyclic")
    trials = _size(500, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        phi = _random_automorphism(rng, basis)
        u = random_reduced_word(rng, basis, 30)
        g = random_reduced_word(rng, basis, 8)
        conjugate = concat(concat(g, u), invert(g))
        cu, _ = cyclic_reduce(u)
        expected, _ = cyclic_reduce(apply(phi, conjugate))
        if apply_cyclic(phi, cu) != expected:
            return CheckResult(
                "automorphisms", "conjugacy equivariance", False, trials, f"u={u} g={g}"
            )
    return CheckResult("automorphisms", "conjugacy equivariance", True, trials)


def _check_twist_growth(seed: int, quick: bool) -> CheckResult:
    basis = Basis(3)
    twist = simple_twist(basis, 1, 2)
    top = 10 if quick else 30
    for n in range(top + 1):
        image = apply(power(twist, n), word(basis, "a"))
        if len(image) != n + 1:
            return CheckResult(
                "automorphisms", "twist linear growth", False, top + 1, f"n={n} -> {image}"
            )
    return CheckResult("automorphisms", "twist linear growth", True, top + 1)


# ------------------------------------------------------------ current suite


def _check_extension_identities(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/extension")
    trials = _size(999, quick)
    for i in range(trials):
        basis = Basis(RANKS[i % len(RANKS)])
        nu = random_current(rng, basis)
        seen: set[tuple[int, ...]] = set()
        for cls, _ in nu.terms:
            seen.update(count_subwords(cls.root, 4))
        for letters in seen:
            v = Word(basis, letters)
            left = coordinate(v, nu)
            if left < 0:
                return CheckResult("currents", "extension identities", False, trials, str(v))
            right_sum = sum(
                (
                    coordinate(Word(basis, letters + (x,)), nu)
                    for x in basis.signed_letters()
                    if x != -letters[-1]
                ),
                Fraction(0),
            )
            left_sum = sum(
                (
                    coordinate(Word(basis, (x,) + letters), nu)
                    for x in basis.signed_letters()
                    if x != -letters[0]
                ),
                Fraction(0),
            )
            if left != right_sum or left != left_sum:
                return CheckResult(
                    "currents",
                    "extension identities",
                    False,
                    trials,
                    f"v={v} ({left} vs {right_sum}/{left_sum})",
                )
    return CheckResult("currents", "extension identities", True, trials)


def _check_level_identity(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/level")
    trials = _size(600, quick)
    for i in range(trials):
        basis = Basis(RANKS[i % len(RANKS)])
        nu = random_current(rng, basis)
        total = current_length(nu)
        for m in (1, 2, 3):
            # sum of (u;nu) over all |u| = m equals twice the sum of raw reads
            reads = sum(
                (
                    weight * sum(c for k, c in count_subwords(cls.root, m).items() if len(k) == m)
                    for cls, weight in nu.terms
                ),
                Fraction(0),
            )
            if reads != total:
                return CheckResult(
                    "currents", "level identity", False, trials, f"m={m}: {reads} != {total}"
                )
    return CheckResult("currents", "level identity", True, trials)


def _check_rational_length(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/length")
    trials = _size(1000, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        g = random_reduced_word(rng, basis, 30)
        cyc, _ = cyclic_reduce(g)
        if current_length(rational_current(g)) != len(cyc):
            return CheckResult("currents", "length of rational current", False, trials, str(g))
    return CheckResult("currents", "length of rational current", True, trials)


def _check_twist_identities(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/twist")
    trials = _size(600, quick)
    for i in range(trials):
        basis = Basis(RANKS[i % len(RANKS)])
        nu = random_current(rng, basis)
        t = rng.choice(list(basis.generators()))
        z = rng.choice([i for i in basis.generators() if i != t])
        twist = simple_twist(basis, t, z)
        image = act(twist, nu)

        def co(current, *letters: int) -> Fraction:
            return coordinate(Word(basis, letters), current)

        for x in basis.generators():
            if x != z and co(image, x) != co(nu, x):
                return CheckResult(
                    "currents", "twist coordinate identities", False, trials, f"x={x} nu={nu}"
                )
        checks = (
            co(image, z) == co(nu, z) + co(nu, t) - 2 * co(nu, t, -z),
            co(image, t, -z) == co(nu, t, -z, -z) + co(nu, t, -z, -t),
            current_length(image) - current_length(nu) == co(nu, t) - 2 * co(nu, t, -z),
        )
        if not all(checks):
            return CheckResult(
                "currents", "twist coordinate identities", False, trials, f"t={t} z={z} nu={nu}"
            )
    return CheckResult("currents", "twist coordinate identities", True, trials)


def _check_increment_monotone(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/monotone")
    trials = _size(300, quick)
    for i in range(trials):
        basis = Basis(RANKS[i % len(RANKS)])
        nu = random_current(rng, basis)
        twist = simple_twist(basis, 1, 2)
        lengths = [current_length(nu)]
        for _ in range(6):
            nu = act(twist, nu)
            lengths.append(current_length(nu))
        diffs = [b - a for a, b in zip(lengths, lengths[1:])]
        if lengths[1] > lengths[0] and any(b < a for a, b in zip(diffs, diffs[1:])):
            return CheckResult(
                "currents", "twist increment monotone", False, trials, str(lengths)
            )
    return CheckResult("currents", "twist increment monotone", True, trials)


def _check_action_functorial(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "currents/functorial")
    trials = _size(200, quick)
    for i in range(trials):
        basis = Basis(rng.choice(RANKS))
        nu = random_current(rng, basis, max_terms=2, max_root_len=6)
        phi = _random_automorphism(rng, basis)
        psi = _random_automorphism(rng, basis)
        if act(compose(phi, psi), nu) != act(phi, act(psi, nu)):
            return CheckResult("currents", "action functorial", False, trials, str(nu))
    return CheckResult("currents", "action functorial", True, trials)


# --------------------------------------------------------------- tree suite


def _test_trees(basis: Basis):
    trees = [twist_tree(basis, [(1, 2, Fraction(1))])]
    if basis.rank >= 5:
        for rho in (Fraction(1), Fraction(1, 2), Fraction(3)):
            for theta in (Fraction(1), Fraction(1, 2), Fraction(3)):
                trees.append(double_twist_tree(basis, rho, theta))
    return trees


def _check_route_agreement(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "trees/routes")
    basis = Basis(5)
    trials = _size(500, quick)
    trees = _test_trees(basis)
    for i in range(trials):
        g = random_reduced_word(rng, basis, 30)
        for tree in trees:
            britton = length_britton(tree, g)
            limit = length_limit(tree, g)
            if britton != limit:
                return CheckResult(
                    "trees", "Britton vs limit routes", False, trials,
                    f"g={g}: {britton} != {limit}",
                )
    return CheckResult("trees", "Britton vs limit routes", True, trials)


def _check_length_symmetries(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "trees/symmetry")
    basis = Basis(5)
    trials = _size(300, quick)
    trees = _test_trees(basis)[:4]
    for i in range(trials):
        tree = trees[i % len(trees)]
        g = random_reduced_word(rng, basis, 20)
        h = random_reduced_word(rng, basis, 8)
        conjugate = concat(concat(h, g), invert(h))
        base = tree_length(tree, g)
        if tree_length(tree, conjugate) != base or tree_length(tree, invert(g)) != base:
            return CheckResult(
                "trees", "conjugacy and inversion invariance", False, trials, f"g={g} h={h}"
            )
    return CheckResult("trees", "conjugacy and inversion invariance", True, trials)


def _check_length_homogeneity(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "trees/homogeneity")
    basis = Basis(5)
    trials = _size(200, quick)
    trees = _test_trees(basis)[:4]
    for i in range(trials):
        tree = trees[i % len(trees)]
        g = random_reduced_word(rng, basis, 12)
        base = tree_length(tree, g)
        if base == 0:
            continue
        for n in range(2, 6):
            if tree_length(tree, word_power(g, n)) != n * base:
                return CheckResult(
                    "trees", "translation length homogeneity", False, trials, f"g={g} n={n}"
                )
    return CheckResult("trees", "translation length homogeneity", True, trials)


def _check_ellipticity(seed: int, quick: bool) -> CheckResult:
    basis = Basis(5)
    twist = twist_tree(basis, [(1, 2, Fraction(1))])
    delta = double_twist_tree(basis, Fraction(1), Fraction(1, 2))
    elliptic = ["b", "d", "abA", "edE", "c"]
    checks = [(twist, "b")] + [(delta, text) for text in elliptic]
    for tree, text in checks:
        if tree_length(tree, word(basis, text)) != 0:
            return CheckResult("trees", "twistor ellipticity", False, len(checks), text)
    hyper = [(twist, "a", 1), (delta, "a", 1), (delta, "ae", Fraction(3, 2))]
    for tree, text, expected in hyper:
        if tree_length(tree, word(basis, text)) != expected:
            return CheckResult("trees", "twistor ellipticity", False, len(checks), text)
    return CheckResult("trees", "twistor ellipticity", True, len(checks) + len(hyper))


def _check_intersection_form(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "trees/pairing")
    basis = Basis(5)
    trials = _size(300, quick)
    trees = _test_trees(basis)[:4]
    for i in range(trials):
        tree = trees[i % len(trees)]
        g = random_reduced_word(rng, basis, 16)
        if intersection_form(tree, rational_current(g)) != tree_length(tree, g):
            return CheckResult("trees", "pairing extends length", False, trials, str(g))
    return CheckResult("trees", "pairing extends length", True, trials)


# ----------------------------------------------------------- dynamics suite


def _check_dichotomy(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "dynamics/dichotomy")
    trials = _size(500, quick)
    basis = Basis(3)
    done = 0
    draws = 0
    while done < trials:
        draws += 1
        if draws > 40 * trials:
            return CheckResult(
                "dynamics", "dichotomy off critical set", False, trials,
                "corpus almost surely critical: generator broken",
            )
        nu = random_current(rng, basis, max_terms=2, max_root_len=6)
        if in_critical_set(nu, 1, 2).member:
            continue
        done += 1
        a_coord = coordinate(word(basis, "a"), nu)
        toward_inverse = coordinate(word(basis, "aB"), nu)
        toward = coordinate(word(basis, "ab"), nu)
        if not (a_coord > 2 * toward_inverse or a_coord > 2 * toward):
            return CheckResult("dynamics", "dichotomy off critical set", False, trials, str(nu))
        direction = 1 if a_coord > 2 * toward_inverse else -1
        twist = simple_twist(basis, 1, 2)
        step = twist if direction == 1 else inverse(twist)
        target = projective_vector(rational_current(word(basis, "b")), 1)
        distances = []
        current = nu
        for _ in range(8):
            distances.append(projective_distance(projective_vector(current, 1), target))
            current = act(step, current)
        if any(b >= a for a, b in zip(distances, distances[1:])):
            return CheckResult(
                "dynamics", "dichotomy off critical set", False, trials, f"{nu}: {distances}"
            )
    return CheckResult("dynamics", "dichotomy off critical set", True, trials)


def _check_trichotomy(seed: int, quick: bool) -> CheckResult:
    rng = _rng(seed, "dynamics/trichotomy")
    trials = _size(1000, quick)
    for i in range(trials):
        if i % 4 == 3:
            # higher rank: the choice stays total and its first step already grows
            basis = Basis(5)
            nu = random_current(rng, basis)
            choice = escape_from_critical(nu)
            step = choice.twist if choice.direction == 1 else inverse(choice.twist)
            if current_length(act(step, nu)) <= current_length(nu):
                return CheckResult(
                    "dynamics", "escape walk within 40 steps", False, trials, str(nu)
                )
            continue
        basis = Basis(3)
        nu = random_current(rng, basis)
        choice = escape_from_critical(nu)
        hit, final = walk_to_target(choice, nu, steps=40, level=1)
        if hit is None:
            return CheckResult(
                "dynamics", "escape walk within 40 steps", False, trials,
                f"{nu}: final distance {final}",
            )
    return CheckResult("dynamics", "escape walk within 40 steps", True, trials)


def _check_limit_extraction(seed: int, quick: bool) -> CheckResult:
    basis = Basis(3)
    twist = simple_twist(basis, 1, 2)
    limit = tree_orbit_limit(twist, cayley_tree(basis), level=4)
    expected = projective_tree_vector(twist_tree(basis, [(1, 2, Fraction(1))]), 4)
    passed = tree_projective_eq(limit, expected)
    return CheckResult(
        "dynamics", "tree orbit limit of the twist", passed, 1,
        None if passed else "limit vector mismatch at level 4",
    )


def _check_separation(seed: int, quick: bool) -> CheckResult:
    report = run_theorem_main(iters=6 if quick else 12, level=2)
    failed = [a for a in report.assertions if not a.passed]
    if failed:
        return CheckResult(
            "dynamics", "headline separation certificate", False, 1,
            f"{failed[0].name}: {failed[0].witness}",
        )
    return CheckResult("dynamics", "headline separation certificate", True, 1)


_CHECKS: tuple[tuple[str, Callable[[int, bool], CheckResult]], ...] = (
    ("words", _check_reduction),
    ("words", _check_occurrence_symmetry),
    ("words", _check_power_coherence),
    ("words", _check_canonical_rotation),
    ("automorphisms", _check_composition),
    ("automorphisms", _check_cyclic_action),
    ("automorphisms", _check_twist_growth),
    ("currents", _check_extension_identities),
    ("currents", _check_level_identity),
    ("currents", _check_rational_length),
    ("currents", _check_twist_identities),
    ("currents", _check_increment_monotone),
    ("currents", _check_action_functorial),
    ("trees", _check_route_agreement),
    ("trees", _check_length_symmetries),
    ("trees", _check_length_homogeneity),
    ("trees", _check_ellipticity),
    ("trees", _check_intersection_form),
    ("dynamics", _check_dichotomy),
    ("dynamics", _check_trichotomy),
    ("dynamics", _check_limit_extraction),
    ("dynamics", _check_separation),
)


def run_selftest(seed: int = 1, quick: bool = False) -> tuple[SuiteResult, ...]:
    """Run every suite and collect results; deterministic given (seed, quick)."""
    by_module: dict[str, list[CheckResult]] = {}
    for module, fn in _CHECKS:
        result = fn(seed, quick)
        by_module.setdefault(module, []).append(result)
    return tuple(
        SuiteResult(module, tuple(checks)) for module, checks in by_module.items()
    )
