"""Brute-force analysis of one-time authentication from keyed hash families.

A family maps (key, message) -> tag over explicit finite spaces. Deception
probabilities are ratios of key counts, so everything here is computed in
exact rational arithmetic (`fractions.Fraction`); floats appear only in the
key-length accounting, which is measured in bits.

Two concrete constructions are provided:

* the affine family h_(a,b)(m) = a*m + b mod p over a prime field, which is
  strongly universal and meets the 1/|T| floor for both impersonation and
  substitution, and
* the polynomial family h_(a,b)(m_1..m_l) = b + sum_i m_i * a^i mod p, an
  l/p-almost-strongly-universal family trading substitution slack for a key
  that no longer grows with the message length.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable

from .errors import ParameterError

ENUMERATION_CAP = 1 << 22  # |K| * |M| ceiling for brute-force analysis
PRIME_CAP = 1 << 20
MESSAGE_SPACE_CAP = 1 << 20  # p**blocks ceiling for the polynomial family


class FamilyKind(Enum):
    STRONGLY_UNIVERSAL = "strongly-universal"
    EPSILON_ASU = "epsilon-asu"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class HashFamily:
    """Keyed function family over explicit finite key/message/tag spaces.

    ``evaluate`` must be total on [0, key_space_size) x message_space and
    return elements of tag_space. ``epsilon`` carries the substitution bound
    of an almost-strongly-universal family and is required exactly for
    ``FamilyKind.EPSILON_ASU``.
    """

    key_space_size: int
    message_space: tuple
    tag_space: tuple
    evaluate: Callable[[int, Any], Any]
    family_kind: FamilyKind
    epsilon: Fraction | None = None
    name: str = "custom"

    def __post_init__(self):
        if not (isinstance(self.key_space_size, int) and self.key_space_size >= 1):
            raise ParameterError(f"key_space_size must be a positive integer, got {self.key_space_size!r}")
        if len(self.message_space) <= 1:
            raise ParameterError("message space must contain more than one message")
        if not self.tag_space:
            raise ParameterError("tag space must be nonempty")
        if len(set(self.message_space)) != len(self.message_space):
            raise ParameterError("message space contains duplicates")
        if len(set(self.tag_space)) != len(self.tag_space):
            raise ParameterError("tag space contains duplicates")
        if self.family_kind is FamilyKind.EPSILON_ASU:
            if not isinstance(self.epsilon, Fraction) or self.epsilon <= 0:
                raise ParameterError("epsilon-ASU families need a positive Fraction epsilon")
        elif self.epsilon is not None:
            raise ParameterError("epsilon is only meaningful for epsilon-ASU families")

    @cached_property
    def _message_lookup(self) -> frozenset:
        return frozenset(self.message_space)


@dataclass(frozen=True)
class DeceptionReport:
    """Exact worst-case forgery probabilities with their witnessing pairs.

    p0: best impersonation success, max over forged (message, tag) of the
        fraction of keys accepting it.
    p1: best substitution success, max over observed valid pairs (m, t) with
        nonzero key support and forged (m', t'), m' != m, of the conditional
        fraction of consistent keys.
    Argmax witnesses are the first maximizers in enumeration order.
    """

    p0: Fraction
    p1: Fraction
    argmax_impersonation: tuple
    argmax_substitution: tuple

    def __post_init__(self):
        if not 0 < self.p0 <= 1:
            raise ParameterError(f"p0 = {self.p0} outside (0, 1]")
        if not 0 <= self.p1 <= 1:
            raise ParameterError(f"p1 = {self.p1} outside [0, 1]")

    def to_json_dict(self) -> dict:
        def plain(x):
            return list(x) if isinstance(x, tuple) else x

        (m, t) = self.argmax_impersonation
        ((om, ot), (fm, ft)) = self.argmax_substitution
        return {
            "p0": f"{self.p0.numerator}/{self.p0.denominator}",
            "p1": f"{self.p1.numerator}/{self.p1.denominator}",
            "argmax_impersonation": [plain(m), plain(t)],
            "argmax_substitution": [[plain(om), plain(ot)], [plain(fm), plain(ft)]],
        }


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise ParameterError(f"modulus must be an integer, got {p!r}")
    if not 2 <= p <= PRIME_CAP:
        raise ParameterError(f"modulus {p} outside [2, {PRIME_CAP}]")
    if not _is_prime(p):
        raise ParameterError(f"modulus {p} is not prime")
    return p


def make_affine_family(p: int) -> HashFamily:
    """Strongly universal family h_(a,b)(m) = a*m + b mod p, key (a, b) in Z_p^2.

    Key index k encodes (a, b) = divmod(k, p); messages and tags are Z_p.
    """
    p = _check_prime(p)

    def evaluate(key_index: int, message: int):
        a, b = divmod(key_index, p)
        return (a * message + b) % p

    return HashFamily(
        key_space_size=p * p,
        message_space=tuple(range(p)),
        tag_space=tuple(range(p)),
        evaluate=evaluate,
        family_kind=FamilyKind.STRONGLY_UNIVERSAL,
        name=f"affine-p{p}",
    )


def make_poly_family(p: int, blocks: int) -> HashFamily:
    """blocks/p-ASU family h_(a,b)(m) = b + sum_i m_i * a^i mod p.

    Messages are tuples in Z_p^blocks (lexicographic order); key (a, b) is
    decoded as for the affine family. blocks = 1 coincides with the affine
    family's behavior.
    """
    p = _check_prime(p)
    if not isinstance(blocks, int) or blocks < 1:
        raise ParameterError(f"block count must be a positive integer, got {blocks!r}")
    if p**blocks > MESSAGE_SPACE_CAP:
        raise ParameterError(f"message space p**blocks = {p**blocks} exceeds cap {MESSAGE_SPACE_CAP}")

    def evaluate(key_index: int, message: tuple):
        a, b = divmod(key_index, p)
        acc, power = b, 1
        for part in message:
            power = (power * a) % p
            acc += part * power
        return acc % p

    return HashFamily(
        key_space_size=p * p,
        message_space=tuple(itertools.product(range(p), repeat=blocks)),
        tag_space=tuple(range(p)),
        evaluate=evaluate,
        family_kind=FamilyKind.EPSILON_ASU,
        epsilon=Fraction(blocks, p),
        name=f"poly-p{p}-l{blocks}",
    )


def tag(family: HashFamily, key_index: int, message) -> Any:
    """Evaluate h(k, m) after range-checking both inputs."""
    if not isinstance(key_index, int) or not 0 <= key_index < family.key_space_size:
        raise ParameterError(f"key index {key_index!r} outside [0, {family.key_space_size})")
    if message not in family._message_lookup:
        raise ParameterError(f"message {message!r} not in the message space")
    return family.evaluate(key_index, message)


def verify(family: HashFamily, key_index: int, message, tag_value) -> bool:
    """Accept iff tag_value equals h(k, m). Deterministic."""
    return tag(family, key_index, message) == tag_value


def _tag_rows(family: HashFamily) -> dict:
    n_keys = family.key_space_size
    if n_keys * len(family.message_space) > ENUMERATION_CAP:
        raise ParameterError(
            f"|K|*|M| = {n_keys * len(family.message_space)} exceeds enumeration cap {ENUMERATION_CAP}"
        )
    return {m: [family.evaluate(k, m) for k in range(n_keys)] for m in family.message_space}


def deception_probabilities(family: HashFamily) -> DeceptionReport:
    """Exact impersonation and substitution probabilities by key enumeration.

    Ties are broken toward the first maximizer: impersonation scans
    (message, tag) in space order; substitution scans
    (observed message, forged message, observed tag, forged tag).
    Observed pairs reachable by no key are skipped (the conditional is
    undefined there).
    """
    rows = _tag_rows(family)
    n_keys = family.key_space_size

    best_count = -1
    best_pair = None
    for m in family.message_space:
        counts = Counter(rows[m])
        for t in family.tag_space:
            c = counts.get(t, 0)
            if c > best_count:
                best_count, best_pair = c, (m, t)
    p0 = Fraction(best_count, n_keys)

    best_sub = None
    best_witness = None
    for m in family.message_space:
        observed_counts = Counter(rows[m])
        for m2 in family.message_space:
            if m2 == m:
                continue
            joint = Counter(zip(rows[m], rows[m2]))
            for t in family.tag_space:
                support = observed_counts.get(t, 0)
                if support == 0:
                    continue
                for t2 in family.tag_space:
                    cand = Fraction(joint.get((t, t2), 0), support)
                    if best_sub is None or cand > best_sub:
                        best_sub, best_witness = cand, ((m, t), (m2, t2))
    return DeceptionReport(
        p0=p0, p1=best_sub, argmax_impersonation=best_pair, argmax_substitution=best_witness
    )


def pairwise_key_counts(family: HashFamily, m, m2) -> dict:
    """Counts |{k : h(k,m)=t and h(k,m2)=t2}| for every tag pair (t, t2)."""
    if m not in family._message_lookup or m2 not in family._message_lookup:
        raise ParameterError("messages must lie in the message space")
    n_keys = family.key_space_size
    joint = Counter((family.evaluate(k, m), family.evaluate(k, m2)) for k in range(n_keys))
    return {
        (t, t2): joint.get((t, t2), 0) for t in family.tag_space for t2 in family.tag_space
    }


def is_strongly_universal(family: HashFamily) -> bool:
    """Exhaustive check that every (t, t2) cell holds exactly |K|/|T|^2 keys."""
    n_keys = family.key_space_size
    cell, rem = divmod(n_keys, len(family.tag_space) ** 2)
    if rem != 0:
        return False
    for m, m2 in itertools.combinations(family.message_space, 2):
        counts = pairwise_key_counts(family, m, m2)
        if any(c != cell for c in counts.values()):
            return False
    return True


def key_length_lower_bound(observed_pairs: int, epsilon) -> float:
    """Minimum key length in bits for forgery probability epsilon after
    observing the given number of valid pairs: (l + 1) * |log2(epsilon)|."""
    if not isinstance(observed_pairs, int) or observed_pairs < 0:
        raise ParameterError(f"observed pair count must be a nonnegative integer, got {observed_pairs!r}")
    try:
        eps = Fraction(epsilon)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"epsilon {epsilon!r} is not a rational value") from exc
    if not 0 < eps <= 1:
        raise ParameterError(f"epsilon {eps} outside (0, 1]")
    return (observed_pairs + 1) * abs(math.log2(eps))
