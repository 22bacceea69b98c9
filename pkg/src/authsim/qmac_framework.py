"""Symmetric prepare-and-measure quantum message authentication.

A scheme tags a classical message with a pure state E_tau |psi_in>, where the
label tau = f(k, m) is a public function of the shared key and the message.
Symmetry means every message sees the same number of equally likely tags:
the keys consistent with a message partition into blocks of uniform size L,
one block per realized label, so each message has |K|/L possible tags.

The central quantity is the impersonation probability

    p0 = 1/|T| + (1 - 1/|T|) * max over messages and label pairs of
         Q(accept | true tag, forged tag)

where |T| = |K|/L. Whenever two tags of some message have nonzero overlap,
the second term is positive and the scheme is strictly weaker than a
classical code with the same tag count; only schemes whose tags are mutually
orthogonal for every message (classical-equivalent schemes) sit on the
1/|T| floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Mapping

import numpy as np

from .errors import InvariantViolation, ParameterError
from .quantum_core import (
    PureState,
    UnitaryOperator,
    overlap,
    random_unitary,
    state_from_json_dict,
    state_to_json_dict,
    operator_to_json_dict,
    unitary_from_json_dict,
    basis_state,
)
from .symmetry_test import acceptance_error_formula

OVERLAP_TOL = 1e-9

Label = Hashable


@dataclass(frozen=True, eq=False)
class QmacScheme:
    """Message set, key set, label function, tagging unitaries, initial state.

    Keys are implicitly uniform. ``multiplicity`` is the number of keys
    sharing each realized label for a given message; structural symmetry is
    enforced by :func:`validate_scheme` / :func:`partition_keys` rather than
    at construction, so malformed schemes can be built and then diagnosed.
    """

    message_set: tuple
    key_set: tuple
    label_fn: Callable[[Any, Any], Label]
    tag_unitaries: Mapping[Label, UnitaryOperator]
    initial_state: PureState
    multiplicity: int = 1
    name: str = ""

    def __post_init__(self):
        if len(self.message_set) < 2:
            raise ParameterError("message set must contain at least two messages")
        if len(set(self.message_set)) != len(self.message_set):
            raise ParameterError("message set contains duplicates")
        if not self.key_set:
            raise ParameterError("key set must be nonempty")
        if len(set(self.key_set)) != len(self.key_set):
            raise ParameterError("key set contains duplicates")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise ParameterError(f"multiplicity must be a positive integer, got {self.multiplicity!r}")
        d = self.initial_state.d
        for label, gate in self.tag_unitaries.items():
            if gate.d != d:
                raise ParameterError(
                    f"tag unitary for label {label!r} has dimension {gate.d}, state has {d}"
                )

    @property
    def tags_per_message(self) -> int:
        return len(self.key_set) // self.multiplicity


def tag_state(scheme: QmacScheme, key, message) -> PureState:
    """Quantum tag E_f(k,m) |psi_in> for one key/message pair."""
    if key not in scheme.key_set:
        raise ParameterError(f"unknown key {key!r}")
    if message not in scheme.message_set:
        raise ParameterError(f"unknown message {message!r}")
    label = scheme.label_fn(key, message)
    gate = scheme.tag_unitaries.get(label)
    if gate is None:
        raise ParameterError(f"label {label!r} has no tagging unitary")
    return gate.apply(scheme.initial_state)


def realized_labels(scheme: QmacScheme, message) -> tuple:
    """Labels reached for a message, in first-appearance order over the keys."""
    if message not in scheme.message_set:
        raise ParameterError(f"unknown message {message!r}")
    seen = []
    for key in scheme.key_set:
        label = scheme.label_fn(key, message)
        if label not in seen:
            seen.append(label)
    return tuple(seen)


def partition_keys(scheme: QmacScheme, message) -> dict:
    """Key blocks per realized label; raises if the partition is not uniform.

    Blocks must be disjoint (automatic), cover the key set, all have size
    ``multiplicity``, and number |K|/multiplicity.
    """
    if message not in scheme.message_set:
        raise ParameterError(f"unknown message {message!r}")
    blocks: dict = {}
    for key in scheme.key_set:
        blocks.setdefault(scheme.label_fn(key, message), []).append(key)
    n_keys = len(scheme.key_set)
    if n_keys % scheme.multiplicity != 0:
        raise InvariantViolation(
            f"key count {n_keys} is not a multiple of multiplicity {scheme.multiplicity}"
        )
    for label, keys in blocks.items():
        if len(keys) != scheme.multiplicity:
            raise InvariantViolation(
                f"symmetry violation at message {message!r}, label {label!r}: "
                f"block size {len(keys)} != multiplicity {scheme.multiplicity}"
            )
    expected_blocks = n_keys // scheme.multiplicity
    if len(blocks) != expected_blocks:
        raise InvariantViolation(
            f"symmetry violation at message {message!r}: {len(blocks)} labels realized, "
            f"expected |K|/L = {expected_blocks}"
        )
    return {label: tuple(keys) for label, keys in blocks.items()}


def validate_scheme(scheme: QmacScheme) -> None:
    """Uniform partition for every message + label injectivity per key."""
    for message in scheme.message_set:
        partition_keys(scheme, message)
    for key in scheme.key_set:
        seen: dict = {}
        for message in scheme.message_set:
            label = scheme.label_fn(key, message)
            if label in seen:
                raise InvariantViolation(
                    f"key {key!r} maps messages {seen[label]!r} and {message!r} "
                    f"to the same label {label!r}"
                )
            seen[label] = message


def overlap_matrix(scheme: QmacScheme, message) -> tuple[tuple, np.ndarray]:
    """Pairwise tag-state overlaps |<Psi_tau'|Psi_tau>| for one message.

    Returns (labels, matrix) with labels in realization order; the matrix is
    symmetric with unit diagonal.
    """
    labels = realized_labels(scheme, message)
    blocks = {label: None for label in labels}
    for key in scheme.key_set:
        label = scheme.label_fn(key, message)
        if blocks.get(label) is None:
            blocks[label] = tag_state(scheme, key, message)
    states = [blocks[label] for label in labels]
    size = len(states)
    lam = np.eye(size)
    for i in range(size):
        for j in range(i + 1, size):
            lam[i, j] = lam[j, i] = abs(overlap(states[i], states[j]))
    return labels, lam


def max_offdiagonal_overlap(scheme: QmacScheme) -> float:
    """Largest tag overlap across all messages and distinct label pairs."""
    best = 0.0
    for message in scheme.message_set:
        _, lam = overlap_matrix(scheme, message)
        if lam.shape[0] > 1:
            off = lam - np.diag(np.diag(lam))
            best = max(best, float(off.max()))
    return best


def is_classical_equivalent(scheme: QmacScheme) -> bool:
    """True when every message's tags are mutually orthogonal (within 1e-9)."""
    return max_offdiagonal_overlap(scheme) <= OVERLAP_TOL


@dataclass(frozen=True)
class DecisionRule:
    """Bob's verdict on a received tag.

    ``projective``: project onto the expected tag state (accepts a wrong tag
    with probability lambda^2). ``symmetry-test``: symmetry test over
    ``copies`` total systems (accepts a wrong tag with probability
    (1 + (copies-1) lambda^2)/copies). Both accept honest tags surely.
    """

    kind: str
    copies: int | None = None

    def __post_init__(self):
        if self.kind not in ("projective", "symmetry-test"):
            raise ParameterError(f"unknown decision rule {self.kind!r}")
        if self.kind == "symmetry-test":
            if not isinstance(self.copies, int) or self.copies < 2:
                raise ParameterError("symmetry-test rule needs an integer copy count >= 2")
        elif self.copies is not None:
            raise ParameterError("projective rule takes no copy count")

    @classmethod
    def projective(cls) -> "DecisionRule":
        return cls(kind="projective")

    @classmethod
    def symmetry_test(cls, copies: int) -> "DecisionRule":
        return cls(kind="symmetry-test", copies=copies)

    def wrong_tag_acceptance(self, lam: float) -> float:
        if self.kind == "projective":
            return float(lam) ** 2
        return acceptance_error_formula(self.copies, lam)


@dataclass(frozen=True, eq=False)
class AttackReport:
    """Outcome of an attack optimization.

    ``deception_probability`` is the adversary's best success rate,
    ``classical_floor`` the 1/|T| guessing baseline, and the witness fields
    describe a maximizing strategy. ``deception_probability_average``, when
    present, replaces the max over (message, label pair) with the mean.
    """

    attack: str
    deception_probability: float
    classical_floor: float
    witness_message: Any = None
    witness_labels: tuple | None = None
    witness_state: PureState | None = None
    witness_strategy: str = ""
    deception_probability_average: float | None = None

    def __post_init__(self):
        if self.attack not in ("impersonation", "substitution"):
            raise ParameterError(f"unknown attack kind {self.attack!r}")
        p = self.deception_probability
        if p < self.classical_floor - 1e-9 or p > 1.0 + 1e-9:
            raise ParameterError(
                f"deception probability {p} outside [{self.classical_floor}, 1]"
            )


def impersonation_deception(
    scheme: QmacScheme, rule: DecisionRule | None = None
) -> AttackReport:
    """Best impersonation success against the scheme under Bob's rule.

    The forger guesses the right tag with probability 1/|T|; otherwise Bob
    accepts the mismatched tag with probability Q given by the rule and the
    pair's overlap, maximized exhaustively over messages and distinct label
    pairs (first maximizer in scan order wins ties). The mean-Q variant is
    reported alongside.
    """
    rule = rule or DecisionRule.projective()
    validate_scheme(scheme)
    tag_count = scheme.tags_per_message
    floor = 1.0 / tag_count

    best_q = 0.0
    witness = None
    q_values = []
    for message in scheme.message_set:
        labels, lam = overlap_matrix(scheme, message)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                q = rule.wrong_tag_acceptance(lam[i, j])
                q_values.append(q)
                q_values.append(q)  # both orderings of the pair
                if q > best_q:
                    best_q = q
                    witness = (message, (labels[j], labels[i]))
    mean_q = sum(q_values) / len(q_values) if q_values else 0.0

    witness_state = None
    witness_message = None
    witness_labels = None
    strategy = "guess a tag uniformly (single-label scheme)"
    if witness is not None:
        witness_message, (forged, expected) = witness
        witness_labels = (expected, forged)
        witness_state = scheme.tag_unitaries[forged].apply(scheme.initial_state)
        strategy = (
            f"send message {witness_message!r} with the tag state of label {forged!r}; "
            f"worst confusion against expected label {expected!r}"
        )
    return AttackReport(
        attack="impersonation",
        deception_probability=floor + (1.0 - floor) * best_q,
        classical_floor=floor,
        witness_message=witness_message,
        witness_labels=witness_labels,
        witness_state=witness_state,
        witness_strategy=strategy,
        deception_probability_average=floor + (1.0 - floor) * mean_q,
    )


@dataclass(frozen=True, eq=False)
class Theorem2Report:
    """Gap between a scheme's impersonation probability and the 1/|T| floor."""

    p0: float
    classical_floor: float
    margin: float
    max_overlap: float
    classical_equivalent: bool
    attack: AttackReport


def verify_theorem2(scheme: QmacScheme) -> Theorem2Report:
    """Margin of the impersonation probability over 1/|T| (projective rule).

    Overlaps at or below the 1e-9 tolerance are treated as orthogonal, so the
    margin is exactly zero for classical-equivalent schemes and strictly
    positive otherwise.
    """
    attack = impersonation_deception(scheme, DecisionRule.projective())
    lam_max = max_offdiagonal_overlap(scheme)
    classical = lam_max <= OVERLAP_TOL
    p0 = attack.classical_floor if classical else attack.deception_probability
    return Theorem2Report(
        p0=p0,
        classical_floor=attack.classical_floor,
        margin=p0 - attack.classical_floor,
        max_overlap=lam_max,
        classical_equivalent=classical,
        attack=attack,
    )


def random_scheme(
    rng: np.random.Generator, dim: int = 2, num_keys: int = 2, num_messages: int = 2
) -> QmacScheme:
    """Random symmetric scheme: label (k, m), one Haar-random unitary each."""
    keys = tuple(range(num_keys))
    messages = tuple(range(num_messages))
    unitaries = {
        (k, m): random_unitary(dim, rng) for k in keys for m in messages
    }
    return QmacScheme(
        message_set=messages,
        key_set=keys,
        label_fn=lambda k, m: (k, m),
        tag_unitaries=unitaries,
        initial_state=basis_state(0, (dim,)),
        multiplicity=1,
        name=f"random-{dim}d-{num_keys}k",
    )


def _label_to_str(label) -> str:
    if isinstance(label, tuple):
        return ",".join(str(part) for part in label)
    return str(label)


def scheme_to_json_dict(scheme: QmacScheme) -> dict:
    """Explicit tables: label per (key, message) plus unitary per label.

    Labels are canonicalized to strings; loading the document back yields an
    equivalent scheme whose labels are those strings.
    """
    label_table = [
        [_label_to_str(scheme.label_fn(k, m)) for m in scheme.message_set]
        for k in scheme.key_set
    ]
    used = {lbl for row in label_table for lbl in row}
    unitaries = {}
    for label, gate in scheme.tag_unitaries.items():
        key = _label_to_str(label)
        if key in used:
            unitaries[key] = operator_to_json_dict(gate)
    return {
        "name": scheme.name,
        "messages": list(scheme.message_set),
        "keys": list(scheme.key_set),
        "multiplicity": scheme.multiplicity,
        "label_table": label_table,
        "tag_unitaries": unitaries,
        "initial_state": state_to_json_dict(scheme.initial_state),
    }


def scheme_from_json_dict(doc: dict) -> QmacScheme:
    try:
        messages = tuple(doc["messages"])
        keys = tuple(doc["keys"])
        table = doc["label_table"]
        unitaries_doc = doc["tag_unitaries"]
        initial = state_from_json_dict(doc["initial_state"])
        multiplicity = int(doc.get("multiplicity", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed scheme document: {exc}") from exc
    if len(table) != len(keys) or any(len(row) != len(messages) for row in table):
        raise ParameterError("label table shape does not match keys x messages")
    lookup = {
        (key, message): str(table[ki][mi])
        for ki, key in enumerate(keys)
        for mi, message in enumerate(messages)
    }
    missing = {lbl for lbl in lookup.values() if lbl not in unitaries_doc}
    if missing:
        raise ParameterError(f"labels without tagging unitaries: {sorted(missing)}")
    unitaries = {lbl: unitary_from_json_dict(spec) for lbl, spec in unitaries_doc.items()}
    return QmacScheme(
        message_set=messages,
        key_set=keys,
        label_fn=lambda k, m: lookup[(k, m)],
        tag_unitaries=unitaries,
        initial_state=initial,
        multiplicity=multiplicity,
        name=str(doc.get("name", "")),
    )
