"""Measure-valued probability over three-valued cells.

For n propositions the joint demonstrability situation is one of 3^n
cells (each proposition tagged T, F or U), and a nonnegative measure is
spread over the cells. The probability of p is the T-mass of p within its
decided mass:

    prob(p) = ||p=T|| / (||p=T|| + ||p=F||)

with every cell where p is undecidable standing aside entirely, in the
numerator and in the denominator. Conditionals keep only the cells where
the condition is manifestly true:

    prob(q | p) = ||p=T, q=T|| / (||p=T, q=T|| + ||p=T, q=F||)

Because conditioning on p and conditioning on q discard different U-mass,
prob(p) * prob(q|p) and prob(q) * prob(p|q) need not agree: the classical
product rule fails at the level of demonstrability, with no complex
amplitudes in sight. The quantum module reproduces the same failure with
non-commuting projectors.

Cell ordering convention: cells are indexed 0..3^n-1 in base 3, with
proposition 0 on the most significant digit and digits T=0, F=1, U=2.
Keys like "TU" name cells in files and reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import ClassicalDistribution
from .errors import UndefinedConditionalError, ValidationError
from .logic import state_count

CELL_SYMBOLS = "TFU"
_T, _F, _U = 0, 1, 2


def cell_count(n: int) -> int:
    return 3 ** n


def cell_key(cell: int, n: int) -> str:
    digits = []
    for k in range(n):
        digits.append(CELL_SYMBOLS[(cell // 3 ** (n - 1 - k)) % 3])
    return "".join(digits)


def cell_from_key(key: str) -> tuple[int, int]:
    """Inverse of cell_key. Returns (cell index, n)."""
    n = len(key)
    if n == 0:
        raise ValidationError("empty cell key")
    cell = 0
    for ch in key.upper():
        if ch not in CELL_SYMBOLS:
            raise ValidationError(f"bad cell key {key!r}: expected letters T, F, U")
        cell = cell * 3 + CELL_SYMBOLS.index(ch)
    return cell, n


def _digits(n: int, prop: int) -> np.ndarray:
    """Digit of `prop` (0=T, 1=F, 2=U) for every cell index, vectorized."""
    if not 0 <= prop < n:
        raise ValidationError(f"proposition index {prop} out of range for n={n}")
    return (np.arange(cell_count(n)) // 3 ** (n - 1 - prop)) % 3


@dataclass(frozen=True, eq=False)
class TfuMeasureAssignment:
    """Nonnegative measure over the 3^n cells; only ratios ever matter."""

    n: int
    measures: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("need at least one proposition")
        arr = np.asarray(self.measures, dtype=float).copy()
        if arr.shape != (cell_count(self.n),):
            raise ValidationError(
                f"measure vector for n={self.n} needs {cell_count(self.n)} entries, "
                f"got shape {arr.shape}"
            )
        if np.any(arr < 0):
            bad = int(np.argmin(arr))
            raise ValidationError(
                f"cell {cell_key(bad, self.n)} carries negative measure {arr[bad]!r}"
            )
        if float(arr.sum()) <= 0.0:
            raise ValidationError("total measure must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "measures", arr)

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[str, float]) -> "TfuMeasureAssignment":
        """Build from {'TU': 2.0, ...}; omitted cells carry zero measure."""
        measures = np.zeros(cell_count(n))
        for key, value in mapping.items():
            cell, kn = cell_from_key(key)
            if kn != n:
                raise ValidationError(f"cell key {key!r} does not match n={n}")
            measures[cell] = float(value)
        return cls(n, measures)

    def mass_where(self, prop: int, digit: int) -> float:
        return float(self.measures[_digits(self.n, prop) == digit].sum())


def tfu_probability(prop: int, m: TfuMeasureAssignment) -> float:
    """T-mass of the proposition relative to its decided (T or F) mass."""
    t = m.mass_where(prop, _T)
    f = m.mass_where(prop, _F)
    if t + f <= 0.0:
        raise UndefinedConditionalError(
            f"proposition {prop} is everywhere undecidable: no decided mass"
        )
    return t / (t + f)


def tfu_conditional(q: int, p: int, m: TfuMeasureAssignment) -> float:
    """Probability of q among the cells where p is manifestly true."""
    if p == q:
        raise ValidationError("conditional needs two distinct propositions")
    dp = _digits(m.n, p)
    dq = _digits(m.n, q)
    tt = float(m.measures[(dp == _T) & (dq == _T)].sum())
    tf = float(m.measures[(dp == _T) & (dq == _F)].sum())
    if tt + tf <= 0.0:
        raise UndefinedConditionalError(
            f"no decided mass for proposition {q} among cells where {p} is true"
        )
    return tt / (tt + tf)


def noncommutativity_gap(p: int, q: int, m: TfuMeasureAssignment) -> float:
    """prob(p)*prob(q|p) - prob(q)*prob(p|q): zero classically, not here."""
    forward = tfu_probability(p, m) * tfu_conditional(q, p, m)
    backward = tfu_probability(q, m) * tfu_conditional(p, q, m)
    return forward - backward


def swap_tf(m: TfuMeasureAssignment, prop: int) -> TfuMeasureAssignment:
    """The assignment with T and F exchanged on one proposition (its negation)."""
    digits = _digits(m.n, prop)
    step = 3 ** (m.n - 1 - prop)
    cells = np.arange(cell_count(m.n))
    # T<->F: move digit 0 cells up one step, digit 1 cells down; U stays.
    source = cells + np.where(digits == _T, step, np.where(digits == _F, -step, 0))
    return TfuMeasureAssignment(m.n, m.measures[source])


def complement_check(prop: int, m: TfuMeasureAssignment) -> tuple[float, float]:
    """(prob(p), prob(~p)); the two always sum to one when defined."""
    return tfu_probability(prop, m), tfu_probability(prop, swap_tf(m, prop))


def decided_distribution(m: TfuMeasureAssignment, tol: float = 0.0) -> ClassicalDistribution:
    """Classical distribution induced when no U-mass is present.

    Cells with only T/F digits map onto complete states (T = affirmative);
    any U-cell mass above tol is an error, since it has no classical home.
    """
    n = m.n
    probs = np.zeros(state_count(n))
    total = float(m.measures.sum())
    for cell in range(cell_count(n)):
        state = 0
        undecided = False
        for k in range(n):
            digit = (cell // 3 ** (n - 1 - k)) % 3
            if digit == _U:
                undecided = True
                break
            state = (state << 1) | (1 if digit == _F else 0)
        if undecided:
            if m.measures[cell] > tol:
                raise ValidationError(
                    f"cell {cell_key(cell, n)} carries undecided measure "
                    f"{m.measures[cell]!r}; no classical counterpart"
                )
            continue
        probs[state] += m.measures[cell] / total
    return ClassicalDistribution(probs)


@dataclass(frozen=True, eq=False)
class DecidabilityAugmentedSpace:
    """Classical space over n propositions plus their n decidability flags.

    Proposition k of the base space is proposition k here; "p_k is decided"
    is proposition n+k. A single classical distribution over the 2^(2n)
    complete states then induces a TFU measure on the base propositions:
    T needs the proposition and its flag both affirmative, F needs the flag
    affirmative and the proposition negated, and U is just the flag negated.
    """

    distribution: ClassicalDistribution

    def __post_init__(self):
        if self.distribution.n % 2 != 0:
            raise ValidationError(
                "augmented space needs an even number of propositions "
                "(each base proposition brings its decidability flag)"
            )

    @property
    def n(self) -> int:
        return self.distribution.n // 2


def tfu_from_augmented(space: DecidabilityAugmentedSpace) -> TfuMeasureAssignment:
    n = space.n
    total_props = 2 * n
    probs = space.distribution.probs
    measures = np.zeros(cell_count(n))
    for state in range(probs.size):
        cell = 0
        for k in range(n):
            base_affirm = (state >> (total_props - 1 - k)) & 1 == 0
            flag_affirm = (state >> (total_props - 1 - (n + k))) & 1 == 0
            if not flag_affirm:
                digit = _U
            elif base_affirm:
                digit = _T
            else:
                digit = _F
            cell = cell * 3 + digit
        measures[cell] += probs[state]
    return TfuMeasureAssignment(n, measures)
