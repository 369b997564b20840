"""Wigner-d'Espagnat inequality lab: ab + b'c >= ac.

For any classical distribution over three propositions A, B, C the three
pair probabilities obey

    prob(A and B) + prob(not B and C) >= prob(A and C),

because every (A, C) case is either a B case or a not-B case. The lab
evaluates the three terms in three regimes:

* classical  -- a distribution over the 8 complete states; the inequality
  always holds, and `wde_classical` is the control group.
* tfu sets   -- a weighted population whose members carry T/F/U tags for
  each attribute. "A and B" counts members with both tags manifestly T,
  "not B" needs B manifestly F. Members with B undecidable can then sit in
  the ac count while escaping both left-hand terms, so the inequality can
  fail without any vectors in sight.
* quantum    -- states and projectors, with two measurement protocols:

  - "shared": all three tests act on the same register and "not B" is the
    literal complement I - B. Commuting (diagonal) configurations reduce
    exactly to the classical control group.
  - "paired": each pair of directions is tested on the two factors of a
    two-qubit register, first member on factor 0, second on factor 1, as
    in spin-pair experiments. For a perfectly anticorrelated state an
    affirmative middle-direction outcome on the partner factor is what
    manifests "not B" for the first factor; this is the protocol under
    which the singlet state violates the inequality.

Pair terms support two orderings: "sequential" (first-then-second, the
raw ||P2 P1 s||^2) and "symmetrized" (average of the two orders). In the
paired protocol the two factors' projectors commute, so the orderings
coincide; in the shared protocol they generally do not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, quantum
from .classical import (
    ClassicalDistribution,
    and_op,
    build_state_vector,
    negation_op,
    probability,
    projector_for,
)
from .errors import ValidationError
from .logic import TfuValue
from .quantum import (
    ComplexStateVector,
    HermitianProjector,
    ProjectorSpec,
    QubitDirection,
    projector_from_spec,
    qubit_state,
)

ORDERINGS = ("sequential", "symmetrized")
PROTOCOLS = ("paired", "shared")
HOLDS_TOL = 1e-12
SEARCH_THRESHOLD = 1e-9


@dataclass(frozen=True)
class WdeTriple:
    """The three pair terms; `violation` is how far ac overshoots."""

    ab: float
    not_b_c: float
    ac: float

    def __post_init__(self):
        for name in ("ab", "not_b_c", "ac"):  # keep plain floats, reports are strict
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def violation(self) -> float:
        return self.ac - self.ab - self.not_b_c

    def holds(self, tol: float = HOLDS_TOL) -> bool:
        return bool(self.violation <= tol)


def wde_classical(dist: ClassicalDistribution) -> WdeTriple:
    """The control group: three propositions, one distribution."""
    if dist.n != 3:
        raise ValidationError(f"need exactly 3 propositions, got n={dist.n}")
    s = build_state_vector(dist)
    a, b, c = (projector_for(i, 3) for i in range(3))
    return WdeTriple(
        ab=probability(and_op(a, b), s),
        not_b_c=probability(and_op(negation_op(b), c), s),
        ac=probability(and_op(a, c), s),
    )


@dataclass(frozen=True, eq=False)
class TfuPopulation:
    """Weighted members, each tagged (A, B, C) with T/F/U."""

    items: tuple[tuple[TfuValue, TfuValue, TfuValue], ...]
    weights: np.ndarray

    def __post_init__(self):
        items = tuple(tuple(member) for member in self.items)
        if len(items) == 0:
            raise ValidationError("population needs at least one member")
        for member in items:
            if len(member) != 3 or not all(isinstance(v, TfuValue) for v in member):
                raise ValidationError(f"member {member!r} is not a (A,B,C) TfuValue triple")
        weights = np.asarray(self.weights, dtype=float).copy()
        if weights.shape != (len(items),):
            raise ValidationError("need exactly one weight per member")
        if np.any(weights < 0):
            raise ValidationError("weights must be nonnegative")
        weights.setflags(write=False)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "weights", weights)


def wde_tfu_sets(pop: TfuPopulation) -> WdeTriple:
    """Set-level counting with manifest tags; no normalization is needed,
    the inequality is scale-free. All weights zero gives the degenerate
    (0, 0, 0), which holds with equality."""
    t = TfuValue.TRUE
    f = TfuValue.FALSE
    ab = not_b_c = ac = 0.0
    for (a, b, c), w in zip(pop.items, pop.weights):
        if a is t and b is t:
            ab += w
        if b is f and c is t:
            not_b_c += w
        if a is t and c is t:
            ac += w
    return WdeTriple(ab=ab, not_b_c=not_b_c, ac=ac)


# ---------------------------------------------------------------------------
# quantum variants

def singlet_state() -> ComplexStateVector:
    """The anticorrelated two-qubit state (0, 1, -1, 0)/sqrt(2)."""
    root_half = np.sqrt(0.5)
    return ComplexStateVector(np.array([0.0, root_half, -root_half, 0.0], dtype=complex))


def _joint(p1: HermitianProjector, p2: HermitianProjector,
           s: ComplexStateVector, ordering: str) -> float:
    first = p2.matrix @ (p1.matrix @ s.amplitudes)
    value = float(np.vdot(first, first).real)
    if ordering == "sequential":
        return value
    second = p1.matrix @ (p2.matrix @ s.amplitudes)
    return 0.5 * (value + float(np.vdot(second, second).real))


def _check_ordering(ordering: str) -> None:
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}: expected one of {ORDERINGS}")


def _as_projector(spec, dim: int) -> HermitianProjector:
    if isinstance(spec, HermitianProjector):
        if spec.dim != dim:
            raise ValidationError(f"projector dim {spec.dim} does not match state dim {dim}")
        return spec
    return projector_from_spec(spec, dim=dim)


def wde_quantum_shared(
    a, b, c, state: ComplexStateVector, ordering: str = "symmetrized"
) -> WdeTriple:
    """All three tests on one register; "not B" is the literal I - B."""
    _check_ordering(ordering)
    pa = _as_projector(a, state.dim)
    pb = _as_projector(b, state.dim)
    pc = _as_projector(c, state.dim)
    return WdeTriple(
        ab=_joint(pa, pb, state, ordering),
        not_b_c=_joint(pb.complement(), pc, state, ordering),
        ac=_joint(pa, pc, state, ordering),
    )


def _pair_projectors(x: QubitDirection, y: QubitDirection) -> tuple[HermitianProjector, HermitianProjector]:
    first = QubitDirection(x.theta, x.phi, factor=0, n_factors=2)
    second = QubitDirection(y.theta, y.phi, factor=1, n_factors=2)
    return projector_from_spec(first), projector_from_spec(second)


def wde_quantum_paired(
    a: QubitDirection,
    b: QubitDirection,
    c: QubitDirection,
    state: ComplexStateVector,
    ordering: str = "symmetrized",
) -> WdeTriple:
    """Pair-measurement protocol on a two-qubit register.

    Each term tests its first direction on factor 0 and its second on
    factor 1; the middle term tests (B, C) directly, the anticorrelation
    of the state being what reads the factor-1 outcome as "not B" of
    factor 0. The factor projectors commute, so both orderings agree.
    """
    _check_ordering(ordering)
    if state.dim != 4:
        raise ValidationError(f"paired protocol needs a two-qubit state, got dim {state.dim}")
    for spec in (a, b, c):
        if not isinstance(spec, QubitDirection):
            raise ValidationError("paired protocol takes QubitDirection specs")
    terms = {}
    for label, (x, y) in {"ab": (a, b), "not_b_c": (b, c), "ac": (a, c)}.items():
        p1, p2 = _pair_projectors(x, y)
        terms[label] = _joint(p1, p2, state, ordering)
    return WdeTriple(**terms)


def wde_quantum(
    a, b, c,
    state: ComplexStateVector,
    ordering: str = "symmetrized",
    protocol: str = "paired",
) -> WdeTriple:
    if protocol == "paired":
        return wde_quantum_paired(a, b, c, state, ordering)
    if protocol == "shared":
        return wde_quantum_shared(a, b, c, state, ordering)
    raise ValidationError(f"unknown protocol {protocol!r}: expected one of {PROTOCOLS}")


# ---------------------------------------------------------------------------
# grid search

@dataclass(frozen=True)
class AngleGrid:
    """Closed range [start, stop] walked in fixed steps (radians)."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not np.isfinite([self.start, self.stop, self.step]).all():
            raise ValidationError("grid bounds and step must be finite")
        if self.step <= 0:
            raise ValidationError(f"grid step must be positive, got {self.step!r}")
        if self.stop < self.start:
            raise ValidationError("grid stop lies before start")

    def values(self) -> np.ndarray:
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)

    def with_step(self, step: float) -> "AngleGrid":
        return AngleGrid(self.start, self.stop, step)


@dataclass(frozen=True)
class ViolationWitness:
    """Best grid tuple found, re-evaluated through the dense operator path."""

    thetas: tuple[float, float, float]
    triple: WdeTriple
    magnitude: float
    protocol: str
    ordering: str


def _pair_amplitude_table(th_x, th_y, state4) -> np.ndarray:
    """|<d(x) (x) d(y)|s>|^2 for every angle pair, vectorized (phi = 0)."""
    cx, sx = np.cos(th_x / 2.0), np.sin(th_x / 2.0)
    cy, sy = np.cos(th_y / 2.0), np.sin(th_y / 2.0)
    s00, s01, s10, s11 = state4
    amp = (
        np.multiply.outer(cx, cy) * s00
        + np.multiply.outer(cx, sy) * s01
        + np.multiply.outer(sx, cy) * s10
        + np.multiply.outer(sx, sy) * s11
    )
    return np.abs(amp) ** 2


def _paired_pair_matrices(th_a, th_b, th_c, state: ComplexStateVector):
    s4 = state.amplitudes
    return (
        _pair_amplitude_table(th_a, th_b, s4),
        _pair_amplitude_table(th_b, th_c, s4),
        _pair_amplitude_table(th_a, th_c, s4),
    )


def _direction_weights(thetas: np.ndarray, state: ComplexStateVector, factor: int) -> np.ndarray:
    """Born weight of each direction projector (on `factor`) against the state."""
    m = state.n_factors
    reshaped = np.moveaxis(state.amplitudes.reshape((2,) * m), factor, 0).reshape(2, -1)
    d = np.stack([np.cos(thetas / 2.0), np.sin(thetas / 2.0)], axis=1)  # phi = 0
    rows = d.conj() @ reshaped
    return np.sum(np.abs(rows) ** 2, axis=1)


def _overlap_table(th_x, th_y) -> np.ndarray:
    """|<d(y)|d(x)>|^2 = cos^2((x - y)/2) for every pair (phi = 0)."""
    return np.cos(np.subtract.outer(th_x, th_y) / 2.0) ** 2


def _shared_pair_matrices(th_a, th_b, th_c, state, factor, ordering):
    # Rank-one algebra: ||P_y P_x s||^2 = |<d_y|d_x>|^2 * <s|P_x|s>, and the
    # complement of a qubit direction is the antipodal direction, so
    # overlap and weight of "not b" are 1 - overlap and 1 - weight of b.
    wa = _direction_weights(th_a, state, factor)
    wb = _direction_weights(th_b, state, factor)
    wc = _direction_weights(th_c, state, factor)
    o_ab = _overlap_table(th_a, th_b)
    o_bc = _overlap_table(th_b, th_c)
    o_ac = _overlap_table(th_a, th_c)
    if ordering == "sequential":
        jab = o_ab * wa[:, None]
        jbc = (1.0 - o_bc) * (1.0 - wb)[:, None]
        jac = o_ac * wa[:, None]
    else:
        jab = o_ab * 0.5 * (wa[:, None] + wb[None, :])
        jbc = (1.0 - o_bc) * 0.5 * ((1.0 - wb)[:, None] + wc[None, :])
        jac = o_ac * 0.5 * (wa[:, None] + wc[None, :])
    return jab, jbc, jac


def search_violation(
    grid: AngleGrid | tuple[AngleGrid, AngleGrid, AngleGrid],
    state: ComplexStateVector,
    protocol: str = "paired",
    ordering: str = "symmetrized",
    threshold: float = SEARCH_THRESHOLD,
    factor: int = 0,
    backend: str | None = None,
) -> ViolationWitness | None:
    """Deterministic scan of a theta grid for an inequality violation.

    The kernel locates the best tuple (ties break to the lexicographically
    smallest one); the reported triple is then re-evaluated through the
    dense operator path, so the report never depends on the backend. A
    witness is returned only when the violation exceeds `threshold`;
    otherwise None.
    """
    _check_ordering(ordering)
    if protocol not in PROTOCOLS:
        raise ValidationError(f"unknown protocol {protocol!r}: expected one of {PROTOCOLS}")
    grids = (grid, grid, grid) if isinstance(grid, AngleGrid) else tuple(grid)
    if len(grids) != 3 or not all(isinstance(g, AngleGrid) for g in grids):
        raise ValidationError("grid must be one AngleGrid or a triple of them")
    th_a, th_b, th_c = (g.values() for g in grids)

    if protocol == "paired":
        if state.dim != 4:
            raise ValidationError("paired protocol needs a two-qubit state")
        jab, jbc, jac = _paired_pair_matrices(th_a, th_b, th_c, state)
    else:
        if not 0 <= factor < state.n_factors:
            raise ValidationError(f"factor {factor} out of range for {state.n_factors} qubits")
        jab, jbc, jac = _shared_pair_matrices(th_a, th_b, th_c, state, factor, ordering)

    (i, j, k), best = kernels.scan_triple(jab, jbc, jac, backend=backend)
    if best <= threshold:
        return None

    thetas = (float(th_a[i]), float(th_b[j]), float(th_c[k]))
    if protocol == "paired":
        specs = [QubitDirection(t) for t in thetas]
        triple = wde_quantum_paired(*specs, state, ordering)
    else:
        m = state.n_factors
        specs = [QubitDirection(t, factor=factor, n_factors=m) for t in thetas]
        triple = wde_quantum_shared(*specs, state, ordering)
    return ViolationWitness(
        thetas=thetas,
        triple=triple,
        magnitude=triple.violation,
        protocol=protocol,
        ordering=ordering,
    )
