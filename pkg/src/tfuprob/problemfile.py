"""Problem files: JSON descriptions of what to evaluate.

Every file carries an integer "version" (currently 1) and a "mode":

    tfu-table    {"n": 2, "values": {"++": "F", "+-": "U", ...} | [list]}
    classical    {"n": 2, "probs": [0.25, ...] | {"++": 0.25, ...}}
    tfu-measure  {"n": 2, "measures": {"TT": 1, ...} | [list of 3^n]}
    quantum      {"state": [amp, ...], "projectors": {"P": spec, ...}}
    wde          {"variant": "classical" | "tfu-sets" | "quantum", ...}

Amplitudes are JSON numbers or [re, im] pairs. Projector specs:

    {"type": "qubit-direction", "theta": x, "phi": 0, "factor": 0, "n_factors": 1}
    {"type": "diagonal", "mask": [1, 0, ...]}
    {"type": "subspace", "vectors": [[amp, ...], ...]}

The wde quantum variant takes "protocol" ("paired" or "shared"), a
"state", and either "directions" {"a": {"theta": ...}, "b": ..., "c": ...}
or, for the shared protocol, "projectors" {"a": spec, ...}; an optional
"grid" {"start", "stop", "step"} (or one such object per angle under
"grids") enables violation searches, and "ordering"/"factor" tune the
evaluation.

Structural problems (bad JSON, missing or unknown fields) raise
ProblemFileError; payloads that parse but violate domain invariants raise
ValidationError from the domain constructors. The command line maps the
two to different exit codes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalDistribution
from .errors import ProblemFileError
from .logic import CompleteStateTable, TfuValue
from .measures import TfuMeasureAssignment
from .quantum import ComplexStateVector, HermitianProjector, QubitDirection, SubspaceSpan, projector_from_spec
from .wde import ORDERINGS, PROTOCOLS, AngleGrid, TfuPopulation

VERSION = 1
MODES = ("tfu-table", "classical", "tfu-measure", "quantum", "wde")


def _need(payload: dict, key: str, kind, where: str):
    if key not in payload:
        raise ProblemFileError(f"{where}: missing required field {key!r}")
    value = payload[key]
    if kind is not None and not isinstance(value, kind):
        raise ProblemFileError(
            f"{where}: field {key!r} has type {type(value).__name__}, "
            f"expected {getattr(kind, '__name__', kind)}"
        )
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _amplitude(value, where: str) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ProblemFileError(f"{where}: amplitude pair must be [re, im]")
        return complex(_number(value[0], where), _number(value[1], where))
    return complex(_number(value, where), 0.0)


def _state(payload: dict, where: str) -> ComplexStateVector:
    raw = _need(payload, "state", list, where)
    amps = np.array([_amplitude(v, f"{where}.state") for v in raw], dtype=complex)
    return ComplexStateVector(amps)


def parse_projector_spec(raw, where: str, dim: int | None = None) -> HermitianProjector:
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{where}: projector spec must be an object")
    kind = _need(raw, "type", str, where)
    if kind == "qubit-direction":
        spec = QubitDirection(
            theta=_number(_need(raw, "theta", None, where), where),
            phi=_number(raw.get("phi", 0.0), where),
            factor=int(raw.get("factor", 0)),
            n_factors=int(raw.get("n_factors", 1)),
        )
        return projector_from_spec(spec, dim=dim)
    if kind == "diagonal":
        mask = _need(raw, "mask", list, where)
        proj = HermitianProjector.from_diagonal(np.array(mask))
        if dim is not None and proj.dim != dim:
            raise ProblemFileError(f"{where}: diagonal mask has dim {proj.dim}, expected {dim}")
        return proj
    if kind == "subspace":
        rows = _need(raw, "vectors", list, where)
        vectors = np.array(
            [[_amplitude(v, where) for v in row] for row in rows], dtype=complex
        )
        return projector_from_spec(SubspaceSpan(vectors), dim=dim)
    raise ProblemFileError(f"{where}: unknown projector type {kind!r}")


@dataclass(frozen=True)
class TfuTableProblem:
    table: CompleteStateTable


@dataclass(frozen=True)
class ClassicalProblem:
    distribution: ClassicalDistribution


@dataclass(frozen=True)
class TfuMeasureProblem:
    assignment: TfuMeasureAssignment


@dataclass(frozen=True)
class QuantumProblem:
    state: ComplexStateVector
    projectors: dict[str, HermitianProjector]


@dataclass(frozen=True)
class WdeClassicalProblem:
    distribution: ClassicalDistribution


@dataclass(frozen=True)
class WdeTfuSetsProblem:
    population: TfuPopulation


@dataclass(frozen=True)
class WdeQuantumProblem:
    state: ComplexStateVector
    protocol: str
    directions: tuple[QubitDirection, QubitDirection, QubitDirection] | None
    projectors: tuple[HermitianProjector, HermitianProjector, HermitianProjector] | None
    ordering: str | None
    factor: int
    grids: tuple[AngleGrid, AngleGrid, AngleGrid] | None


Problem = (
    TfuTableProblem
    | ClassicalProblem
    | TfuMeasureProblem
    | QuantumProblem
    | WdeClassicalProblem
    | WdeTfuSetsProblem
    | WdeQuantumProblem
)


@dataclass(frozen=True)
class ProblemFile:
    version: int
    mode: str
    problem: Problem
    raw: dict


def _parse_n(payload: dict, where: str) -> int:
    n = _need(payload, "n", int, where)
    if isinstance(n, bool) or n < 1:
        raise ProblemFileError(f"{where}: n must be a positive integer")
    return n


def _parse_tfu_table(payload: dict) -> TfuTableProblem:
    n = _parse_n(payload, "tfu-table")
    values = _need(payload, "values", (list, dict), "tfu-table")
    if isinstance(values, dict):
        table = CompleteStateTable.from_mapping(n, values)
    else:
        table = CompleteStateTable(n, tuple(TfuValue.parse(str(v)) for v in values))
    return TfuTableProblem(table)


def _parse_classical(payload: dict) -> ClassicalProblem:
    n = _parse_n(payload, "classical")
    probs = _need(payload, "probs", (list, dict), "classical")
    if isinstance(probs, dict):
        dist = ClassicalDistribution.from_mapping(
            n, {k: _number(v, "classical.probs") for k, v in probs.items()}
        )
    else:
        arr = np.array([_number(v, "classical.probs") for v in probs])
        if arr.size != 1 << n:
            raise ProblemFileError(
                f"classical: probs has {arr.size} entries, expected {1 << n} for n={n}"
            )
        dist = ClassicalDistribution(arr)
    return ClassicalProblem(dist)


def _parse_tfu_measure(payload: dict) -> TfuMeasureProblem:
    n = _parse_n(payload, "tfu-measure")
    measures = _need(payload, "measures", (list, dict), "tfu-measure")
    if isinstance(measures, dict):
        assignment = TfuMeasureAssignment.from_mapping(
            n, {k: _number(v, "tfu-measure.measures") for k, v in measures.items()}
        )
    else:
        arr = np.array([_number(v, "tfu-measure.measures") for v in measures])
        assignment = TfuMeasureAssignment(n, arr)
    return TfuMeasureProblem(assignment)


def _parse_quantum(payload: dict) -> QuantumProblem:
    state = _state(payload, "quantum")
    raw_projs = _need(payload, "projectors", dict, "quantum")
    if not raw_projs:
        raise ProblemFileError("quantum: needs at least one projector")
    projectors = {
        str(name): parse_projector_spec(spec, f"quantum.projectors.{name}", dim=state.dim)
        for name, spec in raw_projs.items()
    }
    return QuantumProblem(state, projectors)


def _parse_grid(raw, where: str) -> AngleGrid:
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{where}: grid must be an object")
    return AngleGrid(
        start=_number(_need(raw, "start", None, where), where),
        stop=_number(_need(raw, "stop", None, where), where),
        step=_number(_need(raw, "step", None, where), where),
    )


def _parse_direction(raw, where: str) -> QubitDirection:
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{where}: direction must be an object with theta")
    return QubitDirection(
        theta=_number(_need(raw, "theta", None, where), where),
        phi=_number(raw.get("phi", 0.0), where),
    )


def _parse_wde(payload: dict) -> Problem:
    variant = _need(payload, "variant", str, "wde")
    if variant == "classical":
        probs = _need(payload, "probs", (list, dict), "wde")
        if isinstance(probs, dict):
            dist = ClassicalDistribution.from_mapping(
                3, {k: _number(v, "wde.probs") for k, v in probs.items()}
            )
        else:
            dist = ClassicalDistribution(np.array([_number(v, "wde.probs") for v in probs]))
        return WdeClassicalProblem(dist)
    if variant == "tfu-sets":
        raw_items = _need(payload, "items", list, "wde")
        members = []
        weights = []
        for pos, item in enumerate(raw_items):
            where = f"wde.items[{pos}]"
            if not isinstance(item, dict):
                raise ProblemFileError(f"{where}: expected an object")
            tags = _need(item, "tags", str, where)
            if len(tags) != 3:
                raise ProblemFileError(f"{where}: tags must be three letters from T/F/U")
            members.append(tuple(TfuValue.parse(ch) for ch in tags))
            weights.append(_number(item.get("weight", 1.0), where))
        return WdeTfuSetsProblem(TfuPopulation(tuple(members), np.array(weights)))
    if variant == "quantum":
        state = _state(payload, "wde")
        protocol = _need(payload, "protocol", str, "wde")
        if protocol not in PROTOCOLS:
            raise ProblemFileError(f"wde: unknown protocol {protocol!r}")
        ordering = payload.get("ordering")
        if ordering is not None and ordering not in ORDERINGS:
            raise ProblemFileError(f"wde: unknown ordering {ordering!r}")
        factor = int(payload.get("factor", 0))
        directions = None
        projectors = None
        if "directions" in payload:
            raw_dirs = _need(payload, "directions", dict, "wde")
            directions = tuple(
                _parse_direction(
                    _need(raw_dirs, name, None, "wde.directions"), f"wde.directions.{name}"
                )
                for name in ("a", "b", "c")
            )
        elif "projectors" in payload:
            if protocol != "shared":
                raise ProblemFileError("wde: explicit projectors need the shared protocol")
            raw_projs = _need(payload, "projectors", dict, "wde")
            projectors = tuple(
                parse_projector_spec(
                    _need(raw_projs, name, None, "wde.projectors"),
                    f"wde.projectors.{name}",
                    dim=state.dim,
                )
                for name in ("a", "b", "c")
            )
        grids = None
        if "grids" in payload:
            raw_grids = _need(payload, "grids", dict, "wde")
            grids = tuple(
                _parse_grid(_need(raw_grids, name, None, "wde.grids"), f"wde.grids.{name}")
                for name in ("a", "b", "c")
            )
        elif "grid" in payload:
            g = _parse_grid(payload["grid"], "wde.grid")
            grids = (g, g, g)
        if directions is None and projectors is None and grids is None:
            raise ProblemFileError(
                "wde: quantum variant needs directions, projectors, or a grid"
            )
        return WdeQuantumProblem(
            state=state,
            protocol=protocol,
            directions=directions,
            projectors=projectors,
            ordering=ordering,
            factor=factor,
            grids=grids,
        )
    raise ProblemFileError(f"wde: unknown variant {variant!r}")


_PARSERS = {
    "tfu-table": _parse_tfu_table,
    "classical": _parse_classical,
    "tfu-measure": _parse_tfu_measure,
    "quantum": _parse_quantum,
    "wde": _parse_wde,
}


def loads(text: str) -> ProblemFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ProblemFileError("problem file must be a JSON object")
    version = _need(raw, "version", int, "problem file")
    if isinstance(version, bool) or version != VERSION:
        raise ProblemFileError(f"unsupported problem file version {version!r}")
    mode = _need(raw, "mode", str, "problem file")
    if mode not in MODES:
        raise ProblemFileError(f"unknown mode {mode!r}: expected one of {MODES}")
    problem = _PARSERS[mode](raw)
    return ProblemFile(version=version, mode=mode, problem=problem, raw=raw)


def load_path(path: str) -> ProblemFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read problem file {path!r}: {exc}") from exc
    return loads(text)
