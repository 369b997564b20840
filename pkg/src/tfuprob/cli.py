"""Command line front end.

Three verbs:

    tfuprob eval FILE     evaluate every quantity a problem file defines
    tfuprob check         run the seeded invariant suites of every module
    tfuprob search FILE   scan a wde quantum problem's grid for a violation

Reports go to stdout in the chosen --format (structured JSON by default,
byte-identical across runs with the same inputs and seed); errors go to
stderr. Exit codes: 0 success, 1 property/check failure, 2 problem file or
formula parse error, 3 validation error, 4 undefined conditional.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, checks, classical, kernels, logic, measures, quantum, report, wde
from .errors import (
    FormulaError,
    ProblemFileError,
    TfuProbError,
    UndefinedConditionalError,
    ValidationError,
)
from .logic import default_names
from .problemfile import (
    ClassicalProblem,
    ProblemFile,
    QuantumProblem,
    TfuMeasureProblem,
    TfuTableProblem,
    WdeClassicalProblem,
    WdeQuantumProblem,
    WdeTfuSetsProblem,
    load_path,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNDEFINED = 4


def _envelope(command: str, args) -> dict:
    return {
        "command": command,
        "tool": {"name": "tfuprob", "version": __version__},
        "seed": args.seed,
        "tolerance": args.tolerance,
    }


def _labeled(label: str):
    """Re-raise undefined-conditional errors naming the report quantity."""

    class _Context:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc_type is not None and issubclass(exc_type, UndefinedConditionalError):
                raise UndefinedConditionalError(f'cannot evaluate "{label}": {exc}') from exc
            return False

    return _Context()


def _eval_tfu_table(problem: TfuTableProblem) -> dict:
    table = problem.table
    names = default_names(table.n)
    derived = logic.derived_values(table)
    conjunctions = {}
    for i in range(table.n):
        for j in range(i + 1, table.n):
            value = logic.conjunction_value(table, i, j)
            conjunctions[f"{names[i]}&{names[j]}"] = str(value)
    return {
        "states": {
            logic.state_key(state, table.n): str(table.values[state])
            for state in range(len(table.values))
        },
        "derived": {names[i]: str(derived[i]) for i in range(table.n)},
        "conjunctions": conjunctions,
        "nexus": [imp.label(names) for imp in logic.detect_nexus(table)],
    }


def _eval_classical(problem: ClassicalProblem, tol: float) -> dict:
    dist = problem.distribution
    n = dist.n
    names = default_names(n)
    vec = classical.build_state_vector(dist)
    state_dir = classical.state_direction(vec)
    projs = [classical.projector_for(i, n) for i in range(n)]
    probs = [classical.probability(projs[i], vec) for i in range(n)]

    propositions = {}
    for i, name in enumerate(names):
        entry = {f"|{name}|": probs[i]}
        if probs[i] > tol:
            entry[f"cos2({name.upper()},S)"] = classical.cos2(
                state_dir, classical.projected_direction(projs[i], vec)
            )
        propositions[name] = entry

    pairs = {}
    for i in range(n):
        for j in range(i + 1, n):
            pn, qn = names[i], names[j]
            p, q = projs[i], projs[j]
            pq = classical.and_op(p, q)
            joint = classical.probability(pq, vec)
            entry = {f"|{pn}&{qn}|": joint}
            with _labeled(f"|{qn}|_{pn}"):
                entry[f"|{qn}|_{pn}"] = classical.conditional(q, p, vec, tol)
            with _labeled(f"|{pn}|_{qn}"):
                entry[f"|{pn}|_{qn}"] = classical.conditional(p, q, vec, tol)
            if probs[i] > tol and probs[j] > tol:
                dir_p = classical.projected_direction(p, vec)
                dir_q = classical.projected_direction(q, vec)
                entry[f"cos2({pn.upper()},{qn.upper()})"] = classical.cos2(dir_p, dir_q)
                if joint > tol:
                    dir_pq = classical.projected_direction(pq, vec)
                    entry[f"cos2({pn.upper()},{pn.upper()}{qn.upper()})"] = classical.cos2(
                        dir_p, dir_pq
                    )
                    entry[f"cos2({qn.upper()},{pn.upper()}{qn.upper()})"] = classical.cos2(
                        dir_q, dir_pq
                    )
            pairs[f"{pn},{qn}"] = entry
    return {"propositions": propositions, "pairs": pairs}


def _eval_tfu_measure(problem: TfuMeasureProblem) -> dict:
    m = problem.assignment
    names = default_names(m.n)
    propositions = {}
    for i, name in enumerate(names):
        with _labeled(f"[{name}]"):
            prob, comp = measures.complement_check(i, m)
        propositions[name] = {f"[{name}]": prob, f"[~{name}]": comp}
    pairs = {}
    for i in range(m.n):
        for j in range(i + 1, m.n):
            pn, qn = names[i], names[j]
            entry = {}
            with _labeled(f"[{qn}]_{pn}"):
                entry[f"[{qn}]_{pn}"] = measures.tfu_conditional(j, i, m)
            with _labeled(f"[{pn}]_{qn}"):
                entry[f"[{pn}]_{qn}"] = measures.tfu_conditional(i, j, m)
            with _labeled(f"gap({pn},{qn})"):
                entry[f"gap({pn},{qn})"] = measures.noncommutativity_gap(i, j, m)
            pairs[f"{pn},{qn}"] = entry
    return {"propositions": propositions, "pairs": pairs}


def _eval_quantum(problem: QuantumProblem, tol: float) -> dict:
    state = problem.state
    names = list(problem.projectors)
    projectors = {}
    for name in names:
        projectors[name] = {f"born({name})": quantum.born(problem.projectors[name], state)}
    pairs = {}
    for pos, pn in enumerate(names):
        for qn in names[pos + 1:]:
            p = problem.projectors[pn]
            q = problem.projectors[qn]
            entry = {}
            with _labeled(f"cond({qn}|{pn})"):
                entry[f"cond({qn}|{pn})"] = quantum.sequential_conditional(q, p, state, tol)
            with _labeled(f"cond({pn}|{qn})"):
                entry[f"cond({pn}|{qn})"] = quantum.sequential_conditional(p, q, state, tol)
            entry[f"asymmetry({pn},{qn})"] = quantum.product_asymmetry(p, q, state)
            entry[f"commutator({pn},{qn})"] = quantum.commutator_norm(p, q)
            pairs[f"{pn},{qn}"] = entry
    return {"projectors": projectors, "pairs": pairs}


def _triple_results(triple: wde.WdeTriple, tol: float) -> dict:
    return {
        "ab": triple.ab,
        "not_b_c": triple.not_b_c,
        "ac": triple.ac,
        "violation": triple.violation,
        "holds": triple.holds(tol),
    }


def _resolve_ordering(args, problem) -> str:
    if args.ordering is not None:
        return args.ordering
    file_ordering = getattr(problem, "ordering", None)
    return file_ordering if file_ordering is not None else "symmetrized"


def _wde_quantum_projectors(problem: WdeQuantumProblem):
    """Materialize the three test descriptions for the stated protocol."""
    if problem.protocol == "paired":
        if problem.directions is None:
            raise ProblemFileError("wde: paired protocol needs directions")
        return problem.directions
    if problem.projectors is not None:
        return problem.projectors
    if problem.directions is None:
        raise ProblemFileError("wde: shared protocol needs directions or projectors")
    m = problem.state.n_factors
    return tuple(
        quantum.QubitDirection(d.theta, d.phi, factor=problem.factor, n_factors=m)
        for d in problem.directions
    )


def _eval_wde(pf: ProblemFile, args) -> dict:
    problem = pf.problem
    tol = args.tolerance
    if isinstance(problem, WdeClassicalProblem):
        triple = wde.wde_classical(problem.distribution)
        return {"variant": "classical", **_triple_results(triple, tol)}
    if isinstance(problem, WdeTfuSetsProblem):
        triple = wde.wde_tfu_sets(problem.population)
        return {"variant": "tfu-sets", **_triple_results(triple, tol)}
    ordering = _resolve_ordering(args, problem)
    specs = _wde_quantum_projectors(problem)
    triple = wde.wde_quantum(*specs, problem.state, ordering, problem.protocol)
    return {
        "variant": "quantum",
        "protocol": problem.protocol,
        "ordering": ordering,
        **_triple_results(triple, tol),
    }


def cmd_eval(args) -> int:
    pf = load_path(args.file)
    out = _envelope("eval", args)
    out["mode"] = pf.mode
    out["input"] = pf.raw
    problem = pf.problem
    if isinstance(problem, TfuTableProblem):
        out["results"] = _eval_tfu_table(problem)
    elif isinstance(problem, ClassicalProblem):
        out["results"] = _eval_classical(problem, args.tolerance)
    elif isinstance(problem, TfuMeasureProblem):
        out["results"] = _eval_tfu_measure(problem)
    elif isinstance(problem, QuantumProblem):
        out["results"] = _eval_quantum(problem, args.tolerance)
    else:
        out["results"] = _eval_wde(pf, args)
        if "ordering" in out["results"]:
            out["ordering"] = out["results"]["ordering"]
    sys.stdout.write(report.render(out, args.format))
    return EXIT_OK


def cmd_check(args) -> int:
    out = checks.run_checks(seed=args.seed, tolerance=args.tolerance)
    out["tool"] = {"name": "tfuprob", "version": __version__}
    sys.stdout.write(report.render(out, args.format))
    return EXIT_OK if out["passed"] else EXIT_CHECK_FAILED


def cmd_search(args) -> int:
    pf = load_path(args.file)
    problem = pf.problem
    if not isinstance(problem, WdeQuantumProblem):
        raise ProblemFileError("search needs a wde problem with the quantum variant")
    if problem.grids is None:
        raise ProblemFileError("search needs a grid (or grids) in the problem file")
    grids = problem.grids
    if args.grid_step is not None:
        grids = tuple(g.with_step(args.grid_step) for g in grids)
    ordering = _resolve_ordering(args, problem)
    witness = wde.search_violation(
        grids,
        problem.state,
        protocol=problem.protocol,
        ordering=ordering,
        factor=problem.factor,
    )
    out = _envelope("search", args)
    out["mode"] = pf.mode
    out["input"] = pf.raw
    out["ordering"] = ordering
    out["backend"] = kernels.resolve_backend()
    out["grid"] = [
        {"start": g.start, "stop": g.stop, "step": g.step, "points": int(g.values().size)}
        for g in grids
    ]
    if witness is None:
        out["results"] = {"protocol": problem.protocol, "witness": None}
    else:
        out["results"] = {
            "protocol": witness.protocol,
            "witness": {
                "thetas": list(witness.thetas),
                "magnitude": witness.magnitude,
                **_triple_results(witness.triple, args.tolerance),
            },
        }
    sys.stdout.write(report.render(out, args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfuprob",
        description="Three-valued logic, projector probabilities, and the "
        "Wigner-d'Espagnat inequality lab.",
    )
    parser.add_argument("--version", action="version", version=f"tfuprob {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=report.FORMATS, default="structured")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", type=float, default=1e-12)
        p.add_argument(
            "--ordering", choices=wde.ORDERINGS, default=None,
            help="two-projector ordering (default: the file's, else symmetrized)",
        )

    p_eval = sub.add_parser("eval", help="evaluate a problem file")
    p_eval.add_argument("file")
    common(p_eval)
    p_eval.set_defaults(run=cmd_eval)

    p_check = sub.add_parser("check", help="run the seeded invariant suites")
    common(p_check)
    p_check.set_defaults(run=cmd_check)

    p_search = sub.add_parser("search", help="scan a grid for an inequality violation")
    p_search.add_argument("file")
    p_search.add_argument("--grid-step", type=float, default=None)
    common(p_search)
    p_search.set_defaults(run=cmd_search)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ProblemFileError, FormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UndefinedConditionalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TfuProbError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
