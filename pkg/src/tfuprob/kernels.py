"""Triple-grid scan kernels with selectable backend.

The inequality searches all reduce to one shape of work: given three pair
matrices Jab, Jbc, Jac (joint probabilities precomputed per angle pair),
maximize

    v[i, j, k] = Jac[i, k] - (Jab[i, j] + Jbc[j, k])

over the full tuple grid. (The parenthesization is deliberate: IEEE
addition is commutative, so tuples whose left-hand terms swap roles under
a mirror symmetry of the configuration evaluate bit-identically, and the
lexicographic tie-break below stays meaningful.) Fine grids mean 1e7-1e8 tuples, the one genuinely
hot loop in the package; everything else is dense algebra in dimension at
most 64. Two implementations are kept in lockstep:

* a numba @njit kernel that walks the grid in parallel without ever
  materializing v (each row i is reduced independently, then rows are
  merged serially, so the result does not depend on thread scheduling);
* a pure-numpy fallback that broadcasts v and argmaxes it.

Both apply the identical arithmetic in the identical order and break ties
toward the lexicographically smallest (i, j, k), so their results agree
bit for bit. Backend selection: the TFUPROB_BACKEND environment variable
("numba", "numpy" or "auto", default auto = numba when importable), or a
per-call override.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ValidationError

BACKEND_ENV = "TFUPROB_BACKEND"

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def resolve_backend(backend: str | None = None) -> str:
    """Pick the backend: explicit argument beats env var beats auto."""
    choice = backend or os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numba" and not HAVE_NUMBA:
        raise ValidationError("numba backend requested but numba is not importable")
    if choice not in ("numba", "numpy"):
        raise ValidationError(f"unknown backend {choice!r}: expected numba, numpy or auto")
    return choice


def _scan_numpy(jab, jbc, jac):
    v = jac[:, None, :] - (jab[:, :, None] + jbc[None, :, :])
    flat = int(np.argmax(v))  # first occurrence = lexicographically smallest
    idx = np.unravel_index(flat, v.shape)
    return (int(idx[0]), int(idx[1]), int(idx[2])), float(v[idx])


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _scan_rows_njit(jab, jbc, jac, row_best, row_arg):  # pragma: no cover
        na, nb = jab.shape
        nc = jac.shape[1]
        for i in prange(na):
            best = -np.inf
            arg = 0
            for j in range(nb):
                ab = jab[i, j]
                for k in range(nc):
                    v = jac[i, k] - (ab + jbc[j, k])
                    if v > best:  # strict: first maximum wins within the row
                        best = v
                        arg = j * nc + k
            row_best[i] = best
            row_arg[i] = arg

    def _scan_numba(jab, jbc, jac):
        na = jab.shape[0]
        nc = jac.shape[1]
        row_best = np.empty(na, dtype=np.float64)
        row_arg = np.empty(na, dtype=np.int64)
        _scan_rows_njit(jab, jbc, jac, row_best, row_arg)
        i = 0  # serial merge keeps the tie-break deterministic
        for cand in range(1, na):
            if row_best[cand] > row_best[i]:
                i = cand
        j, k = divmod(int(row_arg[i]), nc)
        return (i, j, k), float(row_best[i])


def scan_triple(jab, jbc, jac, backend: str | None = None):
    """Maximize Jac[i,k] - (Jab[i,j] + Jbc[j,k]); returns ((i,j,k), value).

    Ties go to the lexicographically smallest tuple on every backend.
    """
    jab = np.ascontiguousarray(jab, dtype=np.float64)
    jbc = np.ascontiguousarray(jbc, dtype=np.float64)
    jac = np.ascontiguousarray(jac, dtype=np.float64)
    if jab.ndim != 2 or jbc.ndim != 2 or jac.ndim != 2:
        raise ValidationError("pair matrices must be 2-D")
    na, nb = jab.shape
    if jbc.shape != (nb, jac.shape[1]) or jac.shape[0] != na:
        raise ValidationError(
            f"inconsistent pair-matrix shapes {jab.shape}, {jbc.shape}, {jac.shape}"
        )
    if 0 in (na, nb, jac.shape[1]):
        raise ValidationError("empty grid axis")
    if resolve_backend(backend) == "numba":
        return _scan_numba(jab, jbc, jac)
    return _scan_numpy(jab, jbc, jac)
