"""Dense complex linear algebra: the numerical foundation of the toolkit.

Everything is double-precision complex (`complex128`). Comparisons are
always explicit-tolerance; the module-level constants below are the single
source of truth for the cutoffs used everywhere else.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput, SvdError

# Default absolute tolerance for matrix/scalar equality checks.
ATOL = 1e-9

# A singular value counts toward numerical rank iff it exceeds
# RANK_CUTOFF times the largest singular value.
RANK_CUTOFF = 1e-10

# Decomposition terms with |coefficient| at or below this are dropped.
COEF_CUTOFF = 1e-12


def as_matrix(m, *, name: str = "matrix") -> np.ndarray:
    """Coerce to an immutable 2-d complex128 array, rejecting NaN/Inf."""
    arr = np.array(m, dtype=np.complex128, order="C")
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInput(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


def as_vector(v, *, name: str = "vector") -> np.ndarray:
    arr = np.array(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInput(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices/vectors."""
    out = None
    for f in factors:
        out = np.asarray(f) if out is None else np.kron(out, f)
    if out is None:
        raise InvalidInput("kron_all needs at least one factor")
    return out


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.asarray(m).size else 0.0


def is_unitary(m: np.ndarray, tol: float = ATOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(dagger(m) @ m - np.eye(m.shape[0])) <= tol


def svd(a: np.ndarray):
    """Full SVD ``a = U @ diag(s) @ Vh`` with ``s`` sorted descending.

    Raises :class:`SvdError` if the underlying iteration fails to converge.
    """
    a = np.asarray(a, dtype=np.complex128)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for shape {a.shape}") from exc
    return u, s, vh


def numerical_rank(singular_values: np.ndarray, cutoff: float = RANK_CUTOFF) -> int:
    """Count singular values above ``cutoff`` relative to the largest one."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        return 0
    top = float(s[0])
    if top <= 0.0:
        return 0
    return int(np.sum(s > cutoff * top))


def haar_random_unitary(dim: int, seed) -> np.ndarray:
    """Sample a Haar-distributed ``dim x dim`` unitary, deterministically.

    QR of a complex Ginibre matrix, with the R diagonal's phases absorbed
    into Q so the distribution is exactly Haar. ``seed`` may be an integer
    or an existing ``numpy.random.Generator`` (consumed in place).
    """
    if dim < 1:
        raise InvalidInput(f"unitary dimension must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))[np.newaxis, :]
    return q


def matrix_to_json(m: np.ndarray) -> list:
    """Row-major nested lists of [re, im] pairs (lossless for float64)."""
    m = np.asarray(m)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(rows, *, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.array(
            [[complex(e[0], e[1]) for e in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"{name}: expected rows of [re, im] pairs") from exc
    return as_matrix(arr, name=name)


def vector_to_json(v: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v)]


def vector_from_json(entries, *, name: str = "vector") -> np.ndarray:
    try:
        arr = np.array([complex(e[0], e[1]) for e in entries], dtype=np.complex128)
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"{name}: expected [re, im] pairs") from exc
    return as_vector(arr, name=name)
