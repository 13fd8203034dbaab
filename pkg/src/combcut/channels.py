"""Completely positive trace-preserving maps as Kraus collections, sums of
channel tensor products, and the maximally-mixed-block witness.

The witness quantifies why sums of unital channels cannot reproduce a
generic unitary acting between a clean block and a maximally mixed block:
every all-unital term sum leaves the mixed block exactly maximally mixed,
while the true evolution generally does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .errors import InvalidInput, WidthCapExceeded
from .linalg import as_matrix, dagger, kron, max_abs
from .simulate import UNITARY_CAP, unitary_of
from .states import ProductState


@dataclass(frozen=True, eq=False)
class Channel:
    """A CPTP map given by Kraus operators; sum K^dag K = I within 1e-9."""

    dim: int
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInput(f"channel dimension must be >= 1, got {self.dim}")
        if not self.kraus:
            raise InvalidInput("channel needs at least one Kraus operator")
        ops = []
        for idx, k in enumerate(self.kraus):
            mat = as_matrix(k, name=f"Kraus operator {idx}")
            if mat.shape != (self.dim, self.dim):
                raise InvalidInput(
                    f"Kraus operator {idx} has shape {mat.shape}, "
                    f"expected ({self.dim}, {self.dim})"
                )
            ops.append(mat)
        total = sum(dagger(k) @ k for k in ops)
        if max_abs(total - np.eye(self.dim)) > 1e-9:
            raise InvalidInput("Kraus operators are not trace preserving within 1e-9")
        object.__setattr__(self, "kraus", tuple(ops))

    @classmethod
    def from_unitary(cls, u) -> "Channel":
        mat = as_matrix(u)
        return cls(dim=mat.shape[0], kraus=(mat,))

    @classmethod
    def identity(cls, dim: int) -> "Channel":
        return cls(dim=dim, kraus=(np.eye(dim, dtype=np.complex128),))

    @classmethod
    def dephasing(cls) -> "Channel":
        r = np.sqrt(0.5)
        return cls(dim=2, kraus=(r * np.eye(2), r * np.diag([1.0, -1.0])))

    @classmethod
    def amplitude_damping(cls, gamma: float) -> "Channel":
        if not 0.0 <= gamma <= 1.0:
            raise InvalidInput(f"damping strength must be in [0, 1], got {gamma}")
        k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
        k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
        return cls(dim=2, kraus=(k0, k1))

    @classmethod
    def mixed_unitary(cls, probs, unitaries) -> "Channel":
        """sum_i p_i U_i . U_i^dag; unital for any probability vector."""
        probs = np.asarray(probs, dtype=float)
        if abs(float(np.sum(probs)) - 1.0) > 1e-12 or np.any(probs < 0):
            raise InvalidInput("mixture weights must be a probability vector")
        mats = [as_matrix(u) for u in unitaries]
        if len(mats) != len(probs):
            raise InvalidInput("one unitary per mixture weight")
        dim = mats[0].shape[0]
        return cls(
            dim=dim,
            kraus=tuple(np.sqrt(p) * u for p, u in zip(probs, mats) if p > 0),
        )


def is_unital(ch: Channel, tol: float = 1e-9) -> bool:
    """True iff the channel fixes the identity: sum K K^dag = I."""
    total = sum(k @ dagger(k) for k in ch.kraus)
    return max_abs(total - np.eye(ch.dim)) <= tol


def _require_density(rho, dim: int) -> np.ndarray:
    mat = as_matrix(rho, name="density matrix")
    if mat.shape != (dim, dim):
        raise InvalidInput(f"density matrix has shape {mat.shape}, expected {dim}")
    if max_abs(mat - dagger(mat)) > 1e-9:
        raise InvalidInput("density matrix is not Hermitian within 1e-9")
    if abs(complex(np.trace(mat)).real - 1.0) > 1e-9:
        raise InvalidInput("density matrix trace differs from 1 by more than 1e-9")
    return mat


def apply_channel(ch: Channel, rho) -> np.ndarray:
    """sum K rho K^dag; preserves the trace."""
    mat = _require_density(rho, ch.dim)
    out = np.zeros_like(mat)
    for k in ch.kraus:
        out = out + k @ mat @ dagger(k)
    return out


@dataclass(frozen=True, eq=False)
class ChannelCut:
    """A weighted sum of tensor products of block channels."""

    terms: tuple[tuple[complex, Channel, Channel], ...]

    def __post_init__(self):
        if not self.terms:
            raise InvalidInput("channel cut needs at least one term")
        dim_a = self.terms[0][1].dim
        dim_b = self.terms[0][2].dim
        for coef, ca, cb in self.terms:
            if ca.dim != dim_a or cb.dim != dim_b:
                raise InvalidInput("inconsistent block dimensions across terms")
        object.__setattr__(
            self,
            "terms",
            tuple((complex(c), ca, cb) for c, ca, cb in self.terms),
        )

    @property
    def dims(self) -> tuple[int, int]:
        return self.terms[0][1].dim, self.terms[0][2].dim

    def all_unital(self, tol: float = 1e-9) -> bool:
        return all(
            is_unital(ca, tol) and is_unital(cb, tol) for _, ca, cb in self.terms
        )


def apply_cut(cut: ChannelCut, rho) -> np.ndarray:
    """sum coef * (C_a (x) C_b)(rho); linear, output not necessarily a state."""
    dim_a, dim_b = cut.dims
    dim = dim_a * dim_b
    mat = as_matrix(rho, name="input operator")
    if mat.shape != (dim, dim):
        raise InvalidInput(f"input has shape {mat.shape}, expected {dim}")
    out = np.zeros_like(mat)
    for coef, ca, cb in cut.terms:
        for ka in ca.kraus:
            for kb in cb.kraus:
                k = kron(ka, kb)
                out = out + coef * (k @ mat @ dagger(k))
    return out


def partial_trace_block(rho: np.ndarray, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Trace out one contiguous block; ``keep`` is "a" or "b"."""
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "a":
        return np.einsum("ibjb->ij", t)
    if keep == "b":
        return np.einsum("aiaj->ij", t)
    raise InvalidInput(f"keep must be 'a' or 'b', got {keep!r}")


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of the difference (Hermitian inputs)."""
    diff = np.asarray(rho) - np.asarray(sigma)
    eigs = np.linalg.eigvalsh(0.5 * (diff + dagger(diff)))
    return 0.5 * float(np.sum(np.abs(eigs)))


@dataclass(frozen=True)
class WitnessResult:
    """Mismatch certificate for the clean-block / mixed-block evolution."""

    distance: float
    clean_wires: int
    mixed_wires: int
    rho_b_true: np.ndarray


def unital_nogo_witness(u: Circuit, clean_in: ProductState) -> WitnessResult:
    """Trace distance between the mixed block's true output and I/2^n.

    The circuit acts on clean wires (the first ``clean_in.n``) tensored
    with maximally mixed wires. Any finite all-unital channel-cut leaves
    the mixed block exactly maximally mixed, so a nonzero distance is a
    per-instance lower bound on the error of every such cut.
    """
    n = u.n
    n_a = clean_in.n
    n_b = n - n_a
    if n_b < 1:
        raise InvalidInput("at least one mixed wire is required")
    if n > UNITARY_CAP:
        raise WidthCapExceeded(n, UNITARY_CAP, "density-matrix witness")
    dim_a, dim_b = 1 << n_a, 1 << n_b
    psi_a = clean_in.dense()
    rho_in = kron(np.outer(psi_a, psi_a.conj()), np.eye(dim_b) / dim_b)
    mat = unitary_of(u)
    rho_out = mat @ rho_in @ dagger(mat)
    rho_b = partial_trace_block(rho_out, dim_a, dim_b, keep="b")
    dist = trace_distance(rho_b, np.eye(dim_b) / dim_b)
    return WitnessResult(
        distance=dist, clean_wires=n_a, mixed_wires=n_b, rho_b_true=rho_b
    )


def cut_mixed_block_state(cut: ChannelCut, rho_a) -> tuple[np.ndarray, float]:
    """Apply an all-unital cut to rho_a (x) I/2^n and reduce to block b.

    Returns the trace-normalized block-b state together with the residual
    of the structural identity output = Tr_b(output) (x) I/2^n, which
    holds exactly for all-unital terms regardless of the coefficients.
    """
    if not cut.all_unital():
        raise InvalidInput("cut contains a non-unital channel term")
    dim_a, dim_b = cut.dims
    rho_a = _require_density(rho_a, dim_a)
    out = apply_cut(cut, kron(rho_a, np.eye(dim_b) / dim_b))
    block_a = partial_trace_block(out, dim_a, dim_b, keep="a")
    residual = max_abs(out - kron(block_a, np.eye(dim_b) / dim_b))
    rho_b = partial_trace_block(out, dim_a, dim_b, keep="b")
    tr = complex(np.trace(rho_b))
    if abs(tr) < 1e-12:
        raise InvalidInput("cut coefficients sum to ~0; block-b state undefined")
    return rho_b / tr, residual


def channel_to_json(ch: Channel) -> dict:
    from .linalg import matrix_to_json

    return {"dim": ch.dim, "kraus": [matrix_to_json(k) for k in ch.kraus]}


def channel_from_json(obj: dict) -> Channel:
    from .linalg import matrix_from_json

    if not isinstance(obj, dict) or "dim" not in obj or "kraus" not in obj:
        raise InvalidInput("channel JSON needs 'dim' and 'kraus'")
    return Channel(
        dim=int(obj["dim"]),
        kraus=tuple(matrix_from_json(k, name="Kraus operator") for k in obj["kraus"]),
    )
