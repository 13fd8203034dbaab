"""Schmidt-rank machinery: bipartite spectra of states and operators,
entangling reference circuits, rank bounds on cut sums, and best-rank-L
approximation fidelities.

Operator reshuffling convention: with row bits (r_0..r_{n-1}) and column
bits (c_0..c_{n-1}), the partition A produces a matrix indexed by
(r_A, c_A) x (r_B, c_B); its singular values are the operator Schmidt
coefficients across A|B. Rank 1 is equivalent to the operator being a
tensor product across the cut.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate
from .cutting import CutDecomposition, cut_comb, gate_cut
from .errors import InvalidInput, WidthCapExceeded
from .gadget import extract_comb, gadgetize
from .linalg import kron_all, numerical_rank, svd
from .simulate import (
    STATEVECTOR_CAP,
    _plan_is_swapnet,
    _slot_plan,
    _term_factors,
    fill,
    statevector,
    summed_cut_state,
    swap_network_local_form,
    unitary_of,
)
from .states import ProductState

OPERATOR_RANK_CAP = 10


@dataclass(frozen=True)
class SchmidtData:
    """Singular values (descending) and numerical rank across a partition."""

    singular_values: np.ndarray
    rank: int
    partition: tuple[int, ...]

    @property
    def squared_sum(self) -> float:
        return float(np.sum(self.singular_values**2))


def _split_axes(partition, n: int) -> tuple[list[int], list[int]]:
    block = sorted(set(int(w) for w in partition))
    if not block or len(block) >= n or any(w < 0 or w >= n for w in block):
        raise InvalidInput(
            f"partition {block} must be a nonempty proper subset of 0..{n - 1}"
        )
    rest = [w for w in range(n) if w not in block]
    return block, rest


def state_schmidt(psi: np.ndarray, partition, n: int) -> SchmidtData:
    """Schmidt spectrum of a state vector across partition | rest."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (1 << n,):
        raise InvalidInput(f"state has dimension {psi.shape}, expected 2^{n}")
    block, rest = _split_axes(partition, n)
    mat = psi.reshape((2,) * n).transpose(block + rest).reshape(1 << len(block), -1)
    _, s, _ = svd(mat)
    return SchmidtData(
        singular_values=s, rank=numerical_rank(s), partition=tuple(block)
    )


def operator_schmidt_rank(op: np.ndarray, partition, n: int) -> SchmidtData:
    """Operator Schmidt spectrum: SVD of the reshuffled operator."""
    if n > OPERATOR_RANK_CAP:
        raise WidthCapExceeded(n, OPERATOR_RANK_CAP, "operator Schmidt analysis")
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (1 << n, 1 << n):
        raise InvalidInput(f"operator has shape {op.shape}, expected 2^{n} square")
    block, rest = _split_axes(partition, n)
    # axes: rows r_w at w, columns c_w at n + w; regroup to
    # (r_A.., c_A.., r_B.., c_B..)
    order = block + [n + w for w in block] + rest + [n + w for w in rest]
    mat = op.reshape((2,) * (2 * n)).transpose(order).reshape(4 ** len(block), -1)
    _, s, _ = svd(mat)
    return SchmidtData(
        singular_values=s, rank=numerical_rank(s), partition=tuple(block)
    )


def bell_pairs_circuit(n: int) -> Circuit:
    """Generator of n/2 maximally entangled pairs (i, i + n/2) from |0..0>.

    Every pair straddles the front-half partition {0..n/2-1}, so the
    output's Schmidt rank across that cut is 2^(n/2).
    """
    if n < 2 or n % 2:
        raise InvalidInput(f"wire count must be even and >= 2, got {n}")
    half = n // 2
    gates = []
    for i in range(half):
        gates.append(Gate.named("h", i))
        gates.append(Gate.named("cnot", i, i + half))
    return Circuit(n, tuple(gates))


def best_rank_fidelity(psi: np.ndarray, partition, n: int, rank: int) -> float:
    """Squared overlap of the best rank-``rank`` approximation.

    Equals the sum of the ``rank`` largest squared Schmidt coefficients of
    the normalized state.
    """
    if rank < 1:
        raise InvalidInput(f"rank must be >= 1, got {rank}")
    psi = np.asarray(psi, dtype=np.complex128)
    norm = float(np.linalg.norm(psi))
    if norm <= 0:
        raise InvalidInput("cannot normalize the zero state")
    data = state_schmidt(psi / norm, partition, n)
    return float(np.sum(data.singular_values[:rank] ** 2))


@dataclass(frozen=True)
class RankBoundReport:
    """Measured ranks for a cut sum, against its term count."""

    term_count: int
    terms_rank_one: bool
    operator_rank: int
    state_rank: int
    operator_residual: float
    state_distance: float

    @property
    def bounds_hold(self) -> bool:
        return (
            self.terms_rank_one
            and self.operator_rank <= self.term_count
            and self.state_rank <= self.term_count
        )


def rank_bound_check(
    dec: CutDecomposition,
    state_in: ProductState,
    partition=None,
) -> RankBoundReport:
    """Verify the rank structure of a SWAP/1q cut sum.

    Every term's filled circuit must be SWAP/1q-only with identity net
    permutation, making each term a tensor product of one-wire operators
    (operator Schmidt rank 1 across every cut). The summed operator and
    summed output state then have rank at most the term count across any
    ``partition`` (default: the comb's own). Residuals against the uncut
    reference are reported, so truncated decompositions can be diagnosed
    with the same call.
    """
    comb = dec.comb
    n = comb.n
    if n > OPERATOR_RANK_CAP:
        raise WidthCapExceeded(n, OPERATOR_RANK_CAP, "rank bound check")
    plan = _slot_plan(comb)
    if not _plan_is_swapnet(plan):
        raise InvalidInput("rank_bound_check needs a SWAP/1q fixed part")
    fixed_only = Circuit(
        n, tuple(g for g in comb.fixed_gates)
    )
    lf = swap_network_local_form(fixed_only)
    if not lf.is_identity_perm():
        raise InvalidInput(
            "term circuits are not in local form: the fixed SWAPs have a "
            "non-identity net permutation"
        )

    dim = 1 << n
    op_sum = np.zeros((dim, dim), dtype=np.complex128)
    for term in dec.terms:
        per_wire = _term_locals(plan, term, n)
        op_sum = op_sum + term.coef * kron_all(per_wire)

    if partition is None:
        partition = comb.partition
    op_rank = operator_schmidt_rank(op_sum, partition, n).rank

    psi_sum = summed_cut_state(dec, state_in)
    state_rank = state_schmidt(psi_sum, partition, n).rank

    reference = unitary_of(fill(comb, dec.gap_gates)) if dec.gap_gates else None
    op_residual = (
        float(np.max(np.abs(op_sum - reference))) if reference is not None else 0.0
    )
    psi_ref = (
        statevector(fill(comb, dec.gap_gates), state_in)
        if dec.gap_gates
        else None
    )
    state_dist = (
        float(np.linalg.norm(psi_sum - psi_ref)) if psi_ref is not None else 0.0
    )
    return RankBoundReport(
        term_count=dec.term_count,
        terms_rank_one=True,
        operator_rank=op_rank,
        state_rank=state_rank,
        operator_residual=op_residual,
        state_distance=state_dist,
    )


def _term_locals(plan, term, n: int) -> list[np.ndarray]:
    """Per-wire 2x2 operators of one SWAP/1q term (identity net perm)."""
    content = list(range(n))
    locals_: list[np.ndarray] = [np.eye(2, dtype=np.complex128)] * n
    for step in plan:
        kind = step[0]
        if kind == "swap":
            _, u, v = step
            content[u], content[v] = content[v], content[u]
        elif kind == "1q":
            _, mat, w = step
            l = content[w]
            locals_[l] = mat @ locals_[l]
        elif kind == "gap":
            _, gidx, p, q = step
            a, b = term.fillings[gidx]
            lp, lq = content[p], content[q]
            locals_[lp] = a @ locals_[lp]
            locals_[lq] = b @ locals_[lq]
        else:
            raise InvalidInput("term contains a non-SWAP two-qubit fixed gate")
    if content != list(range(n)):
        raise InvalidInput("term circuit has a non-identity net permutation")
    return locals_


@dataclass(frozen=True)
class ReportRow:
    """One row of the analysis CSV: (n_or_k, mode, L, rank, fidelity, wall_ms)."""

    n_or_k: int
    mode: str
    term_count: int
    rank: int | None = None
    fidelity: float | None = None
    wall_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "n_or_k": self.n_or_k,
            "mode": self.mode,
            "L": self.term_count,
            "rank": self.rank,
            "fidelity": self.fidelity,
            "wall_ms": self.wall_ms,
        }


REPORT_COLUMNS = ("n_or_k", "mode", "L", "rank", "fidelity", "wall_ms")


def rows_to_csv(rows, *, include_timings: bool = False) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for row in rows:
        wall = row.wall_ms if include_timings else 0.0
        lines.append(
            ",".join(
                [
                    str(row.n_or_k),
                    row.mode,
                    str(row.term_count),
                    "" if row.rank is None else str(row.rank),
                    "" if row.fidelity is None else repr(float(row.fidelity)),
                    repr(float(wall)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def scaling_report(gate: Gate, k_max: int, mode: str, budget: int = 1 << 14) -> list[ReportRow]:
    """Exact term counts of gadget-shaped combs with k identical gap gates.

    For a gate of per-gate term count c the comb cut has exactly c^k
    terms; the counts here come from materializing the cut, not from the
    product formula.
    """
    if gate.n_wires != 2:
        raise InvalidInput("scaling_report needs a two-qubit gate")
    if k_max < 1:
        raise InvalidInput(f"k_max must be >= 1, got {k_max}")
    per_gate = len(gate_cut(gate, mode))
    if per_gate**k_max > budget:
        raise InvalidInput(
            f"k_max={k_max} needs {per_gate**k_max} terms, over the budget {budget}"
        )
    rows = []
    for k in range(1, k_max + 1):
        t0 = time.perf_counter()
        base = Circuit(2, tuple(Gate(wires=(0, 1), matrix=gate.matrix, name=gate.name)
                                for _ in range(k)))
        comb, gap_gates = extract_comb(gadgetize(base))
        dec = cut_comb(comb, gap_gates, mode)
        wall = (time.perf_counter() - t0) * 1000.0
        rows.append(
            ReportRow(
                n_or_k=k,
                mode=dec.mode,
                term_count=dec.term_count,
                rank=per_gate,
                fidelity=None,
                wall_ms=wall,
            )
        )
    return rows


def bell_state(n: int) -> np.ndarray:
    """Dense output of the pair generator on |0..0>."""
    c = bell_pairs_circuit(n)
    if n > STATEVECTOR_CAP:
        raise WidthCapExceeded(n, STATEVECTOR_CAP, "pair-generator state")
    return statevector(c, ProductState.zeros(n))
