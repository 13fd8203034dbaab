"""Cut-local decompositions of two-qubit gates and whole comb templates.

A two-qubit gate U acting across a cut is rewritten as a weighted sum of
tensor products of single-qubit operators,

    U = sum_i  coef_i * (a_i (x) b_i),

in one of two modes:

* ``pauli`` - expand in the 16-element Pauli-pair basis,
  coef_PQ = Tr((P (x) Q)^dag U) / 4. Factors are unitary; up to 16 terms.
* ``schmidt`` - singular value decomposition of the reshuffled matrix.
  Minimal term count (the operator Schmidt rank); factors are generally
  not unitary.

Cutting a whole comb takes the Cartesian product of per-gap terms, so the
term count multiplies gap by gap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .circuits import Gate, GapSlot, QuantumComb, validate
from .errors import InvalidInput, TermBudgetExceeded
from .linalg import (
    COEF_CUTOFF,
    as_matrix,
    kron,
    matrix_to_json,
    numerical_rank,
    svd,
)

PAULI_LABELS = ("I", "X", "Y", "Z")
PAULIS: dict[str, np.ndarray] = {
    "I": as_matrix([[1, 0], [0, 1]]),
    "X": as_matrix([[0, 1], [1, 0]]),
    "Y": as_matrix([[0, -1j], [1j, 0]]),
    "Z": as_matrix([[1, 0], [0, -1]]),
}

MODES = ("schmidt", "pauli")


def _require_mode(mode: str) -> str:
    key = mode.lower()
    if key in ("pauli-unitary", "pauli_unitary"):
        key = "pauli"
    if key not in MODES:
        raise InvalidInput(f"mode must be one of {MODES}, got {mode!r}")
    return key


def _require_4x4(u, name: str) -> np.ndarray:
    mat = as_matrix(u, name=name)
    if mat.shape != (4, 4):
        raise InvalidInput(f"{name} must be 4x4, got {mat.shape}")
    return mat


@dataclass(frozen=True)
class GateCutTerm:
    """One term of a two-qubit gate cut: coef * (factor_a (x) factor_b).

    ``factor_a`` acts on the cut-block side, ``factor_b`` on the other.
    ``unitary_factors`` distinguishes the Pauli mode from the Schmidt mode.
    """

    coef: complex
    factor_a: np.ndarray
    factor_b: np.ndarray
    label: str | None = None
    unitary_factors: bool = False


def pauli_decompose(u) -> list[tuple[complex, str]]:
    """Expand a 4x4 matrix in the Pauli-pair basis.

    Returns ``(coef, "PQ")`` pairs over the 16 combinations, dropping
    coefficients with magnitude <= 1e-12, in fixed I,X,Y,Z lexicographic
    order. The sum ``coef * kron(P, Q)`` reconstructs the input.
    """
    mat = _require_4x4(u, "pauli_decompose input")
    out: list[tuple[complex, str]] = []
    for p in PAULI_LABELS:
        for q in PAULI_LABELS:
            basis = kron(PAULIS[p], PAULIS[q])
            coef = complex(np.trace(basis.conj().T @ mat)) / 4.0
            if abs(coef) > COEF_CUTOFF:
                out.append((coef, p + q))
    return out


def reshuffle(u) -> np.ndarray:
    """Regroup a 4x4 matrix u[(ia,ib),(ja,jb)] as R[(ia,ja),(ib,jb)].

    Singular values of R are the operator Schmidt coefficients of u across
    the first-factor/second-factor split.
    """
    mat = _require_4x4(u, "reshuffle input")
    return mat.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def operator_schmidt(u) -> list[GateCutTerm]:
    """Minimal-length tensor-product expansion of a 4x4 matrix.

    Terms come from the SVD of the reshuffled matrix: coefficients are the
    singular values (real, nonnegative, descending) and the factors are
    the reshaped singular vectors. Only terms above the rank cutoff are
    kept, so the term count equals the numerical operator Schmidt rank.
    """
    mat = _require_4x4(u, "operator_schmidt input")
    uu, s, vh = svd(reshuffle(mat))
    rank = numerical_rank(s)
    terms = []
    for k in range(rank):
        terms.append(
            GateCutTerm(
                coef=complex(s[k]),
                factor_a=as_matrix(uu[:, k].reshape(2, 2)),
                factor_b=as_matrix(vh[k, :].reshape(2, 2)),
                unitary_factors=False,
            )
        )
    return terms


def gate_cut(g: Gate, mode: str) -> list[GateCutTerm]:
    """Cut one two-qubit gate into tensor-product terms.

    ``factor_a`` corresponds to ``g.wires[0]``. Both modes reconstruct the
    gate as ``sum coef * kron(factor_a, factor_b)`` within 1e-9.
    """
    if g.n_wires != 2:
        raise InvalidInput(f"gate_cut needs a two-qubit gate, got {g!r}")
    mode = _require_mode(mode)
    if mode == "pauli":
        return [
            GateCutTerm(
                coef=coef,
                factor_a=PAULIS[label[0]],
                factor_b=PAULIS[label[1]],
                label=label,
                unitary_factors=True,
            )
            for coef, label in pauli_decompose(g.matrix)
        ]
    return operator_schmidt(g.matrix)


def reconstruct_terms(terms) -> np.ndarray:
    """Sum coef * kron(factor_a, factor_b) over cut terms."""
    total = np.zeros((4, 4), dtype=np.complex128)
    for t in terms:
        total = total + t.coef * kron(t.factor_a, t.factor_b)
    return total


@dataclass(frozen=True)
class CutTerm:
    """One comb-level term: a coefficient and one (a, b) matrix pair per gap."""

    coef: complex
    fillings: tuple[tuple[np.ndarray, np.ndarray], ...]


@dataclass(frozen=True)
class CutDecomposition:
    """A comb rewritten as a weighted sum of tensor-product-filled combs.

    ``per_gap`` holds the individual gate cuts the Cartesian product was
    built from; ``exact`` is False for truncations, which no longer
    reconstruct their reference gates.
    """

    comb: QuantumComb
    gap_gates: tuple[Gate, ...]
    mode: str
    per_gap: tuple[tuple[GateCutTerm, ...], ...]
    terms: tuple[CutTerm, ...]
    exact: bool = True

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def truncated(self, keep: int) -> "CutDecomposition":
        """Keep the first ``keep`` terms (lexicographic order)."""
        if keep < 0 or keep > len(self.terms):
            raise InvalidInput(f"cannot keep {keep} of {len(self.terms)} terms")
        return replace(self, terms=self.terms[:keep], exact=keep == len(self.terms))

    def scaled(self, factor: complex) -> "CutDecomposition":
        terms = tuple(CutTerm(t.coef * factor, t.fillings) for t in self.terms)
        return replace(self, terms=terms, exact=False)


def _oriented_cut(gate: Gate, gap: GapSlot, mode: str) -> list[GateCutTerm]:
    """Cut a gap gate, orienting factor_a onto the gap's block-side wire."""
    if gate.n_wires != 2:
        raise InvalidInput(f"gap gates must be two-qubit, got {gate!r}")
    if set(gate.wires) != set(gap.wires):
        raise InvalidInput(
            f"gap gate wires {gate.wires} do not match gap wires {gap.wires}"
        )
    terms = gate_cut(gate, mode)
    if gate.wires == gap.wires:
        return terms
    # Gate listed its wires in the opposite order: swap the factor roles.
    return [
        GateCutTerm(
            coef=t.coef,
            factor_a=t.factor_b,
            factor_b=t.factor_a,
            label=t.label[::-1] if t.label else None,
            unitary_factors=t.unitary_factors,
        )
        for t in terms
    ]


def cut_term_count(comb: QuantumComb, gap_gates, mode: str) -> int:
    """Term count of the full Cartesian-product cut, without materializing it."""
    mode = _require_mode(mode)
    count = 1
    for gate, gap in zip(gap_gates, comb.gaps):
        count *= len(_oriented_cut(gate, gap, mode))
    return count


def cut_comb(
    comb: QuantumComb,
    gap_gates,
    mode: str,
    budget: int | None = None,
) -> CutDecomposition:
    """Cut every gap of a comb; term count is the product of per-gap counts.

    Coefficients multiply across gaps and terms are ordered
    lexicographically in the per-gap term indices. ``budget``, if given,
    bounds the term count before anything is materialized.
    """
    mode = _require_mode(mode)
    gap_gates = tuple(gap_gates)
    if len(gap_gates) != len(comb.gaps):
        raise InvalidInput(
            f"comb has {len(comb.gaps)} gap(s) but {len(gap_gates)} gate(s) given"
        )
    problems = validate(comb)
    if problems:
        raise InvalidInput(f"invalid comb: {problems[0]}")

    per_gap = tuple(
        tuple(_oriented_cut(gate, gap, mode))
        for gate, gap in zip(gap_gates, comb.gaps)
    )
    total = math.prod(len(side) for side in per_gap)
    if budget is not None and total > budget:
        raise TermBudgetExceeded(total, budget)

    terms = []
    for combo in itertools.product(*per_gap):
        coef = complex(1.0)
        fillings = []
        for t in combo:
            coef *= t.coef
            fillings.append((t.factor_a, t.factor_b))
        terms.append(CutTerm(coef=coef, fillings=tuple(fillings)))
    return CutDecomposition(
        comb=comb,
        gap_gates=gap_gates,
        mode=mode,
        per_gap=per_gap,
        terms=tuple(terms),
    )


def first_qubit_pauli_cut(u) -> list[tuple[str, np.ndarray]]:
    """Split a 2^n x 2^n matrix across wire 0 using the Pauli basis there.

    Returns at most four terms ``(P, A_P)`` with
    ``A_P = partial_trace_0((P^dag (x) I) u) / 2`` such that
    ``sum kron(P, A_P) = u``. Terms whose operator part vanishes are
    dropped.
    """
    mat = as_matrix(u, name="first_qubit_pauli_cut input")
    dim = mat.shape[0]
    if mat.shape[0] != mat.shape[1] or dim < 4 or dim & (dim - 1):
        raise InvalidInput(f"input must be 2^n x 2^n with n >= 2, got {mat.shape}")
    n = dim.bit_length() - 1
    if n > 12:
        raise InvalidInput(f"first_qubit_pauli_cut capped at 12 wires, got {n}")
    half = dim // 2
    blocks = mat.reshape(2, half, 2, half)
    out = []
    for label in PAULI_LABELS:
        p = PAULIS[label]
        # A[c,d] = (1/2) sum_{a,b} conj(P[b,a]) u[(b,c),(a,d)]
        a_op = 0.5 * np.einsum("ba,bcad->cd", p.conj(), blocks)
        if float(np.max(np.abs(a_op))) > COEF_CUTOFF:
            out.append((label, as_matrix(a_op)))
    return out


def recursive_cut_cost(n: int, per_round_terms: int) -> int:
    """Circuit evaluations for halving an n-wire circuit down to single
    wires when every round multiplies the count by ``per_round_terms``.

    Exact integer ``per_round_terms ** ceil(log2 n)``; Python integers are
    arbitrary precision, so the result never overflows.
    """
    if n < 1:
        raise InvalidInput(f"wire count must be >= 1, got {n}")
    if per_round_terms < 1:
        raise InvalidInput(f"per-round term count must be >= 1, got {per_round_terms}")
    rounds = (int(n) - 1).bit_length()
    return int(per_round_terms) ** rounds


def decomposition_to_json(dec: CutDecomposition) -> dict:
    """Serialize terms: {"mode", "terms": [{"coef", "fillings"}]}."""
    return {
        "mode": dec.mode,
        "terms": [
            {
                "coef": [float(t.coef.real), float(t.coef.imag)],
                "fillings": [
                    [matrix_to_json(a), matrix_to_json(b)] for a, b in t.fillings
                ],
            }
            for t in dec.terms
        ],
    }
