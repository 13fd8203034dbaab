"""Seeded random circuits, combs, states, and observables for suites and
property tests. All sampling goes through an explicit generator; there is
no ambient randomness anywhere in the package."""

from __future__ import annotations

import numpy as np

from .circuits import Circuit, Gate, GapSlot, QuantumComb
from .linalg import haar_random_unitary
from .states import PAULI_CHARS, PauliObservable, ProductState

NAMED_1Q_POOL = ("h", "x", "y", "z", "s", "t")
NAMED_2Q_POOL = ("cnot", "cz", "swap")


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_gate_1q(n: int, rng, p_custom: float = 0.3) -> Gate:
    w = int(rng.integers(n))
    if rng.random() < p_custom:
        return Gate.custom(haar_random_unitary(2, rng), (w,))
    return Gate.named(str(rng.choice(NAMED_1Q_POOL)), w)


def random_gate_2q(n: int, rng, p_custom: float = 0.3) -> Gate:
    wires = rng.choice(n, size=2, replace=False)
    wires = (int(wires[0]), int(wires[1]))
    if rng.random() < p_custom:
        return Gate.custom(haar_random_unitary(4, rng), wires)
    return Gate.named(str(rng.choice(NAMED_2Q_POOL)), *wires)


def random_circuit(
    n: int,
    n_gates: int,
    seed,
    p_two_qubit: float = 0.5,
    p_custom: float = 0.3,
) -> Circuit:
    rng = _rng(seed)
    gates = []
    for _ in range(n_gates):
        if n >= 2 and rng.random() < p_two_qubit:
            gates.append(random_gate_2q(n, rng, p_custom))
        else:
            gates.append(random_gate_1q(n, rng, p_custom))
    return Circuit(n, tuple(gates))


def random_swap_1q_circuit(n: int, n_gates: int, seed, p_swap: float = 0.4) -> Circuit:
    rng = _rng(seed)
    gates = []
    for _ in range(n_gates):
        if n >= 2 and rng.random() < p_swap:
            wires = rng.choice(n, size=2, replace=False)
            gates.append(Gate.named("swap", int(wires[0]), int(wires[1])))
        else:
            gates.append(random_gate_1q(n, rng))
    return Circuit(n, tuple(gates))


def random_product_state(n: int, seed) -> ProductState:
    rng = _rng(seed)
    factors = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        factors.append(v / np.linalg.norm(v))
    return ProductState(tuple(factors))


def random_pauli_observable(n: int, seed, n_terms: int = 1) -> PauliObservable:
    rng = _rng(seed)
    terms = []
    for _ in range(n_terms):
        labels = "".join(str(rng.choice(list(PAULI_CHARS))) for _ in range(n))
        if labels == "I" * n:
            labels = "Z" + labels[1:]
        weight = float(rng.uniform(-2.0, 2.0))
        if abs(weight) < 0.1:
            weight = 1.0
        terms.append((weight, labels))
    return PauliObservable(tuple(terms))


def random_one_gap_comb(n: int, seed, fixed_gates: int = 4) -> tuple[QuantumComb, list[Gate]]:
    """A width-n comb with one straddling gap, random 1q fixed gates, and a
    Haar-random two-qubit gap gate."""
    rng = _rng(seed)
    fixed = tuple(random_gate_1q(n, rng) for _ in range(fixed_gates))
    position = int(rng.integers(fixed_gates + 1))
    other = int(rng.integers(1, n))
    comb = QuantumComb(
        n=n,
        fixed_gates=fixed,
        gaps=(GapSlot(position=position, wires=(0, other)),),
        partition=frozenset({0}),
    )
    gap_gate = Gate.custom(haar_random_unitary(4, rng), (0, other))
    return comb, [gap_gate]
