"""Rewrite passes that relocate entangling gates onto dedicated ancillas.

``gadgetize`` appends two ancilla wires and replaces every non-SWAP
two-qubit gate on wires (p, q) by

    SWAP(p, a), SWAP(q, b), gate(a, b), SWAP(p, a), SWAP(q, b)

so that afterwards every non-SWAP two-qubit gate sits on the ancilla pair
and the rest of the circuit is SWAPs and single-qubit gates. The rewrite
is an exact identity: the output circuit equals the input circuit tensored
with the identity on the ancillas.

``gadgetize_v2`` adds a third ancilla c as the last wire and routes the
b-side through it: each SWAP(q, b) becomes the three-swap identity
SWAP(q, c), SWAP(c, b), SWAP(q, c), which equals a direct SWAP(q, b) while
keeping q and b from ever sharing a gate.

``extract_comb`` turns a gadgetized circuit into a comb whose partition is
the first ancilla and whose gaps are exactly the relocated gates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuits import Circuit, Gate, GapSlot, QuantumComb, circuit_to_json
from .errors import InvalidInput


@dataclass(frozen=True)
class Origin:
    """Provenance of one output gate.

    kind: "passthrough" (copied from the input), "relocated" (an input
    two-qubit gate moved to the ancilla pair), or "inserted-swap".
    ``source`` is the index of the input gate it belongs to.
    """

    kind: str
    source: int | None


@dataclass(frozen=True)
class GadgetizedCircuit:
    circuit: Circuit
    anc_a: int
    anc_b: int
    anc_c: int | None
    origin: tuple[Origin, ...]

    @property
    def ancillas(self) -> tuple[int, ...]:
        if self.anc_c is None:
            return (self.anc_a, self.anc_b)
        return (self.anc_a, self.anc_b, self.anc_c)

    @property
    def original_width(self) -> int:
        return self.circuit.n - len(self.ancillas)


def _rewrite(c: Circuit, use_third: bool) -> GadgetizedCircuit:
    anc_a, anc_b = c.n, c.n + 1
    anc_c = c.n + 2 if use_third else None
    width = c.n + (3 if use_third else 2)

    out: list[Gate] = []
    origin: list[Origin] = []

    def put(gate: Gate, kind: str, source: int) -> None:
        out.append(gate)
        origin.append(Origin(kind, source))

    def swap(u: int, v: int, source: int) -> None:
        put(Gate.named("swap", u, v), "inserted-swap", source)

    def route_b(q: int, source: int) -> None:
        # Moves the state of wire q onto ancilla b (and back, when called
        # again): via c this is the exact identity S(q,c) S(c,b) S(q,c).
        if anc_c is None:
            swap(q, anc_b, source)
        else:
            swap(q, anc_c, source)
            swap(anc_c, anc_b, source)
            swap(q, anc_c, source)

    for idx, g in enumerate(c.gates):
        if g.n_wires == 1 or g.is_swap():
            put(g, "passthrough", idx)
            continue
        p, q = g.wires
        swap(p, anc_a, idx)
        route_b(q, idx)
        put(
            Gate(wires=(anc_a, anc_b), matrix=g.matrix, name=g.name,
                 non_unitary=g.non_unitary),
            "relocated",
            idx,
        )
        swap(p, anc_a, idx)
        route_b(q, idx)

    return GadgetizedCircuit(
        circuit=Circuit(width, tuple(out)),
        anc_a=anc_a,
        anc_b=anc_b,
        anc_c=anc_c,
        origin=tuple(origin),
    )


def gadgetize(c: Circuit) -> GadgetizedCircuit:
    """Two-ancilla rewrite; see the module docstring for the gadget shape."""
    return _rewrite(c, use_third=False)


def gadgetize_v2(c: Circuit) -> GadgetizedCircuit:
    """Three-ancilla rewrite routing the b-side swaps through ancilla c."""
    return _rewrite(c, use_third=True)


def inserted_swap_permutation(g: GadgetizedCircuit) -> list[int]:
    """Net wire permutation of the inserted SWAPs alone (should be identity)."""
    perm = list(range(g.circuit.n))
    for gate, org in zip(g.circuit.gates, g.origin):
        if org.kind == "inserted-swap":
            u, v = gate.wires
            perm[u], perm[v] = perm[v], perm[u]
    return perm


def check_gadget(g: GadgetizedCircuit) -> list[str]:
    """Structural invariant scan; empty list means well-formed."""
    problems = []
    anc_pair = {g.anc_a, g.anc_b}
    if len(g.origin) != len(g.circuit.gates):
        problems.append("origin map length does not match the gate list")
        return problems
    for idx, (gate, org) in enumerate(zip(g.circuit.gates, g.origin)):
        if org.kind == "relocated":
            if gate.wires != (g.anc_a, g.anc_b):
                problems.append(
                    f"relocated gate {idx} sits on {gate.wires}, "
                    f"not ({g.anc_a}, {g.anc_b})"
                )
        elif gate.n_wires == 2 and not gate.is_swap():
            if set(gate.wires) != anc_pair:
                problems.append(
                    f"non-SWAP two-qubit gate {idx} ({gate!r}) is off the "
                    f"ancilla pair"
                )
    if inserted_swap_permutation(g) != list(range(g.circuit.n)):
        problems.append("inserted SWAPs do not compose to the identity permutation")
    return problems


def extract_comb(g: GadgetizedCircuit) -> tuple[QuantumComb, list[Gate]]:
    """Split a gadgetized circuit into a comb plus its gap gates.

    The comb's partition is the first ancilla, its fixed part is every
    gate except the relocated ones, and its gaps sit at the relocated
    gates' positions on (anc_a, anc_b). Filling the comb with the returned
    gap gates reproduces the gadgetized circuit gate-for-gate.
    """
    problems = check_gadget(g)
    if problems:
        raise InvalidInput(f"malformed gadgetized circuit: {problems[0]}")
    fixed: list[Gate] = []
    gaps: list[GapSlot] = []
    gap_gates: list[Gate] = []
    for pos, (gate, org) in enumerate(zip(g.circuit.gates, g.origin)):
        if org.kind == "relocated":
            gaps.append(GapSlot(position=pos, wires=(g.anc_a, g.anc_b)))
            gap_gates.append(gate)
        else:
            fixed.append(gate)
    comb = QuantumComb(
        n=g.circuit.n,
        fixed_gates=tuple(fixed),
        gaps=tuple(gaps),
        partition=frozenset({g.anc_a}),
    )
    return comb, gap_gates


def gadget_to_json(g: GadgetizedCircuit) -> dict:
    obj = circuit_to_json(g.circuit)
    obj["ancillas"] = list(g.ancillas)
    return obj
