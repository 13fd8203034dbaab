"""Circuit and comb intermediate representation.

Wire convention: wire 0 is the most significant bit, i.e. the leftmost
factor of any Kronecker product. A two-qubit gate matrix's first tensor
factor acts on the first wire listed in ``Gate.wires``.

A :class:`QuantumComb` is a circuit template with ordered two-wire "gaps"
to be filled later. Gap positions index the comb's combined gate order
(fixed gates plus gaps); fixed gates occupy the remaining slots in their
given order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import InvalidInput
from .linalg import as_matrix, is_unitary, matrix_from_json, matrix_to_json

_SQ2 = np.sqrt(0.5)

# Named standard gates, exact to double precision.
GATE_TABLE: dict[str, np.ndarray] = {
    "i": as_matrix([[1, 0], [0, 1]]),
    "h": as_matrix([[_SQ2, _SQ2], [_SQ2, -_SQ2]]),
    "x": as_matrix([[0, 1], [1, 0]]),
    "y": as_matrix([[0, -1j], [1j, 0]]),
    "z": as_matrix([[1, 0], [0, -1]]),
    "s": as_matrix([[1, 0], [0, 1j]]),
    "t": as_matrix([[1, 0], [0, complex(_SQ2, _SQ2)]]),
    "cnot": as_matrix(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    ),
    "cz": as_matrix(np.diag([1, 1, 1, -1])),
    "swap": as_matrix(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    ),
}

NAMED_1Q = ("i", "h", "x", "y", "z", "s", "t")
NAMED_2Q = ("cnot", "cz", "swap")

SWAP_MATRIX = GATE_TABLE["swap"]


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate application: a 2x2 or 4x4 matrix bound to specific wires.

    ``non_unitary`` marks matrices that are deliberately not unitary
    (cut-term factors); unflagged custom matrices must be unitary to 1e-9.
    """

    wires: tuple[int, ...]
    matrix: np.ndarray
    name: str | None = None
    non_unitary: bool = False

    def __post_init__(self):
        wires = tuple(int(w) for w in self.wires)
        object.__setattr__(self, "wires", wires)
        if len(wires) not in (1, 2):
            raise InvalidInput(f"gates act on 1 or 2 wires, got {wires}")
        if len(set(wires)) != len(wires):
            raise InvalidInput(f"gate wires must be distinct, got {wires}")
        mat = as_matrix(self.matrix, name="gate matrix")
        expected = 2 ** len(wires)
        if mat.shape != (expected, expected):
            raise InvalidInput(
                f"gate on {len(wires)} wire(s) needs a {expected}x{expected} "
                f"matrix, got {mat.shape}"
            )
        if not self.non_unitary and not is_unitary(mat):
            raise InvalidInput(
                "gate matrix is not unitary within 1e-9 "
                "(pass non_unitary=True for cut-term factors)"
            )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def named(cls, name: str, *wires: int) -> "Gate":
        key = name.lower()
        if key not in GATE_TABLE:
            raise InvalidInput(f"unknown gate name {name!r}")
        return cls(wires=tuple(wires), matrix=GATE_TABLE[key], name=key)

    @classmethod
    def custom(cls, matrix, wires: Sequence[int], *, non_unitary: bool = False) -> "Gate":
        return cls(wires=tuple(wires), matrix=matrix, non_unitary=non_unitary)

    @property
    def n_wires(self) -> int:
        return len(self.wires)

    def is_swap(self, tol: float = 1e-12) -> bool:
        """Semantic SWAP detection: named or matrix-equal within ``tol``."""
        if self.name == "swap":
            return True
        if self.n_wires != 2:
            return False
        return float(np.max(np.abs(self.matrix - SWAP_MATRIX))) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gate):
            return NotImplemented
        return (
            self.wires == other.wires
            and self.name == other.name
            and self.non_unitary == other.non_unitary
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self) -> str:
        label = self.name or f"custom{self.matrix.shape[0]}"
        return f"Gate({label}, wires={self.wires})"


@dataclass(frozen=True, eq=False)
class Circuit:
    """An ordered gate list over ``n`` wires."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"circuit width must be >= 1, got {self.n}")
        gates = tuple(self.gates)
        for idx, g in enumerate(gates):
            if any(w < 0 or w >= self.n for w in g.wires):
                raise InvalidInput(
                    f"gate {idx} ({g!r}) uses wires outside 0..{self.n - 1}"
                )
        object.__setattr__(self, "gates", gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n == other.n and self.gates == other.gates

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.n_wires == 2)


@dataclass(frozen=True)
class GapSlot:
    """A fillable two-wire slot at ``position`` in the comb's gate order.

    ``wires[0]`` lies inside the comb's partition block, ``wires[1]``
    outside it.
    """

    position: int
    wires: tuple[int, int]


@dataclass(frozen=True, eq=False)
class QuantumComb:
    """A circuit template whose fixed part never entangles the partition
    block with the rest; connectivity enters only through the gaps."""

    n: int
    fixed_gates: tuple[Gate, ...] = ()
    gaps: tuple[GapSlot, ...] = ()
    partition: frozenset[int] = field(default_factory=lambda: frozenset({0}))

    def __post_init__(self):
        object.__setattr__(self, "fixed_gates", tuple(self.fixed_gates))
        object.__setattr__(self, "gaps", tuple(self.gaps))
        object.__setattr__(self, "partition", frozenset(int(w) for w in self.partition))

    @property
    def slot_count(self) -> int:
        return len(self.fixed_gates) + len(self.gaps)


def validate(comb: QuantumComb) -> list[str]:
    """Check the comb's structural invariants; empty list means ok.

    The separation scan tracks wire contents through fixed SWAPs: a fixed
    non-SWAP two-qubit gate must act on contents that originate on the
    same side of the partition, and the fixed part's net permutation must
    map the partition block onto itself. Under exactly these conditions
    the fixed part, simulated alone, factorizes across the partition, so
    SWAP pairs that route into the block and back (the gadget idiom) are
    accepted while any genuinely connecting gate is reported.
    """
    problems: list[str] = []
    n = comb.n
    if n < 1:
        return [f"width must be >= 1, got {n}"]
    block = comb.partition
    if not block or not block.issubset(range(n)):
        problems.append(f"partition {sorted(block)} is not a nonempty wire subset")
        return problems

    for idx, g in enumerate(comb.fixed_gates):
        if any(w >= n for w in g.wires):
            problems.append(f"fixed gate {idx} ({g!r}) uses wires outside 0..{n - 1}")

    last = -1
    for gidx, gap in enumerate(comb.gaps):
        if gap.position <= last:
            problems.append(
                f"gap {gidx} at position {gap.position} breaks the strictly "
                f"increasing position order"
            )
        last = gap.position
        if gap.position < 0 or gap.position >= comb.slot_count:
            problems.append(
                f"gap {gidx} position {gap.position} outside 0..{comb.slot_count - 1}"
            )
        p, q = gap.wires
        if p == q or p >= n or q >= n or p < 0 or q < 0:
            problems.append(f"gap {gidx} wires {gap.wires} invalid for width {n}")
            continue
        if not ((p in block) and (q not in block)):
            problems.append(
                f"gap {gidx} wires {gap.wires} do not straddle the partition "
                f"(first wire must be inside {sorted(block)}, second outside)"
            )

    if problems:
        return problems

    # Content-tracking separation scan over fixed gates, in comb order.
    content = list(range(n))  # physical wire -> original wire of its content
    for idx, g in enumerate(comb.fixed_gates):
        if g.n_wires == 1:
            continue
        u, v = g.wires
        if g.is_swap():
            content[u], content[v] = content[v], content[u]
            continue
        cu, cv = content[u], content[v]
        if (cu in block) != (cv in block):
            problems.append(
                f"fixed gate {idx} ({g!r}) connects the partition block "
                f"{sorted(block)} with the rest"
            )
    for w in range(n):
        if (content[w] in block) != (w in block):
            problems.append(
                "fixed SWAPs give the comb a net permutation that moves "
                f"content across the partition {sorted(block)}"
            )
            break
    return problems


Filling = Union[Gate, tuple[Gate, Gate]]


def fill(comb: QuantumComb, fillings: Sequence[Filling]) -> Circuit:
    """Replace each gap, in order, by its filling.

    A filling is either a two-qubit :class:`Gate` on exactly the gap's
    wires, or a pair of single-qubit gates ``(on wires[0], on wires[1])``
    representing an explicit tensor product.
    """
    if len(fillings) != len(comb.gaps):
        raise InvalidInput(
            f"comb has {len(comb.gaps)} gap(s) but {len(fillings)} filling(s) given"
        )
    problems = validate(comb)
    if problems:
        raise InvalidInput(f"cannot fill an invalid comb: {problems[0]}")

    gap_at = {gap.position: i for i, gap in enumerate(comb.gaps)}
    fixed_iter = iter(comb.fixed_gates)
    out: list[Gate] = []
    for slot in range(comb.slot_count):
        if slot not in gap_at:
            out.append(next(fixed_iter))
            continue
        gap = comb.gaps[gap_at[slot]]
        f = fillings[gap_at[slot]]
        if isinstance(f, Gate):
            if f.n_wires != 2 or f.wires != gap.wires:
                raise InvalidInput(
                    f"filling for gap at position {gap.position} must act on "
                    f"wires {gap.wires}, got {getattr(f, 'wires', None)}"
                )
            out.append(f)
        else:
            a, b = f
            if a.n_wires != 1 or b.n_wires != 1:
                raise InvalidInput("tensor-product fillings need two 1-wire gates")
            if a.wires != (gap.wires[0],) or b.wires != (gap.wires[1],):
                raise InvalidInput(
                    f"tensor-product filling for gap at position {gap.position} "
                    f"must act on wires {gap.wires}, got {a.wires + b.wires}"
                )
            out.append(a)
            out.append(b)
    return Circuit(comb.n, tuple(out))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------
#
# {"n": int,
#  "gates": [{"name": str, "wires": [..]} |
#            {"matrix": [[[re, im], ...], ...], "wires": [..],
#             "non_unitary": bool?}],
#  "gaps": [{"position": int, "wires": [p, q]}]?,          # comb form
#  "partition": [int, ...]?,                                # comb form
#  "ancillas": [int, ...]?}                                 # gadget output


def gate_to_json(g: Gate) -> dict:
    if g.name is not None:
        return {"name": g.name, "wires": list(g.wires)}
    entry: dict = {"matrix": matrix_to_json(g.matrix), "wires": list(g.wires)}
    if g.non_unitary:
        entry["non_unitary"] = True
    return entry


def gate_from_json(obj: dict) -> Gate:
    if not isinstance(obj, dict) or "wires" not in obj:
        raise InvalidInput(f"gate entry must be an object with 'wires': {obj!r}")
    wires = tuple(int(w) for w in obj["wires"])
    if "name" in obj:
        return Gate.named(obj["name"], *wires)
    if "matrix" in obj:
        mat = matrix_from_json(obj["matrix"], name="gate matrix")
        return Gate.custom(mat, wires, non_unitary=bool(obj.get("non_unitary", False)))
    raise InvalidInput("gate entry needs either 'name' or 'matrix'")


def circuit_to_json(c: Circuit) -> dict:
    return {"n": c.n, "gates": [gate_to_json(g) for g in c.gates]}


def circuit_from_json(obj: dict) -> Circuit:
    if not isinstance(obj, dict) or "n" not in obj or "gates" not in obj:
        raise InvalidInput("circuit JSON needs 'n' and 'gates'")
    gates = tuple(gate_from_json(g) for g in obj["gates"])
    return Circuit(int(obj["n"]), gates)


def comb_to_json(comb: QuantumComb) -> dict:
    return {
        "n": comb.n,
        "gates": [gate_to_json(g) for g in comb.fixed_gates],
        "gaps": [{"position": g.position, "wires": list(g.wires)} for g in comb.gaps],
        "partition": sorted(comb.partition),
    }


def comb_from_json(obj: dict) -> QuantumComb:
    if not isinstance(obj, dict) or "n" not in obj or "gates" not in obj:
        raise InvalidInput("comb JSON needs 'n' and 'gates'")
    gaps = tuple(
        GapSlot(position=int(g["position"]), wires=(int(g["wires"][0]), int(g["wires"][1])))
        for g in obj.get("gaps", [])
    )
    partition = frozenset(int(w) for w in obj.get("partition", [0]))
    return QuantumComb(
        n=int(obj["n"]),
        fixed_gates=tuple(gate_from_json(g) for g in obj["gates"]),
        gaps=gaps,
        partition=partition,
    )
