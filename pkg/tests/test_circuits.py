"""Circuit/comb IR: construction rules, comb validation, fill, JSON."""

import json

import numpy as np
import pytest

from combcut.circuits import (
    Circuit,
    Gate,
    GapSlot,
    QuantumComb,
    circuit_from_json,
    circuit_to_json,
    comb_from_json,
    comb_to_json,
    fill,
    validate,
)
from combcut.errors import InvalidInput
from combcut.linalg import haar_random_unitary
from combcut.simulate import unitary_of

from oracles import circuit_unitary


class TestGate:
    def test_unknown_name(self):
        with pytest.raises(InvalidInput):
            Gate.named("toffoli", 0, 1)

    def test_duplicate_wires(self):
        with pytest.raises(InvalidInput):
            Gate.named("cz", 1, 1)

    def test_custom_must_be_unitary(self):
        with pytest.raises(InvalidInput):
            Gate.custom([[1, 0], [0, 2]], (0,))

    def test_non_unitary_flag_allows_cut_factors(self):
        g = Gate.custom([[1, 0], [0, 0]], (0,), non_unitary=True)
        assert g.non_unitary

    def test_swap_detection_by_matrix(self):
        g = Gate.custom(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], (0, 1)
        )
        assert g.is_swap()
        assert not Gate.named("cz", 0, 1).is_swap()


class TestCircuit:
    def test_wire_bounds(self):
        with pytest.raises(InvalidInput):
            Circuit(2, (Gate.named("h", 2),))

    def test_equality(self):
        a = Circuit(2, (Gate.named("h", 0),))
        b = Circuit(2, (Gate.named("h", 0),))
        assert a == b


class TestValidate:
    def test_crossing_fixed_cz_is_reported_by_index(self):
        comb = QuantumComb(
            n=2,
            fixed_gates=(Gate.named("cz", 0, 1),),
            partition=frozenset({0}),
        )
        problems = validate(comb)
        assert len(problems) == 1
        assert "fixed gate 0" in problems[0]

    def test_disconnected_fixed_part_ok(self):
        comb = QuantumComb(
            n=3,
            fixed_gates=(
                Gate.named("h", 0),
                Gate.named("cnot", 1, 2),
                Gate.named("t", 2),
            ),
            gaps=(GapSlot(position=1, wires=(0, 1)),),
            partition=frozenset({0}),
        )
        assert validate(comb) == []

    def test_gap_order_violation(self):
        comb = QuantumComb(
            n=3,
            fixed_gates=(Gate.named("h", 1), Gate.named("h", 2)),
            gaps=(
                GapSlot(position=3, wires=(0, 1)),
                GapSlot(position=1, wires=(0, 2)),
            ),
            partition=frozenset({0}),
        )
        assert any("increasing" in p for p in validate(comb))

    def test_gap_must_straddle(self):
        comb = QuantumComb(
            n=3,
            gaps=(GapSlot(position=0, wires=(1, 2)),),
            partition=frozenset({0}),
        )
        assert any("straddle" in p for p in validate(comb))

    def test_gadget_style_crossing_swaps_accepted(self):
        # Routing into the block and back is not a connection: contents
        # return and no entangling gate ever acts across the cut.
        comb = QuantumComb(
            n=3,
            fixed_gates=(
                Gate.named("swap", 1, 0),
                Gate.named("swap", 1, 0),
            ),
            gaps=(GapSlot(position=1, wires=(0, 2)),),
            partition=frozenset({0}),
        )
        assert validate(comb) == []

    def test_single_crossing_swap_rejected(self):
        comb = QuantumComb(
            n=2,
            fixed_gates=(Gate.named("swap", 0, 1),),
            partition=frozenset({0}),
        )
        assert any("net permutation" in p for p in validate(comb))

    def test_swap_sandwich_caught_by_content_tracking(self):
        # SWAP(0,1); CZ(1,2); SWAP(0,1) equals CZ(0,2): a genuine
        # connection even though the CZ's wires sit outside the block.
        comb = QuantumComb(
            n=3,
            fixed_gates=(
                Gate.named("swap", 0, 1),
                Gate.named("cz", 1, 2),
                Gate.named("swap", 0, 1),
            ),
            partition=frozenset({0}),
        )
        assert any("connects" in p for p in validate(comb))

    def test_ok_implies_fixed_part_is_product_across_cut(self):
        from combcut.analysis import operator_schmidt_rank

        rng = np.random.default_rng(3)
        for trial in range(5):
            comb = QuantumComb(
                n=4,
                fixed_gates=(
                    Gate.named("swap", 2, 0),
                    Gate.custom(haar_random_unitary(2, rng), (1,)),
                    Gate.named("cz", 1, 3),
                    Gate.named("swap", 2, 0),
                ),
                gaps=(GapSlot(position=2, wires=(0, 1)),),
                partition=frozenset({0}),
            )
            assert validate(comb) == []
            fixed = Circuit(4, comb.fixed_gates)
            data = operator_schmidt_rank(unitary_of(fixed), comb.partition, 4)
            assert data.rank == 1


class TestFill:
    def test_zero_gaps(self):
        comb = QuantumComb(n=2, fixed_gates=(Gate.named("h", 1),))
        circuit = fill(comb, [])
        assert circuit.gates == (Gate.named("h", 1),)

    def test_length_mismatch(self):
        comb = QuantumComb(
            n=2, gaps=(GapSlot(0, (0, 1)), GapSlot(1, (0, 1))), partition=frozenset({0})
        )
        with pytest.raises(InvalidInput):
            fill(comb, [Gate.named("cz", 0, 1)])

    def test_wrong_filling_wires(self):
        comb = QuantumComb(n=3, gaps=(GapSlot(0, (0, 1)),), partition=frozenset({0}))
        with pytest.raises(InvalidInput):
            fill(comb, [Gate.named("cz", 0, 2)])

    def test_one_gap_cz_matches_hand_built_unitary(self):
        comb = QuantumComb(
            n=2,
            fixed_gates=(Gate.named("h", 1),),
            gaps=(GapSlot(position=1, wires=(0, 1)),),
            partition=frozenset({0}),
        )
        circuit = fill(comb, [Gate.named("cz", 0, 1)])
        reference = Circuit(2, (Gate.named("h", 1), Gate.named("cz", 0, 1)))
        assert np.max(np.abs(unitary_of(circuit) - circuit_unitary(reference))) < 1e-12

    def test_fill_is_positional(self):
        comb = QuantumComb(
            n=2,
            fixed_gates=(Gate.named("h", 1),),
            gaps=(GapSlot(0, (0, 1)), GapSlot(2, (0, 1))),
            partition=frozenset({0}),
        )
        f1, f2 = Gate.named("cz", 0, 1), Gate.named("cnot", 0, 1)
        a = fill(comb, [f1, f2])
        b = fill(comb, [f2, f1])
        assert a.gates == (f1, Gate.named("h", 1), f2)
        assert b.gates == (f2, Gate.named("h", 1), f1)

    def test_tensor_product_filling_expands_to_two_gates(self):
        comb = QuantumComb(n=2, gaps=(GapSlot(0, (0, 1)),), partition=frozenset({0}))
        pair = (Gate.named("x", 0), Gate.named("h", 1))
        circuit = fill(comb, [pair])
        assert circuit.gates == (Gate.named("x", 0), Gate.named("h", 1))


class TestJsonFormat:
    def test_named_round_trip(self):
        c = Circuit(3, (Gate.named("h", 0), Gate.named("cnot", 0, 2)))
        assert circuit_from_json(circuit_to_json(c)) == c

    def test_custom_matrix_round_trip_exact(self):
        rng = np.random.default_rng(21)
        gates = []
        for _ in range(4):
            gates.append(Gate.custom(haar_random_unitary(4, rng), (0, 1)))
            gates.append(Gate.custom(haar_random_unitary(2, rng), (1,)))
        c = Circuit(2, tuple(gates))
        text = json.dumps(circuit_to_json(c))
        back = circuit_from_json(json.loads(text))
        for g1, g2 in zip(c.gates, back.gates):
            assert np.array_equal(g1.matrix, g2.matrix)

    def test_comb_round_trip(self):
        comb = QuantumComb(
            n=3,
            fixed_gates=(Gate.named("h", 1),),
            gaps=(GapSlot(position=0, wires=(0, 2)),),
            partition=frozenset({0}),
        )
        back = comb_from_json(comb_to_json(comb))
        assert back.n == comb.n
        assert back.gaps == comb.gaps
        assert back.partition == comb.partition

    def test_malformed_gate_entry(self):
        with pytest.raises(InvalidInput):
            circuit_from_json({"n": 1, "gates": [{"wires": [0]}]})
