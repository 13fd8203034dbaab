"""A small curated circuit corpus with recomputable expected properties.

Layout: ``corpus/manifest.json`` plus one JSON circuit per entry. Every
expected value in the manifest carries a provenance tag saying how it is
known ("definition" for facts true by construction, "recomputed-dense"
for values from dense simulation, "recomputed-analysis" for rank and
witness quantities); ``check_corpus`` re-derives each one.

Build or rebuild the corpus with ``python3 -m combcut.corpus <dir>``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import unital_nogo_witness
from .circuits import Circuit, Gate, circuit_from_json, circuit_to_json
from .cutting import cut_term_count
from .errors import InvalidInput
from .gadget import extract_comb, gadget_to_json, gadgetize, gadgetize_v2
from .analysis import bell_pairs_circuit, state_schmidt
from .random_instances import random_circuit
from .simulate import dense_expectation, pipeline_simulate, statevector, unitary_of
from .states import PauliObservable, ProductState, parse_observable, parse_state


def _entry(path, description, circuit_json, expected, provenance):
    return {
        "path": path,
        "description": description,
        "expected": expected,
        "provenance": provenance,
    }, circuit_json


def build_corpus(directory) -> list[str]:
    """Write the corpus files; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    files: dict[str, dict] = {}

    def add(manifest_entry, circuit_json):
        entries.append(manifest_entry)
        files[manifest_entry["path"]] = circuit_json

    add(*_entry(
        "empty_2.json",
        "two idle wires; the unitary is the 4x4 identity",
        circuit_to_json(Circuit(2, ())),
        {"width": 2, "gate_count": 0, "unitary_is_identity": True},
        "definition",
    ))

    for n in (2, 4, 6, 8):
        c = bell_pairs_circuit(n)
        add(*_entry(
            f"bell_{n}.json",
            f"{n // 2} maximally entangled pairs straddling the front half",
            circuit_to_json(c),
            {
                "width": n,
                "gate_count": n,
                "schmidt_rank": {
                    "partition": list(range(n // 2)),
                    "value": 1 << (n // 2),
                },
                "cut_term_count": {"mode": "schmidt", "value": 1 << (n // 2)},
            },
            "recomputed-analysis",
        ))

    bell4 = bell_pairs_circuit(4)
    for variant, rewrite in (("v1", gadgetize), ("v2", gadgetize_v2)):
        g = rewrite(bell4)
        add(*_entry(
            f"bell_4_gadget_{variant}.json",
            f"pair generator after the {variant} ancilla rewrite",
            gadget_to_json(g),
            {
                "width": g.circuit.n,
                "equivalent_on_original_wires": {
                    "reference": "bell_4.json",
                    "original_wires": 4,
                    "tolerance": 1e-9,
                },
                "entangling_gates_on_ancilla_pair": {
                    "ancillas": list(g.ancillas)[:2],
                },
            },
            "recomputed-dense",
        ))

    add(*_entry(
        "swap_witness.json",
        "one clean wire swapped into one maximally mixed wire",
        circuit_to_json(Circuit(2, (Gate.named("swap", 0, 1),))),
        {
            "width": 2,
            "nogo_distance": {"clean_wires": 1, "value": 0.5, "tolerance": 1e-12},
        },
        "recomputed-analysis",
    ))

    for seed in (3, 7):
        c = random_circuit(4, 8, seed=seed, p_two_qubit=0.4)
        spec_in = "0" * 4
        spec_obs = "ZIII + 0.5*IXII"
        value = dense_expectation(
            c, parse_state(spec_in, 4), parse_observable(spec_obs, 4)
        )
        add(*_entry(
            f"random_4q_seed{seed}.json",
            f"seeded random four-wire circuit (seed {seed})",
            circuit_to_json(c),
            {
                "width": 4,
                "gate_count": 8,
                "expectation": {
                    "input": spec_in,
                    "observable": spec_obs,
                    "value": value,
                    "tolerance": 1e-9,
                },
                "pipeline_matches_dense": {
                    "input": spec_in,
                    "observable": spec_obs,
                    "mode": "schmidt",
                    "tolerance": 1e-8,
                },
            },
            "recomputed-dense",
        ))

    manifest = {"entries": entries}
    paths = []
    for name, payload in [("manifest.json", manifest)] + sorted(files.items()):
        path = directory / name
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        paths.append(str(path))
    return paths


def load_corpus(directory) -> tuple[dict, dict[str, dict]]:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise InvalidInput(f"no manifest.json under {directory}")
    manifest = json.loads(manifest_path.read_text())
    files = {}
    for entry in manifest.get("entries", []):
        path = directory / entry["path"]
        if not path.exists():
            raise InvalidInput(f"corpus file missing: {path}")
        files[entry["path"]] = json.loads(path.read_text())
    return manifest, files


def check_corpus_payload(manifest, files: dict[str, dict]):
    """Re-derive every expected property; returns a SuiteResult."""
    from .suites import SuiteResult

    result = SuiteResult("corpus", None)
    if not manifest or "entries" not in manifest:
        raise InvalidInput("corpus manifest missing or malformed")
    for entry in manifest["entries"]:
        name = entry["path"]
        if name not in files:
            raise InvalidInput(f"corpus file missing: {name}")
        obj = files[name]
        circuit = circuit_from_json(obj)
        tag = name.removesuffix(".json")
        expected = entry["expected"]

        if "width" in expected:
            result.add(f"{tag}-width", circuit.n, expected["width"], 0)
        if "gate_count" in expected:
            result.add(f"{tag}-gate-count", len(circuit.gates), expected["gate_count"], 0)
        if expected.get("unitary_is_identity"):
            dev = float(np.max(np.abs(unitary_of(circuit) - np.eye(1 << circuit.n))))
            result.add(f"{tag}-identity", dev, 0.0, 1e-10)
        if "schmidt_rank" in expected:
            spec = expected["schmidt_rank"]
            psi = statevector(circuit, ProductState.zeros(circuit.n))
            rank = state_schmidt(psi, spec["partition"], circuit.n).rank
            result.add(f"{tag}-schmidt-rank", rank, spec["value"], 0)
        if "cut_term_count" in expected:
            spec = expected["cut_term_count"]
            comb, gap_gates = extract_comb(gadgetize(circuit))
            count = cut_term_count(comb, gap_gates, spec["mode"])
            result.add(f"{tag}-cut-terms", count, spec["value"], 0)
        if "nogo_distance" in expected:
            spec = expected["nogo_distance"]
            witness = unital_nogo_witness(
                circuit, ProductState.zeros(spec["clean_wires"])
            )
            result.add(f"{tag}-nogo-distance", witness.distance, spec["value"],
                       spec["tolerance"])
        if "expectation" in expected:
            spec = expected["expectation"]
            value = dense_expectation(
                circuit,
                parse_state(spec["input"], circuit.n),
                parse_observable(spec["observable"], circuit.n),
            )
            result.add(f"{tag}-expectation", value, spec["value"], spec["tolerance"])
        if "pipeline_matches_dense" in expected:
            spec = expected["pipeline_matches_dense"]
            state_in = parse_state(spec["input"], circuit.n)
            obs = parse_observable(spec["observable"], circuit.n)
            res = pipeline_simulate(circuit, state_in, obs, spec["mode"])
            ref = dense_expectation(circuit, state_in, obs)
            result.add(
                f"{tag}-pipeline-match",
                abs(res.expectation - ref),
                0.0,
                spec["tolerance"],
            )
        if "equivalent_on_original_wires" in expected:
            spec = expected["equivalent_on_original_wires"]
            ref_circuit = circuit_from_json(files[spec["reference"]])
            m = spec["original_wires"]
            psi_ref = statevector(ref_circuit, ProductState.zeros(m))
            psi = statevector(circuit, ProductState.zeros(circuit.n))
            block = psi.reshape(1 << m, -1)
            dev = float(np.max(np.abs(block[:, 0] - psi_ref)))
            leak = float(np.linalg.norm(block[:, 1:]))
            result.add(f"{tag}-equivalence", max(dev, leak), 0.0, spec["tolerance"])
        if "entangling_gates_on_ancilla_pair" in expected:
            anc = tuple(expected["entangling_gates_on_ancilla_pair"]["ancillas"])
            bad = sum(
                1
                for g in circuit.gates
                if g.n_wires == 2 and not g.is_swap() and set(g.wires) != set(anc)
            )
            result.add(f"{tag}-ancilla-structure", bad, 0, 0)
    return result


def check_corpus(directory):
    manifest, files = load_corpus(directory)
    return check_corpus_payload(manifest, files)


def _main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        prog="python3 -m combcut.corpus",
        description="build (default) or check the circuit corpus",
    )
    parser.add_argument("directory", help="corpus directory")
    parser.add_argument("--check", action="store_true", help="verify instead of build")
    args = parser.parse_args(argv)
    if args.check:
        result = check_corpus(args.directory)
        for c in result.checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: "
                  f"{c.measured} (expected {c.expected})")
        print("overall:", "pass" if result.overall else "fail")
        return 0 if result.overall else 1
    for path in build_corpus(args.directory):
        print("wrote", path)
    return 0


if __name__ == "__main__":
    raise SystemExit(_main())
