"""Named verification suites.

Each suite runs a fixed set of quantitative checks and returns a
:class:`SuiteResult` whose rows double as regression golden files: given
the same inputs, seed, and package version, the emitted JSON and CSV are
byte-identical (timings are zeroed in files unless explicitly requested).

Suites: lemma1, thm2-pipeline, thm3, fidelity, unital-nogo, scaling,
corpus.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import (
    ReportRow,
    bell_pairs_circuit,
    bell_state,
    best_rank_fidelity,
    rank_bound_check,
    rows_to_csv,
    scaling_report,
    state_schmidt,
)
from .channels import (
    Channel,
    ChannelCut,
    apply_channel,
    cut_mixed_block_state,
    is_unital,
    trace_distance,
    unital_nogo_witness,
)
from .circuits import Circuit, Gate, GapSlot, QuantumComb
from .cutting import cut_comb, cut_term_count, gate_cut
from .errors import InvalidInput, TermBudgetExceeded
from .gadget import extract_comb, gadgetize, gadgetize_v2
from .linalg import haar_random_unitary, max_abs
from .random_instances import (
    random_circuit,
    random_one_gap_comb,
    random_pauli_observable,
    random_product_state,
)
from .simulate import (
    dense_expectation,
    evaluate_cut,
    one_term_partition,
    pipeline_simulate,
    statevector,
    summed_cut_state,
)
from .states import PauliObservable, ProductState

SUITE_NAMES = (
    "lemma1",
    "thm2-pipeline",
    "thm3",
    "fidelity",
    "unital-nogo",
    "scaling",
    "corpus",
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float | int | str
    expected: float | int | str
    tolerance: float | str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }


@dataclass
class SuiteResult:
    suite: str
    seed: int | None
    checks: list[Check] = field(default_factory=list)
    rows: list[ReportRow] = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, measured, expected, tolerance) -> None:
        if isinstance(tolerance, str) or isinstance(measured, str):
            passed = measured == expected
        elif tolerance == 0:
            passed = measured == expected
        else:
            passed = abs(float(measured) - float(expected)) <= float(tolerance)
        self.checks.append(Check(name, bool(passed), measured, expected, tolerance))

    def add_bound(self, name, measured, bound, kind: str) -> None:
        """kind '<=' or '>=' against ``bound``."""
        passed = measured <= bound if kind == "<=" else measured >= bound
        self.checks.append(Check(name, bool(passed), measured, f"{kind} {bound}", kind))

    def to_json(self, *, include_timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "version": __version__,
            "seed": self.seed,
            "overall": self.overall,
            "checks": [c.to_json() for c in self.checks],
            "rows": [r.to_json() for r in self.rows] if self.rows else [],
            "wall_ms": self.wall_ms if include_timings else 0.0,
        }

    def to_csv(self) -> str:
        lines = ["suite,check,passed,measured,expected,tolerance"]
        for c in self.checks:
            lines.append(
                ",".join(
                    [
                        self.suite,
                        c.name,
                        "pass" if c.passed else "fail",
                        _csv_fmt(c.measured),
                        _csv_fmt(c.expected),
                        _csv_fmt(c.tolerance),
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def rows_csv(self, *, include_timings: bool = False) -> str | None:
        if not self.rows:
            return None
        return rows_to_csv(self.rows, include_timings=include_timings)


def _csv_fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value).replace(",", ";")


# ---------------------------------------------------------------------------
# lemma1: one-term comb construction for fixed input and observable
# ---------------------------------------------------------------------------


def suite_lemma1(seed: int = 11, instances: int = 50, max_tries: int = 100) -> SuiteResult:
    result = SuiteResult("lemma1", seed)
    for i in range(instances):
        comb, gap_gates = random_one_gap_comb(3, seed=seed + 7 * i)
        obs = random_pauli_observable(3, seed=seed + 7 * i + 1)
        state_in = random_product_state(3, seed=seed + 7 * i + 2)
        res = one_term_partition(
            comb, gap_gates, state_in, obs, seed=seed + 7 * i + 3, max_tries=max_tries
        )
        if res.gamma_zero:
            err = abs(res.gamma)
        else:
            err = abs(abs(res.alpha0) ** 2 * res.gamma_prime - res.gamma)
            value = evaluate_cut(
                res.as_decomposition(comb), gap_gates, state_in, obs
            )
            err = max(err, abs(value - res.gamma))
        result.add(f"instance-{i:02d}-match", err, 0.0, 1e-9)
        result.add_bound(f"instance-{i:02d}-tries", res.tries, max_tries, "<=")

    # gamma = 0 branch: measure Z on a wire held in uniform superposition
    comb0 = QuantumComb(
        n=3,
        fixed_gates=(Gate.named("h", 2),),
        gaps=(GapSlot(position=1, wires=(0, 1)),),
        partition=frozenset({0}),
    )
    res0 = one_term_partition(
        comb0,
        [Gate.named("cz", 0, 1)],
        ProductState.zeros(3),
        PauliObservable.single("IIZ"),
        seed=seed,
    )
    result.add("gamma-zero-branch-alpha", abs(res0.alpha0), 0.0, 0)
    result.add("gamma-zero-branch-flag", res0.gamma_zero, True, "bool")
    return result


# ---------------------------------------------------------------------------
# thm2-pipeline: rewrite + cut + SWAP-network evaluation against dense
# ---------------------------------------------------------------------------


def suite_thm2_pipeline(seed: int = 23, random_cases: int = 6) -> SuiteResult:
    result = SuiteResult("thm2-pipeline", seed)

    hcz = Circuit(2, (Gate.named("h", 0), Gate.named("cz", 0, 1)))
    res = pipeline_simulate(
        hcz, ProductState.zeros(2), PauliObservable.single("ZI"), "schmidt"
    )
    result.add("h-cz-expectation", res.expectation, 0.0, 1e-8)
    result.add("h-cz-terms", res.term_count, 2, 0)

    only_1q = Circuit(3, (Gate.named("h", 0), Gate.named("t", 1), Gate.named("x", 2)))
    state_in = random_product_state(3, seed)
    obs = random_pauli_observable(3, seed + 1)
    res = pipeline_simulate(only_1q, state_in, obs, "schmidt")
    ref = dense_expectation(only_1q, state_in, obs)
    result.add("no-two-qubit-terms", res.term_count, 1, 0)
    result.add("no-two-qubit-match", abs(res.expectation - ref), 0.0, 1e-8)

    three_cz = Circuit(2, tuple(Gate.named("cz", 0, 1) for _ in range(3)))
    state_in = ProductState.from_labels(["+", "+"])
    obs = PauliObservable.single("XI")
    res = pipeline_simulate(three_cz, state_in, obs, "pauli")
    ref = dense_expectation(three_cz, state_in, obs)
    result.add("three-cz-pauli-terms", res.term_count, 64, 0)
    result.add("three-cz-pauli-match", abs(res.expectation - ref), 0.0, 1e-8)

    try:
        pipeline_simulate(three_cz, state_in, obs, "pauli", budget=10)
        result.add("budget-contract", "no error", "TermBudgetExceeded(64)", "exact")
    except TermBudgetExceeded as exc:
        result.add("budget-contract", exc.term_count, 64, 0)

    for i in range(random_cases):
        c = random_circuit(3, 5, seed=seed + 100 + i, p_two_qubit=0.5)
        state_in = random_product_state(3, seed + 200 + i)
        obs = random_pauli_observable(3, seed + 300 + i, n_terms=2)
        ref = dense_expectation(c, state_in, obs)
        for mode in ("schmidt", "pauli"):
            for variant in ("v1", "v2"):
                res = pipeline_simulate(c, state_in, obs, mode, variant=variant)
                result.add(
                    f"random-{i}-{mode}-{variant}",
                    abs(res.expectation - ref),
                    0.0,
                    1e-8,
                )
    return result


# ---------------------------------------------------------------------------
# thm3: entangling-power lower bound on exact cuts
# ---------------------------------------------------------------------------


def suite_thm3(n: int = 8, seed: int = 0) -> SuiteResult:
    if n not in (2, 4, 6, 8):
        raise InvalidInput(
            f"suite size n must be one of 2, 4, 6, 8 (width caps), got {n}"
        )
    result = SuiteResult("thm3", seed)
    sizes = [m for m in (2, 4, 6, 8) if m <= n]
    for m in sizes:
        bound = 1 << (m // 2)
        half = list(range(m // 2))
        psi = bell_state(m)
        rank = state_schmidt(psi, half, m).rank
        result.add(f"n{m}-state-rank", rank, bound, 0)

        comb, gap_gates = extract_comb(gadgetize(bell_pairs_circuit(m)))
        dec = cut_comb(comb, gap_gates, "schmidt")
        result.add_bound(f"n{m}-term-count", dec.term_count, bound, ">=")

        state_in = ProductState.zeros(m + 2)
        report = rank_bound_check(dec, state_in, partition=half)
        result.add(f"n{m}-cut-reconstruction", report.state_distance, 0.0, 1e-8)
        result.add_bound(f"n{m}-summed-rank", report.state_rank, dec.term_count, "<=")
        result.rows.append(
            ReportRow(
                n_or_k=m,
                mode="schmidt",
                term_count=dec.term_count,
                rank=report.state_rank,
                fidelity=None,
            )
        )

        for keep in range(1, bound):
            trunc = rank_bound_check(dec.truncated(keep), state_in, partition=half)
            result.add_bound(f"n{m}-trunc{keep}-rank", trunc.state_rank, keep, "<=")
            psi_sum = summed_cut_state(dec.truncated(keep), state_in)
            fid = _fidelity_on_original(psi_sum, psi, m)
            expected = min(1.0, keep / bound)
            result.add(f"n{m}-trunc{keep}-fidelity", fid, expected, 1e-10)
    return result


def _fidelity_on_original(psi_padded: np.ndarray, psi_ref: np.ndarray, m: int) -> float:
    """Squared overlap with the reference after tracing trivial ancillas."""
    extra = psi_padded.size // psi_ref.size
    block = psi_padded.reshape(psi_ref.size, extra)
    amp = block[:, 0]
    leak = float(np.linalg.norm(block[:, 1:]))
    if leak > 1e-9:
        raise InvalidInput(f"ancillas are not in |0..0> (leak {leak})")
    norm2 = float(np.vdot(amp, amp).real)
    if norm2 <= 0:
        return 0.0
    return float(abs(np.vdot(psi_ref, amp)) ** 2 / norm2)


# ---------------------------------------------------------------------------
# fidelity: best rank-L approximation decay
# ---------------------------------------------------------------------------


def suite_fidelity(n: int = 8, seed: int = 0) -> SuiteResult:
    if n not in (2, 4, 6, 8):
        raise InvalidInput(
            f"suite size n must be one of 2, 4, 6, 8 (width caps), got {n}"
        )
    result = SuiteResult("fidelity", seed)
    product = random_product_state(4, seed + 1).dense()
    result.add(
        "product-rank1-fidelity",
        best_rank_fidelity(product, [0, 1], 4, 1),
        1.0,
        1e-10,
    )
    for m in (2, 4, 6, 8):
        if m > n:
            continue
        psi = bell_state(m)
        half = list(range(m // 2))
        bound = 1 << (m // 2)
        for keep in sorted({1, 2, bound // 2, bound - 1, bound, bound + 1}):
            if keep < 1:
                continue
            fid = best_rank_fidelity(psi, half, m, keep)
            expected = min(1.0, keep / bound)
            result.add(f"n{m}-L{keep}", fid, expected, 1e-10)
            result.rows.append(
                ReportRow(
                    n_or_k=m,
                    mode="best-rank",
                    term_count=keep,
                    rank=min(keep, bound),
                    fidelity=fid,
                )
            )
    return result


# ---------------------------------------------------------------------------
# unital-nogo: mixed-block witness and unitality fixed point
# ---------------------------------------------------------------------------


def _random_unital_channel(rng: np.random.Generator) -> Channel:
    k = int(rng.integers(2, 4))
    raw = rng.dirichlet(np.ones(k))
    return Channel.mixed_unitary(raw, [haar_random_unitary(2, rng) for _ in range(k)])


def suite_unital_nogo(seed: int = 31, cuts: int = 20, channels: int = 50) -> SuiteResult:
    result = SuiteResult("unital-nogo", seed)
    swap_circuit = Circuit(2, (Gate.named("swap", 0, 1),))
    witness = unital_nogo_witness(swap_circuit, ProductState.zeros(1))
    result.add("swap-witness-distance", witness.distance, 0.5, 1e-12)

    identity_circuit = Circuit(2, ())
    result.add(
        "identity-witness-distance",
        unital_nogo_witness(identity_circuit, ProductState.zeros(1)).distance,
        0.0,
        1e-12,
    )

    rng = np.random.default_rng(seed)
    rho_a = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    eye_b = np.eye(2) / 2.0
    for i in range(cuts):
        terms = []
        for _ in range(int(rng.integers(1, 4))):
            coef = complex(rng.normal(), rng.normal())
            terms.append((coef, _random_unital_channel(rng), _random_unital_channel(rng)))
        cut = ChannelCut(tuple(terms))
        rho_b, residual = cut_mixed_block_state(cut, rho_a)
        dev = max_abs(rho_b - eye_b)
        result.add(f"cut-{i:02d}-block-b-mixed", dev, 0.0, 1e-9)
        mismatch = trace_distance(rho_b, witness.rho_b_true)
        result.add_bound(f"cut-{i:02d}-mismatch", mismatch, 0.5 - 1e-9, ">=")

    for i in range(channels):
        ch = _random_unital_channel(rng)
        if not is_unital(ch):
            result.add(f"channel-{i:02d}-unital", False, True, "bool")
            continue
        fixed = apply_channel(ch, np.eye(2, dtype=np.complex128) / 2.0)
        result.add(f"channel-{i:02d}-fixed-point", max_abs(fixed - eye_b), 0.0, 1e-9)
    return result


# ---------------------------------------------------------------------------
# scaling: exact exponential term growth in the gap count
# ---------------------------------------------------------------------------


def suite_scaling(
    gate: str = "cz",
    kmax: int = 6,
    mode: str = "schmidt",
    seed: int = 47,
    tol: float = 1e-8,
) -> SuiteResult:
    result = SuiteResult("scaling", seed)
    g = Gate.named(gate, 0, 1)
    per_gate = len(gate_cut(g, mode))
    rows = scaling_report(g, kmax, mode)
    result.rows.extend(rows)
    for row in rows:
        result.add(
            f"k{row.n_or_k}-term-count", row.term_count, per_gate**row.n_or_k, 0
        )
    state_in = random_product_state(2, seed)
    obs = random_pauli_observable(2, seed + 1, n_terms=2)
    for k in range(1, kmax + 1):
        base = Circuit(2, tuple(Gate.named(gate, 0, 1) for _ in range(k)))
        res = pipeline_simulate(base, state_in, obs, mode)
        ref = dense_expectation(base, state_in, obs)
        result.add(f"k{k}-pipeline-match", abs(res.expectation - ref), 0.0, tol)
    return result


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def run_suite(name: str, seed: int | None = None, params: dict | None = None) -> SuiteResult:
    params = dict(params or {})
    t0 = time.perf_counter()
    if name == "lemma1":
        result = suite_lemma1(
            seed=11 if seed is None else seed,
            instances=int(params.get("instances", 50)),
            max_tries=int(params.get("max_tries", 100)),
        )
    elif name == "thm2-pipeline":
        result = suite_thm2_pipeline(
            seed=23 if seed is None else seed,
            random_cases=int(params.get("random_cases", 6)),
        )
    elif name == "thm3":
        result = suite_thm3(n=int(params.get("n", 8)), seed=0 if seed is None else seed)
    elif name == "fidelity":
        result = suite_fidelity(n=int(params.get("n", 8)), seed=0 if seed is None else seed)
    elif name == "unital-nogo":
        result = suite_unital_nogo(
            seed=31 if seed is None else seed,
            cuts=int(params.get("cuts", 20)),
            channels=int(params.get("channels", 50)),
        )
    elif name == "scaling":
        result = suite_scaling(
            gate=str(params.get("gate", "cz")),
            kmax=int(params.get("kmax", 6)),
            mode=str(params.get("mode", "schmidt")),
            seed=47 if seed is None else seed,
            tol=float(params.get("tol", 1e-8)),
        )
    elif name == "corpus":
        from .corpus import check_corpus_payload

        result = check_corpus_payload(
            params.get("manifest"), params.get("entries") or {}
        )
    else:
        raise InvalidInput(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    result.wall_ms = (time.perf_counter() - t0) * 1000.0
    return result
