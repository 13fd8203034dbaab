"""Evaluation backends.

Three ways to run a circuit:

* dense statevector / full-unitary simulation (reference oracles, hard
  width caps);
* SWAP-network simulation for circuits of only SWAP and single-qubit
  gates: tracked as a wire permutation plus one accumulated 2x2 operator
  per wire, O(gates * n) time, so it scales to hundreds of wires;
* cut evaluation: a CutDecomposition is summed amplitude-wise, cross
  terms included, and the observable is read off the summed state.

Expectations are taken against real-weighted Pauli-string observables,
which keep every path's inner products computable factor-wise on product
states.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate, QuantumComb, fill, validate
from .cutting import (
    PAULIS,
    CutDecomposition,
    CutTerm,
    cut_comb,
    cut_term_count,
    kron,
)
from .errors import (
    DecompositionError,
    InvalidInput,
    SamplingFailure,
    ToolkitError,
    WidthCapExceeded,
)
from .gadget import extract_comb, gadgetize, gadgetize_v2
from .linalg import haar_random_unitary, kron_all
from .states import PauliObservable, ProductState

STATEVECTOR_CAP = 14
UNITARY_CAP = 12

_EYE2 = np.eye(2, dtype=np.complex128)
_SWAP_4 = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def _apply_ops(tensor: np.ndarray, ops) -> np.ndarray:
    """Apply (matrix, wires) pairs to a state tensor of shape (2,)*n [+ extra]."""
    for mat, wires in ops:
        k = len(wires)
        m = mat.reshape((2,) * (2 * k))
        tensor = np.tensordot(m, tensor, axes=(tuple(range(k, 2 * k)), wires))
        tensor = np.moveaxis(tensor, tuple(range(k)), wires)
    return tensor


def statevector(c: Circuit, state_in: ProductState) -> np.ndarray:
    """Dense output state; exact application of each gate in order."""
    if c.n > STATEVECTOR_CAP:
        raise WidthCapExceeded(c.n, STATEVECTOR_CAP, "statevector simulation")
    if state_in.n != c.n:
        raise InvalidInput(f"input has {state_in.n} wires, circuit has {c.n}")
    tensor = state_in.dense().reshape((2,) * c.n)
    tensor = _apply_ops(tensor, ((g.matrix, g.wires) for g in c.gates))
    return tensor.reshape(-1)


def unitary_of(c: Circuit) -> np.ndarray:
    """Full 2^n unitary, built by simulating all basis columns at once."""
    if c.n > UNITARY_CAP:
        raise WidthCapExceeded(c.n, UNITARY_CAP, "unitary construction")
    dim = 2**c.n
    tensor = np.eye(dim, dtype=np.complex128).reshape((2,) * c.n + (dim,))
    tensor = _apply_ops(tensor, ((g.matrix, g.wires) for g in c.gates))
    return tensor.reshape(dim, dim)


def apply_pauli_string(psi: np.ndarray, labels: str) -> np.ndarray:
    n = len(labels)
    ops = [(PAULIS[ch], (w,)) for w, ch in enumerate(labels) if ch != "I"]
    if not ops:
        return psi
    return _apply_ops(psi.reshape((2,) * n), ops).reshape(-1)


def expectation(psi: np.ndarray, obs: PauliObservable) -> float:
    """<psi| obs |psi> for a dense vector; must be real to 1e-9 residue."""
    dim = 1 << obs.n
    if psi.shape != (dim,):
        raise InvalidInput(f"state dimension {psi.shape} does not match 2^{obs.n}")
    parts = [
        weight * complex(np.vdot(psi, apply_pauli_string(psi, labels)))
        for weight, labels in obs.terms
    ]
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if abs(total.imag) > 1e-9 * max(1.0, abs(total.real)):
        raise ToolkitError(f"expectation has imaginary residue {total.imag}")
    return float(total.real)


def dense_expectation(c: Circuit, state_in: ProductState, obs: PauliObservable) -> float:
    """Reference value: dense statevector, then the observable."""
    if obs.n != c.n:
        raise InvalidInput(f"observable has {obs.n} wires, circuit has {c.n}")
    return expectation(statevector(c, state_in), obs)


# ---------------------------------------------------------------------------
# SWAP networks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalForm:
    """A SWAP/1q circuit as permutation * tensor product.

    ``unitary_of(c) = P(perm) @ kron(locals in wire order)`` where
    ``locals[l]`` is the operator accumulated along the trajectory of the
    content starting on wire l, and ``perm[l]`` is the wire that content
    ends on.
    """

    perm: tuple[int, ...]
    locals_: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def is_identity_perm(self) -> bool:
        return all(p == l for l, p in enumerate(self.perm))


def swap_network_local_form(c: Circuit) -> LocalForm:
    """Collapse a SWAP/1q circuit to its local form in O(gates * n)."""
    content = list(range(c.n))  # physical wire -> original wire of content
    position = list(range(c.n))  # original wire -> current physical wire
    locals_: list[np.ndarray] = [_EYE2] * c.n
    for idx, g in enumerate(c.gates):
        if g.n_wires == 1:
            l = content[g.wires[0]]
            locals_[l] = g.matrix @ locals_[l]
        elif g.is_swap():
            u, v = g.wires
            lu, lv = content[u], content[v]
            content[u], content[v] = lv, lu
            position[lu], position[lv] = v, u
        else:
            raise InvalidInput(
                f"gate {idx} ({g!r}) is not a SWAP or single-qubit gate"
            )
    return LocalForm(perm=tuple(position), locals_=tuple(locals_))


def permutation_matrix(perm) -> np.ndarray:
    """Dense operator sending the content of wire l to wire perm[l]."""
    n = len(perm)
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for src in range(dim):
        dst = 0
        for l in range(n):
            bit = (src >> (n - 1 - l)) & 1
            dst |= bit << (n - 1 - perm[l])
        mat[dst, src] = 1.0
    return mat


def local_form_unitary(lf: LocalForm) -> np.ndarray:
    if lf.n > UNITARY_CAP:
        raise WidthCapExceeded(lf.n, UNITARY_CAP, "local-form unitary")
    return permutation_matrix(lf.perm) @ kron_all(lf.locals_)


def swap_network_run(c: Circuit, state_in: ProductState) -> ProductState:
    """Product-in, product-out simulation of a SWAP/1q circuit."""
    if state_in.n != c.n:
        raise InvalidInput(f"input has {state_in.n} wires, circuit has {c.n}")
    lf = swap_network_local_form(c)
    out: list[np.ndarray] = [None] * c.n  # type: ignore[list-item]
    for l in range(c.n):
        out[lf.perm[l]] = lf.locals_[l] @ state_in.factors[l]
    return ProductState(tuple(out))


# ---------------------------------------------------------------------------
# Cut evaluation
# ---------------------------------------------------------------------------


def _oriented_matrix(gate: Gate, gap_wires: tuple[int, int]) -> np.ndarray:
    if set(gate.wires) != set(gap_wires):
        raise DecompositionError(
            f"reference gate wires {gate.wires} do not match gap {gap_wires}"
        )
    if gate.wires == gap_wires:
        return gate.matrix
    return _SWAP_4 @ gate.matrix @ _SWAP_4


def _check_reconstruction(dec: CutDecomposition, gap_gates_ref) -> None:
    gap_gates_ref = tuple(gap_gates_ref)
    if len(gap_gates_ref) != len(dec.comb.gaps):
        raise DecompositionError(
            f"{len(gap_gates_ref)} reference gate(s) for {len(dec.comb.gaps)} gap(s)"
        )
    for j, (gap, ref) in enumerate(zip(dec.comb.gaps, gap_gates_ref)):
        target = _oriented_matrix(ref, gap.wires)
        total = np.zeros((4, 4), dtype=np.complex128)
        for t in dec.per_gap[j]:
            total = total + t.coef * kron(t.factor_a, t.factor_b)
        if float(np.max(np.abs(total - target))) > 1e-9:
            raise DecompositionError(
                f"per-gap terms for gap {j} do not reconstruct the reference gate"
            )


def _slot_plan(comb: QuantumComb):
    """Precompiled combined gate order: shared by every term evaluation."""
    gap_at = {gap.position: i for i, gap in enumerate(comb.gaps)}
    fixed_iter = iter(comb.fixed_gates)
    plan = []
    for slot in range(comb.slot_count):
        if slot in gap_at:
            gidx = gap_at[slot]
            p, q = comb.gaps[gidx].wires
            plan.append(("gap", gidx, p, q))
        else:
            g = next(fixed_iter)
            if g.n_wires == 1:
                plan.append(("1q", g.matrix, g.wires[0]))
            elif g.is_swap():
                plan.append(("swap", g.wires[0], g.wires[1]))
            else:
                plan.append(("2q", g.matrix, g.wires))
    return plan


def _plan_is_swapnet(plan) -> bool:
    return all(step[0] != "2q" for step in plan)


def _term_factors(plan, term: CutTerm, state_in: ProductState) -> list[np.ndarray]:
    """Evolve per-wire factors through the plan for one SWAP/1q-only term."""
    vecs = [f for f in state_in.factors]
    for step in plan:
        kind = step[0]
        if kind == "gap":
            _, gidx, p, q = step
            a, b = term.fillings[gidx]
            vecs[p] = a @ vecs[p]
            vecs[q] = b @ vecs[q]
        elif kind == "swap":
            _, u, v = step
            vecs[u], vecs[v] = vecs[v], vecs[u]
        else:
            _, mat, w = step
            vecs[w] = mat @ vecs[w]
    return vecs


def _term_ops(plan, term: CutTerm):
    for step in plan:
        kind = step[0]
        if kind == "gap":
            _, gidx, p, q = step
            a, b = term.fillings[gidx]
            yield a, (p,)
            yield b, (q,)
        elif kind == "swap":
            yield _SWAP_4, (step[1], step[2])
        else:
            yield step[1], step[2] if kind == "2q" else (step[2],)


def _eval_summed_dense(dec, plan, state_in, obs, *, by_factors: bool) -> float:
    n = dec.comb.n
    psi_sum = np.zeros(1 << n, dtype=np.complex128)
    base = state_in.dense().reshape((2,) * n) if not by_factors else None
    for term in dec.terms:
        if by_factors:
            psi = kron_all(_term_factors(plan, term, state_in))
        else:
            psi = _apply_ops(base.copy(), _term_ops(plan, term)).reshape(-1)
        psi_sum = psi_sum + term.coef * psi
    return expectation(psi_sum, obs)


_GRAM_CHUNK = 512


def _eval_factorized(dec, plan, state_in, obs) -> float:
    """O(L^2 * n) cross-term evaluation from per-term product factors."""
    n = dec.comb.n
    count = len(dec.terms)
    if count == 0:
        return 0.0
    coefs = np.array([t.coef for t in dec.terms], dtype=np.complex128)
    # factor stacks: per wire, a 2 x L matrix of term factors
    stacks = [np.empty((2, count), dtype=np.complex128) for _ in range(n)]
    for i, term in enumerate(dec.terms):
        vecs = _term_factors(plan, term, state_in)
        for w in range(n):
            stacks[w][:, i] = vecs[w]
    parts = []
    for weight, labels in obs.terms:
        sigma_stacks = [
            stacks[w] if labels[w] == "I" else PAULIS[labels[w]] @ stacks[w]
            for w in range(n)
        ]
        val = complex(0.0)
        for start in range(0, count, _GRAM_CHUNK):
            rows = slice(start, min(start + _GRAM_CHUNK, count))
            gram = np.ones((rows.stop - rows.start, count), dtype=np.complex128)
            for w in range(n):
                gram *= stacks[w][:, rows].conj().T @ sigma_stacks[w]
            val += coefs[rows].conj() @ gram @ coefs
        parts.append(weight * val)
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if abs(total.imag) > 1e-9 * max(1.0, abs(total.real)):
        raise ToolkitError(f"cut expectation has imaginary residue {total.imag}")
    return float(total.real)


def evaluate_cut(
    dec: CutDecomposition,
    gap_gates_ref,
    state_in: ProductState,
    obs: PauliObservable,
    backend: str = "auto",
) -> float:
    """Expectation of the cut: amplitudes are summed before measuring.

    The summed state includes every cross term between decomposition
    terms. Exact decompositions are first validated gap-by-gap against
    ``gap_gates_ref``. Backends: "dense" (per-term dense statevectors,
    width-capped), "factorized" (SWAP/1q combs only; per-term product
    states and factor-wise pairwise inner products, O(L^2 n) per Pauli
    string), or "auto".
    """
    comb = dec.comb
    if state_in.n != comb.n:
        raise InvalidInput(f"input has {state_in.n} wires, comb has {comb.n}")
    if obs.n != comb.n:
        raise InvalidInput(f"observable has {obs.n} wires, comb has {comb.n}")
    if dec.exact:
        _check_reconstruction(dec, gap_gates_ref)

    plan = _slot_plan(comb)
    swapnet = _plan_is_swapnet(plan)
    if backend == "auto":
        if swapnet:
            backend = "product-dense" if comb.n <= STATEVECTOR_CAP else "factorized"
        else:
            backend = "dense"
    if backend == "factorized":
        if not swapnet:
            raise InvalidInput(
                "factorized backend needs a SWAP/1q fixed part"
            )
        return _eval_factorized(dec, plan, state_in, obs)
    if backend == "product-dense":
        if not swapnet:
            raise InvalidInput("product-dense backend needs a SWAP/1q fixed part")
        if comb.n > STATEVECTOR_CAP:
            raise WidthCapExceeded(comb.n, STATEVECTOR_CAP, "summed-state evaluation")
        return _eval_summed_dense(dec, plan, state_in, obs, by_factors=True)
    if backend == "dense":
        if comb.n > STATEVECTOR_CAP:
            raise WidthCapExceeded(comb.n, STATEVECTOR_CAP, "summed-state evaluation")
        return _eval_summed_dense(dec, plan, state_in, obs, by_factors=False)
    raise InvalidInput(f"unknown backend {backend!r}")


def summed_cut_state(dec: CutDecomposition, state_in: ProductState) -> np.ndarray:
    """Dense sum over term output states (width-capped)."""
    comb = dec.comb
    if comb.n > STATEVECTOR_CAP:
        raise WidthCapExceeded(comb.n, STATEVECTOR_CAP, "summed-state construction")
    plan = _slot_plan(comb)
    psi_sum = np.zeros(1 << comb.n, dtype=np.complex128)
    if _plan_is_swapnet(plan):
        for term in dec.terms:
            psi_sum = psi_sum + term.coef * kron_all(
                _term_factors(plan, term, state_in)
            )
        return psi_sum
    base = state_in.dense().reshape((2,) * comb.n)
    for term in dec.terms:
        psi = _apply_ops(base.copy(), _term_ops(plan, term)).reshape(-1)
        psi_sum = psi_sum + term.coef * psi
    return psi_sum


# ---------------------------------------------------------------------------
# One-term construction for a fixed input and observable
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OneTermResult:
    """A single scaled tensor-product filling reproducing a fixed
    expectation value; ``alpha0 * conj(alpha0) * gamma_prime == gamma``."""

    alpha0: complex
    fillings: tuple[tuple[Gate, Gate], ...]
    gamma: float
    gamma_prime: float | None
    tries: int
    gamma_zero: bool

    def as_decomposition(self, comb: QuantumComb) -> CutDecomposition:
        term = CutTerm(
            coef=self.alpha0,
            fillings=tuple((a.matrix, b.matrix) for a, b in self.fillings),
        )
        return CutDecomposition(
            comb=comb,
            gap_gates=(),
            mode="one-term",
            per_gap=tuple(() for _ in comb.gaps),
            terms=(term,),
            exact=False,
        )


def one_term_partition(
    comb: QuantumComb,
    gap_gates,
    state_in: ProductState,
    obs: PauliObservable,
    seed: int,
    max_tries: int = 100,
) -> OneTermResult:
    """Find one scaled tensor-product filling matching the uncut value.

    Computes the uncut expectation gamma. If gamma vanishes the scale is
    zero and any fillings work. Otherwise Haar-random single-qubit pairs
    are sampled until the filled expectation gamma' is usable
    (|gamma'| > 1e-10 and gamma/gamma' > 0, since the expectation is
    quadratic in the term) and the scale sqrt(gamma/gamma') is returned.
    """
    problems = validate(comb)
    if problems:
        raise InvalidInput(f"invalid comb: {problems[0]}")
    gamma = dense_expectation(fill(comb, tuple(gap_gates)), state_in, obs)
    if abs(gamma) <= 1e-12:
        fillings = tuple(
            (Gate.named("i", gap.wires[0]), Gate.named("i", gap.wires[1]))
            for gap in comb.gaps
        )
        return OneTermResult(
            alpha0=0.0,
            fillings=fillings,
            gamma=gamma,
            gamma_prime=None,
            tries=0,
            gamma_zero=True,
        )
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_tries + 1):
        fillings = tuple(
            (
                Gate.custom(haar_random_unitary(2, rng), (gap.wires[0],)),
                Gate.custom(haar_random_unitary(2, rng), (gap.wires[1],)),
            )
            for gap in comb.gaps
        )
        gamma_prime = dense_expectation(fill(comb, fillings), state_in, obs)
        if abs(gamma_prime) > 1e-10 and gamma / gamma_prime > 0:
            alpha0 = math.sqrt(gamma / gamma_prime)
            return OneTermResult(
                alpha0=complex(alpha0),
                fillings=fillings,
                gamma=gamma,
                gamma_prime=gamma_prime,
                tries=attempt,
                gamma_zero=False,
            )
    raise SamplingFailure(max_tries, "no filling with a sign-compatible expectation")


# ---------------------------------------------------------------------------
# Full pipeline: rewrite, extract, cut, evaluate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    expectation: float
    term_count: int
    mode: str
    wall_ms: float

    def to_json(self) -> dict:
        return {
            "expectation": self.expectation,
            "term_count": self.term_count,
            "mode": self.mode,
            "wall_ms": self.wall_ms,
        }


def pipeline_simulate(
    c: Circuit,
    state_in: ProductState,
    obs: PauliObservable,
    mode: str,
    budget: int | None = None,
    variant: str = "v1",
) -> PipelineResult:
    """Gadgetize, extract the comb, cut every gap, evaluate the sum.

    The input state and observable are extended over the ancillas (|0>
    factors and identity labels). The term count multiplies across gaps
    and is checked against ``budget`` before anything is materialized.
    """
    if variant not in ("v1", "v2"):
        raise InvalidInput(f"variant must be 'v1' or 'v2', got {variant!r}")
    t0 = time.perf_counter()
    gadget = gadgetize(c) if variant == "v1" else gadgetize_v2(c)
    comb, gap_gates = extract_comb(gadget)
    count = cut_term_count(comb, gap_gates, mode)
    if budget is not None and count > budget:
        from .errors import TermBudgetExceeded

        raise TermBudgetExceeded(count, budget)
    dec = cut_comb(comb, gap_gates, mode)
    extra = len(gadget.ancillas)
    value = evaluate_cut(dec, gap_gates, state_in.extended(extra), obs.extended(extra))
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return PipelineResult(
        expectation=value,
        term_count=dec.term_count,
        mode=dec.mode,
        wall_ms=wall_ms,
    )
