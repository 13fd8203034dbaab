"""combcut: a circuit-cutting toolkit built around comb templates.

Core pieces: cut-local decompositions of two-qubit gates (Pauli basis and
operator-Schmidt), ancilla gadget rewrites that relocate entangling gates,
polynomial-time SWAP-network simulation, channel-level cuts with the
maximally-mixed-block witness, Schmidt-rank analysis, and named
verification suites exposed through a FastAPI service and a thin CLI.
"""

from .circuits import Circuit, Gate, GapSlot, QuantumComb, fill, validate
from .cutting import (
    CutDecomposition,
    GateCutTerm,
    cut_comb,
    first_qubit_pauli_cut,
    gate_cut,
    operator_schmidt,
    pauli_decompose,
    recursive_cut_cost,
)
from .errors import (
    DecompositionError,
    InvalidInput,
    SamplingFailure,
    TermBudgetExceeded,
    ToolkitError,
    WidthCapExceeded,
)
from .gadget import GadgetizedCircuit, extract_comb, gadgetize, gadgetize_v2
from .linalg import haar_random_unitary, kron, svd
from .simulate import (
    LocalForm,
    OneTermResult,
    PipelineResult,
    dense_expectation,
    evaluate_cut,
    one_term_partition,
    pipeline_simulate,
    statevector,
    swap_network_local_form,
    swap_network_run,
    unitary_of,
)
from .states import PauliObservable, ProductState, parse_observable, parse_state

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CutDecomposition",
    "DecompositionError",
    "Gate",
    "GateCutTerm",
    "GadgetizedCircuit",
    "GapSlot",
    "InvalidInput",
    "LocalForm",
    "OneTermResult",
    "PauliObservable",
    "PipelineResult",
    "ProductState",
    "QuantumComb",
    "SamplingFailure",
    "TermBudgetExceeded",
    "ToolkitError",
    "WidthCapExceeded",
    "cut_comb",
    "dense_expectation",
    "evaluate_cut",
    "extract_comb",
    "fill",
    "first_qubit_pauli_cut",
    "gadgetize",
    "gadgetize_v2",
    "gate_cut",
    "haar_random_unitary",
    "kron",
    "one_term_partition",
    "operator_schmidt",
    "parse_observable",
    "parse_state",
    "pauli_decompose",
    "pipeline_simulate",
    "recursive_cut_cost",
    "statevector",
    "svd",
    "swap_network_local_form",
    "swap_network_run",
    "unitary_of",
    "validate",
    "__version__",
]
