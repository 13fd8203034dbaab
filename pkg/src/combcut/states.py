"""Product states and Pauli-string observables, with their text formats.

Input mini-language: a bitstring like ``"0010"`` or comma-separated wire
labels from {0, 1, +, -, i, -i}. Observables are weighted Pauli strings
like ``"0.5*ZIZ + 1.0*XII"``; a bare string means weight 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg import as_vector, kron_all

_SQ2 = np.sqrt(0.5)

STATE_LABELS: dict[str, np.ndarray] = {
    "0": as_vector([1, 0]),
    "1": as_vector([0, 1]),
    "+": as_vector([_SQ2, _SQ2]),
    "-": as_vector([_SQ2, -_SQ2]),
    "i": as_vector([_SQ2, _SQ2 * 1j]),
    "-i": as_vector([_SQ2, -_SQ2 * 1j]),
}

PAULI_CHARS = "IXYZ"


@dataclass(frozen=True, eq=False)
class ProductState:
    """One normalized 2-dim factor per wire."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        checked = []
        for idx, f in enumerate(self.factors):
            vec = as_vector(f, name=f"factor {idx}")
            if vec.shape != (2,):
                raise InvalidInput(f"factor {idx} must have dimension 2")
            if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                raise InvalidInput(f"factor {idx} is not normalized within 1e-12")
            checked.append(vec)
        object.__setattr__(self, "factors", tuple(checked))

    @property
    def n(self) -> int:
        return len(self.factors)

    @classmethod
    def zeros(cls, n: int) -> "ProductState":
        return cls(tuple(STATE_LABELS["0"] for _ in range(n)))

    @classmethod
    def from_labels(cls, labels) -> "ProductState":
        factors = []
        for lab in labels:
            key = str(lab).strip().lower().replace("−", "-")
            if key not in STATE_LABELS:
                raise InvalidInput(
                    f"unknown state label {lab!r}; use one of "
                    f"{sorted(STATE_LABELS)}"
                )
            factors.append(STATE_LABELS[key])
        if not factors:
            raise InvalidInput("empty state specification")
        return cls(tuple(factors))

    def extended(self, extra_zero_wires: int) -> "ProductState":
        return ProductState(
            self.factors + tuple(STATE_LABELS["0"] for _ in range(extra_zero_wires))
        )

    def dense(self) -> np.ndarray:
        return kron_all(self.factors)


def parse_state(spec: str, n: int | None = None) -> ProductState:
    """Parse the input mini-language; validates against ``n`` when given."""
    text = spec.strip()
    if not text:
        raise InvalidInput("empty state specification")
    if "," in text:
        state = ProductState.from_labels(text.split(","))
    elif set(text) <= {"0", "1"}:
        state = ProductState.from_labels(list(text))
    else:
        state = ProductState.from_labels(list(text))
    if n is not None and state.n != n:
        raise InvalidInput(f"state has {state.n} wire(s), circuit has {n}")
    return state


@dataclass(frozen=True)
class PauliObservable:
    """A real-weighted sum of Pauli strings over a fixed wire count."""

    terms: tuple[tuple[float, str], ...]

    def __post_init__(self):
        if not self.terms:
            raise InvalidInput("observable needs at least one term")
        n = len(self.terms[0][1])
        cleaned = []
        for weight, labels in self.terms:
            labels = labels.upper()
            if len(labels) != n:
                raise InvalidInput("all Pauli strings must have equal length")
            if any(ch not in PAULI_CHARS for ch in labels):
                raise InvalidInput(f"bad Pauli string {labels!r}")
            cleaned.append((float(weight), labels))
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def n(self) -> int:
        return len(self.terms[0][1])

    @classmethod
    def single(cls, labels: str, weight: float = 1.0) -> "PauliObservable":
        return cls(((weight, labels),))

    def extended(self, extra_identity_wires: int) -> "PauliObservable":
        pad = "I" * extra_identity_wires
        return PauliObservable(tuple((w, s + pad) for w, s in self.terms))


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*\*?\s*)?"
    r"(?P<labels>[IXYZixyz]+)\s*"
)


def parse_observable(spec: str, n: int | None = None) -> PauliObservable:
    """Parse e.g. ``"0.5*ZIZ + 1.0*XII"`` or ``"ZZ"``."""
    text = spec.strip()
    if not text:
        raise InvalidInput("empty observable specification")
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse observable near {text[pos:]!r}")
        weight = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            weight = -weight
        terms.append((weight, m.group("labels").upper()))
        pos = m.end()
    obs = PauliObservable(tuple(terms))
    if n is not None and obs.n != n:
        raise InvalidInput(f"observable has {obs.n} wire(s), circuit has {n}")
    return obs
