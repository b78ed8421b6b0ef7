"""Mass vectors and augmented (mass, surplus) states.

The coalescent state spaces are non-increasing sequences of non-negative
masses, taken with the l1 norm in the additive case and the l2 norm in the
multiplicative case.  The augmented state pairs each mass with an integer
surplus; its metric adds the l2 distance of masses and the l1 distance of
mass-weighted surpluses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MassVector:
    """Finite non-increasing sequence of non-negative reals, zero tail implied."""

    values: np.ndarray
    norm: str = "l1"  # "l1" or "l2"

    def __init__(self, values, norm: str = "l1"):
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("mass vector must be one-dimensional")
        if (arr < 0).any():
            raise ValueError("masses must be non-negative")
        if norm not in ("l1", "l2"):
            raise ValueError(f"unknown norm tag {norm!r}")
        arr = np.sort(arr)[::-1].copy()
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "norm", norm)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        """Entry i (0-based); the implicit zero tail extends indefinitely."""
        return float(self.values[i]) if i < len(self.values) else 0.0

    def norm_value(self) -> float:
        if self.norm == "l1":
            return float(self.values.sum())
        return float(np.sqrt((self.values**2).sum()))

    def partial_square_sums(self) -> np.ndarray:
        """Cumulative sums of squared masses (monotone along coalescence)."""
        return np.cumsum(self.values**2)


@dataclass(frozen=True)
class AugmentedState:
    """Sorted masses plus aligned non-negative integer surpluses."""

    masses: MassVector
    surpluses: np.ndarray

    def __init__(self, masses: MassVector, surpluses):
        s = np.asarray(surpluses, dtype=int)
        if len(s) != len(masses.values):
            raise ValueError("surplus vector must align with masses")
        if (s < 0).any():
            raise ValueError("surpluses must be non-negative")
        if ((masses.values == 0) & (s != 0)).any():
            raise ValueError("zero-mass entries must have zero surplus")
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "surpluses", s.copy())


def d_U(a: AugmentedState, b: AugmentedState) -> float:
    """l2 distance of masses plus l1 distance of mass-weighted surpluses."""
    k = max(len(a.masses), len(b.masses))
    xa = np.zeros(k)
    xb = np.zeros(k)
    xa[: len(a.masses)] = a.masses.values
    xb[: len(b.masses)] = b.masses.values
    sa = np.zeros(k)
    sb = np.zeros(k)
    sa[: len(a.masses)] = a.surpluses
    sb[: len(b.masses)] = b.surpluses
    return float(np.sqrt(((xa - xb) ** 2).sum()) + np.abs(xa * sa - xb * sb).sum())
