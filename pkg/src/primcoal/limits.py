"""Brownian limit objects and the Marcus-Lushnikov finite-rate simulator.

Grid discretisations of the parabolically drifted Brownian motion
B(x) + lambda x - x^2/2 (multiplicative limit) and of the tilted normalised
excursion (additive limit), excursion-length extraction after reflection
above the running minimum, a planar Poisson point set under the reflected
path for the limiting surplus counts, and an event-driven stochastic
coalescent with pluggable collision kernel.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .states import MassVector
from .walks import LatticePath, psi


@dataclass(frozen=True)
class GridPath(LatticePath):
    """LatticePath on a uniform grid of width dx starting at x = 0."""

    @property
    def dx(self) -> float:
        return self.x_step

    def grid(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.x_step


def simulate_parabolic(lam: float, rng, horizon: float | None = None, dx: float = 1e-3) -> GridPath:
    """B(x) + lambda x - x^2/2 on [0, horizon], steps N(0, dx).

    Default horizon max(10, 2 lambda + 10): past 2 lambda the drift is
    negative and excursions straddling the cutoff become negligible.
    """
    if horizon is None:
        horizon = max(10.0, 2.0 * lam + 10.0)
    steps = int(round(horizon / dx))
    x = np.arange(steps + 1) * dx
    noise = np.concatenate([[0.0], rng.normal(0.0, np.sqrt(dx), size=steps)])
    return GridPath(np.cumsum(noise) + lam * x - x**2 / 2.0, x_step=dx)


def simulate_excursion(lam: float, rng, dx: float = 1e-3) -> GridPath:
    """Tilted normalised Brownian excursion e(x) - lambda x on [0, 1].

    The excursion comes from the Vervaat rotation of a Brownian bridge at
    its argmin; endpoints are pinned to 0 exactly.
    """
    steps = int(round(1.0 / dx))
    noise = rng.normal(0.0, np.sqrt(dx), size=steps)
    w = np.concatenate([[0.0], np.cumsum(noise)])
    x = np.arange(steps + 1) * dx
    bridge = w - x * w[-1]
    k = int(np.argmin(bridge))
    exc = np.concatenate([bridge[k:], bridge[1 : k + 1]]) - bridge[k]
    exc[0] = 0.0
    exc[-1] = 0.0
    return GridPath(exc - lam * x, x_step=dx)


def grid_excursions(path: GridPath) -> list[tuple[int, int]]:
    """Excursion intervals (a, b] of Psi(path) above zero, in grid indices.

    Floating grids almost never return exactly to the minimum, so a grid
    point counts as a zero of the reflected path when it sets a new running
    minimum of the original.  Zero-length artefacts are discarded.
    """
    vals = np.asarray(path.values, dtype=float)
    runmin = np.minimum.accumulate(vals)
    at_min = vals <= runmin + 1e-15
    zeros = np.flatnonzero(at_min)
    ivals = [(int(a), int(b)) for a, b in zip(zeros[:-1], zeros[1:]) if b - a >= 2]
    if zeros[-1] != len(vals) - 1:
        ivals.append((int(zeros[-1]), len(vals) - 1))
    return ivals


def limit_gamma(path: GridPath, top: int | None = None) -> MassVector:
    """Sorted excursion lengths of Psi(path) above zero, in x units."""
    lengths = np.array([(b - a) for a, b in grid_excursions(path)], dtype=float)
    lengths = np.sort(lengths)[::-1] * path.dx
    if top is not None:
        lengths = lengths[:top]
    return MassVector(lengths, norm="l2")


@dataclass(frozen=True)
class PlanarPoissonPoints:
    """Unit-rate Poisson points in a box [0, width] x [0, height]."""

    width: float
    height: float
    xs: np.ndarray
    ys: np.ndarray


def sample_planar_poisson(width: float, height: float, rng) -> PlanarPoissonPoints:
    n = rng.poisson(width * height)
    return PlanarPoissonPoints(width, height, rng.random(n) * width, rng.random(n) * height)


def limit_surplus(path: GridPath, rng, margin: float = 0.5) -> list[tuple[float, int]]:
    """(excursion length, surplus) per excursion of Psi(path).

    The surplus of an excursion is the number of unit-rate planar Poisson
    points lying strictly under the reflected path over its interval; the
    box height is the path's maximum plus a margin so no point is clipped.
    """
    reflected = psi(path).values
    width = (len(path.values) - 1) * path.dx
    height = float(reflected.max()) + margin
    pts = sample_planar_poisson(width, height, rng)
    idx = np.minimum((pts.xs / path.dx).astype(int), len(reflected) - 1)
    under = pts.ys < reflected[idx]
    out = []
    for a, b in grid_excursions(path):
        inside = under & (pts.xs > a * path.dx) & (pts.xs <= b * path.dx)
        out.append(((b - a) * path.dx, int(inside.sum())))
    out.sort(key=lambda p: (-p[0], p[1]))
    return out


def export_grid_path(path: GridPath, out) -> None:
    """CSV with columns x, value, psi_value."""
    reflected = psi(path).values
    xs = path.grid()
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "value", "psi_value"])
        for x, v, pv in zip(xs, path.values, reflected):
            writer.writerow([f"{x:.6f}", repr(float(v)), repr(float(pv))])


# ---------------------------------------------------------------------------
# Marcus-Lushnikov finite-rate coalescent


def additive_kernel(a: float, b: float) -> float:
    return a + b


def multiplicative_kernel(a: float, b: float) -> float:
    return a * b


_KERNELS = {"additive": additive_kernel, "multiplicative": multiplicative_kernel}


@dataclass(frozen=True)
class MLEvent:
    time: float
    i: int
    j: int


@dataclass
class MLTrajectory:
    masses0: np.ndarray
    events: list[MLEvent]

    def masses_at(self, s: float) -> np.ndarray:
        blocks = [float(x) for x in self.masses0]
        for ev in self.events:
            if ev.time > s:
                break
            lo, hi = (ev.i, ev.j) if ev.i < ev.j else (ev.j, ev.i)
            blocks[lo] += blocks[hi]
            del blocks[hi]
        return np.sort(np.asarray(blocks))[::-1]


def marcus_lushnikov(masses, kernel, rng, t_max: float, n_norm: float | None = None) -> MLTrajectory:
    """Event-driven Marcus-Lushnikov process.

    Blocks i, j merge at rate K(x_i, x_j) / n_norm; `kernel` is "additive",
    "multiplicative" or a callable.  Exact event-by-event simulation: total
    rate, exponential waiting time, pair chosen by its rate share.  Cost is
    O(blocks^2) per event, fine for the small systems used as oracles.
    """
    if isinstance(kernel, str):
        kernel = _KERNELS[kernel]
    masses0 = np.asarray(masses, dtype=float)
    if n_norm is None:
        n_norm = float(len(masses0))
    blocks = masses0.tolist()
    events: list[MLEvent] = []
    time = 0.0
    while len(blocks) > 1:
        m = len(blocks)
        rates = np.array(
            [kernel(blocks[i], blocks[j]) / n_norm for i in range(m) for j in range(i + 1, m)]
        )
        total = rates.sum()
        if total <= 0:
            break
        time += rng.exponential(1.0 / total)
        if time > t_max:
            break
        flat = int(rng.choice(len(rates), p=rates / total))
        # invert the (i, j), i < j enumeration
        i = 0
        offset = flat
        while offset >= m - 1 - i:
            offset -= m - 1 - i
            i += 1
        j = i + 1 + offset
        events.append(MLEvent(time, i, j))
        blocks[i] += blocks[j]
        del blocks[j]
    return MLTrajectory(masses0, events)


def ml_multiplicative_sizes(n: int, p: float, rng) -> np.ndarray:
    """Unit masses, multiplicative kernel, run to tau = -ln(1 - p).

    At that horizon the partition law coincides with the components of the
    Erdos-Renyi graph G(n, p).
    """
    if not (0.0 <= p < 1.0):
        raise ValueError("p must lie in [0, 1)")
    tau = -np.log1p(-p)
    # per-pair clock rate x_i * x_j with unit masses: each vertex pair is an
    # independent rate-1 clock, so by time tau an edge exists w.p. 1 - e^{-tau}
    traj = marcus_lushnikov(np.ones(n), "multiplicative", rng, t_max=tau, n_norm=1.0)
    return traj.masses_at(tau)


def ml_additive_sizes(n: int, s: float, rng) -> np.ndarray:
    """Masses 1/n, additive kernel, observed at time s; matches the forest
    process tree sizes (reported in units of 1/n)."""
    traj = marcus_lushnikov(np.full(n, 1.0 / n), "additive", rng, t_max=s, n_norm=1.0)
    return traj.masses_at(s)
