"""Composite Gauss-Legendre panel quadrature with refinement verification.

Panel edges are chosen by the caller, typically through ``edges_by_rate``
so that no panel holds more than a fixed phase budget of the integrand's
oscillation.  ``integrate_verified`` re-runs the rule on split panels and
raises instead of returning a value that failed to settle.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import RefinementError

__all__ = [
    "edges_by_rate",
    "edges_uniform",
    "integrate",
    "integrate_verified",
    "panel_nodes",
    "split_edges",
]


@lru_cache(maxsize=None)
def _gl(n: int):
    return np.polynomial.legendre.leggauss(n)


def panel_nodes(edges, npt: int = 16):
    """Nodes and weights of the composite rule over consecutive edges."""
    edges = np.asarray(edges, dtype=float)
    x0, w0 = _gl(npt)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b) + half * x0[None, :]).ravel()
    w = (half * w0[None, :]).ravel()
    return x, w


def edges_uniform(a: float, b: float, max_step: float):
    n = max(1, int(math.ceil((b - a) / max_step)))
    return np.linspace(a, b, n + 1)


def edges_by_rate(
    a: float,
    b: float,
    rate: Callable[[np.ndarray], np.ndarray],
    max_step: float,
    rad_per_panel: float = 12.0,
):
    """Panel edges on [a, b] limiting both width and accumulated phase.

    ``rate`` maps positions to a local phase rate in radians per unit
    length; each panel then holds at most ``rad_per_panel`` radians.
    """
    if b <= a:
        return np.array([a, b])
    probe = np.linspace(a, b, 4097)
    r = np.maximum(np.asarray(rate(probe), dtype=float), 0.0)
    # accumulated radians along the probe grid, then equal-phase splits
    acc = np.concatenate([[0.0], np.cumsum(0.5 * (r[1:] + r[:-1]) * np.diff(probe))])
    n_phase = int(math.ceil(acc[-1] / rad_per_panel))
    n_width = int(math.ceil((b - a) / max_step))
    n = max(n_phase, n_width, 1)
    targets = np.linspace(0.0, acc[-1], n + 1)
    by_phase = np.interp(targets, acc, probe)
    by_width = np.linspace(a, b, n + 1)
    edges = np.union1d(by_phase, by_width)
    return edges


def split_edges(edges):
    """Insert the midpoint of every panel (the refinement step)."""
    edges = np.asarray(edges, dtype=float)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return np.union1d(edges, mids)


def integrate(f, edges, npt: int = 16) -> complex:
    x, w = panel_nodes(edges, npt)
    return complex(np.sum(np.asarray(f(x)) * w))


def integrate_verified(
    f,
    edges,
    *,
    rtol: float,
    floor: float,
    npt: int = 16,
    label: str = "",
) -> complex:
    """Integrate, then re-integrate on split panels; raise if they disagree.

    The comparison scale is max(|finer value|, floor): the floor keeps a
    cancellation-dominated integral (tiny value, O(1) integrand) from
    demanding impossible relative accuracy.
    """
    coarse = integrate(f, edges, npt)
    finer = integrate(f, split_edges(edges), npt)
    err = abs(coarse - finer)
    scale = max(abs(finer), floor)
    if err > rtol * scale:
        raise RefinementError(
            f"quadrature failed to settle{': ' + label if label else ''}: "
            f"coarse={coarse:.6e}, refined={finer:.6e}, "
            f"diff={err:.3e} > {rtol:.1e} * {scale:.3e} "
            f"({len(edges) - 1} panels)"
        )
    return finer
