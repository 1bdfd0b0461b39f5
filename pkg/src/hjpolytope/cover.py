"""Transversal number, transversal ratio and weak chromatic number.

Each exact solver has a brute-force twin used as an oracle in the tests.
Witness choice is deterministic: ties always go to the lowest vertex index.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import kernels
from .hj import Hypergraph

BRUTEFORCE_CAP = 30
CHI_ORACLE_CAP = 12


class CapExceeded(ValueError):
    pass


class SizeOneEdge(ValueError):
    """A hypergraph with a singleton edge has no weak coloring."""


@dataclass(frozen=True)
class TransversalResult:
    tau: int
    witness: tuple[int, ...]
    exact: bool = True
    bounds: tuple[int, int] | None = None

    def __post_init__(self):
        if self.bounds is None:
            object.__setattr__(self, "bounds", (self.tau, self.tau))

    def to_json(self) -> dict:
        return {
            "tau": self.tau,
            "witness": list(self.witness),
            "exact": self.exact,
            "bounds": list(self.bounds),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TransversalResult":
        return cls(
            int(payload["tau"]),
            tuple(int(v) for v in payload["witness"]),
            bool(payload["exact"]),
            tuple(int(b) for b in payload["bounds"]),
        )


@dataclass(frozen=True)
class ColoringResult:
    chi: int
    colors: dict[int, int]

    def to_json(self) -> dict:
        return {"chi": self.chi, "coloring": [self.colors[v] for v in sorted(self.colors)]}


def _check_indices(h: Hypergraph, s) -> frozenset:
    s = frozenset(s)
    for v in s:
        if not 0 <= v < h.vertex_count:
            raise ValueError(f"vertex {v} outside [0, {h.vertex_count})")
    return s


def check_transversal(h: Hypergraph, s) -> bool:
    s = _check_indices(h, s)
    return all(any(v in s for v in e) for e in h.edges)


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def tau_bruteforce(h: Hypergraph, cap: int = BRUTEFORCE_CAP) -> TransversalResult:
    if h.vertex_count > cap:
        raise CapExceeded(f"{h.vertex_count} vertices exceed the brute-force cap {cap}")
    masks = h.edge_masks()
    for k in range(h.vertex_count + 1):
        for combo in itertools.combinations(range(h.vertex_count), k):
            m = sum(1 << v for v in combo)
            if all(e & m for e in masks):
                return TransversalResult(k, combo)
    raise AssertionError("the full vertex set is always a transversal")


def deadline_after(seconds: float | None) -> Callable[[], bool] | None:
    """Wall-clock budget as a callable polled by the solvers."""
    if seconds is None:
        return None
    stop = time.monotonic() + seconds
    return lambda: time.monotonic() >= stop


def tau_exact(h: Hypergraph, expired: Callable[[], bool] | None = None) -> TransversalResult:
    """Branch and bound on a smallest uncovered edge.

    Lower bounds come from greedy packings of disjoint uncovered edges, the
    initial incumbent from the greedy hitting set.  If ``expired`` fires, the
    best transversal found so far is returned with ``exact=False`` and
    certified ``bounds``.
    """
    masks = h.edge_masks()
    size, mask, exact, lo = kernels.hitting_set(h.vertex_count, masks, expired)
    return TransversalResult(size, _mask_to_tuple(mask), exact, (lo, size))


def rho(h: Hypergraph, tau: int | None = None) -> Fraction:
    if h.vertex_count < 1:
        raise ValueError("transversal ratio of an empty vertex set")
    if tau is None:
        tau = tau_exact(h).tau
    return Fraction(tau, h.vertex_count)


# -- weak coloring ------------------------------------------------------------


def is_weak_coloring(h: Hypergraph, colors) -> bool:
    return all(len({colors[v] for v in e}) >= 2 for e in h.edges)


def _require_no_singletons(h: Hypergraph) -> None:
    for e in h.edges:
        if len(e) < 2:
            raise SizeOneEdge(f"edge {e} has a single vertex")


def _k_colorable(h: Hypergraph, k: int) -> list[int] | None:
    nv = h.vertex_count
    closing = [[] for _ in range(nv)]
    for e in h.edges:
        closing[e[-1]].append(e)
    colors = [0] * nv

    def place(v: int, used: int) -> bool:
        if v == nv:
            return True
        top = 1 if v == 0 else min(k, used + 1)
        for c in range(1, top + 1):
            colors[v] = c
            if all(any(colors[u] != c for u in e) for e in closing[v]):
                if place(v + 1, max(used, c)):
                    return True
        colors[v] = 0
        return False

    return list(colors) if place(0, 0) else None


def chi_weak(h: Hypergraph) -> ColoringResult:
    """Least k admitting a coloring with no monochromatic edge."""
    _require_no_singletons(h)
    if h.vertex_count == 0:
        return ColoringResult(0, {})
    for k in range(1, h.vertex_count + 1):
        found = _k_colorable(h, k)
        if found is not None:
            return ColoringResult(k, dict(enumerate(found)))
    raise AssertionError("distinct colors on every vertex always work")


def chi_bruteforce(h: Hypergraph, cap: int = CHI_ORACLE_CAP) -> int:
    _require_no_singletons(h)
    if h.vertex_count > cap:
        raise CapExceeded(f"{h.vertex_count} vertices exceed the exhaustive cap {cap}")
    if h.vertex_count == 0:
        return 0
    for k in range(1, h.vertex_count + 1):
        for colors in itertools.product(range(1, k + 1), repeat=h.vertex_count):
            if is_weak_coloring(h, colors):
                return k
    raise AssertionError("unreachable")


def coloring_bound_holds(h: Hypergraph, tau: int, chi: int) -> bool:
    """Whether tau/|V| <= (chi - 1)/chi, compared exactly."""
    if chi == 0:
        return tau == 0
    return Fraction(tau, h.vertex_count) <= Fraction(chi - 1, chi)
