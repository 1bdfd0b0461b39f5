"""Exact certificates for facets, vertices and simpliciality.

A facet certificate is an affine functional vanishing on a line's points and
bounded below by a stored positive slack on every other point.  A vertex
certificate is the squared-distance functional of the vertex's planar point,
read on the first five coordinates.  Facet enumeration is a brute-force
search over all d-subsets in exact integer arithmetic.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm

from . import cover, hj, kernels
from .hj import Hypergraph
from .ratlin import AffinelyDependent, Hyperplane, affinely_independent, gram_functional, rat, rat_str
from .realize import Realization

FACET_SUBSET_CAP = 10**7


class CertificationError(RuntimeError):
    """A certificate could not be produced; ``stage`` and ``subject`` say where."""

    def __init__(self, stage: str, subject, detail: str):
        super().__init__(f"{stage} failed for {subject}: {detail}")
        self.stage = stage
        self.subject = subject
        self.detail = detail


class NotSupporting(ValueError):
    def __init__(self, index: int, value: Fraction):
        super().__init__(f"point {index} has value {rat_str(value)} <= 0")
        self.index = index
        self.value = value


class DuplicatePlanarPoints(ValueError):
    pass


class DegenerateConfiguration(ValueError):
    pass


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class FacetCertificate:
    pattern: str | None
    hyperplane: Hyperplane
    on_set: tuple[int, ...]
    min_slack: Fraction

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern,
            "hyperplane": self.hyperplane.to_json(),
            "on_set": list(self.on_set),
            "min_slack": rat_str(self.min_slack),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "FacetCertificate":
        return cls(
            payload.get("pattern"),
            Hyperplane.from_json(payload["hyperplane"]),
            tuple(int(i) for i in payload["on_set"]),
            rat(payload["min_slack"]),
        )


@dataclass(frozen=True)
class VertexCertificate:
    vertex: int
    functional: Hyperplane

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "functional": self.functional.to_json()}

    @classmethod
    def from_json(cls, payload: dict) -> "VertexCertificate":
        return cls(int(payload["vertex"]), Hyperplane.from_json(payload["functional"]))


@dataclass
class CertReport:
    all_lines_are_facets: bool
    convex_position: bool
    lines_certified: int
    line_count: int
    facet_certificates: list = field(default_factory=list)
    vertex_certificates: list = field(default_factory=list)
    simplicial: bool | None = None
    facet_hypergraph: Hypergraph | None = None
    tau_hj: int | None = None
    tau_hq: int | None = None
    lines_in_facet_list: bool | None = None

    def to_json(self) -> dict:
        out = {
            "all_lines_are_facets": self.all_lines_are_facets,
            "convex_position": self.convex_position,
            "lines_certified": self.lines_certified,
            "line_count": self.line_count,
            "min_line_slack": rat_str(min(c.min_slack for c in self.facet_certificates))
            if self.facet_certificates
            else None,
            "simplicial": self.simplicial,
            "tau_hj": self.tau_hj,
            "tau_hq": self.tau_hq,
            "lines_in_facet_list": self.lines_in_facet_list,
        }
        if self.facet_hypergraph is not None:
            out["facet_count"] = len(self.facet_hypergraph.edges)
            out["facets"] = [list(e) for e in self.facet_hypergraph.edges]
        return out


# -- facet certificates -----------------------------------------------------------


def facet_certificate_points(points, on_set, pattern=None) -> FacetCertificate:
    """Certify that ``on_set`` spans a facet of conv(points).

    The hyperplane through the on-set is oriented so that the first off-set
    point (by index) with a nonzero value is positive; every off-set point
    must then be strictly positive.
    """
    on_set = tuple(sorted(on_set))
    d = len(points[0])
    if len(on_set) != d:
        raise ValueError(f"a facet certificate in R^{d} needs exactly {d} points")
    h = Hyperplane.through([points[i] for i in on_set])
    members = set(on_set)
    values = {i: h.eval(p) for i, p in enumerate(points) if i not in members}
    if not values:
        raise ValueError("no points off the candidate facet")
    first = next((v for v in values.values() if v != 0), None)
    if first is not None and first < 0:
        h = h.flipped()
        values = {i: -v for i, v in values.items()}
    for i, v in values.items():
        if v <= 0:
            raise NotSupporting(i, v)
    return FacetCertificate(pattern, h, on_set, min(values.values()))


def facet_certificate(real: Realization, line, pattern=None) -> FacetCertificate:
    return facet_certificate_points(real.point_list(), line, pattern)


def line_certificates(real: Realization) -> list[FacetCertificate]:
    points = real.point_list()
    certs = []
    for pattern, verts in real.line_manifest:
        try:
            certs.append(facet_certificate_points(points, verts, pattern))
        except (AffinelyDependent, NotSupporting) as exc:
            raise CertificationError("facet_certificate", pattern, str(exc)) from exc
    return certs


# -- vertex certificates ----------------------------------------------------------


def _vertex_functional(center, d: int) -> Hyperplane:
    g = gram_functional(center)
    return Hyperplane.from_coefficients(g.c0, g.c + (Fraction(0),) * (d - 5), canonical=False)


def vertex_certificates_points(points, planar) -> list[VertexCertificate]:
    """Squared-distance functionals certifying every point as a vertex.

    ``planar[i]`` is the planar point whose Veronese image occupies the first
    five coordinates of ``points[i]``.  The functional of vertex i must read
    exactly c * |q - p_i|^2 at every q, with c its x^2 coefficient.
    """
    seen = {}
    for i, p in enumerate(planar):
        if p in seen:
            raise DuplicatePlanarPoints(f"points {seen[p]} and {i} share the planar point {p}")
        seen[p] = i
    d = len(points[0])
    certs = []
    for i, p in enumerate(planar):
        g = _vertex_functional(p, d)
        scale = g.c[0]
        for j, q in enumerate(planar):
            val = g.eval(points[j])
            dist2 = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
            if val != scale * dist2 or (j != i and val <= 0) or (j == i and val != 0):
                raise CertificationError("vertex_certificate", i, f"functional reads {val} at point {j}")
        certs.append(VertexCertificate(i, g))
    return certs


def vertex_certificates(real: Realization) -> list[VertexCertificate]:
    planar = [real.planar(w) for w in real.words()]
    try:
        return vertex_certificates_points(real.point_list(), planar)
    except DuplicatePlanarPoints as exc:
        raise CertificationError("vertex_certificate", "planar points", str(exc)) from exc


def certify_realization(real: Realization) -> dict:
    """Certificate bundle stored with a realization; raises CertificationError."""
    facets = line_certificates(real)
    verts = vertex_certificates(real)
    return {
        "facets": [c.to_json() for c in facets],
        "vertices": [c.to_json() for c in verts],
    }


def verify_certificates(real: Realization) -> list[str]:
    """Re-check a stored bundle against the coordinates; returns the problems found."""
    problems = []
    bundle = real.certificates
    if not bundle:
        return ["no certificates stored"]
    points = real.point_list()
    facets = [FacetCertificate.from_json(c) for c in bundle.get("facets", [])]
    by_pattern = {c.pattern: c for c in facets}
    for pattern, verts in real.line_manifest:
        c = by_pattern.get(pattern)
        if c is None:
            problems.append(f"line {pattern}: no certificate")
            continue
        if tuple(sorted(verts)) != c.on_set:
            problems.append(f"line {pattern}: certificate covers {c.on_set}, line is {verts}")
            continue
        if c.min_slack <= 0:
            problems.append(f"line {pattern}: nonpositive slack")
        on = set(c.on_set)
        if not affinely_independent([points[i] for i in c.on_set]):
            problems.append(f"line {pattern}: points affinely dependent")
        lowest = None
        for i, p in enumerate(points):
            v = c.hyperplane.eval(p)
            if i in on:
                if v != 0:
                    problems.append(f"line {pattern}: value {rat_str(v)} at on-set point {i}")
            else:
                lowest = v if lowest is None else min(lowest, v)
                if v < c.min_slack:
                    problems.append(f"line {pattern}: value {rat_str(v)} below slack at point {i}")
        if lowest is not None and lowest != c.min_slack:
            problems.append(f"line {pattern}: stored slack is not attained")
    verts = [VertexCertificate.from_json(c) for c in bundle.get("vertices", [])]
    if sorted(c.vertex for c in verts) != list(range(len(points))):
        problems.append("vertex certificates do not cover every point")
    for c in verts:
        for j, q in enumerate(points):
            v = c.functional.eval(q)
            if (j == c.vertex) != (v == 0) or v < 0:
                problems.append(f"vertex {c.vertex}: functional reads {rat_str(v)} at point {j}")
    return problems


# -- brute-force facet enumeration ------------------------------------------------


def homogeneous_integer_rows(points) -> list[list[int]]:
    """Rows (L*p, L) with L the lcm of every coordinate denominator."""
    scale = 1
    for p in points:
        for x in p:
            scale = lcm(scale, x.denominator)
    return [[(x * scale).numerator for x in p] + [scale] for p in points]


def _chunks(npts: int, d: int, parts: int) -> list[tuple[int, int]]:
    """Split first indices into contiguous ranges of similar subtree size."""
    last = npts - d + 1
    weights = [comb(npts - 1 - i, d - 1) for i in range(last)]
    total = sum(weights)
    out, lo, acc = [], 0, 0
    for i, w in enumerate(weights):
        acc += w
        if acc * parts >= total * (len(out) + 1) and len(out) < parts - 1:
            out.append((lo, i + 1))
            lo = i + 1
    out.append((lo, last))
    return [c for c in out if c[0] < c[1]]


def _enumerate_chunk(args):
    rows, d, lo, hi = args
    return kernels.enumerate_facets(rows, d, lo, hi)


def enumerate_facets_points(points, cap: int = FACET_SUBSET_CAP, threads: int = 1):
    """All facets of conv(points) by brute force over d-subsets.

    Returns ``(facet_sets, hyperplanes, simplicial)``; facets are listed in
    the order of their lexicographically first spanning subset, each with its
    outward-negative hyperplane (positive off the facet).  ``threads`` only
    changes how the subsets are scheduled, never the result.
    """
    points = [tuple(Fraction(x) for x in p) for p in points]
    npts, d = len(points), len(points[0])
    if comb(npts, d) > cap:
        raise CapExceeded(f"C({npts}, {d}) = {comb(npts, d)} subsets exceed the cap {cap}")
    rows = homogeneous_integer_rows(points)
    if threads > 1:
        jobs = [(rows, d, lo, hi) for lo, hi in _chunks(npts, d, threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_enumerate_chunk, jobs))
    else:
        parts = [kernels.enumerate_facets(rows, d, 0, npts)]
    order, normals, seen = [], [], set()
    for zs, ns, degenerate in parts:
        if degenerate:
            raise DegenerateConfiguration("the points do not span the ambient space")
        for z, nv in zip(zs, ns):
            if z not in seen:
                seen.add(z)
                order.append(z)
                normals.append(nv)
    if not order:
        raise DegenerateConfiguration("the points do not span the ambient space")
    hyperplanes = [Hyperplane.from_coefficients(nv[-1], nv[:-1], canonical=False) for nv in normals]
    simplicial = all(len(z) == d for z in order)
    return order, hyperplanes, simplicial


def enumerate_facets(real: Realization, cap: int = FACET_SUBSET_CAP, threads: int = 1):
    """Facet hypergraph over word indices, and whether every facet is a simplex."""
    order, _, simplicial = enumerate_facets_points(real.point_list(), cap, threads)
    return Hypergraph(vertex_count=len(real.coordinates), edges=order, d=real.d, n=real.n), simplicial


# -- end-to-end report ----------------------------------------------------------


def certify_theorem(
    real: Realization,
    hjg: Hypergraph,
    full_hull: bool = False,
    threads: int = 1,
    cap: int = FACET_SUBSET_CAP,
) -> CertReport:
    if (hjg.d, hjg.n) != (real.d, real.n):
        raise ValueError(f"realization is for (d, n) = {(real.d, real.n)}, hypergraph for {(hjg.d, hjg.n)}")
    if hjg.vertex_count != len(real.coordinates):
        raise ValueError("hypergraph and realization disagree on the vertex count")
    points = real.point_list()
    patterns = hjg.patterns or [None] * len(hjg.edges)
    facet_certs = []
    for pattern, edge in zip(patterns, hjg.edges):
        try:
            facet_certs.append(facet_certificate_points(points, edge, pattern))
        except (AffinelyDependent, NotSupporting) as exc:
            raise CertificationError("facet_certificate", pattern or edge, str(exc)) from exc
    vert_certs = vertex_certificates(real)
    report = CertReport(
        all_lines_are_facets=len(facet_certs) == len(hjg.edges),
        convex_position=len(vert_certs) == len(points),
        lines_certified=len(facet_certs),
        line_count=len(hjg.edges),
        facet_certificates=facet_certs,
        vertex_certificates=vert_certs,
    )
    if full_hull:
        facets, simplicial = enumerate_facets(real, cap, threads)
        report.facet_hypergraph = facets
        report.simplicial = simplicial
        facet_sets = set(facets.edges)
        report.lines_in_facet_list = all(e in facet_sets for e in hjg.edges)
        report.tau_hj = cover.tau_exact(hjg).tau
        report.tau_hq = cover.tau_exact(facets).tau
        if report.tau_hq < report.tau_hj:
            raise CertificationError(
                "transversal_monotonicity", (real.d, real.n), f"tau(H(Q)) = {report.tau_hq} < tau(HJ) = {report.tau_hj}"
            )
    return report
