import copy
from fractions import Fraction as F

import pytest

from hjpolytope import certify, hj
from hjpolytope.certify import (
    CertificationError,
    DuplicatePlanarPoints,
    NotSupporting,
    certify_theorem,
    enumerate_facets_points,
    facet_certificate_points,
    verify_certificates,
    vertex_certificates_points,
)
from hjpolytope.ratlin import affinely_independent
from hjpolytope.realize import Realization, veronese

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
SIMPLEX3 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
CUBE = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]


def test_square_edge_certificate():
    cert = facet_certificate_points(SQUARE, (0, 1))
    assert cert.min_slack == 1
    assert [cert.hyperplane.eval(p) for p in SQUARE] == [0, 0, 1, 1]


def test_square_diagonal_is_not_a_facet():
    with pytest.raises(NotSupporting):
        facet_certificate_points(SQUARE, (0, 2))


def test_square_facets():
    order, planes, simplicial = enumerate_facets_points(SQUARE)
    assert sorted(order) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert simplicial
    for z, h in zip(order, planes):
        for i, p in enumerate(SQUARE):
            v = h.eval(p)
            assert (v == 0) == (i in z) and v >= 0


def test_simplex_facets():
    order, _, simplicial = enumerate_facets_points(SIMPLEX3)
    assert sorted(order) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert simplicial


def test_cube_is_not_simplicial():
    order, _, simplicial = enumerate_facets_points(CUBE)
    assert len(order) == 6
    assert all(len(z) == 4 for z in order)
    assert not simplicial


def test_flat_configuration_is_rejected():
    with pytest.raises(certify.DegenerateConfiguration):
        enumerate_facets_points([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_subset_cap():
    with pytest.raises(certify.CapExceeded):
        enumerate_facets_points(CUBE, cap=10)


def test_vertex_certificate_distance_example():
    planar = [(F(0), F(0)), (F(1), F(1))]
    points = [veronese(p) for p in planar]
    certs = vertex_certificates_points(points, planar)
    g = certs[0].functional
    assert g.eval(points[0]) == 0
    assert g.eval(points[1]) == 2 * g.c[0]


def test_vertex_certificate_rejects_duplicates():
    planar = [(F(0), F(0)), (F(0), F(0))]
    with pytest.raises(DuplicatePlanarPoints):
        vertex_certificates_points([veronese(p) for p in planar], planar)


def test_lines_at_5_2(real52):
    h = hj.hj_hypergraph(5, 2)
    report = certify_theorem(real52, h)
    assert report.all_lines_are_facets and report.convex_position
    assert report.lines_certified == report.line_count == 11
    assert len(report.vertex_certificates) == 25
    points = real52.point_list()
    for c in report.facet_certificates:
        assert c.min_slack > 0
        assert affinely_independent([points[i] for i in c.on_set])


def test_non_line_subset_fails_at_5_2(real52, hull52):
    facets, _ = hull52
    points = real52.point_list()
    faces = set(facets.edges)
    # the first five indices 0..4 form line (1,*); shift one vertex to get a non-facet
    candidates = [(0, 1, 2, 3, 6), (0, 6, 12, 18, 23), (0, 1, 2, 3, 24)]
    bad = next(c for c in candidates if c not in faces)
    with pytest.raises((NotSupporting, ValueError)):
        facet_certificate_points(points, bad)


def test_mismatched_dimensions(real52):
    with pytest.raises(ValueError):
        certify_theorem(real52, hj.hj_hypergraph(6, 2))


def test_stored_certificates_verify(real52, real62):
    assert verify_certificates(real52) == []
    assert verify_certificates(real62) == []


def test_tampered_coordinates_are_caught(real52):
    payload = copy.deepcopy(real52.to_json())
    bad = Realization.from_json(payload)
    w = bad.words()[7]
    c = list(bad.coordinates[w])
    c[4] += F(1, 3)
    bad.coordinates[w] = tuple(c)
    assert verify_certificates(bad)


def test_tampered_slack_is_caught(real52):
    payload = copy.deepcopy(real52.to_json())
    bad = Realization.from_json(payload)
    bad.certificates["facets"][0]["min_slack"] = "0"
    assert verify_certificates(bad)


def test_missing_certificates_reported(real52):
    bare = Realization.from_json(copy.deepcopy(real52.to_json()))
    bare.certificates = None
    assert verify_certificates(bare) == ["no certificates stored"]


def test_full_hull_at_5_2(real52, hull52):
    facets, simplicial = hull52
    assert simplicial
    lines = hj.hj_hypergraph(5, 2)
    assert set(lines.edges) <= set(facets.edges)


@pytest.mark.slow
def test_threads_do_not_change_the_hull(real52, hull52):
    facets, simplicial = certify.enumerate_facets(real52, threads=2)
    assert facets.edges == hull52[0].edges and simplicial == hull52[1]


def test_threads_on_cube():
    assert enumerate_facets_points(CUBE, threads=2)[0] == enumerate_facets_points(CUBE)[0]


def test_vertex_certificate_failure_is_reported():
    planar = [(F(0), F(0)), (F(1), F(1))]
    points = [veronese(planar[0]), veronese((F(2), F(2)))]
    with pytest.raises(CertificationError):
        vertex_certificates_points(points, planar)
