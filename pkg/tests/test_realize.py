import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjpolytope import hj
from hjpolytope.ratlin import Surd, affinely_independent, surd_sign
from hjpolytope.realize import (
    DegenerateSize,
    DrawingConfig,
    Realization,
    SurdConfiguration,
    base_drawing,
    choose_epsilon,
    epsilon_from_deltas,
    lift,
    lift_defects,
    perturbed_quadratic,
    realize_pipeline,
    snap,
    stream,
    surd_perturb,
    surd_stage_signs,
    veronese,
)


def test_base_drawing_point_example():
    drawing = base_drawing(DrawingConfig(3, 2))
    assert drawing.vectors == [(1, 4), (1, 16)]
    assert drawing.points[(2, 3)] == (5, 56)


def test_base_drawing_line_example():
    drawing = base_drawing(DrawingConfig(3, 2))
    a, b = drawing.lines[(1, "*")]
    assert a == 16
    members = drawing.line_points((1, "*"))
    assert members == [drawing.points[(1, k)] for k in (1, 2, 3)]
    assert all(y == a * x + b for x, y in members)


@pytest.mark.parametrize("d,n", [(3, 2), (5, 2), (6, 2), (5, 3), (4, 3)])
def test_drawing_conditions(d, n):
    drawing = base_drawing(DrawingConfig(d, n))
    assert all(x > 0 for x, _ in drawing.points.values())
    assert len(set(drawing.points.values())) == d**n
    for p in drawing.lines:
        members = hj.line_of(p, d)
        a, b = drawing.lines[p]
        for w, (x, y) in drawing.points.items():
            assert (y == a * x + b) == (w in members)


def test_epsilon_toy_line():
    # line y = 0 and the point (1, -1): delta = -1
    eps = epsilon_from_deltas([(F(-1), F(1))])
    assert eps == F(1, 8)
    assert F(-1) ** 2 > 4 * eps * 1
    value = perturbed_quadratic(F(0), F(0), eps, F(1), Surd(-1, 1, eps))
    assert surd_sign(value) == 1


def test_epsilon_without_negative_deltas():
    assert epsilon_from_deltas([(F(2), F(3)), (F(1, 5), F(1))]) == 1
    assert epsilon_from_deltas([]) == 1


def test_epsilon_is_capped_at_one():
    assert epsilon_from_deltas([(F(-100), F(1))]) == 1


def test_surd_perturb_examples():
    drawing = base_drawing(DrawingConfig(3, 2))
    cfg = surd_perturb(drawing, 1)
    assert cfg.points[(1, 1)] == (F(2), Surd(20, 1, 2))
    toy = SurdConfiguration(F(1), {(1,): (F(4), Surd(0, 1, 4))})
    assert toy.points[(1,)][1] == Surd(2)
    assert Surd(-1, 1, F(1, 8) * 1) == Surd(F(-1), F(1), F(1, 8))


@pytest.mark.parametrize("d,n", [(3, 2), (5, 2), (6, 2)])
def test_surd_stage_signs(d, n):
    drawing = base_drawing(DrawingConfig(d, n))
    surds = surd_perturb(drawing, choose_epsilon(drawing))
    irrational = sum(1 for _, y in surds.points.values() if not y.is_rational)
    assert irrational > 0
    for (p, w), s in surd_stage_signs(drawing, surds).items():
        assert s == (0 if w in hj.line_of(p, d) else 1)


@settings(max_examples=300, deadline=None)
@given(
    st.fractions(min_value=-20, max_value=20, max_denominator=30).filter(lambda x: x != 0),
    st.fractions(min_value=F(1, 100), max_value=5, max_denominator=100),
    st.fractions(min_value=F(1, 10), max_value=30, max_denominator=30),
)
def test_delta_rule(delta, eps, x):
    value = Surd(delta * delta, 2 * delta, eps * x)
    assert (surd_sign(value) == 1) == (delta > 0 or delta * delta > 4 * eps * x)


def test_veronese_examples():
    assert veronese((1, 2)) == (1, 2, 4, 1, 2)
    assert veronese((0, 0)) == (0, 0, 0, 0, 0)
    assert veronese((2, -3)) == (4, -6, 9, 2, -3)


def test_snap_rational_surd_is_exact_without_jitter():
    cfg = SurdConfiguration(F(1), {(1,): (F(4), Surd(F(1, 3), 1, F(4)))})
    assert snap(cfg, 16, 0, jitter=False) == {(1,): (F(4), F(7, 3))}


def test_snap_sqrt2_within_precision():
    cfg = SurdConfiguration(F(1), {(1,): (F(2), Surd(0, 1, 2))})
    y = snap(cfg, 16, 0, jitter=False)[(1,)][1]
    tol = F(1, 2**16)
    assert y.denominator & (y.denominator - 1) == 0
    assert (y - tol) ** 2 <= 2 <= (y + tol) ** 2


def test_snap_jitter_separates_equal_values():
    cfg = SurdConfiguration(F(1), {(1,): (F(2), Surd(0, 1, 2)), (2,): (F(2), Surd(0, 1, 2))})
    out = snap(cfg, 32, 5)
    assert out[(1,)] != out[(2,)]
    assert out[(1,)][1] != out[(2,)][1]
    exact = snap(cfg, 32, 5, jitter=False)[(1,)][1]
    for w in out:
        assert abs(out[w][1] - exact) <= F(1, 2 ** 40)
        assert abs(out[w][0] - 2) <= F(1, 2 ** 40)


def _conic_line_points(d):
    """A fake d-point line whose planar points share one conic."""
    return {(k,): veronese((F(k), F(k * k))) for k in range(1, d + 1)}


def test_lift_identity_at_five():
    pts = _conic_line_points(5)
    assert lift(pts, 5, seed=1, precision_bits=64) == pts


def test_lift_detects_zero_z():
    pts = _conic_line_points(6)
    zero = {w: p + (F(0),) for w, p in pts.items()}
    line = [sorted(pts)]
    assert lift_defects(zero, line) == [0]
    lifted = lift(pts, 6, seed=1, precision_bits=64, line_words=line)
    assert lift_defects(lifted, line) == []
    assert all(abs(p[5]) <= F(1, 256) for p in lifted.values())


def test_lift_makes_every_line_independent_at_6_2(real62):
    points = real62.point_list()
    for _, verts in real62.line_manifest:
        assert affinely_independent([points[i] for i in verts])


def test_pipeline_5_2(real52):
    assert len(real52.coordinates) == 25
    assert len(real52.line_manifest) == 11
    assert real52.certificates is not None and len(real52.certificates["facets"]) == 11


def test_pipeline_6_2(real62):
    assert len(real62.coordinates) == 36
    assert all(len(p) == 6 for p in real62.coordinates.values())
    assert len(real62.line_manifest) == 13 == 7**2 - 6**2


@pytest.mark.parametrize("d,n", [(5, 1), (6, 1)])
def test_pipeline_rejects_degenerate_sizes(d, n):
    with pytest.raises(DegenerateSize):
        realize_pipeline(DrawingConfig(d, n))


def test_pipeline_rejects_small_d():
    with pytest.raises(ValueError):
        realize_pipeline(DrawingConfig(3, 2))


def test_pipeline_does_not_hit_precision_cap(real52, real62):
    assert real52.precision_bits < 2048 and real62.precision_bits < 2048


def test_coordinates_reproduce_veronese(real52, real62):
    for real in (real52, real62):
        for c in real.coordinates.values():
            assert c[:5] == veronese((c[3], c[4]))


def test_pipeline_is_deterministic(real52):
    again = realize_pipeline(DrawingConfig(5, 2, seed=1))
    assert again.dumps() == real52.dumps()
    other = realize_pipeline(DrawingConfig(5, 2, seed=2))
    assert other.dumps() != real52.dumps()


def test_epsilon_override_that_breaks_support_exhausts_precision():
    from hjpolytope.realize import PrecisionExhausted

    cfg = DrawingConfig(5, 2, epsilon_override=F(10**6), max_precision=128)
    with pytest.raises(PrecisionExhausted):
        realize_pipeline(cfg)


def test_realization_json_round_trip(real52):
    again = Realization.from_json(real52.to_json())
    assert again == real52
    assert again.dumps() == real52.dumps()


def test_stream_is_reproducible():
    assert stream(3, "a", 1).random() == stream(3, "a", 1).random()
    assert stream(3, "a", 1).random() != stream(3, "a", 2).random()
