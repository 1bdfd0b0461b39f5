import itertools

import pytest

from hjpolytope import hj


def test_substitute_examples():
    assert hj.substitute((2, "*"), 3, 3) == (2, 3)
    assert hj.substitute(("*", "*"), 1, 3) == (1, 1)
    assert hj.substitute(("*", 5, "*"), 2, 5) == (2, 5, 2)
    with pytest.raises(ValueError):
        hj.substitute((1, "*"), 4, 3)
    with pytest.raises(ValueError):
        hj.substitute((1, 2), 1, 3)


def test_line_of_examples():
    assert hj.line_of(("*", "*"), 3) == {(1, 1), (2, 2), (3, 3)}
    assert hj.line_of(("*",), 2) == {(1,), (2,)}
    assert hj.line_of((1, "*"), 3) == {(1, 1), (1, 2), (1, 3)}


def test_enumerate_lines_examples():
    assert len(hj.enumerate_lines(3, 2)) == 7
    assert len(hj.enumerate_lines(2, 1)) == 1
    assert len(hj.enumerate_lines(5, 2)) == 11


def test_enumerate_lines_cap():
    with pytest.raises(hj.CapExceeded):
        hj.enumerate_lines(9, 9, cap=1000)


def _brute_lines(d, n):
    """Every d-subset of words that agrees off a nonempty set of positions."""
    lines = set()
    for tau in itertools.product(list(range(1, d + 1)) + ["*"], repeat=n):
        if "*" in tau:
            lines.add(frozenset(tuple(k if s == "*" else s for s in tau) for k in range(1, d + 1)))
    return lines


@pytest.mark.parametrize("d", range(2, 6))
@pytest.mark.parametrize("n", range(1, 5))
def test_line_count_formula(d, n):
    lines = hj.enumerate_lines(d, n)
    assert len(lines) == (d + 1) ** n - d**n == hj.line_count(d, n)
    assert len(set(lines)) == len(lines)
    assert set(lines) == _brute_lines(d, n)
    for line in lines:
        assert len(line) == d
        assert all(len(w) == n and all(1 <= a <= d for a in w) for w in line)


def test_hj_hypergraph_examples():
    h = hj.hj_hypergraph(2, 1)
    assert (h.vertex_count, h.edges) == (2, [(0, 1)])
    h = hj.hj_hypergraph(3, 2)
    assert h.vertex_count == 9 and len(h.edges) == 7 and all(len(e) == 3 for e in h.edges)
    h = hj.hj_hypergraph(5, 2)
    assert h.vertex_count == 25 and len(h.edges) == 11 and all(len(e) == 5 for e in h.edges)


def test_word_index_bijection():
    words = hj.all_words(3, 3)
    assert [hj.word_index(w, 3) for w in words] == list(range(27))
    assert all(hj.index_word(hj.word_index(w, 3), 3, 3) == w for w in words)
    assert hj.word_index((1, 1), 3) == 0 and hj.word_index((2, 1), 3) == 3


@pytest.mark.parametrize("d,n", [(2, 3), (3, 3), (4, 2), (3, 4), (4, 4)])
def test_lines_through_word(d, n):
    patterns = hj.enumerate_patterns(d, n)
    for w in hj.all_words(d, n):
        expected = sum(2 ** w.count(v) - 1 for v in range(1, d + 1))
        assert hj.lines_through(w, patterns, d) == expected


def test_keys_round_trip():
    assert hj.pattern_key((2, "*"), 3) == "2*"
    assert hj.parse_pattern_key("2*", 3) == (2, "*")
    assert hj.word_key((10, 3), 12) == "10,3"
    assert hj.parse_word_key("10,3", 12) == (10, 3)
    assert hj.parse_pattern_key("*,11", 12) == ("*", 11)


def test_hypergraph_json_round_trip():
    h = hj.hj_hypergraph(3, 2)
    payload = h.to_json()
    assert payload["patterns"][0] == "1*"
    assert hj.Hypergraph.from_json(payload) == h


def test_hypergraph_invariants():
    with pytest.raises(ValueError):
        hj.Hypergraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        hj.Hypergraph(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        hj.Hypergraph(2, [()])
