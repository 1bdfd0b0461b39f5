"""Words, line patterns, combinatorial lines and the Hales-Jewett hypergraph.

A word of length n over [d] is a tuple of ints in 1..d.  A line pattern is
the same with ``STAR`` (the string ``"*"``) allowed and required at least
once.  Vertex indices use base-d ranking: letter i is digit i-1 and the first
position is the most significant digit.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

STAR = "*"
DEFAULT_LINE_CAP = 2_000_000

Word = tuple
LinePattern = tuple


class CapExceeded(ValueError):
    pass


def _check_dn(d: int, n: int) -> None:
    if d < 2 or n < 1:
        raise ValueError(f"need d >= 2 and n >= 1, got d={d}, n={n}")


def validate_word(word: Sequence[int], d: int) -> Word:
    word = tuple(word)
    if not word or any(not isinstance(a, int) or not 1 <= a <= d for a in word):
        raise ValueError(f"{word!r} is not a word over [{d}]")
    return word


def validate_pattern(pattern: Sequence, d: int) -> LinePattern:
    pattern = tuple(pattern)
    if STAR not in pattern:
        raise ValueError(f"pattern {pattern!r} has no wildcard")
    for s in pattern:
        if s != STAR and (not isinstance(s, int) or not 1 <= s <= d):
            raise ValueError(f"pattern {pattern!r} has a symbol outside [{d}] and '*'")
    return pattern


def substitute(pattern: Sequence, k: int, d: int) -> Word:
    pattern = validate_pattern(pattern, d)
    if not 1 <= k <= d:
        raise ValueError(f"letter {k} outside [1, {d}]")
    return tuple(k if s == STAR else s for s in pattern)


def line_of(pattern: Sequence, d: int) -> frozenset:
    return frozenset(substitute(pattern, k, d) for k in range(1, d + 1))


def line_words(pattern: Sequence, d: int) -> list[Word]:
    """The words of a line in wildcard order k = 1..d."""
    return [substitute(pattern, k, d) for k in range(1, d + 1)]


def line_count(d: int, n: int) -> int:
    return (d + 1) ** n - d**n


def enumerate_patterns(d: int, n: int, cap: int = DEFAULT_LINE_CAP) -> list[LinePattern]:
    """All line patterns in lexicographic order, letters before the wildcard."""
    _check_dn(d, n)
    if (d + 1) ** n > cap:
        raise CapExceeded(f"(d+1)^n = {(d + 1) ** n} exceeds the cap {cap}")
    symbols = list(range(1, d + 1)) + [STAR]
    return [p for p in itertools.product(symbols, repeat=n) if STAR in p]


def enumerate_lines(d: int, n: int, cap: int = DEFAULT_LINE_CAP) -> list[frozenset]:
    return [line_of(p, d) for p in enumerate_patterns(d, n, cap)]


def word_index(word: Sequence[int], d: int) -> int:
    idx = 0
    for a in word:
        idx = idx * d + (a - 1)
    return idx


def index_word(index: int, d: int, n: int) -> Word:
    if not 0 <= index < d**n:
        raise ValueError(f"index {index} out of range for [{d}]^{n}")
    digits = []
    for _ in range(n):
        index, r = divmod(index, d)
        digits.append(r + 1)
    return tuple(reversed(digits))


def all_words(d: int, n: int) -> list[Word]:
    """Every word of [d]^n, in vertex-index order."""
    return [tuple(w) for w in itertools.product(range(1, d + 1), repeat=n)]


def _sep(d: int) -> str:
    return "," if d > 9 else ""


def word_key(word: Sequence[int], d: int) -> str:
    return _sep(d).join(str(a) for a in word)


def pattern_key(pattern: Sequence, d: int) -> str:
    return _sep(d).join(str(s) for s in pattern)


def parse_word_key(key: str, d: int) -> Word:
    parts = key.split(",") if d > 9 else list(key)
    return validate_word([int(p) for p in parts], d)


def parse_pattern_key(key: str, d: int) -> LinePattern:
    parts = key.split(",") if d > 9 else list(key)
    return validate_pattern([STAR if p == STAR else int(p) for p in parts], d)


@dataclass
class Hypergraph:
    vertex_count: int
    edges: list[tuple[int, ...]]
    d: int | None = None
    n: int | None = None
    patterns: list[str] | None = field(default=None)

    def __post_init__(self):
        self.edges = [tuple(sorted(set(e))) for e in self.edges]
        seen = set()
        for e in self.edges:
            if not e:
                raise ValueError("hypergraph edges must be nonempty")
            if e[0] < 0 or e[-1] >= self.vertex_count:
                raise ValueError(f"edge {e} has a vertex outside [0, {self.vertex_count})")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        if self.patterns is not None and len(self.patterns) != len(self.edges):
            raise ValueError("pattern manifest does not match the edge list")

    def edge_masks(self) -> list[int]:
        return [sum(1 << v for v in e) for e in self.edges]

    def to_json(self) -> dict:
        payload = {}
        if self.d is not None:
            payload["d"] = self.d
            payload["n"] = self.n
        payload["vertex_count"] = self.vertex_count
        payload["edges"] = [list(e) for e in self.edges]
        if self.patterns is not None:
            payload["patterns"] = list(self.patterns)
        return payload

    @classmethod
    def from_json(cls, payload: dict) -> "Hypergraph":
        try:
            return cls(
                vertex_count=int(payload["vertex_count"]),
                edges=[tuple(int(v) for v in e) for e in payload["edges"]],
                d=payload.get("d"),
                n=payload.get("n"),
                patterns=payload.get("patterns"),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed hypergraph payload: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def hj_hypergraph(d: int, n: int, cap: int = DEFAULT_LINE_CAP) -> Hypergraph:
    patterns = enumerate_patterns(d, n, cap)
    edges = [tuple(sorted(word_index(w, d) for w in line_words(p, d))) for p in patterns]
    return Hypergraph(
        vertex_count=d**n,
        edges=edges,
        d=d,
        n=n,
        patterns=[pattern_key(p, d) for p in patterns],
    )


def lines_through(word: Sequence[int], patterns: Iterable[Sequence], d: int) -> int:
    word = tuple(word)
    return sum(1 for p in patterns if word in line_of(p, d))
