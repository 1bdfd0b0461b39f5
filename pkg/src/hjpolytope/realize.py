"""Construction of a point set whose hull has every combinatorial line as a facet.

Pipeline: planar drawing of [d]^n -> exact choice of epsilon -> surd
perturbation y -> y + sqrt(eps*x) -> dyadic snap in the plane -> Veronese
map into R^5 -> seeded lift to R^d.  The precision of the snap doubles until
every line-facet and vertex certificate passes.

Randomness: every random draw comes from ``stream(seed, *labels)``, a Python
``random.Random`` (Mersenne Twister) seeded with the SHA-256 digest of the
label tuple, so a run is reproducible bit for bit from (d, n, seed).
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from . import hj
from .ratlin import Surd, affinely_independent, rat, rat_str, rvec

MAX_RETRIES = 32
DEFAULT_PRECISION = 64
DEFAULT_MAX_PRECISION = 2048
JITTER_BITS = 32
LIFT_SCALE_BITS = 8


class RetriesExhausted(RuntimeError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class PrecisionExhausted(RuntimeError):
    def __init__(self, message, failure=None):
        super().__init__(message)
        self.failure = failure


class DegenerateSize(ValueError):
    pass


def stream(seed: int, *labels) -> random.Random:
    digest = hashlib.sha256(repr((int(seed),) + labels).encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _distinct_dyadics(rng: random.Random, count: int, exponent: int) -> list[Fraction]:
    """``count`` distinct values j / 2^(exponent + JITTER_BITS), |j| <= 2^JITTER_BITS."""
    span = 1 << JITTER_BITS
    draws = rng.sample(range(-span, span + 1), count)
    return [Fraction(j, 1 << (exponent + JITTER_BITS)) for j in draws]


@dataclass(frozen=True)
class DrawingConfig:
    d: int
    n: int
    seed: int = 0
    epsilon_override: Fraction | None = None
    initial_precision: int = DEFAULT_PRECISION
    jitter_enabled: bool = True
    max_precision: int = DEFAULT_MAX_PRECISION

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ValueError(f"need d >= 2 and n >= 1, got d={self.d}, n={self.n}")
        if self.epsilon_override is not None:
            eps = rat(self.epsilon_override)
            if eps <= 0:
                raise ValueError("epsilon must be positive")
            object.__setattr__(self, "epsilon_override", eps)
        if self.initial_precision < 16:
            raise ValueError("initial precision must be at least 16 bits")

    def check_realizable(self) -> None:
        if self.d < 5:
            raise ValueError(f"the construction needs d >= 5, got d={self.d}")
        if self.d**self.n < self.d + 1:
            raise DegenerateSize(
                f"{self.d}^{self.n} points cannot affinely span R^{self.d}; need d^n >= d+1"
            )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "seed": self.seed,
            "epsilon_override": None if self.epsilon_override is None else rat_str(self.epsilon_override),
            "initial_precision": self.initial_precision,
            "jitter_enabled": self.jitter_enabled,
            "max_precision": self.max_precision,
        }


# -- step 1: planar drawing ---------------------------------------------------


@dataclass
class PlanarDrawing:
    d: int
    n: int
    vectors: list[tuple[Fraction, Fraction]]
    points: dict  # word -> (x, y)
    lines: dict  # pattern -> (a_L, b_L)
    attempts: int = 1

    def line_points(self, pattern) -> list:
        return [self.points[w] for w in hj.line_words(pattern, self.d)]

    def delta(self, pattern, word) -> Fraction:
        a, b = self.lines[pattern]
        x, y = self.points[word]
        return y - a * x - b

    def off_line_deltas(self):
        """Yield (pattern, word, delta, x) for every point off every line."""
        for pattern in self.lines:
            members = hj.line_of(pattern, self.d)
            a, b = self.lines[pattern]
            for word, (x, y) in self.points.items():
                if word not in members:
                    yield pattern, word, y - a * x - b, x


def default_vectors(d: int, n: int) -> list[tuple[Fraction, Fraction]]:
    return [(Fraction(1), Fraction((d + 1) ** i)) for i in range(1, n + 1)]


def _drawing_from_vectors(d, n, vectors):
    points = {}
    for w in hj.all_words(d, n):
        x = sum((s * v[0] for s, v in zip(w, vectors)), Fraction(0))
        y = sum((s * v[1] for s, v in zip(w, vectors)), Fraction(0))
        points[w] = (x, y)
    lines = {}
    for p in hj.enumerate_patterns(d, n):
        dx = sum((v[0] for s, v in zip(p, vectors) if s == hj.STAR), Fraction(0))
        dy = sum((v[1] for s, v in zip(p, vectors) if s == hj.STAR), Fraction(0))
        a = dy / dx
        x1, y1 = points[hj.substitute(p, 1, d)]
        lines[p] = (a, y1 - a * x1)
    return PlanarDrawing(d, n, vectors, points, lines)


def drawing_violations(drawing: PlanarDrawing) -> list:
    """Failures of distinctness, positivity, collinearity or condition (b)."""
    bad = []
    seen = {}
    for w, (x, y) in drawing.points.items():
        if x <= 0:
            bad.append(("nonpositive_x", w))
        if (x, y) in seen:
            bad.append(("duplicate", seen[(x, y)], w))
        seen[(x, y)] = w
    for v in drawing.vectors:
        if v[0] <= 0:
            bad.append(("nonpositive_vector_x", v))
    for p, (a, b) in drawing.lines.items():
        for x, y in drawing.line_points(p):
            if y != a * x + b:
                bad.append(("not_collinear", p))
    for p, w, delta, _ in drawing.off_line_deltas():
        if delta == 0:
            bad.append(("extra_point_on_line", p, w))
    return bad


def base_drawing(cfg: DrawingConfig) -> PlanarDrawing:
    """Points p_w = sum_i w_i v_i with v_i = (1, (d+1)^i), jittered if needed."""
    vectors = default_vectors(cfg.d, cfg.n)
    drawing = _drawing_from_vectors(cfg.d, cfg.n, vectors)
    bad = drawing_violations(drawing)
    attempt = 0
    while bad:
        attempt += 1
        if attempt > MAX_RETRIES:
            raise RetriesExhausted(f"no valid planar drawing after {MAX_RETRIES} retries", bad)
        rng = stream(cfg.seed, "drawing", attempt)
        half = 1 << (cfg.initial_precision - 1)
        jittered = [
            (vx, vy + Fraction(rng.randint(-half, half), 2 * half)) for vx, vy in vectors
        ]
        drawing = _drawing_from_vectors(cfg.d, cfg.n, jittered)
        bad = drawing_violations(drawing)
    drawing.attempts = attempt + 1
    return drawing


# -- step 3: epsilon and surd perturbation ------------------------------------


def epsilon_from_deltas(pairs) -> Fraction:
    """min(1, 1/2 * min delta^2/(4x)) over pairs (delta, x) with delta < 0.

    At a point off line L the perturbed quadratic equals
    delta^2 + 2*delta*sqrt(eps*x), which is positive iff delta > 0 or
    delta^2 > 4*eps*x.
    """
    bound = None
    for delta, x in pairs:
        if delta < 0:
            v = delta * delta / (4 * x)
            if bound is None or v < bound:
                bound = v
    if bound is None:
        return Fraction(1)
    return min(Fraction(1), bound / 2)


def choose_epsilon(drawing: PlanarDrawing) -> Fraction:
    return epsilon_from_deltas((delta, x) for _, _, delta, x in drawing.off_line_deltas())


@dataclass
class SurdConfiguration:
    epsilon: Fraction
    points: dict  # word -> (x, Surd)


def surd_perturb(drawing: PlanarDrawing, epsilon) -> SurdConfiguration:
    epsilon = rat(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    pts = {w: (x, Surd(y, 1, epsilon * x)) for w, (x, y) in drawing.points.items()}
    return SurdConfiguration(epsilon, pts)


def perturbed_quadratic(a, b, epsilon, x, y: Surd) -> Surd:
    """(y - a x - b)^2 - eps x evaluated exactly at a surd point."""
    t = y - (a * x + b)
    return t * t - epsilon * x


def surd_stage_signs(drawing: PlanarDrawing, surds: SurdConfiguration) -> dict:
    """Sign of the perturbed line quadratic at every (line, point) pair."""
    out = {}
    for p, (a, b) in drawing.lines.items():
        for w, (x, ys) in surds.points.items():
            out[(p, w)] = perturbed_quadratic(a, b, surds.epsilon, x, ys).sign()
    return out


# -- steps 2 and 5: snap and Veronese map -------------------------------------


def veronese(p) -> tuple:
    x, y = rat(p[0]), rat(p[1])
    return (x * x, x * y, y * y, x, y)


def snap_value(s: Surd, precision_bits: int) -> Fraction:
    """Exact value if rational, else the dyadic floor at 2^-precision_bits."""
    if s.is_rational:
        return s.a
    scale = 1 << precision_bits
    # floor(|b| sqrt(r) 2^P) == isqrt(floor(b^2 r 4^P))
    root = Fraction(isqrt(int(s.b * s.b * s.r * scale * scale)), scale)
    return s.a + root if s.b > 0 else s.a - root


def snap(surds: SurdConfiguration, precision_bits: int, seed: int, jitter: bool = True) -> dict:
    """Round the surd configuration to dyadic planar points.

    With jitter, each y gets a distinct offset of magnitude at most
    2^-(precision_bits + 8), and so does each x: repeated x-coordinates would
    otherwise leave four or more points on a vertical line, and those span a
    non-simplex face of the lifted hull.
    """
    if precision_bits < 16:
        raise ValueError("precision must be at least 16 bits")
    words = sorted(surds.points)
    out = {}
    if jitter:
        ry = stream(seed, "snap-y", precision_bits)
        rx = stream(seed, "snap-x", precision_bits)
        jy = _distinct_dyadics(ry, len(words), precision_bits + 8)
        jx = _distinct_dyadics(rx, len(words), precision_bits + 8)
    for k, w in enumerate(words):
        x, ys = surds.points[w]
        y_hat = snap_value(ys, precision_bits)
        if jitter:
            x, y_hat = x + jx[k], y_hat + jy[k]
        out[w] = (x, y_hat)
    return out


# -- step 4: lift ----------------------------------------------------------------


def lift_defects(points: dict, line_words: list) -> list[int]:
    """Indices of lines whose points are affinely dependent."""
    return [k for k, ws in enumerate(line_words) if not affinely_independent([points[w] for w in ws])]


def lift(points5: dict, d: int, seed: int, precision_bits: int, line_words: list | None = None) -> dict:
    """Append d-5 seeded dyadic coordinates of magnitude <= 2^-8."""
    if d < 5:
        raise ValueError("lift target dimension must be at least 5")
    if d == 5:
        return dict(points5)
    words = sorted(points5)
    for attempt in range(MAX_RETRIES + 1):
        rng = stream(seed, "lift", precision_bits, attempt)
        span = 1 << JITTER_BITS
        out = {}
        for w in words:
            z = tuple(
                Fraction(rng.randint(-span, span), 1 << (LIFT_SCALE_BITS + JITTER_BITS))
                for _ in range(d - 5)
            )
            out[w] = tuple(points5[w]) + z
        if line_words is None or not lift_defects(out, line_words):
            return out
    raise RetriesExhausted(f"lift failed to make every line affinely independent in R^{d}")


# -- realization ----------------------------------------------------------------


@dataclass
class Realization:
    d: int
    n: int
    epsilon: Fraction
    precision_bits: int
    seed: int
    coordinates: dict  # word -> tuple of d Fractions
    line_manifest: list  # [(pattern_key, sorted vertex indices)]
    certificates: dict | None = None
    jitter_enabled: bool = True
    drawing_attempts: int = field(default=1, compare=False)
    precision_history: list = field(default_factory=list, compare=False)

    def words(self) -> list:
        return sorted(self.coordinates)

    def point_list(self) -> list:
        return [self.coordinates[w] for w in self.words()]

    def planar(self, word) -> tuple:
        c = self.coordinates[word]
        return c[3], c[4]

    def to_json(self) -> dict:
        payload = {
            "d": self.d,
            "n": self.n,
            "epsilon": rat_str(self.epsilon),
            "precision_bits": self.precision_bits,
            "seed": self.seed,
            "jitter_enabled": self.jitter_enabled,
            "points": {
                hj.word_key(w, self.d): [rat_str(x) for x in self.coordinates[w]] for w in self.words()
            },
            "lines": [{"pattern": p, "vertices": list(v)} for p, v in self.line_manifest],
        }
        if self.certificates is not None:
            payload["certificates"] = self.certificates
        return payload

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, payload: dict) -> "Realization":
        try:
            d, n = int(payload["d"]), int(payload["n"])
            coords = {hj.parse_word_key(k, d): rvec(v) for k, v in payload["points"].items()}
            for c in coords.values():
                if len(c) != d:
                    raise ValueError("point of the wrong dimension")
            if len(coords) != d**n:
                raise ValueError(f"expected {d**n} points, found {len(coords)}")
            manifest = [(ln["pattern"], tuple(int(v) for v in ln["vertices"])) for ln in payload["lines"]]
            return cls(
                d=d,
                n=n,
                epsilon=rat(payload["epsilon"]),
                precision_bits=int(payload["precision_bits"]),
                seed=int(payload["seed"]),
                coordinates=coords,
                line_manifest=manifest,
                certificates=payload.get("certificates"),
                jitter_enabled=bool(payload.get("jitter_enabled", True)),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed realization payload: {exc}") from exc


def line_manifest(d: int, n: int) -> list:
    return [
        (hj.pattern_key(p, d), tuple(sorted(hj.word_index(w, d) for w in hj.line_words(p, d))))
        for p in hj.enumerate_patterns(d, n)
    ]


def realize_at(cfg: DrawingConfig, surds: SurdConfiguration, precision_bits: int, drawing_attempts=1) -> Realization:
    """Snap, embed and lift at one precision, without certification."""
    planar = snap(surds, precision_bits, cfg.seed, jitter=cfg.jitter_enabled)
    points5 = {w: veronese(p) for w, p in planar.items()}
    patterns = hj.enumerate_patterns(cfg.d, cfg.n)
    line_words = [hj.line_words(p, cfg.d) for p in patterns]
    coords = lift(points5, cfg.d, cfg.seed, precision_bits, line_words)
    return Realization(
        d=cfg.d,
        n=cfg.n,
        epsilon=surds.epsilon,
        precision_bits=precision_bits,
        seed=cfg.seed,
        coordinates=coords,
        line_manifest=line_manifest(cfg.d, cfg.n),
        jitter_enabled=cfg.jitter_enabled,
        drawing_attempts=drawing_attempts,
    )


def realize_pipeline(cfg: DrawingConfig) -> Realization:
    from .certify import CertificationError, certify_realization

    cfg.check_realizable()
    drawing = base_drawing(cfg)
    eps = cfg.epsilon_override if cfg.epsilon_override is not None else choose_epsilon(drawing)
    surds = surd_perturb(drawing, eps)
    bits = cfg.initial_precision
    history = []
    last = None
    while bits <= cfg.max_precision:
        try:
            real = realize_at(cfg, surds, bits, drawing.attempts)
            real.certificates = certify_realization(real)
        except (CertificationError, RetriesExhausted) as exc:
            history.append({"precision_bits": bits, "failure": str(exc)})
            last = exc
            bits *= 2
            continue
        history.append({"precision_bits": bits, "failure": None})
        real.precision_history = history
        return real
    raise PrecisionExhausted(
        f"certificates still failing at {cfg.max_precision} bits: {last}", failure=last
    )
