"""Command-line interface.

Exit codes: 0 success, 1 certified failure (a certificate or solver check
did not hold), 2 usage or parse error.  Every command writes a run manifest
(``<out>.manifest.json`` next to ``--out``, else one JSON line on stderr).
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import __version__, certify, cover, hj, kernels
from .realize import DegenerateSize, DrawingConfig, PrecisionExhausted, Realization, RetriesExhausted, realize_pipeline
from .ratlin import rat, rat_str

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CertifiedFailure(Exception):
    pass


def _dump(payload) -> str:
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _config(args) -> DrawingConfig:
    eps = None
    if getattr(args, "eps", None):
        try:
            eps = rat(args.eps)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--eps must be a rational like 1/8: {exc}") from exc
    try:
        cfg = DrawingConfig(
            d=args.d,
            n=args.n,
            seed=args.seed,
            epsilon_override=eps,
            initial_precision=args.precision,
            jitter_enabled=not args.no_jitter,
            max_precision=args.max_precision,
        )
        cfg.check_realizable()
    except (ValueError, DegenerateSize) as exc:
        raise UsageError(str(exc)) from exc
    return cfg


def _build(cfg: DrawingConfig) -> Realization:
    try:
        return realize_pipeline(cfg)
    except (PrecisionExhausted, RetriesExhausted) as exc:
        raise CertifiedFailure(f"build: {exc}") from exc


# -- commands -----------------------------------------------------------------


def cmd_hj(args) -> dict:
    try:
        h = hj.hj_hypergraph(args.d, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(_dump(h.to_json()), args.out)
    return {"vertex_count": h.vertex_count, "edges": len(h.edges)}


def cmd_solve(args) -> dict:
    try:
        h = hj.Hypergraph.from_json(_read_json(args.input))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.mode == "tau":
        if args.strategy == "bruteforce":
            try:
                res = cover.tau_bruteforce(h)
            except cover.CapExceeded as exc:
                raise UsageError(str(exc)) from exc
        else:
            res = cover.tau_exact(h, cover.deadline_after(args.time_budget))
        if not cover.check_transversal(h, res.witness):
            raise CertifiedFailure("solver returned a set that misses an edge")
        payload = res.to_json()
    else:
        try:
            if args.strategy == "bruteforce":
                payload = {"chi": cover.chi_bruteforce(h), "coloring": None}
            else:
                payload = cover.chi_weak(h).to_json()
        except (cover.SizeOneEdge, cover.CapExceeded) as exc:
            raise UsageError(str(exc)) from exc
        payload["exact"] = True
    _write(_dump(payload), args.out)
    return payload


def cmd_build(args) -> dict:
    cfg = _config(args)
    real = _build(cfg)
    _write(real.dumps() + "\n", args.out)
    return {"points": len(real.coordinates), "lines": len(real.line_manifest), "precision_bits": real.precision_bits}


def cmd_certify(args) -> dict:
    try:
        real = Realization.from_json(_read_json(args.input))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    problems = certify.verify_certificates(real)
    payload = {"ok": not problems, "problems": problems}
    _write(_dump(payload), args.out)
    if problems:
        raise CertifiedFailure(f"{len(problems)} certificate problems")
    return payload


def _bound_entry(h, tau, chi) -> dict:
    return {
        "tau": tau,
        "chi": chi,
        "ratio": rat_str(Fraction(tau, h.vertex_count)),
        "bound": rat_str(Fraction(chi - 1, chi)),
        "holds": cover.coloring_bound_holds(h, tau, chi),
    }


def build_report(cfg: DrawingConfig, full_hull: bool = False, threads: int = 1) -> dict:
    real = _build(cfg)
    hjg = hj.hj_hypergraph(cfg.d, cfg.n)
    try:
        rep = certify.certify_theorem(real, hjg, full_hull=full_hull, threads=threads)
    except certify.CertificationError as exc:
        raise CertifiedFailure(f"certify: {exc}") from exc
    tau_hj = rep.tau_hj if rep.tau_hj is not None else cover.tau_exact(hjg).tau
    chi_hj = cover.chi_weak(hjg).chi
    out = {
        "d": cfg.d,
        "n": cfg.n,
        "seed": cfg.seed,
        "epsilon": rat_str(real.epsilon),
        "precision_bits": real.precision_bits,
        "vertex_count": hjg.vertex_count,
        "summary": f"{rep.lines_certified}/{rep.line_count} lines certified as facets",
        "certification": rep.to_json(),
        "hj": dict(_bound_entry(hjg, tau_hj, chi_hj), rho=rat_str(cover.rho(hjg, tau_hj))),
    }
    if full_hull:
        hq = rep.facet_hypergraph
        chi_hq = cover.chi_weak(hq).chi
        out["hull"] = dict(_bound_entry(hq, rep.tau_hq, chi_hq), rho=rat_str(cover.rho(hq, rep.tau_hq)))
        out["hull"]["tau_monotone"] = rep.tau_hq >= tau_hj
        out["hull"]["simplicial"] = rep.simplicial
    return out


def _human(report: dict) -> str:
    c = report["certification"]
    lines = [
        f"HJ({report['d']},{report['n']}): {report['vertex_count']} vertices, epsilon = {report['epsilon']}, "
        f"snapped at {report['precision_bits']} bits",
        report["summary"],
        f"convex position: {c['convex_position']}",
        f"tau(HJ) = {report['hj']['tau']}, rho(HJ) = {report['hj']['rho']}, chi(HJ) = {report['hj']['chi']}",
        f"coloring bound rho <= (chi-1)/chi: {report['hj']['ratio']} <= {report['hj']['bound']} "
        f"-> {report['hj']['holds']}",
    ]
    if "hull" in report:
        h = report["hull"]
        lines += [
            f"full hull: {c['facet_count']} facets, simplicial = {h['simplicial']}, "
            f"lines among facets = {c['lines_in_facet_list']}",
            f"tau(H(Q)) = {h['tau']} >= tau(HJ) = {report['hj']['tau']}: {h['tau_monotone']}",
            f"rho(H(Q)) = {h['rho']}, chi(H(Q)) = {h['chi']}, bound holds: {h['holds']}",
        ]
    return "\n".join(lines) + "\n"


def cmd_report(args) -> dict:
    cfg = _config(args)
    report = build_report(cfg, full_hull=args.full_hull, threads=args.threads)
    if args.out:
        _write(_dump(report), args.out)
    sys.stdout.write(_human(report))
    failed = [k for k in ("all_lines_are_facets", "convex_position") if not report["certification"][k]]
    if "hull" in report and not (report["hull"]["simplicial"] and report["hull"]["tau_monotone"]):
        failed.append("hull")
    if failed:
        raise CertifiedFailure("report checks failed: " + ", ".join(failed))
    return {"summary": report["summary"]}


def _decimal(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def write_off(real: Realization, source: str, digits: int) -> str:
    """Lossy nOFF text: decimal vertices, one face row per line facet."""
    rows = [
        "nOFF",
        f"# LOSSY decimal export ({digits} significant digits); exact rationals are in {source}",
        str(real.d),
        f"{len(real.coordinates)} {len(real.line_manifest)} 0",
    ]
    for p in real.point_list():
        rows.append(" ".join(_decimal(x, digits) for x in p))
    for _, verts in real.line_manifest:
        rows.append(" ".join(str(v) for v in (len(verts),) + tuple(verts)))
    return "\n".join(rows) + "\n"


def read_off(text: str) -> tuple[list[list[float]], list[list[int]]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    head = lines.pop(0)
    if head == "nOFF":
        dim = int(lines.pop(0))
    elif head == "OFF":
        dim = 3
    else:
        raise ValueError("OFF header missing")
    nv, nf, _ = (int(t) for t in lines.pop(0).split())
    verts = [[float(t) for t in lines[i].split()] for i in range(nv)]
    if any(len(v) != dim for v in verts):
        raise ValueError("vertex row of the wrong dimension")
    faces = [[int(t) for t in lines[nv + i].split()][1:] for i in range(nf)]
    return verts, faces


def cmd_export(args) -> dict:
    try:
        real = Realization.from_json(_read_json(args.input))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "off":
        _write(write_off(real, args.input, args.precision), args.out)
    else:
        _write(real.dumps() + "\n", args.out)
    return {"format": args.format}


# -- entry point ------------------------------------------------------------------


def _add_build_flags(p, precision_default=64):
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", help="epsilon override, a rational such as 1/8")
    p.add_argument("--precision", type=int, default=precision_default, help="initial snap precision in bits")
    p.add_argument("--max-precision", type=int, default=2048)
    p.add_argument("--no-jitter", action="store_true")
    p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    p.add_argument("--out")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hjpolytope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hj", help="write the Hales-Jewett hypergraph as JSON")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hj)

    p = sub.add_parser("solve", help="transversal number or weak chromatic number of a hypergraph file")
    p.add_argument("input")
    p.add_argument("--mode", choices=["tau", "chi"], default="tau")
    p.add_argument("--strategy", choices=["exact", "bruteforce"], default="exact")
    p.add_argument("--time-budget", type=float, help="seconds before returning certified bounds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("build", help="construct and certify a realization")
    _add_build_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("certify", help="re-check the certificates stored in a realization file")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("report", help="build, certify and summarize")
    _add_build_flags(p)
    p.add_argument("--full-hull", action="store_true", help="enumerate every facet by brute force")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export", help="export a realization as lossy OFF or lossless JSON")
    p.add_argument("input")
    p.add_argument("--format", choices=["off", "json"], required=True)
    p.add_argument("--precision", type=int, default=17, help="significant digits for OFF")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def _manifest(args, outcome, elapsed_ms) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "command": args.command,
        "config": config,
        "versions": {
            "hjpolytope": __version__,
            "python": platform.python_version(),
            "kernels": kernels.BACKEND,
        },
        "timings_ms": {"total": round(elapsed_ms, 3)},
        "outcome": outcome,
    }


def _emit_manifest(args, manifest) -> None:
    out = getattr(args, "out", None)
    if out and out != "-":
        Path(out + ".manifest.json").write_text(_dump(manifest), encoding="utf-8")
    else:
        sys.stderr.write(json.dumps(manifest, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    code = EXIT_OK
    try:
        outcome = {"status": "ok", "result": args.func(args)}
    except UsageError as exc:
        code, outcome = EXIT_USAGE, {"status": "usage_error", "error": str(exc)}
        sys.stderr.write(f"error: {exc}\n")
    except CertifiedFailure as exc:
        code, outcome = EXIT_FAIL, {"status": "certified_failure", "error": str(exc)}
        sys.stderr.write(f"failure: {exc}\n")
    except OSError as exc:
        code, outcome = EXIT_USAGE, {"status": "io_error", "error": str(exc)}
        sys.stderr.write(f"error: {exc}\n")
    _emit_manifest(args, _manifest(args, outcome, (time.perf_counter() - start) * 1000))
    return code


if __name__ == "__main__":
    sys.exit(main())
