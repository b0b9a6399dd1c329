"""Declarative experiment runner: orchestrates the other modules from a
validated config, persists sieve tables, and emits CSV/SVG artifacts.

Every output file embeds a header comment with the config hash and seed;
identical config + seed gives byte-identical CSV.  File writes are atomic
(write-temp-then-rename).
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import arith, cache, config as config_mod, correlator, criterion
from . import plotting, sl2algebra
from .errors import ConfigError

__all__ = ["run", "default_config", "write_csv"]


# ---------------------------------------------------------------------------
# artifact writing


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path, header, rows, meta: str) -> None:
    """Comma-separated, '.' decimal, header row, LF endings, 17 sig digits."""
    path = Path(path)
    lines = [f"# {meta}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    os.replace(tmp, path)


def _series_rows(series: correlator.CorrelationSeries):
    return [
        (n, v.real, v.imag, abs(v))
        for n, v in zip(series.checkpoints, series.values)
    ]


def _write_series(out: Path, stem: str, series, meta: str, svg_title: str) -> None:
    write_csv(out / f"{stem}.csv", ["N", "re", "im", "abs"], _series_rows(series), meta)
    mags = series.magnitudes()
    plotting.write_series_svg(
        out / f"{stem}.svg",
        series.checkpoints,
        np.maximum(mags, 1e-17),
        title=svg_title,
        header_comment=meta,
    )


# ---------------------------------------------------------------------------
# sieve table acquisition


def _acquire_table(cfg: dict, needed: int) -> arith.MobiusTable:
    limit = max(int(cfg.get("sieve_limit", 0)), needed)
    path = cfg.get("cache")
    if path:
        path = Path(path)
        if path.exists():
            table = cache.cache_read(path)
            if table.limit >= limit:
                return table
        table = arith.sieve(limit)  # missing or undersized cache: rebuild
        cache.cache_write(table, path)
        return table
    return arith.sieve(limit)


# ---------------------------------------------------------------------------
# experiments


def _run_sieve(cfg, out, meta):
    n = cfg["n"]
    table = _acquire_table(cfg, n)
    cps = correlator.default_checkpoints(n)
    values = arith.mertens_values(table, cps)
    write_csv(out / "sieve_summary.csv", ["N", "mertens"], list(zip(cps, values)), meta)
    print(f"S({n}) = {int(values[-1])}")
    return 0


def _run_correlate(cfg, out, meta):
    spec = config_mod.build_system(cfg["system"])
    obs = config_mod.build_observable(cfg["observable"])
    table = _acquire_table(cfg, cfg["n"])
    series = correlator.mobius_correlation(
        spec, obs, table, cfg["n"], cfg.get("checkpoints")
    )
    _write_series(out, "correlate_series", series, meta, "Mobius correlation")
    print(f"|A_N| = {abs(series.final):.6e} at N = {cfg['n']}")
    return 0


def _run_equidist(cfg, out, meta):
    spec = config_mod.build_system(cfg["system"])
    obs = config_mod.build_observable(cfg["observable"])
    series = correlator.birkhoff(spec, obs, cfg["n"], cfg.get("checkpoints"))
    _write_series(out, "equidist_series", series, meta, "Birkhoff average")
    print(f"A_N = {series.final.real:.6f} at N = {cfg['n']}")
    return 0


def _run_orbit(cfg, out, meta):
    spec = config_mod.build_system(cfg["system"])
    obs = config_mod.build_observable(cfg["observable"])
    vals = correlator.orbit_values(spec, obs, cfg["n"])
    rows = [(n, v.real, v.imag) for n, v in enumerate(vals)]
    write_csv(out / "orbit.csv", ["n", "re", "im"], rows, meta)
    return 0


def _run_bsz(cfg, out, meta):
    spec = config_mod.build_system(cfg["system"])
    obs = config_mod.build_observable(cfg["observable"])
    n = cfg["n"]
    m = int(cfg["m"])
    tau = float(cfg["tau"])
    cutoff = math.exp(1.0 / tau)
    primes = arith.primes_upto(cutoff)
    top = max(n, (int(primes[-1]) if len(primes) else 1) * m)
    vals = correlator.orbit_values(spec, obs, top + 1)[1:]
    bound = obs.bound if obs.bound else float(np.max(np.abs(vals)))
    seq = criterion.BoundedSequence.from_values(vals, declared_bound=bound)
    report = criterion.pair_matrix(seq, tau, m, threads=cfg.get("threads", 1))
    rows = [
        (p, q, mag, mag > tau)
        for (p, q), mag in sorted(report.pairs.items())
    ]
    write_csv(out / "bsz_pairs.csv", ["p", "q", "magnitude", "violate_flag"], rows, meta)
    table = _acquire_table(cfg, n)
    series = criterion.direct_mobius_correlation(seq, table, n)
    _write_series(out, "bsz_series", series, meta, "Direct Mobius correlation")
    v = criterion.verdict(report, cfg.get("allowed_exceptions", 0))
    text = meta + "\n" + v.explanation + f"\nverdict: {'PASS' if v.ok else 'FAIL'}\n"
    tmp = out / "bsz_verdict.txt.tmp"
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, out / "bsz_verdict.txt")
    print(v.explanation)
    return 0 if v.ok else 1


def write_spectrum_csv(path, spectrum, meta: str) -> None:
    """Coefficient table: one m-component column per axis, then re, im."""
    header = [f"m{i}" for i in range(spectrum.dimension)] + ["re", "im"]
    rows = [
        tuple(m) + (c.real, c.imag)
        for m, c in sorted(spectrum.coefficients.items())
    ]
    write_csv(path, header, rows, meta)


def _run_pairs(cfg, out, meta):
    spec = config_mod.build_system(cfg["system"])
    obs = config_mod.build_observable(cfg["observable"])
    rows, c_f = correlator.pq_sweep(spec, obs, cfg["pairs"], cfg["n"])
    write_csv(
        out / "pairs_sweep.csv",
        ["p", "q", "absA", "bound", "pass"],
        [(r.p, r.q, r.abs_a, r.bound, r.passed) for r in rows],
        meta + f" C_f={c_f:.17g}",
    )
    write_spectrum_csv(out / "pairs_spectrum.csv", correlator._spectrum_of(obs), meta)
    bad = [r for r in rows if not r.passed]
    print(f"{len(rows) - len(bad)}/{len(rows)} pairs within bound + slack (C_f = {c_f:.4f})")
    return 0 if not bad else 1


def _run_algebra_check(cfg, out, meta):
    trials = int(cfg.get("trials", 200))
    rng = np.random.default_rng(cfg["seed"])
    failures = {"quat_hom": 0, "quat_det": 0, "iwasawa": 0, "chi_mult": 0, "parabolic": 0}

    def rand_frac():
        return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8)))

    a = Fraction(2)
    b = Fraction(3)
    for _ in range(trials):
        x = tuple(rand_frac() for _ in range(4))
        y = tuple(rand_frac() for _ in range(4))
        px = sl2algebra.quat_rep(*x, a, b)
        py = sl2algebra.quat_rep(*y, a, b)
        if sl2algebra.quat_rep(*sl2algebra.quat_mul(x, y, a, b), a, b) != px @ py:
            failures["quat_hom"] += 1
        if px.det() != sl2algebra.quat_norm(x, a, b) ** 2:
            failures["quat_det"] += 1
    for _ in range(trials):
        g = _random_sl2(rng)
        tri = sl2algebra.iwasawa(g)
        if np.max(np.abs(tri.product() - g)) > 1e-12:
            failures["iwasawa"] += 1
    u = np.array([[1.0, 1.0], [0.0, 1.0]])
    for _ in range(trials):
        g1 = _random_normalizer(rng)
        g2 = _random_normalizer(rng)
        lhs = sl2algebra.chi_of(g1 @ g2, u)
        rhs = sl2algebra.chi_of(g1, u) * sl2algebra.chi_of(g2, u)
        if abs(lhs - rhs) > 1e-10 * max(1.0, abs(rhs)):
            failures["chi_mult"] += 1
    for t, uu in ((3, 1), (6, 2), (17, 6)):  # t^2 - 8 u^2 > 0
        try:
            sl2algebra.parabolic_family_element(-2, 0, 1, t, uu)
        except Exception:
            failures["parabolic"] += 1
    rows = [(name, trials, count) for name, count in failures.items()]
    write_csv(out / "algebra_report.csv", ["check", "trials", "failures"], rows, meta)
    total = sum(failures.values())
    print(f"algebra-check: {total} failures across {len(failures)} suites")
    return 0 if total == 0 else 1


def _random_sl2(rng) -> np.ndarray:
    x = rng.uniform(-2.0, 2.0)
    t = math.exp(rng.uniform(-1.0, 1.0))
    th = rng.uniform(0.0, 2.0 * math.pi)
    n = np.array([[1.0, x], [0.0, 1.0]])
    s = np.array([[t, 0.0], [0.0, 1.0 / t]])
    k = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    return n @ s @ k


def _random_normalizer(rng) -> np.ndarray:
    # upper-triangular det-1: diag(t, 1/t) times unipotent
    t = math.exp(rng.uniform(-1.0, 1.0))
    x = rng.uniform(-2.0, 2.0)
    return np.array([[t, x], [0.0, 1.0 / t]])


_EXPERIMENTS = {
    "sieve": _run_sieve,
    "correlate": _run_correlate,
    "bsz": _run_bsz,
    "orbit": _run_orbit,
    "equidist": _run_equidist,
    "pairs": _run_pairs,
    "algebra-check": _run_algebra_check,
}


def run(raw_cfg: dict) -> int:
    """Validate, dispatch, and persist one experiment; returns exit status."""
    cfg = config_mod.validate_config(raw_cfg)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = f"config={config_mod.config_hash(cfg)} seed={cfg['seed']}"
    return _EXPERIMENTS[cfg["kind"]](cfg, out, meta)


# ---------------------------------------------------------------------------
# ready-made configs for the headline experiments (CLI defaults)

_SQRT2 = math.sqrt(2.0)


def default_config(kind: str) -> dict:
    """Built-in experiment config per subcommand; headline desk-scale runs."""
    if kind == "sieve":
        return {"kind": "sieve", "n": 1000000}
    if kind == "correlate":
        return {
            "kind": "correlate",
            "n": 1000000,
            "system": {"kind": "torus", "alpha": [_SQRT2 % 1.0]},
            "observable": {"id": "torus_char", "params": {"m": [1]}},
        }
    if kind == "bsz":
        return {
            "kind": "bsz",
            "n": 1000000,
            "m": 10000,
            "tau": 0.25,
            "allowed_exceptions": 2,
            "system": {"kind": "sl2", "s": 1.0, "start": "generic"},
            "observable": {
                "id": "sl2_step",
                "params": {"threshold": 2.0, "width": 0.25},
                "subtract": "haar",
            },
        }
    if kind == "orbit":
        return {
            "kind": "orbit",
            "n": 1000,
            "system": {"kind": "sl2", "s": 1.0, "start": "generic"},
            "observable": {"id": "sl2_height", "params": {}},
        }
    if kind == "equidist":
        return {
            "kind": "equidist",
            "n": 100000,
            "system": {"kind": "sl2", "s": 1.0, "start": "generic"},
            "observable": {"id": "sl2_step", "params": {"threshold": 2.0, "width": 0.25}},
        }
    if kind == "pairs":
        modes = [[m] for m in range(-50, 51) if m != 0]
        coeffs = [(1 + abs(m[0])) ** -2 for m in modes]
        return {
            "kind": "pairs",
            "n": 100000,
            "pairs": [[2, 3], [3, 5], [5, 7], [7, 11]],
            "system": {"kind": "torus", "alpha": [_SQRT2 % 1.0]},
            "observable": {
                "id": "torus_poly",
                "params": {"modes": modes, "coeffs": coeffs},
            },
        }
    if kind == "algebra-check":
        return {"kind": "algebra-check", "trials": 200, "seed": 42}
    raise ConfigError(f"no default config for kind {kind!r}")
