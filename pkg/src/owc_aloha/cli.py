"""Command line harness: config ingestion, CSV emission, validation report.

Subcommands:

    cdf       conditional SINR distribution of the reference user
    outage    unconditional outage probability for one configuration
    sweep     outage versus one swept parameter (users | semi_angle |
              radius | activation_prob)
    validate  analytic-vs-oracle check suite, one pass/fail line per check

Every CSV starts with '#'-prefixed header comments carrying the artifact
version and the fully resolved configuration (defaulted keys marked), so a
result file is self-describing and two runs with identical config and seed
are byte-identical.  Exit codes: 0 success, 2 config error, 3 numerical
failure, 4 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from . import __version__
from .channel import snr_cdf_closed_form, snr_pdf
from .config import RunConfig, load_config, resolved_items, with_overrides
from .errors import ConfigError, QuadratureError
from .montecarlo import McConfig, simulate_conditional_outage, simulate_unconditional_outage
from .montecarlo import _draw_snr
from .reliability import sweep, unconditional_outage
from .sinr import (
    conditional_sinr_cdf,
    conditional_sinr_pdf,
    interference_pdf,
    interference_pdf_convolution,
    single_interferer_cf,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _header_lines(cfg: RunConfig, command: str):
    lines = [f"# owc-aloha {__version__}", f"# command = {command}"]
    for key, value, was_default in resolved_items(cfg):
        suffix = "  # default" if was_default else ""
        lines.append(f"# {key} = {value}{suffix}")
    return lines


def _write(out_path: str, lines):
    text = "\n".join(lines) + "\n"
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_threshold(text: str) -> float:
    t = text.strip().lower()
    if t.endswith("db"):
        return 10.0 ** (float(t[:-2].strip()) / 10.0)
    return float(t)


def _empirical_sinr_cdf(model, n_active, xs, mc: McConfig):
    rng = mc.generator()
    hits = np.zeros(xs.size, dtype=np.int64)
    done = 0
    chunk = max(1, 4_000_000 // n_active)
    while done < mc.trials:
        size = min(chunk, mc.trials - done)
        g = _draw_snr(model, rng, (size, n_active))
        ref = g[:, -1]
        sinr = ref / (g.sum(axis=1) - ref + 1.0)
        sinr.sort()
        hits += np.searchsorted(sinr, xs, side="right")
        done += size
    return hits / mc.trials


def cmd_cdf(cfg: RunConfig, n_active: int, mode: str, out_path: str) -> int:
    model = cfg.system_model()
    spec = cfg.quadrature_spec()
    tab = conditional_sinr_pdf(model, n_active, spec)
    xs = tab.grid
    columns = ["x", "pdf", "cdf"]
    data = [xs, tab.pdf_values, tab.cdf_values]
    if mode in ("mc", "both"):
        emp = _empirical_sinr_cdf(model, n_active, xs, cfg.mc_config())
        if mode == "mc":
            columns, data = ["x", "mc_cdf"], [xs, emp]
        else:
            columns.append("mc_cdf")
            data.append(emp)
    lines = _header_lines(cfg, f"cdf --n-active {n_active} --mode {mode}")
    lines.append(f"# n_active = {n_active}")
    lines.append(",".join(columns))
    for row in zip(*data):
        lines.append(",".join(_fmt(v) for v in row))
    _write(out_path, lines)
    return EXIT_OK


def cmd_outage(cfg: RunConfig, mode: str, out_path: str) -> int:
    model = cfg.system_model()
    spec = cfg.quadrature_spec()
    traffic = cfg.traffic_model()
    query = cfg.outage_query()
    p_cap = p_cls = None
    if mode in ("analytic", "both"):
        p_cap = unconditional_outage(model, traffic, dataclasses.replace(query, mode="capture"), spec)
        p_cls = unconditional_outage(model, traffic, dataclasses.replace(query, mode="classical"), spec)
    mc_value = mc_hw = None
    if mode in ("mc", "both"):
        est = simulate_unconditional_outage(
            model, traffic, query.threshold, query.mode, cfg.mc_config(),
            mixture_mode=query.mixture_mode,
        )
        mc_value, mc_hw = est.value, est.half_width_95
    lines = _header_lines(cfg, f"outage --mode {mode}")
    lines.append("threshold,p_out_capture,p_out_classical,mc_value,mc_ci95")
    lines.append(",".join(_fmt(v) for v in (query.threshold, p_cap, p_cls, mc_value, mc_hw)))
    _write(out_path, lines)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, axis: str, values, mode: str, out_path: str) -> int:
    model = cfg.system_model()
    spec = cfg.quadrature_spec()
    traffic = cfg.traffic_model()
    query = cfg.outage_query()
    mc = cfg.mc_config() if mode in ("mc", "both") else None
    result = sweep(model, traffic, query, axis, values, spec, mc=mc)
    lines = _header_lines(cfg, f"sweep --axis {axis} --mode {mode}")
    lines.append("param,p_out_capture,p_out_classical,mc_value,mc_ci95,error")
    failed = False
    for row in result.rows:
        failed = failed or row.error is not None
        lines.append(",".join([
            _fmt(row.param_value), _fmt(row.p_out_capture), _fmt(row.p_out_classical),
            _fmt(row.mc_value), _fmt(row.mc_half_width),
            (row.error or "").replace(",", ";").replace("\n", " "),
        ]))
    _write(out_path, lines)
    return EXIT_NUMERICAL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _check(name, measured, tolerance):
    ok = measured <= tolerance
    return ok, f"{'PASS' if ok else 'FAIL'} {name}: measured {measured:.6e} tolerance {tolerance:.6e}"


def cmd_validate(cfg: RunConfig, out_path: str) -> int:
    """Oracle suite: closed form vs quadrature, CF round trip, path agreement,
    MC vs analytic conditional CDFs, one unconditional case."""
    model = cfg.system_model()
    spec = cfg.quadrature_spec()
    traffic = cfg.traffic_model()
    query = cfg.outage_query()
    mc_base = cfg.mc_config()
    lines = _header_lines(cfg, "validate")
    all_ok = True

    def run(name, fn, tolerance):
        nonlocal all_ok
        try:
            measured = fn()
            ok, line = _check(name, measured, tolerance)
        except QuadratureError as exc:
            est = exc.error_estimate
            ok = False
            detail = f"measured {est:.6e} " if est is not None else ""
            line = f"FAIL {name}: {detail}({exc})"
        all_ok = all_ok and ok
        lines.append(line)

    def closed_vs_quadrature():
        gs = np.geomspace(model.snr_min, model.snr_max, 100)
        ana = np.array([conditional_sinr_cdf(model, 1, float(g), spec) for g in gs])
        return float(np.max(np.abs(ana - snr_cdf_closed_form(model, gs))))

    run("single-user CDF closed form vs quadrature", closed_vs_quadrature, 1e-6)
    run("CF normalization at t=0", lambda: abs(single_interferer_cf(model, 0.0, spec) - 1.0), 1e-12)

    def roundtrip():
        tab = interference_pdf(model, 1, spec)
        exact = snr_pdf(model, tab.grid)
        return float(np.max(np.abs(tab.pdf_values - exact)) / np.max(exact))

    run("CF inversion round trip (1 interferer)", roundtrip, 1e-3)
    for n in (2, 3):
        run(
            f"inversion vs convolution ({n} interferers)",
            lambda n=n: interference_pdf(model, n, spec).sup_cdf_distance(
                interference_pdf_convolution(model, n, spec)),
            1e-3,
        )

    mc_tol = max(0.01, 2.0 / math.sqrt(mc_base.trials))
    for i, n_act in enumerate((1, 2, 3, 5)):
        def sup_dist(n_act=n_act, i=i):
            lam_hi = (n_act - 1) * model.snr_max + 1.0
            xs = np.geomspace(model.snr_min / lam_hi, model.snr_max, 256)
            ana = np.array([conditional_sinr_cdf(model, n_act, float(x), spec) for x in xs])
            emp = _empirical_sinr_cdf(
                model, n_act, xs, dataclasses.replace(mc_base, stream_id=mc_base.stream_id + i))
            return float(np.max(np.abs(ana - emp)))

        run(f"MC vs analytic SINR CDF (U_a={n_act})", sup_dist, mc_tol)

    def unconditional_case():
        ana = unconditional_outage(model, traffic, dataclasses.replace(query, mode="capture"), spec)
        est = simulate_unconditional_outage(
            model, traffic, query.threshold, "capture",
            dataclasses.replace(mc_base, stream_id=mc_base.stream_id + 4),
            mixture_mode=query.mixture_mode,
        )
        tol = max(est.half_width_95, 0.005)
        lines.append(f"# unconditional tolerance = {tol:.6e}")
        return abs(ana - est.value) / tol

    run(
        f"MC vs analytic unconditional outage (U={traffic.population}, pa={traffic.activation_prob:g})",
        unconditional_case, 1.0,
    )

    lines.append("RESULT " + ("PASS" if all_ok else "FAIL"))
    _write(out_path, lines)
    return EXIT_OK if all_ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# argument parsing / dispatch
# ---------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="owc-aloha",
        description="Outage probability of a slotted-ALOHA uplink with capture "
                    "in an indoor optical wireless cell",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modes=("analytic", "mc", "both")):
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        if modes:
            p.add_argument("--mode", choices=modes, default="analytic")
        p.add_argument("--seed", type=int, help="override RNG seed")
        p.add_argument("--trials", type=int, help="override Monte Carlo trials")
        p.add_argument("--threshold", help="override SINR threshold, e.g. '2.0' or '3 dB'")

    p_cdf = sub.add_parser("cdf", help="conditional SINR pdf/cdf table")
    common(p_cdf)
    p_cdf.add_argument("--n-active", type=int, required=True, help="number of active users")

    p_outage = sub.add_parser("outage", help="unconditional outage probability")
    common(p_outage)

    p_sweep = sub.add_parser("sweep", help="outage versus a swept parameter")
    common(p_sweep)
    p_sweep.add_argument("--axis", required=True,
                         choices=("users", "semi_angle", "radius", "activation_prob"))
    p_sweep.add_argument("--values", required=True,
                         help="comma separated values (semi_angle in degrees)")

    p_val = sub.add_parser("validate", help="run the oracle check suite")
    common(p_val, modes=None)
    return parser


def _sweep_values(axis: str, text: str):
    vals = [float(v) for v in text.split(",") if v.strip()]
    if axis == "semi_angle":
        vals = [math.radians(v) for v in vals]
    if axis == "users":
        vals = [int(v) for v in vals]
    return vals


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig(
            defaulted=tuple(f.name for f in dataclasses.fields(RunConfig) if f.name != "defaulted")
        )
        overrides = {}
        if getattr(args, "seed", None) is not None:
            overrides["seed"] = args.seed
        if getattr(args, "trials", None) is not None:
            overrides["trials"] = args.trials
        if getattr(args, "threshold", None) is not None:
            overrides["threshold"] = _parse_threshold(args.threshold)
        cfg = with_overrides(cfg, **overrides)

        if args.command == "cdf":
            if args.n_active < 1:
                raise ConfigError(f"--n-active must be >= 1, got {args.n_active}")
            return cmd_cdf(cfg, args.n_active, args.mode, args.out)
        if args.command == "outage":
            return cmd_outage(cfg, args.mode, args.out)
        if args.command == "sweep":
            values = _sweep_values(args.axis, args.values)
            return cmd_sweep(cfg, args.axis, values, args.mode, args.out)
        return cmd_validate(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
