"""Command-line front end: `ocs <command> [options]`.

Inputs come from an INI file (--config) with flags taking precedence.
Outputs are byte-stable: fixed column order, 17 significant digits, and a
sha256 of the resolved configuration in every file.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .barriers import DoubleRectangular, Rectangular, read_barrier_csv, validate_barrier
from .constants import PhysicalConstants, electron_constants
from .errors import ConfigError, NumericalError, OCSError
from .packets import (SERIES_COLUMNS, SpectrumSpec, transmitted_trace, group_event_times, norm_current_audit, propagate,
                      run_summary, series_rows)
from .stationary import solve
from .subprocesses import Which, build_subprocess, matching_report
from .sweeps import DOUBLE_COLUMNS, HARTMAN_COLUMNS, TABLE_COLUMNS, double_sweep, hartman_sweep, times_table

COMMANDS = ("solve", "decompose", "times", "propagate", "sweep-hartman", "sweep-double")


# parsing helpers


def parse_barrier(text: str):
    """rect:V0,a,b | double:V0,d,l,a | table:PATH"""
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    if kind == "table":
        if not body:
            raise ConfigError("barrier: table needs a CSV path, e.g. table:profile.csv")
        return read_barrier_csv(body)
    fields = {"rect": ("V0", "a", "b"), "double": ("V0", "d", "l", "a")}.get(kind)
    if fields is None:
        raise ConfigError(f"barrier: unknown kind {kind!r}; use rect:, double: or table:")
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != len(fields):
        raise ConfigError(f"barrier: {kind} needs {len(fields)} values ({','.join(fields)}), got {len(parts)}")
    values = []
    for name, p in zip(fields, parts):
        try:
            values.append(float(p))
        except ValueError:
            raise ConfigError(f"barrier: field {name} is not a number: {p!r}") from None
    spec = Rectangular(*values) if kind == "rect" else DoubleRectangular(*values)
    validate_barrier(spec)
    return spec


def _floats(text, name):
    if text is None or text == "":
        return []
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = str(text).replace(",", " ").split()
    try:
        return [float(v) for v in items]
    except ValueError:
        raise ConfigError(f"{name}: expected numbers, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI file; flags override its keys")
    common.add_argument("--out", type=Path, help="output directory (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--workers", type=int, help="worker processes for row-parallel commands")
    common.add_argument("--barrier", help="rect:V0,a,b | double:V0,d,l,a | table:PATH")
    common.add_argument("--energy", nargs="+", help="energies in eV")
    common.add_argument("--k", nargs="+", help="wave numbers in 1/nm")
    common.add_argument("--hbar", type=float, help="hbar in eV fs")
    common.add_argument("--hbar2-over-2m", type=float, dest="hbar2_over_2m", help="hbar^2/2m in eV nm^2")

    p = argparse.ArgumentParser(prog="ocs", description="Stationary and wave-packet tunnelling-time toolkit.")
    p.add_argument("--version", action="version", version=f"ocs {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="amplitudes, T, R and phases per k")
    sub.add_parser("decompose", parents=[common], help="subprocess matching residuals per k")
    sub.add_parser("times", parents=[common], help="all characteristic times per k")
    pp = sub.add_parser("propagate", parents=[common], help="wave-packet simulation and centre-of-mass trace")
    pp.add_argument("--l0", type=float, help="spectral width parameter in nm")
    pp.add_argument("--cutoff", type=float, help="k half-width in units of 1/l0")
    pp.add_argument("--L", type=float, dest="L", help="arrival distance beyond b in nm (default a)")
    pp.add_argument("--dx", type=float, help="spatial step in nm")
    sh = sub.add_parser("sweep-hartman", parents=[common], help="times against barrier width")
    sh.add_argument("--values", help="widths d in nm (comma list)")
    sh.add_argument("--kd-values", dest="kd_values", help="widths in units of 1/kappa (comma list)")
    sd = sub.add_parser("sweep-double", parents=[common], help="double-barrier times against gap width")
    sd.add_argument("--values", help="gap widths l in nm (comma list)")
    return p


SECTION_KEYS = {
    "barrier": ("barrier",),
    "energy": ("energy", "k"),
    "constants": ("hbar", "hbar2_over_2m"),
    "spectrum": ("l0", "cutoff", "L", "dx"),
    "sweep": ("values", "kd_values"),
    "run": ("out", "format", "workers"),
}


def resolve(args) -> dict:
    """Merge the INI file and flags into one flat, canonical configuration."""
    cfg = {}
    if args.config is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        if not parser.read(args.config):
            raise ConfigError(f"config: cannot read {args.config}")
        for section in parser.sections():
            allowed = SECTION_KEYS.get(section)
            if allowed is None:
                raise ConfigError(f"config: unknown section [{section}]")
            for key, value in parser.items(section):
                if key not in allowed:
                    raise ConfigError(f"config: unknown key {key!r} in [{section}]")
                cfg[key] = value
    for key in ("barrier", "energy", "k", "hbar", "hbar2_over_2m", "l0", "cutoff", "L", "dx", "values",
                "kd_values", "out", "format", "workers"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = " ".join(v) if isinstance(v, list) else v
            # a flag for one energy form replaces the other one from the file
            other = {"energy": "k", "k": "energy", "values": "kd_values", "kd_values": "values"}.get(key)
            if other and getattr(args, other, None) is None:
                cfg.pop(other, None)
    cfg["command"] = args.command
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in cfg.items()}


def config_hash(cfg: dict) -> str:
    canon = {k: str(v) for k, v in cfg.items() if k not in ("out", "format", "workers")}
    return hashlib.sha256(json.dumps(canon, sort_keys=True).encode()).hexdigest()


def _consts(cfg) -> PhysicalConstants:
    base = electron_constants()
    hbar = float(cfg.get("hbar", base.hbar))
    c2 = float(cfg.get("hbar2_over_2m", base.hbar2_over_2m))
    return PhysicalConstants(hbar, c2)


def _barrier(cfg):
    if "barrier" not in cfg:
        raise ConfigError("barrier: missing (use --barrier or [barrier] barrier = ...)")
    return parse_barrier(str(cfg["barrier"]))


def _wavenumbers(cfg, consts) -> list:
    E = _floats(cfg.get("energy"), "energy")
    k = _floats(cfg.get("k"), "k")
    if bool(E) == bool(k):
        raise ConfigError("energy: give exactly one of energy (eV) or k (1/nm)")
    if E:
        if any(e <= 0 for e in E):
            raise ConfigError("energy: values must be positive")
        return [float(consts.wavenumber(e)) for e in E]
    return k


# output writers


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(columns, rows, digest: str) -> str:
    buf = io.StringIO()
    buf.write(f"# ocs {__version__} config_sha256={digest}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        values = [r[c] for c in columns] if isinstance(r, dict) else list(r)
        buf.write(",".join(_fmt(v) for v in values) + "\n")
    return buf.getvalue()


def _json_value(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v[k], indent, level + 1)}" for k in sorted(v, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if len(v) == 0:
            return "[]"
        return "[\n" + ",\n".join(pad + _json_value(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if isinstance(v, (complex, np.complexfloating)):
        return _json_value({"re": v.real, "im": v.imag}, indent, level)
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g") if math.isfinite(v) else "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return "null"
    return json.dumps(str(v))


def to_json(payload, digest: str) -> str:
    return _json_value({"ocs_version": __version__, "config_sha256": digest, **payload}, 2, 0) + "\n"


def _emit(cfg, digest, name, columns, rows, summary=None):
    fmt = cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format: expected csv or json, got {fmt!r}")
    if fmt == "csv":
        text = to_csv(columns, rows, digest)
    else:
        payload = {"columns": list(columns), "rows": [r if isinstance(r, dict) else dict(zip(columns, r))
                                                     for r in rows]}
        if summary is not None:
            payload["summary"] = summary
        text = to_json(payload, digest)
    outputs = [(f"{name}.{fmt}", text)]
    if fmt == "csv" and summary is not None:
        outputs.append((f"{name}_summary.json", to_json({"summary": summary}, digest)))
    _write(cfg, outputs)


def _write(cfg, outputs):
    out = cfg.get("out")
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for fname, text in outputs:
            (d / fname).write_text(text)
    else:
        sys.stdout.write("".join(text for _, text in outputs))


def _map(fn, items, cfg):
    workers = int(cfg.get("workers", 1) or 1)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# commands

SOLVE_COLUMNS = ("k_nm-1", "E_eV", "T", "R", "log_T", "J_rad", "lambda_rad", "a_out_re", "a_out_im",
                 "b_out_re", "b_out_im", "A_tr_re", "A_tr_im", "A_ref_re", "A_ref_im", "regime")


def _solve_row(args):
    k, spec, consts = args
    s = solve(k, spec, consts)
    return {"k_nm-1": k, "E_eV": s.E, "T": s.T, "R": s.R, "log_T": s.log_T, "J_rad": s.J, "lambda_rad": s.lam,
            "a_out_re": s.a_out.real, "a_out_im": s.a_out.imag, "b_out_re": s.b_out.real,
            "b_out_im": s.b_out.imag, "A_tr_re": s.A_tr_in.real, "A_tr_im": s.A_tr_in.imag,
            "A_ref_re": s.A_ref_in.real, "A_ref_im": s.A_ref_in.imag, "regime": s.regime.value}


DECOMPOSE_COLUMNS = ("k_nm-1", "T", "R", "superposition_residual", "phase_jump", "phase_slope_jump",
                     "modulus_jump", "modulus_slope_sum", "current_jump", "modulus_slope_left",
                     "modulus_slope_right", "c_ref_source", "ref_continuity_at_a")


def _decompose_row(args):
    k, spec, consts = args
    from .stationary import evaluate_total

    sol = solve(k, spec, consts)
    tr = build_subprocess(sol, Which.TRANSMISSION)
    rf = build_subprocess(sol, Which.REFLECTION)
    x = np.linspace(spec.a - 2 * spec.d, spec.b + 2 * spec.d, 801)
    tot = evaluate_total(sol, x)[0]
    sup = float(np.max(np.abs(tr(x) + rf(x) - tot)) / np.max(np.abs(tot)))
    rep = matching_report(tr)
    return {"k_nm-1": k, "T": sol.T, "R": sol.R, "superposition_residual": sup, **rep.__dict__,
            "c_ref_source": rf.c_ref_source, "ref_continuity_at_a": rf.continuity_residual_at_a}


def _times_row(args):
    k, spec, consts = args
    return times_table(k, spec, consts)


def cmd_solve(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    rows = _map(_solve_row, [(k, spec, consts) for k in _wavenumbers(cfg, consts)], cfg)
    _emit(cfg, digest, "solve", SOLVE_COLUMNS, rows)


def cmd_decompose(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    rows = _map(_decompose_row, [(k, spec, consts) for k in _wavenumbers(cfg, consts)], cfg)
    _emit(cfg, digest, "decompose", DECOMPOSE_COLUMNS, rows)


def cmd_times(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    rows = _map(_times_row, [(k, spec, consts) for k in _wavenumbers(cfg, consts)], cfg)
    _emit(cfg, digest, "times", TABLE_COLUMNS, rows)


def cmd_propagate(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    ks = _wavenumbers(cfg, consts)
    if len(ks) != 1:
        raise ConfigError("energy: propagate takes a single central energy or k")
    l0 = float(cfg.get("l0", 10.0))
    spectrum = SpectrumSpec(ks[0], l0, float(cfg.get("cutoff", 6.0)))
    L = float(cfg["L"]) if "L" in cfg else None
    series = propagate(spectrum, spec, consts, L=L, dx=float(cfg.get("dx", 0.1)))
    audit = norm_current_audit(series)
    try:
        events = group_event_times(series, consts=consts)
    except NumericalError as exc:
        events = None
        note = type(exc).__name__
    else:
        note = ""
    summary = run_summary(series, events, audit)
    summary["events_note"] = note
    trace = transmitted_trace(series, consts)
    fmt = cfg.get("format", "csv")
    if fmt == "json":
        payload = {"summary": summary,
                   "series": {"columns": list(SERIES_COLUMNS), "rows": series_rows(series).tolist()},
                   "trace": {"columns": ["t_fs", "X_tr_nm", "X_tr_in_nm"], "rows": trace.tolist()}}
        _write(cfg, [("propagate.json", to_json(payload, digest))])
    else:
        _write(cfg, [("propagate_series.csv", to_csv(SERIES_COLUMNS, series_rows(series), digest)),
                     ("propagate_trace.csv", to_csv(("t_fs", "X_tr_nm", "X_tr_in_nm"), trace, digest)),
                     ("propagate_summary.json", to_json({"summary": summary}, digest))])


def cmd_sweep_hartman(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    if not isinstance(spec, Rectangular):
        raise ConfigError("barrier: sweep-hartman needs a rect: barrier (its width is replaced by the sweep)")
    ks = _wavenumbers(cfg, consts)
    if len(ks) != 1:
        raise ConfigError("energy: sweep-hartman takes a single energy or k")
    k = ks[0]
    d = _floats(cfg.get("values"), "values")
    kd = _floats(cfg.get("kd_values"), "kd_values")
    if d and kd:
        raise ConfigError("values: give either values (nm) or kd_values (1/kappa), not both")
    E = float(consts.energy(k))
    if not d:
        if not E < spec.V0:
            raise ConfigError("kd_values: widths in units of 1/kappa need E < V0; give values in nm")
        kappa = float(consts.kappa(spec.V0, E))
        d = [v / kappa for v in (kd or range(4, 17))]
    res = hartman_sweep(k, spec.V0, d, a=spec.a, consts=consts, workers=int(cfg.get("workers", 1) or 1))
    _emit(cfg, digest, "sweep_hartman", HARTMAN_COLUMNS, res.rows, res.summary)


def cmd_sweep_double(cfg, digest):
    consts, spec = _consts(cfg), _barrier(cfg)
    if not isinstance(spec, DoubleRectangular):
        raise ConfigError("barrier: sweep-double needs a double: barrier (its gap is replaced by the sweep)")
    ks = _wavenumbers(cfg, consts)
    if len(ks) != 1:
        raise ConfigError("energy: sweep-double takes a single energy or k")
    k = ks[0]
    ls = _floats(cfg.get("values"), "values") or list(np.linspace(0.1, 0.9, 9) * 2 * math.pi / k)
    res = double_sweep(k, spec.V0, spec.d_barrier, ls, a=spec.a, consts=consts,
                       workers=int(cfg.get("workers", 1) or 1))
    _emit(cfg, digest, "sweep_double", DOUBLE_COLUMNS, res.rows, res.summary)


HANDLERS = {"solve": cmd_solve, "decompose": cmd_decompose, "times": cmd_times, "propagate": cmd_propagate,
            "sweep-hartman": cmd_sweep_hartman, "sweep-double": cmd_sweep_double}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        HANDLERS[args.command](cfg, config_hash(cfg))
    except OCSError as exc:
        print(f"ocs {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
