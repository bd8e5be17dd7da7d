"""Command-line interface: ``python3 -m quadspec {spectrum,verify,reconcile,duality}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import __version__
from .repcheck import FitError, check_representation
from .repfinder import (
    DiscrepancyRecord,
    duality_check,
    find_representations,
    proportionality,
    reconcile_generic,
    sample_points,
    spectrum_table,
)
from .systems import CHARGES, SYSTEMS, ChargeError, CriticalCoupling, check_charges, factored_phi

SCHEMA = "specgen/1"
ENGINE = f"quadspec {__version__}"
FORMATS = ("json", "csv", "table")
CSV_COLUMNS = ("p", "E", "u", "positivity_ok", "pairing_i", "pairing_j", "n_discrepancies")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NO_REP = 2
EXIT_CONFIG = 3

DEFAULT_CHARGES = {
    "micz3d": {"m": 0.5, "s": 1.0, "c1": 0.3, "c2": 0.2},
    "osc4d": {"m": 0.5, "s": 1.0, "c1": 0.3, "c2": 0.2, "omega": 1.0},
    "miczs3": {"m": 0.5, "mu": 1.0, "alpha": 1.0, "R": 2.0},
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    system: str = ""
    parameters: dict = field(default_factory=dict)
    p_max: int = 3
    tolerance: float = 1e-10
    reading: str = "A"
    format: str = "json"
    out: str | None = None
    grid: int = 10
    self_test: bool = False

    def validate(self, need_system: bool = True) -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format: {self.format}")
        if self.reading not in ("A", "B"):
            raise ConfigError(f"unknown reading: {self.reading}")
        if self.p_max < 0:
            raise ConfigError("p_max must be >= 0")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if not need_system:
            return
        if self.system not in SYSTEMS:
            raise ConfigError(f"unknown system: {self.system!r}")
        try:
            check_charges(self.system, self.parameters)
        except ChargeError as exc:
            raise ConfigError(str(exc)) from None

    def echo(self) -> dict:
        return {
            "system": self.system,
            "parameters": {k: self.parameters[k] for k in sorted(self.parameters)},
            "p_max": self.p_max,
            "tolerance": self.tolerance,
            "reading": self.reading,
        }


@dataclass
class RunReport:
    command: str
    config: dict
    rows: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    oracle: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "engine": ENGINE,
            "command": self.command,
            "config": self.config,
            "rows": self.rows,
            "discrepancies": self.discrepancies,
            "oracle": self.oracle,
            "exit_status": self.exit_status,
        }


def _clean(obj):
    # NaN and infinities have no JSON literal
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, (np.floating,)):
        return _clean(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def fmt_float(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else ""


def record_dict(rec: DiscrepancyRecord) -> dict:
    return {"tag": rec.tag, "printed": rec.printed, "derived": rec.derived,
            "deviation": rec.deviation, "note": rec.note}


def render_json(report: RunReport) -> str:
    return json.dumps(_clean(report.as_dict()), indent=2, allow_nan=False) + "\n"


def render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.rows:
        if "E" not in row:
            continue
        w.writerow([row["p"], fmt_float(row["E"]), fmt_float(row["u"]), str(row["positivity_ok"]).lower(),
                    row["pairing_i"], row["pairing_j"], len(row.get("discrepancies", ()))])
    return buf.getvalue()


def render_table(report: RunReport) -> str:
    lines = [f"{report.command}  {report.config.get('system', '')}  ({ENGINE})"]
    if report.rows:
        keys = [k for k in report.rows[0] if not isinstance(report.rows[0][k], (list, dict))]
        lines.append("  ".join(f"{k:>14}" for k in keys))
        for row in report.rows:
            cells = []
            for k in keys:
                v = row.get(k)
                cells.append(f"{v:>14.10g}" if isinstance(v, float) else f"{str(v):>14}")
            lines.append("  ".join(cells))
    for rec in report.discrepancies:
        lines.append(f"discrepancy {rec['tag']}: printed {rec['printed']!r} derived {rec['derived']!r}")
    for k, v in report.oracle.items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def render(report: RunReport, fmt: str) -> str:
    return {"json": render_json, "csv": render_csv, "table": render_table}[fmt](report)


def cmd_spectrum(cfg: RunConfig) -> RunReport:
    rows = spectrum_table(cfg.system, cfg.parameters, cfg.p_max, cfg.tolerance)
    report = RunReport("spectrum", cfg.echo())
    for r in rows:
        recs = [record_dict(d) for d in r.discrepancies]
        report.rows.append({
            "p": r.p, "E": r.E, "u": r.u, "positivity_ok": r.positivity_ok,
            "pairing_i": r.pairing[0], "pairing_j": r.pairing[1],
            "descriptors": list(r.rep.descriptors), "continuum_ok": r.rep.continuum_ok,
            "discrepancies": recs,
        })
        report.discrepancies.extend({"p": r.p, **d} for d in recs)
    missing = sorted(set(range(cfg.p_max + 1)) - {r.p for r in rows})
    report.oracle = {"p_without_representation": missing}
    report.exit_status = EXIT_NO_REP if missing else EXIT_OK
    return report


def cmd_verify(cfg: RunConfig) -> RunReport:
    report = RunReport("verify", cfg.echo())
    bound = cfg.tolerance * 100
    worst = 0.0
    failed = False
    for p in range(cfg.p_max + 1):
        for rep in find_representations(cfg.system, cfg.parameters, p, cfg.tolerance):
            if not rep.accepted:
                continue
            row = {"p": p, "E": rep.E, "u": rep.u, "pairing_i": rep.pairing[0], "pairing_j": rep.pairing[1]}
            try:
                res = check_representation(cfg.system, rep)
            except (FitError, ValueError) as exc:
                row["error"] = str(exc)
                failed = True
                report.rows.append(row)
                continue
            cas = res["casimir"]
            norm = 1 + abs(cas.value)
            row.update({
                "ladder": res["ladder"],
                "algebra_ab": res["algebra"].ab,
                "algebra_ac": res["algebra"].ac,
                "algebra_bc": res["algebra"].bc,
                "fit_residual": res["fit_residual"],
                "casimir_matrix": cas.value,
                "casimir_closed": cas.closed,
                "casimir_spread": cas.spread / norm,
                "casimir_offdiag": cas.offdiag / norm,
                "ratio_spread": res["ratio_spread"],
            })
            checked = (row["ladder"], res["algebra"].max_residual, row["fit_residual"],
                       row["casimir_spread"], row["casimir_offdiag"])
            worst = max(worst, *checked)
            failed |= any(v >= bound for v in checked)
            if cas.discrepancy is not None:
                report.discrepancies.append({"p": p, **record_dict(cas.discrepancy)})
            report.rows.append(row)
    report.oracle = {"max_residual": worst, "threshold": bound, "representations": len(report.rows)}
    report.exit_status = EXIT_FAIL if failed else EXIT_OK
    return report


def reconcile_rows(system: str, charges: Mapping[str, float], p_max: int, tol: float) -> list[dict]:
    rows = []
    for p in range(p_max + 1):
        reps = [r for r in find_representations(system, charges, p, tol) if r.accepted]
        if not reps:
            rows.append({"system": system, "p": p, "outcome": "no accepted representation"})
            continue
        rep = reps[0]
        for reading in ("A", "B"):
            for corrected in (False, True):
                res = reconcile_generic(system, rep, reading, corrected)
                row = {"system": system, "p": p, "E": rep.E, "reading": reading,
                       "factored": "corrected" if corrected else "printed"}
                if isinstance(res, DiscrepancyRecord):
                    row.update({"outcome": "discrepancy", "record": record_dict(res)})
                else:
                    row.update({"outcome": "constant", "constant": res})
                rows.append(row)
    return rows


def self_test_constant() -> float:
    fac = factored_phi("micz3d", 2, {"m": 1.0, "s": 0.0, "c1": 0.0, "c2": 0.0})
    poly = fac.poly()
    res = proportionality(lambda x: 2 * poly(x), poly, sample_points(2))
    return res if not isinstance(res, DiscrepancyRecord) else math.nan


def cmd_reconcile(cfg: RunConfig) -> RunReport:
    report = RunReport("reconcile", cfg.echo())
    if cfg.self_test:
        report.rows.append({"outcome": "constant", "constant": self_test_constant(), "self_test": True})
        return report
    targets = [(cfg.system, cfg.parameters)] if cfg.system else [(s, DEFAULT_CHARGES[s]) for s in SYSTEMS]
    for system, charges in targets:
        report.rows.extend(reconcile_rows(system, charges, cfg.p_max, cfg.tolerance))
    counts: dict = {}
    for row in report.rows:
        counts[row["outcome"]] = counts.get(row["outcome"], 0) + 1
    report.oracle = {"outcomes": {k: counts[k] for k in sorted(counts)}}
    report.exit_status = EXIT_OK
    return report


def cmd_duality(p_max: int, grid: int) -> RunReport:
    if p_max < 0 or grid < 1:
        raise ConfigError("need p_max >= 0 and grid >= 1")
    ms = np.linspace(0.0, 5.0, grid) if grid > 1 else np.array([0.0])
    worst = 0.0
    points = 0
    for p in range(p_max + 1):
        for m1 in ms:
            for m2 in ms:
                worst = max(worst, duality_check(p, float(m1), float(m2)))
                points += 1
    report = RunReport("duality", {"p_max": p_max, "grid": grid})
    report.oracle = {"max_residual": worst, "points": points}
    report.exit_status = EXIT_OK if worst < 1e-12 else EXIT_FAIL
    return report


def _parse_param(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise ConfigError(f"malformed --param {text!r}, expected key=value")
    key, val = text.split("=", 1)
    try:
        return key.strip(), float(val)
    except ValueError:
        raise ConfigError(f"non-numeric value for {key}: {val!r}") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg.system = data.get("system", "")
        cfg.parameters = {k: float(v) for k, v in data.get("parameters", {}).items()}
        for key in ("p_max", "tolerance", "reading", "format", "out", "grid"):
            if key in data:
                setattr(cfg, key, data[key])
    if args.system:
        cfg.system = args.system
    for item in args.param or ():
        k, v = _parse_param(item)
        cfg.parameters[k] = v
    for attr, key in (("p_max", "p_max"), ("tol", "tolerance"), ("reading", "reading"),
                      ("format", "format"), ("out", "out"), ("grid", "grid")):
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, key, val)
    cfg.self_test = bool(getattr(args, "self_test", False))
    cfg.p_max = int(cfg.p_max)
    return cfg


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", choices=None, help="micz3d, osc4d or miczs3")
    common.add_argument("--param", action="append", metavar="KEY=VALUE", help="central charge (repeatable)")
    common.add_argument("--config", metavar="FILE", help="JSON config; flags override it")
    common.add_argument("--p-max", dest="p_max", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--reading", choices=("A", "B"))
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out", metavar="FILE")
    parser = argparse.ArgumentParser(prog="quadspec", description=__doc__)
    parser.add_argument("--version", action="version", version=ENGINE)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="accepted representations up to p_max")
    sub.add_parser("verify", parents=[common], help="matrix oracle over accepted representations")
    rec = sub.add_parser("reconcile", parents=[common], help="generic vs factored structure function")
    rec.add_argument("--self-test", action="store_true", help="factored form against twice itself")
    dual = sub.add_parser("duality", parents=[common], help="Coulomb-oscillator spectrum identity")
    dual.add_argument("--grid", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "duality":
            cfg.validate(need_system=False)
            report = cmd_duality(cfg.p_max, cfg.grid)
        elif args.command == "reconcile":
            cfg.validate(need_system=bool(cfg.system) and not cfg.self_test)
            report = cmd_reconcile(cfg)
        else:
            cfg.validate()
            report = cmd_spectrum(cfg) if args.command == "spectrum" else cmd_verify(cfg)
    except (ConfigError, ChargeError, CriticalCoupling) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_status


__all__ = ["RunConfig", "RunReport", "main", "cmd_spectrum", "cmd_verify", "cmd_reconcile",
           "cmd_duality", "CHARGES"]
