"""Serialisation of verification reports: JSON, CSV and plain text.

Output is a pure function of the report contents; timings are left out so
identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional

from .verify import Report

__all__ = ["SCHEMA_VERSION", "TORSION_COLUMNS", "CHECK_COLUMNS", "report_dict", "render", "emit",
           "validate_report"]

SCHEMA_VERSION = 1
TORSION_COLUMNS = ("index", "x", "u", "tau0", "tau1_norm", "tau2_norm", "tau3_norm",
                   "einstein_residual")
CHECK_COLUMNS = ("id", "passed", "expect", "points", "max_residual", "tolerance", "anchor")


def _num(v: float):
    v = float(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")


def report_dict(rep: Report) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": rep.command,
        "metric": rep.metric,
        "version": rep.version,
        "config": rep.config,
        "passed": rep.passed,
        "checks": [
            {"id": c.id, "anchor": c.anchor, "points": c.points,
             "max_residual": _num(c.max_residual), "tolerance": _num(c.tolerance),
             "expect": c.expect, "passed": c.passed}
            for c in rep.checks
        ],
        "torsion": [
            {"index": t.index, "x": [_num(v) for v in t.x], "u": [_num(v) for v in t.u],
             "tau0": _num(t.tau0), "tau1_norm": _num(t.tau1_norm), "tau2_norm": _num(t.tau2_norm),
             "tau3_norm": _num(t.tau3_norm), "einstein_residual": _num(t.einstein_residual),
             "expected": {k: _num(v) for k, v in sorted(t.expected.items())}}
            for t in rep.torsion
        ],
        "statistics": {k: (_num(v) if isinstance(v, float) else v)
                       for k, v in sorted(rep.statistics.items())},
        "notes": list(rep.notes),
    }


def _vec(v) -> str:
    return " ".join(repr(float(a)) for a in v)


def _csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rep.command == "torsion":
        w.writerow(TORSION_COLUMNS)
        for t in rep.torsion:
            w.writerow([t.index, _vec(t.x), _vec(t.u), repr(t.tau0), repr(t.tau1_norm),
                        repr(t.tau2_norm), repr(t.tau3_norm), repr(t.einstein_residual)])
    else:
        w.writerow(CHECK_COLUMNS)
        for c in rep.checks:
            w.writerow([c.id, int(c.passed), c.expect, c.points, repr(c.max_residual),
                        repr(c.tolerance), c.anchor])
    return buf.getvalue()


def _text(rep: Report) -> str:
    lines = [f"g2lab {rep.version}  {rep.command}  metric={rep.metric}  "
             f"samples={rep.config['samples']}  seed={rep.config['seed']}  "
             f"fd_step={rep.config['fd_step']:g}", ""]
    width = max((len(c.id) for c in rep.checks), default=0)
    for c in rep.checks:
        status = "PASS" if c.passed else "FAIL"
        tag = " (expected violation)" if c.expect == "violation" else ""
        lines.append(f"{status}  {c.id:<{width}}  max={c.max_residual:.3e}  tol={c.tolerance:.1e}"
                     f"  n={c.points}{tag}")
        lines.append(f"      {c.anchor}")
    if rep.torsion:
        taus = [t.tau0 for t in rep.torsion]
        lines += ["", f"tau0 range [{min(taus):.10f}, {max(taus):.10f}] over {len(taus)} points",
                  f"min |tau3| = {rep.statistics.get('min_tau3_norm', float('nan')):.6f}"]
    for n in rep.notes:
        lines.append(f"note: {n}")
    lines += ["", "OVERALL " + ("PASS" if rep.passed else "FAIL")]
    return "\n".join(lines) + "\n"


def render(rep: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report_dict(rep), indent=2) + "\n"
    if fmt == "csv":
        return _csv(rep)
    if fmt == "text":
        return _text(rep)
    raise ValueError(f"unknown format {fmt!r}")


def emit(rep: Report, fmt: str = "json", path: Optional[str] = None) -> str:
    """Render ``rep`` and write it to ``path`` (or return it only, if ``path`` is None)."""
    text = render(rep, fmt)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


_REQUIRED = {"schema": int, "command": str, "metric": str, "version": str, "config": dict,
             "passed": bool, "checks": list, "torsion": list, "statistics": dict, "notes": list}
_CHECK_KEYS = {"id", "anchor", "points", "max_residual", "tolerance", "expect", "passed"}


def validate_report(obj: dict) -> None:
    """Minimal schema check for a parsed JSON report; raises ``ValueError``."""
    for key, typ in _REQUIRED.items():
        if not isinstance(obj.get(key), typ):
            raise ValueError(f"field {key!r} missing or not {typ.__name__}")
    if obj["schema"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {obj['schema']}")
    for c in obj["checks"]:
        if set(c) != _CHECK_KEYS:
            raise ValueError(f"check record has keys {sorted(c)}")
        if c["expect"] not in ("hold", "violation"):
            raise ValueError(f"bad expect value {c['expect']!r}")
