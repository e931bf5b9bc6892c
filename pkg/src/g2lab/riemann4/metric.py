"""Single-chart Riemannian 4-manifolds: catalog, text ingestion and derivative access."""

from __future__ import annotations

import logging
import re
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
import sympy as sp

from .expr import ParseError, evaluate, parse_expr, to_sympy

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

log = logging.getLogger(__name__)

__all__ = [
    "ChartDomainError",
    "MetricError",
    "Domain",
    "MetricModel",
    "catalog",
    "CATALOG_NAMES",
    "parse_metric",
    "load_metric_config",
    "metric_from_mapping",
]

CATALOG_NAMES = ("flat", "sphere4", "hyperbolic4", "cp2", "s2xs2")

FD_STEP1 = 1e-5
FD_STEP2 = 1e-4


class ChartDomainError(ValueError):
    """Point outside the chart or too close to its boundary."""


class MetricError(ValueError):
    """Degenerate, asymmetric beyond repair, or otherwise unusable metric."""


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box, optionally intersected with an open ball ``|x| < radius``.

    ``sample_lower``/``sample_upper``/``sample_radius`` bound the region the
    verification sweeps draw from; they default to the domain shrunk by 20%.
    """

    lower: tuple = (-1.0,) * 4
    upper: tuple = (1.0,) * 4
    radius: Optional[float] = None
    sample_lower: Optional[tuple] = None
    sample_upper: Optional[tuple] = None
    sample_radius: Optional[float] = None

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != (4,) or hi.shape != (4,) or np.any(hi <= lo):
            raise ValueError("domain needs four increasing (lower, upper) bounds")
        for name in ("lower", "upper", "sample_lower", "sample_upper"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(float(t) for t in v))

    def boundary_distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        d = min(np.min(x - np.array(self.lower)), np.min(np.array(self.upper) - x))
        if self.radius is not None:
            d = min(d, self.radius - float(np.linalg.norm(x)))
        return float(d)

    def check(self, x, margin: float = 0.0) -> None:
        d = self.boundary_distance(x)
        if d <= margin:
            raise ChartDomainError(
                f"point {np.round(np.asarray(x, float), 6).tolist()} is within {margin:g} "
                f"of the chart boundary (distance {d:.3g})")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        lo = np.array(self.lower)
        hi = np.array(self.upper)
        slo = np.array(self.sample_lower) if self.sample_lower else lo + 0.2 * (hi - lo) / 2
        shi = np.array(self.sample_upper) if self.sample_upper else hi - 0.2 * (hi - lo) / 2
        srad = self.sample_radius
        if srad is None and self.radius is not None:
            srad = 0.8 * self.radius
        out = []
        while len(out) < n:
            x = rng.uniform(slo, shi)
            if srad is not None and np.linalg.norm(x) >= srad:
                continue
            out.append(x)
        return np.array(out).reshape(n, 4)


def _fd_first(g: Callable, x: np.ndarray, h: float) -> np.ndarray:
    # central differences plus one Richardson level, step scaled by |x_m|
    out = np.empty((4, 4, 4))
    for m in range(4):
        hm = h * max(1.0, abs(x[m]))
        e = np.zeros(4)
        e[m] = 1.0

        def central(s):
            return (g(x + s * e) - g(x - s * e)) / (2 * s)

        out[m] = (4 * central(hm / 2) - central(hm)) / 3
    return out


def _fd_second(g: Callable, x: np.ndarray, h: float) -> np.ndarray:
    out = np.empty((4, 4, 4, 4))
    g0 = g(x)
    for m in range(4):
        em = np.zeros(4)
        em[m] = h * max(1.0, abs(x[m]))
        out[m, m] = (g(x + em) - 2 * g0 + g(x - em)) / (em[m] ** 2)
        for n in range(m + 1, 4):
            en = np.zeros(4)
            en[n] = h * max(1.0, abs(x[n]))
            val = (g(x + em + en) - g(x + em - en) - g(x - em + en) + g(x - em - en)) / (
                4 * em[m] * en[n])
            out[m, n] = out[n, m] = val
    return out


@dataclass(frozen=True, eq=False)
class MetricModel:
    """A metric ``g(x)`` on a chart of R^4 with first and second derivatives.

    ``dg(x)[m, i, j] = d_m g_ij`` and ``d2g(x)[m, n, i, j] = d_m d_n g_ij``.  In
    ``"analytic"`` mode these come from symbolic differentiation; in ``"fd"``
    mode from central differences (first: step 1e-5 with one Richardson level;
    second: nested central differences with step 1e-4).
    """

    id: str
    g_func: Callable
    domain: Domain = field(default_factory=Domain)
    dg_func: Optional[Callable] = None
    d2g_func: Optional[Callable] = None
    derivative_mode: str = "analytic"
    params: dict = field(default_factory=dict)
    constant_curvature: Optional[float] = None
    expect_non_einstein: bool = False
    fd_step1: float = FD_STEP1
    fd_step2: float = FD_STEP2
    symbolic: Optional[sp.Matrix] = None

    def __post_init__(self):
        if self.derivative_mode not in ("analytic", "fd"):
            raise ValueError(f"unknown derivative mode {self.derivative_mode!r}")
        if self.derivative_mode == "analytic" and (self.dg_func is None or self.d2g_func is None):
            raise ValueError("analytic mode needs derivative functions")

    @property
    def label(self) -> str:
        if not self.params:
            return self.id
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.id}({args})"

    def g(self, x) -> np.ndarray:
        return np.asarray(self.g_func(np.asarray(x, dtype=float)), dtype=float).reshape(4, 4)

    def dg(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.derivative_mode == "fd":
            return _fd_first(self.g, x, self.fd_step1)
        return np.asarray(self.dg_func(x), dtype=float).reshape(4, 4, 4)

    def d2g(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.derivative_mode == "fd":
            return _fd_second(self.g, x, self.fd_step2)
        return np.asarray(self.d2g_func(x), dtype=float).reshape(4, 4, 4, 4)

    def with_fd_derivatives(self) -> "MetricModel":
        """Same metric, derivatives by finite differences."""
        return MetricModel(
            id=self.id, g_func=self.g_func, domain=self.domain, derivative_mode="fd",
            params=self.params, constant_curvature=self.constant_curvature,
            expect_non_einstein=self.expect_non_einstein, symbolic=self.symbolic)

    def check_positive_definite(self, points) -> None:
        for x in np.atleast_2d(points):
            gx = self.g(x)
            if not np.all(np.isfinite(gx)):
                raise MetricError(f"metric is not finite at {np.round(x, 6).tolist()}")
            eig = np.linalg.eigvalsh(0.5 * (gx + gx.T))
            if eig[0] <= 0:
                raise MetricError(
                    f"metric is not positive definite at {np.round(x, 6).tolist()} "
                    f"(smallest eigenvalue {eig[0]:.3g})")

    @classmethod
    def from_sympy(cls, id: str, G: sp.Matrix, symbols, domain: Domain, **kw) -> "MetricModel":
        """Lambdify ``G`` and its first and second partials."""
        G = sp.Matrix(G)
        syms = list(symbols)
        dG = [[[sp.diff(G[i, j], s) for j in range(4)] for i in range(4)] for s in syms]
        d2G = [[[[sp.diff(dG[m][i][j], s) for j in range(4)] for i in range(4)]
                for m in range(4)] for s in syms]
        # d2G built as [n][m][i][j] = d_n d_m g_ij, symmetric in (n, m)
        g_l = sp.lambdify(syms, G.tolist(), modules="numpy", cse=True)
        dg_l = sp.lambdify(syms, dG, modules="numpy", cse=True)
        d2g_l = sp.lambdify(syms, d2G, modules="numpy", cse=True)

        def wrap(fn, shape):
            def call(x):
                return np.array(fn(*np.asarray(x, dtype=float).reshape(4)), dtype=float).reshape(shape)
            return call

        return cls(id=id, g_func=wrap(g_l, (4, 4)), domain=domain,
                   dg_func=wrap(dg_l, (4, 4, 4)), d2g_func=wrap(d2g_l, (4, 4, 4, 4)),
                   symbolic=G, **kw)


_SYMS = sp.symbols("x1:5", real=True)


def _conformal(factor) -> sp.Matrix:
    return factor * sp.eye(4)


def _fubini_study(symbols) -> sp.Matrix:
    # Real part of the Hermitian metric d d-bar log(1 + |z|^2), z1 = x1 + i x2, z2 = x3 + i x4:
    # h_jk = delta_jk / N - conj(z_j) z_k / N^2 with conj(z_j) z_k = P_jk + i Q_jk.
    x1, x2, x3, x4 = symbols
    a, b = (x1, x3), (x2, x4)
    N = 1 + x1 ** 2 + x2 ** 2 + x3 ** 2 + x4 ** 2
    G = sp.zeros(4, 4)
    for j in range(2):
        for k in range(2):
            P = a[j] * a[k] + b[j] * b[k]
            Q = a[j] * b[k] - b[j] * a[k]
            re = (1 if j == k else 0) / N - P / N ** 2
            G[2 * j, 2 * k] = re
            G[2 * j + 1, 2 * k + 1] = re
            G[2 * j, 2 * k + 1] = -Q / N ** 2
            G[2 * j + 1, 2 * k] = Q / N ** 2
    return G


@lru_cache(maxsize=None)
def catalog(name: str, r1: float = 1.0, r2: float = 2.0,
            derivative_mode: str = "analytic") -> MetricModel:
    """Catalog metrics.

    ``flat``        Euclidean metric.
    ``sphere4``     round unit S^4 in stereographic coordinates, ``4 delta / (1+|x|^2)^2``.
    ``hyperbolic4`` Poincare ball, ``4 delta / (1-|x|^2)^2`` on ``|x| < 1``.
    ``cp2``         Fubini-Study metric in an affine chart (Einstein, Ric = 6 g).
    ``s2xs2``       product of round 2-spheres of radii ``r1``, ``r2`` in spherical
                    coordinates ``(theta1, phi1, theta2, phi2)``; non-Einstein unless r1 = r2.
    """
    x = _SYMS
    rsq = sum(s ** 2 for s in x)
    params: dict = {}
    kw: dict = {}
    if name == "flat":
        G = sp.eye(4)
        domain = Domain((-1.0,) * 4, (1.0,) * 4)
        kw["constant_curvature"] = 0.0
    elif name == "sphere4":
        G = _conformal(4 / (1 + rsq) ** 2)
        domain = Domain((-2.0,) * 4, (2.0,) * 4, sample_lower=(-1.0,) * 4, sample_upper=(1.0,) * 4)
        kw["constant_curvature"] = 1.0
    elif name == "hyperbolic4":
        G = _conformal(4 / (1 - rsq) ** 2)
        domain = Domain((-1.0,) * 4, (1.0,) * 4, radius=1.0, sample_radius=0.6)
        kw["constant_curvature"] = -1.0
    elif name == "cp2":
        G = _fubini_study(x)
        domain = Domain((-2.0,) * 4, (2.0,) * 4, sample_lower=(-1.0,) * 4, sample_upper=(1.0,) * 4)
    elif name == "s2xs2":
        if r1 <= 0 or r2 <= 0:
            raise ValueError("radii must be positive")
        t1, _, t2, _ = x
        G = sp.diag(r1 ** 2, r1 ** 2 * sp.sin(t1) ** 2, r2 ** 2, r2 ** 2 * sp.sin(t2) ** 2)
        domain = Domain((0.0, -np.pi, 0.0, -np.pi), (np.pi, np.pi, np.pi, np.pi),
                        sample_lower=(0.4, -2.5, 0.4, -2.5),
                        sample_upper=(np.pi - 0.4, 2.5, np.pi - 0.4, 2.5))
        params = {"r1": float(r1), "r2": float(r2)}
        kw["expect_non_einstein"] = not np.isclose(r1, r2)
    else:
        raise ValueError(f"unknown catalog metric {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    model = MetricModel.from_sympy(name, G, x, domain, params=params, **kw)
    if derivative_mode == "fd":
        model = model.with_fd_derivatives()
    return model


# -- text ingestion ------------------------------------------------------------

_KEY = re.compile(r"^g([1-4])([1-4])$")


def _strip_comments(src: str) -> str:
    # blank out comments so that columns stay meaningful
    return "\n".join(line.split("#", 1)[0].ljust(len(line)) for line in src.split("\n"))


def _entries(src: str):
    """Yield ``(key, expr_text, line, key_col, expr_col)`` for comma/newline separated entries."""
    src = _strip_comments(src)
    line, col = 1, 1
    start_line, start_col = 1, 1
    buf = []
    for ch in src + ",":
        if ch in ",\n":
            text = "".join(buf)
            if text.strip():
                yield _split_entry(text, start_line, start_col)
            buf = []
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
            start_line, start_col = line, col
            continue
        buf.append(ch)
        col += 1


def _split_entry(text: str, line: int, col: int):
    if "=" not in text:
        lead = len(text) - len(text.lstrip())
        raise ParseError("expected 'gij = expression'", line, col + lead)
    key_part, expr_part = text.split("=", 1)
    key = key_part.strip()
    key_col = col + len(key_part) - len(key_part.lstrip())
    if not _KEY.match(key):
        raise ParseError(f"invalid metric entry name {key!r}", line, key_col)
    expr_col = col + len(key_part) + 1
    return key, expr_part, line, key_col, expr_col


def metric_from_mapping(entries: dict, domain: Optional[Domain] = None, id: str = "custom",
                        derivative_mode: str = "analytic", positions: Optional[dict] = None,
                        check_points: int = 32, seed: int = 0, **kw) -> MetricModel:
    """Build a metric from ``{"g11": "expr", ...}``; missing entries are 0.

    Off-diagonal entries given on one side only are mirrored.  If both sides
    are given and differ by more than 1e-9 on the check points the metric is
    symmetrised by averaging and a warning is logged.
    """
    positions = positions or {}
    domain = domain or Domain()
    trees = {}
    for key, text in entries.items():
        m = _KEY.match(key)
        if m is None:
            raise ParseError(f"invalid metric entry name {key!r}", *positions.get(key, (1, 1)))
        line, col = positions.get(key, (1, 1))
        trees[(int(m.group(1)) - 1, int(m.group(2)) - 1)] = parse_expr(str(text), line, col)

    rng = np.random.default_rng(seed)
    pts = np.vstack([domain.sample(rng, check_points),
                     0.5 * (np.array(domain.lower) + np.array(domain.upper))[None, :]])
    if domain.radius is not None:
        pts = pts[np.linalg.norm(pts, axis=1) < domain.radius]

    G = sp.zeros(4, 4)
    for i in range(4):
        for j in range(i, 4):
            a, b = trees.get((i, j)), trees.get((j, i))
            if a is None and b is None:
                continue
            if a is None or b is None or i == j:
                G[i, j] = G[j, i] = to_sympy(a if a is not None else b, _SYMS)
                continue
            asym = max(abs(float(evaluate(a, p)) - float(evaluate(b, p))) for p in pts)
            ea, eb = to_sympy(a, _SYMS), to_sympy(b, _SYMS)
            if asym > 1e-9:
                log.warning("g%d%d and g%d%d differ by up to %.3g; averaging", i + 1, j + 1,
                            j + 1, i + 1, asym)
                G[i, j] = G[j, i] = (ea + eb) / 2
            else:
                G[i, j] = G[j, i] = ea

    model = MetricModel.from_sympy(id, G, _SYMS, domain, **kw)
    model.check_positive_definite(pts)
    if derivative_mode == "fd":
        model = model.with_fd_derivatives()
    return model


def parse_metric(src: str, domain: Optional[Domain] = None, **kw) -> MetricModel:
    """Parse ``"g11=..., g22=..., ..."`` (commas or newlines between entries)."""
    entries, positions = {}, {}
    for key, text, line, key_col, expr_col in _entries(src):
        if key in entries:
            raise ParseError(f"duplicate entry {key!r}", line, key_col)
        entries[key] = text
        positions[key] = (line, expr_col)
    if not entries:
        raise ParseError("no metric entries found", 1, 1)
    return metric_from_mapping(entries, domain=domain, positions=positions, **kw)


def load_metric_config(path) -> tuple[MetricModel, dict]:
    """Read a TOML metric file with ``[metric]``, ``[domain]`` and ``[options]`` tables.

    Returns the model and the ``[options]`` table.
    """
    with open(path, "rb") as fh:
        try:
            cfg = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(str(exc), getattr(exc, "lineno", 1) or 1,
                             getattr(exc, "colno", 1) or 1) from exc
    if "metric" not in cfg:
        raise ParseError("missing [metric] table", 1, 1)
    dom = cfg.get("domain", {})
    domain = Domain(
        lower=tuple(dom.get("lower", (-1.0,) * 4)),
        upper=tuple(dom.get("upper", (1.0,) * 4)),
        radius=dom.get("radius"),
        sample_lower=tuple(dom["sample_lower"]) if "sample_lower" in dom else None,
        sample_upper=tuple(dom["sample_upper"]) if "sample_upper" in dom else None,
        sample_radius=dom.get("sample_radius"),
    )
    opts = dict(cfg.get("options", {}))
    model = metric_from_mapping(
        {k: str(v) for k, v in cfg["metric"].items()},
        domain=domain,
        id=str(opts.get("name", "custom")),
        derivative_mode=opts.get("derivatives", "analytic"),
        expect_non_einstein=bool(opts.get("expect_non_einstein", False)),
    )
    if "fd_step1" in opts or "fd_step2" in opts:
        model = MetricModel(
            id=model.id, g_func=model.g_func, domain=model.domain, dg_func=model.dg_func,
            d2g_func=model.d2g_func, derivative_mode=model.derivative_mode,
            expect_non_einstein=model.expect_non_einstein, symbolic=model.symbolic,
            fd_step1=float(opts.get("fd_step1", FD_STEP1)),
            fd_step2=float(opts.get("fd_step2", FD_STEP2)))
    return model, opts
