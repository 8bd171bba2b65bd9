"""Two-particle sector of the scattering operator S_phi.

Kernels on the (1,1) sector are functions ``f(p, q)`` of the momenta of one
psi and one psibar excitation.  Bosonic one-particle waves ``Psi(s)`` live
in L2(R+, s ds) and embed as ``-Psi(p+q)/(2 pi)``; the line average ``e0``
projects onto that image.

The four blocks of the two-particle multiplier M_phi are not materialised:
the bosonic (1,1)x(1,1) sector only ever sees the product of the four
phases in :func:`s_phi_4pt`, and its compression to the bosonic subspace is
the function ``phi_tilde`` computed here by quadrature.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .inner import InnerFunction, check_conjugate, evaluate, is_exponential, to_spec
from .quadrature import QuadratureSpec, composite_rule, integrate_lines, integrate_square
from .report import CheckReport

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class Grid1D:
    nodes: np.ndarray
    weights: np.ndarray
    p_max: float

    def __post_init__(self):
        if np.any(self.nodes <= 0) or np.any(np.diff(self.nodes) <= 0):
            raise ValueError("grid nodes must be positive and strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("grid weights must be positive")


def gauss_grid(p_max: float = 20.0, nodes: int = 64, panels: int = 4) -> Grid1D:
    """``nodes`` Gauss-Legendre points on (0, p_max], split over ``panels`` panels."""
    if nodes % panels:
        raise ValueError("nodes must be a multiple of panels")
    x, w = composite_rule(0.0, p_max, panels, nodes // panels)
    return Grid1D(x, w, p_max)


@dataclass(frozen=True)
class BoseWave:
    sampler: Callable[[np.ndarray], np.ndarray]

    def __call__(self, s):
        return self.sampler(np.asarray(s, dtype=float))

    def norm2(self, grid: Grid1D) -> float:
        """``int |Psi(s)|^2 s ds`` over the grid."""
        v = self(grid.nodes)
        return float(np.sum(np.abs(v) ** 2 * grid.nodes * grid.weights))


@dataclass(frozen=True)
class Kernel11:
    """Sampled (1,1) kernel.

    ``box = (p_lo, p_hi, q_lo, q_hi)`` declares that the kernel vanishes
    outside that rectangle (and is smooth inside); line integrals then
    split at its edges instead of resolving the jump by refinement.
    """

    sampler: Callable[[np.ndarray, np.ndarray], np.ndarray]
    box: tuple[float, float, float, float] | None = None

    def __call__(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        vals = np.asarray(self.sampler(p, q), dtype=complex)
        if self.box is not None:
            p_lo, p_hi, q_lo, q_hi = self.box
            inside = (p >= p_lo) & (p <= p_hi) & (q >= q_lo) & (q <= q_hi)
            vals = np.where(inside, vals, 0)
        return np.broadcast_to(vals, np.broadcast_shapes(p.shape, q.shape))

    def on_grid(self, grid: Grid1D) -> np.ndarray:
        return self(grid.nodes[:, None], grid.nodes[None, :])


def l2_norm(values: np.ndarray, grid: Grid1D) -> float:
    """Plain two-variable L2 norm of values sampled on ``grid x grid``."""
    w = grid.weights
    return math.sqrt(float(w @ np.abs(values) ** 2 @ w))


def iota_embed(psi: BoseWave) -> Kernel11:
    return Kernel11(lambda p, q: -psi(p + q) / (2 * math.pi))


def e0_project(f: Kernel11, quad: QuadratureSpec = QuadratureSpec()) -> Kernel11:
    """Line average ``(1/(p+q)) int_0^{p+q} f(p+q-x, x) dx``."""

    def sampler(p, q):
        s = np.asarray(p + q, dtype=float)
        lo = np.zeros_like(s)
        hi = s.copy()
        if f.box is not None:
            p_lo, p_hi, q_lo, q_hi = f.box
            lo = np.maximum.reduce([lo, np.full_like(s, q_lo), s - p_hi])
            hi = np.minimum.reduce([hi, np.full_like(s, q_hi), s - p_lo])
        hi = np.maximum(hi, lo)
        flat_s = s.ravel()
        vals, _ = integrate_lines(
            lambda x: f.sampler(flat_s[:, None] - x, x), lo.ravel(), hi.ravel(), quad
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(flat_s > 0, vals / flat_s, 0)
        return out.reshape(s.shape)

    return Kernel11(sampler)


def v_phi_11(phi: InnerFunction, f: Kernel11) -> Kernel11:
    """One-sided Longo-Witten action ``phi(p) phi_check(q) f(p, q)``."""
    phic = check_conjugate(phi)
    return Kernel11(lambda p, q: evaluate(phi, p) * evaluate(phic, q) * f.sampler(p, q), f.box)


def lw_invariance_residual(
    phi: InnerFunction,
    psi: BoseWave,
    quad: QuadratureSpec = QuadratureSpec(),
    grid: Grid1D | None = None,
) -> float:
    """Relative size of the part of ``V_phi iota(Psi)`` outside the bosonic image."""
    grid = grid or gauss_grid()
    g = v_phi_11(phi, iota_embed(psi))
    gv = g.on_grid(grid)
    norm = l2_norm(gv, grid)
    if not norm > 0:
        raise ValueError("degenerate wave: V_phi iota(Psi) vanishes on the grid")
    proj = e0_project(g, quad).on_grid(grid)
    return l2_norm(gv - proj, grid) / norm


def s_phi_4pt(phi: InnerFunction, p, q, pbar, qbar):
    """Multiplier of S_phi on the (1,1)x(1,1) sector."""
    phic = check_conjugate(phi)
    return (
        evaluate(phi, np.multiply(p, pbar))
        * evaluate(phic, np.multiply(q, pbar))
        * evaluate(phic, np.multiply(p, qbar))
        * evaluate(phi, np.multiply(q, qbar))
    )


def phi_prime(phi: InnerFunction, p: float, q: float, quad: QuadratureSpec = QuadratureSpec()) -> complex:
    """Average of the four-phase product over the rectangle [0,p] x [0,q]."""
    if not (p > 0 and q > 0):
        raise ValueError(f"phi_prime needs p, q > 0, got {(p, q)}")
    phic = check_conjugate(phi)

    def integrand(u, v):
        x, y = p * u, q * v
        return (
            evaluate(phi, (p - x) * (q - y))
            * evaluate(phi, x * y)
            * evaluate(phic, (p - x) * y)
            * evaluate(phic, x * (q - y))
        )

    value, _ = integrate_square(integrand, quad)
    return value


def phi_tilde(phi: InnerFunction, s: float, quad: QuadratureSpec = QuadratureSpec()) -> complex:
    return phi_prime(phi, s, 1.0, quad)


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    if not (0 < lo <= hi) or n < 1:
        raise ValueError(f"log grid needs 0 < lo <= hi and n >= 1, got {(lo, hi, n)}")
    return np.geomspace(lo, hi, n)


@dataclass
class ProductionReport:
    phi_spec: str
    s: np.ndarray
    phi_tilde: np.ndarray
    tol: float
    elastic_modulus: np.ndarray = field(init=False)
    elastic_mod_squared: np.ndarray = field(init=False)

    def __post_init__(self):
        self.elastic_modulus = np.abs(self.phi_tilde)
        self.elastic_mod_squared = self.elastic_modulus**2

    @property
    def bound_ok(self) -> bool:
        return bool(np.all(self.elastic_modulus <= 1 + BOUND_SLACK))

    @property
    def production(self) -> bool:
        return bool(np.any(self.elastic_modulus < 1 - 10 * self.tol))

    @property
    def min_modulus(self) -> float:
        return float(self.elastic_modulus.min())

    CSV_COLUMNS = ("s", "re_phi_tilde", "im_phi_tilde", "abs_phi_tilde", "abs2_phi_tilde")

    def rows(self):
        for s, v, m, m2 in zip(self.s, self.phi_tilde, self.elastic_modulus, self.elastic_mod_squared):
            yield float(s), float(v.real), float(v.imag), float(m), float(m2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        for row in self.rows():
            w.writerow([repr(x) for x in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "phi": self.phi_spec,
            "tol": self.tol,
            "bound_ok": self.bound_ok,
            "production": self.production,
            "min_modulus": self.min_modulus,
            "table": [dict(zip(self.CSV_COLUMNS, row)) for row in self.rows()],
        }


def production_report(
    phi: InnerFunction, s_grid, quad: QuadratureSpec = QuadratureSpec()
) -> ProductionReport:
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any(s_grid <= 0):
        raise ValueError("s grid must be positive")
    vals = np.array([phi_tilde(phi, float(s), quad) for s in s_grid], dtype=complex)
    return ProductionReport(to_spec(phi), s_grid, vals, quad.tol)


# ---------------------------------------------------------------- checks


def collapse_check(
    phi: InnerFunction, pq_grid=None, quad: QuadratureSpec = QuadratureSpec()
) -> CheckReport:
    """phi_prime(p, q) depends on p*q only."""
    pq_grid = np.geomspace(0.2, 5.0, 10) if pq_grid is None else np.asarray(pq_grid, dtype=float)
    tol = 10 * quad.tol
    cache: dict[float, complex] = {}
    worst = 0.0
    for p in pq_grid:
        for q in pq_grid:
            s = float(p * q)
            if s not in cache:
                cache[s] = phi_tilde(phi, s, quad)
            worst = max(worst, abs(phi_prime(phi, float(p), float(q), quad) - cache[s]))
    return CheckReport(
        "collapse", worst < tol, worst, tol, "phi_prime(p,q) = phi_tilde(p q)", {"points": len(pq_grid) ** 2}
    )


def bound_check(report: ProductionReport) -> CheckReport:
    excess = float(np.max(report.elastic_modulus) - 1)
    return CheckReport(
        "phi_tilde_bound", report.bound_ok, excess, BOUND_SLACK, "|phi_tilde| <= 1",
        {"max_modulus": float(np.max(report.elastic_modulus))},
    )


def elasticity_check(phi: InnerFunction, report: ProductionReport, residual: float) -> CheckReport:
    """The production flag and the one-particle residual must tell the same story.

    Exponentials: no production and residual < 1e-6.  Anything else:
    production and residual > 1e-2.
    """
    expo = is_exponential(phi)
    if expo:
        ok = (not report.production) and residual < 1e-6
    else:
        ok = report.production and residual > 1e-2
    return CheckReport(
        "elasticity_dichotomy", ok, residual, 1e-6 if expo else 1e-2,
        "S_phi preserves the 1+1 bosonic space iff phi is exponential",
        {"exponential": expo, "production": report.production, "min_modulus": report.min_modulus},
    )


def exp_decay_wave() -> BoseWave:
    return BoseWave(lambda s: np.exp(-s))
