"""Inner functions on the upper half-plane and the Longo-Witten 2x2 matrix.

Supported inner functions are exponentials ``exp(i(kappa p + theta))``,
finite Blaschke products ``prod (p - w)/(p - conj(w))`` with zeros ``w`` in
the upper half-plane, and finite products of these.  All of them are closed
under the check-conjugate ``p -> conj(phi(-p))``.

Fourier convention throughout: ``f(s) = int exp(-i s p) fhat(p) dp``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .report import CheckReport

ALGEBRAIC_TOL = 1e-12
CAUSALITY_TOL = 1e-4


@dataclass(frozen=True)
class Exponential:
    kappa: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.kappa >= 0:
            raise ValueError(f"exponential inner functions need kappa >= 0, got {self.kappa}")


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple[complex, ...] = ()

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        for z in zs:
            if not z.imag > 0:
                raise ValueError(f"Blaschke zeros must lie in the upper half-plane, got {z}")
        object.__setattr__(self, "zeros", zs)


@dataclass(frozen=True)
class Product:
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


InnerFunction = Union[Exponential, Blaschke, Product]


def evaluate(phi: InnerFunction, p):
    """Boundary value at real ``p`` (scalar or array)."""
    p = np.asarray(p, dtype=float)
    if isinstance(phi, Exponential):
        return np.exp(1j * (phi.kappa * p + phi.theta))
    if isinstance(phi, Blaschke):
        out = np.ones(p.shape, dtype=complex)
        for w in phi.zeros:
            out = out * ((p - w) / (p - w.conjugate()))
        return out
    if isinstance(phi, Product):
        out = np.ones(p.shape, dtype=complex)
        for f in phi.factors:
            out = out * evaluate(f, p)
        return out
    raise TypeError(f"not an inner function: {phi!r}")


def check_conjugate(phi: InnerFunction) -> InnerFunction:
    """The inner function ``p -> conj(phi(-p))``, in closed form."""
    if isinstance(phi, Exponential):
        return Exponential(phi.kappa, -phi.theta if phi.theta else 0.0)
    if isinstance(phi, Blaschke):
        return Blaschke(tuple(-w.conjugate() for w in phi.zeros))
    if isinstance(phi, Product):
        return Product(tuple(check_conjugate(f) for f in phi.factors))
    raise TypeError(f"not an inner function: {phi!r}")


def flatten(phi: InnerFunction) -> tuple[float, float, tuple[complex, ...]]:
    """Normal form ``(kappa, theta mod 2pi, sorted zeros)``."""
    if isinstance(phi, Exponential):
        return phi.kappa, phi.theta % (2 * math.pi), ()
    if isinstance(phi, Blaschke):
        return 0.0, 0.0, tuple(sorted(phi.zeros, key=lambda z: (z.real, z.imag)))
    kappa, theta, zeros = 0.0, 0.0, []
    for f in phi.factors:
        k, t, z = flatten(f)
        kappa += k
        theta += t
        zeros.extend(z)
    return kappa, theta % (2 * math.pi), tuple(sorted(zeros, key=lambda z: (z.real, z.imag)))


def is_exponential(phi: InnerFunction) -> bool:
    return not flatten(phi)[2]


# ---------------------------------------------------------------- parsing


class PhiParseError(ValueError):
    def __init__(self, message: str, token: str, position: int):
        super().__init__(f"{message}: {token!r} at position {position}")
        self.token = token
        self.position = position


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def _parse_complex(tok: str, pos: int) -> complex:
    m = re.fullmatch(rf"({_NUM})([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i", tok)
    if m:
        return complex(float(m.group(1)), float(m.group(2)))
    m = re.fullmatch(rf"({_NUM})i", tok)
    if m:
        return complex(0.0, float(m.group(1)))
    raise PhiParseError("expected a zero of the form <re>+<im>i", tok, pos)


def _parse_factor(tok: str, pos: int) -> InnerFunction:
    head, sep, body = tok.partition(":")
    if not sep:
        raise PhiParseError("expected '<kind>:<params>'", tok, pos)
    offset = pos + len(head) + 1
    if head == "exp":
        params = {"kappa": 0.0, "theta": 0.0}
        if body:
            for item in body.split(","):
                key, eq, val = item.partition("=")
                if not eq or key not in params:
                    raise PhiParseError("expected kappa=<float> or theta=<float>", item, offset)
                try:
                    params[key] = float(val)
                except ValueError:
                    raise PhiParseError("not a number", val, offset + len(key) + 1) from None
                offset += len(item) + 1
        try:
            return Exponential(params["kappa"], params["theta"])
        except ValueError as exc:
            raise PhiParseError(str(exc), tok, pos) from None
    if head == "blaschke":
        if not body:
            raise PhiParseError("blaschke needs at least one zero", tok, pos)
        zeros = []
        for item in body.split(";"):
            z = _parse_complex(item.strip(), offset)
            if not z.imag > 0:
                raise PhiParseError("zero must have positive imaginary part", item, offset)
            zeros.append(z)
            offset += len(item) + 1
        return Blaschke(tuple(zeros))
    raise PhiParseError("unknown inner-function kind (use exp or blaschke)", head, pos)


def parse_phi(spec: str) -> InnerFunction:
    """Parse ``exp:kappa=..,theta=..`` / ``blaschke:a+bi;c+di`` terms joined by ``*``."""
    spec = spec.strip()
    if not spec:
        raise PhiParseError("empty inner-function spec", spec, 0)
    factors = []
    pos = 0
    for tok in spec.split("*"):
        factors.append(_parse_factor(tok.strip(), pos))
        pos += len(tok) + 1
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def _fmt_float(x: float) -> str:
    return repr(float(x))


def to_spec(phi: InnerFunction) -> str:
    if isinstance(phi, Exponential):
        return f"exp:kappa={_fmt_float(phi.kappa)},theta={_fmt_float(phi.theta)}"
    if isinstance(phi, Blaschke):
        return "blaschke:" + ";".join(
            f"{_fmt_float(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt_float(abs(z.imag))}i" for z in phi.zeros
        )
    return "*".join(to_spec(f) for f in phi.factors)


# ---------------------------------------------------------------- 2x2 matrix


def sym_parts(phi: InnerFunction, p):
    """Symmetric and antisymmetric parts ``a = (phi + phi_check)/2``, ``b = (phi - phi_check)/2``."""
    val = evaluate(phi, p)
    chk = np.conj(evaluate(phi, -np.asarray(p, dtype=float)))
    return 0.5 * (val + chk), 0.5 * (val - chk)


@dataclass(frozen=True)
class LWMatrix:
    a: complex
    b: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, 1j * self.b], [-1j * self.b, self.a]], dtype=complex)


DIAGONALIZER = np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2)


def lw_matrix(phi: InnerFunction, p: float) -> LWMatrix:
    a, b = sym_parts(phi, p)
    return LWMatrix(complex(a), complex(b))


def diagonalize(m: LWMatrix) -> np.ndarray:
    return DIAGONALIZER @ m.matrix() @ DIAGONALIZER.conj().T


def lw_matrix_check(phi: InnerFunction, grid=None, tol: float = ALGEBRAIC_TOL) -> CheckReport:
    """Unitarity and diagonalization to diag(phi, phi_check) on a real grid."""
    grid = np.linspace(-10, 10, 101) if grid is None else np.asarray(grid, dtype=float)
    phic = check_conjugate(phi)
    unit_err = diag_err = 0.0
    for p in grid:
        m = lw_matrix(phi, float(p))
        mm = m.matrix()
        unit_err = max(unit_err, float(np.abs(mm @ mm.conj().T - np.eye(2)).max()))
        target = np.diag([complex(evaluate(phi, p)), complex(evaluate(phic, p))])
        diag_err = max(diag_err, float(np.abs(diagonalize(m) - target).max()))
    worst = max(unit_err, diag_err)
    return CheckReport(
        "lw_matrix", worst < tol, worst, tol,
        "[[a, i b], [-i b, a]] unitary, conjugated by (1 i; i 1)/sqrt2 to diag(phi, phi_check)",
        {"unitarity_error": unit_err, "diagonalization_error": diag_err, "points": len(grid)},
    )


def pointwise_checks(phi: InnerFunction, grid=None, tol: float = ALGEBRAIC_TOL) -> list[CheckReport]:
    """Unit modulus, check-conjugate involution and the sym_parts identities."""
    grid = np.linspace(-10, 10, 101) if grid is None else np.asarray(grid, dtype=float)
    val = evaluate(phi, grid)
    phic = check_conjugate(phi)
    chk_closed = evaluate(phic, grid)
    chk_direct = np.conj(evaluate(phi, -grid))
    twice = evaluate(check_conjugate(phic), grid)
    a, b = sym_parts(phi, grid)
    am, bm = sym_parts(phi, -grid)
    errs = {
        "unit_modulus": float(np.abs(np.abs(val) - 1).max()),
        "check_conjugate_closed_form": float(np.abs(chk_closed - chk_direct).max()),
        "check_conjugate_involution": float(np.abs(twice - val).max()),
        "a_plus_b_is_phi": float(np.abs(a + b - val).max()),
        "a_minus_b_is_phi_check": float(np.abs(a - b - chk_direct).max()),
        "a_symmetric": float(np.abs(am - np.conj(a)).max()),
        "b_antisymmetric": float(np.abs(bm + np.conj(b)).max()),
    }
    return [CheckReport(name, e < tol, e, tol, "pointwise inner-function identity") for name, e in errs.items()]


# ---------------------------------------------------------------- causality


@dataclass(frozen=True)
class CausalGrid:
    """Periodic sampling grid on [-length/2, length/2)."""

    n: int = 2**14
    length: float = 32.0

    @property
    def dx(self) -> float:
        return self.length / self.n

    def x(self) -> np.ndarray:
        return -self.length / 2 + self.dx * np.arange(self.n)

    def p(self) -> np.ndarray:
        return 2 * math.pi * np.fft.fftfreq(self.n, self.dx)


def exp_decay(x: np.ndarray) -> np.ndarray:
    """e^{-x} for x > 0, zero for x < 0, midpoint value at the jump."""
    out = np.where(x > 0, np.exp(-np.clip(x, 0, None)), 0.0)
    return np.where(x == 0, 0.5, out)


def apply_multiplier(phi: InnerFunction, samples: np.ndarray, grid: CausalGrid) -> np.ndarray:
    """Samples of the function whose transform is ``phi * fhat``."""
    fhat = np.fft.ifft(samples)
    return np.fft.fft(evaluate(phi, grid.p()) * fhat)


def grid_problems(phi: InnerFunction, grid: CausalGrid) -> list[str]:
    """Reasons the grid cannot resolve ``phi``; empty when adequate."""
    kappa, _, zeros = flatten(phi)
    half = grid.length / 2
    nyquist = math.pi / grid.dx
    problems = []
    if kappa > half / 2:
        problems.append(f"shift kappa={kappa} exceeds a quarter of the window")
    for w in zeros:
        if w.imag * half < 8:
            problems.append(f"zero {w}: response decay length 1/{w.imag} too long for window {grid.length}")
        if abs(w) > 0.1 * nyquist:
            problems.append(f"zero {w}: beyond resolved band |p| < {0.1 * nyquist:.3g}")
    return problems


def causality_check(
    phi: InnerFunction, f=exp_decay, grid: CausalGrid | None = None, tol: float = CAUSALITY_TOL
) -> CheckReport:
    """Relative L2 mass on x < 0 after multiplying the transform by phi.

    ``f`` must be supported on x >= 0.  A grid that cannot resolve ``phi``
    is reported as a failure with its reasons rather than measured.
    """
    grid = grid or CausalGrid()
    anchor = "phi inner => multiplication by phi(P) preserves L2(R+)"
    problems = grid_problems(phi, grid)
    if problems:
        return CheckReport("causality", False, "grid too coarse", tol, anchor, {"problems": problems})
    x = grid.x()
    samples = f(x)
    if np.any(samples[x < 0] != 0):
        raise ValueError("input function must vanish on x < 0")
    g = apply_multiplier(phi, samples, grid)
    total = float(np.sum(np.abs(g) ** 2))
    leak = float(np.sum(np.abs(g[x < 0]) ** 2)) / total
    return CheckReport("causality", leak < tol, leak, tol, anchor, {"n": grid.n, "length": grid.length})


# ---------------------------------------------------------------- functional equation


def functional_equation_probe(phi: InnerFunction, pairs=None) -> float:
    """max |phi(p1) phic(q1) - phi(p2) phic(q2)| over pairs with p1+q1 = p2+q2.

    Zero exactly when phi(p) phic(q) depends on p+q only, which forces phi
    to be exponential.
    """
    if pairs is None:
        pairs = [((1.0, 3.0), (2.0, 2.0)), ((0.5, 1.5), (1.0, 1.0)), ((0.1, 4.9), (3.0, 2.0)), ((7.0, 1.0), (4.0, 4.0))]
    phic = check_conjugate(phi)
    worst = 0.0
    for (p1, q1), (p2, q2) in pairs:
        if not math.isclose(p1 + q1, p2 + q2, rel_tol=0, abs_tol=1e-12):
            raise ValueError(f"pairs must share p+q: {(p1, q1)} vs {(p2, q2)}")
        lhs = complex(evaluate(phi, p1)) * complex(evaluate(phic, q1))
        rhs = complex(evaluate(phi, p2)) * complex(evaluate(phic, q2))
        worst = max(worst, abs(lhs - rhs))
    return worst


def functional_equation_check(phi: InnerFunction, pairs=None) -> CheckReport:
    """Passes when the probe agrees with the exponential/non-exponential split."""
    r = functional_equation_probe(phi, pairs)
    expo = is_exponential(phi)
    ok = r < ALGEBRAIC_TOL if expo else r > ALGEBRAIC_TOL
    return CheckReport(
        "functional_equation", ok, r, ALGEBRAIC_TOL,
        "phi(p) phi_check(q) = function of p+q iff phi is exponential",
        {"exponential": expo},
    )


# ---------------------------------------------------------------- catalog


CATALOG: dict[str, InnerFunction] = {
    "identity": Exponential(0.0, 0.0),
    "exp_k1": Exponential(1.0, 0.0),
    "exp_k2_theta": Exponential(2.0, 0.7),
    "blaschke_i": Blaschke((1j,)),
    "blaschke_1pi": Blaschke((1 + 1j,)),
    "blaschke_pair": Blaschke((1j, 2 + 0.5j)),
    "exp_times_blaschke": Product((Exponential(0.5, 0.3), Blaschke((-1 + 1j,)))),
}


def inner_check_suite(phi: InnerFunction, causal_grid: CausalGrid | None = None) -> list[CheckReport]:
    reports = pointwise_checks(phi)
    reports.append(lw_matrix_check(phi))
    reports.append(causality_check(phi, grid=causal_grid))
    reports.append(functional_equation_check(phi))
    return reports
