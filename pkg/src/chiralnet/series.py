"""Exact truncated power series for conformal characters.

Exponents of ``t`` may be half-integers, so every exponent is stored doubled
(``t2 = 2r``).  Truncation orders are doubled as well: a series with
``t2_max = 40`` keeps every term up to and including ``t**20``.  All
coefficients are Python ints; nothing here touches floating point.

Bivariate series carry an extra integer charge (the power of ``z``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .report import CheckReport


def half(t2: int) -> Fraction:
    """The actual exponent for a doubled exponent."""
    return Fraction(t2, 2)


def _fmt_exponent(t2: int) -> str:
    return str(half(t2))


@dataclass(frozen=True)
class UnivariateSeries:
    coeffs: dict[int, int] = field(default_factory=dict)
    t2_max: int = 0

    def __post_init__(self):
        if self.t2_max < 0:
            raise ValueError(f"t2_max must be >= 0, got {self.t2_max}")
        clean = {k: int(v) for k, v in self.coeffs.items() if v and 0 <= k <= self.t2_max}
        if any(k < 0 for k in self.coeffs):
            raise ValueError("negative exponents are not supported")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, t2_max: int) -> UnivariateSeries:
        return cls({0: 1}, t2_max)

    def __getitem__(self, t2: int) -> int:
        return self.coeffs.get(t2, 0)

    def __mul__(self, other: UnivariateSeries) -> UnivariateSeries:
        return mul(self, other)

    def __add__(self, other: UnivariateSeries) -> UnivariateSeries:
        _check_orders(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return UnivariateSeries(out, self.t2_max)

    def __neg__(self) -> UnivariateSeries:
        return UnivariateSeries({k: -v for k, v in self.coeffs.items()}, self.t2_max)

    def __sub__(self, other: UnivariateSeries) -> UnivariateSeries:
        return self + (-other)

    def lift(self) -> BivariateSeries:
        """View as a bivariate series concentrated at charge 0."""
        return BivariateSeries({(k, 0): v for k, v in self.coeffs.items()}, self.t2_max)

    def integer_coeffs(self) -> list[int]:
        """Coefficients at t^0, t^1, ... (integer exponents only)."""
        return [self[2 * n] for n in range(self.t2_max // 2 + 1)]


@dataclass(frozen=True)
class BivariateSeries:
    """Coefficients keyed by ``(t2, charge)``."""

    coeffs: dict[tuple[int, int], int] = field(default_factory=dict)
    t2_max: int = 0

    def __post_init__(self):
        if self.t2_max < 0:
            raise ValueError(f"t2_max must be >= 0, got {self.t2_max}")
        if any(k[0] < 0 for k in self.coeffs):
            raise ValueError("negative exponents are not supported")
        clean = {
            (int(t2), int(q)): int(v)
            for (t2, q), v in self.coeffs.items()
            if v and t2 <= self.t2_max
        }
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, t2_max: int) -> BivariateSeries:
        return cls({(0, 0): 1}, t2_max)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.coeffs.get(key, 0)

    def __mul__(self, other: BivariateSeries) -> BivariateSeries:
        return mul(self, other)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(sorted(self.coeffs.items()))

    def charges(self) -> list[int]:
        return sorted({q for _, q in self.coeffs})

    def with_coefficient(self, t2: int, charge: int, value: int) -> BivariateSeries:
        out = dict(self.coeffs)
        out[(t2, charge)] = value
        return BivariateSeries(out, self.t2_max)


Series = UnivariateSeries | BivariateSeries


def _check_orders(a, b) -> None:
    if type(a) is not type(b):
        raise TypeError(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if a.t2_max != b.t2_max:
        raise ValueError(f"truncation orders differ: {a.t2_max} vs {b.t2_max}")


def mul(a: Series, b: Series) -> Series:
    """Truncated Cauchy product; terms beyond ``t2_max`` are dropped."""
    _check_orders(a, b)
    n = a.t2_max
    if isinstance(a, UnivariateSeries):
        out: dict = {}
        for ka, va in a.coeffs.items():
            for kb, vb in b.coeffs.items():
                k = ka + kb
                if k <= n:
                    out[k] = out.get(k, 0) + va * vb
        return UnivariateSeries(out, n)
    out = {}
    for (ta, qa), va in a.coeffs.items():
        for (tb, qb), vb in b.coeffs.items():
            t = ta + tb
            if t <= n:
                key = (t, qa + qb)
                out[key] = out.get(key, 0) + va * vb
    return BivariateSeries(out, n)


def invert_unit(a: UnivariateSeries) -> UnivariateSeries:
    """Multiplicative inverse of a series with constant term 1."""
    if a[0] != 1:
        raise ValueError(f"constant term must be 1, got {a[0]}")
    n = a.t2_max
    inv = [0] * (n + 1)
    inv[0] = 1
    terms = [(k, v) for k, v in a.coeffs.items() if k > 0]
    for m in range(1, n + 1):
        inv[m] = -sum(v * inv[m - k] for k, v in terms if k <= m)
    return UnivariateSeries(dict(enumerate(inv)), n)


def euler_phi(order: int) -> UnivariateSeries:
    """prod_{k>=1} (1 - t^k) truncated at doubled order ``order``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    result = UnivariateSeries.one(order)
    for k in range(1, order // 2 + 1):
        result = result * UnivariateSeries({0: 1, 2 * k: -1}, order)
    return result


def partition_gf(order: int) -> UnivariateSeries:
    return invert_unit(euler_phi(order))


def fermionic_character(order: int) -> BivariateSeries:
    """prod over half-integers r of (1 + z t^r)(1 + z^-1 t^r)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    result = BivariateSeries.one(order)
    for d in range(1, order + 1, 2):
        result = result * BivariateSeries({(0, 0): 1, (d, 1): 1}, order)
        result = result * BivariateSeries({(0, 0): 1, (d, -1): 1}, order)
    return result


def theta_sum(order: int) -> BivariateSeries:
    """sum_q z^q t^(q^2/2)."""
    terms = {}
    q = 0
    while q * q <= order:
        terms[(q * q, q)] = 1
        terms[(q * q, -q)] = 1
        q += 1
    return BivariateSeries(terms, order)


def theta_jacobi(order: int) -> BivariateSeries:
    """p(t) * sum_q z^q t^(q^2/2)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return partition_gf(order).lift() * theta_sum(order)


def z0_slice(b: BivariateSeries) -> UnivariateSeries:
    return UnivariateSeries({t2: v for (t2, q), v in b.coeffs.items() if q == 0}, b.t2_max)


def first_mismatch(a: BivariateSeries, b: BivariateSeries) -> tuple[tuple[int, int], int, int] | None:
    for key in sorted(set(a.coeffs) | set(b.coeffs)):
        if a[key] != b[key]:
            return key, a[key], b[key]
    return None


def jacobi_identity_check(
    order: int, corrupt: tuple[int, int, int] | None = None
) -> CheckReport:
    """Compare the fermionic product with p(t) * theta exactly.

    ``corrupt=(t2, charge, delta)`` adds ``delta`` to one coefficient of the
    product side first; it exists to exercise the failure path.
    """
    lhs = fermionic_character(order)
    if corrupt is not None:
        t2, q, delta = corrupt
        lhs = lhs.with_coefficient(t2, q, lhs[(t2, q)] + delta)
    rhs = theta_jacobi(order)
    bad = first_mismatch(lhs, rhs)
    anchor = "prod_r (1+z t^r)(1+z^-1 t^r) = p(t) sum_q z^q t^(q^2/2)"
    if bad is None:
        return CheckReport(
            f"jacobi_triple_product[order={order}]", True, 0, 0.0, anchor,
            {"coefficients_compared": len(rhs.coeffs)},
        )
    (t2, q), lv, rv = bad
    where = f"z^{q} t^{_fmt_exponent(t2)}"
    return CheckReport(
        f"jacobi_triple_product[order={order}]", False,
        f"coefficient of {where}: product={lv} theta={rv}", 0.0, anchor,
        {"t2": t2, "charge": q, "product": lv, "theta": rv},
    )


def z0_partition_check(order: int) -> CheckReport:
    got = z0_slice(fermionic_character(order))
    want = partition_gf(order)
    anchor = "charge-0 part of the fermionic character = p(t)"
    for k in sorted(set(got.coeffs) | set(want.coeffs)):
        if got[k] != want[k]:
            return CheckReport(
                f"z0_slice_vs_partitions[order={order}]", False,
                f"t^{_fmt_exponent(k)}: slice={got[k]} partitions={want[k]}", 0.0, anchor,
            )
    return CheckReport(f"z0_slice_vs_partitions[order={order}]", True, 0, 0.0, anchor)


def dump(b: BivariateSeries) -> list[dict]:
    """JSON-friendly coefficient table, sorted by (t2, charge)."""
    return [{"t": _fmt_exponent(t2), "t2": t2, "z": q, "coeff": v} for (t2, q), v in b.items()]
