"""Truncated fermionic Fock space of the complex free fermion, exactly.

Mode indices are half-integers and are passed around doubled: ``n2 = -1``
is the mode index -1/2.  A basis state lists the occupied creation modes
``psi_{-r}`` and ``psibar_{-s}`` by their (positive, odd) doubled labels.
Canonical order is the psi block before the psibar block, each ascending;
every fermionic sign below follows from that order.

Conventions: ``psi_r`` with r > 0 removes a ``psibar_{-r}`` excitation and
``psibar_r`` with r > 0 removes a ``psi_{-r}`` excitation, so that
``psi_n^* = psibar_{-n}`` and ``{psibar_n, psi_m} = delta_{n+m,0}``.
The charge of a state is ``#psi - #psibar``.

Operators act exactly on basis states (every mode sum is finite on a
state of finite energy).  A :class:`Cutoff` only enters when an operator is
turned into a matrix or when an identity is checked on the "safe block":
states whose energy leaves enough headroom for every intermediate vector
of the identity to stay below the cutoff.
"""

from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .report import CheckReport
from .series import BivariateSeries

# ---------------------------------------------------------------- scalars


class CQ:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> CQ:
        if isinstance(x, CQ):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    @staticmethod
    def _scalar(x):
        return isinstance(x, (CQ, numbers.Number))

    def __add__(self, other):
        if not CQ._scalar(other):
            return NotImplemented
        o = CQ.coerce(other)
        return CQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CQ(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-CQ.coerce(other))

    def __rsub__(self, other):
        return CQ.coerce(other) - self

    def __mul__(self, other):
        if not CQ._scalar(other):
            return NotImplemented
        o = CQ.coerce(other)
        return CQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = CQ.coerce(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return self * o.conjugate() * CQ(Fraction(1) / d)

    def conjugate(self) -> CQ:
        return CQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        try:
            o = CQ.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"CQ({self.re})"
        return f"CQ({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = CQ(0, 1)
ONE = CQ(1)
ZERO = CQ(0)


# ---------------------------------------------------------------- states


@dataclass(frozen=True)
class Cutoff:
    e2_max: int = 12

    def __post_init__(self):
        if self.e2_max < 0:
            raise ValueError(f"e2_max must be >= 0, got {self.e2_max}")


def _check_mode(n2: int) -> None:
    if n2 % 2 == 0:
        raise ValueError(f"fermion mode index must be a half-integer (odd when doubled), got {n2}/2")


@dataclass(frozen=True)
class FockBasisState:
    psi: tuple[int, ...] = ()
    psibar: tuple[int, ...] = ()

    def __post_init__(self):
        for block in (self.psi, self.psibar):
            if any(m <= 0 or m % 2 == 0 for m in block):
                raise ValueError(f"occupied labels must be positive odd ints: {block}")
            if any(a >= b for a, b in zip(block, block[1:])):
                raise ValueError(f"occupied labels must be strictly ascending: {block}")

    @property
    def e2(self) -> int:
        """Doubled energy (L0 eigenvalue times two)."""
        return sum(self.psi) + sum(self.psibar)

    @property
    def energy(self) -> Fraction:
        return Fraction(self.e2, 2)

    @property
    def charge(self) -> int:
        return len(self.psi) - len(self.psibar)

    @property
    def parity(self) -> int:
        return (len(self.psi) + len(self.psibar)) % 2

    def sort_key(self):
        return (self.e2, self.charge, self.psi, self.psibar)

    def __str__(self):
        parts = [f"psi_-{Fraction(m, 2)}" for m in self.psi]
        parts += [f"psibar_-{Fraction(m, 2)}" for m in self.psibar]
        return " ".join(parts + ["Omega"])


VACUUM = FockBasisState()


class FockVector:
    """Finitely supported exact linear combination of basis states."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FockBasisState, object] | None = None):
        self.terms: dict[FockBasisState, CQ] = {}
        if terms:
            for s, c in terms.items():
                c = CQ.coerce(c)
                if c:
                    self.terms[s] = c

    @classmethod
    def basis(cls, state: FockBasisState) -> FockVector:
        return cls({state: ONE})

    def __add__(self, other: FockVector) -> FockVector:
        out = dict(self.terms)
        for s, c in other.terms.items():
            v = out.get(s, ZERO) + c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        res = FockVector()
        res.terms = out
        return res

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> FockVector:
        c = CQ.coerce(c)
        if not c:
            return FockVector()
        res = FockVector()
        res.terms = {s: v * c for s, v in self.terms.items()}
        return res

    __rmul__ = scale

    def norm2(self) -> Fraction:
        return sum((c.abs2() for c in self.terms.values()), Fraction(0))

    def inner(self, other: FockVector) -> CQ:
        """<self, other>, antilinear in the first slot."""
        total = ZERO
        for s, c in self.terms.items():
            d = other.terms.get(s)
            if d is not None:
                total = total + c.conjugate() * d
        return total

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "FockVector(0)"
        body = " + ".join(f"({c})|{s}>" for s, c in sorted(self.terms.items(), key=lambda t: t[0].sort_key()))
        return f"FockVector({body})"


def enumerate_basis(c: Cutoff) -> list[FockBasisState]:
    """All basis states of doubled energy <= ``c.e2_max``.

    Ordered by energy, then charge, then the occupied labels.
    """
    subsets = _odd_subsets(c.e2_max)
    states = [
        FockBasisState(p, b)
        for p in subsets
        for b in subsets
        if sum(p) + sum(b) <= c.e2_max
    ]
    states.sort(key=FockBasisState.sort_key)
    return states


def _odd_subsets(budget: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(start: int, acc: tuple[int, ...], total: int):
        out.append(acc)
        for m in range(start, budget - total + 1, 2):
            rec(m + 2, acc + (m,), total + m)

    rec(1, (), 0)
    return out


# ---------------------------------------------------------------- modes


def _count_below(block: tuple[int, ...], m: int) -> int:
    return sum(1 for x in block if x < m)


def mode_on_state(kind: str, n2: int, s: FockBasisState) -> tuple[int, FockBasisState] | None:
    """Action of a single mode on a basis state as ``(sign, image)``, or None."""
    _check_mode(n2)
    m = abs(n2)
    if kind == "psi":
        if n2 < 0:
            if m in s.psi:
                return None
            sign = _count_below(s.psi, m)
            return (-1) ** sign, FockBasisState(tuple(sorted(s.psi + (m,))), s.psibar)
        if m not in s.psibar:
            return None
        sign = len(s.psi) + _count_below(s.psibar, m)
        return (-1) ** sign, FockBasisState(s.psi, tuple(x for x in s.psibar if x != m))
    if kind == "psibar":
        if n2 < 0:
            if m in s.psibar:
                return None
            sign = len(s.psi) + _count_below(s.psibar, m)
            return (-1) ** sign, FockBasisState(s.psi, tuple(sorted(s.psibar + (m,))))
        if m not in s.psi:
            return None
        sign = _count_below(s.psi, m)
        return (-1) ** sign, FockBasisState(tuple(x for x in s.psi if x != m), s.psibar)
    raise ValueError(f"kind must be 'psi' or 'psibar', got {kind!r}")


def apply_mode(kind: str, n2: int, v: FockVector) -> FockVector:
    out: dict[FockBasisState, CQ] = {}
    for s, c in v.terms.items():
        hit = mode_on_state(kind, n2, s)
        if hit is None:
            continue
        sign, t = hit
        val = out.get(t, ZERO) + (c if sign > 0 else -c)
        if val:
            out[t] = val
        else:
            out.pop(t, None)
    res = FockVector()
    res.terms = out
    return res


# ---------------------------------------------------------------- operators


class FockOperator:
    """Linear operator given by its action on basis states.

    ``shift2`` is the largest doubled energy the operator can add to a
    state; it is what safe-block budgets are computed from.
    """

    def __init__(self, name: str, action: Callable[[FockBasisState], FockVector], shift2: int = 0):
        self.name = name
        self._action = action
        self.shift2 = shift2

    def on_state(self, s: FockBasisState) -> FockVector:
        return self._action(s)

    def __call__(self, v: FockVector | FockBasisState) -> FockVector:
        if isinstance(v, FockBasisState):
            return self._action(v)
        out = FockVector()
        for s, c in v.terms.items():
            out = out + self._action(s).scale(c)
        return out

    def __mul__(self, other: FockOperator) -> FockOperator:
        """Composition: ``(A * B)(v) = A(B(v))``."""
        return FockOperator(
            f"{self.name}{other.name}",
            lambda s: self(other.on_state(s)),
            self.shift2 + other.shift2,
        )

    def __add__(self, other: FockOperator) -> FockOperator:
        return FockOperator(
            f"({self.name}+{other.name})",
            lambda s: self.on_state(s) + other.on_state(s),
            max(self.shift2, other.shift2),
        )

    def __sub__(self, other: FockOperator) -> FockOperator:
        return FockOperator(
            f"({self.name}-{other.name})",
            lambda s: self.on_state(s) - other.on_state(s),
            max(self.shift2, other.shift2),
        )

    def __rmul__(self, c) -> FockOperator:
        c = CQ.coerce(c)
        return FockOperator(f"{c}*{self.name}", lambda s: self.on_state(s).scale(c), self.shift2)

    def __repr__(self):
        return f"FockOperator({self.name})"


def commutator(a: FockOperator, b: FockOperator) -> FockOperator:
    return a * b - b * a


def anticommutator(a: FockOperator, b: FockOperator) -> FockOperator:
    return a * b + b * a


def identity_op() -> FockOperator:
    return FockOperator("1", FockVector.basis, 0)


def zero_op() -> FockOperator:
    return FockOperator("0", lambda s: FockVector(), 0)


def mode(kind: str, n2: int) -> FockOperator:
    _check_mode(n2)
    sym = "psi" if kind == "psi" else "psibar"
    return FockOperator(
        f"{sym}[{Fraction(n2, 2)}]",
        lambda s: apply_mode(kind, n2, FockVector.basis(s)),
        max(0, -n2),
    )


def psi(n2: int) -> FockOperator:
    return mode("psi", n2)


def psibar(n2: int) -> FockOperator:
    return mode("psibar", n2)


def _current_on_state(n: int, s: FockBasisState) -> FockVector:
    # J_n = sum_{r<0} psibar_r psi_{n-r} - sum_{r>0} psi_{n-r} psibar_r
    n2 = 2 * n
    reach = s.e2 + abs(n2) + 2
    vec = FockVector.basis(s)
    out = FockVector()
    for r2 in range(-reach - 1, reach + 2):
        if r2 % 2 == 0:
            continue
        if r2 < 0:
            out = out + apply_mode("psibar", r2, apply_mode("psi", n2 - r2, vec))
        else:
            out = out - apply_mode("psi", n2 - r2, apply_mode("psibar", r2, vec))
    return out


def current_mode(n: int) -> FockOperator:
    """Normal-ordered bilinear ``J_n = sum_{r+s=n} :psibar_r psi_s:``."""
    n = int(n)
    return FockOperator(f"J[{n}]", lambda s: _current_on_state(n, s), max(0, -2 * n))


def l0_op() -> FockOperator:
    return FockOperator("L0", lambda s: FockVector({s: s.energy}), 0)


def charge_op() -> FockOperator:
    return FockOperator("Q", lambda s: FockVector({s: s.charge}), 0)


def gamma_op() -> FockOperator:
    return FockOperator("Gamma", lambda s: FockVector({s: (-1) ** s.parity}), 0)


def twist_op() -> FockOperator:
    """Z = (1 - i Gamma) / (1 - i), evaluated exactly from Gamma."""
    denom = ONE - I

    def act(s):
        g = (-1) ** s.parity
        return FockVector({s: (ONE - I * g) / denom})

    return FockOperator("Z", act, 0)


def smeared_field(coeffs: Mapping[int, object], kind: str = "psi") -> FockOperator:
    """``Psi(f) = sum_r fhat_r Psi_r`` for finitely many doubled indices r."""
    terms = [(n2, CQ.coerce(c)) for n2, c in sorted(coeffs.items()) if CQ.coerce(c)]
    for n2, _ in terms:
        _check_mode(n2)

    def act(s):
        vec = FockVector.basis(s)
        out = FockVector()
        for n2, c in terms:
            out = out + apply_mode(kind, n2, vec).scale(c)
        return out

    shift = max((max(0, -n2) for n2, _ in terms), default=0)
    return FockOperator(f"{kind}(f)", act, shift)


def smeared_current(coeffs: Mapping[int, object]) -> FockOperator:
    """``J(f) = sum_n fhat_n J_n`` for finitely many integer n."""
    terms = [(int(n), CQ.coerce(c)) for n, c in sorted(coeffs.items()) if CQ.coerce(c)]

    def act(s):
        out = FockVector()
        for n, c in terms:
            out = out + _current_on_state(n, s).scale(c)
        return out

    shift = max((max(0, -2 * n) for n, _ in terms), default=0)
    return FockOperator("J(f)", act, shift)


def omega_form(f: Mapping[int, object], g: Mapping[int, object]) -> CQ:
    """``omega(f, g) = -i/2 sum_k k fhat_k ghat_{-k}``."""
    total = ZERO
    for k, fk in f.items():
        gk = g.get(-k)
        if gk is not None:
            total = total + CQ(k) * CQ.coerce(fk) * CQ.coerce(gk)
    return CQ(0, Fraction(-1, 2)) * total


def convolve(f: Mapping[int, object], g: Mapping[int, object]) -> dict[int, CQ]:
    """Fourier coefficients of a pointwise product (indices add)."""
    out: dict[int, CQ] = {}
    for a, fa in f.items():
        for b, gb in g.items():
            out[a + b] = out.get(a + b, ZERO) + CQ.coerce(fa) * CQ.coerce(gb)
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------- matrices


@dataclass
class ExactMatrix:
    """Sparse exact matrix over a fixed list of basis states.

    ``leaks`` holds the column states whose image has components above
    the cutoff; those components are not representable and were dropped.
    """

    basis: list[FockBasisState]
    entries: dict[tuple[int, int], CQ]
    leaks: set[FockBasisState]

    @cached_property
    def index(self) -> dict[FockBasisState, int]:
        return {s: i for i, s in enumerate(self.basis)}

    def __getitem__(self, rc: tuple[int, int]) -> CQ:
        return self.entries.get(rc, ZERO)

    def adjoint(self) -> ExactMatrix:
        return ExactMatrix(
            self.basis,
            {(c, r): v.conjugate() for (r, c), v in self.entries.items()},
            set(),
        )

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        cols: dict[int, list[tuple[int, CQ]]] = {}
        for (r, c), v in other.entries.items():
            cols.setdefault(c, []).append((r, v))
        rows: dict[int, list[tuple[int, CQ]]] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(c, []).append((r, v))
        out: dict[tuple[int, int], CQ] = {}
        for c, col in cols.items():
            for k, v in col:
                for r, w in rows.get(k, ()):
                    out[(r, c)] = out.get((r, c), ZERO) + w * v
        return ExactMatrix(self.basis, {k: v for k, v in out.items() if v}, self.leaks | other.leaks)

    def diagonal(self) -> list[CQ]:
        return [self[(i, i)] for i in range(len(self.basis))]

    def restricted_equal(self, other: ExactMatrix, states: Iterable[FockBasisState]) -> bool:
        keep = {self.index[s] for s in states}
        a = {k: v for k, v in self.entries.items() if k[0] in keep and k[1] in keep}
        b = {k: v for k, v in other.entries.items() if k[0] in keep and k[1] in keep}
        return a == b


def matrix_of(op: FockOperator, c: Cutoff) -> ExactMatrix:
    basis = enumerate_basis(c)
    index = {s: i for i, s in enumerate(basis)}
    entries: dict[tuple[int, int], CQ] = {}
    leaks: set[FockBasisState] = set()
    for j, s in enumerate(basis):
        for t, v in op.on_state(s).terms.items():
            i = index.get(t)
            if i is None:
                leaks.add(s)
            else:
                entries[(i, j)] = v
    return ExactMatrix(basis, entries, leaks)


# ---------------------------------------------------------------- checks


def safe_block(c: Cutoff, budget2: int) -> list[FockBasisState]:
    """Basis states with doubled energy <= e2_max - budget2."""
    limit = c.e2_max - budget2
    if limit < 0:
        raise ValueError(
            f"safe block is empty: cutoff e2_max={c.e2_max} leaves no room for index budget {budget2}/2"
        )
    return [s for s in enumerate_basis(c) if s.e2 <= limit]


def compare_on_block(
    lhs: FockOperator, rhs: FockOperator, states: Iterable[FockBasisState]
) -> list[FockBasisState]:
    """States on which the two operators disagree (exactly)."""
    return [s for s in states if lhs.on_state(s) != rhs.on_state(s)]


def _identity_report(name, anchor, lhs, rhs, states, detail=None) -> CheckReport:
    states = list(states)
    bad = compare_on_block(lhs, rhs, states)
    info = {"safe_states": len(states)}
    if bad:
        info["first_failure"] = str(bad[0])
    if detail:
        info.update(detail)
    return CheckReport(name, not bad, len(bad), 0.0, anchor, info)


def car_check(n2: int, m2: int, c: Cutoff) -> CheckReport:
    """All three anticommutators of psi_n, psi_m, psibar_n, psibar_m on the safe block."""
    _check_mode(n2)
    _check_mode(m2)
    states = safe_block(c, abs(n2) + abs(m2))
    delta = n2 + m2 == 0
    pairs = [
        (anticommutator(psi(n2), psi(m2)), zero_op()),
        (anticommutator(psibar(n2), psibar(m2)), zero_op()),
        (anticommutator(psibar(n2), psi(m2)), identity_op() if delta else zero_op()),
    ]
    bad = []
    for lhs, rhs in pairs:
        bad += compare_on_block(lhs, rhs, states)
    n, m = Fraction(n2, 2), Fraction(m2, 2)
    return CheckReport(
        f"car[n={n},m={m}]", not bad, len(bad), 0.0,
        "{psi_n,psi_m} = {psibar_n,psibar_m} = 0, {psibar_n,psi_m} = delta(n+m,0)",
        {"safe_states": len(states)},
    )


def adjoint_check(n2: int, c: Cutoff) -> CheckReport:
    """Matrix of psi_n is the conjugate transpose of that of psibar_{-n}."""
    a = matrix_of(psi(n2), c).adjoint()
    b = matrix_of(psibar(-n2), c)
    states = safe_block(c, abs(n2))
    ok = a.restricted_equal(b, states)
    return CheckReport(
        f"adjoint[n={Fraction(n2, 2)}]", ok, 0 if ok else 1, 0.0, "psi_n^* = psibar_{-n}",
        {"safe_states": len(states)},
    )


def current_algebra_check(m: int, n: int, c: Cutoff) -> CheckReport:
    states = safe_block(c, 2 * abs(m) + 2 * abs(n))
    lhs = commutator(current_mode(m), current_mode(n))
    rhs = (m * identity_op()) if m + n == 0 else zero_op()
    return _identity_report(f"current_algebra[m={m},n={n}]", "[J_m,J_n] = m delta(m+n,0)", lhs, rhs, states)


def field_current_commutator_check(n: int, k2: int, c: Cutoff) -> CheckReport:
    _check_mode(k2)
    states = list(safe_block(c, 2 * abs(n) + abs(k2)))
    ops = [
        (commutator(current_mode(n), psi(k2)), -1 * psi(2 * n + k2)),
        (commutator(current_mode(n), psibar(k2)), psibar(2 * n + k2)),
    ]
    bad = []
    for lhs, rhs in ops:
        bad += compare_on_block(lhs, rhs, states)
    return CheckReport(
        f"field_current[n={n},k={Fraction(k2, 2)}]", not bad, len(bad), 0.0,
        "[J_n,psi_k] = -psi_{n+k}, [J_n,psibar_k] = psibar_{n+k}",
        {"safe_states": len(states)},
    )


def l0_shift_check(n: int, c: Cutoff) -> CheckReport:
    states = safe_block(c, 2 * abs(n))
    lhs = commutator(l0_op(), current_mode(n))
    rhs = (-n) * current_mode(n)
    return _identity_report(f"l0_shift[n={n}]", "[L0,J_n] = -n J_n", lhs, rhs, states)


def energy_bound_check(n: int, c: Cutoff) -> CheckReport:
    """||J_n xi||^2 <= (2(N+1)+|n|)^2 ||xi||^2 for every safe basis xi."""
    states = safe_block(c, 2 * abs(n))
    jn = current_mode(n)
    worst = Fraction(0)
    bad = []
    for s in states:
        lhs = jn.on_state(s).norm2()
        bound = (2 * (s.energy + 1) + abs(n)) ** 2
        worst = max(worst, lhs / bound)
        if lhs > bound:
            bad.append(s)
    return CheckReport(
        f"energy_bound[n={n}]", not bad, float(worst), 1.0,
        "||J_n xi|| <= ||(2(L0+1)+|n|) xi||",
        {"safe_states": len(states), "max_ratio_squared": str(worst)},
    )


def twist_check(c: Cutoff) -> CheckReport:
    z = matrix_of(twist_op(), c)
    g = matrix_of(gamma_op(), c)
    ok = (z @ z).entries == g.entries
    return CheckReport(
        f"twist[e2_max={c.e2_max}]", ok, 0 if ok else 1, 0.0, "Z = (1 - i Gamma)/(1 - i), Z^2 = Gamma",
        {"dimension": len(z.basis)},
    )


def grading_commute_check(c: Cutoff) -> CheckReport:
    ops = [matrix_of(op, c) for op in (l0_op(), charge_op(), gamma_op())]
    ok = all((a @ b).entries == (b @ a).entries for a, b in itertools.combinations(ops, 2))
    return CheckReport(
        f"gradings_commute[e2_max={c.e2_max}]", ok, 0 if ok else 1, 0.0, "L0, Q, Gamma pairwise commute",
    )


def smeared_car_check(f: Mapping[int, object], g: Mapping[int, object], c: Cutoff) -> CheckReport:
    """{psibar(f), psi(g)} = sum_k fhat_k ghat_{-k} on the safe block."""
    budget = max(map(abs, f), default=0) + max(map(abs, g), default=0)
    states = safe_block(c, budget)
    pairing = ZERO
    for k, fk in f.items():
        if -k in g:
            pairing = pairing + CQ.coerce(fk) * CQ.coerce(g[-k])
    lhs = anticommutator(smeared_field(f, "psibar"), smeared_field(g, "psi"))
    return _identity_report(
        "smeared_car", "{psibar(f),psi(g)} = contour integral of f g dz/(2 pi i z)",
        lhs, pairing * identity_op(), states, {"pairing": str(pairing)},
    )


def smeared_commutator_check(f: Mapping[int, object], g: Mapping[int, object], c: Cutoff) -> CheckReport:
    """[J(f), psi(g)] = -psi(f g), with f indexed by integers, g by doubled half-integers."""
    budget = 2 * max(map(abs, f), default=0) + max(map(abs, g), default=0)
    states = safe_block(c, budget)
    prod: dict[int, CQ] = {}
    for a, fa in f.items():
        for b, gb in g.items():
            prod[2 * a + b] = prod.get(2 * a + b, ZERO) + CQ.coerce(fa) * CQ.coerce(gb)
    lhs = commutator(smeared_current(f), smeared_field(g, "psi"))
    rhs = -1 * smeared_field(prod, "psi")
    return _identity_report("smeared_field_current", "[J(f),psi(g)] = -psi(f g)", lhs, rhs, states)


def current_omega_check(f: Mapping[int, object], g: Mapping[int, object], c: Cutoff) -> CheckReport:
    budget = 2 * max(map(abs, f), default=0) + 2 * max(map(abs, g), default=0)
    states = safe_block(c, budget)
    w = omega_form(f, g)
    lhs = commutator(smeared_current(f), smeared_current(g))
    return _identity_report(
        "current_omega", "[J(f),J(g)] = 2i omega(f,g)", lhs, (CQ(0, 2) * w) * identity_op(), states,
        {"omega": str(w)},
    )


def character_trace(c: Cutoff) -> BivariateSeries:
    coeffs: dict[tuple[int, int], int] = {}
    for s in enumerate_basis(c):
        key = (s.e2, s.charge)
        coeffs[key] = coeffs.get(key, 0) + 1
    return BivariateSeries(coeffs, c.e2_max)


def character_trace_check(c: Cutoff) -> CheckReport:
    from .series import fermionic_character, first_mismatch

    bad = first_mismatch(character_trace(c), fermionic_character(c.e2_max))
    measured = 0 if bad is None else f"(t2, charge)={bad[0]}: basis={bad[1]} product={bad[2]}"
    return CheckReport(
        f"character_trace[e2_max={c.e2_max}]", bad is None, measured, 0.0,
        "tr(t^L0 z^Q) over the basis = prod_r (1+z t^r)(1+z^-1 t^r)",
    )


def half_modes(limit2: int) -> list[int]:
    """Doubled half-integer indices with |index| <= limit2/2."""
    return [k for k in range(-limit2, limit2 + 1) if k % 2]


def full_check_suite(c: Cutoff, mode_limit2: int = 5, current_limit: int = 3, bound_limit: int = 4) -> list[CheckReport]:
    """Every fock-level identity at a cutoff, over all index ranges whose safe block is nonempty."""
    reports: list[CheckReport] = []
    modes = half_modes(mode_limit2)
    for n2 in modes:
        for m2 in modes:
            if abs(n2) + abs(m2) <= c.e2_max:
                reports.append(car_check(n2, m2, c))
    for n2 in modes:
        if abs(n2) <= c.e2_max:
            reports.append(adjoint_check(n2, c))
    for m in range(-current_limit, current_limit + 1):
        for n in range(-current_limit, current_limit + 1):
            if 2 * abs(m) + 2 * abs(n) <= c.e2_max:
                reports.append(current_algebra_check(m, n, c))
    for n in range(-current_limit, current_limit + 1):
        for k2 in modes:
            if 2 * abs(n) + abs(k2) <= c.e2_max:
                reports.append(field_current_commutator_check(n, k2, c))
    for n in range(-bound_limit, bound_limit + 1):
        if 2 * abs(n) <= c.e2_max:
            reports.append(energy_bound_check(n, c))
            reports.append(l0_shift_check(n, c))
    reports.append(twist_check(c))
    reports.append(grading_commute_check(c))
    reports.append(character_trace_check(c))
    return reports
