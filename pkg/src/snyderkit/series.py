"""Truncated power series in the invariant ``u`` and the transform recurrences.

A :class:`TruncatedSeries` of order ``K`` is known exactly modulo ``u^(K+1)``.
Precision is tracked honestly: differentiation loses one order and
multiplication by ``u`` gains one, so anything built from ``dF/du`` needs
``F`` one order deeper than the result.

The similarity transform ``S = exp(iG)``, ``G = F0(u) + (x.p) F(u)``, maps
``x_mu -> x_mu g1 + b^2 (x.p) p_mu g2`` and ``p_mu -> p_mu g3``.  The ``g``
functions are evaluated through their finite recurrences: every application
of ``F * (...)`` raises the lowest power of ``u`` by one because ``F(0) = 0``,
so the exponential sums terminate modulo ``u^(K+1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Optional

import gmpy2

from .coeffs import ONE, ZERO, ExactComplex

__all__ = [
    "TruncatedSeries",
    "SeriesBundle",
    "TransformSpec",
    "g1_from_F",
    "g2_from_F",
    "g3_from_F",
    "phi2_from_phi1",
    "phi_bundle",
    "solve_F_for_phi1",
    "binomial_series",
]


class TruncatedSeries:
    """Polynomial ``c_0 + c_1 u + ... + c_K u^K`` read modulo ``u^(K+1)``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order: Optional[int] = None):
        cs = [ExactComplex.coerce(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, 0)
        if order < 0:
            raise ValueError("series order must be >= 0")
        cs = cs[: order + 1]
        cs += [ZERO] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    # -- constructors
    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls([value], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([], order)

    @classmethod
    def u(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    # -- access
    def __getitem__(self, n: int) -> ExactComplex:
        if n > self.order:
            raise IndexError(f"coefficient u^{n} beyond order {self.order}")
        return self.coeffs[n] if n >= 0 else ZERO

    def __len__(self):
        return self.order + 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.order + 1

    def with_order(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot raise precision from {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    # -- arithmetic
    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        k = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)][: k + 1], k)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = ExactComplex.coerce(other)
            return TruncatedSeries([a * c for a in self.coeffs], self.order)
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(k + 1):
            s = ZERO
            for j in range(n + 1):
                if a[j] and b[n - j]:
                    s = s + a[j] * b[n - j]
            out.append(s)
        return TruncatedSeries(out, k)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        out = TruncatedSeries.constant(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return self * (ONE / ExactComplex.coerce(other))

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def times_u(self) -> "TruncatedSeries":
        """``u * self``, one order more precise."""
        return TruncatedSeries((ZERO,) + self.coeffs, self.order + 1)

    def derivative(self) -> "TruncatedSeries":
        """``d/du``; the result is known one order less precisely."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 series carries no information")
        return TruncatedSeries(
            [c * n for n, c in enumerate(self.coeffs)][1:], self.order - 1
        )

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        inv0 = ONE / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            s = ZERO
            for j in range(1, n + 1):
                s = s + self.coeffs[j] * out[n - j]
            out.append(-s * inv0)
        return TruncatedSeries(out, self.order)

    def sqrt(self) -> "TruncatedSeries":
        """Principal square root; needs a positive rational square constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise ValueError("sqrt of a series with zero constant term has no power series")
        if c0.im or c0.re < 0:
            raise ValueError(f"sqrt needs a positive rational constant term, got {c0}")
        num, den = c0.re.numerator, c0.re.denominator
        rn, exact_n = gmpy2.iroot(num, 2)
        rd, exact_d = gmpy2.iroot(den, 2)
        if not (exact_n and exact_d):
            raise ValueError(f"constant term {c0} has no exact rational square root")
        b0 = ExactComplex(gmpy2.mpq(rn, rd))
        two_b0 = b0 * 2
        out = [b0]
        for n in range(1, self.order + 1):
            s = self.coeffs[n]
            for k in range(1, n):
                s = s - out[k] * out[n - k]
            out.append(s / two_b0)
        return TruncatedSeries(out, self.order)

    def compose_scaled(self, scale) -> "TruncatedSeries":
        """``f(scale * u)``."""
        scale = ExactComplex.coerce(scale)
        return TruncatedSeries([c * scale**n for n, c in enumerate(self.coeffs)], self.order)

    # -- comparison
    def agrees(self, other: "TruncatedSeries", order: int) -> bool:
        """Equal modulo ``u^(order+1)``; both sides must be known that far."""
        if self.order < order or other.order < order:
            raise ValueError(
                f"cannot compare to order {order}: precisions {self.order}, {other.order}"
            )
        return self.coeffs[: order + 1] == other.coeffs[: order + 1]

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({self})"

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if n == 0 else ("u" if n == 1 else f"u^{n}")
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(u^{self.order + 1})"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]


def binomial_series(exponent, order: int) -> TruncatedSeries:
    """``(1 + u)^exponent`` from the generalized binomial coefficients."""
    e = ExactComplex.coerce(exponent)
    out, c = [ONE], ONE
    for n in range(1, order + 1):
        c = c * (e - (n - 1)) / n
        out.append(c)
    return TruncatedSeries(out, order)


@dataclass(frozen=True)
class TransformSpec:
    """``G = F0(u) + (x.p) F(u)``; both series must vanish at ``u = 0``."""

    F: TruncatedSeries
    F0: TruncatedSeries = field(default_factory=lambda: TruncatedSeries.zero(0))

    def __post_init__(self):
        for name in ("F", "F0"):
            s = getattr(self, name)
            if s.coeffs[0]:
                raise ValueError(f"{name}(0) must vanish, got {s.coeffs[0]}")


@dataclass(frozen=True)
class SeriesBundle:
    phi1: TruncatedSeries
    phi2: TruncatedSeries
    phi3: TruncatedSeries
    g1: Optional[TruncatedSeries] = None
    g2: Optional[TruncatedSeries] = None
    g3: Optional[TruncatedSeries] = None

    def named(self):
        return [
            (name, getattr(self, name))
            for name in ("phi1", "phi2", "phi3", "g1", "g2", "g3")
            if getattr(self, name) is not None
        ]

    def to_json(self) -> dict:
        return {name: s.to_json() for name, s in self.named()}


def _require_F(F: TruncatedSeries, need: int):
    if F.coeffs[0]:
        raise ValueError(f"F(0) must vanish, got {F.coeffs[0]}")
    if F.order < need:
        raise ValueError(f"F must be known to order {need}, got {F.order}")


def _u_d(g: TruncatedSeries) -> TruncatedSeries:
    """``u * dg/du`` at the precision of ``g``."""
    if g.order == 0:
        return TruncatedSeries.zero(0)
    return g.derivative().times_u()


def _iterate_sum(step, start: TruncatedSeries, first: int, K: int) -> TruncatedSeries:
    """``sum_{n>=first} t_n / n!`` with ``t_{n+1} = step(t_n)``, stopping at zero."""
    total = TruncatedSeries.zero(K)
    term, n = start, 0
    while True:
        if n >= first:
            total = total + term * ExactComplex(gmpy2.mpq(1, factorial(n)))
        term = step(term)
        n += 1
        if term.is_zero():
            return total
        if n > 2 * K + 4:  # valuation grows each step; cannot happen for F(0)=0
            raise RuntimeError("transform recurrence failed to terminate")


def g1_from_F(F: TruncatedSeries, K: int) -> TruncatedSeries:
    """``g1 = exp(F (1 - 2u d/du)) (1)`` via ``g1_{n+1} = F (g1_n - 2u g1_n')``."""
    _require_F(F, K)
    Fk = F.with_order(K)

    def step(g):
        return Fk * (g - _u_d(g) * 2)

    return _iterate_sum(step, TruncatedSeries.constant(1, K), 0, K)


def g3_from_F(F: TruncatedSeries, K: int) -> TruncatedSeries:
    """``g3 = exp(-F (1 + 2u d/du)) (1)`` via ``g3_{n+1} = -F (g3_n + 2u g3_n')``."""
    _require_F(F, K)
    Fk = F.with_order(K)

    def step(g):
        return -(Fk * (g + _u_d(g) * 2))

    return _iterate_sum(step, TruncatedSeries.constant(1, K), 0, K)


def g2_from_F(F: TruncatedSeries, K: int) -> TruncatedSeries:
    """Sum of ``g2_n / n!`` with the coupled recurrence

    ``g2_{n+1} = 2F' g1_n + 2u F' g2_n - F g2_n - 2u g2_n' F``, ``g2_0 = 0``.

    ``F`` must be known to order ``K + 1`` because ``F'`` enters.
    """
    _require_F(F, K + 1)
    Fk = F.with_order(K)
    dF = F.with_order(K + 1).derivative()
    udF = dF.times_u().with_order(K)

    def step(pair):
        g1, g2 = pair
        n1 = Fk * (g1 - _u_d(g1) * 2)
        n2 = dF * g1 * 2 + udF * g2 * 2 - Fk * g2 - Fk * _u_d(g2) * 2
        return n1, n2

    total = TruncatedSeries.zero(K)
    pair = (TruncatedSeries.constant(1, K), TruncatedSeries.zero(K))
    n = 0
    while True:
        total = total + pair[1] * ExactComplex(gmpy2.mpq(1, factorial(n)))
        pair = step(pair)
        n += 1
        if pair[0].is_zero() and pair[1].is_zero():
            return total
        if n > 2 * K + 4:
            raise RuntimeError("g2 recurrence failed to terminate")


def phi2_from_phi1(phi1: TruncatedSeries) -> TruncatedSeries:
    """``(1 + 2 phi1' phi1) / (phi1 - 2u phi1')``, one order less precise than phi1."""
    d1 = phi1.derivative()
    p1 = phi1.with_order(d1.order)
    num = d1 * p1 * 2 + 1
    den = p1 - d1.times_u().with_order(d1.order) * 2
    return num / den


def phi_bundle(spec: TransformSpec, K: int, metric=None) -> SeriesBundle:
    """Series bundle for ``G = F0(u) + (x.p)F(u)`` modulo ``u^(K+1)``.

    ``phi3`` has no closed form once ``F0`` is nonzero; it is then read off
    the conjugated realization computed by the term engine.
    """
    g1 = g1_from_F(spec.F, K)
    g2 = g2_from_F(spec.F, K)
    g3 = g3_from_F(spec.F, K)
    u = TruncatedSeries.u(K)
    phi2 = g2 + g3 + u * g2 * g3 * g3
    if spec.F0.is_zero():
        phi3 = TruncatedSeries.zero(K)
    else:
        from .hadamard import phi3_from_spec

        phi3 = phi3_from_spec(spec, K, metric=metric)
    return SeriesBundle(phi1=g1, phi2=phi2, phi3=phi3, g1=g1, g2=g2, g3=g3)


def solve_F_for_phi1(target: TruncatedSeries, K: Optional[int] = None) -> TruncatedSeries:
    """The unique ``F`` with ``F(0) = 0`` and ``g1_from_F(F) = target``.

    ``g1`` depends on ``F_n`` only through ``+F_n u^n`` plus terms in lower
    coefficients, so the system is triangular.
    """
    if K is None:
        K = target.order
    target = target.with_order(K)
    if target.coeffs[0] != ONE:
        raise ValueError(f"target(0) must be 1, got {target.coeffs[0]}")
    coeffs = [ZERO] * (K + 1)
    for n in range(1, K + 1):
        trial = g1_from_F(TruncatedSeries(coeffs, K), K)
        coeffs[n] = target.coeffs[n] - trial.coeffs[n]
    return TruncatedSeries(coeffs, K)
