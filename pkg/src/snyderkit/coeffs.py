"""Exact scalars and graded parameter coefficients.

Two layers live here:

* :class:`ExactComplex` -- Gaussian rationals ``re + i*im`` with arbitrary
  precision rational parts.
* :class:`Coefficient` -- a sparse polynomial in the formal deformation
  parameters ``b`` (beta) and ``a[0] .. a[d-1]`` with :class:`ExactComplex`
  values.  A parameter exponent is stored as the flat tuple
  ``(beta_pow, a_pow[0], ..., a_pow[d-1])``; its *weight* (the sum of the
  entries) is the grading used for truncation.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "Q",
    "ExactComplex",
    "ZERO",
    "ONE",
    "I",
    "Coefficient",
    "param_exponent",
    "weight",
]

Q = mpq


def _q(value) -> mpq:
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(value)


def _fmt_q(value: mpq) -> str:
    return str(value)


class ExactComplex:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is mpq else _q(re)
        self.im = im if type(im) is mpq else _q(im)

    @classmethod
    def coerce(cls, value) -> "ExactComplex":
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, (int, Rational, str)) or type(value) is mpq:
            return cls(value, 0)
        if isinstance(value, complex):
            raise TypeError("complex floats are not exact")
        raise TypeError(f"cannot convert {value!r} to ExactComplex")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactComplex(a * c, b)
        return ExactComplex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactComplex.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by exact zero")
        return self * ExactComplex(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return ONE / (self**-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactComplex({str(self)!r})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return _fmt_q(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = f"{_fmt_q(im)}*i"
        if not re:
            return ims
        sep = "" if ims.startswith("-") else "+"
        return f"({_fmt_q(re)}{sep}{ims})"

    def to_json(self):
        """``"p/q"`` for reals, ``["re", "im"]`` otherwise."""
        if not self.im:
            return _fmt_q(self.re)
        return [_fmt_q(self.re), _fmt_q(self.im)]


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)


def param_exponent(d: int, beta_pow: int = 0, a_pow=None) -> tuple:
    """Flat parameter exponent ``(beta_pow, a_0, ..., a_{d-1})``."""
    if beta_pow < 0:
        raise ValueError("beta exponent must be nonnegative")
    if a_pow is None:
        a_pow = (0,) * d
    a_pow = tuple(a_pow)
    if len(a_pow) != d or any(e < 0 for e in a_pow):
        raise ValueError(f"a exponent must be {d} nonnegative integers")
    return (beta_pow,) + a_pow


def weight(pe: tuple) -> int:
    return sum(pe)


@lru_cache(maxsize=None)
def pe_mul(p1: tuple, p2: tuple) -> tuple:
    """Product of two parameter monomials, returned with its weight."""
    pe = tuple(x + y for x, y in zip(p1, p2))
    return pe, sum(pe)


def _render_param(pe: tuple) -> str:
    parts = []
    if pe[0]:
        parts.append("b" if pe[0] == 1 else f"b^{pe[0]}")
    for mu, e in enumerate(pe[1:]):
        if e:
            parts.append(f"a[{mu}]" if e == 1 else f"a[{mu}]^{e}")
    return "*".join(parts)


def raw_mul(t1: dict, t2: dict, grade) -> dict:
    """Multiply raw ``{pe: ExactComplex}`` maps, dropping weight > grade."""
    out = {}
    for p1, v1 in t1.items():
        for p2, v2 in t2.items():
            pe, w = pe_mul(p1, p2)
            if grade is not None and w > grade:
                continue
            v = v1 * v2
            if pe in out:
                v = out[pe] + v
                if v:
                    out[pe] = v
                else:
                    del out[pe]
            elif v:
                out[pe] = v
    return out


class Coefficient:
    """Sparse polynomial in the formal parameters ``b`` and ``a[mu]``.

    Instances are treated as immutable values.  ``dim`` fixes the number of
    ``a`` parameters; mixing dimensions raises ``ValueError``.
    """

    __slots__ = ("dim", "terms", "min_weight")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        clean = {}
        if terms:
            for pe, v in terms.items():
                if len(pe) != dim + 1:
                    raise ValueError(f"parameter exponent {pe} does not match dim {dim}")
                v = ExactComplex.coerce(v)
                if v:
                    clean[tuple(pe)] = v
        self.terms = clean
        self.min_weight = min(map(sum, clean), default=0)

    @classmethod
    def _wrap(cls, dim: int, terms: dict) -> "Coefficient":
        # trusted constructor: keys valid, values nonzero
        c = cls.__new__(cls)
        c.dim = dim
        c.terms = terms
        c.min_weight = min(map(sum, terms), default=0)
        return c

    @classmethod
    def constant(cls, dim: int, value=1) -> "Coefficient":
        return cls(dim, {(0,) * (dim + 1): value})

    @classmethod
    def beta(cls, dim: int, power: int = 1, value=1) -> "Coefficient":
        return cls(dim, {param_exponent(dim, power): value})

    @classmethod
    def a(cls, dim: int, mu: int, value=1) -> "Coefficient":
        if not 0 <= mu < dim:
            raise IndexError(f"a index {mu} out of range for dim {dim}")
        pe = [0] * (dim + 1)
        pe[1 + mu] = 1
        return cls(dim, {tuple(pe): value})

    def _check(self, other: "Coefficient"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _lift(self, other):
        if isinstance(other, Coefficient):
            self._check(other)
            return other
        return Coefficient.constant(self.dim, ExactComplex.coerce(other))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def max_weight(self) -> int:
        return max(map(sum, self.terms), default=0)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for pe, v in other.terms.items():
            if pe in out:
                s = out[pe] + v
                if s:
                    out[pe] = s
                else:
                    del out[pe]
            else:
                out[pe] = v
        return Coefficient._wrap(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient._wrap(self.dim, {pe: -v for pe, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def mul(self, other, grade=None) -> "Coefficient":
        """Exact product, discarding entries of weight above ``grade``."""
        other = self._lift(other)
        if grade is not None and grade < 0:
            raise ValueError("grade must be nonnegative")
        return Coefficient._wrap(self.dim, raw_mul(self.terms, other.terms, grade))

    def __mul__(self, other):
        if isinstance(other, (Coefficient, ExactComplex, int, Rational)) or type(other) is mpq:
            return self.mul(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (ExactComplex, int, Rational)) or type(other) is mpq:
            return self.mul(other)
        return NotImplemented

    def power(self, n: int, grade=None) -> "Coefficient":
        out = Coefficient.constant(self.dim)
        for _ in range(n):
            out = out.mul(self, grade)
        return out

    def truncate(self, grade: int) -> "Coefficient":
        return Coefficient._wrap(
            self.dim, {pe: v for pe, v in self.terms.items() if sum(pe) <= grade}
        )

    def conjugate(self) -> "Coefficient":
        return Coefficient._wrap(
            self.dim, {pe: v.conjugate() for pe, v in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, Coefficient):
            return self.dim == other.dim and self.terms == other.terms
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for pe, v in self.sorted_terms():
            p = _render_param(pe)
            if not p:
                out.append(str(v))
            elif v == ONE:
                out.append(p)
            elif v == -ONE:
                out.append("-" + p)
            else:
                out.append(f"{v}*{p}")
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return f"Coefficient({self})"


# spec-level names for the three coefficient operations
def coeff_add(a: Coefficient, b: Coefficient) -> Coefficient:
    return a + b


def coeff_mul(a: Coefficient, b: Coefficient, grade: int) -> Coefficient:
    return a.mul(b, grade)


def coeff_conjugate(a: Coefficient) -> Coefficient:
    return a.conjugate()
