"""Normal-ordered arithmetic for the Heisenberg algebra plus tensorial generators.

Generators are ``x[mu]``, ``p[mu]`` with ``[x_mu, p_nu] = i eta_{mu nu}`` and
the antisymmetric ``xh[mu,nu]`` closing a Lorentz algebra among themselves
and commuting with ``x`` and ``p``.  Every element is kept in the PBW form

    (xh block, pairs in lexicographic order) (x block) (p block)

so an operator monomial is the triple ``(xh_exp, x_exp, p_exp)`` of exponent
tuples.  Coefficients are :class:`~snyderkit.coeffs.Coefficient` values in the
formal parameters; terms whose parameter weight exceeds the element's grade
are dropped on every product.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian
from math import comb, factorial
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq

from .coeffs import ONE, ZERO, I, Coefficient, ExactComplex, raw_mul

__all__ = [
    "Metric",
    "AlgebraElement",
    "CommutativePolynomial",
    "generator",
    "commutator",
    "contract",
    "pairs",
]

MAX_DIM = 6


@lru_cache(maxsize=None)
def pairs(d: int) -> tuple:
    """Ordered index pairs ``(mu, nu)`` with ``mu < nu`` in lexicographic order."""
    return tuple((m, n) for m in range(d) for n in range(m + 1, d))


@lru_cache(maxsize=None)
def _pair_index(d: int) -> dict:
    return {pr: k for k, pr in enumerate(pairs(d))}


@dataclass(frozen=True)
class Metric:
    signature: tuple

    def __post_init__(self):
        sig = tuple(int(s) for s in self.signature)
        if not 2 <= len(sig) <= MAX_DIM:
            raise ValueError(f"dimension must be in 2..{MAX_DIM}, got {len(sig)}")
        if any(s not in (1, -1) for s in sig):
            raise ValueError("signature entries must be +1 or -1")
        object.__setattr__(self, "signature", sig)

    @classmethod
    def lorentzian(cls, d: int = 4) -> "Metric":
        return cls((-1,) + (1,) * (d - 1))

    @classmethod
    def euclidean(cls, d: int = 4) -> "Metric":
        return cls((1,) * d)

    @classmethod
    def named(cls, name: str, d: int) -> "Metric":
        if name == "lorentzian":
            return cls.lorentzian(d)
        if name == "euclidean":
            return cls.euclidean(d)
        raise ValueError(f"unknown metric {name!r}")

    @property
    def d(self) -> int:
        return len(self.signature)

    def eta(self, mu: int, nu: int) -> int:
        return self.signature[mu] if mu == nu else 0

    @property
    def name(self) -> str:
        if self.signature == (1,) * self.d:
            return "euclidean"
        if self.signature == (-1,) + (1,) * (self.d - 1):
            return "lorentzian"
        return "custom"


# --- monomial products (cached per signature) --------------------------------


def _xh_generator(sig: tuple, mu: int, nu: int):
    """Canonical ``xh[mu,nu]`` as ``(pair index, sign)``, or None on the diagonal."""
    if mu == nu:
        return None
    idx = _pair_index(len(sig))
    if mu < nu:
        return idx[(mu, nu)], 1
    return idx[(nu, mu)], -1


@lru_cache(maxsize=None)
def _xh_bracket(sig: tuple, j: int, k: int) -> tuple:
    """``[xh_j, xh_k]`` as a tuple of ``(generator index, ExactComplex)``."""
    d = len(sig)
    mu, nu = pairs(d)[j]
    rho, sg = pairs(d)[k]

    def eta(a, b):
        return sig[a] if a == b else 0

    out: dict = {}
    for c, a, b in (
        (eta(mu, rho), nu, sg),
        (-eta(mu, sg), nu, rho),
        (-eta(nu, rho), mu, sg),
        (eta(nu, sg), mu, rho),
    ):
        if not c:
            continue
        g = _xh_generator(sig, a, b)
        if g is None:
            continue
        out[g[0]] = out.get(g[0], 0) + c * g[1]
    return tuple((g, I * c) for g, c in sorted(out.items()) if c)


def _bump(h: tuple, k: int, delta: int) -> tuple:
    return h[:k] + (h[k] + delta,) + h[k + 1 :]


def _acc(out: dict, key, val):
    if key in out:
        v = out[key] + val
        if v:
            out[key] = v
        else:
            del out[key]
    elif val:
        out[key] = val


@lru_cache(maxsize=None)
def _xh_mul_gen(sig: tuple, h: tuple, g: int) -> tuple:
    """PBW word ``h`` times the generator ``g`` on the right, normal ordered."""
    top = -1
    for k in range(len(h) - 1, -1, -1):
        if h[k]:
            top = k
            break
    if top <= g:
        return ((_bump(h, g, 1), ONE),)
    h1 = _bump(h, top, -1)
    out: dict = {}
    # h1 xh_top xh_g = h1 xh_g xh_top + h1 [xh_top, xh_g]
    for k1, c1 in _xh_mul_gen(sig, h1, g):
        for k2, c2 in _xh_mul_gen(sig, k1, top):
            _acc(out, k2, c1 * c2)
    for gen, c in _xh_bracket(sig, top, g):
        for k1, c1 in _xh_mul_gen(sig, h1, gen):
            _acc(out, k1, c * c1)
    return tuple(out.items())


def _xh_right_mul_word(sig: tuple, poly: dict, word: Iterable[int]) -> dict:
    for g in word:
        nxt: dict = {}
        for h, c in poly.items():
            for h2, c2 in _xh_mul_gen(sig, h, g):
                _acc(nxt, h2, c * c2)
        poly = nxt
    return poly


def _word(h: tuple) -> list:
    return [k for k, e in enumerate(h) for _ in range(e)]


@lru_cache(maxsize=None)
def _xh_mul(sig: tuple, h1: tuple, h2: tuple) -> tuple:
    if not any(h2):
        return ((h1, ONE),)
    return tuple(_xh_right_mul_word(sig, {h1: ONE}, _word(h2)).items())


@lru_cache(maxsize=None)
def _heis_reorder(sig: tuple, p_exp: tuple, x_exp: tuple) -> tuple:
    """``p^P x^X`` rewritten as ``sum c x^(X-k) p^(P-k)``.

    Per coordinate ``p^a x^b = sum_k C(a,k) C(b,k) k! (-i eta)^k x^(b-k) p^(a-k)``;
    distinct coordinates commute because the metric is diagonal.
    """
    per_axis = []
    for mu, (a, b) in enumerate(zip(p_exp, x_exp)):
        c = -I * sig[mu]
        per_axis.append(
            [(k, ExactComplex(comb(a, k) * comb(b, k) * factorial(k)) * c**k)
             for k in range(min(a, b) + 1)]
        )
    out = []
    for choice in cartesian(*per_axis):
        coeff = ONE
        for _, c in choice:
            coeff = coeff * c
        ks = tuple(k for k, _ in choice)
        out.append((ks, coeff))
    return tuple(out)


def _add_tuples(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _mono_mul(sig: tuple, m1: tuple, m2: tuple) -> tuple:
    h1, x1, p1 = m1
    h2, x2, p2 = m2
    xh = _xh_mul(sig, h1, h2)
    if not any(p1) or not any(x2):
        heis = (((_add_tuples(x1, x2), _add_tuples(p1, p2)), ONE),)
    else:
        heis = []
        for ks, c in _heis_reorder(sig, p1, x2):
            xs = tuple(a + b - k for a, b, k in zip(x1, x2, ks))
            ps = tuple(a + b - k for a, b, k in zip(p1, p2, ks))
            heis.append(((xs, ps), c))
    out = []
    for h, ch in xh:
        for (xs, ps), cx in heis:
            c = ONE if (ch is ONE and cx is ONE) else ch * cx
            out.append(((h, xs, ps), c))
    return tuple(out)


# --- elements ----------------------------------------------------------------


def _scalar_types():
    return (int, Rational, ExactComplex, mpq)


class AlgebraElement:
    """Immutable normal-ordered element with graded parameter coefficients."""

    __slots__ = ("metric", "grade", "terms")

    def __init__(self, metric: Metric, grade: int, terms=None):
        if grade < 0:
            raise ValueError("grade must be nonnegative")
        self.metric = metric
        self.grade = grade
        d = metric.d
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, Coefficient):
                c = Coefficient.constant(d, c)
            c = c.truncate(grade)
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, metric, grade, terms):
        e = cls.__new__(cls)
        e.metric = metric
        e.grade = grade
        e.terms = terms
        return e

    @classmethod
    def _from_raw(cls, metric, grade, raw: dict) -> "AlgebraElement":
        d = metric.d
        return cls._wrap(
            metric, grade, {m: Coefficient._wrap(d, t) for m, t in raw.items() if t}
        )

    @classmethod
    def zero(cls, metric: Metric, grade: int) -> "AlgebraElement":
        return cls._wrap(metric, grade, {})

    @classmethod
    def scalar(cls, metric: Metric, grade: int, value=1) -> "AlgebraElement":
        return cls(metric, grade, {unit_monomial(metric.d): value})

    # -- structure
    def _check(self, other: "AlgebraElement"):
        if self.metric != other.metric or self.grade != other.grade:
            raise ValueError(
                "metric/grade mismatch: "
                f"{self.metric.signature}@{self.grade} vs {other.metric.signature}@{other.grade}"
            )

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def term_count(self) -> int:
        """Number of (parameter monomial, operator monomial) pairs."""
        return sum(len(c.terms) for c in self.terms.values())

    def max_weight(self) -> int:
        return max((c.max_weight() for c in self.terms.values()), default=0)

    def flat_terms(self):
        """Yield ``(param_exp, monomial, ExactComplex)`` in canonical order."""
        flat = [
            (pe, m, v) for m, c in self.terms.items() for pe, v in c.terms.items()
        ]
        flat.sort(key=lambda t: (sum(t[0]), t[0], t[1]))
        return flat

    # -- linear structure
    def __add__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            out = dict(self.terms)
            for m, c in other.terms.items():
                if m in out:
                    s = out[m] + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
                else:
                    out[m] = c
            return AlgebraElement._wrap(self.metric, self.grade, out)
        if isinstance(other, (Coefficient,) + _scalar_types()):
            return self + AlgebraElement.scalar(self.metric, self.grade, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._wrap(
            self.metric, self.grade, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, AlgebraElement):
            return self + (-other)
        if isinstance(other, (Coefficient,) + _scalar_types()):
            return self + (-AlgebraElement.scalar(self.metric, self.grade, other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "AlgebraElement":
        """Multiply by a scalar or parameter coefficient (truncating to grade)."""
        d = self.metric.d
        if isinstance(s, Coefficient):
            st = s.terms
        else:
            s = ExactComplex.coerce(s)
            if not s:
                return AlgebraElement.zero(self.metric, self.grade)
            st = {(0,) * (d + 1): s}
        out = {}
        for m, c in self.terms.items():
            t = raw_mul(c.terms, st, self.grade)
            if t:
                out[m] = Coefficient._wrap(d, t)
        return AlgebraElement._wrap(self.metric, self.grade, out)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (Coefficient,) + _scalar_types()):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Coefficient,) + _scalar_types()):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        out = AlgebraElement.scalar(self.metric, self.grade)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.metric == other.metric
            and self.grade == other.grade
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.metric, self.grade, frozenset(self.terms.items())))

    # -- grade / parameter manipulation
    def with_grade(self, grade: int) -> "AlgebraElement":
        """Truncate to a lower grade (or re-label at a higher one)."""
        return AlgebraElement(self.metric, grade, self.terms)

    def filter_params(self, keep) -> "AlgebraElement":
        d = self.metric.d
        out = {}
        for m, c in self.terms.items():
            t = {pe: v for pe, v in c.terms.items() if keep(pe)}
            if t:
                out[m] = Coefficient._wrap(d, t)
        return AlgebraElement._wrap(self.metric, self.grade, out)

    def drop_a(self) -> "AlgebraElement":
        """Specialize ``a_mu -> 0``."""
        return self.filter_params(lambda pe: not any(pe[1:]))

    def drop_beta(self) -> "AlgebraElement":
        """Specialize ``b -> 0``."""
        return self.filter_params(lambda pe: pe[0] == 0)

    def xhat_degree(self) -> int:
        return max((sum(m[0]) for m in self.terms), default=0)

    def x_degree(self) -> int:
        return max((sum(m[1]) for m in self.terms), default=0)

    def beta_powers(self) -> set:
        return {pe[0] for c in self.terms.values() for pe in c.terms}

    # -- rendering
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"AlgebraElement({render(self)})"


def unit_monomial(d: int) -> tuple:
    return ((0,) * (d * (d - 1) // 2), (0,) * d, (0,) * d)


def multiply(A: AlgebraElement, B: AlgebraElement) -> AlgebraElement:
    """PBW-normal-ordered product truncated to the common grade."""
    A._check(B)
    grade = A.grade
    sig = A.metric.signature
    acc: dict = {}
    b_items = [(m2, c2.terms, c2.min_weight) for m2, c2 in B.terms.items()]
    for m1, c1 in A.terms.items():
        t1, w1 = c1.terms, c1.min_weight
        for m2, t2, w2 in b_items:
            if w1 + w2 > grade:
                continue
            prod = raw_mul(t1, t2, grade)
            if not prod:
                continue
            for m, s in _mono_mul(sig, m1, m2):
                slot = acc.get(m)
                if slot is None:
                    slot = acc[m] = {}
                if s is ONE:
                    for pe, v in prod.items():
                        _acc(slot, pe, v)
                else:
                    for pe, v in prod.items():
                        _acc(slot, pe, v * s)
    return AlgebraElement._from_raw(A.metric, grade, acc)


def commutator(A: AlgebraElement, B: AlgebraElement) -> AlgebraElement:
    return multiply(A, B) - multiply(B, A)


def generator(metric: Metric, grade: int, kind: str, *indices: int) -> AlgebraElement:
    """Single generator ``x[mu]``, ``p[mu]`` or ``xh[mu,nu]`` as an element."""
    d = metric.d
    h0, z = (0,) * (d * (d - 1) // 2), (0,) * d
    for idx in indices:
        if not 0 <= idx < d:
            raise IndexError(f"index {idx} out of range for dimension {d}")
    if kind in ("x", "p"):
        if len(indices) != 1:
            raise ValueError(f"{kind} takes exactly one index")
        e = tuple(1 if k == indices[0] else 0 for k in range(d))
        mono = (h0, e, z) if kind == "x" else (h0, z, e)
        return AlgebraElement(metric, grade, {mono: 1})
    if kind == "xhat":
        if len(indices) != 2:
            raise ValueError("xhat takes exactly two indices")
        g = _xh_generator(metric.signature, *indices)
        if g is None:
            raise ValueError("xhat[mu,mu] is not defined (antisymmetric generator)")
        k, sign = g
        h = tuple(1 if j == k else 0 for j in range(len(h0)))
        return AlgebraElement(metric, grade, {(h, z, z): sign})
    raise ValueError(f"unknown generator kind {kind!r}")


def xhat_or_zero(metric: Metric, grade: int, mu: int, nu: int) -> AlgebraElement:
    if mu == nu:
        return AlgebraElement.zero(metric, grade)
    return generator(metric, grade, "xhat", mu, nu)


def contract(
    metric: Metric, left: Sequence, right: Sequence
) -> AlgebraElement:
    """``sum_ab eta_ab left[a] right[b]`` with factor order as given.

    Entries may be elements or parameter coefficients (e.g. the formal ``a``
    vector), but at least one side per index must be an element.
    """
    total = None
    for al in range(metric.d):
        term = left[al] * right[al]
        term = term * metric.eta(al, al)
        total = term if total is None else total + term
    return total


def adjoint(A: AlgebraElement) -> AlgebraElement:
    """Formal adjoint: reverse every word, conjugate coefficients, re-order."""
    sig = A.metric.signature
    acc: dict = {}
    for m, c in A.terms.items():
        conj = {pe: v.conjugate() for pe, v in c.terms.items()}
        for m2, s in _mono_adjoint(sig, m):
            slot = acc.setdefault(m2, {})
            for pe, v in conj.items():
                _acc(slot, pe, v * s)
    return AlgebraElement._from_raw(A.metric, A.grade, acc)


@lru_cache(maxsize=None)
def _mono_adjoint(sig: tuple, m: tuple) -> tuple:
    h, xs, ps = m
    d = len(sig)
    zero_h = (0,) * len(h)
    heis = _mono_mul(sig, (zero_h, (0,) * d, ps), (zero_h, xs, (0,) * d))
    xh_poly = _xh_right_mul_word(sig, {zero_h: ONE}, reversed(_word(h)))
    out = []
    for hh, ch in xh_poly.items():
        for (_, x2, p2), cx in heis:
            out.append(((hh, x2, p2), ch * cx))
    return tuple(out)


# --- vacuum action -----------------------------------------------------------


class CommutativePolynomial:
    """Polynomial in commuting ``x_mu`` and ``x_{mu nu}`` (image of ``A |> 1``)."""

    def __init__(self, d: int, terms: dict):
        self.d = d
        self.terms = {k: c for k, c in terms.items() if c}

    def __eq__(self, other):
        if isinstance(other, CommutativePolynomial):
            return self.d == other.d and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __str__(self):
        if not self.terms:
            return "0"
        ps = pairs(self.d)
        out = []
        for (h, xs), c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            facs = [_pow(f"x[{m},{n}]", e) for (m, n), e in zip(ps, h) if e]
            facs += [_pow(f"x[{m}]", e) for m, e in enumerate(xs) if e]
            out.append(f"({c})" + ("*" + "*".join(facs) if facs else ""))
        return " + ".join(out)


def act_on_unity(A: AlgebraElement) -> CommutativePolynomial:
    """``A |> 1``: ``p |> 1 = 0`` and ``xh[mu,nu] |> 1 = x[mu,nu]``."""
    return CommutativePolynomial(
        A.metric.d, {(m[0], m[1]): c for m, c in A.terms.items() if not any(m[2])}
    )


# --- rendering ---------------------------------------------------------------


def _pow(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def render_monomial(d: int, mono: tuple) -> str:
    h, xs, ps = mono
    facs = [_pow(f"xh[{m},{n}]", e) for (m, n), e in zip(pairs(d), h) if e]
    facs += [_pow(f"x[{m}]", e) for m, e in enumerate(xs) if e]
    facs += [_pow(f"p[{m}]", e) for m, e in enumerate(ps) if e]
    return "*".join(facs)


def render(A: AlgebraElement) -> str:
    """Canonical text: terms by parameter weight, then lexicographic monomial."""
    from .coeffs import _render_param

    d = A.metric.d
    if not A.terms:
        return "0"
    parts = []
    for pe, m, v in A.flat_terms():
        facs = [f for f in (_render_param(pe), render_monomial(d, m)) if f]
        if v == ONE and facs:
            parts.append("*".join(facs))
        elif v == -ONE and facs:
            parts.append("-" + "*".join(facs))
        else:
            parts.append("*".join([str(v)] + facs))
    return " + ".join(parts).replace("+ -", "- ")
