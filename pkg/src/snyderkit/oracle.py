"""Representation oracle: the same relations checked on concrete operators.

Independent of the normal-ordering engine.  ``x_mu`` acts by multiplication
and ``p_mu = -i eta_mu mu d/dx_mu`` on polynomials with exact rational
coefficients, ``xh[mu,nu]`` acts on an extra vector index through the
matrices ``(J_mu nu)^a_b = -i(delta^a_mu eta_nu b - delta^a_nu eta_mu b)``,
and ``b``, ``a_mu`` are replaced by small rationals.

On a polynomial of bounded degree every power series in ``p^2`` is a finite
sum, so realizations are evaluated *without truncation*; a passing check is
a necessary condition for the exact relations, not a proof.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from .coeffs import ONE, ZERO, I, ExactComplex
from .realizations import EXTENDED_MODELS, Realization, _kernel_phi, _kernel_S
from .series import TruncatedSeries, binomial_series
from .verify import InstanceRecord, relations_for

__all__ = ["Op", "OracleView", "OracleReport", "rep_oracle", "recipe", "DEFAULT_BETA", "DEFAULT_A"]

DEFAULT_BETA = mpq(1, 7)
DEFAULT_A = (mpq(1, 11), 0, 0, 0)
MAX_BASIS = 20000


class InsufficientOrder(ValueError):
    pass


class Op:
    """Linear combination of words of atomic operators.

    Atoms: ``("x", mu)``, ``("p", mu)``, ``("T", mu, nu)`` with ``mu < nu``,
    and ``("U", coeffs, scale)`` for ``sum_n c_n (scale p^2)^n``.  Words act
    right to left.
    """

    __slots__ = ("words",)

    def __init__(self, words=None):
        self.words = {w: c for w, c in (words or {}).items() if c}

    @classmethod
    def atom(cls, *a):
        return cls({(a,): ONE})

    @classmethod
    def scalar(cls, c=1):
        return cls({(): ExactComplex.coerce(c)})

    def __add__(self, other):
        if not isinstance(other, Op):
            return NotImplemented
        out = dict(self.words)
        for w, c in other.words.items():
            out[w] = out.get(w, ZERO) + c
        return Op(out)

    def __neg__(self):
        return Op({w: -c for w, c in self.words.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Op):
            out: dict = {}
            for w1, c1 in self.words.items():
                for w2, c2 in other.words.items():
                    w = w1 + w2
                    out[w] = out.get(w, ZERO) + c1 * c2
            return Op(out)
        try:
            c = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return Op({w: v * c for w, v in self.words.items()})

    def __rmul__(self, other):
        try:
            c = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return Op({w: v * c for w, v in self.words.items()})

    def adjoint(self) -> "Op":
        out: dict = {}
        for w, c in self.words.items():
            rw = tuple(_atom_adjoint(a) for a in reversed(w))
            out[rw] = out.get(rw, ZERO) + c.conjugate()
        return Op(out)


def _atom_adjoint(a):
    if a[0] == "U":
        return ("U", tuple(c.conjugate() for c in a[1]), a[2].conjugate())
    return a


def _T(d, mu, nu) -> Op:
    if mu == nu:
        return Op()
    if mu < nu:
        return Op.atom("T", mu, nu)
    return -Op.atom("T", nu, mu)


class _Gens:
    def __init__(self, d, eta, b2, a):
        self.d, self.eta, self.b2, self.a = d, eta, b2, a
        self.a2 = sum((a[m] * a[m] * eta(m, m) for m in range(d)), ZERO)
        self.x = [Op.atom("x", m) for m in range(d)]
        self.p = [Op.atom("p", m) for m in range(d)]
        self.xp = sum((self.x[m] * self.p[m] * eta(m, m) for m in range(d)), Op())

    def U(self, s: TruncatedSeries, scale) -> Op:
        return Op.atom("U", tuple(s.coeffs), ExactComplex.coerce(scale))

    def xh_p(self, mu):
        return sum((_T(self.d, mu, al) * self.p[al] * self.eta(al, al) for al in range(self.d)), Op())

    def M(self, mu, nu, extended):
        orb = self.x[mu] * self.p[nu] - self.x[nu] * self.p[mu]
        return orb + _T(self.d, mu, nu) if extended else orb


def recipe(R: Realization, d: int, eta, beta, a, order: int):
    """Operator forms of ``xhat_mu`` and ``M_mu nu`` rebuilt from the model's formulas."""
    b2 = ExactComplex(beta) ** 2 if R.has_beta else ZERO
    a = [ExactComplex.coerce(v) for v in a] if R.has_a else [ZERO] * d
    g = _Gens(d, eta, b2, a)
    kind, mut = R.kind, R.mutation
    ext = kind in EXTENDED_MODELS
    M = [[g.M(m, n, ext) if m != n else Op() for n in range(d)] for m in range(d)]
    half = binomial_series(ExactComplex(1) / 2, order)
    xs = []
    if kind in ("snyder-original", "snyder-phi", "extended-snyder", "extended-snyder-phi"):
        if kind in ("snyder-phi", "extended-snyder-phi"):
            phi1, phi2, phi3 = R.bundle.phi1, R.bundle.phi2, R.bundle.phi3
        else:
            phi1 = TruncatedSeries.constant(1, order)
            phi2 = TruncatedSeries.constant(1, order)
            phi3 = TruncatedSeries.zero(order)
        if mut == "phi2-plus-u":
            phi2 = phi2 + TruncatedSeries.u(phi2.order)
        if kind == "extended-snyder":
            kern = _kernel_S(order)
        elif kind == "extended-snyder-phi":
            kern = _kernel_phi(phi1, min(order, phi1.order))
        for mu in range(d):
            e = g.x[mu] * g.U(phi1, b2) + b2 * (g.xp * g.p[mu] * g.U(phi2, b2))
            e = e + b2 * (g.p[mu] * g.U(phi3, b2))
            if ext:
                sign = 1 if mut == "flip-xhat-term" else -1
                e = e + (sign * b2) * (g.xh_p(mu) * g.U(kern, b2))
            xs.append(e)
    elif kind in ("kappa-extended", "kappa-mixed", "kappa-poincare-natural"):
        w = g.a2 - b2
        kern = _kernel_S(order)
        for mu in range(d):
            e = g.x[mu] * g.U(half, w)
            if mut != "drop-M-a":
                e = e + sum((M[mu][al] * (a[al] * eta(al, al)) for al in range(d)), Op())
            if ext:
                sign = -1 if mut == "flip-xhat-term" else 1
                e = e + (sign * w) * (g.xh_p(mu) * g.U(kern, w))
            xs.append(e)
    else:
        raise ValueError(f"no operator recipe for model {kind!r}")
    if R.hermitian:
        xs = [ExactComplex(1) / 2 * (e + e.adjoint()) for e in xs]
        M = [[ExactComplex(1) / 2 * (e + e.adjoint()) for e in row] for row in M]
    return xs, M, b2, a


class OracleView:
    """Template accessors backed by :class:`Op`; see :mod:`snyderkit.verify`."""

    def __init__(self, R: Realization, beta=DEFAULT_BETA, a=DEFAULT_A, order: int = 8):
        d = R.d
        if d > 4:
            raise ValueError("representation oracle supports d <= 4")
        self.d = d
        self.sig = R.metric.signature
        a = tuple(a)[:d] + (0,) * max(0, d - len(a))
        self._xhat, self._M, self._b2, self._a = recipe(R, d, self.eta, beta, a, order)
        self.ncols = d if R.extended else 1
        self._cache: dict = {}

    def eta(self, mu, nu):
        return self.sig[mu] if mu == nu else 0

    def xhat(self, mu):
        return self._xhat[mu]

    def M(self, mu, nu):
        return self._M[mu][nu]

    def T(self, mu, nu):
        return _T(self.d, mu, nu)

    def x(self, mu):
        return Op.atom("x", mu)

    def p(self, mu):
        return Op.atom("p", mu)

    def one(self):
        return Op.scalar(1)

    def zero(self):
        return Op()

    @property
    def beta2(self):
        return self._b2

    def a(self, mu):
        return self._a[mu]

    # -- action on vectors {(exponents, column): ExactComplex}
    def apply_atom(self, atom, key):
        ck = (atom, key)
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        exps, col = key
        kind = atom[0]
        out: dict = {}
        if kind == "x":
            mu = atom[1]
            out[(_bump(exps, mu, 1), col)] = ONE
        elif kind == "p":
            mu = atom[1]
            if exps[mu]:
                out[(_bump(exps, mu, -1), col)] = -I * (self.sig[mu] * exps[mu])
        elif kind == "T":
            if self.ncols == 1:
                raise ValueError("tensorial generator applied in a model without them")
            _, mu, nu = atom
            # (J_mu nu)^a_col = -i(delta^a_mu eta_nu col - delta^a_nu eta_mu col);
            # the overall sign is the one that reproduces the Lorentz relations
            if self.eta(nu, col):
                out[(exps, mu)] = -I * self.eta(nu, col)
            if self.eta(mu, col):
                out[(exps, nu)] = out.get((exps, nu), ZERO) + I * self.eta(mu, col)
        elif kind == "U":
            _, coeffs, scale = atom
            vec = {key: ONE}
            n = 0
            while vec:
                if n >= len(coeffs):
                    raise InsufficientOrder(
                        f"series known to order {len(coeffs) - 1} but p^2 power {n} acts nontrivially"
                    )
                c = coeffs[n] * scale**n
                if c:
                    for k, v in vec.items():
                        _add(out, k, v * c)
                vec = self._p2(vec)
                n += 1
        else:
            raise ValueError(f"unknown atom {atom!r}")
        out = {k: v for k, v in out.items() if v}
        self._cache[ck] = out
        return out

    def _p2(self, vec):
        # p^2 = sum eta_aa p_a p_a = -sum eta_aa d^2/dx_a^2
        out: dict = {}
        for (exps, col), v in vec.items():
            for al in range(self.d):
                e = exps[al]
                if e >= 2:
                    _add(out, (_bump(exps, al, -2), col), v * (-self.sig[al] * e * (e - 1)))
        return {k: v for k, v in out.items() if v}

    def apply(self, op: Op, vec: dict) -> dict:
        out: dict = {}
        for word, c in op.words.items():
            cur = vec
            for atom in reversed(word):
                nxt: dict = {}
                for k, v in cur.items():
                    for k2, v2 in self.apply_atom(atom, k).items():
                        _add(nxt, k2, v * v2)
                cur = nxt
                if not cur:
                    break
            for k, v in cur.items():
                _add(out, k, v * c)
        return {k: v for k, v in out.items() if v}

    def residual(self, A, B, rhs):
        return (A, B, rhs)

    def residual_on(self, triple, key) -> dict:
        A, B, rhs = triple
        vec = {key: ONE}
        out: dict = {}
        for k, v in self.apply(A, self.apply(B, vec)).items():
            _add(out, k, v)
        for k, v in self.apply(B, self.apply(A, vec)).items():
            _add(out, k, -v)
        for k, v in self.apply(rhs, vec).items():
            _add(out, k, -v)
        return {k: v for k, v in out.items() if v}


def _bump(t, k, delta):
    return t[:k] + (t[k] + delta,) + t[k + 1 :]


def _add(d, k, v):
    d[k] = d.get(k, ZERO) + v


def basis(d: int, max_degree: int, ncols: int):
    for total in range(max_degree + 1):
        for exps in _compositions(total, d):
            for col in range(ncols):
                yield (exps, col)


@lru_cache(maxsize=None)
def _compositions(total, d):
    return tuple(
        tuple(c)
        for c in itertools.product(range(total + 1), repeat=d)
        if sum(c) == total
    )


@dataclass
class OracleReport:
    model: str
    dim: int
    d_poly: int
    beta: str
    a: list
    basis_size: int
    records: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "model": self.model,
            "dim": self.dim,
            "d_poly": self.d_poly,
            "beta": self.beta,
            "a": self.a,
            "basis_size": self.basis_size,
            "relations": [
                {"name": r.name, "indices": list(r.indices),
                 "residual_terms": r.residual_terms, "ok": r.ok}
                for r in self.records
            ],
            "ok": self.ok,
            "elapsed_ms": self.elapsed_ms if timing else 0,
        }

    def to_text(self) -> str:
        bad = [r for r in self.records if not r.ok]
        lines = [
            f"oracle {self.model}  dim {self.dim}  polynomial degree <= {self.d_poly}  "
            f"basis {self.basis_size}  b={self.beta}  a={self.a}",
            f"  {len(self.records)} relation instances, {len(bad)} failing",
        ]
        for r in bad[:20]:
            lines.append(f"  FAIL {r.name}{list(r.indices)}: {r.residual_terms} nonzero components")
        lines.append(f"overall: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"


def rep_oracle(R: Realization, d_poly: int = 3, beta=DEFAULT_BETA, a=DEFAULT_A,
               relations=None) -> OracleReport:
    """Apply every relation residual to every basis vector; all must vanish."""
    start = time.perf_counter()
    # two realization factors raise the degree by at most 2
    order = (d_poly + 2) // 2 + 1
    view = OracleView(R, beta=beta, a=a, order=order)
    size = math.comb(d_poly + R.d, R.d) * view.ncols
    if size > MAX_BASIS:
        raise ValueError(f"basis of {size} vectors exceeds the guard of {MAX_BASIS}")
    keys = list(basis(R.d, d_poly, view.ncols))
    if relations is None:
        relations = relations_for(R)
    a_used = [str(view.a(m)) for m in range(R.d)]
    report = OracleReport(R.kind, R.d, d_poly, str(beta) if R.has_beta else "0", a_used, len(keys))
    for spec in sorted(relations, key=lambda s: s.name):
        for idx in spec.instances(R.d):
            triple = spec.template(view, *idx)
            bad = 0
            for key in keys:
                bad += len(view.residual_on(triple, key))
            report.records.append(InstanceRecord(spec.name, idx, bad, 0, bad == 0))
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report
