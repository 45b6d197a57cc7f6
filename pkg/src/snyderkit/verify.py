"""Target algebras as relation templates, and exact residual checks.

A relation template maps an index tuple to ``(A, B, rhs)`` meaning
``[A, B] = rhs``.  Templates only use the accessor methods of a *view*
(``xhat``, ``M``, ``T``, ``x``, ``p``, ``beta2``, ``a``, ``eta``,
``zero``, ``one``) and linear arithmetic, so the same templates drive both the
symbolic engine and the representation oracle in :mod:`snyderkit.oracle`.

The coordinate relations are written in their kappa-deformed form; the
Snyder models are the ``a = 0`` case and the natural kappa-Poincare
realization the ``b = 0`` case, which the view encodes by returning zero.
"""
from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .coeffs import I, Coefficient, ExactComplex
from .realizations import Realization
from .series import (
    TransformSpec,
    TruncatedSeries,
    g1_from_F,
    g2_from_F,
    g3_from_F,
    phi2_from_phi1,
    phi_bundle,
)
from .weyl import AlgebraElement, commutator, generator, xhat_or_zero

__all__ = [
    "RelationSpec",
    "RELATIONS",
    "relations_for",
    "SymbolicView",
    "VerificationReport",
    "verify",
    "check_series_identities",
    "random_F",
]


@dataclass(frozen=True)
class RelationSpec:
    name: str
    arity: int
    template: Callable
    doc: str = ""

    def instances(self, d: int):
        return itertools.product(range(d), repeat=self.arity)


def _lorentz(v, gen, mu, nu, rho, sg):
    """``i(eta_mr G_ns - eta_ms G_nr - eta_nr G_ms + eta_ns G_mr)``."""
    e = v.eta
    return I * (
        e(mu, rho) * gen(nu, sg)
        - e(mu, sg) * gen(nu, rho)
        - e(nu, rho) * gen(mu, sg)
        + e(nu, sg) * gen(mu, rho)
    )


def _r1(v, mu, nu):
    rhs = v.a(mu) * v.xhat(nu) - v.a(nu) * v.xhat(mu) + v.beta2 * v.M(mu, nu)
    return v.xhat(mu), v.xhat(nu), I * rhs


def _r2(v, mu, nu, lam):
    e = v.eta
    rhs = (
        e(nu, lam) * v.xhat(mu)
        - e(mu, lam) * v.xhat(nu)
        + v.a(mu) * v.M(nu, lam)
        - v.a(nu) * v.M(mu, lam)
    )
    return v.M(mu, nu), v.xhat(lam), -I * rhs


def _r3(v, mu, nu, rho, sg):
    return v.M(mu, nu), v.M(rho, sg), _lorentz(v, v.M, mu, nu, rho, sg)


def _r4(v, mu, nu, rho, sg):
    return v.T(mu, nu), v.T(rho, sg), _lorentz(v, v.T, mu, nu, rho, sg)


RELATIONS = {
    "R-Heis-xx": RelationSpec("R-Heis-xx", 2, lambda v, m, n: (v.x(m), v.x(n), v.zero()),
                              "[x_mu, x_nu] = 0"),
    "R-Heis-pp": RelationSpec("R-Heis-pp", 2, lambda v, m, n: (v.p(m), v.p(n), v.zero()),
                              "[p_mu, p_nu] = 0"),
    "R-Heis-xp": RelationSpec("R-Heis-xp", 2,
                              lambda v, m, n: (v.x(m), v.p(n), (I * v.eta(m, n)) * v.one()),
                              "[x_mu, p_nu] = i eta_mu nu"),
    "R1": RelationSpec("R1", 2, _r1, "[xh_mu, xh_nu] = i(a_mu xh_nu - a_nu xh_mu + b^2 M_mu nu)"),
    "R2": RelationSpec("R2", 3, _r2,
                       "[M_mu nu, xh_l] = -i(xh_mu eta_nl - xh_nu eta_ml + a_mu M_nl - a_nu M_ml)"),
    "R3": RelationSpec("R3", 4, _r3, "Lorentz algebra of M"),
    "R4": RelationSpec("R4", 4, _r4, "Lorentz algebra of the tensorial generators"),
    "R5": RelationSpec("R5", 3, lambda v, m, n, l: (v.T(m, n), v.x(l), v.zero()),
                       "[xh_mu nu, x_l] = 0"),
    "R5p": RelationSpec("R5p", 3, lambda v, m, n, l: (v.T(m, n), v.p(l), v.zero()),
                        "[xh_mu nu, p_l] = 0"),
}


def relations_for(R: Realization) -> list:
    names = ["R-Heis-xx", "R-Heis-pp", "R-Heis-xp", "R1", "R2", "R3"]
    if R.extended:
        names += ["R4", "R5", "R5p"]
    return [RELATIONS[n] for n in names]


class SymbolicView:
    """Template accessors backed by normal-ordered elements."""

    def __init__(self, R: Realization, grade: Optional[int] = None):
        self.R = R
        self.metric = R.metric
        self.grade = R.grade if grade is None else grade
        d = R.d
        self._xhat = [E.with_grade(self.grade) for E in R.xhat]
        self._M = [[E.with_grade(self.grade) for E in row] for row in R.M]
        self._beta2 = Coefficient.beta(d, 2) if R.has_beta else 0
        self._a = [Coefficient.a(d, m) if R.has_a else 0 for m in range(d)]

    def xhat(self, mu):
        return self._xhat[mu]

    def M(self, mu, nu):
        return self._M[mu][nu]

    def T(self, mu, nu):
        return xhat_or_zero(self.metric, self.grade, mu, nu)

    def x(self, mu):
        return generator(self.metric, self.grade, "x", mu)

    def p(self, mu):
        return generator(self.metric, self.grade, "p", mu)

    def one(self):
        return AlgebraElement.scalar(self.metric, self.grade)

    def zero(self):
        return AlgebraElement.zero(self.metric, self.grade)

    def eta(self, mu, nu):
        return self.metric.eta(mu, nu)

    @property
    def beta2(self):
        return self._beta2

    def a(self, mu):
        return self._a[mu]

    def residual(self, A, B, rhs):
        return commutator(A, B) - rhs


@dataclass
class InstanceRecord:
    name: str
    indices: tuple
    residual_terms: int
    max_weight: int
    ok: bool


@dataclass
class VerificationReport:
    model: str
    dim: int
    grade: int
    records: list = field(default_factory=list)
    elapsed_ms: int = 0
    metric: str = "lorentzian"
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.ok]

    def summary(self) -> dict:
        """Per relation: ``(instances, failures)``."""
        out: dict = {}
        for r in self.records:
            n, f = out.get(r.name, (0, 0))
            out[r.name] = (n + 1, f + (not r.ok))
        return out

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "model": self.model,
            "dim": self.dim,
            "grade": self.grade,
            "relations": [
                {
                    "name": r.name,
                    "indices": list(r.indices),
                    "residual_terms": r.residual_terms,
                    "ok": r.ok,
                }
                for r in self.records
            ],
            "ok": self.ok,
            "elapsed_ms": self.elapsed_ms if timing else 0,
        }
        d.update(self.extra)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=1, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [f"model {self.model}  dim {self.dim}  grade {self.grade}  metric {self.metric}"]
        for name, (n, f) in self.summary().items():
            lines.append(f"  {name:10s} {n:5d} instances  {'ok' if not f else f'{f} FAILED'}")
        for r in self.failures()[:20]:
            lines.append(
                f"  FAIL {r.name}{list(r.indices)}: {r.residual_terms} residual terms, "
                f"max weight {r.max_weight}"
            )
        lines.append(f"overall: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"


def verify(R: Realization, relations=None, D: Optional[int] = None) -> VerificationReport:
    """Exact residual of every relation instance at grade ``D``."""
    start = time.perf_counter()
    D = R.grade if D is None else D
    if D > R.grade:
        raise ValueError(f"realization built at grade {R.grade} cannot certify grade {D}")
    if relations is None:
        relations = relations_for(R)
    view = SymbolicView(R, D)
    report = VerificationReport(R.kind, R.d, D, metric=R.metric.name)
    for spec in sorted(relations, key=lambda s: s.name):
        for idx in spec.instances(R.d):
            res = view.residual(*spec.template(view, *idx))
            report.records.append(
                InstanceRecord(spec.name, idx, res.term_count(), res.max_weight(), res.is_zero())
            )
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


# --- series identities -------------------------------------------------------


def random_F(rng: random.Random, max_degree: int = 3, order: int = 10) -> TruncatedSeries:
    """Random polynomial ``F`` with ``F(0) = 0`` and small rational coefficients."""
    from gmpy2 import mpq

    deg = rng.randint(1, max_degree)
    coeffs = [0] + [mpq(rng.randint(-5, 5), rng.randint(1, 6)) for _ in range(deg)]
    if not any(coeffs):
        coeffs[1] = mpq(1, 3)
    return TruncatedSeries(coeffs, order)


def series_identity_checks(F: TruncatedSeries, K: int) -> dict:
    """Pass/fail of each transform identity for one ``F`` modulo ``u^(K+1)``.

    ``F`` must be known to order ``K + 2`` (two derivatives deep).
    """
    g1 = g1_from_F(F, K + 1)
    g3 = g3_from_F(F, K + 1)
    g2 = g2_from_F(F, K)
    one = TruncatedSeries.constant(1, K)
    u = TruncatedSeries.u(K)
    d1 = g1.derivative()  # order K
    g1k, g3k = g1.with_order(K), g3.with_order(K)
    closed_g2 = (d1 * g1k * 2) / (g1k - d1.times_u().with_order(K) * 2)
    b = phi_bundle(TransformSpec(F), K)
    phi2_assembled = g2 + g3k + u * g2 * g3k * g3k
    # Heisenberg-pair consistency: 2 g1 g3' + g2 (g3 + 2u g3') = 0
    d3 = g3.derivative()
    heis = d3 * g1k * 2 + g2 * (g3k + d3.times_u().with_order(K) * 2)
    # phi2 (phi1 - 2u phi1') = 1 + 2 phi1' phi1
    eq_phi = b.phi2 * (g1k - d1.times_u().with_order(K) * 2) - (d1 * g1k * 2 + 1)
    return {
        "g1_g3_inverse": (g1k * g3k).agrees(one, K),
        "g2_closed_form": g2.agrees(closed_g2, K),
        "heisenberg_pair": heis.agrees(TruncatedSeries.zero(K), K),
        "phi2_constraint": eq_phi.agrees(TruncatedSeries.zero(K), K),
        "phi2_assembly": phi2_assembled.agrees(b.phi2, K)
        and phi2_from_phi1(g1).agrees(phi2_assembled, K),
    }


def check_series_identities(K: int = 8, Fs=None, count: int = 50, seed: int = 0):
    """Run :func:`series_identity_checks` on ``F = -u/2`` plus random ``F``.

    Returns a list of ``(label, identity, ok)`` rows.
    """
    if Fs is None:
        rng = random.Random(seed)
        Fs = [("F=-u/2", TruncatedSeries([0, ExactComplex(-1) / 2], K + 2))]
        Fs += [(f"random[{k}]", random_F(rng, order=K + 2)) for k in range(count)]
    rows = []
    for label, F in Fs:
        for name, ok in series_identity_checks(F, K).items():
            rows.append((label, name, ok))
    return rows
