"""Similarity transforms ``A -> S A S^-1`` with ``S = exp(iG)``.

``S`` itself is never built.  Conjugation is the Hadamard sum
``sum_n (ad_{iG})^n (A) / n!``; every term of ``G`` carries parameter weight
at least 2, so the iterated commutators vanish modulo the grade after at
most ``grade // 2`` steps.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from gmpy2 import mpq

from .coeffs import I, Coefficient, ExactComplex
from .realizations import (
    Realization,
    ShapeError,
    _Kit,
    build_snyder_original,
    decompose_p_shape,
    decompose_phi_shape,
    extract_phis,
)
from .series import SeriesBundle, TransformSpec, TruncatedSeries
from .weyl import AlgebraElement, Metric, commutator

__all__ = ["TransformContext", "make_context", "transform", "transform_realization",
           "phi3_from_spec", "transformed_g_series", "helper_commutator_checks"]


@dataclass(frozen=True)
class TransformContext:
    spec: TransformSpec
    metric: Metric
    grade: int
    G: AlgebraElement


def make_context(spec: TransformSpec, metric: Metric, grade: int) -> TransformContext:
    """Expand ``G = F0(u) + (x.p) F(u)`` with ``u -> b^2 p^2``."""
    kit = _Kit(metric, grade)
    G = kit.zero
    if not spec.F.is_zero():
        G = G + kit.xp * _padded(kit, spec.F)
    if not spec.F0.is_zero():
        G = G + _padded(kit, spec.F0)
    return TransformContext(spec, metric, grade, G)


def _padded(kit: _Kit, s: TruncatedSeries) -> AlgebraElement:
    # F and F0 are usually polynomials given at a modest order; terms past the
    # given order are unknown, so the grade must not reach them.
    need = kit.grade // 2
    if s.order < need:
        raise ValueError(f"series known to order {s.order}, grade {kit.grade} needs {need}")
    return kit.series(s, kit.beta2)


def transform(ctx: TransformContext, A: AlgebraElement) -> AlgebraElement:
    """Hadamard sum for ``exp(iG) A exp(-iG)``."""
    if A.grade != ctx.grade or A.metric != ctx.metric:
        raise ValueError("element and transform context differ in metric or grade")
    iG = ctx.G.scale(I)
    total, term, n = A, A, 0
    while True:
        n += 1
        term = commutator(iG, term).scale(mpq(1, n))
        if term.is_zero():
            return total
        total = total + term
        if n > ctx.grade + 1:
            raise RuntimeError("Hadamard series failed to terminate")


def transform_realization(ctx: TransformContext, R: Realization) -> Realization:
    """Conjugate every element; the result is labelled as a phi-family member."""
    if R.grade != ctx.grade:
        R_grade = ctx.grade
        if R.grade < R_grade:
            raise ValueError(f"realization grade {R.grade} below transform grade {R_grade}")
    xs = tuple(transform(ctx, E.with_grade(ctx.grade)) for E in R.xhat)
    M = tuple(tuple(transform(ctx, E.with_grade(ctx.grade)) for E in row) for row in R.M)
    out = replace(R, xhat=xs, M=M, grade=ctx.grade, bundle=None)
    if R.has_a:
        return replace(out, kind=f"transformed-{R.kind}")
    try:
        bundle = extract_phis(out, allow_xhat=R.extended)
    except ShapeError:
        return replace(out, kind=f"transformed-{R.kind}")
    kind = "extended-snyder-phi" if R.extended else "snyder-phi"
    return replace(out, kind=kind, bundle=bundle)


def transformed_g_series(ctx: TransformContext):
    """``(g1, g2, g3)`` read off the conjugated ``x_0`` and ``p_0``.

    This is the operator-side path; it does not touch the series recurrences.
    """
    kit = _Kit(ctx.metric, ctx.grade)
    xprime = transform(ctx, kit.x[0])
    pprime = transform(ctx, kit.p[0])
    g1, g2, g0 = decompose_phi_shape(xprime, 0)
    if not g0.is_zero():
        raise ShapeError("x' has a p-only component; F0 must vanish for the g-series")
    g3 = decompose_p_shape(pprime, 0)
    return g1, g2, g3


def phi3_from_spec(spec: TransformSpec, K: int, metric: Optional[Metric] = None) -> TruncatedSeries:
    """``phi3`` to order ``K`` by conjugating the original Snyder realization."""
    if metric is None:
        metric = Metric.lorentzian(2)
    grade = 2 * K + 2
    ctx = make_context(spec, metric, grade)
    R = transform_realization(ctx, build_snyder_original(metric, grade))
    if R.bundle is None:
        raise ShapeError("conjugated realization is not of the phi1/phi2/phi3 shape")
    return R.bundle.phi3.with_order(K)


def helper_commutator_checks(metric: Metric, grade: int, kappa: bool = False):
    """Commutators of ``x``, ``x.p`` and ``M`` with the square-root kernels.

    With ``w = s p^2`` (``s = b^2``, or ``a^2 - b^2`` when ``kappa``),
    ``S = 1/(1+sqrt(1+w))`` and ``R = 1/(sqrt(1+w)(1+sqrt(1+w))^2)``:

    * ``[x_mu, S] = -i s p_mu R``
    * ``[S, x.p] = i w R``
    * ``[x_mu, sqrt(1+w)] = i s p_mu / sqrt(1+w)``
    * ``[M_mu nu, S] = [M_mu nu, sqrt(1+w)] = 0``

    Both sides are expanded to ``grade``.  Returns ``(name, indices, ok)`` rows.
    """
    from .realizations import _kernel_S
    from .series import binomial_series

    kit = _Kit(metric, grade)
    K = grade // 2
    s = kit.a2 - kit.beta2 if kappa else kit.beta2
    root = binomial_series(ExactComplex(1) / 2, K)
    S = _kernel_S(K)
    R = (root * (root + 1) * (root + 1)).reciprocal()
    S_e, root_e = kit.series(S, s), kit.series(root, s)
    R_e, inv_root_e = kit.series(R, s, 2), kit.series(root.reciprocal(), s, 2)
    wR = kit.series(R.times_u().with_order(K), s)
    tag = "kappa" if kappa else "beta"
    rows = []
    for mu in range(kit.d):
        lhs = commutator(kit.x[mu], S_e)
        rhs = (kit.p[mu] * R_e).scale(s * (-I))
        rows.append((f"{tag}:[x,S]", (mu,), (lhs - rhs).is_zero()))
        if kappa:
            lhs = commutator(kit.x[mu], root_e)
            rhs = (kit.p[mu] * inv_root_e).scale(s * I)
            rows.append((f"{tag}:[x,sqrt]", (mu,), (lhs - rhs).is_zero()))
    if not kappa:
        rows.append((f"{tag}:[S,x.p]", (), (commutator(S_e, kit.xp) - wR.scale(I)).is_zero()))
    for ext in (False, True):
        for mu in range(kit.d):
            for nu in range(kit.d):
                if mu == nu:
                    continue
                M = kit.M_extended(mu, nu) if ext else kit.M_orbital(mu, nu)
                name = f"{tag}:[M{'ext' if ext else ''},S]"
                rows.append((name, (mu, nu), commutator(M, S_e).is_zero()))
                if kappa:
                    rows.append((name.replace(",S]", ",sqrt]"), (mu, nu),
                                 commutator(M, root_e).is_zero()))
    return rows
