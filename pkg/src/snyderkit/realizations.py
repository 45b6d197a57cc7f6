"""Catalogue of Snyder-type realizations as normal-ordered elements.

Functions of ``u = b^2 p^2`` (or ``w = (a^2 - b^2) p^2`` for the kappa
models) are expanded as commuting polynomials in ``p`` and placed to the
right of any ``x`` factor, following the printed left-to-right order
``x_mu phi(u)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .coeffs import ONE, ZERO, Coefficient, ExactComplex
from .series import SeriesBundle, TruncatedSeries, binomial_series, phi2_from_phi1
from .weyl import AlgebraElement, Metric, adjoint, contract, generator, xhat_or_zero

__all__ = [
    "MODEL_IDS",
    "MUTATIONS",
    "Realization",
    "build",
    "build_snyder_original",
    "build_snyder_phi",
    "build_extended_snyder",
    "build_extended_snyder_phi",
    "build_kappa_extended",
    "build_kappa_mixed",
    "build_kappa_natural",
    "extract_phis",
    "hermitize",
    "specialize",
    "series_element",
]

MODEL_IDS = (
    "snyder-original",
    "snyder-phi",
    "extended-snyder",
    "extended-snyder-phi",
    "kappa-extended",
    "kappa-mixed",
    "kappa-poincare-natural",
)
KAPPA_MODELS = ("kappa-extended", "kappa-mixed", "kappa-poincare-natural")
EXTENDED_MODELS = ("extended-snyder", "extended-snyder-phi", "kappa-extended", "kappa-poincare-natural")
PHI_MODELS = ("snyder-phi", "extended-snyder-phi")

# test hooks: deliberate faults that a correct verifier must catch
MUTATIONS = ("flip-xhat-term", "phi2-plus-u", "drop-M-a")
_MUTATION_TARGETS = {
    "flip-xhat-term": ("extended-snyder", "extended-snyder-phi", "kappa-extended", "kappa-poincare-natural"),
    "phi2-plus-u": ("snyder-original", "snyder-phi", "extended-snyder", "extended-snyder-phi"),
    "drop-M-a": KAPPA_MODELS,
}


@dataclass(frozen=True)
class Realization:
    kind: str
    metric: Metric
    grade: int
    xhat: tuple
    M: tuple
    bundle: Optional[SeriesBundle] = None
    has_beta: bool = True
    has_a: bool = False
    extended: bool = False
    hermitian: bool = False
    mutation: Optional[str] = None

    @property
    def d(self) -> int:
        return self.metric.d

    def elements(self):
        yield from self.xhat
        for row in self.M:
            yield from row


class _Kit:
    """Generators and common contractions at one metric/grade."""

    def __init__(self, metric: Metric, grade: int):
        self.metric, self.grade, self.d = metric, grade, metric.d
        d = self.d
        self.x = [generator(metric, grade, "x", m) for m in range(d)]
        self.p = [generator(metric, grade, "p", m) for m in range(d)]
        self.one = AlgebraElement.scalar(metric, grade)
        self.zero = AlgebraElement.zero(metric, grade)
        self.beta2 = Coefficient.beta(d, 2)
        self.a = [Coefficient.a(d, m) for m in range(d)]
        self.a2 = sum(
            (self.a[m].mul(self.a[m]) * metric.eta(m, m) for m in range(d)),
            Coefficient(d),
        )
        self._p2 = None
        self._xp = None

    def xh(self, mu, nu):
        return xhat_or_zero(self.metric, self.grade, mu, nu)

    @property
    def p2(self):
        if self._p2 is None:
            self._p2 = contract(self.metric, self.p, self.p)
        return self._p2

    @property
    def xp(self):
        if self._xp is None:
            self._xp = contract(self.metric, self.x, self.p)
        return self._xp

    def xh_p(self, mu):
        """``xh[mu,alpha] p_alpha`` contracted with the metric."""
        return contract(self.metric, [self.xh(mu, al) for al in range(self.d)], self.p)

    def M_orbital(self, mu, nu):
        return self.x[mu] * self.p[nu] - self.x[nu] * self.p[mu]

    def M_extended(self, mu, nu):
        return self.xh(mu, nu) + self.M_orbital(mu, nu)

    def series(self, s: TruncatedSeries, scale: Coefficient, reserve: int = 0):
        return series_element(s, scale, self.metric, self.grade, reserve, self.p2)


def series_element(
    s: TruncatedSeries,
    scale: Coefficient,
    metric: Metric,
    grade: int,
    reserve: int = 0,
    p2: Optional[AlgebraElement] = None,
) -> AlgebraElement:
    """``sum_n c_n scale^n (p^2)^n`` truncated at ``grade``.

    ``reserve`` is the parameter weight of a prefactor the result will be
    multiplied by; the series must be known far enough to fill the grade.
    """
    if p2 is None:
        p2 = contract(metric, [generator(metric, grade, "p", m) for m in range(metric.d)],
                      [generator(metric, grade, "p", m) for m in range(metric.d)])
    w = scale.min_weight
    if w <= 0:
        raise ValueError("series variable must carry positive parameter weight")
    need = max(grade - reserve, 0) // w
    if s.order < need:
        raise ValueError(f"series known to order {s.order}, grade {grade} needs {need}")
    total = AlgebraElement.zero(metric, grade)
    power = AlgebraElement.scalar(metric, grade)
    sc = Coefficient.constant(metric.d)
    for n in range(need + 1):
        if n:
            power = power * p2
            sc = sc.mul(scale, grade)
        c = s.coeffs[n]
        if c:
            total = total + power.scale(sc.mul(Coefficient.constant(metric.d, c), grade))
    return total


def _orders(grade: int):
    return grade // 2, max(grade - 2, 0) // 2


def _kernel_S(order: int) -> TruncatedSeries:
    """``1/(1 + sqrt(1+u))``."""
    return (binomial_series(ExactComplex(1) / 2, order) + 1).reciprocal()


def _kernel_phi(phi1: TruncatedSeries, order: int) -> TruncatedSeries:
    """``1/(phi1 + sqrt(phi1^2 + u))``."""
    c0 = phi1.coeffs[0]
    if c0.im or c0.re <= 0:
        raise ValueError(f"phi1(0) must be a positive rational, got {c0}")
    p = phi1.with_order(order)
    return (p + (p * p + TruncatedSeries.u(order)).sqrt()).reciprocal()


def _check_mutation(kind: str, mutation: Optional[str]):
    if mutation is None:
        return
    if mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; choose from {', '.join(MUTATIONS)}")
    if kind not in _MUTATION_TARGETS[mutation]:
        raise ValueError(f"mutation {mutation!r} does not apply to model {kind!r}")


def _check_bundle(bundle: SeriesBundle, grade: int):
    k1, k2 = _orders(grade)
    if bundle.phi1.order < k1 or bundle.phi2.order < k2 or bundle.phi3.order < k2:
        raise ValueError(f"bundle too short for grade {grade}: need phi1 to {k1}, phi2/phi3 to {k2}")
    if k2 >= 1 or bundle.phi1.order >= 1:
        lhs = phi2_from_phi1(bundle.phi1)
        k = min(lhs.order, bundle.phi2.order, k2)
        if not lhs.agrees(bundle.phi2, k):
            raise ValueError("bundle violates the phi1/phi2 constraint")


def _snyder_like(kit: _Kit, phi1, phi2, phi3, mutation):
    """``x_mu phi1 + b^2 (x.p) p_mu phi2 + b^2 p_mu phi3`` for every mu."""
    b2 = kit.beta2
    s1 = kit.series(phi1, b2) if phi1 is not None else kit.one
    s2 = kit.series(phi2, b2, 2) if phi2 is not None else kit.one
    s3 = kit.series(phi3, b2, 2) if phi3 is not None else kit.zero
    extra = kit.zero
    if mutation == "phi2-plus-u":
        extra = kit.p2.scale(b2)
    out = []
    for mu in range(kit.d):
        e = kit.x[mu] * s1
        e = e + (kit.xp * kit.p[mu] * (s2 + extra)).scale(b2)
        if not s3.is_zero():
            e = e + (kit.p[mu] * s3).scale(b2)
        out.append(e)
    return out


def _M_array(kit: _Kit, extended: bool):
    f = kit.M_extended if extended else kit.M_orbital
    return tuple(tuple(f(m, n) if m != n else kit.zero for n in range(kit.d)) for m in range(kit.d))


def build_snyder_original(metric: Metric, D: int, mutation=None) -> Realization:
    _check_mutation("snyder-original", mutation)
    kit = _Kit(metric, D)
    xs = _snyder_like(kit, None, None, None, mutation)
    return Realization("snyder-original", metric, D, tuple(xs), _M_array(kit, False),
                       mutation=mutation)


def build_snyder_phi(bundle: SeriesBundle, metric: Metric, D: int, mutation=None) -> Realization:
    _check_mutation("snyder-phi", mutation)
    _check_bundle(bundle, D)
    kit = _Kit(metric, D)
    xs = _snyder_like(kit, bundle.phi1, bundle.phi2, bundle.phi3, mutation)
    return Realization("snyder-phi", metric, D, tuple(xs), _M_array(kit, False),
                       bundle=bundle, mutation=mutation)


def _extended_terms(kit: _Kit, kernel: TruncatedSeries, mutation):
    sign = 1 if mutation == "flip-xhat-term" else -1
    K = kit.series(kernel, kit.beta2, 2)
    return [(kit.xh_p(mu) * K).scale(kit.beta2 * sign) for mu in range(kit.d)]


def build_extended_snyder(metric: Metric, D: int, mutation=None) -> Realization:
    _check_mutation("extended-snyder", mutation)
    kit = _Kit(metric, D)
    base = _snyder_like(kit, None, None, None, mutation)
    tail = _extended_terms(kit, _kernel_S(_orders(D)[1]), mutation)
    xs = tuple(b + t for b, t in zip(base, tail))
    return Realization("extended-snyder", metric, D, xs, _M_array(kit, True),
                       extended=True, mutation=mutation)


def build_extended_snyder_phi(bundle: SeriesBundle, metric: Metric, D: int, mutation=None) -> Realization:
    _check_mutation("extended-snyder-phi", mutation)
    _check_bundle(bundle, D)
    kit = _Kit(metric, D)
    kernel = _kernel_phi(bundle.phi1, _orders(D)[1])
    base = _snyder_like(kit, bundle.phi1, bundle.phi2, bundle.phi3, mutation)
    tail = _extended_terms(kit, kernel, mutation)
    xs = tuple(b + t for b, t in zip(base, tail))
    return Realization("extended-snyder-phi", metric, D, xs, _M_array(kit, True),
                       bundle=bundle, extended=True, mutation=mutation)


def _kappa(kind: str, metric: Metric, D: int, *, beta: bool, extended: bool, mutation):
    _check_mutation(kind, mutation)
    kit = _Kit(metric, D)
    d = kit.d
    scale = kit.a2 - kit.beta2 if beta else kit.a2
    k1, k2 = _orders(D)
    root = kit.series(binomial_series(ExactComplex(1) / 2, k1), scale)
    M = _M_array(kit, extended)
    if extended:
        K = kit.series(_kernel_S(k2), scale, 2)
    xs = []
    for mu in range(d):
        e = kit.x[mu] * root
        if mutation != "drop-M-a":
            e = e + contract(metric, [M[mu][al] for al in range(d)], kit.a)
        if extended:
            sign = -1 if mutation == "flip-xhat-term" else 1
            e = e + (kit.xh_p(mu) * K).scale(scale * sign)
        xs.append(e)
    return Realization(kind, metric, D, tuple(xs), M, has_beta=beta, has_a=True,
                       extended=extended, mutation=mutation)


def build_kappa_extended(metric: Metric, D: int, mutation=None) -> Realization:
    return _kappa("kappa-extended", metric, D, beta=True, extended=True, mutation=mutation)


def build_kappa_mixed(metric: Metric, D: int, mutation=None) -> Realization:
    return _kappa("kappa-mixed", metric, D, beta=True, extended=False, mutation=mutation)


def build_kappa_natural(metric: Metric, D: int, mutation=None) -> Realization:
    return _kappa("kappa-poincare-natural", metric, D, beta=False, extended=True, mutation=mutation)


def build(model: str, metric: Metric, D: int, bundle: Optional[SeriesBundle] = None,
          mutation: Optional[str] = None) -> Realization:
    """Dispatch on the model identifier."""
    if model not in MODEL_IDS:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODEL_IDS)}")
    if model in PHI_MODELS:
        if bundle is None:
            raise ValueError(f"model {model!r} needs a series bundle")
        fn = build_snyder_phi if model == "snyder-phi" else build_extended_snyder_phi
        return fn(bundle, metric, D, mutation=mutation)
    return {
        "snyder-original": build_snyder_original,
        "extended-snyder": build_extended_snyder,
        "kappa-extended": build_kappa_extended,
        "kappa-mixed": build_kappa_mixed,
        "kappa-poincare-natural": build_kappa_natural,
    }[model](metric, D, mutation=mutation)


# --- decomposition -----------------------------------------------------------


class ShapeError(ValueError):
    """Element is not of the form ``x phi1 + b^2 (x.p) p phi2 + b^2 p phi3``."""


def _beta_only_coeff(c: Coefficient, beta_pow: int) -> ExactComplex:
    pe = (beta_pow,) + (0,) * c.dim
    return c.terms.get(pe, ZERO)


def _mono(d, x=(), p=()):
    xs, ps = [0] * d, [0] * d
    for m, e in x:
        xs[m] += e
    for m, e in p:
        ps[m] += e
    return ((0,) * (d * (d - 1) // 2), tuple(xs), tuple(ps))


def _read(E: AlgebraElement, mono, beta_pow):
    c = E.terms.get(mono)
    if c is None:
        return ZERO
    return _beta_only_coeff(c, beta_pow)


def _decompose_x_shape(E: AlgebraElement, mu: int):
    metric, grade, d = E.metric, E.grade, E.metric.d
    for c in E.terms.values():
        for pe in c.terms:
            if any(pe[1:]) or pe[0] % 2:
                raise ShapeError("element depends on a[mu] or odd powers of b")
    al = (mu + 1) % d
    eta = metric.eta(al, al)
    k1, k2 = _orders(grade)
    phi1 = [_read(E, _mono(d, [(mu, 1)], [(al, 2 * n)]), 2 * n) * eta**n for n in range(k1 + 1)]
    phi2 = [_read(E, _mono(d, [(al, 1)], [(al, 2 * m + 1), (mu, 1)]), 2 * m + 2) * eta ** (m + 1)
            for m in range(k2 + 1)]
    phi3 = [_read(E, _mono(d, [], [(mu, 1), (al, 2 * m)]), 2 * m + 2) * eta**m
            for m in range(k2 + 1)]
    return (TruncatedSeries(phi1, k1), TruncatedSeries(phi2, k2), TruncatedSeries(phi3, k2))


def _strip_xhat(E: AlgebraElement) -> AlgebraElement:
    return AlgebraElement._wrap(E.metric, E.grade, {m: c for m, c in E.terms.items() if not any(m[0])})


def decompose_phi_shape(E: AlgebraElement, mu: int, allow_xhat: bool = False):
    """Series ``(phi1, phi2, phi3)`` with ``E = x_mu phi1 + b^2 (x.p) p_mu phi2 + b^2 p_mu phi3``.

    Raises :class:`ShapeError` if the element does not have this form.
    """
    if any(any(m[0]) for m in E.terms):
        if not allow_xhat:
            raise ShapeError("element depends on the tensorial generators xh")
        E = _strip_xhat(E)
    phis = _decompose_x_shape(E, mu)
    kit = _Kit(E.metric, E.grade)
    rebuilt = _snyder_like_single(kit, mu, *phis)
    if rebuilt != E:
        raise ShapeError(f"component {mu} is not of the x phi1 + (x.p) p phi2 + p phi3 shape")
    return phis


def _snyder_like_single(kit: _Kit, mu, phi1, phi2, phi3):
    b2 = kit.beta2
    e = kit.x[mu] * kit.series(phi1, b2)
    e = e + (kit.xp * kit.p[mu] * kit.series(phi2, b2, 2)).scale(b2)
    return e + (kit.p[mu] * kit.series(phi3, b2, 2)).scale(b2)


def decompose_p_shape(E: AlgebraElement, mu: int) -> TruncatedSeries:
    """Series ``g`` with ``E = p_mu g(u)``."""
    metric, grade, d = E.metric, E.grade, E.metric.d
    al = (mu + 1) % d
    eta = metric.eta(al, al)
    k = grade // 2
    g = TruncatedSeries(
        [_read(E, _mono(d, [], [(mu, 1), (al, 2 * n)]), 2 * n) * eta**n for n in range(k + 1)], k
    )
    kit = _Kit(metric, grade)
    if kit.p[mu] * kit.series(g, kit.beta2) != E:
        raise ShapeError(f"component {mu} is not of the p_mu g(u) shape")
    return g


def extract_phis(R: Realization, allow_xhat: bool = False) -> SeriesBundle:
    """Read ``(phi1, phi2, phi3)`` back off every ``xhat_mu``; all must agree."""
    found = None
    for mu, E in enumerate(R.xhat):
        phis = decompose_phi_shape(E, mu, allow_xhat=allow_xhat)
        if found is None:
            found = phis
        elif phis != found:
            raise ShapeError(f"component {mu} yields different series than component 0")
    phi1, phi2, phi3 = found
    return SeriesBundle(phi1=phi1, phi2=phi2, phi3=phi3)


# --- derived realizations ----------------------------------------------------


def hermitize(R: Realization) -> Realization:
    """Replace every element ``E`` by ``(E + E^dagger)/2``."""
    half = ExactComplex(1) / 2

    def h(E):
        return (E + adjoint(E)).scale(half)

    xs = tuple(h(E) for E in R.xhat)
    M = tuple(tuple(h(E) for E in row) for row in R.M)
    return replace(R, xhat=xs, M=M, hermitian=True)


def specialize(R: Realization, drop_a: bool = False, drop_beta: bool = False) -> Realization:
    def f(E):
        if drop_a:
            E = E.drop_a()
        if drop_beta:
            E = E.drop_beta()
        return E

    return replace(
        R,
        xhat=tuple(f(E) for E in R.xhat),
        M=tuple(tuple(f(E) for E in row) for row in R.M),
        has_a=R.has_a and not drop_a,
        has_beta=R.has_beta and not drop_beta,
    )
