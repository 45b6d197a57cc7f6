"""Conjugation by exp(iG) computed with the Hadamard sum in the term engine."""
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from snyderkit.coeffs import ExactComplex
from snyderkit.hadamard import (
    helper_commutator_checks,
    make_context,
    phi3_from_spec,
    transform,
    transform_realization,
    transformed_g_series,
)
from snyderkit.realizations import (
    _Kit,
    build_extended_snyder,
    build_extended_snyder_phi,
    build_snyder_original,
    build_snyder_phi,
    build_kappa_mixed,
)
from snyderkit.series import TransformSpec, TruncatedSeries, g1_from_F, g2_from_F, g3_from_F, phi_bundle
from snyderkit.verify import random_F, verify
from snyderkit.weyl import Metric, commutator, generator

L4 = Metric.lorentzian(4)
M2 = Metric.lorentzian(2)


def F_of(*cs, order=10):
    return TruncatedSeries([0] + [mpq(c) for c in cs], order)


def test_zero_G_is_identity():
    ctx = make_context(TransformSpec(TruncatedSeries.zero(4)), L4, 8)
    x = generator(L4, 8, "x", 2)
    assert transform(ctx, x) == x


def test_g_series_from_conjugation_match_recurrences():
    F = F_of("1/3", -1, "2/5", order=12)
    ctx = make_context(TransformSpec(F), M2, 18)
    g1, g2, g3 = transformed_g_series(ctx)
    assert g1 == g1_from_F(F, 9)
    assert g2 == g2_from_F(F, 8)
    assert g3 == g3_from_F(F, 9)


def test_example_transform_of_original_snyder():
    # reference: F = -u/2: phi1 = sqrt(1-u), phi2 = 0
    ctx = make_context(TransformSpec(F_of("-1/2")), L4, 8)
    R = transform_realization(ctx, build_snyder_original(L4, 8))
    assert R.kind == "snyder-phi"
    assert R.bundle.phi1 == phi_bundle(ctx.spec, 4).phi1
    assert R.bundle.phi2.is_zero()
    assert verify(R).ok


@pytest.mark.parametrize("F", [F_of("1/3"), F_of(-1, "1/2"), F_of("-1/2")])
def test_extended_transform_is_family_member(F):
    m3 = Metric.lorentzian(3)
    ctx = make_context(TransformSpec(F), m3, 6)
    R = transform_realization(ctx, build_extended_snyder(m3, 6))
    assert R.kind == "extended-snyder-phi"
    direct = build_extended_snyder_phi(phi_bundle(ctx.spec, 3), m3, 6)
    assert R.xhat == direct.xhat
    assert R.M == direct.M
    assert verify(R).ok


def test_tensorial_generators_are_fixed():
    ctx = make_context(TransformSpec(F_of(2, -1), F_of(1)), L4, 6)
    for m, n in [(0, 1), (2, 3)]:
        xh = generator(L4, 6, "xhat", m, n)
        assert transform(ctx, xh) == xh


def test_transformed_heisenberg_pairs():
    rng = random.Random(5)
    m3 = Metric.lorentzian(3)
    for _ in range(3):
        ctx = make_context(TransformSpec(random_F(rng, order=8)), m3, 8)
        kit = _Kit(m3, 8)
        xs = [transform(ctx, x) for x in kit.x]
        ps = [transform(ctx, p) for p in kit.p]
        for m in range(3):
            for n in range(3):
                assert commutator(xs[m], xs[n]).is_zero()
                assert commutator(ps[m], ps[n]).is_zero()
                assert commutator(xs[m], ps[n]) == kit.one.scale(ExactComplex(0, m3.eta(m, n)))


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_conjugation_preserves_commutators(i, j, m, n):
    m3 = Metric.lorentzian(3)
    ctx = make_context(TransformSpec(F_of("1/2", -2), F_of(0, 3)), m3, 6)
    kit = _Kit(m3, 6)
    pool = [kit.x[m], kit.p[n], kit.x[m] * kit.p[n], generator(m3, 6, "xhat", 0, 1) * kit.p[m]]
    A, B = pool[i], pool[j]
    assert commutator(transform(ctx, A), transform(ctx, B)) == transform(ctx, commutator(A, B))


def test_phi3_from_F0():
    # reference: F = 0, F0 = u: phi3 = 2(1+u)
    phi3 = phi3_from_spec(TransformSpec(TruncatedSeries.zero(10), F_of(1)), 8)
    assert phi3 == TruncatedSeries([2, 2] + [0] * 7, 8)


def test_phi3_vanishes_without_F0():
    assert phi3_from_spec(TransformSpec(F_of(-1, 3)), 5).is_zero()


def test_mixed_F_F0_realization_still_closes():
    spec = TransformSpec(F_of("-1/2"), F_of(0, 1))
    b = phi_bundle(spec, 4)
    assert not b.phi3.is_zero()
    assert verify(build_snyder_phi(b, L4, 8)).ok


def test_kappa_transform_is_labelled_not_decomposed():
    m3 = Metric.lorentzian(3)
    ctx = make_context(TransformSpec(F_of(1)), m3, 4)
    R = transform_realization(ctx, build_kappa_mixed(m3, 4))
    assert R.kind == "transformed-kappa-mixed"
    assert R.bundle is None
    assert verify(R).ok


def test_short_series_is_rejected():
    with pytest.raises(ValueError):
        make_context(TransformSpec(F_of(1, order=2)), L4, 8)


def test_grade_mismatch_is_rejected():
    ctx = make_context(TransformSpec(F_of(1)), L4, 4)
    with pytest.raises(ValueError):
        transform(ctx, generator(L4, 6, "x", 0))


@pytest.mark.parametrize("metric,grade,kappa", [
    (Metric.lorentzian(4), 8, False), (Metric.euclidean(3), 8, False),
    (Metric.lorentzian(3), 6, True), (Metric.euclidean(2), 6, True),
])
def test_helper_commutators(metric, grade, kappa):
    rows = helper_commutator_checks(metric, grade, kappa)
    assert rows and all(ok for _, _, ok in rows), [r for r in rows if not r[2]]
