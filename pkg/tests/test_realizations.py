"""Model catalogue: construction, decomposition, specialization, hermitization."""
import pytest
from gmpy2 import mpq

from snyderkit.coeffs import Coefficient, ExactComplex
from snyderkit.realizations import (
    MODEL_IDS,
    ShapeError,
    build,
    build_extended_snyder,
    build_extended_snyder_phi,
    build_kappa_extended,
    build_kappa_mixed,
    build_kappa_natural,
    build_snyder_original,
    build_snyder_phi,
    extract_phis,
    hermitize,
    specialize,
    _Kit,
    _kernel_S,
)
from snyderkit.series import SeriesBundle, TransformSpec, TruncatedSeries, binomial_series, phi_bundle
from snyderkit.verify import verify
from snyderkit.weyl import Metric, act_on_unity, adjoint, commutator, render

L4 = Metric.lorentzian(4)
HALF = ExactComplex(mpq(1, 2))


def sqrt_bundle(K=8):
    return phi_bundle(TransformSpec(TruncatedSeries([0, mpq(-1, 2)], K + 2)), K)


def catalogue(metric, D):
    b = sqrt_bundle()
    for model in MODEL_IDS:
        yield model, build(model, metric, D, b)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("D", [4, 6])
def test_catalogue_verifies(d, D):
    for metric in (Metric.lorentzian(d), Metric.euclidean(d)):
        if d == 4 and metric.name == "euclidean" and D == 6:
            continue  # covered by the Lorentzian run; keeps the suite quick
        for model, R in catalogue(metric, D):
            rep = verify(R)
            assert rep.ok, (model, d, D, metric.name, [r for r in rep.failures()][:3])


def test_snyder_original_exact_form():
    R = build_snyder_original(L4, 8)
    assert commutator(R.xhat[0], R.xhat[1]) == R.M[0][1].scale(ExactComplex(0, 1) * Coefficient.beta(4, 2))
    assert R.xhat[2].beta_powers() == {0, 2}
    for mu in range(4):
        assert act_on_unity(R.xhat[mu]) == act_on_unity(_Kit(L4, 8).x[mu])


def test_M_is_antisymmetric():
    for R in (build_extended_snyder(L4, 4), build_kappa_mixed(Metric.lorentzian(3), 4)):
        for m in range(R.d):
            for n in range(R.d):
                assert R.M[m][n] == -R.M[n][m]


def test_trivial_bundle_is_original():
    one = TruncatedSeries.constant(1, 4)
    b = SeriesBundle(one, one, TruncatedSeries.zero(4))
    assert build_snyder_phi(b, L4, 8).xhat == build_snyder_original(L4, 8).xhat
    assert build_extended_snyder_phi(b, L4, 6).xhat == build_extended_snyder(L4, 6).xhat


def test_phi_builder_rejects_bad_bundle():
    one = TruncatedSeries.constant(1, 4)
    bad = SeriesBundle(one, one + TruncatedSeries.u(4), TruncatedSeries.zero(4))
    with pytest.raises(ValueError):
        build_snyder_phi(bad, L4, 8)
    short = SeriesBundle(TruncatedSeries.constant(1, 1), one, TruncatedSeries.zero(4))
    with pytest.raises(ValueError):
        build_snyder_phi(short, L4, 8)
    neg = SeriesBundle(TruncatedSeries([-1, 0, 0, 0, 0], 4), TruncatedSeries([-1, 0, 0, 0], 3),
                       TruncatedSeries.zero(4))
    with pytest.raises(ValueError):
        build_extended_snyder_phi(neg, L4, 6)


def test_extended_kernel_constant():
    assert _kernel_S(3).coeffs[0] == HALF


def test_extended_models_shape():
    R = build_extended_snyder(L4, 6)
    for mu in range(4):
        assert R.xhat[mu].xhat_degree() == 1
        assert R.xhat[mu].x_degree() == 1
    # M |> 1 = x_mu nu
    pol = act_on_unity(R.M[0][1])
    assert pol != 0 and all(sum(k[0]) == 1 for k in pol.terms)


def test_extract_round_trip():
    b = sqrt_bundle(4)
    R = build_snyder_phi(b, L4, 8)
    got = extract_phis(R)
    assert got.phi1 == b.phi1.with_order(4)
    assert got.phi2 == b.phi2.with_order(3)
    orig = extract_phis(build_snyder_original(L4, 8))
    assert orig.phi1 == TruncatedSeries.constant(1, 4)
    assert orig.phi2 == TruncatedSeries.constant(1, 3)
    assert orig.phi3.is_zero()


def test_extract_rejects_extended_and_kappa():
    with pytest.raises(ShapeError):
        extract_phis(build_extended_snyder(L4, 6))
    with pytest.raises(ShapeError):
        extract_phis(build_kappa_mixed(Metric.lorentzian(3), 4))


def test_specialization_chain():
    # reference: a -> 0 in the extended kappa model gives the extended model with phi1 = sqrt(1-u)
    m3 = Metric.lorentzian(3)
    K = build_kappa_extended(m3, 6)
    no_a = specialize(K, drop_a=True)
    b = SeriesBundle(binomial_series(HALF, 3).compose_scaled(-1),
                     TruncatedSeries.zero(2), TruncatedSeries.zero(2))
    target = build_extended_snyder_phi(b, m3, 6)
    assert no_a.xhat == target.xhat
    assert no_a.M == target.M
    # b -> 0 gives the natural kappa-Poincare realization
    assert specialize(K, drop_beta=True).xhat == build_kappa_natural(m3, 6).xhat
    assert specialize(build_kappa_mixed(m3, 6), drop_a=True).xhat == build_snyder_phi(b, m3, 6).xhat


def test_kappa_natural_explicit_form():
    # x sqrt(1+a^2 p^2) + M a + a^2 xh p /(1+sqrt(1+a^2 p^2)), spelled out
    m3 = Metric.lorentzian(3)
    kit = _Kit(m3, 4)
    R = build_kappa_natural(m3, 4)
    root = kit.series(binomial_series(HALF, 2), kit.a2)
    kern = kit.series(_kernel_S(1), kit.a2, 2)
    for mu in range(3):
        e = kit.x[mu] * root
        for al in range(3):
            e = e + R.M[mu][al].scale(kit.a[al] * m3.eta(al, al))
        e = e + (kit.xh_p(mu) * kern).scale(kit.a2)
        assert e == R.xhat[mu]


def test_hermitian_snyder_element():
    # reference: hermitized original: x + b^2/2((x.p)p + p(p.x))
    R = hermitize(build_snyder_original(L4, 8))
    kit = _Kit(L4, 8)
    b2 = Coefficient.beta(4, 2)
    for mu in range(4):
        px = sum((kit.p[a] * kit.x[a] * L4.eta(a, a) for a in range(4)), kit.zero)
        expect = kit.x[mu] + (kit.xp * kit.p[mu] + kit.p[mu] * px).scale(b2 * HALF)
        assert R.xhat[mu] == expect
        assert adjoint(R.xhat[mu]) == R.xhat[mu]
    assert render(R.xhat[1]).startswith("x[1] - 5/2*i*b^2*p[1]")


@pytest.mark.parametrize("model,d,D", [
    ("snyder-original", 4, 6), ("extended-snyder", 3, 6), ("kappa-extended", 3, 4),
    ("kappa-mixed", 3, 4), ("snyder-phi", 3, 6), ("extended-snyder-phi", 3, 4),
])
def test_hermitized_models_stay_valid(model, d, D):
    R = hermitize(build(model, Metric.lorentzian(d), D, sqrt_bundle()))
    assert all(adjoint(E) == E for E in R.elements())
    assert verify(R).ok


def test_build_errors():
    with pytest.raises(ValueError):
        build("snyder", L4, 4)
    with pytest.raises(ValueError):
        build("snyder-phi", L4, 4)
    with pytest.raises(ValueError):
        build("snyder-original", L4, 4, mutation="drop-M-a")
    with pytest.raises(ValueError):
        build("snyder-original", L4, 4, mutation="bogus")
