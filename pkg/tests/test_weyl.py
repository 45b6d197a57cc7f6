"""Normal ordering in the Heisenberg algebra extended by tensorial generators."""
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from snyderkit.coeffs import I, ONE, ZERO, Coefficient, ExactComplex
from snyderkit.weyl import (
    AlgebraElement,
    Metric,
    act_on_unity,
    adjoint,
    commutator,
    contract,
    generator,
    render,
)

L4 = Metric.lorentzian(4)


def gen(metric, kind, *idx, grade=4):
    return generator(metric, grade, kind, *idx)


# --- an independent representation: x multiplies, p = -i eta d/dx,
# xh acts on a column index; only parameter-free elements are compared.


def _act_atom(metric, atom, vec):
    sig = metric.signature
    out = {}
    for (exps, col), v in vec.items():
        kind = atom[0]
        if kind == "x":
            mu = atom[1]
            k = (exps[:mu] + (exps[mu] + 1,) + exps[mu + 1:], col)
            out[k] = out.get(k, ZERO) + v
        elif kind == "p":
            mu = atom[1]
            if exps[mu]:
                k = (exps[:mu] + (exps[mu] - 1,) + exps[mu + 1:], col)
                out[k] = out.get(k, ZERO) + v * (-I) * (sig[mu] * exps[mu])
        else:
            _, mu, nu = atom
            if col == nu:
                out[(exps, mu)] = out.get((exps, mu), ZERO) - I * v * sig[nu]
            if col == mu:
                out[(exps, nu)] = out.get((exps, nu), ZERO) + I * v * sig[mu]
    return {k: v for k, v in out.items() if v}


def act_word(metric, word, vec):
    for atom in reversed(word):
        vec = _act_atom(metric, atom, vec)
    return vec


def act_element(A: AlgebraElement, vec):
    d = A.metric.d
    from snyderkit.weyl import pairs

    out = {}
    for pe, (h, xs, ps), c in A.flat_terms():
        assert not any(pe), "only parameter-free elements are representable here"
        word = []
        for (m, n), e in zip(pairs(d), h):
            word += [("T", m, n)] * e
        for m, e in enumerate(xs):
            word += [("x", m)] * e
        for m, e in enumerate(ps):
            word += [("p", m)] * e
        for k, v in act_word(A.metric, word, vec).items():
            out[k] = out.get(k, ZERO) + v * c
    return {k: v for k, v in out.items() if v}


def element_of_word(metric, word, grade=4):
    E = AlgebraElement.scalar(metric, grade)
    for a in word:
        E = E * (gen(metric, "xhat", a[1], a[2], grade=grade) if a[0] == "T"
                 else gen(metric, a[0], a[1], grade=grade))
    return E


def atoms(d):
    xs = [("x", m) for m in range(d)] + [("p", m) for m in range(d)]
    xs += [("T", m, n) for m in range(d) for n in range(m + 1, d)]
    return st.sampled_from(xs)


@st.composite
def metric_and_word(draw):
    d = draw(st.integers(2, 3))
    metric = draw(st.sampled_from([Metric.lorentzian(d), Metric.euclidean(d)]))
    word = draw(st.lists(atoms(d), max_size=6))
    exps = tuple(draw(st.integers(0, 3)) for _ in range(d))
    col = draw(st.integers(0, d - 1))
    return metric, word, {(exps, col): ONE}


@given(metric_and_word())
def test_normal_ordered_word_acts_like_the_word(case):
    metric, word, vec = case
    assert act_element(element_of_word(metric, word), vec) == act_word(metric, word, vec)


def test_canonical_commutators():
    for mu in range(4):
        for nu in range(4):
            xp = commutator(gen(L4, "x", mu), gen(L4, "p", nu))
            assert xp == AlgebraElement.scalar(L4, 4, I * L4.eta(mu, nu))
            assert commutator(gen(L4, "x", mu), gen(L4, "x", nu)).is_zero()
            assert commutator(gen(L4, "p", mu), gen(L4, "p", nu)).is_zero()


def test_known_products():
    # by hand from [x0, p0] = -i in signature (-,+,+,+)
    assert render(gen(L4, "p", 0) * gen(L4, "x", 0)) == "i + x[0]*p[0]"
    assert render(gen(L4, "xhat", 0, 2) * gen(L4, "xhat", 0, 1)) == "i*xh[1,2] + xh[0,1]*xh[0,2]"
    assert render(gen(L4, "xhat", 1, 0)) == "-xh[0,1]"


def test_tensorial_generators_close_on_lorentz_algebra():
    for metric in (L4, Metric.euclidean(3)):
        d = metric.d
        e = metric.eta
        T = lambda m, n: gen(metric, "xhat", m, n) if m != n else AlgebraElement.zero(metric, 4)
        for m in range(d):
            for n in range(d):
                for r in range(d):
                    for s in range(d):
                        rhs = (
                            T(n, s).scale(e(m, r)) - T(n, r).scale(e(m, s))
                            - T(m, s).scale(e(n, r)) + T(m, r).scale(e(n, s))
                        ).scale(I)
                        assert commutator(T(m, n), T(r, s)) == rhs


def test_generator_errors():
    with pytest.raises(IndexError):
        gen(L4, "x", 4)
    with pytest.raises(ValueError):
        gen(L4, "xhat", 1, 1)
    with pytest.raises(ValueError):
        gen(L4, "q", 0)
    with pytest.raises(ValueError):
        Metric.lorentzian(7)


# --- algebraic properties on elements that carry parameters


@st.composite
def elements(draw, metric=Metric.lorentzian(3), grade=4):
    d = metric.d
    total = AlgebraElement.zero(metric, grade)
    for _ in range(draw(st.integers(0, 3))):
        word = draw(st.lists(atoms(d), max_size=3))
        c = Coefficient.constant(d, draw(st.integers(-3, 3)))
        if draw(st.booleans()):
            c = c * Coefficient.beta(d, 2)
        if draw(st.booleans()):
            c = c * Coefficient.a(d, draw(st.integers(0, d - 1)))
        if draw(st.booleans()):
            c = c * ExactComplex(0, 1)
        total = total + element_of_word(metric, word, grade).scale(c)
    return total


@given(elements(), elements(), elements())
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements(), elements(), elements())
def test_jacobi_identity(a, b, c):
    j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(
        c, commutator(a, b)
    )
    assert j.is_zero()


@given(elements(), elements())
def test_adjoint_reverses_products(a, b):
    assert adjoint(a * b) == adjoint(b) * adjoint(a)
    assert adjoint(adjoint(a)) == a


@given(elements(), elements())
def test_distributivity_and_antisymmetry(a, b):
    assert commutator(a, b) == -commutator(b, a)
    assert (a + b) * (a - b) == a * a - a * b + b * a - b * b


def test_grade_truncation():
    metric = Metric.euclidean(2)
    b2p = gen(metric, "p", 0, grade=2).scale(Coefficient.beta(2, 2))
    assert (b2p * b2p).is_zero()
    assert not (b2p * gen(metric, "x", 0, grade=2)).is_zero()


def test_adjoint_of_xp():
    # (x0 p0)^dagger = p0 x0 = x0 p0 + i in Lorentzian signature
    xp = gen(L4, "x", 0) * gen(L4, "p", 0)
    assert adjoint(xp) == xp + AlgebraElement.scalar(L4, 4, I)


def test_act_on_unity_and_contract():
    x = [gen(L4, "x", m) for m in range(4)]
    p = [gen(L4, "p", m) for m in range(4)]
    xp = contract(L4, x, p)
    assert act_on_unity(xp) == 0
    assert act_on_unity(x[1] + gen(L4, "xhat", 0, 1)) != 0
    assert render(contract(L4, p, p)) == "p[3]^2 + p[2]^2 + p[1]^2 - p[0]^2"


def test_scalars_mix_with_elements():
    x0 = gen(L4, "x", 0)
    assert 2 * x0 - x0 == x0
    assert (x0 * mpq(1, 2)).scale(2) == x0
    assert (x0 + 1) - 1 == x0
