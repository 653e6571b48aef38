import math

import pytest

from polsqueeze import (
    StateParams,
    apply_loss,
    purify,
    quadratures,
    squeezing_db,
    stokes_summary,
)
from polsqueeze.errors import NonPurifiable


def test_params_validation():
    with pytest.raises(ValueError):
        StateParams(-1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        StateParams(1.0, float("nan"), 0.0)
    p = StateParams(4.0, 0.3, 0.1)
    assert p.antisqueeze_ratio >= 1.0
    assert p.thermal_scale >= 1.0


def test_stokes_coherent_shot_noise():
    st = stokes_summary(StateParams(4.0, 0.0, 0.0))
    assert st.s0 == 2.0
    assert st.sx == 2.0
    assert st.var_sz == 1.0
    assert not st.wineland_squeezed


def test_stokes_closed_forms():
    p = StateParams(10.0, 0.3, 0.2)
    st = stokes_summary(p)
    nbar = 0.3 + 0.2 + 2 * 0.3 * 0.2
    assert 2 * st.s0 == pytest.approx(10.0 + nbar, rel=1e-14)
    assert 2 * st.sx == pytest.approx(10.0 - nbar, rel=1e-14)
    expected = 10.0 * (1 + 0.6 - 2 * math.sqrt(0.3 * 1.3)) * 1.4 / 4
    assert st.var_sz == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "nc,ns,nth,squeezed",
    [
        (100.0, 0.3, 0.0, True),
        (10.0, 0.04, 0.21, True),   # 0.04 > 0.21^2/1.42 = 0.03105
        (10.0, 0.03, 0.21, False),
    ],
)
def test_wineland_predicate(nc, ns, nth, squeezed):
    assert stokes_summary(StateParams(nc, ns, nth)).wineland_squeezed is squeezed


def test_wineland_equals_quadrature_criterion():
    # var(p) < 1/4 and the Wineland inequality are the same expression
    for ns in (0.0, 0.01, 0.1, 0.5):
        for nth in (0.0, 0.05, 0.3, 1.0):
            p = StateParams(1.0, ns, nth)
            assert (quadratures(p).var_p < 0.25) == p.wineland_squeezed()


def test_quadratures():
    q = quadratures(StateParams(1.0, 0.0, 0.0))
    assert q.var_x == q.var_p == 0.25
    q = quadratures(StateParams(1.0, 0.0, 1.0))
    assert q.var_x == q.var_p == 0.75
    p = StateParams(1.0, 0.3, 0.0)
    a2 = p.antisqueeze_ratio**2
    assert quadratures(p).var_p == pytest.approx(1 / (4 * a2), rel=1e-14)


def test_heisenberg_product():
    for ns in (0.0, 0.3, 1.0):
        for nth in (0.0, 0.2, 1.0):
            p = StateParams(1.0, ns, nth)
            q = quadratures(p)
            t4 = p.thermal_scale**2
            assert q.var_x * q.var_p == pytest.approx(t4 / 16, rel=1e-12)
            assert q.var_x * q.var_p >= 1 / 16 - 1e-15


def test_squeezing_db_values():
    assert squeezing_db(StateParams(1.0, 0.3, 0.0)) == pytest.approx(4.5469, abs=1e-3)
    assert squeezing_db(StateParams(1.0, 0.0, 0.0)) == 0.0
    expected = 10 * math.log10((1 + math.sqrt(2)) ** 2)
    assert squeezing_db(StateParams(1.0, 1.0, 0.0)) == pytest.approx(expected, rel=1e-12)


def test_purify_pure_state_identity():
    p = StateParams(1.0, 0.3, 0.0)
    pure, eta = purify(p)
    assert eta == 1.0
    assert pure == p


def test_purify_formula():
    p = StateParams(1.0, 0.5, 0.1)
    pure, eta = purify(p)
    assert eta == pytest.approx(0.59 / 0.7, rel=1e-14)
    assert pure.nth == 0.0
    assert pure.nc == pytest.approx(1.0 / eta, rel=1e-14)


def test_purify_rejects_too_thermal():
    with pytest.raises(NonPurifiable):
        purify(StateParams(1.0, 0.01, 0.5))


def test_apply_loss_identity_and_roundtrip():
    p = StateParams(2.0, 0.3, 0.1)
    assert apply_loss(p, 1.0) == p
    pure, eta = purify(p)
    back = apply_loss(pure, eta)
    assert back.nc == pytest.approx(p.nc, rel=1e-12)
    assert back.ns == pytest.approx(p.ns, rel=1e-12)
    assert back.nth == pytest.approx(p.nth, rel=1e-12)


def test_apply_loss_moments():
    p = StateParams(2.0, 0.3, 0.0)
    lossy = apply_loss(p, 0.5)
    assert lossy.nc == pytest.approx(1.0, rel=1e-14)
    q0, q1 = quadratures(p), quadratures(lossy)
    assert q1.var_p == pytest.approx(0.5 * q0.var_p + 0.125, rel=1e-12)
    assert q1.var_x == pytest.approx(0.5 * q0.var_x + 0.125, rel=1e-12)


def test_apply_loss_validates_eta():
    with pytest.raises(ValueError):
        apply_loss(StateParams(1.0, 0.1, 0.0), 0.0)
    with pytest.raises(ValueError):
        apply_loss(StateParams(1.0, 0.1, 0.0), 1.5)


def test_polarization_defect_identity():
    # 2<S0> - 2<Sx> is twice the V-mode occupation
    for ns, nth in [(0.1, 0.0), (0.3, 0.2), (1.0, 1.0)]:
        p = StateParams(5.0, ns, nth)
        st = stokes_summary(p)
        assert 2 * st.s0 - 2 * st.sx == pytest.approx(2 * p.vmode_mean, rel=1e-13)
