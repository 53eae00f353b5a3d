import cmath
import math

import numpy as np
import pytest

from kron_tan import (
    SPEED_OF_LIGHT,
    ApertureModel,
    BraninLine,
    FarFieldLink,
    ReflectionLink,
    branin_two_port,
    cascade_coupling,
    friis_coupling_impedance,
    gupta_aperture_impedance,
    reflection_coupling,
)
from kron_tan.errors import DomainError, SingularFrequencyError

# 50-digit evaluations of the slot formula, frozen
GUPTA_GOLDEN = [
    (0.5, 1.0, 294.6943043961680525611957),
    (0.9, 1.0, 519.5547811158857821794882),
    (0.004, 0.02, 198.3464098561058694683633),
    (1e-6, 1.0, 38.95433912074218433749855),
]


@pytest.mark.parametrize("we, b, expected", GUPTA_GOLDEN)
def test_gupta_golden(we, b, expected):
    assert gupta_aperture_impedance(we, b) == pytest.approx(expected, rel=1e-12)


def test_gupta_against_mpmath_on_a_sweep():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for r in np.geomspace(1e-8, 0.999, 25):
        r_mp = mp.mpf(float(r))
        q = (1 - r_mp**2) ** mp.mpf("0.25")
        ref = 120 * mp.pi**2 / mp.log(2 * (1 + q) / (1 - q))
        assert gupta_aperture_impedance(float(r), 1.0) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("we, b", [(0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (0.1, 0.0), (-0.1, 1.0)])
def test_gupta_domain(we, b):
    with pytest.raises(DomainError):
        gupta_aperture_impedance(we, b)
    with pytest.raises(DomainError):
        ApertureModel(we, b)


def test_aperture_model_is_a_resistance():
    z = ApertureModel(0.5, 1.0).as_impedance()
    assert z.evaluate(1e9) == pytest.approx(294.6943043961680525611957)


def test_port_matrix_reduces_to_telegrapher_abcd():
    zc, tau = 50.0, 1e-9
    line = BraninLine(0, 1, zc, tau)
    for w in (1e7, 3e8, 2.2e9):
        Z = line.port_matrix(w)
        th = w * tau
        # open-circuit impedances of a lossless line
        assert Z[0, 0] == pytest.approx(-1j * zc / math.tan(th), rel=1e-12)
        assert Z[0, 1] == pytest.approx(-1j * zc / math.sin(th), rel=1e-12)
        assert np.allclose(Z, Z.T)


def test_port_matrix_resonance_is_reported():
    line = BraninLine(0, 1, 50.0, 1.0)
    with pytest.raises(SingularFrequencyError):
        line.port_matrix(0.0)


def test_line_domain():
    with pytest.raises(DomainError):
        BraninLine(0, 1, 0.0, 1e-9)
    with pytest.raises(DomainError):
        BraninLine(0, 1, 50.0, -1.0)
    with pytest.raises(DomainError):
        BraninLine(2, 2, 50.0, 1e-9)


def test_tensor_at_zero_delay():
    # with R0 = RL = 0 and tau = 0 the (2,1) entry is -Zc
    t = branin_two_port(BraninLine(0, 1, 50.0, 0.0))
    assert np.allclose(t.matrix(1.0), [[50, -50], [-50, 50]])


def test_tensor_matched_source_sees_zc():
    t = branin_two_port(BraninLine(0, 1, 50.0, 3e-9), r_source=50.0, r_load=50.0)
    for w in (1e8, 7e8):
        assert t.driving_point_impedance(w) == pytest.approx(50.0)
        i1, i2 = t.solve(w)
        # matched load receives the delayed incident wave
        assert i2 == pytest.approx(0.5 / 50 * cmath.exp(-1j * w * 3e-9))


def test_tensor_open_end_has_no_finite_block():
    t = branin_two_port(BraninLine(0, 1, 50.0, 1e-9), r_load=math.inf)
    with pytest.raises(DomainError):
        t.block
    i1, i2 = t.solve(1e8)
    assert i2 == 0
    assert t.driving_point_impedance(1e8) == pytest.approx(50 / np.tanh(1j * 1e8 * 1e-9))


def test_friis_magnitude_matches_power_ratio():
    link = FarFieldLink(0, 1, R11=50.0, R22=73.0, A_t=0.01, A_r=0.02, r=3.0)
    w = 2 * math.pi * 1e9
    lam = SPEED_OF_LIGHT / 1e9
    z = friis_coupling_impedance(link, w)
    assert abs(z) ** 2 / (50 * 73) == pytest.approx(0.01 * 0.02 / (lam * 3.0) ** 2)
    assert cmath.phase(z) == pytest.approx(cmath.phase(cmath.exp(-1j * w * 3.0 / SPEED_OF_LIGHT)))
    assert link.tau == pytest.approx(1e-8, rel=1e-3)
    entries = link.entries(w)
    assert entries[0][2] == entries[1][2] and {e[:2] for e in entries} == {(0, 1), (1, 0)}


def test_friis_domain():
    with pytest.raises(DomainError):
        friis_coupling_impedance(FarFieldLink(0, 1, 1, 1, 1, 1, 0.0), 1e9)
    with pytest.raises(DomainError):
        FarFieldLink(0, 1, -1, 1, 1, 1, 1.0)
    with pytest.raises(DomainError):
        FarFieldLink(2, 2, 1, 1, 1, 1, 1.0)
    with pytest.raises(SingularFrequencyError):
        friis_coupling_impedance(FarFieldLink(0, 1, 1, 1, 1, 1, 1.0), 0.0)


def test_reflection_value():
    link = ReflectionLink(4, G=100.0, R=0.5, sigma=-1.0, Rr=50.0)
    w = 2 * math.pi * 10e9
    lam = SPEED_OF_LIGHT / 10e9
    z = reflection_coupling(link, w)
    assert abs(z) == pytest.approx(100 * lam * math.sqrt(50) / (4 * math.pi * 2 * 0.5))
    assert link.entries(w) == [(4, 4, z)]
    flipped = ReflectionLink(4, 100.0, 0.5, -1.0, 50.0, phase=-1)
    assert reflection_coupling(flipped, w) == pytest.approx(-z)
    fixed = ReflectionLink(4, 1.0, 1.0, 1.0, 1.0, wavelength=2.0)
    assert abs(reflection_coupling(fixed, 1.0)) == pytest.approx(2.0 / (8 * math.pi))


def test_reflection_domain():
    for kwargs in ({"R": 0.0}, {"Rr": 0.0}, {"phase": 2}):
        base = dict(mesh=0, G=1.0, R=1.0, sigma=1.0, Rr=1.0)
        base.update(kwargs)
        with pytest.raises(DomainError):
            ReflectionLink(**base)


def test_cascade_product():
    assert cascade_coupling([2.0, 0.5, 3.0], 1.0) == 3.0
    assert cascade_coupling([1j], 2.0) == 2j
    with pytest.raises(DomainError):
        cascade_coupling([], 1.0)
    with pytest.raises(DomainError):
        cascade_coupling([1.0, 2.0], 1.0)
