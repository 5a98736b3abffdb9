import cmath
import math

import pytest

from ionbound.constants import PRINTED
from ionbound.species import TrapConfig
from ionbound.pulse import (
    SidebandState,
    axial_frequency_max,
    derive_timing_constant,
    derived_prefactors,
    lamb_dicke,
    pulse_timing,
    sideband_evolve,
    u_pulse_duration,
    validity_ratio,
)


def test_axial_frequency_oracle(registry, paper_trap):
    # frozen from a hand evaluation of
    # sqrt(Z^2 e^2/(4 pi eps0 M)) * (2.0 / (L^0.56 y lambda F))^1.5
    nu = axial_frequency_max(registry.lookup("Ca II"), 47, paper_trap)
    assert nu == pytest.approx(10550378.79873645, rel=1e-12)


def test_axial_frequency_scalings(registry, paper_trap):
    ca = registry.lookup("Ca II")
    base = axial_frequency_max(ca, 47, paper_trap)
    doubled_safety = axial_frequency_max(ca, 47, TrapConfig(safety=2.0))
    assert doubled_safety == pytest.approx(base / 2**1.5, rel=1e-12)
    doubled_f = axial_frequency_max(ca, 47, TrapConfig(f_number=2.0))
    assert doubled_f == pytest.approx(base / 2**1.5, rel=1e-12)
    longer = axial_frequency_max(ca, 94, paper_trap)
    assert longer == pytest.approx(base * (47 / 94) ** 0.84, rel=1e-12)
    with pytest.raises(ValueError):
        axial_frequency_max(ca, 1, paper_trap)


def test_pulse_duration_oracles(registry, paper_trap):
    # timing * sqrt(A y^5 lambda^3 F^3 L^1.68 / Z^2), frozen values
    ca = registry.lookup("Ca II")
    assert u_pulse_duration(ca, 47, paper_trap) == pytest.approx(
        2.897887267497663e-07, rel=1e-12
    )
    yb = registry.lookup("Yb II")
    assert u_pulse_duration(yb, 2192, paper_trap) == pytest.approx(
        7.747782773330355e-06, rel=1e-12
    )
    with pytest.raises(ValueError):
        u_pulse_duration(ca, 1, paper_trap)


def test_pulse_duration_prefactor_linearity(registry, paper_trap):
    ca = registry.lookup("Ca II")
    printed = u_pulse_duration(ca, 47, paper_trap, PRINTED)
    derived = u_pulse_duration(ca, 47, paper_trap, derived_prefactors())
    assert derived == pytest.approx(
        printed * derive_timing_constant() / PRINTED.timing, rel=1e-14
    )


def test_timing_constant_first_principles():
    # same quantity, independently grouped
    from ionbound.constants import CODATA2018 as C

    independent = math.pi * math.sqrt(
        4.0 * math.pi * C.eps0 * C.u / (8.0 * C.e**2)
    )
    value = derive_timing_constant()
    assert value == pytest.approx(independent, rel=1e-14)
    assert value == pytest.approx(2.98, rel=1e-3)


def test_derived_prefactors_tied_together():
    pref = derived_prefactors()
    assert pref.label == "derived"
    assert pref.intrinsic == 6.0 / pref.timing
    assert pref.experimental == 1.0 / pref.timing


def test_lamb_dicke_oracle(registry):
    # frozen; both algebraic forms agree
    ca = registry.lookup("Ca II")
    nu = 2.0 * math.pi * 500e3
    eta = lamb_dicke(ca, nu)
    assert eta == pytest.approx(0.137008004792394, rel=1e-12)

    from ionbound.constants import CODATA2018 as C

    alt = (2.0 * math.pi / ca.wavelength_m) * math.sqrt(
        C.hbar / (2.0 * ca.A * C.u * nu)
    )
    assert eta == pytest.approx(alt, rel=1e-12)


def test_lamb_dicke_angle_and_frequency(registry):
    ca = registry.lookup("Ca II")
    nu = 2.0 * math.pi * 500e3
    head_on = lamb_dicke(ca, nu, theta=0.0)
    assert lamb_dicke(ca, nu, theta=math.pi / 3) == pytest.approx(
        head_on * math.cos(math.pi / 3), rel=1e-12
    )
    assert lamb_dicke(ca, 4.0 * nu) == pytest.approx(head_on / 2.0, rel=1e-12)
    with pytest.raises(ValueError):
        lamb_dicke(ca, 0.0)


def test_validity_ratio_formula():
    assert validity_ratio(2.0, 0.1, 1.0, 4) == pytest.approx(
        (2.0 * 0.1 / (2.0 * 1.0 * 2.0)) ** 2, rel=1e-15
    )
    with pytest.raises(ValueError):
        validity_ratio(1.0, 0.1, 0.0, 4)


@pytest.mark.parametrize("n_ions", [2, 10, 47, 200])
@pytest.mark.parametrize("safety", [1.0, 2.0, 3.0])
def test_timing_identity_and_validity(registry, n_ions, safety):
    ca = registry.lookup("Ca II")
    timing = pulse_timing(ca, n_ions, TrapConfig(safety=safety))
    assert timing.t_u * timing.nu_x == pytest.approx(math.pi * safety, rel=1e-12)
    assert timing.validity_ratio == pytest.approx(1.0 / safety**2, rel=1e-12)
    # the back-derived Rabi frequency closes the cycle equation
    assert timing.rabi_freq * timing.eta * timing.t_u == pytest.approx(
        2.0 * math.pi * math.sqrt(n_ions), rel=1e-12
    )


def test_out_of_regime_threshold(registry):
    ca = registry.lookup("Ca II")
    assert pulse_timing(ca, 10, TrapConfig(safety=1.0)).out_of_regime
    assert pulse_timing(ca, 10, TrapConfig(safety=3.0)).out_of_regime  # 1/9 > 0.1
    assert not pulse_timing(ca, 10, TrapConfig(safety=3.2)).out_of_regime


def test_closed_form_tracks_identity(registry):
    # the closed form with derived constants IS the identity; the printed
    # coefficient 2.9 carries about 2.8% of rounding slack
    der = derived_prefactors()
    for name in ("Hg II", "Ca II", "Ba II", "Yb II"):
        species = registry.lookup(name)
        for safety in (1.0, 3.0):
            cfg = TrapConfig(safety=safety)
            for n_ions in (2, 5, 10, 47, 100, 200):
                ident = pulse_timing(species, n_ions, cfg).t_u
                assert u_pulse_duration(species, n_ions, cfg, der) == pytest.approx(
                    ident, rel=1e-12
                )
                printed = u_pulse_duration(species, n_ions, cfg, PRINTED)
                assert abs(printed / ident - 1.0) < 0.03


def test_sideband_state_contract():
    state = SidebandState(0.6, 0.8j)
    assert state.populations == pytest.approx((0.36, 0.64))
    with pytest.raises(ValueError):
        SidebandState(0.6, 0.9j)
    with pytest.raises(ValueError):
        SidebandState(complex("nan"), 0.0)


def test_full_cycle_flips_sign():
    start = SidebandState(1.0 + 0.0j, 0.0j)
    end = sideband_evolve(start, 1.0, math.pi)
    assert abs(end.amp_g1 - (-1.0)) <= 1e-12
    assert abs(end.amp_e0) <= 1e-12


def test_evolution_matches_two_level_rotation():
    # compare against the rotation matrix evaluated with cmath
    state = SidebandState(0.6, 0.8j)
    coupling, duration, phase = 0.7, 1.3, 0.4
    angle = coupling * duration
    c, s = math.cos(angle), math.sin(angle)
    expected_g1 = c * 0.6 + (-1j * cmath.exp(1j * phase) * s) * 0.8j
    expected_e0 = c * 0.8j + (-1j * cmath.exp(-1j * phase) * s) * 0.6
    end = sideband_evolve(state, coupling, duration, phase)
    assert end.amp_g1 == pytest.approx(expected_g1, abs=1e-12)
    assert end.amp_e0 == pytest.approx(expected_e0, abs=1e-12)


def test_half_pulses_compose():
    start = SidebandState(1.0 + 0.0j, 0.0j)
    two_steps = sideband_evolve(
        sideband_evolve(start, 2.0, math.pi / 4, phase=0.7), 2.0, math.pi / 4, phase=0.7
    )
    one_step = sideband_evolve(start, 2.0, math.pi / 2, phase=0.7)
    assert two_steps.amp_g1 == pytest.approx(one_step.amp_g1, abs=1e-10)
    assert two_steps.amp_e0 == pytest.approx(one_step.amp_e0, abs=1e-10)


def test_norm_pinned_over_many_steps():
    state = SidebandState(math.sqrt(0.3), complex(0.1, math.sqrt(0.69)))
    for _ in range(10_000):
        state = sideband_evolve(state, 1.0, 0.01, phase=0.3)
    norm_sq = abs(state.amp_g1) ** 2 + abs(state.amp_e0) ** 2
    assert abs(norm_sq - 1.0) <= 1e-13


def test_evolve_rejects_bad_arguments():
    state = SidebandState(1.0 + 0.0j, 0.0j)
    with pytest.raises(ValueError):
        sideband_evolve(state, -1.0, 1.0)
    with pytest.raises(ValueError):
        sideband_evolve(state, 1.0, -1.0)
    with pytest.raises(ValueError):
        sideband_evolve(state, math.inf, 1.0)
