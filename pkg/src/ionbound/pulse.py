"""Sideband pulse timing and two-level dynamics on the phonon bus.

Two-qubit operations are driven by laser pulses tuned to the first lower
sideband of the chain's center-of-mass mode.  The slowest admissible pulse
sets the clock of the whole computation, and its duration is fixed by two
competing requirements:

* the focal spot, of diameter about ``wavelength * f_number``, must not
  illuminate neighbouring ions, which caps the axial frequency through the
  minimum ion spacing (see :func:`axial_frequency_max`);
* the pulse must be slow compared to the trap period so that no appreciable
  power is delivered at neighbouring vibrational frequencies, expressed as
  ``t_u = pi * safety / nu_x``.

The spot criterion is operationalized here as ``min_spacing = safety *
wavelength * f_number``: the minimum spacing equals the safety factor times
the diffraction-limited spot size.  This is the unique reading that yields
the ``safety**2.5`` dependence and the 2.9 s m^-3/2 coefficient of the
closed-form pulse duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA2018, PhysicalConstants, Prefactors
from .species import IonSpecies, TrapConfig

__all__ = [
    "PulseTiming",
    "SidebandState",
    "VALIDITY_WARNING_RATIO",
    "SPACING_COEFFICIENT",
    "SPACING_EXPONENT",
    "axial_frequency_max",
    "u_pulse_duration",
    "derive_timing_constant",
    "derived_prefactors",
    "lamb_dicke",
    "validity_ratio",
    "pulse_timing",
    "sideband_evolve",
]

# reference power-law constants for the minimum chain spacing,
# min_spacing = SPACING_COEFFICIENT * length_scale / L**SPACING_EXPONENT
SPACING_COEFFICIENT = 2.0
SPACING_EXPONENT = 0.56

# sideband treatment assumes (Omega * eta / (2 nu_x sqrt(L)))**2 << 1;
# ratios above this threshold are flagged
VALIDITY_WARNING_RATIO = 0.1


@dataclass(frozen=True)
class PulseTiming:
    """Self-consistent timing bundle at the largest admissible axial frequency.

    Attributes
    ----------
    n_ions : int
        Chain length.
    nu_x : float
        Axial angular frequency [rad/s], the largest compatible with the
        focal-spot spacing constraint.
    t_u : float
        Sideband pulse duration [s]; satisfies ``t_u * nu_x = pi * safety``
        by construction.
    eta : float
        Lamb-Dicke parameter at ``nu_x``.
    rabi_freq : float
        Rabi angular frequency [rad/s] required to complete the sideband
        cycle in ``t_u``; infinite when ``eta`` is 0.
    validity_ratio : float
        ``(rabi_freq * eta / (2 nu_x sqrt(L)))**2``, equal to
        ``1 / safety**2`` by construction.
    """

    n_ions: int
    nu_x: float
    t_u: float
    eta: float
    rabi_freq: float
    validity_ratio: float

    @property
    def out_of_regime(self) -> bool:
        """True when the sideband treatment's smallness assumption is violated."""
        return self.validity_ratio > VALIDITY_WARNING_RATIO


def axial_frequency_max(
    species: IonSpecies,
    n_ions: int,
    cfg: TrapConfig,
    constants: PhysicalConstants = CODATA2018,
    spacing_coefficient: float = SPACING_COEFFICIENT,
    spacing_exponent: float = SPACING_EXPONENT,
) -> float:
    """Largest axial angular frequency [rad/s] respecting the spot constraint.

    Stiffening the trap shrinks the chain; the minimum gap, approximated by
    the power law ``length_scale * spacing_coefficient / L**spacing_exponent``,
    must stay at ``safety * wavelength * f_number``.  Since the length scale
    falls as ``nu_x**(-2/3)`` the constraint inverts in closed form,

        nu_x = sqrt(Z^2 e^2 / (4 pi eps0 M))
               * (spacing_coefficient / (L**p * safety * wavelength * F))**1.5
    """
    if n_ions < 2:
        raise ValueError("n_ions must be at least 2")
    mass = species.A * constants.u
    charge_scale = math.sqrt(
        (species.Z * constants.e) ** 2 / (4.0 * math.pi * constants.eps0 * mass)
    )
    spot = cfg.safety * species.wavelength_m * cfg.f_number
    gap_over_scale = spacing_coefficient / n_ions**spacing_exponent
    return charge_scale * (gap_over_scale / spot) ** 1.5


def u_pulse_duration(
    species: IonSpecies,
    n_ions: int,
    cfg: TrapConfig,
    prefactors: Prefactors = Prefactors(),
) -> float:
    """Sideband pulse duration [s] from the closed-form coefficient.

    Evaluates ``timing * sqrt(A y^5 lambda^3 F^3 L^1.68 / Z^2)`` with
    ``timing`` taken from ``prefactors`` (2.9 s m^-3/2 as printed, or the
    first-principles value from :func:`derived_prefactors`).  Agrees with
    ``pi * safety / axial_frequency_max(...)`` up to the rounding of the
    printed constant (about 2.8%).
    """
    if n_ions < 2:
        raise ValueError("n_ions must be at least 2")
    radical = (
        species.A
        * cfg.safety**5
        * species.wavelength_m**3
        * cfg.f_number**3
        * n_ions**1.68
        / species.Z**2
    )
    return prefactors.timing * math.sqrt(radical)


def derive_timing_constant(
    constants: PhysicalConstants = CODATA2018,
    spacing_coefficient: float = SPACING_COEFFICIENT,
) -> float:
    """First-principles value of the pulse-duration coefficient [s m^-3/2].

    Eliminating the axial frequency between ``t_u = pi * safety / nu_x`` and
    the spot-size constraint gives a coefficient

        pi * sqrt(4 pi eps0 u / e^2) / spacing_coefficient**1.5

    equal to pi * sqrt(4 pi eps0 u / (8 e^2)) at the reference coefficient
    2.0; the conventionally quoted value rounds it to 2.9.
    """
    base = math.pi * math.sqrt(
        4.0 * math.pi * constants.eps0 * constants.u / constants.e**2
    )
    return base / spacing_coefficient**1.5


def derived_prefactors(
    constants: PhysicalConstants = CODATA2018,
    spacing_coefficient: float = SPACING_COEFFICIENT,
) -> Prefactors:
    """Prefactor set recomputed from physical constants.

    The budget coefficients follow from the timing constant: the
    lifetime-limited budget is ``6 tau0 / (L t_u)`` and the measured
    coherence-time budget is ``tau_e / t_u``, so their coefficients are
    ``6 / timing`` and ``1 / timing``.
    """
    timing = derive_timing_constant(constants, spacing_coefficient)
    return Prefactors(
        timing=timing,
        intrinsic=6.0 / timing,
        experimental=1.0 / timing,
        label="derived",
    )


def lamb_dicke(
    species: IonSpecies,
    nu_x: float,
    theta: float = 0.0,
    constants: PhysicalConstants = CODATA2018,
) -> float:
    """Lamb-Dicke parameter of the center-of-mass mode.

    ``sqrt(hbar omega^2 cos^2(theta) / (2 M c^2 nu_x))`` with ``omega`` the
    transition angular frequency and ``theta`` the angle between the laser
    and the trap axis.  Equals ``(2 pi / lambda) * sqrt(hbar / (2 M nu_x))``
    at ``theta = 0``.
    """
    if not (math.isfinite(nu_x) and nu_x > 0.0):
        raise ValueError("nu_x must be positive and finite")
    mass = species.A * constants.u
    omega = 2.0 * math.pi * constants.c / species.wavelength_m
    return math.sqrt(
        constants.hbar
        * omega**2
        * math.cos(theta) ** 2
        / (2.0 * mass * constants.c**2 * nu_x)
    )


def validity_ratio(rabi_freq: float, eta: float, nu_x: float, n_ions: int) -> float:
    """Squared smallness parameter of the sideband Hamiltonian.

    ``(rabi_freq * eta / (2 nu_x sqrt(L)))**2``; values approaching 1 mean
    the rotating-wave reduction to the single sideband is unjustified.
    """
    if nu_x <= 0.0 or n_ions < 1:
        raise ValueError("nu_x must be positive and n_ions at least 1")
    return (rabi_freq * eta / (2.0 * nu_x * math.sqrt(n_ions))) ** 2


def pulse_timing(
    species: IonSpecies,
    n_ions: int,
    cfg: TrapConfig,
    constants: PhysicalConstants = CODATA2018,
) -> PulseTiming:
    """Timing bundle at the largest admissible axial frequency.

    The pulse duration is defined by the identity ``t_u = pi * safety /
    nu_x`` and the Rabi frequency is back-derived from the full sideband
    cycle ``t_u = 2 pi sqrt(L) / (rabi_freq * eta)``, which makes the
    validity ratio exactly ``1 / safety**2``: the optimistic ``safety = 1``
    saturates the regime boundary and is flagged via ``out_of_regime``.
    """
    nu_x = axial_frequency_max(species, n_ions, cfg, constants)
    t_u = math.pi * cfg.safety / nu_x
    eta = lamb_dicke(species, nu_x, cfg.theta, constants)
    product = 2.0 * math.pi * math.sqrt(n_ions) / t_u  # rabi_freq * eta
    rabi = product / eta if eta > 0.0 else math.inf
    ratio = (product / (2.0 * nu_x * math.sqrt(n_ions))) ** 2
    return PulseTiming(
        n_ions=n_ions,
        nu_x=nu_x,
        t_u=t_u,
        eta=eta,
        rabi_freq=rabi,
        validity_ratio=ratio,
    )


@dataclass(frozen=True)
class SidebandState:
    """State in the two-level subspace spanned by |g,1> and |e,0>.

    The blue-detuned sideband couples the ground state with one bus phonon
    to the excited state with none; within this subspace the dynamics is an
    exact two-level rotation.  States are normalized: the squared amplitudes
    must sum to 1 within 1e-12.
    """

    amp_g1: complex
    amp_e0: complex

    def __post_init__(self) -> None:
        norm_sq = abs(self.amp_g1) ** 2 + abs(self.amp_e0) ** 2
        if not math.isfinite(norm_sq) or abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state norm^2 = {norm_sq!r}, must be 1 within 1e-12")

    @property
    def populations(self) -> tuple[float, float]:
        return abs(self.amp_g1) ** 2, abs(self.amp_e0) ** 2


def sideband_evolve(
    state: SidebandState,
    coupling: float,
    duration: float,
    phase: float = 0.0,
) -> SidebandState:
    """Evolve a sideband-subspace state for ``duration`` seconds.

    Applies the exact rotation generated by the sideband interaction at
    effective coupling ``g = eta * rabi_freq / (2 sqrt(L))`` [rad/s]:

        amp_g1 -> cos(gt) amp_g1 - i e^{+i phase} sin(gt) amp_e0
        amp_e0 -> cos(gt) amp_e0 - i e^{-i phase} sin(gt) amp_g1

    A full sideband cycle ``gt = pi`` returns the populations and flips the
    sign of the state; this overall -1 on the ``|g,1>`` branch is what the
    conditional-phase construction exploits.  The output is rescaled to the
    input norm (exactly 1 for contract-valid states), so arbitrarily long
    pulse sequences cannot drift off the unit sphere through rounding.
    """
    if not (math.isfinite(coupling) and coupling >= 0.0):
        raise ValueError("coupling must be non-negative and finite")
    if not (math.isfinite(duration) and duration >= 0.0):
        raise ValueError("duration must be non-negative and finite")
    angle = coupling * duration
    c = math.cos(angle)
    s = math.sin(angle)
    rot = -1j * complex(math.cos(phase), math.sin(phase)) * s
    g1 = c * state.amp_g1 + rot * state.amp_e0
    e0 = c * state.amp_e0 - rot.conjugate() * state.amp_g1
    norm_in = abs(state.amp_g1) ** 2 + abs(state.amp_e0) ** 2
    norm_out = abs(g1) ** 2 + abs(e0) ** 2
    if norm_out > 0.0:
        target = 1.0 if abs(norm_in - 1.0) <= 1e-12 else norm_in
        scale = math.sqrt(target / norm_out)
        g1 *= scale
        e0 *= scale
    return SidebandState(amp_g1=g1, amp_e0=e0)
