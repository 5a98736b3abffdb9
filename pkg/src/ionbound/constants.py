"""Physical constants and the prefactor sets used by the resource bounds.

All quantities are SI.  The default constant values are CODATA 2018; they
are bundled in a dataclass rather than pulled from ``scipy.constants`` so
that results are pinned and reproducible regardless of the installed scipy
version.
"""

from __future__ import annotations

from dataclasses import dataclass

DAY_S = 86400.0  # one day [s], exact


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants entering the trap and pulse formulas (SI)."""

    e: float = 1.602176634e-19       # elementary charge [C], exact
    eps0: float = 8.8541878128e-12   # vacuum permittivity [F/m]
    u: float = 1.66053906660e-27     # atomic mass unit [kg]
    hbar: float = 1.054571817e-34    # reduced Planck constant [J s]
    c: float = 2.99792458e8          # speed of light [m/s], exact

    def __post_init__(self) -> None:
        for name in ("e", "eps0", "u", "hbar", "c"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"constant {name!r} must be positive")


CODATA2018 = PhysicalConstants()


@dataclass(frozen=True)
class Prefactors:
    """Numeric prefactors of the pulse-timing and pulse-budget formulas.

    The three constants are tied together: ``intrinsic = 6 / timing`` and
    ``experimental = 1 / timing``, with ``timing`` the coefficient of the
    sideband pulse duration written as a function of mass number, safety
    factor, wavelength, focal ratio and chain length.

    Attributes
    ----------
    timing : float
        Pulse-duration coefficient [s m^-3/2].
    intrinsic : float
        Lifetime-limited budget coefficient, dimensionless up to the same
        unit bookkeeping as ``timing``.
    experimental : float
        Coefficient of the budget limited by an externally measured
        coherence time.
    label : str
        Either ``"printed"`` (two-significant-figure reference values) or
        ``"derived"`` (recomputed from the physical constants).
    """

    timing: float = 2.9
    intrinsic: float = 2.0
    experimental: float = 0.34
    label: str = "printed"

    def __post_init__(self) -> None:
        for name in ("timing", "intrinsic", "experimental"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"prefactor {name!r} must be positive")


#: Two-significant-figure constants as conventionally quoted.  These are the
#: package default so that reported numbers match the reference analysis;
#: pass the output of :func:`ionbound.pulse.derived_prefactors` instead to
#: use values recomputed from CODATA constants.
PRINTED = Prefactors()
