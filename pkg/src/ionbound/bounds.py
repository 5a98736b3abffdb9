"""Pulse budgets and the largest number a cold-ion register can factor.

Two ceilings limit how many sideband pulses a computation may spend.  The
intrinsic one comes from spontaneous emission: the total gate time must stay
inside the register coherence time 6 tau0 / L, which turns into

    N_U * L**1.84 < intrinsic_prefactor * Z tau0 / (y^{5/2} A^{1/2} F^{3/2} lambda^{3/2})

once the pulse duration is written in closed form.  The experimental one
replaces 6 tau0 / L with a lumped coherence time tau_e (laser phase noise,
heating, pulse-area errors) and carries L**0.84 instead.

Against these budgets stands the cost of factoring an l-bit number:
L = 5 l + 2 ions and N_U = 544 l^3 + 78 l^2 + 10 l sideband pulses.  Walking
l upward until a budget is violated gives the largest feasible bit count,
the intersection of the cost curve with the budget curves.  Table builders
for both classic summary plots (budget curves against register size, and
feasible bits against coherence time) live here as well; serialization is
the cli module's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import PRINTED, Prefactors
from .pulse import u_pulse_duration
from .species import IonSpecies, TrapConfig

__all__ = [
    "MODE_INTRINSIC",
    "MODE_EXPERIMENTAL",
    "MODE_COMBINED",
    "MODES",
    "TAU_E_HEATING",
    "TAU_E_LASER_PHASE",
    "ResourcePoint",
    "FeasibilityResult",
    "Table",
    "shor_resources",
    "shor_ions_interleaved",
    "intrinsic_pulse_budget",
    "experimental_pulse_budget",
    "max_factorable_bits",
    "total_time",
    "fig1_curves",
    "fig2_curves",
]

MODE_INTRINSIC = "intrinsic"
MODE_EXPERIMENTAL = "experimental"
MODE_COMBINED = "combined"
MODES = (MODE_INTRINSIC, MODE_EXPERIMENTAL, MODE_COMBINED)

# named coherence-time presets [s]: ion heating at a few phonons per second,
# and free-running laser phase drift
TAU_E_HEATING = 0.17
TAU_E_LASER_PHASE = 1e-3

# register-size exponents of the two budgets; the intrinsic one carries an
# extra factor L from the 6 tau0 / L coherence time
INTRINSIC_ION_EXPONENT = 1.84
EXPERIMENTAL_ION_EXPONENT = 0.84


@dataclass(frozen=True)
class ResourcePoint:
    """Cost of factoring a ``bits``-wide number: ions and sideband pulses.

    One point on the factorization cost curve.  ``ions = 5*bits + 2`` and
    ``pulses = 544*bits**3 + 78*bits**2 + 10*bits``, both strictly
    increasing in ``bits``; construct through :func:`shor_resources`.
    """

    bits: int
    ions: int
    pulses: int

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or isinstance(self.bits, bool):
            raise TypeError("bits must be an integer")
        if self.bits < 1:
            raise ValueError("bits must be at least 1")
        if self.ions != 5 * self.bits + 2:
            raise ValueError("ions inconsistent with bits")
        if self.pulses != (544 * self.bits + 78) * self.bits**2 + 10 * self.bits:
            raise ValueError("pulses inconsistent with bits")


def shor_resources(bits: int) -> ResourcePoint:
    """Ions and sideband pulses needed to factor a ``bits``-wide number."""
    if not isinstance(bits, int) or isinstance(bits, bool):
        raise TypeError("bits must be an integer")
    if bits < 1:
        raise ValueError("bits must be at least 1")
    return ResourcePoint(
        bits=bits,
        ions=5 * bits + 2,
        pulses=(544 * bits + 78) * bits**2 + 10 * bits,
    )


def shor_ions_interleaved(bits: int) -> int:
    """Ion count ``3*bits + 4`` when work registers are interleaved.

    Trades pulses for ions; no pulse count is defined for this mode, so it
    never enters the feasibility walk.
    """
    if not isinstance(bits, int) or isinstance(bits, bool):
        raise TypeError("bits must be an integer")
    if bits < 1:
        raise ValueError("bits must be at least 1")
    return 3 * bits + 4


def _check_ions(n_ions: int) -> None:
    if not isinstance(n_ions, int) or isinstance(n_ions, bool):
        raise TypeError("n_ions must be an integer")
    if n_ions < 2:
        raise ValueError("n_ions must be at least 2")


def _species_scale(species: IonSpecies, cfg: TrapConfig) -> float:
    # shared budget factor Z / (y^2.5 sqrt(A) F^1.5 lambda^1.5) [m^-3/2]
    return species.Z / (
        cfg.safety**2.5
        * math.sqrt(species.A)
        * cfg.f_number**1.5
        * species.wavelength_m**1.5
    )


def intrinsic_pulse_budget(
    species: IonSpecies,
    n_ions: int,
    cfg: TrapConfig,
    prefactors: Prefactors = PRINTED,
) -> float:
    """Largest sideband-pulse count the upper-level lifetime allows.

    Evaluates ``prefactor * Z * tau0 / (y^2.5 sqrt(A) F^1.5 lambda^1.5
    L^1.84)`` with the prefactor carrying the unit s^-1 m^3/2.  Agrees with
    the composition ``6 tau0 / (L * t_U)`` up to the rounding slack of the
    printed constants.
    """
    _check_ions(n_ions)
    return (
        prefactors.intrinsic
        * species.tau0_s
        * _species_scale(species, cfg)
        / float(n_ions) ** INTRINSIC_ION_EXPONENT
    )


def experimental_pulse_budget(
    species: IonSpecies,
    n_ions: int,
    cfg: TrapConfig,
    tau_e: float,
    prefactors: Prefactors = PRINTED,
) -> float:
    """Largest sideband-pulse count a lumped coherence time allows.

    Same species scaling as the intrinsic budget but linear in the supplied
    ``tau_e`` and with register-size exponent 0.84, from ``N_U t_U <
    tau_e``.  ``tau_e = 0`` is accepted and returns a zero budget.
    """
    _check_ions(n_ions)
    if not (math.isfinite(tau_e) and tau_e >= 0.0):
        raise ValueError("tau_e must be non-negative and finite")
    return (
        prefactors.experimental
        * tau_e
        * _species_scale(species, cfg)
        / float(n_ions) ** EXPERIMENTAL_ION_EXPONENT
    )


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the feasibility walk for one species and bound mode.

    ``max_bits`` is the largest bit count whose resource point satisfies
    every selected budget strictly; ``max_bits + 1`` violates at least one,
    and ``limiting`` names the budget that binds there.  An infeasible walk
    (already l = 1 violates) reports ``max_bits = 0``, ``feasible = False``
    and no resource fields.
    """

    species: str
    mode: str
    tau_e_s: float | None
    max_bits: int
    resources: ResourcePoint | None
    t_u_s: float | None
    total_time_s: float | None
    limiting: str
    feasible: bool


def _budget_ratios(
    species: IonSpecies,
    point: ResourcePoint,
    cfg: TrapConfig,
    mode: str,
    tau_e: float | None,
    prefactors: Prefactors,
) -> dict[str, float]:
    # ratio pulses / budget per active bound; feasible iff every ratio < 1
    ratios: dict[str, float] = {}
    if mode in (MODE_INTRINSIC, MODE_COMBINED):
        budget = intrinsic_pulse_budget(species, point.ions, cfg, prefactors)
        ratios[MODE_INTRINSIC] = math.inf if budget == 0.0 else point.pulses / budget
    if mode in (MODE_EXPERIMENTAL, MODE_COMBINED):
        budget = experimental_pulse_budget(species, point.ions, cfg, tau_e, prefactors)
        ratios[MODE_EXPERIMENTAL] = math.inf if budget == 0.0 else point.pulses / budget
    return ratios


def max_factorable_bits(
    species: IonSpecies,
    cfg: TrapConfig,
    mode: str = MODE_INTRINSIC,
    tau_e: float | None = None,
    prefactors: Prefactors = PRINTED,
) -> FeasibilityResult:
    """Walk the factorization cost curve up to the last affordable bit count.

    Pulse cost grows as l^3 and both budgets shrink with register size, so
    feasibility is monotone in l and the walk stops at the first violation.
    ``mode`` selects which budgets apply: ``"intrinsic"`` (lifetime only),
    ``"experimental"`` (supplied ``tau_e`` only) or ``"combined"`` (both
    must hold, equivalent to the elementwise minimum of the two walks).

    Parameters
    ----------
    species : IonSpecies
        Ion species carrying Z, A, wavelength and lifetime.
    cfg : TrapConfig
        Optics f-number, safety factor, beam angle.
    mode : str
        One of ``MODES``.
    tau_e : float, optional
        Lumped coherence time [s]; required by the experimental and
        combined modes, rejected by the intrinsic mode.
    prefactors : Prefactors
        Budget constants, printed by default.

    Returns
    -------
    FeasibilityResult
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == MODE_INTRINSIC:
        if tau_e is not None:
            raise ValueError("tau_e has no effect in intrinsic mode")
    else:
        if tau_e is None:
            raise ValueError(f"{mode} mode requires tau_e")
        if not (math.isfinite(tau_e) and tau_e > 0.0):
            raise ValueError("tau_e must be positive and finite")

    def ratios_at(bits: int) -> dict[str, float]:
        return _budget_ratios(species, shor_resources(bits), cfg, mode, tau_e, prefactors)

    def feasible_at(ratios: dict[str, float]) -> bool:
        return all(r < 1.0 for r in ratios.values())

    bits = 1
    while feasible_at(ratios_at(bits)):
        bits += 1
    max_bits = bits - 1

    # self-check of the walk invariant before reporting
    blocking = ratios_at(max_bits + 1)
    assert not feasible_at(blocking), "walk stopped while still feasible"
    assert max_bits == 0 or feasible_at(ratios_at(max_bits)), "walk overshot"
    limiting = max(blocking, key=blocking.__getitem__)

    if max_bits == 0:
        return FeasibilityResult(
            species=species.name,
            mode=mode,
            tau_e_s=tau_e,
            max_bits=0,
            resources=None,
            t_u_s=None,
            total_time_s=None,
            limiting=limiting,
            feasible=False,
        )
    point = shor_resources(max_bits)
    t_u = u_pulse_duration(species, point.ions, cfg, prefactors)
    return FeasibilityResult(
        species=species.name,
        mode=mode,
        tau_e_s=tau_e,
        max_bits=max_bits,
        resources=point,
        t_u_s=t_u,
        total_time_s=point.pulses * t_u,
        limiting=limiting,
        feasible=True,
    )


def total_time(
    species: IonSpecies,
    bits: int,
    cfg: TrapConfig,
    prefactors: Prefactors = PRINTED,
) -> float:
    """Wall-clock seconds to factor a ``bits``-wide number: N_U times t_U.

    Carrier pulses are treated as instantaneous, so sideband pulses carry
    the whole cost.
    """
    point = shor_resources(bits)
    return point.pulses * u_pulse_duration(species, point.ions, cfg, prefactors)


@dataclass(frozen=True)
class Table:
    """Column-labeled rows ready for CSV emission; values stay native."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.rows)


def fig1_curves(
    species_list: list[IonSpecies] | tuple[IonSpecies, ...],
    cfg: TrapConfig,
    n_ions_range: list[int] | tuple[int, ...],
    bits_max: int = 15,
    prefactors: Prefactors = PRINTED,
) -> Table:
    """Budget curves per species plus the factorization cost locus.

    Rows are ``(series, bits, n_ions, n_pulses)``.  The cost locus comes
    first under series name ``"factorization"`` with integer pulses for
    l = 1 .. ``bits_max``; then one budget series per species over
    ``n_ions_range``, ``bits`` left empty.  An empty ``n_ions_range``
    yields a header-only table.
    """
    if not species_list:
        raise ValueError("species_list must not be empty")
    if not isinstance(bits_max, int) or isinstance(bits_max, bool) or bits_max < 0:
        raise ValueError("bits_max must be a non-negative integer")
    columns = ("series", "bits", "n_ions", "n_pulses")
    sizes = [int(n) for n in n_ions_range]
    if not sizes:
        return Table(columns=columns, rows=())
    for n in sizes:
        _check_ions(n)
    rows: list[tuple] = []
    for bits in range(1, bits_max + 1):
        point = shor_resources(bits)
        rows.append(("factorization", point.bits, point.ions, point.pulses))
    for species in species_list:
        for n in sizes:
            budget = intrinsic_pulse_budget(species, n, cfg, prefactors)
            rows.append((species.name, None, n, budget))
    return Table(columns=columns, rows=tuple(rows))


def fig2_curves(
    species_list: list[IonSpecies] | tuple[IonSpecies, ...],
    cfg: TrapConfig,
    tau_e_grid: list[float] | tuple[float, ...],
    prefactors: Prefactors = PRINTED,
) -> Table:
    """Largest feasible bit count against coherence time, one row per point.

    Rows are ``(species, tau_e_s, l_max)`` with the combined mode applied,
    so each curve rises with ``tau_e`` and saturates at the species'
    intrinsic limit.  The grid must be positive and strictly increasing.
    """
    if not species_list:
        raise ValueError("species_list must not be empty")
    grid = [float(t) for t in tau_e_grid]
    for t in grid:
        if not (math.isfinite(t) and t > 0.0):
            raise ValueError("tau_e grid must be positive and finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau_e grid must be strictly increasing")
    rows: list[tuple] = []
    for species in species_list:
        for tau_e in grid:
            result = max_factorable_bits(
                species, cfg, mode=MODE_COMBINED, tau_e=tau_e, prefactors=prefactors
            )
            rows.append((species.name, tau_e, result.max_bits))
    return Table(columns=("species", "tau_e_s", "l_max"), rows=tuple(rows))
