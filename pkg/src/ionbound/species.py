"""Ion species data, trap/laser configuration, and the species registry.

The registry ships with the four reference ions used throughout the
estimates (Hg II, Ca II, Ba II, Yb II) and can be extended or overridden
from a plain-text species file, see :func:`parse_species_text`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Iterator

from .constants import DAY_S

__all__ = [
    "IonSpecies",
    "TrapConfig",
    "SpeciesRegistry",
    "SpeciesError",
    "SpeciesFileError",
    "UnknownSpeciesError",
    "builtin_registry",
    "parse_species_text",
    "load_registry",
    "registry_to_text",
]


class SpeciesError(ValueError):
    """Invalid species data."""


class SpeciesFileError(SpeciesError):
    """Malformed species file; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownSpeciesError(KeyError):
    """Species name not present in the registry."""

    def __init__(self, name: str, available: Iterable[str]) -> None:
        names = ", ".join(sorted(available))
        super().__init__(f"unknown species {name!r}; available: {names}")
        self.name = name


@dataclass(frozen=True)
class IonSpecies:
    """One ion species with the quantities the feasibility formulas need.

    Attributes
    ----------
    name : str
        Display name, e.g. ``"Ca II"``.  Lookup is case sensitive.
    Z : int
        Degree of ionization (1 for singly charged ions).
    A : float
        Mass number of the isotope.
    wavelength_m : float
        Wavelength of the qubit transition [m].
    tau0_s : float
        Natural lifetime of the upper qubit level [s].
    note : str
        Free-form annotation, carried through serialization.
    """

    name: str
    Z: int
    A: float
    wavelength_m: float
    tau0_s: float
    note: str = ""

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise SpeciesError("species name must be non-empty")
        if not isinstance(self.Z, int) or isinstance(self.Z, bool):
            raise SpeciesError(f"{self.name}: Z must be an integer")
        if self.Z < 1:
            raise SpeciesError(f"{self.name}: Z must be >= 1")
        for attr in ("A", "wavelength_m", "tau0_s"):
            value = getattr(self, attr)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise SpeciesError(f"{self.name}: {attr} must be a positive finite number")

    @property
    def mass_kg_per_u(self) -> float:
        """Ion mass in atomic mass units (equal to ``A`` by convention)."""
        return float(self.A)


@dataclass(frozen=True)
class TrapConfig:
    """Laser and focusing assumptions shared by the resource estimates.

    Attributes
    ----------
    f_number : float
        Focal ratio of the addressing optics.  1 is the diffraction-limited
        best case and is flagged as optimistic by :meth:`warnings`.
    safety : float
        Spot-size safety factor: the minimum ion spacing is required to be
        ``safety * wavelength * f_number``.  1 leaves no margin against
        illuminating neighbouring ions.
    theta : float
        Angle between the laser propagation direction and the trap axis
        [rad].  0 maximizes the recoil coupling to the axial mode.
    """

    f_number: float = 1.0
    safety: float = 1.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.f_number) and self.f_number > 0):
            raise SpeciesError("f_number must be positive and finite")
        if not (math.isfinite(self.safety) and self.safety > 0):
            raise SpeciesError("safety must be positive and finite")
        if not math.isfinite(self.theta):
            raise SpeciesError("theta must be finite")

    def warnings(self) -> list[str]:
        """Human-readable flags for optimistic settings."""
        notes = []
        if self.f_number <= 1.0:
            notes.append(
                "f_number <= 1 assumes diffraction-limited addressing optics"
            )
        if self.safety <= 1.0:
            notes.append(
                "safety factor <= 1 leaves no margin against addressing"
                " errors on neighbouring ions"
            )
        return notes


# Reference species.  Lifetimes are metastable-level values; the Yb II
# lifetime of 1533 days refers to the extremely long-lived F-state.
_BUILTINS = (
    IonSpecies("Hg II", 1, 198.0, 281.5e-9, 0.1,
               note="5d^9 6s^2 {}^2D_{5/2} level"),
    IonSpecies("Ca II", 1, 40.0, 729e-9, 1.14,
               note="3d {}^2D_{5/2} level"),
    IonSpecies("Ba II", 1, 137.0, 1.76e-6, 47.0,
               note="5d {}^2D_{5/2} level"),
    IonSpecies("Yb II", 1, 171.0, 467e-9, 1533 * DAY_S,
               note="4f^{13} 6s^2 {}^2F_{7/2} level"),
)


@dataclass(frozen=True)
class SpeciesRegistry:
    """Immutable name -> :class:`IonSpecies` lookup table."""

    _table: dict[str, IonSpecies] = field(default_factory=dict)

    def lookup(self, name: str) -> IonSpecies:
        try:
            return self._table[name]
        except KeyError:
            raise UnknownSpeciesError(name, self._table) from None

    def names(self) -> tuple[str, ...]:
        return tuple(self._table)

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def __iter__(self) -> Iterator[IonSpecies]:
        return iter(self._table.values())

    def __len__(self) -> int:
        return len(self._table)

    def with_species(self, species: Iterable[IonSpecies]) -> "SpeciesRegistry":
        """New registry with ``species`` added; same-name entries override."""
        table = dict(self._table)
        for sp in species:
            table[sp.name] = sp
        return SpeciesRegistry(table)


def builtin_registry() -> SpeciesRegistry:
    """Registry holding the four reference ion species."""
    return SpeciesRegistry({sp.name: sp for sp in _BUILTINS})


# --- species file format ---------------------------------------------------
#
# Line-oriented key = value records separated by blank lines:
#
#     # comment lines and trailing blank lines are ignored
#     name = Sr II
#     Z = 1
#     A = 88
#     lambda_nm = 674
#     tau0_s = 0.39
#     note = 4d 2D_5/2 level        (optional)
#
# lambda_nm is in nanometers in the file and converted to meters on load.

_REQUIRED_KEYS = ("name", "Z", "A", "lambda_nm", "tau0_s")
_ALL_KEYS = _REQUIRED_KEYS + ("note",)


def _record_to_species(record: dict[str, str], lines: dict[str, int]) -> IonSpecies:
    for key in _REQUIRED_KEYS:
        if key not in record:
            raise SpeciesFileError(
                max(lines.values()), f"record is missing required key {key!r}"
            )
    name = record["name"]
    try:
        z = int(record["Z"])
    except ValueError:
        raise SpeciesFileError(lines["Z"], f"Z must be an integer, got {record['Z']!r}") from None
    raw = {}
    for key in ("A", "tau0_s"):
        try:
            raw[key] = float(record[key])
        except ValueError:
            raise SpeciesFileError(
                lines[key], f"{key} must be a number, got {record[key]!r}"
            ) from None
    # Shift the decimal exponent before converting so nm -> m costs a single
    # correctly-rounded conversion; float(value) * 1e-9 would round twice and
    # break exact serialization round-trips.
    try:
        wavelength_m = float(Decimal(record["lambda_nm"]).scaleb(-9))
    except InvalidOperation:
        raise SpeciesFileError(
            lines["lambda_nm"], f"lambda_nm must be a number, got {record['lambda_nm']!r}"
        ) from None
    try:
        return IonSpecies(
            name=name,
            Z=z,
            A=raw["A"],
            wavelength_m=wavelength_m,
            tau0_s=raw["tau0_s"],
            note=record.get("note", ""),
        )
    except SpeciesError as exc:
        raise SpeciesFileError(lines["name"], str(exc)) from None


def parse_species_text(text: str) -> list[IonSpecies]:
    """Parse a species document into a list of :class:`IonSpecies`.

    Raises
    ------
    SpeciesFileError
        On syntax errors, unknown or repeated keys, missing required keys,
        invalid values, or two records sharing a name.  The error message
        names the offending line.
    """
    species: list[IonSpecies] = []
    seen: dict[str, int] = {}
    record: dict[str, str] = {}
    record_lines: dict[str, int] = {}

    def flush() -> None:
        if not record:
            return
        sp = _record_to_species(record, record_lines)
        if sp.name in seen:
            raise SpeciesFileError(
                record_lines["name"],
                f"species {sp.name!r} already defined on line {seen[sp.name]}",
            )
        seen[sp.name] = record_lines["name"]
        species.append(sp)
        record.clear()
        record_lines.clear()

    lineno = 0
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        if "=" not in line:
            raise SpeciesFileError(lineno, f"expected 'key = value', got {rawline!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise SpeciesFileError(lineno, f"unknown key {key!r}")
        if key in record:
            raise SpeciesFileError(lineno, f"key {key!r} repeated within one record")
        if not value and key != "note":
            raise SpeciesFileError(lineno, f"key {key!r} has an empty value")
        record[key] = value
        record_lines[key] = lineno
    flush()
    return species


def load_registry(text: str, base: SpeciesRegistry | None = None) -> SpeciesRegistry:
    """Registry built from ``base`` (default: built-ins) plus a species document.

    Entries in the document override same-named base entries.
    """
    if base is None:
        base = builtin_registry()
    return base.with_species(parse_species_text(text))


def _nm_string(wavelength_m: float) -> str:
    # Exact decimal shift of the shortest round-trip representation, so the
    # parser's single rounded conversion lands back on wavelength_m exactly.
    # Positional formatting keeps values like 1760 out of E-notation.
    return format(Decimal(repr(float(wavelength_m))).scaleb(9).normalize(), "f")


def registry_to_text(registry: SpeciesRegistry) -> str:
    """Serialize a registry to the species file format.

    ``load_registry(registry_to_text(r), base=SpeciesRegistry())`` returns a
    registry equal to ``r``; numeric fields survive exactly because floats
    are written with shortest round-trip precision and the nm <-> m shift is
    done in decimal arithmetic.
    """
    blocks = []
    for sp in registry:
        lines = [
            f"name = {sp.name}",
            f"Z = {sp.Z}",
            f"A = {repr(float(sp.A))}",
            f"lambda_nm = {_nm_string(sp.wavelength_m)}",
            f"tau0_s = {repr(float(sp.tau0_s))}",
        ]
        if sp.note:
            lines.append(f"note = {sp.note}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
