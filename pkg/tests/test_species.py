import math

import pytest

from ionbound.constants import DAY_S
from ionbound.species import (
    IonSpecies,
    SpeciesError,
    SpeciesFileError,
    TrapConfig,
    UnknownSpeciesError,
    builtin_registry,
    load_registry,
    parse_species_text,
    registry_to_text,
)


def test_builtin_species_values(registry):
    hg = registry.lookup("Hg II")
    assert (hg.Z, hg.A, hg.wavelength_m, hg.tau0_s) == (1, 198.0, 281.5e-9, 0.1)
    ca = registry.lookup("Ca II")
    assert (ca.Z, ca.A, ca.wavelength_m, ca.tau0_s) == (1, 40.0, 729e-9, 1.14)
    ba = registry.lookup("Ba II")
    assert (ba.Z, ba.A, ba.wavelength_m, ba.tau0_s) == (1, 137.0, 1.76e-6, 47.0)
    yb = registry.lookup("Yb II")
    assert (yb.Z, yb.A, yb.wavelength_m) == (1, 171.0, 467e-9)
    # 1533 days, kept in seconds
    assert yb.tau0_s == 1533 * DAY_S == 132451200.0


def test_registry_protocol(registry):
    assert "Ca II" in registry
    assert "Fr II" not in registry
    assert len(registry) == 4
    assert [sp.name for sp in registry] == ["Hg II", "Ca II", "Ba II", "Yb II"]
    assert registry.names() == ("Hg II", "Ca II", "Ba II", "Yb II")


def test_unknown_species_lists_available(registry):
    with pytest.raises(UnknownSpeciesError, match="Ba II"):
        registry.lookup("Na II")


def test_with_species_overrides_by_name(registry):
    patched = registry.with_species(
        [IonSpecies("Ca II", 1, 40.0, 729e-9, 2.28), IonSpecies("Sr II", 1, 88.0, 674e-9, 0.4)]
    )
    assert patched.lookup("Ca II").tau0_s == 2.28
    assert patched.lookup("Sr II").A == 88.0
    assert registry.lookup("Ca II").tau0_s == 1.14  # original untouched
    assert len(patched) == 5


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(Z=0),
        dict(Z=1.0),
        dict(Z=True),
        dict(A=-1.0),
        dict(A=math.nan),
        dict(wavelength_m=0.0),
        dict(tau0_s=math.inf),
        dict(name=""),
    ],
)
def test_species_validation(kwargs):
    base = dict(name="X II", Z=1, A=10.0, wavelength_m=5e-7, tau0_s=1.0)
    base.update(kwargs)
    with pytest.raises((SpeciesError, TypeError)):
        IonSpecies(**base)


def test_trap_config_validation():
    cfg = TrapConfig(f_number=2.0, safety=3.0, theta=0.1)
    assert (cfg.f_number, cfg.safety, cfg.theta) == (2.0, 3.0, 0.1)
    with pytest.raises(SpeciesError):
        TrapConfig(f_number=0.0)
    with pytest.raises(SpeciesError):
        TrapConfig(safety=-1.0)
    with pytest.raises(SpeciesError):
        TrapConfig(theta=math.nan)


def test_trap_config_warnings():
    assert TrapConfig(f_number=2.0, safety=3.0).warnings() == []
    notes = TrapConfig(f_number=1.0, safety=1.0).warnings()
    assert len(notes) == 2


SAMPLE = """\
# laboratory candidates
name = Sr II
Z = 1
A = 88.0
lambda_nm = 674
tau0_s = 0.4
note = 4d {}^2D_{5/2} level

name = Mg II
Z = 1
A = 24.0
lambda_nm = 280.3
tau0_s = 0.002
"""


def test_parse_species_text():
    species = parse_species_text(SAMPLE)
    assert [sp.name for sp in species] == ["Sr II", "Mg II"]
    sr = species[0]
    assert sr.wavelength_m == 674e-9
    assert sr.note == "4d {}^2D_{5/2} level"
    assert species[1].note == ""


def test_load_registry_merges_over_base(registry):
    merged = load_registry(SAMPLE, base=registry)
    assert len(merged) == 6
    assert merged.lookup("Sr II").A == 88.0
    assert merged.lookup("Ca II").A == 40.0


def test_registry_text_round_trip(registry):
    merged = load_registry(SAMPLE, base=registry)
    text = registry_to_text(merged)
    again = load_registry(text)
    assert again.names() == merged.names()
    for sp in merged:
        assert again.lookup(sp.name) == sp


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("name = A\nZ = 1\nA = 2.0\nlambda_nm = 500\n", "tau0_s"),
        ("name = A\nZ = 1\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\ncolor = red\n", "color"),
        ("name = A\nname = B\nZ = 1\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\n", "repeated"),
        ("name = A\nZ =\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\n", "empty"),
        ("name = A\nZ = 1\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\n\nname = A\nZ = 1\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\n", "already defined"),
        ("just some text\n", "="),
    ],
)
def test_species_file_errors(text, fragment):
    with pytest.raises(SpeciesFileError, match=fragment):
        parse_species_text(text)


def test_species_file_error_carries_line_number():
    bad = "name = A\nZ = one\nA = 2.0\nlambda_nm = 500\ntau0_s = 1\n"
    with pytest.raises(SpeciesFileError) as excinfo:
        parse_species_text(bad)
    assert excinfo.value.line == 2


def test_wavelength_single_rounding():
    # nm-to-m conversion must round once: 280.3 nm parsed directly as
    # 280.3e-9, not via float(280.3) * 1e-9 which lands one ulp away
    species = parse_species_text("name = A\nZ = 1\nA = 2.0\nlambda_nm = 280.3\ntau0_s = 1\n")
    assert species[0].wavelength_m == 280.3e-9
    assert species[0].wavelength_m != 280.3 * 1e-9
