import math

import pytest

from ionbound.constants import CODATA2018, DAY_S, PRINTED, PhysicalConstants, Prefactors


def test_codata_values_pinned():
    assert CODATA2018.e == 1.602176634e-19
    assert CODATA2018.eps0 == 8.8541878128e-12
    assert CODATA2018.u == 1.66053906660e-27
    assert CODATA2018.hbar == 1.054571817e-34
    assert CODATA2018.c == 2.99792458e8


def test_day_in_seconds():
    assert DAY_S == 86400.0


def test_printed_prefactors():
    assert PRINTED.timing == 2.9
    assert PRINTED.intrinsic == 2.0
    assert PRINTED.experimental == 0.34
    assert PRINTED.label == "printed"


def test_printed_ratios_are_consistent_roundings():
    # 2.0 ~ 6/2.9 and 0.34 ~ 1/2.9, the rounding slack the budgets inherit
    assert math.isclose(PRINTED.intrinsic, 6.0 / PRINTED.timing, rel_tol=0.04)
    assert math.isclose(PRINTED.experimental, 1.0 / PRINTED.timing, rel_tol=0.02)


@pytest.mark.parametrize("field", ["e", "eps0", "u", "hbar", "c"])
def test_physical_constants_reject_nonpositive(field):
    values = {
        "e": 1.6e-19, "eps0": 8.9e-12, "u": 1.66e-27,
        "hbar": 1.05e-34, "c": 3e8,
    }
    values[field] = 0.0
    with pytest.raises(ValueError):
        PhysicalConstants(**values)


def test_prefactors_reject_nonpositive():
    with pytest.raises(ValueError):
        Prefactors(timing=0.0, intrinsic=2.0, experimental=0.34, label="x")
