import math

import pytest

from quadspec.repfinder import (
    DiscrepancyRecord,
    compare_printed,
    duality_check,
    find_representations,
    proportionality,
    reconcile_generic,
    spectrum_table,
)
from quadspec.systems import factored_phi

HYD = {"m": 0.0, "s": 0.0, "c1": 0.0, "c2": 0.0}


def accepted(system, charges, p):
    return [r for r in find_representations(system, charges, p) if r.accepted]


def test_hydrogen_ground_state():
    reps = accepted("micz3d", HYD, 0)
    assert len(reps) == 1 and reps[0].E == pytest.approx(-0.5, abs=1e-12)


def test_hydrogen_m1_p1_and_printed_mismatch():
    (rep,) = accepted("micz3d", {**HYD, "m": 1.0}, 1)
    assert rep.E == pytest.approx(-1 / 18, abs=1e-12)
    assert not rep.matches_printed_E
    tags = {d.tag for d in compare_printed(rep)}
    assert "micz3d.printed_energy" in tags


def test_oscillator_level_agrees_with_printed():
    (rep,) = accepted("osc4d", {**HYD, "omega": 1.0}, 2)
    assert rep.E == pytest.approx(6.0, abs=1e-10)
    assert rep.matches_printed_E and rep.matches_printed_u
    assert compare_printed(rep) == []


def test_sphere_hydrogen_no_discrepancies():
    for p in range(3):
        (rep,) = accepted("miczs3", {"m": 0, "mu": 0, "alpha": 1, "R": 2}, p)
        assert compare_printed(rep) == []


def test_boundary_and_positivity_flags():
    reps = find_representations("micz3d", {**HYD, "m": 1.0}, 2)
    for r in reps:
        big = max(abs(v) for v in r.phi_values)
        assert abs(r.phi_values[0]) <= 1e-10 * max(big, r.phi_scale)
        assert r.positivity_ok == all(v > 1e-10 * r.phi_scale for v in r.phi_values[1:-1])
    # the spurious mirror-type solutions exist but are not accepted
    assert any(not r.accepted for r in reps)


def test_spectrum_tables():
    rows = spectrum_table("micz3d", HYD, 3)
    assert [r.E for r in rows] == pytest.approx([-1 / 2, -1 / 8, -1 / 18, -1 / 32], abs=1e-12)
    rows = spectrum_table("osc4d", {**HYD, "omega": 1.0}, 2)
    assert [r.E for r in rows] == pytest.approx([2, 4, 6], abs=1e-10)
    rows = spectrum_table("miczs3", {"m": 0, "mu": 0, "alpha": 1, "R": 1e6}, 2)
    assert [r.E for r in rows] == pytest.approx([-0.5, -0.125, -1 / 18], abs=1e-6)
    with pytest.raises(ValueError):
        spectrum_table("micz3d", HYD, -1)


def test_bad_inputs():
    with pytest.raises(ValueError):
        find_representations("micz3d", HYD, -1)
    with pytest.raises(ValueError):
        find_representations("micz3d", HYD, 0, scale=0)


def test_duality_examples():
    assert duality_check(1, 0.5, 1.5) == 0
    assert duality_check(0, 0, 0) == 0
    with pytest.raises(ValueError):
        duality_check(0, -1, 0)


def test_proportionality_paths():
    f = factored_phi("micz3d", 2, {"m": 1.0, "s": 0.0, "c1": 0, "c2": 0}).poly()
    xs = [0.1 * k + 0.05 for k in range(30)]
    assert proportionality(lambda x: 2 * f(x), f, xs) == pytest.approx(2)
    rec = proportionality(lambda x: 0.0, f, xs)
    assert isinstance(rec, DiscrepancyRecord) and rec.note == "ratio undefined"
    rec = proportionality(lambda x: -f(x), f, xs)
    assert isinstance(rec, DiscrepancyRecord)


def test_reconcile_outcomes_are_reported():
    (rep,) = accepted("micz3d", HYD, 1)
    for reading in "AB":
        out = reconcile_generic("micz3d", rep, reading)
        assert isinstance(out, (float, DiscrepancyRecord))
    c = reconcile_generic("micz3d", rep, "B")
    assert isinstance(c, float) and c > 0 and math.isfinite(c)
