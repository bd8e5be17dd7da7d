"""Finite-dimensional unitary representations from the structure-function constraints.

A (p+1)-dimensional module needs Phi(0) = Phi(p+1) = 0 and Phi(k) > 0 for
k = 1..p.  Since Phi is a product over the root family, the boundary
conditions say that two roots rho_i(E), rho_j(E) sit exactly p+1 apart; the
shift is then u = rho_i(E).  Each ordered pair of root descriptors is solved
for E by a grid scan followed by bisection.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import build_phi_generic, leading_coefficient
from scipy.optimize import brentq
from .systems import (
    E_BRACKET,
    casimir_closed,
    check_charges,
    factored_phi,
    phi_from_family,
    principal_quantum_number,
    printed_spectrum,
    root_family,
    structure_constants,
)

DEFAULT_TOL = 1e-10
GRID_POINTS = 4000
MERGE_TOL = 1e-9
MATCH_TOL = 1e-9


@dataclass(frozen=True)
class DiscrepancyRecord:
    tag: str
    printed: float
    derived: float
    deviation: float
    note: str = ""


@dataclass(frozen=True)
class Representation:
    system: str
    charges: Mapping[str, float]
    p: int
    u: float
    E: float
    phi_values: tuple
    pairing: tuple
    u_mirror: float
    positivity_ok: bool
    continuum_ok: bool
    lowest_weight: bool
    boundary_ok: bool
    matches_printed_E: bool = False
    matches_printed_u: bool = False
    descriptors: tuple = ()
    phi_scale: float = 0.0

    @property
    def accepted(self) -> bool:
        return self.boundary_ok and self.positivity_ok and self.lowest_weight

    def with_charges_E(self) -> dict:
        return {**self.charges, "E": self.E}


def _grid(system: str, charges: Mapping[str, float], n: int) -> np.ndarray:
    lo, hi = E_BRACKET[system]
    if system == "micz3d":
        return -np.logspace(math.log10(-lo), math.log10(-hi), n)
    if system == "osc4d":
        return np.logspace(math.log10(lo), math.log10(hi), n)
    neg = -np.logspace(math.log10(-lo), -12, n)
    pos = np.logspace(-12, math.log10(hi), n)
    branch = -1 / (2 * charges["R"] ** 2)
    return np.unique(np.concatenate([neg, [0.0, branch], pos]))


def phi_at(system: str, charges: Mapping[str, float], E: float, y, scale: float = 1.0):
    """Structure function in y = x+u with the generic normalization, times ``scale``."""
    sc = structure_constants(system, {**charges, "E": E})
    return phi_from_family(root_family(system, charges), E, y, scale * leading_coefficient(sc))


def _crossings(fam, p: int, grid: np.ndarray, table: tuple) -> list[tuple[int, int, float]]:
    """(i, j, E) with rho_j(E) - rho_i(E) = p+1, for every admissible ordered pair at once."""
    I, J, diff, finite = table
    below = diff < p + 1
    change = finite & (below[:, :-1] != below[:, 1:])
    zero = diff == p + 1
    out = []
    if zero.any():
        # a run of exact zeros means the pair is degenerate and does not fix E
        pair_run = zero[:, 1:] & zero[:, :-1]
        run = np.zeros_like(zero)
        run[:, 1:] |= pair_run
        run[:, :-1] |= pair_run
        out += [(int(I[k]), int(J[k]), float(grid[a])) for k, a in zip(*np.nonzero(zero & ~run))]
        # a flip next to an exact zero is that zero, not a crossing
        change &= ~zero[:, :-1] & ~zero[:, 1:]
    for k, a in zip(*np.nonzero(change)):
        di, dj = fam[I[k]], fam[J[k]]

        def g(E: float) -> float:
            return dj.value(E) - di.value(E) - (p + 1)

        lo, hi = sorted((float(grid[a]), float(grid[a + 1])))
        if not (math.isfinite(g(lo)) and math.isfinite(g(hi))):
            continue
        out.append((int(I[k]), int(J[k]), brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                                                 maxiter=200)))
    return out


@lru_cache(maxsize=16)
def _admissible_pairs(dep: tuple) -> tuple[np.ndarray, np.ndarray]:
    n = len(dep)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and (dep[i] or dep[j])]
    return np.array([i for i, _ in pairs]), np.array([j for _, j in pairs])


@lru_cache(maxsize=256)
def _scan_table(system: str, key: tuple, n: int):
    # root values on the search grid do not depend on p; shared across calls
    charges = dict(key)
    fam = root_family(system, charges)
    grid = _grid(system, charges, n)
    vals = np.array([d.value(grid) for d in fam])
    I, J = _admissible_pairs(tuple(d.energy_dependent for d in fam))
    diff = vals[J] - vals[I]
    ok = np.isfinite(diff)
    finite = ok[:, :-1] & ok[:, 1:]
    for arr in (diff, finite):
        arr.setflags(write=False)
    return fam, grid, (I, J, diff, finite)


def _index_max(fam, E: float) -> float:
    vals = [float(d.value(E)) for d in fam if not d.energy_dependent]
    return max(vals)


def _energy_values(fam, E: float) -> list[float]:
    return [v for v in (float(d.value(E)) for d in fam if d.energy_dependent) if math.isfinite(v)]


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * (1 + abs(b))


def find_representations(system: str, charges: Mapping[str, float], p: int,
                         tol: float = DEFAULT_TOL, scale: float = 1.0,
                         grid_points: int = GRID_POINTS) -> list[Representation]:
    """All solutions of the boundary constraints at dimension p+1, with flags.

    Solutions are returned in canonical orientation (u >= -p/2); the mirrored
    shift -u-p describes the same module with the A-spectrum reversed.
    ``accepted`` additionally requires the lowest-weight rule: the module starts
    at the largest index-family root and ends at an energy-dependent root.
    """
    if p < 0 or int(p) != p:
        raise ValueError("p must be a non-negative integer")
    if scale <= 0:
        raise ValueError("scale must be positive")
    check_charges(system, charges)
    charges = {k: float(v) for k, v in charges.items() if k != "E"}
    fam, grid, table = _scan_table(system, tuple(sorted(charges.items())), grid_points)
    found: list[Representation] = []
    for i, j, E in _crossings(fam, p, grid, table):
        rep = _assess(system, charges, fam, p, E, (i, j), tol, scale)
        if rep is not None:
            found.append(rep)
    return _merge(found)


def _assess(system, charges, fam, p, E, pairing, tol, scale) -> Representation | None:
    i, j = pairing
    u = float(fam[i].value(E))
    if not math.isfinite(u):
        return None
    u_mirror = -u - p
    if u < -p / 2:
        # canonical orientation; the mirrored pair has flipped sign tags
        u, u_mirror = u_mirror, u
        i, j = (next(k for k, d in enumerate(fam) if d.label == fam[j].label and d.kind == fam[j].kind
                     and d.sign == -fam[j].sign),
                next(k for k, d in enumerate(fam) if d.label == fam[i].label and d.kind == fam[i].kind
                     and d.sign == -fam[i].sign))
    lead = scale * leading_coefficient(structure_constants(system, {**charges, "E": E}))
    ks = np.arange(p + 2, dtype=float)
    phis = np.asarray(phi_from_family(fam, E, ks + u, lead), dtype=float)
    dense = np.asarray(phi_from_family(fam, E, np.linspace(0, p + 1, 64 * (p + 1) + 1) + u, lead))
    big = max(float(np.max(np.abs(dense))), float(np.max(np.abs(phis))))
    if not math.isfinite(big):
        return None
    floor = tol * big
    boundary_ok = abs(phis[0]) <= floor and abs(phis[-1]) <= floor
    if not boundary_ok:
        return None
    positivity_ok = bool(np.all(phis[1:-1] > floor))
    continuum_ok = bool(np.all(dense[1:-1] > -floor))
    top = u + p + 1
    lowest = (_close(u, _index_max(fam, E), MERGE_TOL)
              and any(_close(top, v, MERGE_TOL) for v in _energy_values(fam, E)))
    Ep, up = printed_spectrum(system, p, charges)
    return Representation(
        system=system, charges=dict(charges), p=int(p), u=u, E=float(E),
        phi_values=tuple(float(v) for v in phis), pairing=(i, j), u_mirror=u_mirror,
        positivity_ok=positivity_ok, continuum_ok=continuum_ok, lowest_weight=lowest,
        boundary_ok=True,
        matches_printed_E=_close(Ep, E, MATCH_TOL),
        matches_printed_u=_close(up, u, MATCH_TOL) or _close(up, u_mirror, MATCH_TOL),
        descriptors=(fam[i].tag, fam[j].tag), phi_scale=big,
    )


def _rank(rep: Representation) -> tuple:
    return (not rep.accepted, not rep.positivity_ok, rep.pairing)


def _merge(reps: Sequence[Representation]) -> list[Representation]:
    out: list[Representation] = []
    for rep in sorted(reps, key=lambda r: (r.E, r.u)):
        for k, kept in enumerate(out):
            if _close(rep.E, kept.E, MERGE_TOL) and _close(rep.u, kept.u, MERGE_TOL):
                if _rank(rep) < _rank(kept):
                    out[k] = rep
                break
        else:
            out.append(rep)
    return sorted(out, key=lambda r: (r.E, r.u, r.pairing))


def compare_printed(rep: Representation, tol: float = MATCH_TOL) -> list[DiscrepancyRecord]:
    """Records for every mismatch between a solved representation and the printed formulas."""
    out = []
    Ep, up = printed_spectrum(rep.system, rep.p, rep.charges)

    def check(tag, printed, derived, note, alt=None):
        dev = abs(printed - derived) / (1 + abs(derived))
        if alt is not None:
            dev = min(dev, abs(printed - alt) / (1 + abs(alt)))
        if dev > tol:
            out.append(DiscrepancyRecord(tag, float(printed), float(derived), float(dev), note))

    check(f"{rep.system}.printed_energy", Ep, rep.E, "printed energy differs from constraint solution")
    check(f"{rep.system}.printed_shift", up, rep.u, "printed shift matches neither orientation", rep.u_mirror)
    if rep.system == "micz3d":
        c = rep.charges
        lvl = principal_quantum_number(rep.p, 0, c["m"], c["s"], c["c1"], c["c2"])
        check("micz3d.parabolic_energy", lvl.energy, rep.E, "energy from principal quantum number with p = n1+n2")
    return out


@dataclass(frozen=True)
class SpectrumRow:
    p: int
    E: float
    u: float
    positivity_ok: bool
    pairing: tuple
    discrepancies: tuple = field(default=())
    rep: Representation | None = None


def spectrum_table(system: str, charges: Mapping[str, float], p_max: int,
                   tol: float = DEFAULT_TOL) -> list[SpectrumRow]:
    """One row per accepted representation for p = 0..p_max, sorted by energy."""
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    rows = []
    for p in range(p_max + 1):
        for rep in find_representations(system, charges, p, tol):
            if rep.accepted:
                rows.append(SpectrumRow(p, rep.E, rep.u, rep.positivity_ok, rep.pairing,
                                        tuple(compare_printed(rep)), rep))
    return sorted(rows, key=lambda r: (r.E, r.p, r.u))


def duality_check(p: int, m1: float, m2: float) -> float:
    """|E_coulomb + omega^2/8| with the oscillator energy pinned at 4."""
    if m1 < 0 or m2 < 0:
        raise ValueError("m1, m2 must be >= 0")
    n = p + 1 + (m1 + m2) / 2
    omega = 2 / n
    return abs(-1 / (2 * n * n) + omega * omega / 8)


def proportionality(f: Callable, g: Callable, xs: Sequence[float], rtol: float = 1e-6):
    """Constant c > 0 with f = c g on xs, or a DiscrepancyRecord explaining why not."""
    fv = np.array([float(f(x)) for x in xs])
    gv = np.array([float(g(x)) for x in xs])
    both_zero = (fv == 0) & (gv == 0)
    mask = ~both_zero
    if not mask.any() or np.all(gv[mask] == 0) or np.all(fv[mask] == 0):
        return DiscrepancyRecord("proportionality", math.nan, math.nan, math.inf, "ratio undefined")
    if np.any(gv[mask] == 0):
        return DiscrepancyRecord("proportionality", math.nan, math.nan, math.inf, "ratio undefined at a zero of the reference")
    ratio = fv[mask] / gv[mask]
    c = float(np.median(ratio))
    dev = float(np.max(np.abs(ratio - c)) / abs(c)) if c != 0 else math.inf
    if c > 0 and dev <= rtol:
        return c
    note = "ratio not constant" if dev > rtol else "ratio negative"
    return DiscrepancyRecord("proportionality", float(np.min(ratio)), float(np.max(ratio)), dev, note)


def sample_points(p: int, n: int = 20) -> list[float]:
    return [(k + 0.5) * (p + 1) / n for k in range(n)]


def reconcile_generic(system: str, rep: Representation, reading: str, corrected: bool = False):
    """Compare the generic structure function (under ``reading``) against the factored one.

    Both orientations of the representation are tried, since the printed
    factored forms are not all written in the same orientation.  Returns the
    positive proportionality constant, or the DiscrepancyRecord of the
    orientation that came closest.
    """
    ch = rep.with_charges_E()
    sc = structure_constants(system, ch)
    K = casimir_closed(system, ch).value
    fac = factored_phi(system, rep.p, rep.charges, corrected=corrected).poly()
    xs = sample_points(rep.p)
    best = None
    for u in (rep.u, rep.u_mirror):
        gen = build_phi_generic(sc, K, u, reading)
        res = proportionality(gen, fac, xs)
        if not isinstance(res, DiscrepancyRecord):
            return res
        if best is None or res.deviation < best.deviation:
            best = res
    tag = f"{system}.generic_vs_factored[{reading}{',corrected' if corrected else ''}]"
    return DiscrepancyRecord(tag, best.printed, best.derived, best.deviation, f"reading {reading}: {best.note}")
