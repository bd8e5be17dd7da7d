"""Catalog of the three monopole-related systems.

micz3d  generalized MICZ-Kepler system in flat 3D space
osc4d   4D double singular oscillator (its dual)
miczs3  MICZ-Kepler system on the three-sphere

Each system supplies its structure constants and Casimir at fixed central
charges, the root family of its structure function, the printed spectrum and
the printed factored structure function.  Several printed coefficients are
internally inconsistent; the default ``reading="corrected"`` applies the
corrections listed in ``CORRECTIONS`` and ``reading="printed"`` evaluates the
formulas as printed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .algebra import CasimirValue, StructureConstants
from .polycore import Poly, RootList, poly_from_roots

SYSTEMS = ("micz3d", "osc4d", "miczs3")

CHARGES = {
    "micz3d": ("m", "s", "c1", "c2"),
    "osc4d": ("m", "s", "c1", "c2", "omega"),
    "miczs3": ("m", "mu", "alpha", "R"),
}

# energy search brackets for bound states
E_BRACKET = {
    "micz3d": (-1e6, -1e-12),
    "osc4d": (1e-12, 1e6),
    "miczs3": (-1e6, 1e6),
}

ENERGY_KINDS = ("energy-pair", "curvature-pair")

CORRECTIONS = {
    "micz3d": (
        "zeta: the printed 4(d-c) is read as 4(c2-c1)",
        "casimir: the printed 16(c-d)sJzH is read as 16(c1-c2)smE, the only sign for which "
        "the structure function has the printed root family when s(c1-c2) != 0",
    ),
    "osc4d": (
        "d: the printed -16a^2 is read as -16 omega^2",
        "effective indices: square roots restored, m1 = sqrt((m+s)^2 + 2c1)",
        "zeta: the (c1-c2)E term enters with + sign to match m1 = sqrt((m+s)^2 + 2c1)",
        "z: the omega^2 (m^2+s^2) term enters with + sign",
        "casimir: E^2 (m^2+s^2) term with + sign, omega^2 m^2 s^2 coefficient 16, "
        "(c1-c2) omega^2 m s term with + sign",
    ),
    "miczs3": (),
}


class ChargeError(ValueError):
    pass


class CriticalCoupling(ValueError):
    pass


def check_system(system: str) -> None:
    if system not in SYSTEMS:
        raise ChargeError(f"unknown system: {system}")


def check_charges(system: str, charges: Mapping[str, float], need_energy: bool = False) -> None:
    check_system(system)
    needed = CHARGES[system] + (("E",) if need_energy else ())
    for sym in needed:
        if sym not in charges:
            raise ChargeError(f"missing central charge: {sym}")
    if system == "osc4d" and charges["omega"] <= 0:
        raise ChargeError("omega must be positive")
    if system == "miczs3" and charges["R"] <= 0:
        raise ChargeError("R must be positive")


@dataclass(frozen=True)
class EffectiveIndices:
    m1: float
    m2: float


def _index(sq: float, coupling: float) -> float:
    radicand = sq + coupling
    if radicand < 0 or (radicand == 0 and coupling < 0):
        raise CriticalCoupling("coupling below critical strength: no self-adjoint radial problem")
    return math.sqrt(radicand)


def effective_indices(system: str, charges: Mapping[str, float], literal: bool = False) -> EffectiveIndices:
    """Effective angular indices; for osc4d ``literal=True`` drops the square roots as printed."""
    check_charges(system, charges)
    if system == "micz3d":
        m, s, c1, c2 = (charges[k] for k in ("m", "s", "c1", "c2"))
        return EffectiveIndices(_index((m - s) ** 2, 4 * c1), _index((m + s) ** 2, 4 * c2))
    if system == "osc4d":
        m, s, c1, c2 = (charges[k] for k in ("m", "s", "c1", "c2"))
        if literal:
            return EffectiveIndices((m + s) ** 2 + 2 * c1, (m - s) ** 2 + 2 * c2)
        return EffectiveIndices(_index((m + s) ** 2, 2 * c1), _index((m - s) ** 2, 2 * c2))
    return EffectiveIndices(abs(charges["m"]), abs(charges["mu"]))


def structure_constants(system: str, charges: Mapping[str, float], reading: str = "corrected") -> StructureConstants:
    check_charges(system, charges, need_energy=True)
    effective_indices(system, charges)
    E = charges["E"]
    if system == "micz3d":
        m, s, c1, c2 = (charges[k] for k in ("m", "s", "c1", "c2"))
        return StructureConstants(
            gamma=2.0,
            zeta=4 * s * m + 4 * (c2 - c1),
            d=8 * E,
            z=(-4 * m**2 - 4 * s**2 - 4 * (2 * c1 + 2 * c2 - 1)) * E + 2,
        )
    if system == "osc4d":
        m, s, c1, c2, w = (charges[k] for k in ("m", "s", "c1", "c2", "omega"))
        sign = 1 if reading == "corrected" else -1
        return StructureConstants(
            gamma=2.0,
            d=-16 * w**2,
            zeta=4 * m * s * E + sign * 2 * (c1 - c2) * E,
            z=2 * E**2 + sign * 8 * w**2 * (m**2 + s**2) + 8 * (c1 + c2 - 1) * w**2,
        )
    m, mu, al, R = (charges[k] for k in ("m", "mu", "alpha", "R"))
    return StructureConstants(
        gamma=2.0,
        zeta=4 * al * mu * m,
        a=-6 / R**2,
        d=8 * E + 4 * (m**2 + mu**2 - 1) / R**2,
        z=2 * al**2 + 4 * E * (1 - m**2 - mu**2) - 2 * m**2 * mu**2 / R**2,
    )


def casimir_closed(system: str, charges: Mapping[str, float], reading: str = "corrected") -> CasimirValue:
    try:
        check_charges(system, charges, need_energy=True)
    except ChargeError as exc:
        raise ChargeError(f"incomplete central charges: {exc}") from None
    E = charges["E"]
    notes = CORRECTIONS[system] if reading == "corrected" else ()
    if system == "micz3d":
        m, s, c1, c2 = (charges[k] for k in ("m", "s", "c1", "c2"))
        cross = (c1 - c2) if reading == "corrected" else (c2 - c1)
        K = (-8 * s**2 * m**2 * E + 16 * cross * s * m * E - 8 * (c1 - c2) ** 2 * E
             + 4 * m**2 + 4 * (2 * c1 + 2 * c2 + s**2))
    elif system == "osc4d":
        m, s, c1, c2, w = (charges[k] for k in ("m", "s", "c1", "c2", "omega"))
        if reading == "corrected":
            K = (4 * E**2 * (m**2 + s**2 + c1 + c2) + 16 * w**2 * m**2 * s**2
                 + 16 * (c1 - c2) * w**2 * m * s + 4 * (c1 - c2) ** 2 * w**2)
        else:
            K = (-4 * m**2 * E**2 - 4 * s**2 * E**2 + 4 * (c1 + c2) * E**2 + 4 * w**2 * m**2 * s**2
                 - 16 * (c1 - c2) * w**2 * m * s + 4 * (c1 - c2) ** 2 * w**2)
    else:
        m, mu, al, R = (charges[k] for k in ("m", "mu", "alpha", "R"))
        K = 4 * al**2 * mu**2 + 4 * m**2 * al**2 - 8 * m**2 * mu**2 / (2 * R**2) - 8 * m**2 * mu**2 * E
    return CasimirValue(float(K), "closed-form", notes)


@dataclass(frozen=True)
class RootDescriptor:
    """One root rho(E) = 1/2 + sign * sqrt(h(E)) of the structure function in the variable x+u.

    Every family here comes in pairs symmetric about 1/2, so a descriptor is a
    squared half-width ``h`` plus a sign tag.  ``h < 0`` means the pair is complex.
    """
    kind: str
    sign: int
    label: str
    half_width_sq: Callable

    @property
    def energy_dependent(self) -> bool:
        return self.kind in ENERGY_KINDS

    def h(self, E):
        if isinstance(E, np.ndarray):
            with np.errstate(divide="ignore", invalid="ignore"):
                return self.half_width_sq(E)
        try:
            return float(self.half_width_sq(E))
        except ZeroDivisionError:
            return math.nan

    def value(self, E):
        h = self.h(E)
        if isinstance(h, np.ndarray):
            with np.errstate(invalid="ignore"):
                return 0.5 + self.sign * np.sqrt(h)
        return 0.5 + self.sign * math.sqrt(h) if h >= 0 else math.nan

    @property
    def tag(self) -> str:
        return f"{self.kind}:{self.label}:{'+' if self.sign > 0 else '-'}"


def _const(v: float) -> Callable:
    return lambda E: v + 0 * E


def _pair(kind: str, label: str, h: Callable) -> list[RootDescriptor]:
    return [RootDescriptor(kind, +1, label, h), RootDescriptor(kind, -1, label, h)]


def _curvature(R: float, alpha: float, branch: int) -> Callable:
    c = 4 * R**2 * alpha**2

    def h(E):
        if not isinstance(E, np.ndarray):
            Ep = 1 + 2 * E * R**2
            S = math.sqrt(Ep * Ep + c)
            big = (Ep + S) / 2 if Ep >= 0 else (Ep - S) / 2
            small = -(c / 4) / big if big != 0 else 0.0
            return big if (branch > 0) == (Ep >= 0) else small
        Ep = 1 + 2 * E * R**2
        S = np.sqrt(Ep * Ep + c)
        # avoid cancellation between Ep and S; h_plus * h_minus = -R^2 alpha^2
        big = np.where(Ep >= 0, (Ep + S) / 2, (Ep - S) / 2)
        safe = np.where(big != 0, big, 1.0)
        small = np.where(big != 0, -(c / 4) / safe, 0.0)
        if branch > 0:
            return np.where(Ep >= 0, big, small)
        return np.where(Ep >= 0, small, big)
    return h


def root_family(system: str, charges: Mapping[str, float]) -> list[RootDescriptor]:
    """The 6 (flat systems) or 8 (sphere) root descriptors, with E left free."""
    check_charges(system, charges)
    if system == "micz3d":
        idx = effective_indices(system, charges)
        energy = _pair("energy-pair", "E", lambda E: -1 / (2 * E))
    elif system == "osc4d":
        idx = effective_indices(system, charges)
        w = charges["omega"]
        energy = _pair("energy-pair", "E", lambda E: (E / (2 * w)) ** 2)
    else:
        m, mu, al, R = (charges[k] for k in ("m", "mu", "alpha", "R"))
        return (_pair("index-family", "m", _const(m * m)) + _pair("index-family", "mu", _const(mu * mu))
                + _pair("curvature-pair", "E'+", _curvature(R, al, +1))
                + _pair("curvature-pair", "E'-", _curvature(R, al, -1)))
    s_plus = ((idx.m1 + idx.m2) / 2) ** 2
    s_minus = ((idx.m1 - idx.m2) / 2) ** 2
    return (energy + _pair("index-family", "m1+m2", _const(s_plus))
            + _pair("index-family", "m1-m2", _const(s_minus)))


def structure_roots(system: str, charges: Mapping[str, float], E: float) -> list[float]:
    """Numeric root positions in x+u; NaN marks a member of a complex pair."""
    if system == "micz3d" and E >= 0:
        raise ValueError("bound-state branch requires E < 0")
    return [float(d.value(E)) for d in root_family(system, charges)]


def phi_from_family(family: list[RootDescriptor], E: float, y, lead: float):
    """lead * prod over pairs of ((y - 1/2)^2 - h(E)); real even when a pair is complex."""
    out = lead
    seen = set()
    for d in family:
        key = (d.kind, d.label)
        if key in seen:
            continue
        seen.add(key)
        out = out * ((y - 0.5) ** 2 - d.h(E))
    return out


@dataclass(frozen=True)
class FactoredPhi:
    """prefactor * orientation * prod(x - r) * extra(x), with prefactor > 0 as printed."""
    roots: RootList
    prefactor: float
    orientation: int
    extra: Poly = Poly((1,))

    def poly(self) -> Poly:
        return poly_from_roots(self.roots, self.prefactor * self.orientation) * self.extra

    def __call__(self, x):
        return self.poly()(x)


def factored_phi(system: str, p: int, charges: Mapping[str, float], corrected: bool = False) -> FactoredPhi:
    """Printed factored structure function of the finite representation of dimension p+1.

    For miczs3 the printed form places the last linear root at -(p+1+|mu|) and the
    quadratic constant at R^2 alpha^2 / N^2; ``corrected=True`` uses -(p+1+2|mu|)
    and 4 R^2 alpha^2 / N^2, which is what the root family implies.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    check_charges(system, charges)
    if system in ("micz3d", "osc4d"):
        idx = effective_indices(system, charges)
        m1, m2 = idx.m1, idx.m2
        q = p + 1
        roots = [0, q, q + m1, q + m2, q + m1 + m2, 2 * q + m1 + m2]
        if system == "micz3d":
            pref = 3 * 2**21 / (q + m1 + m2) ** 2
        else:
            pref = 3 * 2**19 * charges["omega"] ** 2
        # x(q-x)(q+m1-x)... = -prod(x - r)
        return FactoredPhi(RootList.from_values(roots), pref, -1)
    m, mu, al, R = (charges[k] for k in ("m", "mu", "alpha", "R"))
    amu = abs(mu)
    N = p + 1 + amu
    last = -(p + 1 + 2 * amu) if corrected else -(p + 1 + amu)
    roots = [0, p + 1, -2 * amu, -(m + amu), m - amu, last]
    const = (4 if corrected else 1) * R**2 * al**2 / N**2
    extra = Poly((4 * amu**2 + const, 8 * amu, 4))   # (2x + 2|mu|)^2 + const
    return FactoredPhi(RootList.from_values(roots), 3 * 2**18 / R**2, -1, extra)


def printed_spectrum(system: str, p: int, charges: Mapping[str, float]) -> tuple[float, float]:
    """(E, u) exactly as printed; candidates for comparison, not ground truth."""
    check_charges(system, charges)
    if system == "micz3d":
        idx = effective_indices(system, charges)
        E = -1 / (2 * (p + 1 + idx.m1 + idx.m2) ** 2)
        return E, 0.5 + 1 / math.sqrt(-2 * E)
    if system == "osc4d":
        idx = effective_indices(system, charges)
        w = charges["omega"]
        E = 2 * w * (p + 1 + (idx.m1 + idx.m2) / 2)
        return E, 0.5 - E / (2 * w)
    mu, al, R = charges["mu"], charges["alpha"], charges["R"]
    N = p + 1 + abs(mu)
    return -(al**2) / (2 * N**2) + (N**2 - 1) / (2 * R**2), 0.5 * (1 + 2 * abs(mu))


@dataclass(frozen=True)
class PrincipalLevel:
    n: float
    delta1: float
    delta2: float
    energy: float


def principal_quantum_number(n1: int, n2: int, m: float, s: float, c1: float = 0.0, c2: float = 0.0) -> PrincipalLevel:
    """Principal quantum number from parabolic numbers, with the shifted Coulomb energy."""
    if n1 < 0 or n2 < 0 or int(n1) != n1 or int(n2) != n2:
        raise ValueError("n1, n2 must be non-negative integers")
    idx = effective_indices("micz3d", {"m": m, "s": s, "c1": c1, "c2": c2})
    n = n1 + n2 + (abs(m - s) + abs(m + s)) / 2 + 1
    delta1 = idx.m1 - abs(m - s)
    delta2 = idx.m2 - abs(m + s)
    return PrincipalLevel(n, delta1, delta2, -1 / (2 * (n + (delta1 + delta2) / 2) ** 2))
