"""General quadratic algebra data: structure constants, Casimir, generic structure function.

The algebra is

    [A, B] = C
    [A, C] = beta A^2 + gamma {A, B} + delta A + epsilon B + zeta
    [B, C] = a A^2 - gamma B^2 - beta {A, B} + d A - delta B + z

with every constant already evaluated at fixed central charges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .polycore import Poly

READINGS = ("A", "B")

PROVENANCES = ("closed-form", "matrix-oracle", "phi-reconciled")


@dataclass(frozen=True)
class StructureConstants:
    beta: float = 0.0
    gamma: float = 2.0
    delta: float = 0.0
    epsilon: float = 0.0
    zeta: float = 0.0
    a: float = 0.0
    d: float = 0.0
    z: float = 0.0

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("beta", "gamma", "delta", "epsilon", "zeta", "a", "d", "z")}


# CentralCharges is a plain mapping symbol -> value; validation lives in systems.
CentralCharges = Mapping[str, float]


@dataclass(frozen=True)
class CasimirValue:
    value: float
    provenance: str
    notes: tuple = field(default=())

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


class CasimirNotCentral(ValueError):
    def __init__(self, spread: float, offdiag: float, value: float):
        super().__init__("Casimir not central: realization or constants inconsistent "
                         f"(diagonal spread {spread:.3e}, off-diagonal {offdiag:.3e})")
        self.spread = spread
        self.offdiag = offdiag
        self.value = value


def _shifted(u) -> Poly:
    # 2(N+u) as a polynomial in N
    return Poly((2 * u, 2))


def build_phi_generic(sc: StructureConstants, K: float, u: float, reading: str = "A") -> Poly:
    """Generic structure function for beta = delta = epsilon = 0, as a polynomial in N.

    The printed expression has a line break between ``32 g^4 (2y-1)^2`` and
    ``(12y^2 - 12y - 1)(8 g^3 z)``.  Reading "A" adds the two fragments, reading
    "B" multiplies them.  Every other term is taken literally.
    """
    if sc.gamma == 0:
        raise ValueError("wrong branch: generic structure function requires gamma != 0")
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    g = sc.gamma
    t = _shifted(u)
    one = Poly((1,))
    m1 = t - one            # -1 + 2y
    m3 = t - 3 * one        # -3 + 2y
    p1 = t + one            # 1 + 2y
    y = Poly((u, 1))
    quad = Poly((-1,)) + y * (-12) + y * y * 12

    def pw(p: Poly, k: int) -> Poly:
        out = one
        for _ in range(k):
            out = out * p
        return out

    terms = [
        pw(m1, 2) * (-3072 * g**6 * K),
        m3 * pw(m1, 4) * p1 * (-48 * g**6 * (-sc.d * g**2)),
        pw(m3, 2) * pw(m1, 4) * pw(p1, 2) * (g**8 * 4 * sc.a * g),
        one * (768 * (4 * g**2 * sc.zeta) ** 2),
    ]
    frag = pw(m1, 2) * (32 * g**4)
    zpart = quad * (8 * g**3 * sc.z)
    if reading == "A":
        terms += [frag, zpart]
    else:
        terms.append(frag * zpart)
    terms.append(pw(m1, 2) * (-256 * g**2 * (-4 * g**5 * sc.z)))
    out = Poly(())
    for term in terms:
        out = out + term
    return out


def leading_coefficient(sc: StructureConstants) -> float:
    """Coefficient of the top power of (N+u) in the generic structure function.

    Only the a- and d-terms reach the top degree, so this does not depend on the
    reading, on K or on u.
    """
    g = sc.gamma
    if sc.a != 0:
        return 1024 * sc.a * g**9
    return 3072 * sc.d * g**8


def anticomm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def casimir_operator(A: np.ndarray, B: np.ndarray, C: np.ndarray, sc: StructureConstants) -> np.ndarray:
    """The Casimir element as a matrix; the coefficient printed as alpha is read as beta."""
    al, g, de, ep, ze, a, d, z = (sc.beta, sc.gamma, sc.delta, sc.epsilon, sc.zeta, sc.a, sc.d, sc.z)
    A2 = A @ A
    B2 = B @ B
    return (C @ C - al * anticomm(A2, B) - g * anticomm(A, B2) + (al * g - de) * anticomm(A, B)
            + (g**2 - ep) * B2 + (g * de - 2 * ze) * B + (2 * a / 3) * A2 @ A
            + (d + a * g / 3 + al**2) * A2 + (a * ep / 3 + al * de + 2 * z) * A)


def casimir_matrix(A: np.ndarray, B: np.ndarray, C: np.ndarray, sc: StructureConstants,
                   rtol: float = 1e-8) -> CasimirValue:
    shapes = {A.shape, B.shape, C.shape}
    if len(shapes) != 1 or A.shape[0] != A.shape[1]:
        raise ValueError("matrices must be square and of equal size")
    value, spread, offdiag = centrality(A, B, C, sc)
    bound = rtol * (1 + abs(value))
    if spread > bound or offdiag > bound:
        raise CasimirNotCentral(spread, offdiag, value)
    return CasimirValue(value, "matrix-oracle")


def centrality(A: np.ndarray, B: np.ndarray, C: np.ndarray, sc: StructureConstants) -> tuple[float, float, float]:
    """(mean diagonal, diagonal spread, max off-diagonal) of the Casimir matrix."""
    Kmat = casimir_operator(A, B, C, sc)
    diag = np.diag(Kmat)
    off = Kmat - np.diag(diag)
    return float(np.mean(diag)), float(diag.max() - diag.min()), float(np.abs(off).max()) if off.size else 0.0
