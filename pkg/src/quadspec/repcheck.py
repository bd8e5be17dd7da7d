"""Brute-force oracle: explicit matrices for a solved representation.

A is diagonal with A(k) = (gamma/2)((k+u)^2 - 1/4); B is symmetric tridiagonal.
The diagonal of B follows from the diagonal of [A, C] and the squared
off-diagonal entries r_k^2 from the diagonal of [B, C], run as a recursion
from r_0 = 0.  The recursion must land on r_{p+1}^2 = 0; how close it gets is
the fit residual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .algebra import CasimirValue, StructureConstants, anticomm, centrality
from .repfinder import DiscrepancyRecord, Representation
from .systems import casimir_closed, structure_constants

FIT_TOL = 1e-8


class FitError(ValueError):
    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class RealizationMatrices:
    N: np.ndarray
    b: np.ndarray
    bdag: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    fit_residual: float = 0.0
    ratio_spread: float = 0.0

    @property
    def dim(self) -> int:
        return self.N.shape[0]


def build_ladder(rep: Representation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    phi = np.asarray(rep.phi_values, dtype=float)
    p = rep.p
    if np.any(phi[1:p + 1] < 0):
        raise ValueError("non-unitary: negative structure function")
    N = np.diag(np.arange(p + 1, dtype=float))
    bdag = np.zeros((p + 1, p + 1))
    for k in range(1, p + 1):
        bdag[k, k - 1] = math.sqrt(phi[k])
    return N, bdag.T.copy(), bdag


def ladder_residual(rep: Representation, N: np.ndarray, b: np.ndarray, bdag: np.ndarray) -> float:
    """Largest violation of the deformed-oscillator relations, relative to max |Phi|."""
    phi = np.asarray(rep.phi_values, dtype=float)
    p = rep.p
    scale = max(float(np.max(np.abs(phi))), rep.phi_scale, 1e-300)
    top = max(float(np.abs(bdag).max()), 1e-300)
    res = [
        np.abs(N @ bdag - bdag @ N - bdag).max() / top,
        np.abs(N @ b - b @ N + b).max() / top,
        np.abs(bdag @ b - np.diag(phi[:p + 1])).max() / scale,
        np.abs(b @ bdag - np.diag(phi[1:p + 2])).max() / scale,
    ]
    return float(max(res))


def fit_realization(system: str, rep: Representation) -> RealizationMatrices:
    sc = structure_constants(system, rep.with_charges_E())
    return fit_from_constants(sc, rep)


def fit_from_constants(sc: StructureConstants, rep: Representation) -> RealizationMatrices:
    g, u, p = sc.gamma, rep.u, rep.p
    if sc.beta or sc.delta or sc.epsilon:
        raise FitError("ansatz requires beta = delta = epsilon = 0")
    ks = np.arange(p + 1, dtype=float)
    A = (g / 2) * ((ks + u) ** 2 - 0.25)
    bd = np.zeros(p + 1)
    for k in range(p + 1):
        if A[k] != 0:
            bd[k] = -sc.zeta / (2 * g * A[k])
        elif sc.zeta != 0:
            raise FitError("singular diagonal fit: resonant shift u")
        # zeta = 0 and A(k) = 0: the diagonal entry is 0 by continuity
    r2 = np.zeros(p + 2)
    residual = 0.0
    # absolute floor so that an all-vanishing recursion (p = 0 at a resonant shift) is not 0/0
    floor = 1.0 + abs(sc.z)
    for k in range(p + 1):
        A_next = (g / 2) * ((k + 1 + u) ** 2 - 0.25)
        up = A_next - A[k]
        down = A[k] - A[k - 1] if k > 0 else 0.0
        terms = (r2[k] * (2 * down - g), sc.a * A[k] ** 2, -g * bd[k] ** 2, sc.d * A[k], sc.z)
        rhs = math.fsum(terms)
        size = sum(abs(t) for t in terms)
        if k == p:
            residual = abs(rhs) / max(size, floor)
            break
        coef = 2 * up + g
        if coef == 0:
            raise FitError("ansatz failure: vanishing recursion coefficient", math.inf)
        r2[k + 1] = rhs / coef
    if residual > FIT_TOL:
        raise FitError(f"ansatz failure: residual {residual:.3e}", residual)
    if np.any(r2[1:p + 1] < 0):
        raise FitError("non-unitary: negative off-diagonal square", residual)
    r = np.sqrt(r2[1:p + 1])
    B = np.diag(bd) + np.diag(r, 1) + np.diag(r, -1)
    Am = np.diag(A)
    C = Am @ B - B @ Am
    N, b, bdag = build_ladder(rep)
    return RealizationMatrices(N, b, bdag, Am, B, C, residual, _ratio_spread(rep, r2))


def _ratio_spread(rep: Representation, r2: np.ndarray) -> float:
    # r_k^2 should track Phi(k) / (y (y-1) (2y-1)^2) with y = k+u up to a constant
    ratios = []
    for k in range(1, rep.p + 1):
        y = k + rep.u
        w = y * (y - 1) * (2 * y - 1) ** 2
        if w != 0 and rep.phi_values[k] != 0:
            ratios.append(r2[k] * w / rep.phi_values[k])
    if len(ratios) < 2:
        return 0.0
    c = float(np.median(ratios))
    return float(np.max(np.abs(np.array(ratios) - c)) / abs(c)) if c else math.inf


@dataclass(frozen=True)
class AlgebraReport:
    ab: float
    ac: float
    bc: float

    @property
    def max_residual(self) -> float:
        return max(self.ab, self.ac, self.bc)


def _rel(lhs: np.ndarray, terms: list[np.ndarray]) -> float:
    # relative to the largest operand, absolute once every operand is below 1
    diff = lhs - sum(terms)
    scale = max([1.0, np.abs(lhs).max()] + [np.abs(t).max() for t in terms])
    return float(np.abs(diff).max() / scale)


def algebra_residuals(mats: RealizationMatrices, sc: StructureConstants) -> AlgebraReport:
    A, B, C = mats.A, mats.B, mats.C
    eye = np.eye(mats.dim)
    A2, B2 = A @ A, B @ B
    ab = _rel(A @ B - B @ A, [C])
    ac = _rel(A @ C - C @ A, [sc.beta * A2, sc.gamma * anticomm(A, B), sc.delta * A,
                              sc.epsilon * B, sc.zeta * eye])
    bc = _rel(B @ C - C @ B, [sc.a * A2, -sc.gamma * B2, -sc.beta * anticomm(A, B), sc.d * A,
                              -sc.delta * B, sc.z * eye])
    return AlgebraReport(ab, ac, bc)


def verify_algebra(system: str, mats: RealizationMatrices, charges: Mapping[str, float], E: float) -> AlgebraReport:
    """Relation residuals, each normalized by the largest operand (max-entry norm)."""
    return algebra_residuals(mats, structure_constants(system, {**charges, "E": E}))


@dataclass(frozen=True)
class CasimirReport:
    value: float
    spread: float
    offdiag: float
    closed: float
    rel_diff: float
    discrepancy: DiscrepancyRecord | None = None

    @property
    def central(self) -> bool:
        bound = 1e-8 * (1 + abs(self.value))
        return self.spread <= bound and self.offdiag <= bound


def verify_casimir(mats: RealizationMatrices, sc: StructureConstants, closed: CasimirValue,
                   tag: str = "casimir") -> CasimirReport:
    value, spread, offdiag = centrality(mats.A, mats.B, mats.C, sc)
    rel = abs(value - closed.value) / (1 + abs(value))
    rec = None
    if rel > 1e-8:
        rec = DiscrepancyRecord(tag, closed.value, value, rel, "closed-form Casimir differs from matrix value")
    return CasimirReport(value, spread, offdiag, closed.value, rel, rec)


def check_representation(system: str, rep: Representation) -> dict:
    """Full oracle run on one representation; used by the CLI and the acceptance suite."""
    ch = rep.with_charges_E()
    sc = structure_constants(system, ch)
    mats = fit_from_constants(sc, rep)
    alg = algebra_residuals(mats, sc)
    cas = verify_casimir(mats, sc, casimir_closed(system, ch), f"{system}.casimir")
    return {
        "ladder": ladder_residual(rep, mats.N, mats.b, mats.bdag),
        "algebra": alg,
        "casimir": cas,
        "fit_residual": mats.fit_residual,
        "ratio_spread": mats.ratio_spread,
    }
