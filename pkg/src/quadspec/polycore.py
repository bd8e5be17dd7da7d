"""Real polynomial arithmetic and real root isolation on an interval.

Coefficients are stored constant term first.  Evaluation is exact when every
coefficient and the point are ints/Fractions; otherwise it is done in double
precision with compensated summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
PANELS_PER_UNIT = 2048
MAX_PANELS = 1 << 20


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        # zero polynomial reported as degree -1
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        return poly_eval(self, x)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def deriv(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def as_float(self) -> "Poly":
        return Poly(tuple(float(c) for c in self.coeffs))

    def magnitude(self, x: float) -> float:
        """Sum of |c_i||x|^i, the natural scale of rounding error in p(x)."""
        ax = abs(float(x))
        return math.fsum(abs(float(c)) * ax**i for i, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class RootList:
    roots: tuple = ()
    multiplicity: tuple = ()

    def __post_init__(self):
        if len(self.roots) != len(self.multiplicity):
            raise ValueError("roots and multiplicity must align")
        if any(m < 1 for m in self.multiplicity):
            raise ValueError("multiplicities must be >= 1")
        order = sorted(range(len(self.roots)), key=lambda i: self.roots[i])
        object.__setattr__(self, "roots", tuple(self.roots[i] for i in order))
        object.__setattr__(self, "multiplicity", tuple(self.multiplicity[i] for i in order))

    @classmethod
    def from_values(cls, values: Sequence) -> "RootList":
        """Group exactly equal values into (root, multiplicity) pairs."""
        counts: dict = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return cls(tuple(counts), tuple(counts.values()))

    def expanded(self) -> list:
        out = []
        for r, m in zip(self.roots, self.multiplicity):
            out.extend([r] * m)
        return out

    @property
    def total(self) -> int:
        return sum(self.multiplicity)


def poly_eval(p: Poly, x):
    if p.exact and _is_exact(x):
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c
        return acc
    if isinstance(x, np.ndarray):
        return poly_eval_array(p, x)
    xf = float(x)
    terms = []
    power = 1.0
    for c in p.coeffs:
        terms.append(float(c) * power)
        power *= xf
    return math.fsum(terms)


def poly_eval_array(p: Poly, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    acc = np.zeros_like(xs)
    for c in reversed(p.coeffs):
        acc = acc * xs + float(c)
    return acc


def poly_from_roots(r: RootList, scale=1) -> Poly:
    if scale == 0:
        raise ValueError("degenerate scale")
    out = Poly((scale,))
    for root in r.expanded():
        out = out * Poly((-root, 1))
    return out


def bisect(f: Callable[[float], float], lo: float, hi: float, flo: float | None = None,
           xtol: float = 0.0, maxiter: int = 200) -> float:
    """Bisection on a sign-change bracket, down to adjacent floats unless xtol is hit."""
    flo = f(lo) if flo is None else flo
    if flo == 0:
        return lo
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_polish(f: Callable[[float], float], df: Callable[[float], float], x: float,
                  lo: float, hi: float, steps: int = 3) -> float:
    """A few guarded Newton steps; keeps the iterate only if |f| decreases inside [lo, hi]."""
    fx = abs(f(x))
    for _ in range(steps):
        d = df(x)
        if d == 0 or not math.isfinite(d):
            break
        cand = x - f(x) / d
        if not (lo <= cand <= hi):
            break
        fc = abs(f(cand))
        if fc >= fx:
            break
        x, fx = cand, fc
    return x


def _grid(lo: float, hi: float) -> np.ndarray:
    n = int(min(MAX_PANELS, max(16, math.ceil((hi - lo) * PANELS_PER_UNIT))))
    return np.linspace(lo, hi, n + 1)


def _near_zero(p: Poly, x: float, tol: float) -> bool:
    """True when p could vanish within 10*tol of x (Taylor bound) or p(x) is rounding noise."""
    h = 10 * tol
    bound = 64 * np.finfo(float).eps * p.magnitude(x)
    q, fact = p.deriv(), 1
    for k in range(1, p.degree + 1):
        fact *= k
        bound += abs(poly_eval(q, x)) / fact * h**k
        q = q.deriv()
    return abs(poly_eval(p, x)) <= bound


def _multiplicity(p: Poly, r: float, tol: float) -> int:
    k = 1
    q = p.deriv()
    while q.degree >= 0 and k < p.degree and _near_zero(q, r, tol):
        k += 1
        q = q.deriv()
    return k


def _cluster_radius(p: Poly, r: float, k: int) -> float:
    # rounding in the coefficients splits a k-fold root into a cluster of this size
    q = p
    for _ in range(k):
        q = q.deriv()
    top = abs(poly_eval(q, r)) / math.factorial(k)
    if top == 0:
        return 0.0
    return 10 * (1e-15 * p.magnitude(r) / top) ** (1.0 / k)


def _distinct_roots(p: Poly, lo: float, hi: float, tol: float) -> list[float]:
    if p.degree < 1:
        return []
    if p.degree == 1:
        r = -p.coeffs[0] / p.coeffs[1]
        return [r] if lo - tol <= r <= hi + tol else []
    # multiple roots are critical points; they are located through the derivative
    multi = [c for c in _distinct_roots(p.deriv(), lo, hi, tol) if _near_zero(p, c, tol)]
    radii = [_cluster_radius(p, c, _multiplicity(p, c, tol)) for c in multi]
    dp = p.deriv()
    xs = _grid(lo, hi)
    vals = poly_eval_array(p, xs)
    simple = [float(x) for x in xs[vals == 0]]
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        a, b = float(xs[i]), float(xs[i + 1])
        r = bisect(lambda t: poly_eval(p, t), a, b, flo=float(vals[i]))
        simple.append(newton_polish(lambda t: poly_eval(p, t), lambda t: poly_eval(dp, t), r, a, b))
    simple = [r for r in simple
              if all(abs(r - c) > max(rad, 10 * tol) for c, rad in zip(multi, radii))]
    merged: list[float] = []
    for r in sorted(multi + simple):
        if merged and abs(r - merged[-1]) <= 10 * tol:
            continue
        merged.append(r)
    return merged


def roots_real(p: Poly, lo: float, hi: float, tol: float = DEFAULT_TOL) -> RootList:
    if not lo < hi:
        raise ValueError("need lo < hi")
    if tol <= 0:
        raise ValueError("need tol > 0")
    pf = p.as_float()
    if pf.degree >= 1:
        pf = pf * (1.0 / max(abs(c) for c in pf.coeffs))
    distinct = [r for r in _distinct_roots(pf, lo, hi, tol) if lo - tol <= r <= hi + tol]
    mults = [_multiplicity(pf, r, tol) for r in distinct]
    # cap so that the reported total never exceeds the degree
    while sum(mults) > max(pf.degree, 0):
        j = max(range(len(mults)), key=lambda i: mults[i])
        mults[j] -= 1
    keep = [(r, m) for r, m in zip(distinct, mults) if m >= 1]
    return RootList(tuple(r for r, _ in keep), tuple(m for _, m in keep))
