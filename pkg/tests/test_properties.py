"""Randomized invariants (hypothesis, 200 examples each)."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from quadspec.algebra import StructureConstants, build_phi_generic, casimir_operator
from quadspec.cli import RunConfig, cmd_spectrum, render_json
from quadspec.polycore import Poly, RootList, poly_eval, poly_from_roots, roots_real
from quadspec.repfinder import duality_check, find_representations, phi_at
from quadspec.systems import root_family

N = 200
cfg = settings(max_examples=N, deadline=None)

half = st.integers(-4, 4).map(lambda k: k / 2)
coupling = st.floats(0, 2, allow_nan=False)
omega = st.floats(0.2, 5, allow_nan=False)


@st.composite
def micz(draw):
    return {"m": draw(half), "s": draw(half), "c1": draw(coupling), "c2": draw(coupling)}


@st.composite
def any_system(draw):
    system = draw(st.sampled_from(["micz3d", "osc4d", "miczs3"]))
    if system == "micz3d":
        return system, draw(micz())
    if system == "osc4d":
        return system, {**draw(micz()), "omega": draw(omega)}
    return system, {"m": draw(half), "mu": draw(half), "alpha": draw(st.floats(0, 2)),
                    "R": draw(st.floats(0.5, 4))}


def accepted_set(system, charges, p, scale=1.0):
    return [(r.E, r.u) for r in find_representations(system, charges, p, scale=scale) if r.accepted]


@cfg
@given(any_system(), st.integers(0, 3), st.floats(1e-3, 1e3))
def test_rescaling_keeps_representations(sys_ch, p, lam):
    system, ch = sys_ch
    assert accepted_set(system, ch, p) == accepted_set(system, ch, p, scale=lam)


@cfg
@given(any_system(), st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_phi_shift_covariance(sys_ch, E, u, t):
    system, ch = sys_ch
    if system == "micz3d":
        E = -abs(E) - 0.01
    xs = np.linspace(0, 4, 9)
    a = phi_at(system, ch, E, xs + u)
    b = phi_at(system, ch, E, (xs - t) + (u + t))
    assert np.allclose(a, b, rtol=1e-9, atol=1e-9 * np.max(np.abs(a)))


@cfg
@given(st.floats(-3, 3), st.floats(-1, 1), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_generic_phi_shift_covariance(u, t, K, zeta, d, z):
    sc = StructureConstants(zeta=zeta, d=d, z=z, a=-0.5)
    P, Q = build_phi_generic(sc, K, u, "B"), build_phi_generic(sc, K, u + t, "B")
    for x in (0.3, 1.7, 2.9):
        assert math.isclose(P(x), Q(x - t), rel_tol=1e-7, abs_tol=1e-7 * P.magnitude(x + abs(u) + 1))


@cfg
@given(any_system(), st.floats(-3, 3))
def test_index_family_symmetric_about_half(sys_ch, E):
    system, ch = sys_ch
    vals = sorted(float(d.value(E)) for d in root_family(system, ch) if not d.energy_dependent)
    assert len(vals) == 4
    assert np.allclose(np.add(vals, vals[::-1]), 1.0, atol=1e-12)


@cfg
@given(micz())
def test_micz_energies_increase_with_p(ch):
    Es = []
    for p in range(4):
        reps = accepted_set("micz3d", ch, p)
        assert len(reps) == 1
        Es.append(reps[0][0])
    assert all(e < 0 for e in Es)
    assert all(b > a for a, b in zip(Es, Es[1:]))


@cfg
@given(any_system())
def test_json_bytes_deterministic(sys_ch):
    system, ch = sys_ch
    run = lambda: render_json(cmd_spectrum(RunConfig(system=system, parameters=dict(ch), p_max=0)))
    assert run().encode() == run().encode()


@cfg
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=8), st.floats(0.1, 10))
def test_from_roots_vanishes_at_roots(roots, s):
    p = poly_from_roots(RootList.from_values(roots), s)
    for r in roots:
        assert abs(poly_eval(p, r)) <= 1e-9 * max(p.magnitude(r), 1.0)


@cfg
@given(st.lists(st.integers(-40, 40), min_size=1, max_size=6, unique=True), st.floats(0.1, 10))
def test_roots_real_recovers_separated_roots(ints, s):
    roots = [k / 4 for k in ints]
    p = poly_from_roots(RootList.from_values(roots), s)
    got = roots_real(p, -12, 12)
    assert got.total == len(roots)
    assert np.allclose(got.expanded(), sorted(roots), atol=1e-10)


@cfg
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.lists(st.floats(-5, 5), min_size=1, max_size=6),
       st.floats(-3, 3))
def test_eval_linear(a, b, x):
    P, Q = Poly(tuple(a)), Poly(tuple(b))
    lhs = poly_eval(P + Q, x)
    assert math.isclose(lhs, poly_eval(P, x) + poly_eval(Q, x), rel_tol=1e-12,
                        abs_tol=1e-12 * ((P + Q).magnitude(x) + P.magnitude(x) + Q.magnitude(x)))


@cfg
@given(st.integers(0, 9), st.floats(0, 5), st.floats(0, 5))
def test_duality_identity(p, m1, m2):
    n = p + 1 + (m1 + m2) / 2
    assert duality_check(p, m1, m2) <= 1e-14 / (2 * n * n)


@cfg
@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_casimir_orthogonal_invariance(dim, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dim, dim))
    B = rng.normal(size=(dim, dim))
    C = A @ B - B @ A
    sc = StructureConstants(zeta=0.3, a=-0.7, d=1.1, z=0.4)
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    K1 = casimir_operator(A, B, C, sc)
    K2 = casimir_operator(Q.T @ A @ Q, Q.T @ B @ Q, Q.T @ C @ Q, sc)
    assert np.allclose(Q.T @ K1 @ Q, K2, atol=1e-9 * (1 + np.abs(K1).max()))
