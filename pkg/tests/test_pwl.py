import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmlab.bounds import min2_bound
from qmlab.corner import corner_constant
from qmlab.errors import DomainMismatch, DomainViolation, NotQuasiminimizer
from qmlab.pwl import (
    PiecewiseLinearFn,
    chord_energy,
    concave_envelope,
    energy,
    pointwise_min,
    quasimin_constant,
    sample_to_pwl,
)

# The running example: two one-corner functions whose minimum has energy 7/6.
U1 = PiecewiseLinearFn([0.0, 0.5, 1.0], [0.0, 1 / 3, 1.0])
U2 = PiecewiseLinearFn([0.0, 0.8, 1.0], [0.0, 2 / 3, 1.0])


def random_pwl(rng, n_seg=3, increasing=False):
    xs = sorted(rng.uniform(0.0, 1.0) for _ in range(n_seg - 1))
    xs = [0.0] + xs + [1.0]
    while any(b - a < 1e-3 for a, b in zip(xs, xs[1:])):
        xs = sorted(rng.uniform(0.0, 1.0) for _ in range(n_seg - 1))
        xs = [0.0] + xs + [1.0]
    if increasing:
        ys = [0.0]
        for _ in range(n_seg):
            ys.append(ys[-1] + rng.uniform(0.1, 2.0))
    else:
        ys = [rng.uniform(-1.0, 1.0) for _ in range(n_seg + 1)]
    return PiecewiseLinearFn(xs, ys)


class TestEnergy:
    def test_unit_slope(self):
        f = PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0])
        assert energy(f, 2.0, 0.0, 1.0) == 1.0

    def test_running_example_minimum(self):
        m = pointwise_min(U1, U2)
        assert energy(m, 2.0, 0.0, 1.0) == pytest.approx(7 / 6, rel=1e-14)

    def test_two_slope_hand_value(self):
        # slopes 3/4 then 3/2 with corner 2/3: (9/16)(2/3) + (9/4)(1/3) = 9/8
        f = PiecewiseLinearFn([0.0, 2 / 3, 1.0], [0.0, 0.5, 1.0])
        assert energy(f, 2.0, 0.0, 1.0) == pytest.approx(9 / 8, rel=1e-14)

    def test_domain_violation(self):
        with pytest.raises(DomainViolation):
            energy(U1, 2.0, -0.5, 0.5)

    def test_huge_p_log_domain(self):
        f = PiecewiseLinearFn([0.0, 0.5, 1.0], [0.0, 1e-4, 1.0])
        # steep slope ~2 at p=100 is ~1e30 scale; tiny slope underflows benignly
        e = energy(f, 100.0, 0.0, 1.0)
        assert math.isfinite(e) and e > 0

    @given(
        st.floats(0.05, 0.45),
        st.floats(0.55, 0.95),
        st.floats(1.2, 6.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_additivity(self, b, c, p):
        m = pointwise_min(U1, U2)
        whole = energy(m, p, 0.0, 1.0)
        split = energy(m, p, 0.0, b) + energy(m, p, b, c) + energy(m, p, c, 1.0)
        assert whole == pytest.approx(split, rel=1e-13)

    @given(st.integers(0, 10_000), st.floats(1.1, 8.0))
    @settings(max_examples=40, deadline=None)
    def test_jensen_bound(self, seed, p):
        f = random_pwl(random.Random(seed), increasing=True)
        e = energy(f, p, 0.0, 1.0)
        ce = chord_energy(f, p, 0.0, 1.0)
        assert e >= ce * (1.0 - 1e-12)
        if len(set(np.round(f.slopes, 12))) > 1:
            assert e > ce


class TestChordEnergy:
    def test_identity(self):
        assert chord_energy(PiecewiseLinearFn([0, 1], [0, 1]), 2.0, 0.0, 1.0) == 1.0

    def test_running_example_chord(self):
        m = pointwise_min(U1, U2)
        assert chord_energy(m, 2.0, 0.0, 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_flat_chord(self):
        f = PiecewiseLinearFn([0, 0.5, 1], [0.0, 1.0, 0.0])
        assert chord_energy(f, 2.0, 0.0, 1.0) == 0.0

    def test_decreasing_uses_absolute_difference(self):
        f = PiecewiseLinearFn([0, 1], [1.0, 0.0])
        assert chord_energy(f, 3.0, 0.0, 1.0) == pytest.approx(1.0, rel=1e-14)


class TestPointwiseMin:
    def test_idempotent(self):
        m = pointwise_min(U1, U1)
        assert np.array_equal(m.x, U1.x) and np.array_equal(m.y, U1.y)

    def test_running_example_crossings(self):
        # u1 = u2 exactly at 0, 2/3 and 1
        m = pointwise_min(U1, U2)
        assert any(abs(x - 2 / 3) < 1e-12 for x in m.x)
        assert m(2 / 3) == pytest.approx(5 / 9, rel=1e-12)
        for t in np.linspace(0, 1, 517):
            assert m(t) == pytest.approx(min(U1(t), U2(t)), abs=1e-13)

    def test_tent(self):
        f = PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0])
        g = PiecewiseLinearFn([0.0, 1.0], [1.0, 0.0])
        m = pointwise_min(f, g)
        assert any(abs(x - 0.5) < 1e-12 for x in m.x)
        assert m(0.25) == pytest.approx(0.25) and m(0.75) == pytest.approx(0.25)

    def test_domain_mismatch(self):
        g = PiecewiseLinearFn([0.0, 2.0], [0.0, 1.0])
        with pytest.raises(DomainMismatch):
            pointwise_min(U1, g)


class TestConcaveEnvelope:
    def test_convex_gives_chord(self):
        env = concave_envelope(U1, 0.0, 1.0)
        assert len(env.x) == 2
        assert env(0.5) == pytest.approx(0.5)

    def test_concave_is_fixed_point(self):
        f = PiecewiseLinearFn([0, 0.3, 1], [0.0, 0.6, 1.0])
        env = concave_envelope(f, 0.0, 1.0)
        assert np.allclose(env.x, f.x) and np.allclose(env.y, f.y)

    def test_running_example_envelope_is_identity_chord(self):
        m = pointwise_min(U1, U2)
        assert all(y <= x + 1e-12 for x, y in zip(m.x, m.y))  # below its chord
        env = concave_envelope(m, 0.0, 1.0)
        assert len(env.x) == 2 and env(0.37) == pytest.approx(0.37)

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_majorant_properties(self, seed):
        f = random_pwl(random.Random(seed), n_seg=4)
        env = concave_envelope(f, 0.0, 1.0)
        assert env(0.0) == pytest.approx(f(0.0), abs=1e-12)
        assert env(1.0) == pytest.approx(f(1.0), abs=1e-12)
        for t in np.linspace(0, 1, 101):
            assert env(t) >= f(t) - 1e-10
        slopes = env.slopes
        assert all(s1 >= s2 - 1e-10 for s1, s2 in zip(slopes, slopes[1:]))

    @given(st.integers(0, 10_000), st.floats(1.2, 5.0))
    @settings(max_examples=30, deadline=None)
    def test_least_energy_among_majorants(self, seed, p):
        rng = random.Random(seed)
        f = random_pwl(rng, n_seg=4)
        env = concave_envelope(f, 0.0, 1.0)
        bumps = [0.0] + [rng.uniform(0.0, 1.0) for _ in range(len(f.x) - 2)] + [0.0]
        g = PiecewiseLinearFn(f.x, [y + max(b, 0.0) for y, b in zip(f.y, bumps)])
        g_env_vals = np.maximum(g(np.asarray(f.x)), f.y)  # ensure a true majorant
        g = PiecewiseLinearFn(f.x, g_env_vals)
        assert energy(env, p, 0.0, 1.0) <= energy(g, p, 0.0, 1.0) + 1e-10


class TestQuasiminConstant:
    def test_linear_is_one(self):
        f = PiecewiseLinearFn([0, 0.4, 1], [0.0, 0.4, 1.0])
        # slope of the second piece is 1 - 1ulp in doubles, hence the slack
        assert quasimin_constant(f, 2.0, "free") == pytest.approx(1.0, rel=1e-12)
        assert quasimin_constant(f, 2.0, "super") == pytest.approx(1.0, rel=1e-12)
        assert quasimin_constant(f, 2.0, "free") >= 1.0

    def test_running_example_corner_constant(self):
        # one-corner with quotient 2 at p = 2: optimal constant 9/8
        assert quasimin_constant(U1, 2.0, "super") == pytest.approx(9 / 8, rel=1e-8)
        assert quasimin_constant(U2, 2.0, "super") == pytest.approx(9 / 8, rel=1e-8)

    def test_zigzag_matches_one_corner(self):
        zz = PiecewiseLinearFn(
            [0.0, 0.2, 0.5, 0.8, 1.0], [0.0, 0.2, 0.8, 1.1, 1.5]
        )  # slopes 1,2,1,2
        q = quasimin_constant(zz, 2.0, "free")
        assert q == pytest.approx(corner_constant(2.0, 2.0).Q, rel=1e-8)
        assert q == pytest.approx(9 / 8, rel=1e-8)

    def test_not_quasiminimizer_v_shape(self):
        v = PiecewiseLinearFn([0.0, 0.5, 1.0], [0.5, 0.0, 0.5])
        with pytest.raises(NotQuasiminimizer):
            quasimin_constant(v, 2.0, "super")
        with pytest.raises(NotQuasiminimizer):
            quasimin_constant(v, 2.0, "free")

    @given(st.integers(0, 10_000))
    @settings(max_examples=10, deadline=None)
    def test_affine_invariance(self, seed):
        rng = random.Random(seed)
        f = random_pwl(rng, n_seg=3, increasing=True)
        p = rng.uniform(1.3, 4.0)
        lam, c = rng.uniform(0.3, 3.0), rng.uniform(-2.0, 2.0)
        mu, d = rng.uniform(0.3, 3.0), rng.uniform(-2.0, 2.0)
        g = PiecewiseLinearFn(lam * f.x + c, mu * f.y + d)
        q_f = quasimin_constant(f, p, "super")
        q_g = quasimin_constant(g, p, "super")
        assert q_f == pytest.approx(q_g, rel=1e-7)

    def test_convex_modes_agree(self):
        rng = random.Random(7)
        for _ in range(5):
            n = rng.randint(2, 4)
            slopes = sorted(rng.uniform(0.2, 3.0) for _ in range(n))
            xs = [0.0] + sorted(rng.uniform(0.05, 0.95) for _ in range(n - 1)) + [1.0]
            ys = [0.0]
            for s, a, b in zip(slopes, xs, xs[1:]):
                ys.append(ys[-1] + s * (b - a))
            f = PiecewiseLinearFn(xs, ys)
            assert quasimin_constant(f, 2.5, "free") == pytest.approx(
                quasimin_constant(f, 2.5, "super"), rel=1e-10
            )

    def test_min_dominated_by_two_function_bound(self):
        rng = random.Random(99)
        for _ in range(6):
            fs = []
            for _ in range(2):
                n = rng.randint(2, 3)
                slopes = sorted(rng.uniform(0.3, 2.5) for _ in range(n))
                xs = [0.0] + sorted(rng.uniform(0.1, 0.9) for _ in range(n - 1)) + [1.0]
                ys = [0.0]
                for s, a, b in zip(slopes, xs, xs[1:]):
                    ys.append(ys[-1] + s * (b - a))
                fs.append(PiecewiseLinearFn(xs, ys))
            p = rng.uniform(1.5, 3.0)
            q1 = quasimin_constant(fs[0], p, "super")
            q2 = quasimin_constant(fs[1], p, "super")
            qm = quasimin_constant(pointwise_min(fs[0], fs[1]), p, "super")
            assert qm <= min2_bound(q1, q2) * (1.0 + 1e-9)


class TestSampleToPwl:
    def test_identity(self):
        f = sample_to_pwl(1.0, "increasing", 10)
        assert len(f.x) == 11
        assert np.allclose(f.x, f.y)

    def test_quadratic_energy_limit(self):
        f = sample_to_pwl(2.0, "increasing", 20000)
        assert energy(f, 2.0, 0.0, 1.0) == pytest.approx(4 / 3, rel=1e-6)

    def test_reflected_three_quarters(self):
        f = sample_to_pwl(0.75, "reflected", 20000)
        assert energy(f, 2.0, 0.0, 1.0) == pytest.approx(9 / 8, rel=1e-6)

    def test_invalid_exponent(self):
        from qmlab.errors import InvalidExponent

        with pytest.raises(InvalidExponent):
            sample_to_pwl(-0.2, "increasing", 10)
