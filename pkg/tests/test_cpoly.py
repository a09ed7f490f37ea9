import numpy as np
import pytest

from skewbraid.cpoly import (
    CPoly,
    eval_with_derivative,
    interpolate_at_roots_of_unity,
    resultant_product,
    roots,
    sylvester_resultant,
)
from skewbraid.errors import DegreeZero, LengthMismatch, NonConvergence


def match_multisets(found, expected, tol):
    """Greedy nearest matching; returns the worst matched distance."""
    pool = list(found)
    worst = 0.0
    for e in expected:
        dist = [abs(f - e) for f in pool]
        i = int(np.argmin(dist))
        worst = max(worst, dist[i])
        pool.pop(i)
    return worst


class TestEval:
    @pytest.mark.parametrize(
        "coeffs, x, expected",
        [
            ([-8, 0, 0, 1], 2, (0, 12)),
            ([5], 3.7 - 1j, (5, 0)),
            ([1, 0, 1], 1j, (0, 2j)),
        ],
    )
    def test_examples(self, coeffs, x, expected):
        v, dv = eval_with_derivative(CPoly(coeffs), x)
        assert abs(v - expected[0]) < 1e-12
        assert abs(dv - expected[1]) < 1e-12

    def test_derivative_matches_finite_difference(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            deg = int(rng.integers(1, 31))
            c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            p = CPoly(c)
            x = complex(*rng.uniform(-1.4, 1.4, size=2))
            h = 1e-6
            fd = (p(x + h) - p(x - h)) / (2 * h)
            _, dv = eval_with_derivative(p, x)
            assert abs(dv - fd) <= 1e-6 * max(1.0, abs(dv))

    def test_degree_strips_exact_zeros(self):
        assert CPoly([1, 2, 0, 0]).degree == 1
        assert CPoly([0, 0]).is_zero()


class TestRoots:
    def test_cube_roots_of_eight(self):
        found = roots(CPoly([-8, 0, 0, 1]), tol=1e-10)
        expected = [2 * np.exp(2j * np.pi * k / 3) for k in range(3)]
        assert match_multisets(found, expected, 1e-10) < 1e-9

    def test_imaginary_pair(self):
        found = roots(CPoly([16, 0, 1]))
        assert match_multisets(found, [4j, -4j], 1e-12) < 1e-10

    def test_double_root(self):
        # (w-1)^2 (w+2) = w^3 - 3w + 2
        p = CPoly([2, -3, 0, 1])
        tol = 1e-12
        found = roots(p, tol=tol)
        assert len(found) == 3
        assert match_multisets(found, [1, 1, -2], tol) < 10 * tol**0.5
        for r in found:
            assert abs(p(r)) <= 10 * tol * max(1.0, p.norm1())

    def test_constant_raises(self):
        with pytest.raises(DegreeZero):
            roots(CPoly([3.0]))

    def test_nonconvergence_carries_best(self):
        with pytest.raises(NonConvergence) as exc:
            roots(CPoly([2, -3, 0, 1]), tol=1e-30, max_iter=3)
        assert len(exc.value.best) == 3

    def test_random_round_trip(self):
        rng = np.random.default_rng(2024)
        for trial in range(500):
            deg = int(rng.integers(1, 13))
            rts = rng.normal(size=deg) + 1j * rng.normal(size=deg)
            p = CPoly.from_roots(rts)
            tol = 1e-12
            found = roots(p, tol=tol)
            assert match_multisets(found, rts, tol) < tol**0.5, trial


class TestResultants:
    def test_product_example_cubic(self):
        f = CPoly([0, 0, 3])
        g = CPoly([-8, 0, 0, 1])
        assert abs(resultant_product(f, g) - 1728) < 1e-9
        assert abs(resultant_product(f, g) / 3**3 - 64) < 1e-9

    @pytest.mark.parametrize("a, b", [(1.5, -2.0), (1j, 3 + 1j)])
    def test_linear(self, a, b):
        f, g = CPoly([-a, 1]), CPoly([-b, 1])
        assert abs(resultant_product(f, g) - (a - b)) < 1e-12
        assert abs(sylvester_resultant(f, g) - (a - b)) < 1e-12

    @pytest.mark.parametrize("c", [0.7, 2 - 1j, 3j])
    def test_sum_of_squares_against_derivative(self, c):
        f, g = CPoly([c * c, 0, 1]), CPoly([0, 2])
        assert abs(resultant_product(f, g) - 4 * c * c) < 1e-10
        assert abs(sylvester_resultant(f, g) - 4 * c * c) < 1e-10

    def test_shared_root_gives_zero(self):
        assert sylvester_resultant(CPoly([1, 0, 1]), CPoly([1, 0, 1])) == 0
        rng = np.random.default_rng(5)
        for _ in range(50):
            common = complex(*rng.normal(size=2))
            r1 = list(rng.normal(size=3) + 1j * rng.normal(size=3)) + [common]
            r2 = list(rng.normal(size=2) + 1j * rng.normal(size=2)) + [common]
            f, g = CPoly.from_roots(r1), CPoly.from_roots(r2)
            scale = np.prod([abs(x - y) + 1 for x in r1 for y in r2])
            assert abs(sylvester_resultant(f, g)) < 1e-10 * scale

    def test_distinct_roots_nonzero(self):
        f = CPoly.from_roots([1, 2, 3])
        g = CPoly.from_roots([-1, -2])
        expected = np.prod([x - y for x in [1, 2, 3] for y in [-1, -2]])
        assert abs(sylvester_resultant(f, g) - expected) < 1e-9

    def test_sylvester_agrees_with_product(self):
        rng = np.random.default_rng(77)
        for _ in range(200):
            m, n = rng.integers(1, 9, size=2)
            f = CPoly(rng.normal(size=m + 1) + 1j * rng.normal(size=m + 1))
            g = CPoly(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
            r1, r2 = resultant_product(f, g), sylvester_resultant(f, g)
            assert abs(r1 - r2) <= 1e-8 * max(abs(r1), abs(r2))

    def test_multiplicative_in_g(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            f = CPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
            g1 = CPoly(rng.normal(size=3) + 1j * rng.normal(size=3))
            g2 = CPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
            lhs = resultant_product(f, g1 * g2)
            rhs = resultant_product(f, g1) * resultant_product(f, g2)
            assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


class TestInterpolation:
    @staticmethod
    def samples(p, N):
        return p(np.exp(2j * np.pi * np.arange(N) / N))

    def test_monomial_square(self):
        p = interpolate_at_roots_of_unity(self.samples(CPoly([0, 0, 1]), 4), 4)
        padded = np.zeros(4, dtype=complex)
        padded[: p.degree + 1] = p.coeffs
        np.testing.assert_allclose(padded, [0, 0, 1, 0], atol=1e-14)

    def test_constant(self):
        p = interpolate_at_roots_of_unity([2.5 - 1j] * 8, 8)
        assert p.degree == 0
        assert abs(p.coeffs[0] - (2.5 - 1j)) < 1e-14

    def test_degree_six(self):
        p = interpolate_at_roots_of_unity(self.samples(CPoly.monomial(6, 64), 8), 8)
        assert abs(p.coeffs[6] - 64) < 1e-9
        others = np.delete(p.coeffs, 6)
        assert np.all(np.abs(others) < 1e-7)

    def test_length_checks(self):
        with pytest.raises(LengthMismatch):
            interpolate_at_roots_of_unity([1, 2, 3], 4)
        with pytest.raises(LengthMismatch):
            interpolate_at_roots_of_unity([1, 2, 3], 3)

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            N = 2 ** int(rng.integers(1, 7))
            deg = int(rng.integers(0, N))
            c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            p = interpolate_at_roots_of_unity(self.samples(CPoly(c), N), N)
            np.testing.assert_allclose(p.coeffs, c, rtol=0, atol=1e-9 * np.abs(c).max())
