import math

import numpy as np
import pytest

from apparent_size.errors import ConvergenceError, DomainError
from apparent_size.specfun import (
    QuadratureSpec,
    defining_ellip_k,
    defining_ellip_pi,
    dilog,
    ellip_k,
    ellip_pi,
    integrate,
    integrate2d,
    integrate_with_error,
)


def test_ellip_k_known_values():
    assert ellip_k(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert ellip_k(0.5) == pytest.approx(1.8540746773013719, rel=1e-14)


def test_ellip_k_matches_defining_integral():
    for m in (0.1, 0.5, 0.9, 0.999):
        assert ellip_k(m) == pytest.approx(defining_ellip_k(m), rel=1e-11)


def test_ellip_pi_reduces_to_k_and_matches_integral():
    assert ellip_pi(0.0, 0.3) == pytest.approx(ellip_k(0.3), rel=1e-14)
    for n, m in ((0.5, 0.3), (-2.0, 0.7), (0.9, 0.1)):
        assert ellip_pi(n, m) == pytest.approx(defining_ellip_pi(n, m), rel=1e-11)


def test_elliptic_domain_errors():
    with pytest.raises(DomainError):
        ellip_k(1.0)
    with pytest.raises(DomainError):
        ellip_k(-0.1)
    with pytest.raises(DomainError):
        ellip_pi(1.0, 0.5)


def test_dilog_values():
    assert dilog(0.0) == 0.0
    assert dilog(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert dilog(-1.0) == pytest.approx(-(math.pi**2) / 12, rel=1e-15)
    assert dilog(0.5) == pytest.approx(math.pi**2 / 12 - math.log(2.0) ** 2 / 2, rel=1e-15)
    with pytest.raises(DomainError):
        dilog(1.5)


def test_integrate_endpoint_singularity():
    assert integrate(lambda t: 1.0 / math.sqrt(t), 0.0, 1.0) == pytest.approx(2.0, abs=1e-10)


def test_integrate_splits_at_declared_points():
    value, error = integrate_with_error(lambda t: abs(t - 0.3), 0.0, 1.0, points=[0.3, 7.0])
    assert value == pytest.approx(0.29, abs=1e-14)
    assert error < 1e-12


def test_integrate_rejects_nan_and_bad_limits():
    with pytest.raises(ConvergenceError):
        integrate(lambda t: math.nan, 0.0, 1.0)
    with pytest.raises(DomainError):
        integrate(lambda t: t, 1.0, 0.0)


def test_integrate_divergent_raises():
    with pytest.raises(ConvergenceError):
        integrate(lambda t: 1.0 / t, 0.0, 1.0, QuadratureSpec(max_subdivisions=50))


def test_integrate2d_product():
    assert integrate2d(lambda x, y: x * y, (0.0, 1.0), (0.0, 2.0)) == pytest.approx(1.0, abs=1e-12)


def test_quadrature_spec_from_config():
    spec = QuadratureSpec.from_config({"quadrature": {"abs_tol": 1e-8, "max_subdivisions": 200}})
    assert spec.abs_tol == 1e-8
    assert spec.rel_tol == 1e-12
    assert spec.max_subdivisions == 200
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)


def test_ellip_pi_matches_integral_on_random_arguments():
    rng = np.random.default_rng(20240601)
    for n, m in zip(rng.uniform(-4.0, 0.95, 1000), rng.uniform(0.0, 0.98, 1000)):
        assert ellip_pi(n, m) == pytest.approx(defining_ellip_pi(n, m), rel=1e-10)


def test_ellip_k_is_strictly_increasing():
    values = [ellip_k(m) for m in np.linspace(0.0, 0.999, 500)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))
    assert min(values) == pytest.approx(math.pi / 2, rel=1e-15)


def test_dilog_reflection():
    rng = np.random.default_rng(7)
    for x in rng.uniform(1e-6, 1.0 - 1e-6, 100):
        expected = math.pi**2 / 6 - math.log(x) * math.log1p(-x)
        assert dilog(x) + dilog(1.0 - x) == pytest.approx(expected, abs=1e-12)


def test_dilog_keyhole_second_moment_difference():
    assert dilog(0.25) - dilog(-0.25) == pytest.approx(0.5035529367689960607402666, abs=1e-15)


def test_integrate_is_bitwise_deterministic():
    def f(t):
        return t * math.atan(4.0 / 3.0 * t) ** 2 / math.sqrt(1.0 - t * t)

    first = integrate_with_error(f, 0.0, 1.0)
    second = integrate_with_error(f, 0.0, 1.0)
    assert first == second
    assert first[0] == pytest.approx(0.6472381347206737507335484, abs=1e-9)
