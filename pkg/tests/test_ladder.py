import math

import numpy as np
import pytest

from zlad.config import EULER_GAMMA, LOG_2PI
from zlad.errors import RangeError, TableFormatError
from zlad.ladder import (build_table, complementarity_report, forward_iterate,
                         integrate_z_squared, iteration_chain, load_table, phi1, phi1_inverse,
                         phi1_prime, reverse_iterate, save_table, second_moment)
from zlad.primes import pi_asymptotic, prime_pi
from zlad.zeta import z_array

INT_0_100 = 295.63509905471913037  # mpmath quadrature, 30 digits


def D(t):
    return math.log(t) + EULER_GAMMA - LOG_2PI


# ---------------------------------------------------------- quadrature ----

def test_empty_interval():
    assert integrate_z_squared(100.0, 100.0) == 0.0


def test_oracle_0_100():
    assert integrate_z_squared(0.0, 100.0, 1e-10) == pytest.approx(INT_0_100, abs=1e-6)


def test_second_moment_asymptotic():
    T = 1e4
    ref = T * math.log(T / (2 * math.pi)) + (2 * EULER_GAMMA - 1) * T
    assert abs(integrate_z_squared(0.0, T) / ref - 1) <= 0.01


def test_additivity():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b, c = np.sort(rng.uniform(100, 3000, 3))
        tol = 1e-8
        whole = integrate_z_squared(a, c, tol)
        parts = integrate_z_squared(a, b, tol) + integrate_z_squared(b, c, tol)
        assert abs(whole - parts) <= 3 * tol + 1e-12 * whole


def test_bad_interval():
    with pytest.raises(ValueError):
        integrate_z_squared(5.0, 1.0)


# ---------------------------------------------------------------- table ----

def test_table_invariants(table):
    assert np.all(np.diff(table.I) >= 0)
    big = table.t >= 1e3
    assert np.all(table.phi1[big] < table.t[big])
    expected = (z_array(table.t[::997]) ** 2 - table.phi1[::997] / table.t[::997]) \
        / (np.log(table.t[::997]) + EULER_GAMMA - LOG_2PI)
    assert np.max(np.abs(table.phi1_prime[::997] - expected)) <= 1e-8


def test_coarse_monotonicity_at_stride_8(table):
    # phi_1 dips over stretches of a few units where Z^2 stays small, so the
    # unit-stride version of this property does not hold. Eight units does,
    # from every starting row.
    stride = int(round(8.0 / table.grid_step))
    for offset in range(stride):
        assert np.all(np.diff(table.phi1[offset::stride]) > 0)


def test_unit_stride_dips_are_real():
    # int_{10010}^{10014} Z^2 = 3.5311 (mpmath), below 4 * phi_1/t, so phi_1 falls.
    I = integrate_z_squared(10010.0, 10014.0, 1e-10)
    assert I == pytest.approx(3.5311, abs=5e-4)


def test_adjacent_rows_match_quadrature(table):
    i = table.index_of(50000.0)
    assert table.I[i + 1] - table.I[i] == pytest.approx(
        integrate_z_squared(table.t[i], table.t[i + 1], 1e-9), abs=2e-8 + 1e-12 * table.I[i])


def test_table_arrays_read_only(table):
    with pytest.raises(ValueError):
        table.phi1[0] = 0.0


@pytest.mark.xfail(strict=True, reason="ratio is 1.124 at 1e5; the T/ln T proxy carries "
                   "a (ln T + c - ln 2pi)/ln T excess of about 14%")
def test_complementarity_at_1e5(table):
    T = 1e5
    ratio = (T - phi1(table, T)) * math.log(T) / ((1 - EULER_GAMMA) * T)
    assert 0.9 <= ratio <= 1.1


def test_complementarity_against_log_factor(table):
    # T - phi_1 = ((1 - c) T - E(T) + c0) / D(T), so normalising by D instead
    # of ln T leaves only the second-moment remainder E(T).
    T = 1e5
    ratio = (T - phi1(table, T)) * D(T) / ((1 - EULER_GAMMA) * T)
    assert 0.9 <= ratio <= 1.1


def test_c0_sensitivity(small_table):
    shifted = build_table(1e3, c0=10.0)
    T = 1e3
    assert phi1(small_table, T) - phi1(shifted, T) == pytest.approx(10 / D(T), abs=1e-9)


def test_cache_roundtrip(tmp_path, small_table):
    path = tmp_path / "t.csv"
    save_table(small_table, path)
    text = path.read_text()
    assert text.startswith("# ladder-table v1 grid_step=0.25 t_floor=100 t_max=1000 c0=0 "
                           "rho=0.25 order=16\nt,I,phi1,phi1_prime\n")
    assert "\r" not in text
    back = load_table(path, grid_step=0.25, t_max=1e3, c0=0.0)
    assert np.array_equal(back.t, small_table.t)
    assert np.allclose(back.I, small_table.I, rtol=1e-14)
    assert back.digest == small_table.digest


def test_rebuild_is_bit_identical(small_table):
    assert build_table(1e3).to_csv() == small_table.to_csv()


def test_loader_rejects_mismatch(tmp_path, small_table):
    path = tmp_path / "t.csv"
    save_table(small_table, path)
    with pytest.raises(TableFormatError):
        load_table(path, c0=1.0)
    with pytest.raises(TableFormatError):
        load_table(path, t_max=2e3)
    path.write_text(path.read_text().replace("ladder-table v1", "ladder-table v2", 1))
    with pytest.raises(TableFormatError):
        load_table(path)


@pytest.mark.parametrize("t_max,step", [(500.0, 0.25), (2e3, 2.0), (2e3, 0.01)])
def test_build_validation(t_max, step):
    with pytest.raises(ValueError):
        build_table(t_max, step)


# --------------------------------------------------------------- phi_1 ----

def test_phi1_exact_on_grid(table):
    i = table.index_of(1e5)
    assert phi1(table, 1e5) == table.phi1[i]
    assert phi1_prime(table, 1e5) == table.phi1_prime[i]


def _increments(table):
    rng = np.random.default_rng(3)
    t = rng.uniform(1e3, 1.9e5, 200)
    return t, np.asarray(phi1(table, t + 0.1)) - np.asarray(phi1(table, t))


@pytest.mark.xfail(strict=True, reason="0.1 * max Z^2 / D reaches 0.5 near 1e5, above 0.15")
def test_phi1_off_grid_increment_literal(table):
    _, inc = _increments(table)
    assert np.all((inc >= -0.05) & (inc <= 0.15))


def test_phi1_off_grid_increment(table):
    t, inc = _increments(table)
    assert np.all(inc >= -0.05)
    s = np.linspace(0.0, 0.1, 41)
    peak = np.max(z_array(t[:, None] + s[None, :]) ** 2, axis=1)
    assert np.all(inc <= 0.1 * peak / np.array([D(x) for x in t]))


def test_phi1_off_grid_matches_direct_integral(table):
    t = 12345.678
    I = integrate_z_squared(0.0, t, 1e-9)
    assert phi1(table, t) == pytest.approx(I / D(t), rel=1e-10)


def test_phi1_plus_complement(table):
    T = 1e5
    assert abs(phi1(table, T) + (1 - EULER_GAMMA) * pi_asymptotic(T) - T) <= 0.1 * T


def test_phi1_range_error(table):
    with pytest.raises(RangeError):
        phi1(table, 50.0)
    with pytest.raises(RangeError):
        phi1(table, 3e5)


def test_phi1_prime_at_zero(table, zero_heights):
    t0 = zero_heights[-1]
    expected = -(phi1(table, t0) / t0) / D(t0)
    assert phi1_prime(table, t0) == pytest.approx(expected, abs=1e-12)
    assert phi1_prime(table, t0) < 0


def _mean_phi1_prime(table, a, length):
    # exact average: (phi_1(a + length) - phi_1(a)) / length
    return (phi1(table, a + length) - phi1(table, a)) / length


@pytest.mark.xfail(strict=True, reason="local Z^2 mean over 100 units is 10.9% high at 1e5")
def test_phi1_prime_mean_literal(table):
    mean = _mean_phi1_prime(table, 1e5, 100.0)
    assert abs(mean / (1 - (1 - EULER_GAMMA) / math.log(1e5)) - 1) <= 0.1


def test_phi1_prime_mean_long_window(table):
    mean = _mean_phi1_prime(table, 1e5, 5000.0)
    assert abs(mean / (1 - (1 - EULER_GAMMA) / math.log(1e5)) - 1) <= 0.1


def test_phi1_prime_finite_difference(table):
    t, h = 1e4 + 0.3, 0.01
    fd = (phi1(table, t + h) - phi1(table, t - h)) / (2 * h)
    assert abs(fd - phi1_prime(table, t)) <= 1e-2


# ------------------------------------------------------------- inverse ----

def test_inverse_contract(table):
    rng = np.random.default_rng(11)
    lo, hi = table.phi1_range
    for y in rng.uniform(lo, hi, 100):
        t = phi1_inverse(table, y)
        assert abs(phi1(table, t) - y) <= 1e-6 * y


def test_inverse_returns_smallest_crossing(table):
    # With y at a grid record value, no earlier grid row reaches y.
    i = table.index_of(1e5)
    y = table.phi1[i]
    t = phi1_inverse(table, y)
    assert abs(t - 1e5) <= 0.05
    assert np.all(table.phi1[table.t < t - table.grid_step] < y)


def test_inverse_range(table):
    with pytest.raises(RangeError):
        phi1_inverse(table, table.phi1_range[1] + 1.0)


# ----------------------------------------------------------- iteration ----

def test_reverse_iterate(table):
    assert reverse_iterate(table, 1e5, 0) == [1e5]
    chain = reverse_iterate(table, 1e5, 2)
    assert chain[0] < chain[1] < chain[2]
    for r in (1, 2):
        assert abs(phi1(table, chain[r]) - chain[r - 1]) <= 1e-6 * chain[r - 1]


def test_first_reverse_gap(table):
    gap = reverse_iterate(table, 1e5, 1)[1] - 1e5
    asym = (1 - EULER_GAMMA) * 1e5 / math.log(1e5)
    assert gap / asym == pytest.approx(1.165, abs=0.005)


@pytest.mark.xfail(strict=True, reason="T^1 - T = 4278, 16.5% above (1 - c) T/ln T")
def test_first_reverse_gap_literal(table):
    gap = reverse_iterate(table, 1e5, 1)[1] - 1e5
    assert abs(gap / 3672 - 1) <= 0.15


def test_forward_roundtrip(table):
    assert forward_iterate(table, 1e5, 0) == 1e5
    top = reverse_iterate(table, 1e5, 2)[2]
    assert abs(forward_iterate(table, top, 2) - 1e5) <= 0.1


def test_reverse_range_message(table):
    with pytest.raises(RangeError, match="rebuild with t_max >="):
        reverse_iterate(table, 1.9e5, 2)


def test_reverse_k_bound(table):
    with pytest.raises(ValueError):
        reverse_iterate(table, 1e4, 4)


def test_iteration_chain(table):
    ch = iteration_chain(table, 1e4, 0.5, 2)
    assert ch.lower[0] == 1e4 and ch.upper[0] == 1e4 + 0.5
    assert all(a < b for a, b in zip(ch.lower, ch.upper))


# -------------------------------------------------------------- primes ----

def test_prime_pi():
    assert prime_pi(10) == 4
    assert prime_pi(1) == 0
    assert prime_pi(2) == 1
    assert prime_pi(10 ** 6) == 78498


def test_prime_pi_cap():
    with pytest.raises(ValueError):
        prime_pi(10 ** 9)


def test_pi_asymptotic():
    assert pi_asymptotic(1e6) == pytest.approx(72382.41, abs=0.01)


def test_complementarity_report_variants(table):
    (row,) = complementarity_report(table, [1e5])
    assert row.ratio_exact_pi / row.ratio == pytest.approx(pi_asymptotic(1e5) / prime_pi(10 ** 5))
    assert abs(row.ratio_exact_pi / row.ratio - 0.92) <= 0.02
