import numpy as np
import pytest
from scipy.stats import unitary_group

from bcwiener import (
    BCLaurentSeries,
    BCMatrix,
    Bicomplex,
    BoundaryPoint,
    ChannelSeries,
    FactorOptions,
    factor_uniqueness_unitary,
    invert,
    sharp_route_factorize,
    spectral_factorize,
)
from bcwiener.errors import (
    NoConvergence,
    NormalizationUnavailable,
    NotInvertibleOnBoundary,
    NotPositive,
    NotRelated,
    NotSharpSymmetric,
    ShapeMismatch,
)
from bcwiener.linalg import is_sharp_symmetric, sharp_conjugate
from bcwiener.series import merge_channels, split_channels
from bcwiener.spectral import factorize_channel, similarity_defect

from conftest import rand_bcmat, rand_cmat


def scalar(terms):
    return BCLaurentSeries.scalar(terms)


def outer_channel(rng, p, deg):
    """Causal ``g`` with ``g0`` dominating the tail: invertible on the closed disk."""
    tail = [rand_cmat(rng, p, p) for _ in range(deg)]
    mass = sum(np.linalg.norm(t, 2) for t in tail)
    L = rand_cmat(rng, p, p)
    g0 = L @ L.conj().T + (2 * mass + 1) * np.eye(p)
    return ChannelSeries(0, np.stack([g0] + tail))


def test_invert_geometric():
    res = invert(scalar({0: 1.0, 1: -0.5}), K=40, N=256)
    c1, c2 = split_channels(res.series)
    for c in (c1, c2):
        assert np.allclose(c.coeffs[40:, 0, 0], 0.5 ** np.arange(41), atol=1e-12)
        assert np.allclose(c.coeffs[:40], 0, atol=1e-12)
    assert res.residual <= 1e-9
    assert res.residual <= 2.0**-40 * 4


def test_invert_constant(rng):
    C = rand_bcmat(rng, 3, 3) + BCMatrix.identity(3).scale(Bicomplex(4, 0))
    res = invert(BCLaurentSeries.from_terms({0: C}), K=2, N=16)
    assert (res.series.coeff(0) @ C).allclose(BCMatrix.identity(3), atol=1e-12)
    assert res.series.coeff(1).allclose(BCMatrix.zeros(3, 3), atol=1e-14)


def test_invert_matrix_residual(rng):
    f = BCLaurentSeries.from_terms(
        {-1: rand_bcmat(rng, 3, 3, 0.2), 0: BCMatrix.identity(3).scale(Bicomplex(4, 1)), 2: rand_bcmat(rng, 3, 3, 0.2)}
    )
    res = invert(f, K=48, N=256)
    assert res.residual <= 1e-8
    pt = BoundaryPoint(0.3, 1.2)
    assert (f.eval(pt) @ res.series.eval(pt)).allclose(BCMatrix.identity(3), atol=1e-8)


def test_invert_singular_on_boundary():
    with pytest.raises(NotInvertibleOnBoundary) as info:
        invert(scalar({0: 1.0, 1: -1.0}))
    assert info.value.channel == 1
    assert info.value.theta == 0.0


def test_invert_zero_divisor_channel():
    # f = e1 is a zero divisor: its second channel vanishes identically
    f = BCLaurentSeries.from_channels(ChannelSeries.constant([[1.0]]), ChannelSeries.constant([[0.0]]))
    with pytest.raises(NotInvertibleOnBoundary) as info:
        invert(f, K=1, N=8)
    assert info.value.channel == 2


def test_invert_options():
    f = scalar({0: 1.0})
    with pytest.raises(ValueError):
        invert(f, N=100)
    with pytest.raises(ValueError):
        invert(f, K=10, N=16)
    with pytest.raises(ShapeMismatch):
        invert(BCLaurentSeries.from_terms({0: BCMatrix.zeros(1, 2)}))


def test_factorize_closed_form():
    res = spectral_factorize(scalar({-1: 2.0, 0: 5.0, 1: 2.0}))
    f_plus = res.series
    assert f_plus.n_min == 0
    assert f_plus.coeff(0).allclose(BCMatrix.from_complex([[2]]), atol=1e-10)
    assert f_plus.coeff(1).allclose(BCMatrix.from_complex([[1]]), atol=1e-10)
    assert res.residual <= 1e-10
    assert all(it <= 10 for it in res.iterations)


def test_factorize_identity():
    res = spectral_factorize(BCLaurentSeries.from_terms({0: BCMatrix.identity(2)}))
    assert res.series.allclose(BCLaurentSeries.from_terms({0: BCMatrix.identity(2)}), atol=1e-14)


def test_factorize_bicomplex_channels_differ():
    # channel 1: 5 + 2(z + 1/z) = |2 + z|^2 ; channel 2: 10 + 3(z + 1/z) = |3 + z|^2
    c1 = ChannelSeries.from_terms({-1: [[2]], 0: [[5]], 1: [[2]]})
    c2 = ChannelSeries.from_terms({-1: [[3]], 0: [[10]], 1: [[3]]})
    res = spectral_factorize(merge_channels(c1, c2))
    g1, g2 = split_channels(res.series)
    assert np.allclose(g1.coeffs[:2, 0, 0], [2, 1], atol=1e-10)
    assert np.allclose(g2.coeffs[:2, 0, 0], [3, 1], atol=1e-10)


@pytest.mark.parametrize("p,deg", [(1, 3), (2, 5), (3, 2), (4, 5)])
def test_construct_then_recover(rng, p, deg):
    g = merge_channels(outer_channel(rng, p, deg), outer_channel(rng, p, deg))
    f = g @ g.star()
    res = spectral_factorize(f, FactorOptions(K=deg))
    assert res.residual <= 1e-8 * max(1.0, f.norm())
    # causality is structural
    assert res.series.n_min == 0
    cert = factor_uniqueness_unitary(res.series, g, tol=1e-6)
    assert cert.residual <= 1e-6 * max(1.0, g.norm())
    for U in cert.unitaries:
        assert np.allclose(U.conj().T @ U, np.eye(p), atol=1e-8)


def test_factor_residual_scales_with_tolerance(rng):
    g = merge_channels(outer_channel(rng, 2, 3), outer_channel(rng, 2, 3))
    f = g @ g.star()
    opts = FactorOptions(newton_tol=1e-10)
    res = spectral_factorize(f, opts)
    assert res.residual <= opts.newton_tol * f.norm()


def test_pd0_normalization(rng):
    g = merge_channels(outer_channel(rng, 3, 2), outer_channel(rng, 3, 2))
    res = spectral_factorize(g @ g.star())
    for c in split_channels(res.series):
        a0 = c.coeff(0)
        assert np.allclose(a0, a0.conj().T, atol=1e-10)
        assert np.linalg.eigvalsh((a0 + a0.conj().T) / 2)[0] > 0


def test_at_one_normalization():
    # f(1) = I: (1 + z/2)(1 + 1/(2z)) / (9/4)
    f = scalar({-1: 0.5 / 2.25, 0: 1.25 / 2.25, 1: 0.5 / 2.25})
    res = spectral_factorize(f, FactorOptions(normalization="at_one"))
    assert res.series.eval(BoundaryPoint(0, 0)).allclose(BCMatrix.identity(1), atol=1e-10)
    with pytest.raises(NormalizationUnavailable):
        spectral_factorize(scalar({-1: 2.0, 0: 5.0, 1: 2.0}), FactorOptions(normalization="at_one"))


def test_not_positive():
    with pytest.raises(NotPositive) as info:
        spectral_factorize(scalar({-1: 2.0, 0: 1.0, 1: 2.0}))
    assert info.value.channel == 1
    assert np.isclose(info.value.theta, np.pi)
    # not Hermitian-valued
    with pytest.raises(NotPositive):
        spectral_factorize(scalar({0: 5.0, 1: 1.0}))


def test_no_convergence():
    with pytest.raises(NoConvergence) as info:
        spectral_factorize(scalar({-1: 2.0, 0: 4.1, 1: 2.0}), FactorOptions(max_iter=2))
    assert info.value.iterations == 2


def test_options_validation():
    with pytest.raises(ValueError):
        FactorOptions(N=100)
    with pytest.raises(ValueError):
        FactorOptions(normalization="unit")
    with pytest.raises(ValueError):
        FactorOptions(K=-1)


def test_uniqueness_recovers_unitary(rng):
    a = merge_channels(outer_channel(rng, 2, 2), outer_channel(rng, 2, 2))
    U1, U2 = unitary_group.rvs(2, random_state=1), unitary_group.rvs(2, random_state=2)
    a1, a2 = split_channels(a)
    b = merge_channels(a1.right_multiply(U1), a2.right_multiply(U2))
    cert = factor_uniqueness_unitary(a, b)
    assert np.allclose(cert.unitaries[0], U1, atol=1e-10)
    assert np.allclose(cert.unitaries[1], U2, atol=1e-10)
    same = factor_uniqueness_unitary(a, a)
    assert all(np.allclose(U, np.eye(2)) for U in same.unitaries)
    with pytest.raises(NotRelated):
        factor_uniqueness_unitary(a, merge_channels(a1.right_multiply(2 * U1), a2))


def test_sharp_route_closed_form():
    F = scalar({-1: 2.0, 0: 5.0, 1: 2.0}).embed()
    res = sharp_route_factorize(F)
    expected = scalar({0: 2.0, 1: 1.0}).embed()
    assert res.series.allclose(expected, atol=1e-10)
    assert res.info["sharp_defect"] <= 1e-8


def test_sharp_route_identity():
    F = ChannelSeries.constant(np.eye(2))
    assert sharp_route_factorize(F).series.allclose(F, atol=1e-14)


def test_sharp_route_rejects_non_sharp():
    F = ChannelSeries.constant(np.diag([1.0, 2.0]))
    with pytest.raises(NotSharpSymmetric):
        sharp_route_factorize(F)


def test_routes_agree(rng):
    g = merge_channels(outer_channel(rng, 2, 3), outer_channel(rng, 2, 3))
    f = g @ g.star()
    idem = spectral_factorize(f, FactorOptions(K=3)).series.embed()
    sharp = sharp_route_factorize(f.embed(), FactorOptions(K=3))
    assert all(is_sharp_symmetric(c, 1e-8) for c in sharp.series.coeffs)
    cert = factor_uniqueness_unitary(idem, sharp.series, tol=1e-6)
    assert cert.unitarity_defect <= 1e-8


def test_sharp_factor_of_complex_factorization_is_sharp(rng):
    # the plain complex factor of an embedded density is sharp-symmetric
    g = merge_channels(outer_channel(rng, 1, 2), outer_channel(rng, 1, 2))
    F = (g @ g.star()).embed()
    res = factorize_channel(F, FactorOptions(K=2), channel=0)
    for c in res.series.coeffs:
        assert np.linalg.norm(c - sharp_conjugate(c)) <= 1e-8 * max(1, np.linalg.norm(c))


def test_y_symmetry_preserved(rng):
    p = 3
    V = unitary_group.rvs(p, random_state=7)
    Y = V @ np.diag(np.exp(1j * np.array([0.3, 1.4, 2.9]))) @ V.conj().T
    # coefficients diagonal in the eigenbasis of Y commute with Y
    tail = [V @ np.diag(rand_cmat(rng, p, 1)[:, 0] * 0.3) @ V.conj().T for _ in range(3)]
    g0 = V @ np.diag([3.0, 4.0, 5.0]) @ V.conj().T
    g = ChannelSeries(0, np.stack([g0] + tail))
    f = g @ g.adjoint()
    assert similarity_defect(f, Y) <= 1e-12
    res = factorize_channel(f, FactorOptions(K=3))
    assert similarity_defect(res.series, Y) <= 1e-8


def test_parallel_matches_serial(monkeypatch, rng):
    g = merge_channels(outer_channel(rng, 2, 2), outer_channel(rng, 2, 2))
    f = g @ g.star()
    monkeypatch.setenv("BCW_THREADS", "1")
    serial = spectral_factorize(f).series
    monkeypatch.setenv("BCW_THREADS", "4")
    parallel = spectral_factorize(f).series
    assert np.array_equal(serial.Z1, parallel.Z1) and np.array_equal(serial.Z2, parallel.Z2)


def test_report_fields():
    rep = spectral_factorize(scalar({-1: 2.0, 0: 5.0, 1: 2.0})).report()
    assert set(rep) >= {"residual", "tail_mass", "N", "K", "iterations"}


def test_invertible_on_complex_circle_suffices(rng):
    # each channel sees every angle already on the circle s = 0, so the
    # smallest singular value over the whole (t, s) torus equals the one on it
    for _ in range(5):
        f = BCLaurentSeries.from_terms(
            {n: rand_bcmat(rng, 2, 2, 0.3) for n in (-2, -1, 1, 2)} | {0: BCMatrix.identity(2).scale(Bicomplex(3, 0.5))}
        )
        ts = 2 * np.pi * np.arange(64) / 64
        on_circle = min(
            min(np.linalg.svd(M, compute_uv=False)[-1] for M in f.eval(BoundaryPoint(t, 0)).channels()) for t in ts
        )
        torus = min(
            min(np.linalg.svd(M, compute_uv=False)[-1] for M in f.eval(BoundaryPoint(t, s)).channels())
            for t in ts
            for s in ts[::4]
        )
        assert on_circle > 0.1
        assert torus >= on_circle - 1e-12
        invert(f)
