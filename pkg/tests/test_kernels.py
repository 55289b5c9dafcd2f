import math

import numpy as np
import pytest

from conftest import naive_circular_convolve
from rdrestore.grid import DomainError
from rdrestore.kernels import (Kernel, adjoint_convolve, average_kernel, convolve, delta_kernel,
                               disk_kernel, kernel_spectrum, make_kernel, motion_kernel,
                               pad_kernel, write_kernel_csv)

REFERENCE_KERNELS = {
    "motion": lambda: motion_kernel(20, math.pi / 3),
    "disk": lambda: disk_kernel(3),
    "average": lambda: average_kernel(5),
}


def test_average_kernel():
    k = average_kernel(5)
    assert k.taps.shape == (5, 5)
    np.testing.assert_allclose(k.taps, 0.04)
    assert k.origin == (2, 2)
    np.testing.assert_array_equal(average_kernel(1).taps, [[1.0]])
    assert abs(average_kernel(3).taps.sum() - 1) < 1e-15
    for bad in (0, 4, -3, 2.5):
        with pytest.raises(DomainError):
            average_kernel(bad)


def test_disk_radius_three_by_enumeration():
    inside = [(i, j) for i in range(-3, 4) for j in range(-3, 4) if i * i + j * j <= 9]
    k = disk_kernel(3)
    assert k.taps.shape == (7, 7)
    assert np.count_nonzero(k.taps) == len(inside) == 29
    for i, j in inside:
        assert k.taps[3 + i, 3 + j] == pytest.approx(1 / 29, abs=1e-15)


def test_disk_small_and_invalid():
    k = disk_kernel(0.5)
    assert np.count_nonzero(k.taps) == 1
    assert k.taps[k.origin] == 1.0
    for r in (0.5, 1.7, 3.0, 4.2):
        assert abs(disk_kernel(r).taps.sum() - 1) <= 1e-12
    with pytest.raises(DomainError):
        disk_kernel(0)


def test_motion_length_one_is_delta():
    for ang in (0.0, 0.3, math.pi / 4, math.pi / 3, 2.0):
        k = motion_kernel(1, ang)
        assert k.taps.shape == (1, 1) and k.taps[0, 0] == 1.0


def test_motion_horizontal_line():
    k = motion_kernel(5, 0.0)
    expected = np.zeros((5, 5))
    expected[2, :] = 0.2
    np.testing.assert_allclose(k.taps, expected, atol=1e-15)


def test_motion_vertical_line():
    k = motion_kernel(5, math.pi / 2)
    expected = np.zeros((5, 5))
    expected[:, 2] = 0.2
    np.testing.assert_allclose(k.taps, expected, atol=1e-15)


def test_motion_reference_kernel():
    k = motion_kernel(20, math.pi / 3)
    assert k.taps.shape[0] <= 21 and k.taps.shape[1] <= 21
    assert abs(k.taps.sum() - 1) <= 1e-12
    assert np.all(k.taps >= 0)
    # mass lies along the rising diagonal: up-right from the origin
    r0, c0 = k.origin
    assert k.taps[r0 - 8, c0 + 5] > 0 or k.taps[r0 - 8, c0 + 4] > 0
    assert k.taps[r0 + 8, c0 + 5] == 0
    with pytest.raises(DomainError):
        motion_kernel(0.5, 0.0)


def test_kernel_validation():
    with pytest.raises(DomainError):
        Kernel(np.ones((2, 2)), (0, 0))  # not normalized
    with pytest.raises(DomainError):
        Kernel(np.ones((1, 1)), (1, 0))
    with pytest.raises(DomainError):
        make_kernel({"type": "gauss"})
    with pytest.raises(DomainError):
        make_kernel({"type": "disk", "n": 3})
    assert make_kernel({"type": "motion", "length": 5, "angle": 0.0}).taps.shape == (5, 5)


def test_spectrum_basics():
    ks = kernel_spectrum(delta_kernel(), 8, 6)
    np.testing.assert_allclose(ks.spectrum, np.ones((6, 8)))
    for make in REFERENCE_KERNELS.values():
        ks = kernel_spectrum(make(), 32, 32)
        assert abs(ks.spectrum[0, 0] - 1) <= 1e-12
        np.testing.assert_array_equal(ks.conj_spectrum, np.conj(ks.spectrum))
    with pytest.raises(DomainError):
        kernel_spectrum(average_kernel(5), 4, 8)


def test_spectrum_matches_symbol_sum():
    k = average_kernel(3)
    W = H = 8
    ks = kernel_spectrum(k, W, H)
    for q in range(H):
        for p in range(W):
            w1, w2 = 2 * math.pi * p / W, 2 * math.pi * q / H
            sym = sum(k.taps[r, c] * complex(math.cos(w1 * (c - 1) + w2 * (r - 1)),
                                             -math.sin(w1 * (c - 1) + w2 * (r - 1)))
                      for r in range(3) for c in range(3))
            assert abs(ks.spectrum[q, p] - sym) < 1e-14


def test_pad_places_origin_at_zero():
    k = Kernel(np.array([[0.0, 0.25, 0.0], [0.0, 0.5, 0.25], [0.0, 0.0, 0.0]]), (1, 1))
    pad = pad_kernel(k, (4, 4))
    assert pad[0, 0] == 0.5 and pad[-1, 0] == 0.25 and pad[0, 1] == 0.25


def test_convolve_identities(rng):
    u = rng.normal(size=(8, 8))
    np.testing.assert_allclose(convolve(u, kernel_spectrum(delta_kernel(), 8, 8)), u, atol=1e-14)
    np.testing.assert_allclose(adjoint_convolve(u, kernel_spectrum(delta_kernel(), 8, 8)), u,
                               atol=1e-14)
    for make in REFERENCE_KERNELS.values():
        ks = kernel_spectrum(make(), 32, 32)
        assert np.abs(convolve(np.full((32, 32), 7.5), ks) - 7.5).max() <= 1e-12 * 7.5 * 10


@pytest.mark.parametrize("make", [lambda: average_kernel(3), lambda: disk_kernel(1.5),
                                  lambda: motion_kernel(4, 0.6)])
def test_convolve_matches_naive_loop(rng, make):
    k = make()
    u = rng.normal(size=(8, 8))
    ks = kernel_spectrum(k, 8, 8)
    expected = naive_circular_convolve(u, k.taps, k.origin)
    assert np.abs(convolve(u, ks) - expected).max() <= 1e-10
    flipped = k.taps[::-1, ::-1]
    origin = (k.taps.shape[0] - 1 - k.origin[0], k.taps.shape[1] - 1 - k.origin[1])
    expected_adj = naive_circular_convolve(u, flipped, origin)
    assert np.abs(adjoint_convolve(u, ks) - expected_adj).max() <= 1e-10


def test_symmetric_kernel_adjoint_equals_forward(rng):
    u = rng.normal(size=(16, 16))
    for k in (average_kernel(5), disk_kernel(3)):
        ks = kernel_spectrum(k, 16, 16)
        np.testing.assert_allclose(adjoint_convolve(u, ks), convolve(u, ks), atol=1e-12)


@pytest.mark.parametrize("name", sorted(REFERENCE_KERNELS))
def test_adjoint_identity(rng, name):
    u, w = rng.normal(size=(2, 16, 16))
    ks = kernel_spectrum(REFERENCE_KERNELS[name](), 16, 16) if name != "motion" else \
        kernel_spectrum(REFERENCE_KERNELS[name](), 32, 32)
    if name == "motion":
        u, w = rng.normal(size=(2, 32, 32))
    lhs = np.sum(convolve(u, ks) * w)
    rhs = np.sum(u * adjoint_convolve(w, ks))
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


def test_dimension_mismatch():
    ks = kernel_spectrum(average_kernel(3), 8, 8)
    with pytest.raises(DomainError):
        convolve(np.ones((8, 9)), ks)


def test_kernel_csv(tmp_path):
    path = tmp_path / "k.csv"
    write_kernel_csv(motion_kernel(5, 0.0), path)
    rows = path.read_text().splitlines()
    assert rows[0] == "row_offset,col_offset,value"
    assert rows[1:] == [f"0,{d},0.2" for d in range(-2, 3)]
