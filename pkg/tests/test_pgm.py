import numpy as np
import pytest

from rdrestore.pgm import (MalformedHeader, TruncatedPayload, UnsupportedMaxval, load_image,
                           parse_pgm, save_image, to_bytes)


def test_parse_p2():
    u = parse_pgm(b"P2\n2 2\n255\n0 64 128 255")
    np.testing.assert_array_equal(u, [[0, 64], [128, 255]])
    assert u.dtype == np.float64


def test_parse_with_comments():
    u = parse_pgm(b"P2\n# made by hand\n3 1 # width height\n255\n1 2\n# mid\n3\n")
    np.testing.assert_array_equal(u, [[1, 2, 3]])


def test_parse_p5():
    u = parse_pgm(b"P5\n3 2\n255\n" + bytes([0, 1, 2, 253, 254, 255]))
    np.testing.assert_array_equal(u, [[0, 1, 2], [253, 254, 255]])


def test_p5_raster_may_start_with_whitespace_byte():
    u = parse_pgm(b"P5 2 1 255\n" + bytes([10, 32]))
    np.testing.assert_array_equal(u, [[10, 32]])


@pytest.mark.parametrize("binary", [True, False])
def test_round_trip(tmp_path, binary):
    rng = np.random.default_rng(1)
    u = rng.integers(0, 256, (5, 7)).astype(float)
    path = tmp_path / "img.pgm"
    save_image(u, path, binary=binary)
    np.testing.assert_array_equal(load_image(path), u)
    assert path.read_bytes().startswith(b"P5" if binary else b"P2")


def test_clamp_and_round_half_even():
    data = to_bytes(np.array([[255.7, -3.0, 2.5, 3.5, 127.49]]))
    np.testing.assert_array_equal(parse_pgm(data), [[255, 0, 2, 4, 127]])


@pytest.mark.parametrize("data,exc", [
    (b"P6\n1 1\n255\n\x00\x00\x00", MalformedHeader),
    (b"P2\n2 x\n255\n0 0", MalformedHeader),
    (b"P2\n2", MalformedHeader),
    (b"P2\n0 2\n255\n", MalformedHeader),
    (b"P2\n1 1\n65535\n0", UnsupportedMaxval),
    (b"P5\n2 2\n15\n\x00\x00\x00\x00", UnsupportedMaxval),
    (b"P5\n2 2\n255\n\x00\x00\x00", TruncatedPayload),
    (b"P5\n2 2\n255", TruncatedPayload),
    (b"P2\n2 2\n255\n1 2 3", TruncatedPayload),
    (b"P2\n1 1\n255\n300", MalformedHeader),
])
def test_errors(data, exc):
    with pytest.raises(exc):
        parse_pgm(data)


def test_errors_are_distinct():
    assert len({MalformedHeader, UnsupportedMaxval, TruncatedPayload}) == 3
    assert not issubclass(TruncatedPayload, MalformedHeader)
