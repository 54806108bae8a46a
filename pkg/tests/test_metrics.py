import cv2
import numpy as np
import pytest

from _test_tools import solid_frame, pixel_frame, series

from scenemap.exceptions import DimensionMismatchException, IndexOutOfRangeException, \
    EvenWindowException, EmptyInputException
from scenemap.metrics import brightness, sharpness, content_score, adaptive_score, \
    adaptive_scores, smooth, zscore, hsv, hsv_distance, ADAPTIVE_SENTINEL


def _srgb_lightness(v: int) -> float:
    c = v / 255
    y = c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4
    f = y ** (1 / 3) if y > 0.008856 else 7.787 * y + 16 / 116
    return (116 * f - 16) * 255 / 100


def _laplacian_variance(gray: np.ndarray) -> float:
    p = np.pad(gray, 1, mode='edge')
    h, w = gray.shape
    lap = np.zeros_like(gray)
    for y in range(h):
        for x in range(w):
            lap[y, x] = p[y, x + 1] + p[y + 2, x + 1] + p[y + 1, x] + p[y + 1, x + 2] \
                - 4 * p[y + 1, x + 1]
    return float(lap.var())


def test_brightness_extremes() -> None:
    assert brightness(solid_frame((0, 0, 0))) == 0.0
    assert brightness(solid_frame((255, 255, 255))) == 255.0


def test_brightness_gray() -> None:
    pixel = np.full((1, 1, 3), 128, dtype=np.uint8)
    expected = float(cv2.cvtColor(pixel, cv2.COLOR_RGB2LAB)[0, 0, 0])
    b = brightness(solid_frame((128, 128, 128)))
    assert b == expected
    assert b == pytest.approx(_srgb_lightness(128), abs=1.0)


def test_sharpness_constant() -> None:
    assert sharpness(solid_frame((0, 0, 0))) == 0.0
    assert sharpness(solid_frame((12, 200, 77))) == pytest.approx(0.0, abs=1e-9)


def test_sharpness_ramp() -> None:
    ramp = np.zeros((5, 5, 3), dtype=np.uint8)
    for x in range(5):
        ramp[:, x] = 40 * x
    s = sharpness(pixel_frame(ramp))
    gray = ramp[:, :, 0].astype(np.float64)
    # only the two border columns respond
    assert s > 0
    assert s == pytest.approx(_laplacian_variance(gray))


def test_sharpness_single_pixel() -> None:
    pixels = np.zeros((5, 5, 3), dtype=np.uint8)
    pixels[2, 2] = 255
    gray = np.zeros((5, 5))
    gray[2, 2] = 255.0
    assert sharpness(pixel_frame(pixels)) == pytest.approx(_laplacian_variance(gray))


def test_sharpness_is_pure() -> None:
    rng = np.random.default_rng(11)
    f = pixel_frame(rng.integers(0, 256, size=(18, 32, 3), dtype=np.uint8))
    assert sharpness(f) == sharpness(f)
    assert brightness(f) == brightness(f)


def test_content_score() -> None:
    black = solid_frame((0, 0, 0))
    white = solid_frame((255, 255, 255))
    gray = solid_frame((128, 128, 128))
    assert content_score(black, black) == 0.0
    assert content_score(black, white) == pytest.approx(85.0)
    assert content_score(black, gray) == pytest.approx(128 / 3)
    assert content_score(white, black) == content_score(black, white)


def test_content_score_cached_hsv() -> None:
    a = solid_frame((255, 0, 0))
    b = solid_frame((0, 0, 255))
    assert hsv_distance(hsv(a), hsv(b)) == content_score(a, b)


def test_content_score_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchException):
        content_score(solid_frame((0, 0, 0), 16, 16), solid_frame((0, 0, 0), 32, 16))


def test_adaptive_score() -> None:
    assert adaptive_score([5.0] * 9, 4, 2) == 1.0
    assert adaptive_score([5.0] * 9, 0, 2) == 1.0
    assert adaptive_score([0, 0, 10, 0, 0], 2, 2) == ADAPTIVE_SENTINEL
    assert adaptive_score([2, 4, 6, 4, 2], 2, 1) == pytest.approx(1.5)
    assert adaptive_score([0, 0, 0], 1, 2) == 0.0
    assert adaptive_score(series([2, 4, 6, 4, 2]), 2, 1) == pytest.approx(1.5)


def test_adaptive_score_clamped_neighborhood() -> None:
    # at t=0 with window 2 the neighbors are scores 1 and 2
    assert adaptive_score([9, 2, 4, 100], 0, 2) == pytest.approx(3.0)
    assert list(adaptive_scores([3.0])) == [ADAPTIVE_SENTINEL]


def test_adaptive_score_out_of_range() -> None:
    with pytest.raises(IndexOutOfRangeException):
        adaptive_score([1, 2, 3], 3)
    with pytest.raises(IndexError):
        adaptive_score([1, 2, 3], -1)


def test_smooth() -> None:
    rng = np.random.default_rng(2)
    values = rng.uniform(0, 10, size=50)
    assert np.array_equal(smooth(values, 1), values)
    assert list(smooth([0, 6, 0], 3)) == pytest.approx([3, 2, 3])
    assert list(smooth([4.0] * 7, 5)) == pytest.approx([4.0] * 7)
    assert len(smooth([], 3)) == 0


def test_smooth_range() -> None:
    rng = np.random.default_rng(5)
    for _ in range(50):
        values = rng.uniform(0, 100, size=int(rng.integers(1, 40)))
        s = smooth(values, int(rng.choice([3, 5, 7, 9])))
        assert len(s) == len(values)
        assert s.min() >= values.min()
        assert s.max() <= values.max()


def test_smooth_even_window() -> None:
    with pytest.raises(EvenWindowException):
        smooth([1, 2, 3], 2)
    with pytest.raises(ValueError):
        smooth([1, 2, 3], 0)


def test_zscore() -> None:
    assert zscore([5, 5, 5]) == [5, 5, 5]
    assert zscore([10, 20, 30]) == pytest.approx([-1.2247, 0, 1.2247], abs=1e-4)
    assert zscore([0, 1]) == [-1, 1]
    z = zscore([3, 1, 4, 1, 5, 9, 2, 6])
    assert np.mean(z) == pytest.approx(0, abs=1e-12)
    assert np.std(z) == pytest.approx(1)


def test_zscore_empty() -> None:
    with pytest.raises(EmptyInputException):
        zscore([])
