import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fabba.image import ImageTensor, flatten_image, read_ppm, unflatten_image, write_ppm


def random_image(rng, width, height):
    return ImageTensor(
        width=width,
        height=height,
        pixels=rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8),
    )


class TestImageTensor:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            ImageTensor(width=2, height=2, pixels=np.zeros((2, 2), dtype=np.uint8))
        with pytest.raises(ValueError):
            ImageTensor(width=0, height=1, pixels=np.zeros((1, 0, 3), dtype=np.uint8))

    def test_channels(self):
        img = ImageTensor(width=1, height=1, pixels=np.zeros((1, 1, 3), dtype=np.uint8))
        assert img.channels == 3


class TestFlatten:
    def test_single_pixel(self):
        img = ImageTensor(width=1, height=1, pixels=np.array([[[10, 20, 30]]], dtype=np.uint8))
        assert list(flatten_image(img).values) == [10.0, 20.0, 30.0]

    def test_channel_planar_order(self):
        img = ImageTensor(
            width=2, height=1, pixels=np.array([[[1, 2, 3], [4, 5, 6]]], dtype=np.uint8)
        )
        assert list(flatten_image(img).values) == [1.0, 4.0, 2.0, 5.0, 3.0, 6.0]

    @settings(max_examples=20, deadline=None)
    @given(
        width=st.integers(1, 8),
        height=st.integers(1, 8),
        seed=st.integers(0, 2**31 - 1),
    )
    def test_round_trip_identity(self, width, height, seed):
        rng = np.random.default_rng(seed)
        img = random_image(rng, width, height)
        back = unflatten_image(flatten_image(img), width, height)
        assert np.array_equal(back.pixels, img.pixels)


class TestUnflatten:
    def test_clamping(self):
        series = np.array([-3.2, 260.7, 128.0])
        img = unflatten_image(series, 1, 1)
        assert list(img.pixels[0, 0]) == [0, 255, 128]

    def test_trailing_slack_dropped(self):
        series = np.array([1.0, 2.0, 3.0, 99.0])
        img = unflatten_image(series, 1, 1)
        assert list(img.pixels[0, 0]) == [1, 2, 3]

    def test_other_mismatch_rejected(self):
        with pytest.raises(ValueError, match="does not match image size"):
            unflatten_image(np.zeros(5), 1, 1)

    def test_rounding(self):
        img = unflatten_image(np.array([1.4, 2.6, 100.5]), 1, 1)
        assert list(img.pixels[0, 0]) == [1, 3, 100]


class TestPpm:
    def test_write_read_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        img = random_image(rng, 7, 5)
        path = tmp_path / "img.ppm"
        write_ppm(img, path)
        back = read_ppm(path)
        assert back.width == 7 and back.height == 5
        assert np.array_equal(back.pixels, img.pixels)
        # writing again is byte-identical
        path2 = tmp_path / "img2.ppm"
        write_ppm(back, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_ascii_variant_rejected(self, tmp_path):
        path = tmp_path / "ascii.ppm"
        path.write_bytes(b"P3\n1 1\n255\n1 2 3\n")
        with pytest.raises(ValueError, match="unsupported PPM variant"):
            read_ppm(path)

    def test_wide_maxval_rejected(self, tmp_path):
        path = tmp_path / "wide.ppm"
        path.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
        with pytest.raises(ValueError, match="unsupported maxval"):
            read_ppm(path)

    def test_truncated_data(self, tmp_path):
        path = tmp_path / "short.ppm"
        path.write_bytes(b"P6\n2 2\n255\n" + bytes(5))
        with pytest.raises(ValueError, match="truncated"):
            read_ppm(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "bad.ppm"
        path.write_bytes(b"JUNK")
        with pytest.raises(ValueError, match="malformed PPM header"):
            read_ppm(path)

    def test_header_comments_allowed(self, tmp_path):
        path = tmp_path / "comment.ppm"
        path.write_bytes(b"P6\n# a comment\n2 1\n# another\n255\n" + bytes([9, 8, 7, 6, 5, 4]))
        img = read_ppm(path)
        assert img.width == 2 and img.height == 1
        assert list(img.pixels[0, 0]) == [9, 8, 7]
