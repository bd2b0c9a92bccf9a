import numpy as np
import pytest
from PIL import Image

from mwsn.dataset import (
    DatasetManifest,
    center_crop,
    load_grayscale,
    read_manifest,
    synth_textures,
    wedge_mask,
    write_manifest,
    write_synthetic,
)
from mwsn.errors import CropError, FormatError, IngestionError, InvalidInputError, StratificationError


def save(tmp_path, arr, name, mode=None):
    path = tmp_path / name
    Image.fromarray(np.asarray(arr, dtype=np.uint8)).save(path)
    return path


def test_white_and_black(tmp_path):
    assert np.all(load_grayscale(save(tmp_path, np.full((4, 4), 255), "w.png")) == 1.0)
    assert np.all(load_grayscale(save(tmp_path, np.zeros((4, 4)), "b.pgm")) == 0.0)


def test_pgm_p5_is_binary(tmp_path):
    path = save(tmp_path, np.arange(16).reshape(4, 4), "g.pgm")
    assert path.read_bytes().startswith(b"P5")
    np.testing.assert_allclose(load_grayscale(path), np.arange(16).reshape(4, 4) / 255)


def test_luma_conversion(tmp_path):
    rgb = np.zeros((2, 2, 3))
    rgb[0, 0] = (255, 0, 0)
    rgb[0, 1] = (0, 255, 0)
    rgb[1, 0] = (0, 0, 255)
    rgb[1, 1] = (10, 20, 30)
    g = load_grayscale(save(tmp_path, rgb, "c.png"))
    assert g[0, 0] == pytest.approx(0.299, abs=1e-6)
    assert g[0, 1] == pytest.approx(0.587, abs=1e-6)
    assert g[1, 0] == pytest.approx(0.114, abs=1e-6)
    assert g[1, 1] == pytest.approx((0.299 * 10 + 0.587 * 20 + 0.114 * 30) / 255, abs=1e-12)


def test_ingestion_errors(tmp_path):
    with pytest.raises(IngestionError, match="missing.png"):
        load_grayscale(tmp_path / "missing.png")
    junk = tmp_path / "junk.png"
    junk.write_bytes(b"not an image")
    with pytest.raises(IngestionError, match="junk.png"):
        load_grayscale(junk)


def test_crop_examples(rng):
    img = rng.random((202, 202))
    np.testing.assert_array_equal(center_crop(img[:200, :200]), img[:200, :200])
    np.testing.assert_array_equal(center_crop(img), img[1:201, 1:201])
    wide = rng.random((480, 640))
    np.testing.assert_array_equal(center_crop(wide), wide[140:340, 220:420])
    with pytest.raises(CropError):
        center_crop(rng.random((199, 300)))


@pytest.mark.parametrize("shape", [(203, 250), (200, 200), (401, 333)])
def test_crop_idempotent(shape, rng):
    once = center_crop(rng.random(shape))
    np.testing.assert_array_equal(center_crop(once), once)


def test_manifest_round_trip(tmp_path):
    m = DatasetManifest([("a/x.png", "cat"), ("b/y,z.pgm", "dog")], tmp_path)
    write_manifest(m, tmp_path / "m.csv")
    back = read_manifest(tmp_path / "m.csv")
    assert back.entries == m.entries and back.root == tmp_path


def test_manifest_parsing(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("# header\n\nimgs/1.png, felt  # trailing\nimgs/2.png,felt\n", encoding="utf-8")
    m = read_manifest(p)
    assert m.entries == [("imgs/1.png", "felt"), ("imgs/2.png", "felt")]
    assert m.paths[0] == tmp_path / "imgs/1.png"
    p.write_text("no-label-here\n", encoding="utf-8")
    with pytest.raises(FormatError):
        read_manifest(p)
    p.write_text("a.png,x\na.png,y\n", encoding="utf-8")
    with pytest.raises(FormatError):
        read_manifest(p)


def test_manifest_cv_check():
    with pytest.raises(StratificationError):
        DatasetManifest([("a", "x"), ("b", "x"), ("c", "y")]).check_for_cv()


def test_synthetic_wedge_energy():
    entries, images = synth_textures(2, 3, 64, seed=4)
    wedge0 = wedge_mask(64, 0.0, np.pi / 4)
    for (_, label), img in zip(entries, images):
        power = np.abs(np.fft.fft2(img)) ** 2
        share0 = power[wedge0].sum() / power.sum()
        assert (share0 >= 0.8) if label == "class0" else (share0 <= 0.2)
        assert img.mean() == pytest.approx(0, abs=1e-12) and img.std() == pytest.approx(1)


def test_synthetic_deterministic_and_distinct():
    _, a = synth_textures(4, 2, 32, seed=1)
    _, b = synth_textures(4, 2, 32, seed=1)
    _, c = synth_textures(4, 2, 32, seed=2)
    assert all(x.tobytes() == y.tobytes() for x, y in zip(a, b))
    assert a[0].tobytes() != a[1].tobytes() and a[0].tobytes() != c[0].tobytes()


def test_synthetic_empty_and_bad_args():
    assert synth_textures(3, 0, 32) == ([], [])
    for args in [(1, 2, 32), (9, 2, 32), (2, 2, 30), (2, -1, 32)]:
        with pytest.raises(InvalidInputError):
            synth_textures(*args)


def test_write_synthetic(tmp_path):
    m = write_synthetic(tmp_path, 2, 2, 32, seed=0)
    back = read_manifest(tmp_path / "manifest.csv")
    assert back.entries == m.entries and len(back) == 4
    assert load_grayscale(back.paths[0]).shape == (32, 32)
