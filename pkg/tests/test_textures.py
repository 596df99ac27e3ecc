import numpy as np
import pytest

from dfcurve.imgio import read_png
from dfcurve.textures import (
    BUNDLED_SEEDS,
    TEXTURE_KINDS,
    bundled_texture_paths,
    bundled_textures,
    generate_texture,
    synthetic_scene,
)


@pytest.mark.parametrize("kind", TEXTURE_KINDS)
def test_generators_deterministic_and_bounded(kind):
    a = generate_texture(kind, 5)
    b = generate_texture(kind, 5)
    assert np.array_equal(a, b)
    assert a.shape == (128, 128)
    assert np.all(a >= 0.0) and np.all(a <= 1.0)
    assert not np.array_equal(a, generate_texture(kind, 6))


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        generate_texture("plaid", 1)


def test_synthetic_scene_cycles_kinds():
    scenes = [synthetic_scene(i) for i in range(6)]
    assert all(s.shape == (128, 128) for s in scenes)
    assert not np.array_equal(scenes[0], scenes[4])  # same kind, different seed


def test_bundled_files_match_generators():
    paths = bundled_texture_paths()
    for kind in TEXTURE_KINDS:
        assert paths[kind].exists(), f"missing bundled texture {kind}"
        on_disk = read_png(paths[kind])
        regenerated = generate_texture(kind, BUNDLED_SEEDS[kind])
        quantized = (np.clip(regenerated, 0, 1) * 255 + 0.5).astype(np.uint8) / 255.0
        assert np.array_equal(on_disk, quantized)


def test_bundled_textures_loader():
    textures = bundled_textures()
    assert set(textures) == set(TEXTURE_KINDS)
    for img in textures.values():
        assert img.shape == (128, 128)
