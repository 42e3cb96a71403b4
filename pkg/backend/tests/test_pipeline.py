import json

import numpy as np
import pytest

from chsa.models import ChsaParams
from chsa.service import stratify
from core.errors import (
    ClassTooSmall,
    MalformedHeader,
    NoPositiveEigenvalues,
    NonFiniteCube,
    PatchLargerThanImage,
    PayloadSizeMismatch,
    RankExceedsAmbient,
    TooFewPoints,
    UnsupportedDtype,
)
from mds.service import embed
from pipeline.dao import load_cube, plot_frame, read_class_map, read_report, report_document, write_class_map, write_cube, write_report
from pipeline.models import HyperspectralCube
from pipeline.service import (
    class_distance_summary,
    embed_class_samples,
    extract_endmembers,
    extract_patches,
    sample_classes,
    simplex_dataset,
    synthetic_cube,
)
from subspace.service import chordal_distance, distance_matrix, random_subspace


def write_header(path, **fields):
    header = {"rows": 2, "cols": 2, "bands": 3, "interleave": "BSQ", "dtype": "float64", "payload": "cube.raw"}
    header.update(fields)
    path.write_text(json.dumps(header))
    return path


def noise_cube(rows, cols, bands, seed=0):
    return HyperspectralCube(np.random.default_rng(seed).standard_normal((rows, cols, bands)))


def test_load_cube_bsq_by_hand(tmp_path):
    values = np.arange(12, dtype="<f8")
    values.tofile(tmp_path / "cube.raw")
    cube = load_cube(write_header(tmp_path / "cube.json"))
    assert (cube.rows, cube.cols, cube.bands) == (2, 2, 3)
    # BSQ stores band-major: band b at offset 4 * b
    for row in range(2):
        for col in range(2):
            for band in range(3):
                assert cube.values[row, col, band] == 4 * band + 2 * row + col


@pytest.mark.parametrize("interleave", ["BSQ", "BIL", "BIP"])
@pytest.mark.parametrize("dtype", ["float32", "float64"])
def test_interleaves_read_back_the_same_cube(tmp_path, interleave, dtype):
    values = np.random.default_rng(1).uniform(size=(3, 4, 5)).astype(dtype).astype(np.float64)
    header = tmp_path / f"{interleave}_{dtype}.json"
    write_cube(header, values, interleave=interleave, dtype=dtype)
    assert np.array_equal(load_cube(header).values, values)


def test_int16_cube_is_converted_to_float(tmp_path):
    values = np.arange(24, dtype=np.float64).reshape(2, 3, 4) - 10
    header = tmp_path / "ints.json"
    write_cube(header, values, dtype="int16")
    assert np.array_equal(load_cube(header).values, values)


def test_band_mask_drops_bands(tmp_path):
    keep = [band for band in range(220) if band % 11 != 0][:200]
    values = np.random.default_rng(2).uniform(size=(2, 2, 220))
    header = tmp_path / "masked.json"
    write_cube(header, values, band_mask=keep)
    cube = load_cube(header)
    assert cube.bands == 200
    assert cube.band_mask == tuple(keep)
    assert np.array_equal(cube.values, values[:, :, keep])


def test_short_payload(tmp_path):
    np.zeros(11, dtype="<f8").tofile(tmp_path / "cube.raw")
    with pytest.raises(PayloadSizeMismatch):
        load_cube(write_header(tmp_path / "cube.json"))


def test_unsupported_dtype(tmp_path):
    np.zeros(12, dtype="<f8").tofile(tmp_path / "cube.raw")
    with pytest.raises(UnsupportedDtype):
        load_cube(write_header(tmp_path / "cube.json", dtype="uint8"))


def test_bad_header_fields(tmp_path):
    np.zeros(12, dtype="<f8").tofile(tmp_path / "cube.raw")
    with pytest.raises(MalformedHeader):
        load_cube(write_header(tmp_path / "cube.json", interleave="BIX"))
    with pytest.raises(MalformedHeader):
        load_cube(write_header(tmp_path / "cube.json", band_mask=[0, 3]))
    with pytest.raises(MalformedHeader, match="at least one band"):
        load_cube(write_header(tmp_path / "cube.json", band_mask=[]))


def test_non_finite_cube_is_rejected():
    values = np.ones((2, 2, 3))
    values[1, 1, 2] = np.nan
    with pytest.raises(NonFiniteCube):
        HyperspectralCube(values)


def test_patches_on_small_noise_cube():
    patches = extract_patches(noise_cube(6, 6, 12), patch_size=3, stride=3)
    assert patches.origins == [(0, 0), (0, 3), (3, 0), (3, 3)]
    assert all(point.n == 12 and point.k == 9 for point in patches.points)
    assert patches.excluded == []


def test_patch_grid_on_scene_sized_cube():
    patches = extract_patches(noise_cube(145, 145, 10), patch_size=3, stride=3)
    assert len(patches.origins) == 48 * 48
    assert (patches.unused_rows, patches.unused_cols) == (1, 1)


def test_constant_cube_excludes_every_patch(caplog):
    patches = extract_patches(HyperspectralCube(np.ones((145, 145, 10))), patch_size=3)
    assert patches.points == []
    assert len(patches.excluded) == 2304
    assert "rank-deficient" in caplog.text


def test_patch_errors():
    with pytest.raises(RankExceedsAmbient):
        extract_patches(noise_cube(6, 6, 8), patch_size=3)
    with pytest.raises(PatchLargerThanImage):
        extract_patches(noise_cube(2, 6, 12), patch_size=3)


def test_overlapping_patches():
    patches = extract_patches(noise_cube(5, 5, 12), patch_size=3, stride=1)
    assert len(patches.origins) == 9


def test_single_class_draws():
    cube = noise_cube(6, 6, 12)
    samples = sample_classes(cube, np.ones((6, 6), dtype=int), draw_size=9, draws_per_class=5, seed=0)
    assert len(samples.points) == 5
    assert set(samples.labels) == {1}
    assert all(point.k == 9 and point.n == 12 for point in samples.points)
    assert all(len(set(pixels)) == 9 for pixels in samples.pixels)


def test_unlabelled_pixels_are_skipped_and_draws_are_seeded():
    cube = noise_cube(6, 6, 12)
    class_map = np.zeros((6, 6), dtype=int)
    class_map[:3] = 2
    class_map[3:, :4] = 5
    first = sample_classes(cube, class_map, draw_size=4, draws_per_class=3, seed=9)
    again = sample_classes(cube, class_map, draw_size=4, draws_per_class=3, seed=9)
    assert first.labels == [2, 2, 2, 5, 5, 5]
    assert first.pixels == again.pixels
    for label, pixels in zip(first.labels, first.pixels):
        assert all(class_map[row, col] == label for row, col in pixels)


def test_class_too_small():
    class_map = np.ones((6, 6), dtype=int)
    class_map[0, 0] = 3
    with pytest.raises(ClassTooSmall) as raised:
        sample_classes(noise_cube(6, 6, 12), class_map, draw_size=9, draws_per_class=1, seed=0)
    assert raised.value.label == 3


def test_same_class_draws_cluster(tmp_path):
    rng = np.random.default_rng(7)
    rows, cols, bands, classes = 32, 32, 60, 16
    blocks = np.arange(1, classes + 1).reshape(4, 4)
    class_map = np.kron(blocks, np.ones((8, 8), dtype=int))
    spectra = rng.uniform(size=(classes, 12, bands))
    values = np.empty((rows, cols, bands))
    for row in range(rows):
        for col in range(cols):
            label = class_map[row, col] - 1
            values[row, col] = rng.dirichlet(np.ones(12)) @ spectra[label]
    values += 1e-3 * rng.standard_normal(values.shape)
    path = tmp_path / "classes.csv"
    write_class_map(path, class_map)

    samples = sample_classes(HyperspectralCube(values), read_class_map(path), draw_size=9, draws_per_class=5, seed=1)
    assert sorted(set(samples.labels)) == list(range(1, classes + 1))
    summary = class_distance_summary(distance_matrix(samples.points), samples.labels)
    assert summary.within < summary.across
    assert embed_class_samples(samples).p == len(samples.labels)


def test_simplex_dataset_puts_generators_first():
    points = simplex_dataset(3, 10, 3, 20, seed=4)
    again = simplex_dataset(3, 10, 3, 20, seed=4)
    assert len(points) == 23
    assert all(np.array_equal(a.basis, b.basis) for a, b in zip(points, again))
    assert all(point.n == 10 and point.k == 3 for point in points)
    assert min(chordal_distance(points[0], point) for point in points[3:]) > 0


def test_synthetic_cube_shape():
    values = synthetic_cube(5, 4, 12, endmembers=3, noise=0.0, seed=2)
    assert values.shape == (5, 4, 12)
    assert np.all(values > 0)


def test_extract_matches_manual_stages(rng):
    points = [random_subspace(6, 2, rng) for _ in range(60)]
    params = ChsaParams()
    report = extract_endmembers(points, params)
    manual = stratify(embed(distance_matrix(points)).coordinates, params)
    assert report.stratification == manual
    assert report.vertex_origins == manual.vertex_indices
    assert (report.n, report.k) == (6, 2)


def test_vertex_origins_follow_patch_origins(rng):
    points = [random_subspace(6, 2, rng) for _ in range(30)]
    origins = [(row, 3 * row) for row in range(30)]
    report = extract_endmembers(points, ChsaParams(), origins=origins)
    assert report.vertex_origins == [origins[i] for i in report.stratification.vertex_indices]


def test_identical_points_have_no_embedding(rng):
    point = random_subspace(6, 2, rng)
    with pytest.raises(NoPositiveEigenvalues):
        extract_endmembers([point] * 10, ChsaParams(neighbors=3))


def test_too_few_points_names_the_conflict(rng):
    points = [random_subspace(6, 2, rng) for _ in range(3)]
    with pytest.raises(TooFewPoints, match="7 neighbors"):
        extract_endmembers(points, ChsaParams())


def test_report_and_plot_frame(tmp_path, rng):
    points = [random_subspace(6, 2, rng) for _ in range(20)]
    report = extract_endmembers(points, ChsaParams(neighbors=5), mds_dim=2)
    path = tmp_path / "report.json"
    write_report(path, report_document(report, {"command": "extract"}))
    document = read_report(path)
    frame = plot_frame(document)
    assert len(frame) == 20
    assert list(frame.columns) == ["index", "x", "y", "z", "weight_norm", "flagged"]
    assert np.array_equal(frame["z"].to_numpy(), np.zeros(20))
    assert int(frame["flagged"].sum()) == len(document.stratification.vertex_indices)
    assert document.stratification == report.stratification
