import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

from core.errors import InputError, NoPositiveEigenvalues
from mds.dao import read_embedding, write_embedding
from mds.models import AUTO, Embedding
from mds.service import double_center, embed, reconstruction_error
from subspace.models import DistanceMatrix
from subspace.service import distance_matrix, random_subspace

PAIR = DistanceMatrix(np.array([[0.0, 2.0], [2.0, 0.0]]))


def equilateral():
    return DistanceMatrix(np.ones((3, 3)) - np.eye(3))


def test_double_center_pair():
    assert np.allclose(double_center(PAIR), [[1.0, -1.0], [-1.0, 1.0]])


def test_double_center_zero_matrix():
    assert np.array_equal(double_center(DistanceMatrix(np.zeros((4, 4)))), np.zeros((4, 4)))


def test_double_center_rows_sum_to_zero(rng):
    points = rng.standard_normal((9, 4))
    b = double_center(DistanceMatrix(squareform(pdist(points))))
    assert np.allclose(b.sum(axis=1), 0.0, atol=1e-10)
    assert np.array_equal(b, b.T)


def test_embed_pair_on_a_line():
    embedding = embed(PAIR, 1)
    assert embedding.q == 1
    assert np.allclose(np.abs(embedding.coordinates[:, 0]), [1.0, 1.0])
    assert embedding.coordinates[0, 0] == pytest.approx(-embedding.coordinates[1, 0])
    assert reconstruction_error(embedding, PAIR) < 1e-12


def test_embed_equilateral_triangle_auto():
    d = equilateral()
    embedding = embed(d, AUTO)
    assert embedding.q == 2
    assert embedding.eigenvalues[0] == pytest.approx(embedding.eigenvalues[1])
    assert reconstruction_error(embedding, d) < 1e-10


def test_embed_zero_matrix_has_no_positive_eigenvalues():
    with pytest.raises(NoPositiveEigenvalues):
        embed(DistanceMatrix(np.zeros((5, 5))))


def test_embed_requested_dimension_is_capped(caplog):
    embedding = embed(equilateral(), 3)
    assert embedding.q == 2
    assert embedding.requested_q == 3
    assert embedding.reduced
    assert "only 2 eigenvalues are positive" in caplog.text


def test_embed_rejects_bad_dimension():
    with pytest.raises(InputError):
        embed(PAIR, 0)


def test_truncated_embedding_error_matches_brute_force(rng):
    points = rng.standard_normal((10, 2)) * np.array([3.0, 1.0])
    d = DistanceMatrix(squareform(pdist(points)))
    embedding = embed(d, 1)
    embedded = squareform(pdist(embedding.coordinates))
    assert reconstruction_error(embedding, d) == pytest.approx(np.max(np.abs(embedded - d.entries)))
    assert reconstruction_error(embedding, d) > 1e-3


def test_euclidean_configuration_is_reproduced(rng):
    points = rng.standard_normal((20, 3))
    d = DistanceMatrix(squareform(pdist(points)))
    embedding = embed(d)
    assert embedding.q == 3
    assert embedding.negative_mass < 1e-10
    assert reconstruction_error(embedding, d) < 1e-8
    b = double_center(d)
    gram = embedding.coordinates @ embedding.coordinates.T
    assert np.linalg.norm(gram - b) / np.linalg.norm(b) < 1e-8


def test_chordal_distances_embed_isometrically(rng):
    points = [random_subspace(10, 3, rng) for _ in range(60)]
    d = distance_matrix(points)
    embedding = embed(d)
    assert embedding.negative_mass < 1e-8
    assert reconstruction_error(embedding, d) < 1e-8


def test_embedding_files_are_exact(tmp_path, rng):
    points = rng.standard_normal((8, 3))
    embedding = embed(DistanceMatrix(squareform(pdist(points))))
    path = tmp_path / "embedding.csv"
    write_embedding(path, embedding, run={"command": "embed"})
    loaded = read_embedding(path)
    assert np.array_equal(loaded.coordinates, embedding.coordinates)
    assert np.array_equal(loaded.eigenvalues, embedding.eigenvalues)
    assert loaded.requested_q == AUTO


def test_embedding_does_not_depend_on_memory_layout(rng):
    entries = distance_matrix([random_subspace(6, 2, rng) for _ in range(40)]).entries
    c_order = DistanceMatrix(entries)
    f_order = DistanceMatrix(np.asfortranarray(entries))
    assert f_order.entries.flags.c_contiguous
    assert np.array_equal(double_center(c_order), double_center(f_order))
    assert np.array_equal(embed(c_order).coordinates, embed(f_order).coordinates)


def test_coordinate_columns_are_centered(rng):
    d = distance_matrix([random_subspace(10, 3, rng) for _ in range(40)])
    coordinates = embed(d).coordinates
    assert np.allclose(coordinates.mean(axis=0), 0.0, atol=1e-10)


def test_coordinate_column_norms_are_eigenvalues(rng):
    points = rng.standard_normal((15, 4))
    embedding = embed(DistanceMatrix(squareform(pdist(points))))
    norms = np.sum(embedding.coordinates ** 2, axis=0)
    assert np.allclose(norms, embedding.eigenvalues[: embedding.q], rtol=1e-10)


def test_reconstruction_error_ignores_rotations(rng):
    points = rng.standard_normal((12, 3))
    d = DistanceMatrix(squareform(pdist(points)))
    embedding = embed(d, 2)
    rotation, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    rotated = Embedding(
        coordinates=embedding.coordinates @ rotation,
        eigenvalues=embedding.eigenvalues,
        negative_mass=embedding.negative_mass,
        requested_q=2,
    )
    assert reconstruction_error(rotated, d) == pytest.approx(reconstruction_error(embedding, d), abs=1e-12)
