import json
import random
from fractions import Fraction

import pytest

from _oracles import adjacency_matrix, lagrange_idempotents, quad_form
from drgcert.errors import ParameterError
from drgcert.subsets import (
    VertexSubset,
    distance_counts,
    inner_distribution,
    inner_distribution_from_counts,
    load_subset,
    width_and_dual_width,
)

GRAPHS = [
    ("johnson", (7, 3)),
    ("hamming", (3, 3)),
    ("grassmann", (2, 4, 2)),
    ("bilinear", (2, 2, 2)),
    ("twisted", (2, 2)),
]


def test_vertex_subset_validation(built):
    g, *_ = built("johnson", 5, 2)
    with pytest.raises(ParameterError):
        VertexSubset(g, [])
    with pytest.raises(ParameterError):
        VertexSubset(g, [0, 0])
    with pytest.raises(ParameterError):
        VertexSubset(g, [99])
    sub = VertexSubset(g, [3, 1, 2])
    assert sub.indices == (1, 2, 3)
    assert sub.size == 3


@pytest.mark.parametrize("family,args", GRAPHS)
def test_singleton(family, args, built):
    g, census, arr, sys_ = built(family, *args)
    dist = inner_distribution(VertexSubset(g, [0]), census, sys_)
    assert dist.e == (1,) + (0,) * sys_.d
    assert dist.eq == tuple(Fraction(mj) for mj in sys_.m)
    rep = width_and_dual_width(dist)
    assert rep.width == 0 and rep.dual_width == sys_.d and rep.descendent


@pytest.mark.parametrize("family,args", GRAPHS)
def test_whole_vertex_set(family, args, built):
    g, census, arr, sys_ = built(family, *args)
    dist = inner_distribution(VertexSubset(g, range(g.n)), census, sys_)
    assert dist.e == tuple(Fraction(x) for x in sys_.k)
    assert dist.eq == (Fraction(g.n),) + (0,) * sys_.d
    rep = width_and_dual_width(dist)
    assert rep.width == sys_.d and rep.dual_width == 0 and rep.descendent


def test_johnson_star(built):
    g, census, arr, sys_ = built("johnson", 7, 3)
    star = VertexSubset(g, [i for i, lab in enumerate(g.vertices) if 1 in lab])
    assert star.size == 15
    dist = inner_distribution(star, census, sys_)
    assert dist.e == (1, 8, 6, 0)
    # frozen from an independent eigendecomposition of the 35-vertex graph
    assert dist.eq == (15, 20, 0, 0)
    rep = width_and_dual_width(dist)
    assert (rep.width, rep.dual_width, rep.descendent) == (2, 1, True)


def test_johnson_star_transform_against_projectors(built):
    # (eQ)_i = |X|/|Y| chi^T E_i chi with E_i from Lagrange interpolation
    g, census, arr, sys_ = built("johnson", 7, 3)
    idx = [i for i, lab in enumerate(g.vertices) if 1 in lab]
    dist = inner_distribution(VertexSubset(g, idx), census, sys_)
    Es = lagrange_idempotents(adjacency_matrix(g), list(sys_.eigenvalues))
    for i, E in enumerate(Es):
        assert dist.eq[i] == Fraction(g.n, len(idx)) * quad_form(E, idx)


def test_twisted_x2_subset(built):
    g, census, arr, sys_ = built("twisted", 2, 2)
    x2 = VertexSubset(g, [i for i, lab in enumerate(g.vertices) if lab[0] == "X2"])
    assert x2.size == 15
    dist = inner_distribution(x2, census, sys_)
    assert dist.e == (1, 14, 0)
    assert dist.eq == (15, 140, 0)
    rep = width_and_dual_width(dist)
    assert (rep.width, rep.dual_width, rep.descendent) == (1, 1, True)


@pytest.mark.parametrize("family,args", GRAPHS)
def test_random_subsets_fundamental_inequality(family, args, built):
    g, census, arr, sys_ = built(family, *args)
    rng = random.Random(hash((family, args)) & 0xFFFF)
    for _ in range(1000):
        size = rng.randint(1, g.n)
        sub = VertexSubset(g, rng.sample(range(g.n), size))
        dist = inner_distribution(sub, census, sys_)
        assert sum(dist.e) == sub.size
        assert dist.eq[0] == sub.size
        assert all(x >= 0 for x in dist.eq)
        rep = width_and_dual_width(dist)  # raises if w + w* < d
        assert rep.descendent == (rep.width + rep.dual_width == sys_.d)


def test_counts_histogram_validation(built):
    _, _, _, sys_ = built("johnson", 5, 2)
    with pytest.raises(ParameterError):
        inner_distribution_from_counts([3, 4], sys_)  # not |Y|^2 pairs
    dist = inner_distribution_from_counts([2, 2, 0], sys_)
    assert dist.e == (1, 1, 0)


def test_subset_file_io(tmp_path, built):
    g, census, arr, sys_ = built("twisted", 2, 2)
    labels = [list(lab) for lab in g.vertices if lab[0] == "X2"]
    path = tmp_path / "x2.json"
    path.write_text(json.dumps([[p, [list(r) for r in rows]] for p, rows in labels]))
    sub = load_subset(path, g)
    assert sub.size == 15
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([["X9", [[0, 0, 0, 0, 1]]]]))
    with pytest.raises(ParameterError):
        load_subset(bad, g)
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    with pytest.raises(ParameterError):
        load_subset(empty, g)


def test_distance_counts_direct(built):
    g, census, *_ = built("johnson", 5, 2)
    sub = VertexSubset(g, [0, 1, 2])
    counts = distance_counts(sub, census)
    assert counts[0] == 3
    assert sum(counts) == 9
