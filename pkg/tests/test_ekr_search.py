import itertools

import pytest

from drgcert.errors import DrgError, ParameterError, TierLimitExceeded, UnsupportedField
from drgcert.exact import q_binomial
from drgcert.graphs import (
    Graph,
    build_hamming,
    build_johnson,
    distance_census,
    twisted_intersection_array,
)
from drgcert.ekr_search import (
    enumerate_descendent_families,
    max_clique,
    threshold_graph,
    verify_descendent_family,
    verify_theorem,
)
from drgcert.lp_cert import solve_certificate
from drgcert.scheme import eigensystem_from_array


def test_threshold_graph_basics(built):
    g, census, _, _ = built("twisted", 2, 2)
    thr = threshold_graph(g, census, 1)
    assert thr.adj == g.adj  # d=2, t=1: distance <= 1 is the graph itself
    g, census, _, _ = built("johnson", 7, 3)
    thr = threshold_graph(g, census, 1)
    # distance <= 2 in J(7,3) means nonempty intersection
    for i in range(0, g.n, 5):
        for j in range(i + 1, g.n, 7):
            expects = bool(set(g.vertices[i]) & set(g.vertices[j]))
            assert thr.is_edge(i, j) == expects
    thr2 = threshold_graph(g, census, 2)
    assert thr2.adj == g.adj  # t = d-1 keeps only the distance-1 relation
    with pytest.raises(ParameterError):
        threshold_graph(g, census, 3)


def test_max_clique_complete_graph():
    k6 = build_hamming(1, 6)
    res = max_clique(k6)
    assert res.optimum == 6
    assert res.families == (tuple(range(6)),)
    assert not res.truncated


def test_max_clique_tier():
    k6 = build_hamming(1, 6)
    with pytest.raises(TierLimitExceeded):
        max_clique(k6, exhaustive_cap=5)


def test_johnson_stars_are_the_maximizers(built):
    g, census, _, _ = built("johnson", 7, 3)
    thr = threshold_graph(g, census, 1)
    res = max_clique(thr)
    assert res.optimum == 15 and len(res.families) == 7 and not res.truncated
    stars = {
        frozenset(i for i, lab in enumerate(g.vertices) if x in lab)
        for x in range(1, 8)
    }
    assert {frozenset(f) for f in res.families} == stars


def test_johnson_t2_families(built):
    g, census, _, _ = built("johnson", 7, 3)
    thr = threshold_graph(g, census, 2)
    res = max_clique(thr)
    assert res.optimum == 5 and len(res.families) == 21
    pair_stars = {
        frozenset(i for i, lab in enumerate(g.vertices) if set(pair) <= set(lab))
        for pair in itertools.combinations(range(1, 8), 2)
    }
    assert {frozenset(f) for f in res.families} == pair_stars


def test_enumeration_cap_truncates(built):
    g, census, _, _ = built("johnson", 7, 3)
    thr = threshold_graph(g, census, 2)
    res = max_clique(thr, enum_cap=5)
    assert res.optimum == 5
    assert len(res.families) == 5 and res.truncated


def test_hint_and_warm_start_do_not_change_results(built):
    g, census, _, sys_ = built("twisted", 2, 2)
    thr = threshold_graph(g, census, 1)
    x2 = [i for i, lab in enumerate(g.vertices) if lab[0] == "X2"]
    plain = max_clique(thr)
    hinted = max_clique(thr, upper_bound_hint=15)
    warmed = max_clique(thr, warm_start=x2)
    both = max_clique(thr, upper_bound_hint=15, warm_start=x2)
    assert plain.optimum == hinted.optimum == warmed.optimum == both.optimum == 15
    assert plain.families == hinted.families == warmed.families == both.families
    non_edge = next(
        (i, j) for i in range(thr.n) for j in range(i + 1, thr.n) if not thr.is_edge(i, j)
    )
    with pytest.raises(ParameterError):
        max_clique(thr, warm_start=list(non_edge))


def test_result_independent_of_vertex_order(built):
    g, census, _, _ = built("johnson", 7, 3)
    thr = threshold_graph(g, census, 1)
    perm = list(range(g.n))[::-1]
    inv = {old: new for new, old in enumerate(perm)}
    adj = [0] * g.n
    for new_i, old_i in enumerate(perm):
        for old_j in range(g.n):
            if thr.is_edge(old_i, old_j):
                adj[new_i] |= 1 << inv[old_j]
    shuffled = Graph("shuffled", {}, [thr.vertices[i] for i in perm], adj)
    res_a = max_clique(thr)
    res_b = max_clique(shuffled)
    assert res_a.optimum == res_b.optimum
    fams_a = {frozenset(thr.vertices[i] for i in f) for f in res_a.families}
    fams_b = {frozenset(shuffled.vertices[i] for i in f) for f in res_b.families}
    assert fams_a == fams_b


def test_wrong_upper_bound_hint_detected():
    k6 = build_hamming(1, 6)
    with pytest.raises(DrgError):
        max_clique(k6, upper_bound_hint=3)


def test_lp_consistency_on_feasible_instances(built):
    rows = [
        ("johnson", (7, 3), 1, 15),
        ("johnson", (7, 3), 2, 5),
        ("grassmann", (2, 4, 2), 1, 7),
        ("grassmann", (2, 5, 2), 1, 15),
        ("bilinear", (2, 2, 2), 1, 4),
        ("twisted", (2, 2), 1, 15),
    ]
    for family, args, t, expected in rows:
        g, census, _, sys_ = built(family, *args)
        cert = solve_certificate(sys_, t)
        res = max_clique(threshold_graph(g, census, t))
        assert res.optimum <= cert.bound
        assert res.optimum == expected
        if cert.feasible:
            assert cert.bound == expected  # equality observed on all of these


def test_grassmann_vs_twisted_maximizer_counts(built):
    # ordinary J_2(5,2) has 31 maximum 1-intersecting families (the pencils);
    # the twisted graph collapses that to the single family X2
    g, census, _, _ = built("grassmann", 2, 5, 2)
    res = max_clique(threshold_graph(g, census, 1))
    assert res.optimum == 15 and len(res.families) == 31
    g, census, _, _ = built("twisted", 2, 2)
    res = max_clique(threshold_graph(g, census, 1))
    assert res.optimum == 15 and len(res.families) == 1


# ---------------------------------------------------------------------------
# descendent families


def test_descendent_families_221(built):
    fams = enumerate_descendent_families(2, 2, 1)
    assert len(fams) == 1
    fam = fams[0]
    assert fam.u.dim == 0 and fam.size == 15
    g, _, _, _ = built("twisted", 2, 2)
    x2_labels = {lab for lab in g.vertices if lab[0] == "X2"}
    assert set(fam.labels()) == x2_labels


def test_descendent_families_232():
    fams = enumerate_descendent_families(2, 3, 2)
    # oracle: count the 1-dim subspaces of GF(2)^6 directly
    assert len(fams) == 63 == 2 ** 6 - 1 == q_binomial(6, 1, 2)
    assert all(f.size == 31 for f in fams)
    assert all(f.u.dim == 1 for f in fams)
    # membership oracle on the first family: planes of H containing u
    fam = fams[0]
    assert all(x.contains(fam.u) for x in fam.members)


def test_descendent_families_231():
    fams = enumerate_descendent_families(2, 3, 1)
    assert len(fams) == 1
    assert fams[0].size == 651 == q_binomial(6, 2, 2)


def test_descendent_family_errors():
    with pytest.raises(ParameterError):
        enumerate_descendent_families(2, 3, 3)
    with pytest.raises(UnsupportedField):
        enumerate_descendent_families(4, 2, 1)


def test_verify_descendent_family_parameter_tier():
    arr = twisted_intersection_array(2, 3)
    sys_ = eigensystem_from_array(arr, arr.vertex_count())
    fams = enumerate_descendent_families(2, 3, 2)
    for fam in fams[:5]:
        wr, cr = verify_descendent_family(fam, 2, 3, 2, sys_)
        assert (wr.width, wr.dual_width, wr.descendent) == (1, 2, True)
        assert cr.verdict == "tight" and cr.size == 31 == cr.bound


def test_verify_descendent_family_graph_tier_agrees(built):
    g, census, _, sys_ = built("twisted", 2, 2)
    fams = enumerate_descendent_families(2, 2, 1)
    wr, cr = verify_descendent_family(fams[0], 2, 2, 1, sys_)
    assert (wr.width, wr.dual_width) == (1, 1)
    assert cr.verdict == "tight" and cr.size == 15
    # cross-check histogram against the materialized graph census
    from drgcert.graphs import twisted_x2_distance_counts

    counts = twisted_x2_distance_counts(list(fams[0].members), 2, 2)
    idx = [g.index_of(lab) for lab in fams[0].labels()]
    expected = [0] * (census.diameter + 1)
    for i in idx:
        for j in idx:
            expected[census.d(i, j)] += 1
    assert counts == expected


def test_whole_x2_is_descendent_at_t1_parameter_tier():
    arr = twisted_intersection_array(2, 3)
    sys_ = eigensystem_from_array(arr, arr.vertex_count())
    fams = enumerate_descendent_families(2, 3, 1)
    wr, cr = verify_descendent_family(fams[0], 2, 3, 1, sys_)
    assert (wr.width, wr.dual_width, wr.descendent) == (2, 1, True)
    assert cr.verdict == "tight" and cr.size == 651 == cr.bound


# ---------------------------------------------------------------------------
# the theorem pipeline


def test_verify_theorem_221():
    report = verify_theorem(2, 2, 1)
    assert report.passed
    assert report.arrays_match and report.q_matrices_match
    assert report.certificate_feasible
    assert report.bound == report.expected == report.optimum == 15
    assert report.n_maximizers == 1 and report.maximizers_match
    assert not report.truncated


def test_verify_theorem_parameter_errors():
    with pytest.raises(ParameterError):
        verify_theorem(2, 2, 0)
    with pytest.raises(ParameterError):
        verify_theorem(2, 2, 2)
    with pytest.raises(ParameterError):
        verify_theorem(2, 1, 1)
    with pytest.raises(UnsupportedField):
        verify_theorem(9, 2, 1)


def test_verify_theorem_tier_refusals():
    with pytest.raises(TierLimitExceeded):
        verify_theorem(2, 5, 2)  # astronomically large; refused before any work
    with pytest.raises(TierLimitExceeded):
        verify_theorem(2, 3, 1)  # 11811 vertices > exhaustive cap
    with pytest.raises(TierLimitExceeded):
        verify_theorem(3, 2, 1)  # 1210 vertices > default cap
