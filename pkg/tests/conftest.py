import pytest

from drgcert.graphs import (
    build_bilinear,
    build_grassmann,
    build_hamming,
    build_johnson,
    build_twisted_grassmann,
    check_distance_regular,
    distance_census,
)
from drgcert.scheme import eigensystem_from_array

_BUILDERS = {
    "johnson": build_johnson,
    "hamming": build_hamming,
    "grassmann": build_grassmann,
    "bilinear": build_bilinear,
    "twisted": build_twisted_grassmann,
}


@pytest.fixture(scope="session")
def built():
    """built(family, *params) -> (graph, census, array, eigensystem), cached
    for the whole test session."""
    cache = {}

    def get(family, *params):
        key = (family, params)
        if key not in cache:
            graph = _BUILDERS[family](*params)
            census = distance_census(graph)
            arr = check_distance_regular(graph, census)
            sys_ = eigensystem_from_array(arr, graph.n)
            cache[key] = (graph, census, arr, sys_)
        return cache[key]

    return get
