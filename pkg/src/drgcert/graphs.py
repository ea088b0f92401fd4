"""Concrete distance-regular graph families as explicit vertex/edge sets.

Vertices are plain nested tuples (canonical labels, JSON-friendly); adjacency
is stored as one Python-int bitmask per vertex.  Distances are always computed
by breadth-first search, never by closed-form distance formulas; the
distance-regularity check then recovers the intersection array and
cross-validates the construction.

Closed-form intersection arrays (for the parameter tier, where the graph
itself is never materialized) exist only for the Grassmann and Hamming
families and are cross-validated against BFS-extracted arrays in the test
suite.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb

from .errors import (
    DisconnectedGraph,
    DistanceUndetermined,
    NotDistanceRegular,
    ParameterError,
    TierLimitExceeded,
    UnsupportedField,
)
from .exact import is_prime, q_binomial, q_int, rank_gf, rref_gf

DEFAULT_VERTEX_CAP = 20_000

#: point-set bitmasks are kept only while q^n stays below this
_MASK_LIMIT = 1 << 14


def iter_bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# subspaces of GF(q)^n


class SubspaceRep:
    """A subspace of GF(q)^n, stored as its unique RREF basis (no zero rows).

    Two SubspaceReps compare equal iff they are the same subspace.  For small
    q^n a bitmask over all q^n point codes is cached, which turns intersection
    dimension into one AND plus a popcount.
    """

    __slots__ = ("n", "q", "rows", "_mask")

    def __init__(self, n: int, q: int, rows, canonical: bool = False):
        self.n = n
        self.q = q
        if canonical:
            self.rows = tuple(tuple(r) for r in rows)
        else:
            self.rows, _ = rref_gf(rows, q)
        self._mask = None

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, SubspaceRep)
            and self.n == other.n
            and self.q == other.q
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n, self.q, self.rows))

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return f"SubspaceRep(n={self.n}, q={self.q}, rows={self.rows})"

    def _encode(self, vec) -> int:
        code = 0
        for i, x in enumerate(vec):
            code += x * self.q ** i
        return code

    def point_mask(self) -> int:
        """Bitmask with bit set at the code of every vector of the subspace."""
        if self._mask is not None:
            return self._mask
        if self.q ** self.n > _MASK_LIMIT:
            raise TierLimitExceeded(f"point mask over GF({self.q})^{self.n} too large")
        if self.q == 2:
            pts = {0}
            for row in self.rows:
                r = self._encode(row)
                pts |= {x ^ r for x in pts}
            mask = 0
            for x in pts:
                mask |= 1 << x
        else:
            mask = 0
            for coeffs in itertools.product(range(self.q), repeat=self.dim):
                vec = [0] * self.n
                for ci, row in zip(coeffs, self.rows):
                    if ci:
                        for j, x in enumerate(row):
                            vec[j] = (vec[j] + ci * x) % self.q
                mask |= 1 << self._encode(vec)
        self._mask = mask
        return mask

    def meet_dim(self, other: "SubspaceRep") -> int:
        """Dimension of the intersection with another subspace."""
        if self.q ** self.n <= _MASK_LIMIT:
            common = (self.point_mask() & other.point_mask()).bit_count()
            dim = 0
            size = 1
            while size < common:
                size *= self.q
                dim += 1
            assert size == common
            return dim
        joined = rank_gf(self.rows + other.rows, self.q)
        return self.dim + other.dim - joined

    def contains(self, other: "SubspaceRep") -> bool:
        return self.meet_dim(other) == other.dim

    def elements(self):
        """All nonzero vectors of the subspace, as coordinate tuples."""
        for coeffs in itertools.product(range(self.q), repeat=self.dim):
            if not any(coeffs):
                continue
            vec = [0] * self.n
            for ci, row in zip(coeffs, self.rows):
                if ci:
                    for j, x in enumerate(row):
                        vec[j] = (vec[j] + ci * x) % self.q
            yield tuple(vec)

    def is_inside_hyperplane(self) -> bool:
        """True iff every vector has last coordinate zero."""
        return all(row[-1] == 0 for row in self.rows)


def all_subspaces(n: int, k: int, q: int):
    """Yield every k-dim subspace of GF(q)^n exactly once, as canonical RREF.

    Enumeration is by pivot pattern plus free entries, so each subspace is
    produced directly in canonical form (no reduction step, no duplicates).
    """
    if k == 0:
        yield SubspaceRep(n, q, (), canonical=True)
        return
    if k > n:
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free_cells = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivot_set
        ]
        for values in itertools.product(range(q), repeat=len(free_cells)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free_cells, values):
                rows[i][j] = v
            yield SubspaceRep(n, q, tuple(tuple(r) for r in rows), canonical=True)


def sub_subspaces(rep: SubspaceRep, k: int):
    """All k-dim subspaces of a given subspace, via its coefficient space."""
    for coeff in all_subspaces(rep.dim, k, rep.q):
        rows = []
        for crow in coeff.rows:
            vec = [0] * rep.n
            for ci, row in zip(crow, rep.rows):
                if ci:
                    for j, x in enumerate(row):
                        vec[j] = (vec[j] + ci * x) % rep.q
            rows.append(tuple(vec))
        yield SubspaceRep(rep.n, rep.q, tuple(rows), canonical=True)


# ---------------------------------------------------------------------------
# graphs


class Graph:
    """Finite simple connected graph with canonical vertex labels.

    adj[i] is an int bitmask of the neighbours of vertex i.
    """

    __slots__ = ("family", "params", "vertices", "adj", "_index")

    def __init__(self, family: str, params: dict, vertices: list, adj: list[int]):
        self.family = family
        self.params = dict(params)
        self.vertices = list(vertices)
        self.adj = list(adj)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ParameterError("duplicate vertex labels")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ParameterError(f"label {label!r} is not a vertex of {self.family}") from None

    def is_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def edge_count(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    def __repr__(self):
        return f"Graph({self.family}, n={self.n}, params={self.params})"


def _assemble(family, params, items, adjacent, expected_n=None, vertex_cap=DEFAULT_VERTEX_CAP):
    """Sort (label, obj) items, apply the pairwise rule, validate connectivity."""
    if expected_n is not None and expected_n > vertex_cap:
        raise TierLimitExceeded(
            f"{family}{params} has {expected_n} vertices; cap is {vertex_cap}"
        )
    items = sorted(items, key=lambda t: t[0])
    n = len(items)
    if expected_n is not None and n != expected_n:
        raise ParameterError(f"{family}: enumerated {n} vertices, expected {expected_n}")
    labels = [lab for lab, _ in items]
    objs = [obj for _, obj in items]
    adj = [0] * n
    for i in range(n):
        oi = objs[i]
        for j in range(i + 1, n):
            if adjacent(oi, objs[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    graph = Graph(family, params, labels, adj)
    _assert_connected(graph)
    return graph


def _assert_connected(graph: Graph):
    n = graph.n
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= graph.adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    if seen != (1 << n) - 1:
        raise DisconnectedGraph(f"{graph.family} is not connected")


def build_johnson(v: int, d: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Johnson graph J(v,d): d-subsets of {1..v}, adjacent iff they share d-1
    elements.  d > v/2 is normalized to v-d (complementation isomorphism)."""
    if d <= 0 or v < d:
        raise ParameterError(f"J({v},{d}) needs 0 < d <= v")
    if d > v - d:
        d = v - d
    if d == 0:
        raise ParameterError(f"J({v},{v}) is a single vertex; refusing")
    items = []
    for combo in itertools.combinations(range(1, v + 1), d):
        mask = 0
        for x in combo:
            mask |= 1 << x
        items.append((combo, mask))
    return _assemble(
        "johnson", {"v": v, "d": d}, items,
        lambda a, b: (a & b).bit_count() == d - 1,
        expected_n=comb(v, d), vertex_cap=vertex_cap,
    )


def build_hamming(d: int, q: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Hamming graph H(d,q): words of length d over a q-letter alphabet,
    adjacent iff they differ in exactly one position."""
    if d < 1 or q < 2:
        raise ParameterError(f"H({d},{q}) needs d >= 1 and q >= 2")
    items = [(w, w) for w in itertools.product(range(q), repeat=d)]
    return _assemble(
        "hamming", {"d": d, "q": q}, items,
        lambda a, b: sum(x != y for x, y in zip(a, b)) == 1,
        expected_n=q ** d, vertex_cap=vertex_cap,
    )


def build_grassmann(q: int, v: int, d: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Grassmann graph J_q(v,d): d-dim subspaces of GF(q)^v, adjacent iff the
    intersection has dimension d-1.  d > v/2 is normalized to v-d."""
    if not is_prime(q):
        raise UnsupportedField(f"q={q} is not prime")
    if d <= 0 or v < d:
        raise ParameterError(f"J_q({v},{d}) needs 0 < d <= v")
    if d > v - d:
        d = v - d
    if d == 0:
        raise ParameterError(f"J_{q}({v},{v}) is a single vertex; refusing")
    expected = q_binomial(v, d, q)
    if expected > vertex_cap:
        raise TierLimitExceeded(f"J_{q}({v},{d}) has {expected} vertices; cap is {vertex_cap}")
    items = [(rep.rows, rep) for rep in all_subspaces(v, d, q)]
    return _assemble(
        "grassmann", {"q": q, "v": v, "d": d}, items,
        lambda a, b: a.meet_dim(b) == d - 1,
        expected_n=expected, vertex_cap=vertex_cap,
    )


def build_bilinear(q: int, d: int, e: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Bilinear forms graph Bil_q(d,e): d x e matrices over GF(q), adjacent
    iff the difference has rank one."""
    if not is_prime(q):
        raise UnsupportedField(f"q={q} is not prime")
    if d < 1 or e < d:
        raise ParameterError(f"Bil_q({d},{e}) needs 1 <= d <= e")
    expected = q ** (d * e)
    if expected > vertex_cap:
        raise TierLimitExceeded(f"Bil_{q}({d},{e}) has {expected} vertices; cap is {vertex_cap}")
    items = []
    for flat in itertools.product(range(q), repeat=d * e):
        rows = tuple(flat[i * e:(i + 1) * e] for i in range(d))
        items.append((rows, rows))

    def adjacent(a, b):
        diff = [[(x - y) % q for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
        return rank_gf(diff, q) == 1

    return _assemble(
        "bilinear", {"q": q, "d": d, "e": e}, items, adjacent,
        expected_n=expected, vertex_cap=vertex_cap,
    )


def build_twisted_grassmann(q: int, d: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Twisted Grassmann graph on GF(q)^(2d+1).

    With H the span of the first 2d coordinate vectors (all vectors whose
    last coordinate vanishes): X1 holds the (d+1)-dim subspaces not contained
    in H, X2 the (d-1)-dim subspaces of H, and x ~ y iff
    dim x + dim y - 2 dim(x meet y) = 2.  Labels carry the part tag.
    """
    if not is_prime(q):
        raise UnsupportedField(f"q={q} is not prime")
    if d < 2:
        raise ParameterError(f"twisted Grassmann needs d >= 2, got d={d}")
    n_amb = 2 * d + 1
    expected = q_binomial(n_amb, d, q)
    if expected > vertex_cap:
        raise TierLimitExceeded(
            f"twisted({q},{d}) has {expected} vertices; cap is {vertex_cap}"
        )
    items = []
    for rep in all_subspaces(n_amb, d + 1, q):
        if not rep.is_inside_hyperplane():
            items.append((("X1", rep.rows), rep))
    n_x1 = len(items)
    for rep in twisted_x2_vertices(q, d):
        items.append((("X2", rep.rows), rep))
    if n_x1 != q_binomial(n_amb, d + 1, q) - q_binomial(2 * d, d + 1, q):
        raise ParameterError("twisted: X1 enumeration is inconsistent")

    def adjacent(a, b):
        return a.dim + b.dim - 2 * a.meet_dim(b) == 2

    return _assemble(
        "twisted", {"q": q, "d": d}, items, adjacent,
        expected_n=expected, vertex_cap=vertex_cap,
    )


def twisted_x2_vertices(q: int, d: int) -> list[SubspaceRep]:
    """The X2 part of the twisted graph: (d-1)-dim subspaces of the fixed
    hyperplane, embedded in GF(q)^(2d+1) with trailing zero coordinate."""
    n_amb = 2 * d + 1
    reps = []
    for rep in all_subspaces(2 * d, d - 1, q):
        rows = tuple(row + (0,) for row in rep.rows)
        reps.append(SubspaceRep(n_amb, q, rows, canonical=True))
    reps.sort()
    return reps


# ---------------------------------------------------------------------------
# distances


class DistanceCensus:
    """All-pairs BFS distances, one bytearray row per source vertex."""

    __slots__ = ("dist", "diameter")

    def __init__(self, dist: list[bytearray], diameter: int):
        self.dist = dist
        self.diameter = diameter

    def d(self, i: int, j: int) -> int:
        return self.dist[i][j]


def distance_census(G: Graph) -> DistanceCensus:
    """Exact graph distances by BFS from every vertex."""
    n = G.n
    full = (1 << n) - 1
    rows = []
    for s in range(n):
        row = bytearray(n)
        seen = 1 << s
        frontier = seen
        level = 0
        while frontier:
            for v in iter_bits(frontier):
                row[v] = level
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= G.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
            level += 1
        if seen != full:
            raise DisconnectedGraph(f"vertex {s} does not reach every vertex")
        rows.append(row)
    return DistanceCensus(rows, max(max(r) for r in rows))


@dataclass(frozen=True)
class IntersectionArray:
    """{b_0..b_{d-1}; c_1..c_d} with derived a_i and valencies."""

    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        if len(self.b) != len(self.c) or not self.b:
            raise ParameterError("intersection array needs matching nonempty b and c")
        if any(x <= 0 for x in self.b) or any(x <= 0 for x in self.c):
            raise ParameterError("intersection numbers must be positive")
        self.valencies()  # forces the integrality check

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def b0(self) -> int:
        return self.b[0]

    def a(self) -> tuple[int, ...]:
        out = []
        for i in range(self.d + 1):
            bi = self.b[i] if i < self.d else 0
            ci = self.c[i - 1] if i > 0 else 0
            ai = self.b0 - bi - ci
            if ai < 0:
                raise ParameterError(f"a_{i} = {ai} < 0; invalid array")
            out.append(ai)
        return tuple(out)

    def valencies(self) -> tuple[int, ...]:
        k = [1]
        for i in range(self.d):
            num = k[-1] * self.b[i]
            if num % self.c[i]:
                raise ParameterError(f"k_{i+1} = {num}/{self.c[i]} is not integral")
            k.append(num // self.c[i])
        return tuple(k)

    def vertex_count(self) -> int:
        return sum(self.valencies())


def check_distance_regular(G: Graph, census: DistanceCensus) -> IntersectionArray:
    """Verify that (c_i, a_i, b_i) are pair-independent and return the array.

    Raises NotDistanceRegular with a witness pair on the first mismatch.
    """
    n = G.n
    dmax = census.diameter
    classes = [[0] * (dmax + 1) for _ in range(n)]
    for x in range(n):
        row = census.dist[x]
        cx = classes[x]
        for y in range(n):
            cx[row[y]] |= 1 << y
    triple = [None] * (dmax + 1)
    for x in range(n):
        row = census.dist[x]
        cx = classes[x]
        for y in range(n):
            k = row[y]
            ady = G.adj[y]
            ck = (ady & cx[k - 1]).bit_count() if k > 0 else 0
            ak = (ady & cx[k]).bit_count()
            bk = (ady & cx[k + 1]).bit_count() if k < dmax else 0
            if triple[k] is None:
                triple[k] = (ck, ak, bk)
            elif triple[k] != (ck, ak, bk):
                raise NotDistanceRegular(
                    f"pair {G.vertices[x]!r}, {G.vertices[y]!r} at distance {k} "
                    f"sees {(ck, ak, bk)}, expected {triple[k]}",
                    witness=(G.vertices[x], G.vertices[y]),
                )
    b = tuple(triple[k][2] for k in range(dmax))
    c = tuple(triple[k][0] for k in range(1, dmax + 1))
    arr = IntersectionArray(b, c)
    if arr.vertex_count() != n:
        raise NotDistanceRegular("valency sum does not match the vertex count")
    return arr


# ---------------------------------------------------------------------------
# closed-form intersection arrays (parameter tier)


def grassmann_intersection_array(q: int, v: int, d: int) -> IntersectionArray:
    """Intersection array of J_q(v,d), 1 <= d <= v/2."""
    if not is_prime(q):
        raise UnsupportedField(f"q={q} is not prime")
    if d < 1 or 2 * d > v:
        raise ParameterError(f"J_q({v},{d}) array needs 1 <= d <= v/2")
    b = tuple(
        q ** (2 * i + 1) * q_int(d - i, q) * q_int(v - d - i, q) for i in range(d)
    )
    c = tuple(q_int(i, q) ** 2 for i in range(1, d + 1))
    arr = IntersectionArray(b, c)
    assert arr.vertex_count() == q_binomial(v, d, q)
    return arr


def hamming_intersection_array(d: int, q: int) -> IntersectionArray:
    """Intersection array of H(d,q)."""
    if d < 1 or q < 2:
        raise ParameterError(f"H({d},{q}) array needs d >= 1 and q >= 2")
    b = tuple((d - i) * (q - 1) for i in range(d))
    c = tuple(range(1, d + 1))
    arr = IntersectionArray(b, c)
    assert arr.vertex_count() == q ** d
    return arr


def twisted_intersection_array(q: int, d: int) -> IntersectionArray:
    """The twisted Grassmann graph has the same structure constants as
    J_q(2d+1,d), so its array is that of the ordinary Grassmann graph."""
    if d < 2:
        raise ParameterError(f"twisted array needs d >= 2, got d={d}")
    return grassmann_intersection_array(q, 2 * d + 1, d)


# ---------------------------------------------------------------------------
# twisted X2 distances without the full graph


def twisted_x2_distance(x: SubspaceRep, y: SubspaceRep, hyperplanes_of_x=None) -> int:
    """Distance in the twisted graph between two X2 vertices, from the
    adjacency rule alone (the graph is never materialized).

    Both vertices have dimension d-1 inside H, so they are adjacent iff they
    meet in dimension d-2.  A non-adjacent pair has no common neighbour in
    X1: X1 neighbours of an X2 vertex are its (d+1)-dim supersets outside H,
    and a common superset would force dim(x+y) <= d, which is adjacency.
    Any common X2 neighbour z satisfies z = (z meet x) + <c> where z meet x
    is a hyperplane of x and c lies in y but not in x, so enumerating those
    candidates decides distance 2 completely.
    """
    if x == y:
        return 0
    dim = x.dim  # = d - 1; adjacency needs a (d-2)-dim meet, i.e. dim - 1
    if x.meet_dim(y) == dim - 1:
        return 1
    if hyperplanes_of_x is None:
        hyperplanes_of_x = list(sub_subspaces(x, dim - 1))
    x_mask = x.point_mask() if x.q ** x.n <= _MASK_LIMIT else None
    for hyp in hyperplanes_of_x:
        for c in y.elements():
            if x_mask is not None:
                in_x = bool(x_mask >> x._encode(c) & 1)
            else:
                in_x = x.contains(SubspaceRep(x.n, x.q, (c,)))
            if in_x:
                continue
            z = SubspaceRep(x.n, x.q, hyp.rows + (c,))
            if z.meet_dim(y) == dim - 1:
                return 2
    raise DistanceUndetermined(
        "pair is at distance >= 3; materialize the graph for an exact value"
    )


def twisted_x2_distance_counts(members: list[SubspaceRep], q: int, d: int) -> list[int]:
    """Histogram of ordered-pair distances within a set of X2 vertices, over
    the twisted graph of diameter d, without materializing it."""
    counts = [0] * (d + 1)
    counts[0] = len(members)
    for i, x in enumerate(members):
        hyps = None
        for y in members[i + 1:]:
            if hyps is None:
                hyps = list(sub_subspaces(x, x.dim - 1))
            counts[twisted_x2_distance(x, y, hyps)] += 2
    return counts


# ---------------------------------------------------------------------------
# graph cache files


CACHE_MAGIC = "DRGCACHE 1"


def _label_json(label) -> str:
    return json.dumps(label, separators=(",", ":"))


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def graph_cache_text(G: Graph) -> str:
    """Versioned text format: magic line, JSON metadata, one canonical label
    per vertex, one 'i j' line per edge (i < j, ascending).  Byte-identical
    for identical parameters."""
    meta = {
        "edges": G.edge_count(),
        "family": G.family,
        "params": G.params,
        "vertices": G.n,
    }
    lines = [CACHE_MAGIC, json.dumps(meta, sort_keys=True, separators=(",", ":"))]
    lines.extend(_label_json(v) for v in G.vertices)
    for i in range(G.n):
        higher = G.adj[i] >> (i + 1) << (i + 1)
        for j in iter_bits(higher):
            lines.append(f"{i} {j}")
    return "\n".join(lines) + "\n"


def write_graph_cache(G: Graph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(graph_cache_text(G))


def read_graph_cache(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CACHE_MAGIC:
        raise ParameterError(f"{path} is not a {CACHE_MAGIC} file")
    meta = json.loads(lines[1])
    n = meta["vertices"]
    labels = [_tuplify(json.loads(s)) for s in lines[2:2 + n]]
    adj = [0] * n
    edges = 0
    for line in lines[2 + n:]:
        i, j = map(int, line.split())
        adj[i] |= 1 << j
        adj[j] |= 1 << i
        edges += 1
    if edges != meta["edges"]:
        raise ParameterError(f"{path}: edge count mismatch")
    return Graph(meta["family"], meta["params"], labels, adj)
