"""Association-scheme eigensystem of a distance-regular graph, exactly.

The eigenvalues of the distance-1 matrix are the roots of the characteristic
polynomial of the (d+1) x (d+1) tridiagonal intersection matrix; for every
in-scope family they are integers, found by scanning [-k, k] (all eigenvalues
are bounded by the valency).  P is filled by the three-term recurrence of the
distance polynomials, Q = |X| P^{-1}, and the Krein tensor certifies the
Q-polynomial ordering.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import lcm

import numpy as np

from .errors import (
    IrrationalEigenvalue,
    DrgError,
    NotQPolynomial,
    ParameterError,
    TierLimitExceeded,
)
from .exact import ExactMatrix, format_fraction, parse_fraction
from .graphs import DistanceCensus, Graph, IntersectionArray

FULL_MATRIX_CAP = 1_000

#: ordering searches are brute force over (d)! candidates, so small d only
_ORDERING_SEARCH_MAX_D = 6


@dataclass(frozen=True)
class SchemeEigensystem:
    """Exact eigendata of a (d+1)-class symmetric scheme.

    The idempotent ordering is Q-polynomial; `ordering` maps position to the
    index in descending-eigenvalue order (identity unless the descending
    candidate failed), and `passing_orderings` records every ordering that
    satisfies the tridiagonality test.
    """

    n: int
    d: int
    eigenvalues: tuple[int, ...]
    k: tuple[int, ...]
    m: tuple[int, ...]
    P: ExactMatrix
    Q: ExactMatrix
    ordering: tuple[int, ...]
    passing_orderings: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class KreinTensor:
    """Structure constants of entrywise multiplication in the E-basis."""

    values: tuple[tuple[tuple[Fraction, ...], ...], ...]  # values[k][i][j]

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def q(self, k: int, i: int, j: int) -> Fraction:
        return self.values[k][i][j]


@dataclass(frozen=True)
class QPolynomialVerdict:
    natural_ok: bool
    passing: tuple[tuple[int, ...], ...]


def _char_poly(arr: IntersectionArray) -> list[int]:
    """Monic integer characteristic polynomial of the tridiagonal
    intersection matrix, by the principal-minor recurrence."""
    a = arr.a()
    d = arr.d
    prev = [1]
    cur = [-a[0], 1]
    for i in range(1, d + 1):
        shifted = [0] + cur
        scaled = [-a[i] * x for x in cur]
        offdiag = arr.b[i - 1] * arr.c[i - 1]
        nxt = [0] * (len(shifted))
        for j, x in enumerate(shifted):
            nxt[j] += x
        for j, x in enumerate(scaled):
            nxt[j] += x
        for j, x in enumerate(prev):
            nxt[j] -= offdiag * x
        prev, cur = cur, nxt
    return cur


def _poly_eval(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eigensystem_from_array(
    arr: IntersectionArray, n_vertices: int, check_q_polynomial: bool = True
) -> SchemeEigensystem:
    """Exact eigensystem from an intersection array.

    Raises IrrationalEigenvalue when the characteristic polynomial has fewer
    than d+1 integer roots, and NotQPolynomial when no idempotent ordering is
    Q-polynomial (searched exhaustively for d <= 6, descending first).
    """
    k = arr.valencies()
    if sum(k) != n_vertices:
        raise ParameterError(
            f"vertex count {n_vertices} does not match valency sum {sum(k)}"
        )
    d = arr.d
    a = arr.a()
    poly = _char_poly(arr)
    b0 = arr.b0
    thetas = [t for t in range(b0, -b0 - 1, -1) if _poly_eval(poly, t) == 0]
    if len(thetas) != d + 1:
        raise IrrationalEigenvalue(
            f"found {len(thetas)} integer eigenvalues in [-{b0},{b0}], need {d + 1}"
        )
    prows = []
    for th in thetas:
        v = [Fraction(1), Fraction(th)]
        for j in range(1, d):
            nxt = ((th - a[j]) * v[j] - arr.b[j - 1] * v[j - 1]) / arr.c[j]
            v.append(nxt)
        prows.append(v)
    P = ExactMatrix(prows)
    assert P.row(0) == tuple(Fraction(x) for x in k)
    Q = P.inverse().scale(n_vertices)
    m = []
    for j in range(d + 1):
        mj = Q[0, j]
        if mj.denominator != 1 or mj <= 0:
            raise ParameterError(f"multiplicity m_{j} = {mj} is not a positive integer")
        m.append(int(mj))
    if sum(m) != n_vertices:
        raise ParameterError("multiplicities do not sum to the vertex count")
    sys = SchemeEigensystem(
        n=n_vertices,
        d=d,
        eigenvalues=tuple(thetas),
        k=k,
        m=tuple(m),
        P=P,
        Q=Q,
        ordering=tuple(range(d + 1)),
        passing_orderings=(),
    )
    if not check_q_polynomial:
        return sys
    kt = krein_parameters(sys)
    verdict = verify_q_polynomial(kt)
    if verdict.natural_ok:
        return SchemeEigensystem(
            n=sys.n, d=d, eigenvalues=sys.eigenvalues, k=sys.k, m=sys.m,
            P=sys.P, Q=sys.Q, ordering=tuple(range(d + 1)),
            passing_orderings=verdict.passing,
        )
    return _reorder(sys, verdict.passing[0], verdict.passing)


def _reorder(sys: SchemeEigensystem, perm, passing) -> SchemeEigensystem:
    d = sys.d
    P = ExactMatrix([sys.P.row(perm[i]) for i in range(d + 1)])
    Q = ExactMatrix(
        [[sys.Q[i, perm[j]] for j in range(d + 1)] for i in range(d + 1)]
    )
    return SchemeEigensystem(
        n=sys.n,
        d=d,
        eigenvalues=tuple(sys.eigenvalues[perm[i]] for i in range(d + 1)),
        k=sys.k,
        m=tuple(sys.m[perm[j]] for j in range(d + 1)),
        P=P,
        Q=Q,
        ordering=tuple(perm),
        passing_orderings=passing,
    )


def krein_parameters(sys: SchemeEigensystem) -> KreinTensor:
    """q^k_{ij} = |X|^{-1} sum_l Q_li Q_lj P_kl; nonnegative for any scheme,
    so a negative entry is reported as a data error."""
    d = sys.d
    vals = []
    for kk in range(d + 1):
        plane = []
        for i in range(d + 1):
            row = []
            for j in range(d + 1):
                s = sum(
                    sys.Q[l, i] * sys.Q[l, j] * sys.P[kk, l] for l in range(d + 1)
                ) / sys.n
                if s < 0:
                    raise DrgError(
                        f"Krein parameter q^{kk}_{{{i},{j}}} = {s} < 0; invalid scheme data"
                    )
                row.append(s)
            plane.append(tuple(row))
        vals.append(tuple(plane))
    return KreinTensor(tuple(vals))


def _ordering_passes(kt: KreinTensor, perm) -> bool:
    d = kt.d
    e1 = perm[1]
    for i in range(d + 1):
        for kk in range(d + 1):
            val = kt.q(perm[kk], e1, perm[i])
            if abs(kk - i) > 1 and val != 0:
                return False
            if abs(kk - i) == 1 and val == 0:
                return False
    return True


def verify_q_polynomial(kt: KreinTensor) -> QPolynomialVerdict:
    """Check tridiagonality of q^k_{1i}; if the natural ordering fails and
    d <= 6, search every ordering that fixes E_0."""
    d = kt.d
    natural = tuple(range(d + 1))
    if _ordering_passes(kt, natural):
        passing = [natural]
        if d <= _ORDERING_SEARCH_MAX_D:
            passing = [
                (0,) + p
                for p in permutations(range(1, d + 1))
                if _ordering_passes(kt, (0,) + p)
            ]
        return QPolynomialVerdict(natural_ok=True, passing=tuple(passing))
    if d > _ORDERING_SEARCH_MAX_D:
        raise NotQPolynomial(
            f"natural ordering fails and d={d} exceeds the ordering search cap"
        )
    passing = [
        (0,) + p
        for p in permutations(range(1, d + 1))
        if _ordering_passes(kt, (0,) + p)
    ]
    if not passing:
        raise NotQPolynomial("no idempotent ordering is Q-polynomial")
    return QPolynomialVerdict(natural_ok=False, passing=tuple(passing))


# ---------------------------------------------------------------------------
# full-matrix tier


def materialize_distance_matrices(
    G: Graph, census: DistanceCensus, cap: int = FULL_MATRIX_CAP
) -> list[np.ndarray]:
    """Explicit 0/1 distance matrices A_0..A_d as int64 arrays."""
    if G.n > cap:
        raise TierLimitExceeded(f"{G.n} vertices exceeds the full-matrix cap {cap}")
    dist = np.array([list(row) for row in census.dist], dtype=np.int64)
    return [(dist == j).astype(np.int64) for j in range(census.diameter + 1)]


def materialize_idempotents(
    G: Graph, census: DistanceCensus, sys: SchemeEigensystem, cap: int = FULL_MATRIX_CAP
) -> list[tuple[np.ndarray, int]]:
    """Explicit primitive idempotents E_i = M_i / D_i with integer M_i.

    Verifies, exactly in integer arithmetic: each E_i is idempotent, distinct
    idempotents are orthogonal, the E_i sum to the identity, and E_0 is the
    normalized all-ones matrix.
    """
    mats = materialize_distance_matrices(G, census, cap)
    n = G.n
    d = sys.d
    out = []
    for i in range(d + 1):
        col = [sys.Q[j, i] for j in range(d + 1)]
        scale = lcm(*(x.denominator for x in col))
        M = np.zeros((n, n), dtype=np.int64)
        for j in range(d + 1):
            coeff = col[j] * scale
            assert coeff.denominator == 1
            M += int(coeff) * mats[j]
        out.append((M, n * scale))
    peak = max(int(np.abs(M).max()) for M, _ in out)
    if n * peak * peak >= 2 ** 62:
        raise TierLimitExceeded("idempotent entries too large for int64 verification")
    for i, (Mi, Di) in enumerate(out):
        prod = Mi @ Mi
        if not np.array_equal(prod, Di * Mi):
            raise DrgError(f"E_{i} is not idempotent")
        for j in range(i + 1, d + 1):
            if np.any(out[j][0] @ Mi):
                raise DrgError(f"E_{i} E_{j} != 0")
    total = lcm(*(D for _, D in out))
    acc = np.zeros((n, n), dtype=np.int64)
    for Mi, Di in out:
        acc += (total // Di) * Mi
    if not np.array_equal(acc, total * np.eye(n, dtype=np.int64)):
        raise DrgError("idempotents do not sum to the identity")
    M0, D0 = out[0]
    if not np.all(M0 * n == D0):
        raise DrgError("E_0 is not |X|^{-1} J")
    return out


def krein_cross_check(
    G: Graph,
    census: DistanceCensus,
    sys: SchemeEigensystem,
    kt: KreinTensor | None = None,
    cap: int = FULL_MATRIX_CAP,
) -> None:
    """Entrywise check that E_i o E_j = |X|^{-1} sum_k q^k_ij E_k on the
    materialized matrices.  Raises on any mismatch."""
    if kt is None:
        kt = krein_parameters(sys)
    mats = materialize_idempotents(G, census, sys, cap)
    d = sys.d
    n = sys.n
    # object dtype keeps the elementwise arithmetic in exact Python ints
    big = [M.astype(object) for M, _ in mats]
    for i in range(d + 1):
        Mi, Di = big[i], mats[i][1]
        for j in range(i, d + 1):
            Mj, Dj = big[j], mats[j][1]
            coeffs = [kt.q(kk, i, j) / (n * mats[kk][1]) for kk in range(d + 1)]
            den = lcm(Di * Dj, *(c.denominator for c in coeffs))
            lhs = (den // (Di * Dj)) * (Mi * Mj)
            rhs = np.zeros((n, n), dtype=object)
            for kk in range(d + 1):
                c = coeffs[kk] * den
                assert c.denominator == 1
                rhs += int(c) * big[kk]
            if not np.array_equal(lhs, rhs):
                raise DrgError(f"Krein expansion of E_{i} o E_{j} fails entrywise")


# ---------------------------------------------------------------------------
# eigensystem cache


CACHE_VERSION = 1


def eigensystem_cache_key(family: str, params: dict) -> str:
    blob = json.dumps(
        {"family": family, "params": params, "version": CACHE_VERSION},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def eigensystem_to_json(sys: SchemeEigensystem, family: str, params: dict) -> str:
    doc = {
        "family": family,
        "params": params,
        "version": CACHE_VERSION,
        "n": sys.n,
        "d": sys.d,
        "eigenvalues": list(sys.eigenvalues),
        "k": [format_fraction(x) for x in sys.k],
        "m": [format_fraction(x) for x in sys.m],
        "P": [[format_fraction(x) for x in row] for row in sys.P.rows],
        "Q": [[format_fraction(x) for x in row] for row in sys.Q.rows],
        "ordering": list(sys.ordering),
        "passing_orderings": [list(p) for p in sys.passing_orderings],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def eigensystem_from_json(text: str) -> tuple[SchemeEigensystem, str, dict]:
    doc = json.loads(text)
    sys = SchemeEigensystem(
        n=doc["n"],
        d=doc["d"],
        eigenvalues=tuple(doc["eigenvalues"]),
        k=tuple(int(parse_fraction(x)) for x in doc["k"]),
        m=tuple(int(parse_fraction(x)) for x in doc["m"]),
        P=ExactMatrix([[parse_fraction(x) for x in row] for row in doc["P"]]),
        Q=ExactMatrix([[parse_fraction(x) for x in row] for row in doc["Q"]]),
        ordering=tuple(doc["ordering"]),
        passing_orderings=tuple(tuple(p) for p in doc["passing_orderings"]),
    )
    return sys, doc["family"], doc["params"]
