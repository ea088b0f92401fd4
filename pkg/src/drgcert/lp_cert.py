"""Dual feasibility certificates and the size bound they prove.

A certificate for threshold t is a vector f with f_0 = 1, f_1 = ... = f_t = 0
whose transform fQ^T vanishes in positions 1..d-t.  Those d-t homogeneous
conditions leave a square linear system in f_{t+1}..f_d, solved exactly; the
certificate is feasible when every solved entry is strictly positive.  For a
feasible f and any subset of width at most d-t,

    |Y| = (eQ)_0 <= sum_j (eQ)_j f_j = (fQ^T)_0,

with equality exactly when the subset is a descendent with w = d-t, w* = t.

For Hamming graphs there is a second, independent route: the (possibly
formal) inner distribution e' of a length-d minimum-distance-(t+1) code of
size q^(d-t) is uniquely determined by the same kind of linear system in the
e-domain, and f = e' . diag(k_0..k_d)^{-1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    InfeasibleCertificate,
    ParameterError,
    UnsupportedFamily,
    WidthTooLarge,
)
from .exact import ExactMatrix, q_binomial, solve_linear_exact
from .graphs import hamming_intersection_array
from .scheme import SchemeEigensystem, eigensystem_from_array
from .subsets import InnerDistribution


@dataclass(frozen=True)
class DualCertificate:
    t: int
    f: tuple[Fraction, ...]
    bound: Fraction
    feasible: bool
    normalization_ok: bool
    zero_block_ok: bool
    positive_tail: bool
    dual_constraints_ok: bool


@dataclass(frozen=True)
class CertReport:
    size: Fraction
    bound: Fraction
    verdict: str  # strict | tight | violated-bug
    width_is_extremal: bool  # w == d - t
    dual_width_is_extremal: bool  # w* == t
    slack: Fraction
    slack_terms: tuple[Fraction, ...]  # (eQ)_j * f_j


def _transform(f, Q: ExactMatrix, j: int) -> Fraction:
    """(fQ^T)_j = sum_i f_i Q_ji."""
    return sum(f[i] * Q[j, i] for i in range(len(f)))


def _finish_certificate(f: list[Fraction], t: int, sys: SchemeEigensystem) -> DualCertificate:
    d = sys.d
    norm_ok = f[0] == 1
    zero_ok = all(f[i] == 0 for i in range(1, t + 1))
    pos_ok = all(f[i] > 0 for i in range(t + 1, d + 1))
    dual_ok = all(_transform(f, sys.Q, j) == 0 for j in range(1, d - t + 1))
    bound = _transform(f, sys.Q, 0)
    return DualCertificate(
        t=t,
        f=tuple(f),
        bound=bound,
        feasible=norm_ok and zero_ok and pos_ok and dual_ok,
        normalization_ok=norm_ok,
        zero_block_ok=zero_ok,
        positive_tail=pos_ok,
        dual_constraints_ok=dual_ok,
    )


def solve_certificate(sys: SchemeEigensystem, t: int) -> DualCertificate:
    """Solve the (d-t) x (d-t) system (fQ^T)_j = 0, j = 1..d-t, for the free
    tail f_{t+1}..f_d, then evaluate feasibility and the bound (fQ^T)_0.

    SingularSystem propagates when the system has no unique solution; an
    infeasible (but unique) f is returned with feasible=False rather than
    raised, since the CLI reports it.
    """
    d = sys.d
    if not 0 < t < d:
        raise ParameterError(f"need 0 < t < d, got t={t}, d={d}")
    m = d - t
    A = ExactMatrix([[sys.Q[j, i] for i in range(t + 1, d + 1)] for j in range(1, m + 1)])
    rhs = [-sys.Q[j, 0] for j in range(1, m + 1)]
    tail = solve_linear_exact(A, rhs)
    f = [Fraction(1)] + [Fraction(0)] * t + list(tail)
    return _finish_certificate(f, t, sys)


def hamming_eigensystem(d: int, q: int) -> SchemeEigensystem:
    arr = hamming_intersection_array(d, q)
    return eigensystem_from_array(arr, q ** d)


def mds_inner_distribution(d: int, q: int, t: int) -> tuple[Fraction, ...]:
    """The unique vector e' with e'_0 = 1, e'_1 = ... = e'_t = 0 and
    (e'Q)_1 = ... = (e'Q)_{d-t} = 0 over the H(d,q) scheme.

    This is the inner distribution of an MDS code when one exists; it is
    well defined regardless, and no positivity is imposed here.
    """
    if not 0 < t < d:
        raise ParameterError(f"need 0 < t < d, got t={t}, d={d}")
    if q < 2:
        raise ParameterError(f"need q >= 2, got q={q}")
    sys = hamming_eigensystem(d, q)
    m = d - t
    A = ExactMatrix([[sys.Q[i, j] for i in range(t + 1, d + 1)] for j in range(1, m + 1)])
    rhs = [-sys.Q[0, j] for j in range(1, m + 1)]
    tail = solve_linear_exact(A, rhs)
    return tuple([Fraction(1)] + [Fraction(0)] * t + list(tail))


def hamming_certificate(d: int, q: int, t: int) -> DualCertificate:
    """f_i = e'_i / k_i from the MDS-style inner distribution."""
    eprime = mds_inner_distribution(d, q, t)
    sys = hamming_eigensystem(d, q)
    f = [ei / ki for ei, ki in zip(eprime, sys.k)]
    return _finish_certificate(f, t, sys)


def expected_bound(family: str, params: dict, t: int):
    """Closed-form table value of (fQ^T)_0 and whether the published
    feasibility hypothesis holds at these parameters.

    Returns (value, hypothesis_met).  The solver always runs regardless; the
    hypothesis flag is advisory.
    """
    if family == "johnson":
        v, d = params["v"], params["d"]
        if not 0 < t < d:
            raise ParameterError(f"need 0 < t < d, got t={t}")
        return Fraction(comb(v - t, d - t)), v > (t + 1) * (d - t + 1)
    if family == "hamming":
        d, q = params["d"], params["q"]
        if not 0 < t < d:
            raise ParameterError(f"need 0 < t < d, got t={t}")
        hyp = (t == d - 1) or (q >= d) or (q == d - 1 and t < d - 2)
        return Fraction(q ** (d - t)), hyp
    if family == "grassmann":
        q, v, d = params["q"], params["v"], params["d"]
        if not 0 < t < d:
            raise ParameterError(f"need 0 < t < d, got t={t}")
        return Fraction(q_binomial(v - t, d - t, q)), v >= 2 * d
    if family == "bilinear":
        q, d, e = params["q"], params["d"], params["e"]
        if not 0 < t < d:
            raise ParameterError(f"need 0 < t < d, got t={t}")
        return Fraction(q ** ((d - t) * e)), d <= e
    if family == "twisted":
        q, d = params["q"], params["d"]
        if not 0 < t < d:
            raise ParameterError(f"need 0 < t < d, got t={t}")
        return Fraction(q_binomial(2 * d + 1 - t, d - t, q)), True
    raise UnsupportedFamily(f"no closed-form bound for family {family!r}")


def certify_subset(dist: InnerDistribution, cert: DualCertificate) -> CertReport:
    """Apply the certificate to a subset's inner distribution.

    Requires a feasible certificate and subset width <= d - t.  The verdict
    is 'tight' exactly when |Y| equals the bound, in which case the extremal
    widths w = d-t, w* = t are confirmed; any inconsistency is reported as
    'violated-bug' since exact arithmetic rules out honest violations.
    """
    if not cert.feasible:
        raise InfeasibleCertificate(
            "certificate is not feasible; its bound is not proven"
        )
    d = dist.d
    t = cert.t
    w = max(i for i in range(d + 1) if dist.e[i] != 0)
    if w > d - t:
        raise WidthTooLarge(f"subset width {w} exceeds d - t = {d - t}")
    ws = max(i for i in range(d + 1) if dist.eq[i] != 0)
    size = dist.size
    slack_terms = tuple(dist.eq[j] * cert.f[j] for j in range(d + 1))
    slack = sum(slack_terms) - size
    width_ok = w == d - t
    dual_ok = ws == t
    if size < cert.bound:
        verdict = "strict"
    elif size == cert.bound and width_ok and dual_ok and slack == 0:
        verdict = "tight"
    else:
        verdict = "violated-bug"
    return CertReport(
        size=size,
        bound=cert.bound,
        verdict=verdict,
        width_is_extremal=width_ok,
        dual_width_is_extremal=dual_ok,
        slack=slack,
        slack_terms=slack_terms,
    )
