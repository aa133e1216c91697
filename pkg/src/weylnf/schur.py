"""Schur conjugation: S with S^-1 Q S = d^q, and normal forms P' = S^-1 P S.

S = 1 + (terms of negative order) is solved one homogeneous order at a time
from [d^q, S_t] = R_t, where R_t collects the already-known orders of
S d^q - Q S. Each homogeneous solve is an upward x-degree recurrence: the
equation at degree m determines s_(m+q) with the nonzero factor
comb(q,q) * (m+q)!/m!, and the q+t free low-degree coefficients (the kernel
of ad d^q, i.e. centralizer directions) are pinned to zero. The gauge is
therefore deterministic: recomputing at a larger depth extends the earlier
coefficients and never changes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    NotAnHcpError,
    PreconditionError,
    PropertyViolation,
    TruncationError,
)
from .gform import AqkReport, Hcp, HcpSeries, check_Aqk, fit_hcp
from .operators import GradedOp, INF
from .scalars import CycloScalar


@dataclass
class SchurPair:
    """Conjugator S (order 0, S_0 = 1), its inverse, and the achieved window."""

    S: GradedOp
    Sinv: GradedOp
    q: int
    depth: int
    xcap: int
    verified: bool


def _require_diffop(A: GradedOp, name: str, max_ddeg: int):
    for t, comp in A.components.items():
        for n in comp:
            if n + t > max_ddeg:
                raise PreconditionError(
                    f"{name} has a monomial of d-degree {n + t}, above its order")


def schur_operator(Q: GradedOp, depth: int, xcap: int | None = None,
                   verify: bool = True) -> SchurPair:
    """Compute S with S^-1 Q S = d^q exact down to ``depth`` orders below q.

    Q must be monic and normalized with ord(Q) = deg(Q) = q > 0. Q may carry
    a truncated window as long as it is deep enough to determine every
    requested order of S.
    """
    if depth < 1:
        raise PreconditionError("depth must be positive")
    q = Q.ord()
    if q <= 0:
        raise PreconditionError("ord(Q) must be positive")
    if not Q.is_monic():
        raise PreconditionError("Q must be monic")
    if not Q.is_normalized():
        raise PreconditionError("Q must be normalized (no d^(q-1) term)")
    _require_diffop(Q, "Q", q)
    if Q.floor is not None and q - depth < Q.floor - q:
        pass  # handled by the per-order check below
    if xcap is None:
        xcap = 24 + q
    X = xcap
    k = Q.k
    one = CycloScalar.one(k)
    dq = GradedOp.d_op(k, q)

    s_comps: dict[int, dict[int, CycloScalar]] = {0: {0: one}}
    s_caps: dict[int, int] = {}
    for t in range(-1, -depth - 1, -1):
        if Q.floor is not None and q + t < Q.floor:
            raise TruncationError(
                "Q's window is too shallow for the requested Schur depth",
                {"q_floor": Q.floor, "depth_reachable": q - Q.floor})
        partial = GradedOp(k, dict(s_comps), None, 0, dict(s_caps))
        W = Q * partial - partial * dq
        if W.xcap(q + t) < X - q:
            raise TruncationError("insufficient x-window while solving S",
                                  {"order": t, "xcap": W.xcap(q + t)})
        rneg = W.components.get(q + t, {})
        n_min = max(0, -t)
        m_min = max(0, -(q + t))
        assert all(m >= m_min for m in rneg), "content below the structural range"
        s: dict[int, CycloScalar] = {}
        for m in range(m_min, X - q + 1):
            val = -rneg.get(m, CycloScalar.zero(k))
            for j in range(1, q):
                sn = s.get(m + j)
                if sn is not None:
                    val = val - sn * (math.comb(q, j) * math.perm(m + j, j))
            if not val.is_zero():
                s[m + q] = val * Fraction(1, math.perm(m + q, q))
        s = {n: c for n, c in s.items() if n >= n_min}
        if s:
            s_comps[t] = s
        s_caps[t] = X

    S = GradedOp(k, s_comps, -depth, 0, s_caps)
    Sinv = invert_unit(S)
    verified = False
    if verify:
        Z = Sinv * (Q * S)
        _assert_is_d_power(Z, q)
        verified = True
    return SchurPair(S=S, Sinv=Sinv, q=q, depth=depth, xcap=X, verified=verified)


def _assert_is_d_power(Z: GradedOp, q: int):
    for t, comp in Z.components.items():
        if t == q:
            if comp != {0: CycloScalar.one(Z.k)}:
                raise PropertyViolation("conjugated operator has a perturbed top symbol")
        elif comp:
            raise PropertyViolation(
                f"conjugation residual at order {t}: {comp} (gauge obstruction)")


def invert_unit(S: GradedOp) -> GradedOp:
    """Inverse of S = 1 + (negative orders), solved order by order."""
    k = S.k
    if S.top != 0 or S.components.get(0) != {0: CycloScalar.one(k)}:
        raise PreconditionError("invert_unit needs ord(S) = 0 with S_0 = 1")
    floor = S.floor
    lo = floor if floor is not None else min(S.components, default=0)
    t_comps: dict[int, dict[int, CycloScalar]] = {0: {0: CycloScalar.one(k)}}
    t_caps: dict[int, int] = {}
    for t in range(-1, lo - 1, -1):
        acc = GradedOp.zero(k)
        for t1 in range(max(lo, t), 0):
            t2 = t - t1
            if t2 > 0 or (t1 not in S.components and S.xcap(t1) == INF):
                continue
            caps1 = {} if S.xcap(t1) == INF else {t1: S.xcap(t1)}
            op1 = GradedOp(k, {t1: dict(S.components.get(t1, {}))}, None, t1, caps1)
            caps2 = {} if t2 not in t_caps else {t2: t_caps[t2]}
            op2 = GradedOp(k, {t2: dict(t_comps.get(t2, {}))}, None, max(t2, 0), caps2)
            acc = acc + op1 * op2
        comp = acc.components.get(t, {})
        if comp:
            t_comps[t] = {n: -c for n, c in comp.items()}
        cap = acc.xcap(t)
        if cap != INF:
            t_caps[t] = int(cap)
    T = GradedOp(k, t_comps, floor, 0, t_caps)
    _assert_is_identity(S * T)
    _assert_is_identity(T * S)
    return T


def _assert_is_identity(Z: GradedOp):
    for t, comp in Z.components.items():
        if t == 0:
            if comp != {0: CycloScalar.one(Z.k)}:
                raise PropertyViolation("unit inversion failed at order 0")
        elif comp:
            raise PropertyViolation(f"unit inversion residual at order {t}")


@dataclass
class NormalFormResult:
    """Normal form of P with respect to Q, with fit and check diagnostics."""

    series: HcpSeries
    schur: SchurPair
    conjugated: GradedOp
    aqk: AqkReport
    below_window_nonzero: bool
    fitted_orders: list[int] = field(default_factory=list)
    escalated_orders: list[int] = field(default_factory=list)


def default_fit_xcap(p: int, q: int, depth: int, margin: int) -> int:
    """x-window needed to fit every component at the default bounds,
    with room for one bound escalation and the cap loss of conjugation."""
    return q * (min(depth, p) + 2) + margin + p + 4


def normal_form_report(P: GradedOp, Q: GradedOp, depth: int, margin: int = 8
                       ) -> NormalFormResult:
    if P.k != Q.k:
        raise PreconditionError("P and Q must share a scalar context")
    p = P.ord()
    q = Q.ord()
    if not P.is_monic():
        raise PreconditionError("P must be monic")
    _require_diffop(P, "P", p)
    # The fitted presentation lives over Q(xi) with xi a primitive q-th root.
    if P.k != q:
        P = P.lift_context(q)
        Q = Q.lift_context(q)
    X = default_fit_xcap(p, q, depth, margin)
    pair = schur_operator(Q, depth=depth, xcap=X)
    conj = pair.Sinv * (P * pair.S)

    comps: dict[int, Hcp] = {}
    fitted: list[int] = []
    escalated: list[int] = []
    lo = max(0, p - depth)
    for t in range(p, lo - 1, -1):
        comp = conj.components.get(t)
        if not comp:
            continue
        single = conj.component_as_op(t)
        i = p - t
        dmax = max(i - 1, 0)
        try:
            h = fit_hcp(single, dmax=dmax, nbmax=0, margin=margin, r=t)
        except NotAnHcpError:
            escalated.append(t)
            try:
                h = fit_hcp(single, dmax=dmax + 2, nbmax=0, margin=margin, r=t)
            except NotAnHcpError as exc:
                raise TruncationError(
                    f"component at order {t} did not fit; this is evidence of "
                    f"insufficient depth or bounds, not of non-representability",
                    {"order": t, "dmax_tried": dmax + 2}) from exc
        comps[t] = h
        fitted.append(t)

    series = HcpSeries(Q.k, comps, floor=lo, top=p)
    aqk = check_Aqk(series, 0)
    if not aqk.ok:
        raise PropertyViolation(
            f"normal form failed its shape condition (clause {aqk.clause}: {aqk.detail}); "
            "this contradicts the guaranteed contract for differential pairs")
    below = False
    flo = conj.floor if conj.floor is not None else min(conj.components, default=0)
    for t in range(int(flo), 0):
        if conj.components.get(t):
            below = True
            break
    return NormalFormResult(series=series, schur=pair, conjugated=conj, aqk=aqk,
                            below_window_nonzero=below, fitted_orders=fitted,
                            escalated_orders=escalated)


def normal_form(P: GradedOp, Q: GradedOp, depth: int, margin: int = 8) -> HcpSeries:
    """P' = S^-1 P S as an HCP series on orders max(0, p-depth)..p."""
    return normal_form_report(P, Q, depth, margin).series
