"""Commutativity analysis of pairs of differential operators.

Given bivariate F and a monic pair (P, Q), this module evaluates F(P, Q)
with P-powers left of Q-powers, decomposes F into (p, q)-weighted
homogeneous pieces, computes the type-i linear identities on a piece,
searches for an exact annihilating polynomial (the Burchnall-Chaundy
certificate) by a nullspace computation over the coefficient field, and
extracts the leading filtration coefficients of F(P', d^q) along a
restriction top line. The end-to-end pipeline conjugates the pair to a
normal form, classifies its top line, and reports the verdict with every
window it was established on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .gform import HcpSeries, Hcp
from .linalg import nullspace
from .newton import TopLineClass, Weight, classify_top_line, filtration_HS
from .operators import GradedOp, INF, commutator
from .scalars import CycloScalar
from .schur import NormalFormResult, normal_form_report


class BivarPoly:
    """Polynomial in commuting X, Y over Q (zero coefficients dropped)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        clean = {}
        for (u, v), c in (terms or {}).items():
            if u < 0 or v < 0:
                raise PreconditionError("monomial exponents must be nonnegative")
            c = Fraction(c)
            if c:
                clean[(u, v)] = clean.get((u, v), Fraction(0)) + c
        object.__setattr__(self, "terms", {uv: c for uv, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("BivarPoly is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def weighted_degree(self, p: int, q: int) -> int:
        if not self.terms:
            raise PreconditionError("weighted degree of the zero polynomial")
        return max(p * u + q * v for u, v in self.terms)

    def scale(self, c) -> "BivarPoly":
        c = Fraction(c)
        return BivarPoly({uv: v * c for uv, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (u, v) in sorted(self.terms, key=lambda uv: (-uv[0], -uv[1])):
            c = self.terms[(u, v)]
            factors = []
            if u == 1:
                factors.append("X")
            elif u > 1:
                factors.append(f"X^{u}")
            if v == 1:
                factors.append("Y")
            elif v > 1:
                factors.append(f"Y^{v}")
            mag = abs(c)
            body = "*".join(factors) if factors else str(mag)
            if factors and mag != 1:
                body = f"{mag}*{body}"
            parts.append((body, c < 0))
        out = []
        for i, (body, neg) in enumerate(parts):
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"BivarPoly({self})"

    def to_list(self) -> list:
        return [[u, v, str(c)] for (u, v), c in sorted(self.terms.items())]

    @classmethod
    def from_list(cls, items) -> "BivarPoly":
        return cls({(u, v): Fraction(c) for u, v, c in items})


@dataclass
class HomogPiece:
    """A (p, q)-homogeneous piece: terms (k, u, v) with p u + q v constant."""

    weight: int
    terms: list[tuple[Fraction, int, int]]  # sorted by descending u

    def max_u(self) -> int:
        return self.terms[0][1] if self.terms else 0


def weighted_decompose(F: BivarPoly, p: int, q: int) -> list[HomogPiece]:
    """Split F into homogeneous pieces, heaviest first."""
    if F.is_zero():
        raise PreconditionError("cannot decompose the zero polynomial")
    buckets: dict[int, list[tuple[Fraction, int, int]]] = {}
    for (u, v), c in F.terms.items():
        buckets.setdefault(p * u + q * v, []).append((c, u, v))
    pieces = []
    for w in sorted(buckets, reverse=True):
        pieces.append(HomogPiece(weight=w, terms=sorted(buckets[w], key=lambda t: -t[1])))
    return pieces


def type_identity(piece: HomogPiece, i: int) -> Fraction:
    """sum_l comb(u_l, i) k_l; the type-i identity holds when this is zero."""
    return sum((math.comb(u, i) * c for c, u, _ in piece.terms), Fraction(0))


def evaluate_poly(F: BivarPoly, P: GradedOp, Q: GradedOp) -> GradedOp:
    """F(P, Q) = sum c_(u,v) P^u Q^v, exactly, windows propagated."""
    k = P.k
    total = GradedOp.zero(k)
    p_pows = {0: GradedOp.one(k)}
    q_pows = {0: GradedOp.one(k)}

    def pw(cache, base, e):
        while e not in cache:
            top = max(cache)
            cache[top + 1] = cache[top] * base
        return cache[e]

    for (u, v) in sorted(F.terms):
        term = pw(p_pows, P, u) * pw(q_pows, Q, v)
        total = total + term.scalar_mul(F.terms[(u, v)])
    return total


def evaluate_poly_series(F: BivarPoly, Pprime: HcpSeries, q: int) -> HcpSeries:
    """F(P', d^q) over HCP series (the conjugated setting)."""
    k = Pprime.k
    Dq = HcpSeries.d_power(k, q)
    total = HcpSeries.zero(k)
    p_pows = {0: HcpSeries.identity(k)}
    q_pows = {0: HcpSeries.identity(k)}

    def pw(cache, base, e):
        while e not in cache:
            top = max(cache)
            cache[top + 1] = cache[top] * base
        return cache[e]

    for (u, v) in sorted(F.terms):
        term = pw(p_pows, Pprime, u) * pw(q_pows, Dq, v)
        total = total + term.scalar_mul(F.terms[(u, v)])
    return total


@dataclass
class BCResult:
    poly: BivarPoly
    weight: int
    search_floor: int | None
    reverified: bool


def bc_certificate(P: GradedOp, Q: GradedOp, wmax: int, depth: int) -> BCResult | None:
    """Minimal-weight nonzero F with F(P, Q) = 0 on the whole window, if any.

    The nullspace search runs on coefficients at orders within ``depth`` of
    the top; a candidate is accepted only if its evaluation vanishes on the
    entire common window, and the result is flagged re-verified when that
    window reaches at least twice the search depth. Absence of a certificate
    is bounded evidence only, never a nonexistence proof.
    """
    k = P.k
    p, q = P.ord(), Q.ord()
    if not (P.is_monic() and Q.is_monic()):
        raise PreconditionError("bc_certificate needs monic operators")
    monos = sorted(((u, v) for u in range(wmax // p + 1) for v in range(wmax // q + 1)
                    if p * u + q * v <= wmax),
                   key=lambda uv: (p * uv[0] + q * uv[1], uv[0]))
    evals: dict[tuple[int, int], GradedOp] = {}
    p_pows = {0: GradedOp.one(k)}
    q_pows = {0: GradedOp.one(k)}
    for (u, v) in monos:
        while u not in p_pows:
            p_pows[max(p_pows) + 1] = p_pows[max(p_pows)] * P
        while v not in q_pows:
            q_pows[max(q_pows) + 1] = q_pows[max(q_pows)] * Q
        evals[(u, v)] = p_pows[u] * q_pows[v]

    maxord = max(p * u + q * v for u, v in monos)
    floors = [e.floor_eff() for e in evals.values()]
    common_floor = max(floors)
    search_floor = max(maxord - depth, common_floor)
    if search_floor == -INF:
        search_floor = min((min(e.components, default=0) for e in evals.values()))
    search_floor = int(search_floor)

    rows = []
    for t in range(search_floor, maxord + 1):
        cap = min((e.xcap(t) for e in evals.values()))
        ns = set()
        for e in evals.values():
            ns |= set(e.components.get(t, {}))
        for n in sorted(ns):
            if n > cap:
                continue
            rows.append([e.components.get(t, {}).get(n, CycloScalar.zero(k))
                         for e in (evals[m] for m in monos)])
    weights = sorted({p * u + q * v for u, v in monos})
    for wcap in weights:
        cols = [i for i, (u, v) in enumerate(monos) if p * u + q * v <= wcap]
        sub = [[row[i] for i in cols] for row in rows]
        basis = nullspace(sub, len(cols))
        for vec in basis:
            poly = BivarPoly({monos[cols[i]]: vec[i].rational_value()
                              for i in range(len(cols)) if vec[i]})
            if poly.is_zero():
                continue
            total = GradedOp.zero(k)
            for (u, v), c in poly.terms.items():
                total = total + evals[(u, v)].scalar_mul(c)
            if not total.is_zero_in_window():
                continue
            lead = max(poly.terms, key=lambda uv: (p * uv[0] + q * uv[1], uv[0]))
            poly = poly.scale(1 / poly.terms[lead])
            reverified = common_floor == -INF or common_floor <= maxord - 2 * depth
            return BCResult(poly=poly, weight=poly.weighted_degree(p, q),
                            search_floor=search_floor, reverified=reverified)
    return None


@dataclass
class HsCheck:
    """Both sides of the restriction-line coefficient extraction at level s."""

    lhs: HcpSeries
    rhs: HcpSeries
    applicable: bool
    identities: list[Fraction]
    sigma: Fraction
    a0: int
    nf_weight: int

    def equal(self) -> bool:
        return self.lhs.agrees_with(self.rhs)


def hs_coefficient_check(Pprime: HcpSeries, F: BivarPoly, s: int) -> HsCheck:
    """Compare HS^(s*a0)_(N_F) (F(P', d^q)) with the closed-form side.

    The closed form is sum_j comb(u_j, s) k_j L0^s d^(N_F - s p) with L0 the
    first restriction vertex monomial. For s = 0 equality is unconditional;
    for s >= 1 it is asserted only when the type identities 0..s-1 hold for
    the top piece (both sides are returned for inspection regardless).
    """
    cls = classify_top_line(Pprime)
    if cls.variant != "restriction":
        raise PreconditionError(f"restriction top line required, got {cls.variant}")
    sigma = cls.sigma
    k = Pprime.k
    q = k
    p = Pprime.top_order()
    pieces = weighted_decompose(F, p, q)
    top = pieces[0]
    nf_weight = top.weight
    verts = sorted(v for v in cls.vertices if v[0] > 0)
    a0, b0 = verts[0]
    comp = Pprime.components[b0]
    if comp.point_contains_ai(a0):
        raise PreconditionError("first restriction vertex carries A_i content")
    l0 = Hcp(k, b0, {(a0, 0): comp.gamma[(a0, 0)]})
    L0 = HcpSeries.from_hcp(l0)
    fpq = evaluate_poly_series(F, Pprime, q)
    w = Weight(sigma, 1)
    lhs = filtration_HS(fpq, Fraction(nf_weight), s * a0, w)
    if nf_weight - s * p < 0:
        raise PreconditionError("level s is too large for the top piece weight")
    coeff = sum((math.comb(u, s) * c for c, u, _ in top.terms), Fraction(0))
    rhs = ((L0 ** s) * HcpSeries.d_power(k, nf_weight - s * p)).scalar_mul(coeff)
    identities = [type_identity(top, i) for i in range(s)]
    applicable = all(v == 0 for v in identities)
    return HsCheck(lhs=lhs, rhs=rhs, applicable=applicable, identities=identities,
                   sigma=sigma, a0=a0, nf_weight=nf_weight)


def _swapped_variant(P: GradedOp, Q: GradedOp, depth: int) -> str | None:
    """Observational only: the top-line variant of Q with respect to P."""
    from .errors import WeylnfError
    try:
        if not P.is_normalized():
            return None
        swapped = normal_form_report(Q, P, depth)
        return classify_top_line(swapped.series).variant
    except WeylnfError:
        return None


@dataclass
class PairReport:
    """Machine-checkable record of the full pipeline on one pair."""

    p: int
    q: int
    commutes: bool
    commutator_floor: int | None
    classification: TopLineClass
    stability: dict
    certificate: BCResult | None
    type_identities: list[list]
    verdict: str
    tentative: bool
    windows: dict
    normal_form: NormalFormResult = field(repr=False, default=None)

    def to_dict(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = {
                "poly": self.certificate.poly.to_list(),
                "text": str(self.certificate.poly),
                "weight": self.certificate.weight,
                "reverified": self.certificate.reverified,
            }
        return {
            "p": self.p,
            "q": self.q,
            "commutes": self.commutes,
            "classification": self.classification.to_dict(),
            "stability": self.stability,
            "certificate": cert,
            "typeIdentities": self.type_identities,
            "verdict": self.verdict,
            "tentative": self.tentative,
            "windows": self.windows,
        }


def classify_pair(P: GradedOp, Q: GradedOp, depth: int, wmax: int | None = None,
                  candidate_F: BivarPoly | None = None,
                  cross_check_swap: bool = False) -> PairReport:
    """Commutator test, normal form, top-line classification, certificate.

    With ``cross_check_swap`` the swapped pair (Q with respect to P) is also
    classified when admissible and its variant reported for inspection; no
    symmetry claim is asserted from it.
    """
    p, q = P.ord(), Q.ord()
    C = commutator(P, Q)
    commutes = C.is_zero_in_window()
    nf = normal_form_report(P, Q, depth)
    cls = classify_top_line(nf.series)

    half_floor = max(0, p - max(1, depth // 2))
    if half_floor > (nf.series.floor or 0):
        cls_half = classify_top_line(nf.series.restrict_floor(half_floor))
        stable = (cls_half.variant == cls.variant and cls_half.sigma == cls.sigma)
        stability = {"comparedFloors": [half_floor, nf.series.floor],
                     "halfWindowVariant": cls_half.variant, "stable": stable}
    else:
        stability = {"comparedFloors": [nf.series.floor, nf.series.floor],
                     "halfWindowVariant": cls.variant, "stable": True}

    certificate = None
    if commutes:
        certificate = bc_certificate(P, Q, wmax if wmax is not None else p * q, depth)

    if commutes:
        if certificate is not None:
            verdict = (f"commuting pair; Burchnall-Chaundy certificate "
                       f"{certificate.poly} (window-verified)")
        else:
            verdict = ("commuting pair; no certificate found within the given "
                       "weight and depth bounds (bounded evidence only)")
    elif cls.variant == "restriction" and not cls.tentative:
        verdict = ("algebraically independent; no nonzero polynomial relation "
                   "F(P, Q) = 0 exists (restriction top line)")
    elif cls.variant == "restriction":
        verdict = ("restriction top line on the computed window (tentative); "
                   "if final, no nonzero polynomial relation F(P, Q) = 0 exists")
    elif cls.variant == "asymptotic":
        verdict = ("asymptotic top line (tentative); the commutativity "
                   "criterion for this case is out of scope here")
    else:
        verdict = f"classification {cls.variant} (tentative window verdict)"

    fid = candidate_F if candidate_F is not None else (
        certificate.poly if certificate is not None else None)
    type_ids: list[list] = []
    if fid is not None:
        top = weighted_decompose(fid, p, q)[0]
        umax = max(u for _, u, _ in top.terms)
        type_ids = [[i, str(type_identity(top, i))] for i in range(umax + 1)]

    windows = {
        "commutatorFloor": None if C.floor is None else C.floor,
        "normalFormFloor": nf.series.floor,
        "depth": depth,
        "schurXcap": nf.schur.xcap,
        "belowWindowNonzero": nf.below_window_nonzero,
    }
    if cls.variant == "restriction":
        # The coefficient-extraction argument fixes the slope p/q; record
        # whether the computed region slope coincides, surfacing mismatches.
        windows["sigmaEqualsPOverQ"] = cls.sigma == Fraction(p, q)
    if cross_check_swap:
        windows["swappedVariant"] = _swapped_variant(P, Q, depth)
    return PairReport(p=p, q=q, commutes=commutes,
                      commutator_floor=C.floor, classification=cls,
                      stability=stability, certificate=certificate,
                      type_identities=type_ids, verdict=verdict,
                      tentative=cls.tentative, windows=windows, normal_form=nf)
