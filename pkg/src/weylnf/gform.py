"""Homogeneous component presentation (HCP) of graded operators.

A homogeneous operator of order r >= 0 that is an HCP can be written as

    H = ( sum_{l,i} f_{l,i} Gamma_l A_i  +  sum_{j>=1} g_j B_j ) D^r

with Gamma_l = (x d)^l, A_i = exp((xi^i - 1) x * d), B_j the projector onto
x^(j-1) (scaled delta), and D^r = d^r. The order-zero factor acts diagonally
on monomials: Gamma_l scales x^n by n^l, A_i by xi^(i n), B_j picks out
n = j - 1. That diagonal action is the backbone here: an
:class:`EigenFunction` (quasi-polynomial part plus a finitely supported
correction) determines the HCP uniquely, products are pointwise products of
eigenfunctions with the argument of the right factor shifted by the left
order, and fitting a raw component recovers the presentation by exact
quasi-polynomial interpolation with a verification margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContextMismatchError,
    NotAnHcpError,
    PreconditionError,
    TruncationError,
)
from .linalg import solve_square
from .operators import INF, GradedOp
from .scalars import CycloScalar, xi_pow


def _as_scalar(k, value):
    if isinstance(value, CycloScalar):
        if value.k != k:
            raise ContextMismatchError(f"cyclotomic order mismatch: {k} vs {value.k}")
        return value
    return CycloScalar.from_rational(k, value)


class Hcp:
    """A single homogeneous component in G-form (order r >= 0)."""

    __slots__ = ("k", "r", "gamma", "bpart")

    def __init__(self, k: int, r: int, gamma=None, bpart=None):
        if r < 0:
            raise PreconditionError("components with negative order are out of scope")
        g = {}
        for (l, i), c in (gamma or {}).items():
            if l < 0:
                raise PreconditionError("Gamma index must be nonnegative")
            c = _as_scalar(k, c)
            if not c.is_zero():
                key = (l, i % k)
                g[key] = g.get(key, CycloScalar.zero(k)) + c
        g = {key: c for key, c in g.items() if not c.is_zero()}
        b = {}
        for j, c in (bpart or {}).items():
            if j < 1:
                raise PreconditionError("B index must be positive")
            c = _as_scalar(k, c)
            if not c.is_zero():
                b[j] = c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "bpart", b)

    def __setattr__(self, name, value):
        raise AttributeError("Hcp is immutable")

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.gamma and not self.bpart

    def sdeg_a(self):
        """Largest Gamma index present, or None standing for -infinity."""
        return max((l for l, _ in self.gamma), default=None)

    def sdeg_b(self):
        return max(self.bpart, default=None)

    def is_totally_bfree(self) -> bool:
        return not self.bpart

    def contains_ai(self) -> bool:
        return any(i > 0 for _, i in self.gamma)

    def point_contains_ai(self, l: int) -> bool:
        return any(i > 0 and ll == l for ll, i in self.gamma)

    def gamma_degrees(self) -> set[int]:
        return {l for l, _ in self.gamma}

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: "Hcp"):
        if self.k != other.k:
            raise ContextMismatchError("cyclotomic order mismatch")

    def __add__(self, other: "Hcp") -> "Hcp":
        self._check(other)
        if self.r != other.r:
            raise PreconditionError("cannot add components of different order")
        g = dict(self.gamma)
        for key, c in other.gamma.items():
            g[key] = g.get(key, CycloScalar.zero(self.k)) + c
        b = dict(self.bpart)
        for j, c in other.bpart.items():
            b[j] = b.get(j, CycloScalar.zero(self.k)) + c
        return Hcp(self.k, self.r, g, b)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, value) -> "Hcp":
        value = _as_scalar(self.k, value)
        return Hcp(self.k, self.r,
                   {key: c * value for key, c in self.gamma.items()},
                   {j: c * value for j, c in self.bpart.items()})

    def __mul__(self, other: "Hcp") -> "Hcp":
        self._check(other)
        return hcp_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Hcp):
            return NotImplemented
        return (self.k, self.r, self.gamma, self.bpart) == (other.k, other.r, other.gamma, other.bpart)

    def __hash__(self):
        return hash((self.k, self.r, tuple(sorted(self.gamma.items())),
                     tuple(sorted(self.bpart.items()))))

    # -- the diagonal action -------------------------------------------------------

    def eigen(self) -> "EigenFunction":
        return EigenFunction(self.k, dict(self.gamma), {j - 1: c for j, c in self.bpart.items()})

    def expand(self, xcap: int = 16) -> GradedOp:
        """Exact window expansion into x^n d^(n+r) coefficients.

        Pure Gamma content expands to finitely many monomials and the result
        is exact everywhere; A_i (i > 0) and B_j parts have infinite tails,
        truncated at ``xcap``.
        """
        finite = not self.bpart and all(i == 0 for _, i in self.gamma)
        mmax = max((l for l, _ in self.gamma), default=0) if finite else xcap
        eig = self.eigen()
        mu = [eig.eval(m) for m in range(mmax + 1)]
        comp = _mu_to_coeffs(mu, self.k)
        caps = {} if finite else {self.r: xcap}
        return GradedOp(self.k, {self.r: comp} if comp else {}, None, self.r, caps)

    # -- rendering ------------------------------------------------------------------

    def gform_str(self) -> str:
        parts = [f"r={self.r}"]
        for (l, i) in sorted(self.gamma):
            parts.append(f"f[{l},{i}]={self.gamma[(l, i)]}")
        for j in sorted(self.bpart):
            parts.append(f"g[{j}]={self.bpart[j]}")
        return "G{" + "; ".join(parts) + "}"

    def __str__(self):
        return self.gform_str()

    def __repr__(self):
        return f"Hcp(k={self.k}, {self.gform_str()})"

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "f": [[l, i, str(c)] for (l, i), c in sorted(self.gamma.items())],
            "g": [[j, str(c)] for j, c in sorted(self.bpart.items())],
        }

    @classmethod
    def from_dict(cls, k: int, data: dict) -> "Hcp":
        from .scalars import parse_scalar
        gamma = {(l, i): parse_scalar(k, s) for l, i, s in data.get("f", [])}
        bpart = {j: parse_scalar(k, s) for j, s in data.get("g", [])}
        return cls(k, data["r"], gamma, bpart)


class EigenFunction:
    """Diagonal action n -> sum f_{l,i} n^l xi^(i n)  +  correction(n)."""

    __slots__ = ("k", "quasi", "corr")

    def __init__(self, k: int, quasi=None, corr=None):
        q = {}
        for (l, i), c in (quasi or {}).items():
            c = _as_scalar(k, c)
            if not c.is_zero():
                q[(l, i % k)] = c
        c_ = {}
        for n, c in (corr or {}).items():
            if n < 0:
                continue
            c = _as_scalar(k, c)
            if not c.is_zero():
                c_[n] = c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "quasi", q)
        object.__setattr__(self, "corr", c_)

    def __setattr__(self, name, value):
        raise AttributeError("EigenFunction is immutable")

    def eval_quasi(self, n: int) -> CycloScalar:
        total = CycloScalar.zero(self.k)
        for (l, i), c in self.quasi.items():
            term = c * (Fraction(n) ** l)
            if i:
                term = term * xi_pow(self.k, i * n)
            total = total + term
        return total

    def eval(self, n: int) -> CycloScalar:
        total = self.eval_quasi(n)
        extra = self.corr.get(n)
        return total + extra if extra is not None else total

    def to_hcp(self, r: int) -> Hcp:
        return Hcp(self.k, r, dict(self.quasi), {n + 1: c for n, c in self.corr.items()})


def expand_hcp(H: Hcp, window: int = 16) -> GradedOp:
    return H.expand(window)


def eigen(H: Hcp) -> EigenFunction:
    return H.eigen()


def eigen_eval(E: EigenFunction, n: int) -> CycloScalar:
    if n < 0:
        raise PreconditionError("eigenvalues are defined for n >= 0")
    return E.eval(n)


def hcp_mul(H1: Hcp, H2: Hcp) -> Hcp:
    """Product H1 * H2 through eigenfunctions: mu(n) = mu1(n) * mu2(n + r1)."""
    if H1.k != H2.k:
        raise ContextMismatchError("cyclotomic order mismatch")
    k, r1 = H1.k, H1.r
    e1, e2 = H1.eigen(), H2.eigen()
    quasi: dict[tuple[int, int], CycloScalar] = {}
    for (l1, i1), c1 in e1.quasi.items():
        for (l2, i2), c2 in e2.quasi.items():
            base = c1 * c2
            if i2 and r1:
                base = base * xi_pow(k, i2 * r1)
            i3 = (i1 + i2) % k
            for s in range(l2 + 1):
                w = math.comb(l2, s) * (Fraction(r1) ** (l2 - s))
                if w:
                    key = (l1 + s, i3)
                    quasi[key] = quasi.get(key, CycloScalar.zero(k)) + base * w
    qp = EigenFunction(k, quasi)
    support = set(e1.corr) | {s - r1 for s in e2.corr if s - r1 >= 0}
    corr = {}
    for n in sorted(support):
        full = e1.eval(n) * e2.eval(n + r1)
        v = full - qp.eval_quasi(n)
        if not v.is_zero():
            corr[n] = v
    return EigenFunction(k, quasi, corr).to_hcp(r1 + H2.r)


def _mu_to_coeffs(mu: list[CycloScalar], k: int) -> dict[int, CycloScalar]:
    """Invert mu(m) = sum_n a_n * perm(m, n) on 0..len(mu)-1."""
    out: dict[int, CycloScalar] = {}
    for m in range(len(mu)):
        val = mu[m]
        for n, a in out.items():
            f = math.perm(m, n) if n <= m else 0
            if f:
                val = val - a * f
        if not val.is_zero():
            out[m] = val * Fraction(1, math.factorial(m))
    return out


def component_eigenvalues(C: GradedOp, r: int, upto: int) -> list[CycloScalar]:
    """mu(0..upto) of the order-r component of C (needs xcap >= upto)."""
    if C.xcap(r) < upto:
        raise TruncationError("component not exact far enough for eigenvalues",
                              {"order": r, "needed_xcap": upto, "xcap": C.xcap(r)})
    comp = C.components.get(r, {})
    mu = []
    for m in range(upto + 1):
        acc = CycloScalar.zero(C.k)
        for n, c in comp.items():
            if n <= m:
                f = math.perm(m, n)
                if f:
                    acc = acc + c * f
        mu.append(acc)
    return mu


def fit_hcp(C: GradedOp, dmax: int, nbmax: int, margin: int, r: int | None = None) -> Hcp:
    """Recover the G-form of a single homogeneous component.

    Solves for the quasi-polynomial coefficients f_{l,i} (l <= dmax, i < k)
    from k*(dmax+1) eigenvalue samples taken at n >= nbmax (beyond every
    allowed B projector), sets g_j for j <= nbmax by subtraction, then checks
    every remaining exact sample. A mismatch means the component is not an
    HCP within these bounds and raises :class:`NotAnHcpError`.
    """
    k = C.k
    nonzero = sorted(C.components)
    if r is None:
        if len(nonzero) != 1:
            raise PreconditionError("fit_hcp expects a single-component operator")
        r = nonzero[0]
    elif any(t != r for t in nonzero):
        raise PreconditionError("operator has content away from the requested order")
    if r < 0:
        raise PreconditionError("components with negative order are out of scope")
    if dmax < 0 or nbmax < 0 or margin < 0:
        raise PreconditionError("fit bounds must be nonnegative")
    ncols = k * (dmax + 1)
    need = nbmax + ncols + margin
    cap = C.xcap(r)
    if cap < need:
        raise TruncationError("window too small for the requested fit",
                              {"order": r, "needed_xcap": need,
                               "xcap": None if cap == INF else cap})
    upto = need if cap == INF else int(cap)
    mu = component_eigenvalues(C, r, upto)
    cols = [(l, i) for l in range(dmax + 1) for i in range(k)]
    samples = list(range(nbmax, nbmax + ncols))
    matrix = [[xi_pow(k, i * n) * (Fraction(n) ** l) for (l, i) in cols] for n in samples]
    sol = solve_square(matrix, [mu[n] for n in samples])
    quasi = {cols[idx]: v for idx, v in enumerate(sol) if not v.is_zero()}
    qp = EigenFunction(k, quasi)
    corr = {}
    for n in range(nbmax):
        v = mu[n] - qp.eval_quasi(n)
        if not v.is_zero():
            corr[n] = v
    for n in range(nbmax + ncols, upto + 1):
        if mu[n] != qp.eval_quasi(n):
            raise NotAnHcpError(
                f"component at order {r} is not an HCP within bounds "
                f"dmax={dmax}, nbmax={nbmax} (verification failed at sample {n})")
    return EigenFunction(k, quasi, corr).to_hcp(r)


def sdeg(H: Hcp):
    """(Sdeg_A, Sdeg_B) with None standing for -infinity."""
    return (H.sdeg_a(), H.sdeg_b())


@dataclass
class AqkReport:
    ok: bool
    clause: int | None = None
    order: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


class HcpSeries:
    """Operator whose homogeneous components are HCPs, orders >= 0.

    ``floor`` is the smallest order at which components are known (``None``
    for a finite series with nothing missing); ``top`` bounds the orders.
    """

    __slots__ = ("k", "components", "floor", "top")

    def __init__(self, k: int, components: dict[int, Hcp], floor=None, top=None):
        comps = {}
        for t, h in components.items():
            if h.k != k:
                raise ContextMismatchError("component context mismatch")
            if h.r != t:
                raise PreconditionError(f"component at order {t} has r={h.r}")
            if not h.is_zero():
                comps[t] = h
        if floor is not None and floor < 0:
            floor = 0
        if floor is None:
            top = max(comps, default=0)
        else:
            if top is None:
                top = max(comps, default=floor)
            comps = {t: h for t, h in comps.items() if floor <= t <= top}
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "floor", floor)
        object.__setattr__(self, "top", top)

    def __setattr__(self, name, value):
        raise AttributeError("HcpSeries is immutable")

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def zero(cls, k: int) -> "HcpSeries":
        return cls(k, {})

    @classmethod
    def identity(cls, k: int) -> "HcpSeries":
        return cls.from_hcp(Hcp(k, 0, {(0, 0): 1}))

    @classmethod
    def from_hcp(cls, h: Hcp) -> "HcpSeries":
        return cls(h.k, {h.r: h})

    @classmethod
    def d_power(cls, k: int, q: int) -> "HcpSeries":
        return cls.from_hcp(Hcp(k, q, {(0, 0): 1}))

    def ring_one(self) -> "HcpSeries":
        return HcpSeries.identity(self.k)

    # -- queries ---------------------------------------------------------------------

    def is_zero_in_window(self) -> bool:
        return not self.components

    def top_order(self) -> int:
        if not self.components:
            raise PreconditionError("series vanishes on its window")
        return max(self.components)

    def component(self, t: int) -> Hcp:
        return self.components.get(t, Hcp(self.k, max(t, 0)))

    def is_monic(self) -> bool:
        if not self.components:
            return False
        top = self.components[self.top_order()]
        return top.bpart == {} and top.gamma == {(0, 0): CycloScalar.one(self.k)}

    def floor_eff(self):
        return -INF if self.floor is None else self.floor

    def restrict_floor(self, floor: int) -> "HcpSeries":
        new_floor = floor if self.floor is None else max(floor, self.floor)
        comps = {t: h for t, h in self.components.items() if t >= new_floor}
        return HcpSeries(self.k, comps, new_floor, self.top)

    # -- ring operations ----------------------------------------------------------------

    def _check(self, other: "HcpSeries"):
        if self.k != other.k:
            raise ContextMismatchError("cyclotomic order mismatch")

    def __add__(self, other):
        if isinstance(other, Hcp):
            other = HcpSeries.from_hcp(other)
        if not isinstance(other, HcpSeries):
            return NotImplemented
        self._check(other)
        if other.floor is None:
            floor = self.floor
        elif self.floor is None:
            floor = other.floor
        else:
            floor = max(self.floor, other.floor)
        top = max(self.top, other.top)
        comps = dict(self.components)
        for t, h in other.components.items():
            comps[t] = comps[t] + h if t in comps else h
        return HcpSeries(self.k, comps, floor, top)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __sub__(self, other):
        if isinstance(other, Hcp):
            other = HcpSeries.from_hcp(other)
        return self + (-other)

    def scalar_mul(self, value) -> "HcpSeries":
        return HcpSeries(self.k, {t: h.scalar_mul(value) for t, h in self.components.items()},
                         self.floor, self.top)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scalar_mul(other)
        if isinstance(other, Hcp):
            other = HcpSeries.from_hcp(other)
        if not isinstance(other, HcpSeries):
            return NotImplemented
        self._check(other)
        fa, fb = self.floor_eff(), other.floor_eff()
        floor_val = max(fa + other.top, fb + self.top)
        floor = None if floor_val == -INF else max(int(floor_val), 0)
        top = self.top + other.top
        comps: dict[int, Hcp] = {}
        for t1, h1 in self.components.items():
            for t2, h2 in other.components.items():
                t = t1 + t2
                if floor is not None and t < floor:
                    continue
                prod = hcp_mul(h1, h2)
                comps[t] = comps[t] + prod if t in comps else prod
        return HcpSeries(self.k, comps, floor, top)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scalar_mul(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise PreconditionError("negative powers are not defined")
        out = HcpSeries.identity(self.k)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HcpSeries):
            return NotImplemented
        return (self.k, self.floor, self.top, self.components) == \
            (other.k, other.floor, other.top, other.components)

    def __hash__(self):
        return hash((self.k, self.floor, self.top, tuple(sorted(
            (t, h) for t, h in self.components.items()))))

    def agrees_with(self, other: "HcpSeries") -> bool:
        """Equal components on the common known order range."""
        self._check(other)
        lo = max(self.floor_eff(), other.floor_eff())
        if lo == -INF:
            lo = 0
        hi = max(self.top, other.top)
        for t in range(int(lo), hi + 1):
            if self.component(t) != other.component(t):
                return False
        return True

    # -- expansion and serialization -------------------------------------------------------

    def expand(self, xcap: int = 16) -> GradedOp:
        comps = {}
        caps = {}
        for t, h in self.components.items():
            g = h.expand(xcap)
            if t in g.components:
                comps[t] = g.components[t]
            cap = g.xcap(t)
            if cap != INF:
                caps[t] = cap
        return GradedOp(self.k, comps, self.floor, self.top, caps)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "floor": self.floor,
            "top": self.top,
            "components": {str(t): self.components[t].to_dict() for t in sorted(self.components)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HcpSeries":
        k = data["k"]
        comps = {int(t): Hcp.from_dict(k, h) for t, h in data["components"].items()}
        return cls(k, comps, data.get("floor"), data.get("top"))

    def __str__(self):
        if not self.components:
            return "0"
        lines = [f"[{t}] {self.components[t].gform_str()}" for t in sorted(self.components, reverse=True)]
        tail = "" if self.floor is None else f"  [window: ord >= {self.floor}]"
        return "\n".join(lines) + tail

    def __repr__(self):
        return f"HcpSeries(k={self.k}, orders={sorted(self.components, reverse=True)})"


def check_Aqk(P: HcpSeries, kk: int, enforce_growth: bool = True) -> AqkReport:
    """Verify the normal-form shape condition with parameter kk.

    Clauses: every component is an HCP (structural here), every component is
    totally free of B_j, Sdeg_A of the component i below the top stays below
    i + kk, and the top symbol contains no A_i and has Sdeg_A exactly kk.
    """
    if not P.components:
        return AqkReport(False, clause=4, detail="series has no top symbol in its window")
    p = P.top_order()
    for t in sorted(P.components, reverse=True):
        h = P.components[t]
        if not h.is_totally_bfree():
            return AqkReport(False, clause=2, order=t,
                             detail=f"component at order {t} has B part {sorted(h.bpart)}")
        if t == p:
            if h.contains_ai():
                return AqkReport(False, clause=4, order=t,
                                 detail="top symbol contains A_i with i > 0")
            if h.sdeg_a() != kk:
                return AqkReport(False, clause=4, order=t,
                                 detail=f"top symbol has Sdeg_A {h.sdeg_a()}, expected {kk}")
        elif enforce_growth:
            i = p - t
            sa = h.sdeg_a()
            if sa is not None and sa >= i + kk:
                return AqkReport(False, clause=3, order=t,
                                 detail=f"Sdeg_A at order {t} is {sa}, needs < {i + kk}")
    return AqkReport(True)
