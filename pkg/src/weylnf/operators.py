"""Truncated exact arithmetic for ordinary differential operators.

Operators live in the completion of K[[x]][d] by the grading deg x = -1,
deg d = +1: an element is a sum of homogeneous components, the component of
order t collecting the monomials x^n d^(n+t). A :class:`GradedOp` stores
finitely much of such an element together with an explicit exactness window:

* ``floor``: smallest order at which components are complete (``None`` means
  every order is represented, nothing is missing below);
* ``top``: orders above ``top`` are known to vanish;
* per-component ``xcap``: largest x-degree at which the stored coefficients
  are guaranteed exact (absent means exact at every degree).

Every stored coefficient inside the window is an exact value of the
represented operator; the window algebra below guarantees this is preserved
by sums and products. Multiplication works through the diagonal action on
monomials: the component of order t sends x^j to nu(j) * x^(j-t), and
composition is pointwise in nu, which both respects the grading and yields
the product window rule
``xcap(t) = min over t1+t2=t of min(xcap_left(t1), xcap_right(t2) - t1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContextMismatchError,
    PreconditionError,
    TruncationError,
    UndefinedOrderError,
)
from .scalars import CycloScalar

INF = math.inf


def _as_scalar(k: int, value) -> CycloScalar:
    if isinstance(value, CycloScalar):
        if value.k != k:
            raise ContextMismatchError(f"cyclotomic order mismatch: {k} vs {value.k}")
        return value
    return CycloScalar.from_rational(k, value)


@dataclass(frozen=True)
class XdMonomial:
    """A single monomial coeff * x^xdeg * d^ddeg."""

    xdeg: int
    ddeg: int
    coeff: CycloScalar

    def __post_init__(self):
        if self.xdeg < 0 or self.ddeg < 0:
            raise PreconditionError("monomial exponents must be nonnegative")
        if self.coeff.is_zero():
            raise PreconditionError("monomial coefficient must be nonzero")

    @property
    def order(self) -> int:
        return self.ddeg - self.xdeg


class GradedOp:
    """Window-truncated element of the graded operator completion."""

    __slots__ = ("k", "components", "floor", "top", "xcaps")

    def __init__(self, k, components, floor, top, xcaps=None):
        comps = {}
        for t, comp in components.items():
            clean = {n: c for n, c in comp.items() if not c.is_zero()}
            for n in clean:
                if n < max(0, -t):
                    raise PreconditionError(f"monomial x^{n} d^{n + t} has negative d-power")
            if clean:
                comps[t] = clean
        xcaps = {t: int(c) for t, c in (xcaps or {}).items() if c != INF}
        if floor is not None:
            comps = {t: c for t, c in comps.items() if floor <= t <= top}
            xcaps = {t: c for t, c in xcaps.items() if floor <= t <= top}
        else:
            # With no unknown orders, "top" carries no information beyond the
            # stored content; normalize it so equality is structural.
            top = max(list(comps) + list(xcaps), default=0)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "floor", floor)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "xcaps", xcaps)

    def __setattr__(self, name, value):
        raise AttributeError("GradedOp is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, k: int) -> "GradedOp":
        return cls(k, {}, None, 0)

    @classmethod
    def one(cls, k: int) -> "GradedOp":
        return cls.from_monomials(k, [(0, 0, 1)])

    @classmethod
    def from_scalar(cls, k: int, value) -> "GradedOp":
        value = _as_scalar(k, value)
        if value.is_zero():
            return cls.zero(k)
        return cls.from_monomials(k, [(0, 0, value)])

    @classmethod
    def from_monomials(cls, k: int, items) -> "GradedOp":
        """Total operator from (xdeg, ddeg, coeff) triples; everything exact."""
        comps: dict[int, dict[int, CycloScalar]] = {}
        top = 0
        for xdeg, ddeg, coeff in items:
            coeff = _as_scalar(k, coeff)
            t = ddeg - xdeg
            comps.setdefault(t, {})
            comps[t][xdeg] = comps[t].get(xdeg, CycloScalar.zero(k)) + coeff
            top = max(top, t)
        return cls(k, comps, None, top)

    @classmethod
    def x_op(cls, k: int, power: int = 1) -> "GradedOp":
        return cls.from_monomials(k, [(power, 0, 1)])

    @classmethod
    def d_op(cls, k: int, power: int = 1) -> "GradedOp":
        return cls.from_monomials(k, [(0, power, 1)])

    def ring_one(self) -> "GradedOp":
        return GradedOp.one(self.k)

    # -- window bookkeeping ---------------------------------------------------

    def xcap(self, t: int):
        """Exactness cap of the order-t component (INF when exact everywhere)."""
        if self.floor is not None and t < self.floor:
            return -1  # nothing known
        if t > self.top:
            return INF
        return self.xcaps.get(t, INF)

    def active_orders(self) -> list[int]:
        """Orders that carry content or a finite cap (possible nonzero tail)."""
        orders = set(self.components) | set(self.xcaps)
        return sorted(orders)

    def is_total(self) -> bool:
        return self.floor is None and not self.xcaps

    def floor_eff(self) -> float:
        return -INF if self.floor is None else self.floor

    def is_zero_in_window(self) -> bool:
        return not self.components

    def max_xdeg(self, t: int) -> int:
        comp = self.components.get(t)
        return max(comp) if comp else -1

    def lift_context(self, k_new: int) -> "GradedOp":
        """Re-embed a rational-context operator into Q(xi) of order k_new."""
        if k_new == self.k:
            return self
        if self.k != 1:
            raise ContextMismatchError(
                f"can only lift from the rational context, not k={self.k}")
        comps = {t: {n: CycloScalar.from_rational(k_new, c.rational_value())
                     for n, c in comp.items()}
                 for t, comp in self.components.items()}
        return GradedOp(k_new, comps, self.floor, self.top, self.xcaps)

    def restrict(self, floor=None, xcap=None) -> "GradedOp":
        """Weaken the window: raise the floor and/or clamp every cap."""
        new_floor = self.floor
        if floor is not None:
            new_floor = floor if new_floor is None else max(new_floor, floor)
        comps = dict(self.components)
        caps = dict(self.xcaps)
        if xcap is not None:
            lo = new_floor if new_floor is not None else min(comps, default=0)
            for t in range(min(lo, self.top), self.top + 1):
                caps[t] = min(self.xcaps.get(t, xcap), xcap)
            comps = {t: {n: c for n, c in comp.items() if n <= caps.get(t, INF)}
                     for t, comp in comps.items()}
        return GradedOp(self.k, comps, new_floor, self.top, caps)

    def component_as_op(self, t: int) -> "GradedOp":
        """The order-t component alone, keeping its exactness cap."""
        comp = {t: dict(self.components.get(t, {}))}
        caps = {}
        cap = self.xcap(t)
        if cap == -1:
            raise TruncationError(f"component at order {t} is below the window floor",
                                  {"floor": self.floor, "order": t})
        if cap != INF:
            caps[t] = cap
        return GradedOp(self.k, comp, None, t, caps)

    # -- basic queries ---------------------------------------------------------

    def ord(self) -> int:
        if not self.components:
            if self.floor is None and not self.xcaps:
                raise UndefinedOrderError("ord of the zero operator is undefined")
            raise UndefinedOrderError(
                f"operator vanishes on its whole window (floor={self.floor})")
        return max(self.components)

    def sigma(self) -> "GradedOp":
        return self.component_as_op(self.ord())

    def is_monic(self) -> bool:
        try:
            p = self.ord()
        except UndefinedOrderError:
            return False
        comp = self.components[p]
        return comp == {0: CycloScalar.one(self.k)}

    def is_normalized(self) -> bool:
        """Monic with identically zero d^(p-1) coefficient, window-verified."""
        if not self.is_monic():
            return False
        p = self.ord()
        lo = self.floor if self.floor is not None else min(self.components, default=0)
        for t in range(min(lo, p - 1), p):
            n = p - 1 - t
            if n < 0:
                continue
            comp = self.components.get(t, {})
            if n in comp:
                return False
            if self.xcap(t) < n:
                raise TruncationError(
                    "cannot verify the d^(p-1) coefficient inside the window",
                    {"order": t, "xdeg": n})
        return True

    def ddeg(self) -> int:
        """Largest d-power among stored monomials."""
        best = -1
        for t, comp in self.components.items():
            for n in comp:
                best = max(best, n + t)
        return best

    def monomials(self):
        for t in sorted(self.components):
            for n in sorted(self.components[t]):
                yield XdMonomial(n, n + t, self.components[t][n])

    # -- ring operations --------------------------------------------------------

    def _check_ctx(self, other: "GradedOp"):
        if self.k != other.k:
            raise ContextMismatchError(f"cyclotomic order mismatch: {self.k} vs {other.k}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            other = GradedOp.from_scalar(self.k, other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        self._check_ctx(other)
        if other.floor is None:
            floor = self.floor
        elif self.floor is None:
            floor = other.floor
        else:
            floor = max(self.floor, other.floor)
        top = max(self.top, other.top)
        comps: dict[int, dict[int, CycloScalar]] = {}
        for src in (self, other):
            for t, comp in src.components.items():
                tgt = comps.setdefault(t, {})
                for n, c in comp.items():
                    tgt[n] = tgt.get(n, CycloScalar.zero(self.k)) + c
        caps = {}
        for t in set(self.xcaps) | set(other.xcaps):
            cap = min(self.xcap(t), other.xcap(t))
            if cap != INF:
                caps[t] = cap
                if t in comps:
                    comps[t] = {n: c for n, c in comps[t].items() if n <= cap}
        return GradedOp(self.k, comps, floor, top, caps)

    __radd__ = __add__

    def __neg__(self):
        comps = {t: {n: -c for n, c in comp.items()} for t, comp in self.components.items()}
        return GradedOp(self.k, comps, self.floor, self.top, self.xcaps)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            other = GradedOp.from_scalar(self.k, other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, value) -> "GradedOp":
        value = _as_scalar(self.k, value)
        if value.is_zero():
            # Zero content, but the window stays what it was.
            return GradedOp(self.k, {}, self.floor, self.top, self.xcaps)
        comps = {t: {n: c * value for n, c in comp.items()}
                 for t, comp in self.components.items()}
        return GradedOp(self.k, comps, self.floor, self.top, self.xcaps)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scalar_mul(other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        self._check_ctx(other)
        return _op_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scalar_mul(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise PreconditionError("negative operator powers are not defined")
        out = GradedOp.one(self.k)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedOp):
            return NotImplemented
        return (self.k == other.k and self.floor == other.floor
                and self.top == other.top and self.xcaps == other.xcaps
                and self.components == other.components)

    def __hash__(self):
        return hash((self.k, self.floor, self.top,
                     tuple(sorted((t, tuple(sorted(c.items()))) for t, c in self.components.items()))))

    def agrees_with(self, other: "GradedOp") -> bool:
        """Equal coefficients on the common window (orders and caps)."""
        self._check_ctx(other)
        lo = max(self.floor_eff(), other.floor_eff())
        if lo == -INF:
            lo = min(list(self.components) + list(other.components) + [0])
        hi = max(self.top, other.top)
        for t in range(int(lo), hi + 1):
            cap = min(self.xcap(t), other.xcap(t))
            if cap == -1:
                continue
            a = self.components.get(t, {})
            b = other.components.get(t, {})
            for n in set(a) | set(b):
                if n <= cap and a.get(n, CycloScalar.zero(self.k)) != b.get(n, CycloScalar.zero(self.k)):
                    return False
        return True

    # -- the action on polynomials (independent oracle route) -------------------

    def apply_to_poly(self, poly: dict[int, CycloScalar], through_degree: int | None = None
                      ) -> dict[int, CycloScalar]:
        """Act on a polynomial in x, exactly.

        ``poly`` maps x-degree to coefficient. When the operator window is
        truncated, only output degrees up to ``through_degree`` can be
        certified; omitting it then raises :class:`TruncationError`.
        """
        supp = sorted(n for n, c in poly.items() if not c.is_zero())
        if not supp:
            return {}
        if self.floor is None:
            lo_order = min(self.components, default=0)
            max_out = max(supp) - min(lo_order, 0)
            through = max_out if through_degree is None else through_degree
        else:
            if through_degree is None:
                raise TruncationError(
                    "action of a window-truncated operator needs through_degree",
                    {"floor": self.floor})
            through = through_degree
            pollution_from = min(supp) - self.floor + 1
            if through >= pollution_from:
                raise TruncationError(
                    "requested output degrees depend on orders below the floor",
                    {"floor": self.floor, "max_exact_degree": pollution_from - 1})
        for t in self.active_orders():
            cap = self.xcap(t)
            if cap == INF:
                continue
            for j in supp:
                if 0 <= j - t <= through and cap < j - t:
                    raise TruncationError(
                        "component cap too small for the requested action",
                        {"order": t, "needed_xcap": j - t, "xcap": cap})
        k = self.k
        out: dict[int, CycloScalar] = {}
        for t, comp in self.components.items():
            for j in supp:
                e = j - t
                if e < 0 or e > through:
                    continue
                pc = poly[j]
                acc = CycloScalar.zero(k)
                for n, c in comp.items():
                    f = math.perm(j, n + t) if n + t <= j else 0
                    if f:
                        acc = acc + c * f
                if not acc.is_zero():
                    out[e] = out.get(e, CycloScalar.zero(k)) + acc * pc
        return {e: c for e, c in out.items() if not c.is_zero()}

    # -- serialization and rendering ---------------------------------------------

    def to_dict(self) -> dict:
        comps = {}
        for t in sorted(self.components):
            comp = self.components[t]
            n0 = max(0, -t)
            hi = max(comp)
            cap = self.xcap(t)
            coeffs = [str(comp.get(n, CycloScalar.zero(self.k))) for n in range(n0, hi + 1)]
            comps[str(t)] = {"xcap": None if cap == INF else cap, "coeffs": coeffs}
        for t in sorted(self.xcaps):
            comps.setdefault(str(t), {"xcap": self.xcaps[t], "coeffs": []})
        return {"k": self.k, "floor": self.floor, "top": self.top, "components": comps}

    @classmethod
    def from_dict(cls, data: dict) -> "GradedOp":
        from .scalars import parse_scalar
        k = data["k"]
        comps = {}
        caps = {}
        for ts, entry in data["components"].items():
            t = int(ts)
            n0 = max(0, -t)
            comp = {}
            for i, s in enumerate(entry["coeffs"]):
                val = parse_scalar(k, s)
                if not val.is_zero():
                    comp[n0 + i] = val
            if comp:
                comps[t] = comp
            if entry.get("xcap") is not None:
                caps[t] = entry["xcap"]
        return cls(k, comps, data.get("floor"), data["top"], caps)

    def __str__(self):
        if not self.components:
            body = "0"
        else:
            monos = sorted(self.monomials(), key=lambda m: (-m.ddeg, m.xdeg))
            parts = [_monomial_str(m.coeff, m.xdeg, m.ddeg) for m in monos]
            body = parts[0]
            for p in parts[1:]:
                if p.startswith("-"):
                    body += " - " + p[1:]
                else:
                    body += " + " + p
        if self.floor is not None:
            body += f"  [window: ord >= {self.floor}]"
        return body

    def __repr__(self):
        return f"GradedOp(k={self.k}, {self})"


def _monomial_str(coeff: CycloScalar, xdeg: int, ddeg: int) -> str:
    factors = []
    if xdeg == 1:
        factors.append("x")
    elif xdeg > 1:
        factors.append(f"x^{xdeg}")
    if ddeg == 1:
        factors.append("d")
    elif ddeg > 1:
        factors.append(f"d^{ddeg}")
    if coeff.is_rational():
        r = coeff.rational_value()
        if not factors:
            return str(r)
        if r == 1:
            return "*".join(factors)
        if r == -1:
            return "-" + "*".join(factors)
        return f"{r}*" + "*".join(factors)
    cs = f"({coeff})"
    return cs if not factors else cs + "*" + "*".join(factors)


# -- multiplication kernel -------------------------------------------------------


def _comp_nu(comp: dict[int, CycloScalar], t: int, jmax: int, k: int) -> list[CycloScalar]:
    """Diagonal action values nu(j) = sum_n a_n * perm(j, n+t), j = 0..jmax."""
    zero = CycloScalar.zero(k)
    nu = [zero] * (jmax + 1)
    for n, c in comp.items():
        m = n + t
        for j in range(max(m, 0), jmax + 1):
            f = math.perm(j, m)
            nu[j] = nu[j] + c * f
    return nu


def _nu_to_comp(nu: list[CycloScalar], t: int, k: int) -> dict[int, CycloScalar]:
    """Invert the triangular map nu(j) = sum a_n perm(j, n+t)."""
    out: dict[int, CycloScalar] = {}
    for j in range(max(0, t), len(nu)):
        val = nu[j]
        for n, a in out.items():
            m = n + t
            if m <= j:
                f = math.perm(j, m)
                if f:
                    val = val - a * f
        if not val.is_zero():
            out[j - t] = val * Fraction(1, math.factorial(j))
    return out


def _op_mul(A: GradedOp, B: GradedOp) -> GradedOp:
    k = A.k
    top = A.top + B.top
    fa, fb = A.floor_eff(), B.floor_eff()
    floor_val = max(fa + B.top, fb + A.top)
    floor = None if floor_val == -INF else int(floor_val)
    if floor is not None and floor > top:
        raise TruncationError(
            "product window is empty: the factor windows are too shallow",
            {"result_floor": floor, "result_top": top,
             "needed_extra_depth": floor - top})

    act_a = A.active_orders()
    act_b = set(B.active_orders())

    # Collect contributing pairs per result order.
    pairs: dict[int, list[tuple[int, int]]] = {}
    for ta in act_a:
        for tb in act_b:
            t = ta + tb
            if floor is not None and t < floor:
                continue
            pairs.setdefault(t, []).append((ta, tb))

    comps: dict[int, dict[int, CycloScalar]] = {}
    caps: dict[int, int] = {}
    nu_cache_a: dict[tuple[int, int], list[CycloScalar]] = {}
    nu_cache_b: dict[tuple[int, int], list[CycloScalar]] = {}

    for t, plist in sorted(pairs.items()):
        cap = INF
        for ta, tb in plist:
            cap = min(cap, A.xcap(ta), B.xcap(tb) - ta)
        if cap != INF:
            jmax = int(cap) + t
        else:
            jmax = -1
            for ta, tb in plist:
                ca = A.components.get(ta)
                cb = B.components.get(tb)
                if ca and cb:
                    jmax = max(jmax, max(ca) + max(cb) + t)
        if jmax >= 0:
            zero = CycloScalar.zero(k)
            nu = [zero] * (jmax + 1)
            touched = False
            for ta, tb in plist:
                ca = A.components.get(ta)
                cb = B.components.get(tb)
                if not ca or not cb:
                    continue
                need_b = jmax
                key_b = (tb, need_b)
                nub = nu_cache_b.get(key_b)
                if nub is None or len(nub) < need_b + 1:
                    nub = _comp_nu(cb, tb, need_b, k)
                    nu_cache_b[key_b] = nub
                need_a = jmax - tb
                key_a = (ta, need_a)
                nua = nu_cache_a.get(key_a)
                if nua is None or len(nua) < need_a + 1:
                    nua = _comp_nu(ca, ta, max(need_a, 0), k)
                    nu_cache_a[key_a] = nua
                for j in range(jmax + 1):
                    ja = j - tb
                    if 0 <= ja < len(nua):
                        v = nub[j]
                        w = nua[ja]
                        if v and w:
                            nu[j] = nu[j] + v * w
                            touched = True
            if touched:
                comp = _nu_to_comp(nu, t, k)
                if comp:
                    comps[t] = comp
        if cap != INF:
            caps[t] = int(cap)

    return GradedOp(k, comps, floor, top, caps)


# -- named operations -------------------------------------------------------------


def mono_mul(a: XdMonomial, b: XdMonomial) -> GradedOp:
    """Product of two monomials by the Leibniz expansion (oracle route)."""
    k = a.coeff.k
    if b.coeff.k != k:
        raise ContextMismatchError("cyclotomic order mismatch in mono_mul")
    items = []
    for j in range(0, min(a.ddeg, b.xdeg) + 1):
        f = math.comb(a.ddeg, j) * math.perm(b.xdeg, j)
        if f:
            items.append((a.xdeg + b.xdeg - j, a.ddeg + b.ddeg - j, a.coeff * b.coeff * f))
    return GradedOp.from_monomials(k, items)


def op_add(A: GradedOp, B: GradedOp) -> GradedOp:
    return A + B


def op_mul(A: GradedOp, B: GradedOp) -> GradedOp:
    return A * B


def commutator(A: GradedOp, B: GradedOp) -> GradedOp:
    return A * B - B * A


def ad_pow(q: int, A: GradedOp, a: int) -> GradedOp:
    """(ad d^q)^a applied to A."""
    if q <= 0 or a < 0:
        raise PreconditionError("ad_pow needs q >= 1 and a >= 0")
    dq = GradedOp.d_op(A.k, q)
    out = A
    for _ in range(a):
        out = commutator(dq, out)
    return out


def poly_from_pairs(k: int, pairs) -> dict[int, CycloScalar]:
    out = {}
    for n, c in pairs:
        c = _as_scalar(k, c)
        if not c.is_zero():
            out[n] = out.get(n, CycloScalar.zero(k)) + c
    return {n: c for n, c in out.items() if not c.is_zero()}
