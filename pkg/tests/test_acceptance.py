"""Acceptance gate: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Every expected value here is either trivial, verified against the source
formulas, or derived by an independent oracle inside this repository.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from weylnf.criterion import (
    BivarPoly,
    bc_certificate,
    classify_pair,
    hs_coefficient_check,
    type_identity,
    weighted_decompose,
)
from weylnf.fixtures import generic_pair, kdv_pair
from weylnf.gform import Hcp, HcpSeries
from weylnf.newton import classify_top_line, e_set, up_edge
from weylnf.operators import GradedOp, commutator
from weylnf.powerform import expand_power, expand_power_oracle, g_value, t_block
from weylnf.schur import normal_form_report, schur_operator
from weylnf.suites import rand_restriction_series, run_suite

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def _verdict(n: int, ok: bool, msg: str) -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {msg}")


def test_criterion_1_combinatorial_lemma():
    t0 = time.monotonic()
    mismatches = [k for k in range(1, 9) if expand_power(k) != expand_power_oracle(k)]
    spots_ok = (g_value((0, 1)) == 2 and g_value((1, 0)) == 1)
    for k in range(1, 7):
        if t_block(1, 0, k).terms != {((0,), 0): Fraction(k)}:
            spots_ok = False
        for s in range(1, k + 1):
            if t_block(s, s - 1, k).terms != {((s - 1,), 0): Fraction(math.comb(k, s))}:
                spots_ok = False
    elapsed = time.monotonic() - t0
    ok = not mismatches and spots_ok and elapsed < 60
    _verdict(1, ok, f"closed form == oracle for k=1..8, spot values exact, {elapsed:.1f}s")
    assert not mismatches, f"closed form vs oracle mismatch at k={mismatches}"
    assert spots_ok
    assert elapsed < 60


def test_criterion_2_appendix_suite():
    t0 = time.monotonic()
    res = run_suite("appendix", 200, seed=1)
    elapsed = time.monotonic() - t0
    ok = res.passed and elapsed < 300
    _verdict(2, ok, f"200 seeded cases, {len(res.failures)} violations, {elapsed:.1f}s")
    assert res.passed, res.failures[:10]
    assert elapsed < 300


def test_criterion_3_filtration_suite():
    t0 = time.monotonic()
    res = run_suite("filtration", 200, seed=2)
    elapsed = time.monotonic() - t0
    ok = res.passed
    _verdict(3, ok, f"200 seeded cases, {len(res.failures)} violations, {elapsed:.1f}s")
    assert res.passed, res.failures[:10]


SCHUR_QS = {
    "d2+x": [(0, 2, 1), (1, 0, 1)],
    "d2+x2": [(0, 2, 1), (2, 0, 1)],
    "d3+xd+x2": [(0, 3, 1), (1, 1, 1), (2, 0, 1)],
}


def test_criterion_4_schur_contract():
    problems = []
    for name, items in SCHUR_QS.items():
        Q = GradedOp.from_monomials(1, items)
        a = schur_operator(Q, depth=8, xcap=30)
        b = schur_operator(Q, depth=12, xcap=30)
        if not a.verified or not b.verified:
            problems.append(f"{name}: residual check failed")
        if not a.S.agrees_with(b.S) or not a.Sinv.agrees_with(b.Sinv):
            problems.append(f"{name}: deeper recomputation changed coefficients")
    ok = not problems
    _verdict(4, ok, "S^-1 Q S = d^q verified on the window for all three Q; "
                    "depth 12 extends depth 8 exactly" if ok else "; ".join(problems))
    assert ok, problems


ACC_PS = {
    "d3+x": [(0, 3, 1), (1, 0, 1)],
    "d5+x2d": [(0, 5, 1), (2, 1, 1)],
}


def test_criterion_5_normal_forms_are_hcp():
    problems = []
    for qn, qi in SCHUR_QS.items():
        for pn, pi in ACC_PS.items():
            P = GradedOp.from_monomials(1, pi)
            Q = GradedOp.from_monomials(1, qi)
            res = normal_form_report(P, Q, depth=8)
            nf = res.series
            if not res.aqk.ok:
                problems.append(f"{pn}/{qn}: shape condition failed")
                continue
            for (a, b) in up_edge(nf):
                if nf.components[b].point_contains_ai(a):
                    problems.append(f"{pn}/{qn}: up-edge point ({a},{b}) carries A_i")
            cls = classify_top_line(nf)
            flags = {(pt.l, pt.j): pt.contains_ai for pt in e_set(nf).points}
            for v in cls.vertices:
                if flags.get(tuple(v), False):
                    problems.append(f"{pn}/{qn}: top-line vertex {v} carries A_i")
    ok = not problems
    _verdict(5, ok, "all six normal forms fit as B-free HCPs, shape condition holds, "
                    "up-edge and top-line points carry no A_i" if ok else "; ".join(problems))
    assert ok, problems


def test_criterion_6_commuting_kdv():
    P, Q = kdv_pair(24)
    C = commutator(P, Q)
    comm_ok = C.is_zero_in_window()
    cert8 = bc_certificate(P, Q, wmax=6, depth=8)
    cert16 = bc_certificate(P, Q, wmax=6, depth=16)
    expected = BivarPoly({(2, 0): Fraction(1), (0, 3): Fraction(-1),
                          (0, 0): Fraction(-1, 16)})
    cert_ok = (cert8 is not None and cert16 is not None
               and cert8.poly == expected and cert16.poly == expected)
    res = normal_form_report(P, Q, depth=8)
    sdeg_ok = all(h.sdeg_a() == 0 for h in res.series.components.values())
    below_ok = not res.below_window_nonzero
    cls = classify_top_line(res.series)
    cls_ok = cls.variant == "sdeg_zero"
    ok = comm_ok and cert_ok and sdeg_ok and below_ok and cls_ok
    _verdict(6, ok, f"commutator zero through the window; certificate "
                    f"{cert8.poly if cert8 else None} stable under depth doubling; "
                    f"Sdeg_A = 0 on every component; classification {cls.variant}")
    assert comm_ok and cert_ok and sdeg_ok and below_ok and cls_ok


def test_criterion_7_generic_noncommuting():
    P, Q = generic_pair()
    rep = classify_pair(P, Q, depth=10)
    cls = rep.classification
    nf = rep.normal_form.series
    p = nf.top_order()
    lo = nf.floor
    observed = {i: nf.component(p - i).sdeg_a() for i in range(1, p - lo + 1)}
    pattern = all(sa == i - 1 for i, sa in observed.items())
    class_ok = cls.variant == "asymptotic" and cls.sigma == 1
    tentative_ok = cls.tentative and rep.tentative
    ok = class_ok and pattern and tentative_ok
    _verdict(7, ok, f"classification {cls.variant}(sigma={cls.sigma}), tentative "
                    f"flagged: {tentative_ok}, Sdeg_A pattern i-1 observed: {pattern} "
                    f"(observed {observed}); expected asymptotic(1) with the maximal "
                    f"growth pattern - see the decisions ledger for the analysis")
    assert tentative_ok, "tentativeness must be flagged"
    assert class_ok, (
        f"expected Asymptotic(sigma0=1), got {cls.variant}(sigma={cls.sigma}): for this "
        f"pair the Schur solve is supported on orders divisible by 3, so the components "
        f"at orders 2 and 1 vanish identically and Sdeg_A(P'_0) = 1; the pair does not "
        f"exhibit the generic maximal-growth pattern (see decisions ledger)")
    assert pattern, f"expected Sdeg_A(P'_(3-i)) = i-1, observed {observed}"


def test_criterion_8_restriction_machinery():
    piece = weighted_decompose(BivarPoly({(2, 0): Fraction(1), (0, 3): Fraction(-1)}),
                               3, 2)[0]
    spots_ok = [type_identity(piece, i) for i in (0, 1, 2)] == [0, 2, 1]
    rng = random.Random("acceptance-hs")
    failures = []
    done = 0
    while done < 50:
        k = rng.choice([2, 3])
        Pp = rand_restriction_series(rng, k)
        p, q = Pp.top_order(), k
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[(rng.randint(0, 2), rng.randint(0, 2))] = Fraction(rng.randint(-3, 3))
        F = BivarPoly(terms)
        if F.is_zero():
            continue
        done += 1
        chk = hs_coefficient_check(Pp, F, 0)
        top = weighted_decompose(F, p, q)[0]
        ksum = sum((c for c, _, _ in top.terms), Fraction(0))
        expect = (HcpSeries(k, {chk.nf_weight: Hcp(k, chk.nf_weight, {(0, 0): ksum})})
                  if ksum else HcpSeries.zero(k))
        if not (chk.lhs.agrees_with(chk.rhs) and chk.lhs.agrees_with(expect)):
            failures.append(f"s=0 failed on instance {done}")
        g = math.gcd(p, q)
        u2, v1 = rng.randint(0, 1), rng.randint(0, 1)
        c = Fraction(rng.randint(1, 3))
        F1 = BivarPoly({(u2 + q // g, v1): c, (u2, v1 + p // g): -c})
        chk1 = hs_coefficient_check(Pp, F1, 1)
        if not (chk1.applicable and chk1.lhs.agrees_with(chk1.rhs)):
            failures.append(f"s=1 failed on instance {done}")
    ok = spots_ok and not failures
    _verdict(8, ok, f"50 synthetic restriction instances: s=0 and s=1 extraction exact; "
                    f"type identities of X^2 - Y^3 are (0, 2, 1)")
    assert spots_ok
    assert not failures, failures[:5]


def _run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "weylnf.cli", *args],
                          capture_output=True, cwd=os.path.dirname(GOLDEN))
    assert proc.returncode == 0, proc.stdout.decode() + proc.stderr.decode()
    return proc.stdout


def _golden_bytes(name):
    with open(os.path.join(GOLDEN, name), "rb") as fh:
        return fh.read()


def test_criterion_9_cli_goldens(tmp_path):
    ok = True
    out1 = _run_cli(["expand-power", "--k", "3"])
    out2 = _run_cli(["expand-power", "--k", "3"])
    ok &= out1 == out2 == _golden_bytes("expand_power_k3.txt")

    inp = os.path.join(GOLDEN, "normal_form_generic.json")
    svg_a, svg_b = tmp_path / "a.svg", tmp_path / "b.svg"
    _run_cli(["newton", "--input", inp, "--svg", str(svg_a)])
    _run_cli(["newton", "--input", inp, "--svg", str(svg_b)])
    ok &= svg_a.read_bytes() == svg_b.read_bytes() == _golden_bytes("newton_generic.svg")

    kdv1 = _run_cli(["classify", "--fixture", "kdv24", "--depth", "8",
                     "--wmax", "6", "--format", "json"])
    kdv2 = _run_cli(["classify", "--fixture", "kdv24", "--depth", "8",
                     "--wmax", "6", "--format", "json"])
    ok &= kdv1 == kdv2 == _golden_bytes("classify_kdv.json")
    gen1 = _run_cli(["classify", "--fixture", "generic", "--depth", "10",
                     "--format", "json"])
    ok &= gen1 == _golden_bytes("classify_generic.json")
    json.loads(gen1)  # well-formed JSON
    _verdict(9, ok, "expand-power, newton SVG, and classify JSON byte-identical "
                    "across runs and equal to the committed goldens")
    assert ok
