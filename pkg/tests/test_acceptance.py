"""Acceptance criteria, each at its stated bounds and time budget.

Every criterion prints one ``PASS``/``FAIL`` line.  Run directly
(``python tests/test_acceptance.py``) for just the summary.
"""

from __future__ import annotations

import time
from math import comb

import pytest

from qhyper.dualside import (
    expansion_suite,
    integrality_scan,
    root_image_report,
    torus_product,
    xi,
    xi_manin_check,
)
from qhyper.hyper import (
    cocommutative_at_one,
    coproduct_closed_form,
    frobenius_multiplicative,
    gen_binom,
    gen_tb,
    hyper_coproduct,
    integrality_sweep,
    phi_power_check,
    q1_bracket_report,
    relation_check,
    relation_instances,
    sl2_relation_check,
)
from qhyper.qmatrix import frobenius_restricted, hopf_report, manin_system, qdet


def pbw_confluence():
    notes = []
    for n in (1, 2, 3):
        done = manin_system(n).complete(6)
        cert = done.certificate
        counts = done.normal_word_counts(6)
        expected = [comb(d + n * n - 1, d) for d in range(7)]
        if cert.rules_added or not cert.confluent or counts != expected:
            notes.append(f"n={n}: added={cert.rules_added} counts={counts}")
    return not notes, notes or "n=1..3, degree<=6, no new rules, counts match"


def hopf_axioms():
    bad = [f"n={n}: {k}" for n in (2, 3) for k, v in hopf_report(n).items() if not v]
    return not bad, bad or "coassociativity, counit, antipode, grouplike determinant for n=2,3"


def basis_integrality():
    reps = [integrality_sweep(2, 6), integrality_sweep(3, 4)]
    bad = [v for r in reps for v in r["violations"]]
    return not bad, bad or f"pairs checked: {reps[0]['pairs']} (n=2), {reps[1]['pairs']} (n=3)"


def relation_suite():
    total, bad = 0, []
    for n in (2, 3):
        for inst in relation_instances(n, 3, 2, "standard"):
            total += 1
            if not relation_check(inst):
                bad.append(inst.label())
    return not bad, bad[:20] or f"{total} instances"


def coproduct_closed_forms():
    total, bad = 0, []
    for n in (2, 3):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    for h in (0, 1, 2):
                        total += 1
                        if coproduct_closed_form("tb", n, i, j, h) != hyper_coproduct(gen_tb(n, i, j, h)):
                            bad.append(f"tb[{i},{j}]^({h}) n={n}")
            for c in range(-2, 3):
                for k in (0, 1, 2):
                    total += 1
                    if coproduct_closed_form("binom", n, i, c, k) != hyper_coproduct(gen_binom(n, i, c, k)):
                        bad.append(f"bin[{i}]({c},{k}) n={n}")
    return not bad, bad or f"{total} generators"


def classical_limit():
    bad, cases = [], 0
    for n in (2, 3):
        br = q1_bracket_report(n)
        cc = cocommutative_at_one(n, 3)
        cases += br["cases"] + cc["cases"]
        bad += [f"n={n} bracket {f}" for f in br["failures"]]
        bad += [f"n={n} not cocommutative on {f}" for f in cc["failures"]]
    return not bad, bad or f"{cases} brackets and basis elements"


def determinant_image():
    bad = []
    for n in (2, 3):
        if xi(qdet(n)) != torus_product(n):
            bad.append(f"image of the determinant, n={n}")
        rep = xi_manin_check(n)
        bad += [f"n={n} relation {x}" for x in rep["failures"]]
    return not bad, bad or "determinant image and all defining relations, n=2,3"


def root_images():
    bad, total = [], 0
    for n in (2, 3):
        rep = root_image_report(n, 3, 2)
        total += rep["instances"]
        bad += [f"n={n} {k}{p}" for k, p in rep["failures"]]
    return not bad, bad[:20] or f"{total} instances"


def pairing_integrality():
    rep = integrality_scan(2, 4, 3)
    return rep["ok"], rep["violations"][:20] or f"{rep['pairs']} pairings"


def frobenius_at_cube_root():
    mult = frobenius_multiplicative(2, 3, 4)
    phi = phi_power_check(2, 3)
    res = frobenius_restricted(2, 3)
    bad = list(mult["failures"])
    if not phi["ok"]:
        bad.append("phi^3 - 1 does not vanish")
    bad += res["commutator_failures"] + res["coproduct_failures"]
    return not bad, bad[:20] or f"{mult['cases']} basis pairs, phi^3 = 1, restricted image commutative"


def special_linear_relation():
    rep = sl2_relation_check()
    return rep["ok"], "relation vanishes with determinant one" if rep["ok"] else rep


def expansion_identities():
    rep = expansion_suite(4)
    return rep["ok"], rep["failures"] or f"{rep['checks']} identities"


CRITERIA = [
    (1, "PBW confluence", pbw_confluence, 60),
    (2, "Hopf axioms", hopf_axioms, 60),
    (3, "integral basis structure constants", basis_integrality, 600),
    (4, "integral-form relation suite", relation_suite, 600),
    (5, "coproduct closed forms", coproduct_closed_forms, 300),
    (6, "classical limit brackets and cocommutativity", classical_limit, None),
    (7, "determinant image and morphism property", determinant_image, 60),
    (8, "root vector image closed forms", root_images, None),
    (9, "pairing integrality scan", pairing_integrality, 300),
    (10, "Frobenius at a cube root of unity", frobenius_at_cube_root, 300),
    (11, "special linear relation", special_linear_relation, None),
    (12, "expansion identities", expansion_identities, 120),
]


def evaluate(number, title, fn, budget):
    t0 = time.perf_counter()
    ok, detail = fn()
    secs = time.perf_counter() - t0
    in_time = budget is None or secs < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    limit = f" (limit {budget}s)" if budget else ""
    line = f"criterion {number:2d} {verdict}  {title}  {secs:.1f}s{limit}  {detail}"
    return ok and in_time, line, ok, in_time


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, fn, budget, capsys):
    passed, line, ok, in_time = evaluate(number, title, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert in_time, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line, _, _ in results:
        print(line)
    raise SystemExit(0 if all(r[0] for r in results) else 1)
