"""One test per acceptance criterion; each records a PASS/FAIL line shown at the end of the run."""

import time

import pytest

from tamedef import verify

from conftest import ACCEPTANCE_LINES


def report_line(number, title, report, started):
    status = "PASS" if report.status == verify.PASS else report.status.upper()
    line = f"criterion {number:2d} {title}: {status} ({time.perf_counter() - started:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    print(report.summary())


def check(number, title, report, started):
    report_line(number, title, report, started)
    assert report.status == verify.PASS, report.summary()


def test_criterion_01_left_table_saturated_models():
    t = time.perf_counter()
    rows = verify.load_data("f3_examples.json")["left"]["rows"]
    cases = [(f"left row {r['row']} saturated", verify.table_row_case,
              {"side": "left", "row": r["row"], "which": "saturated"}) for r in rows]
    check(1, "left table, normalized saturated ideals", verify.run_cases("cdm-tables", cases), t)


def test_criterion_02_right_table_naive_and_saturated():
    t = time.perf_counter()
    check(2, "right table, naive and saturated ideals", verify.cdm_tables(sides=("right",)), t)


def _f1(name):
    return verify.run_cases("f1", [(name, verify.f1_case, {"case": name})])


def test_criterion_03_f1_case_1():
    t = time.perf_counter()
    check(3, "f = 1 case 1", _f1("case1"), t)


def test_criterion_04_f1_case_2():
    t = time.perf_counter()
    check(4, "f = 1 case 2", _f1("case2"), t)


def test_criterion_05_jacobian_bound():
    t = time.perf_counter()
    check(5, "p-power in Jacobian minors plus ideal", verify.elkik(seed=0, sample=50), t)


def test_criterion_06_generic_shapes():
    t = time.perf_counter()
    check(6, "generic shapes give linear and XY - p generators", verify.generic(fmax=3), t)


def test_criterion_07_gene_laws():
    t = time.perf_counter()
    cases = [(f"gene laws p={p} f={f}", verify.gene_law_case, {"p": p, "f": f, "n": 1000, "seed": 0})
             for p, f in ((5, 1), (7, 2), (11, 3))]
    check(7, "gene swap and shift laws", verify.run_cases("genes", cases), t)


def test_criterion_08_fiber_tuples():
    t = time.perf_counter()
    cases = [("fiber tuples p=11 f=1 exact", verify.fiber_case, {"p": 11, "f": 1, "kmax": 3, "strict": True})]
    check(8, "local tuples over the f = 1 fiber", verify.run_cases("genes", cases), t)


def test_criterion_09_gene_independence():
    t = time.perf_counter()
    report = verify.indep(p=23, f=2, kmax=3)
    report_line(9, "models depend only on the gene class", report, t)
    # an inconclusive pair is reported above; it only fails when an invariant separates the pair
    assert report.status != verify.FAIL, report.summary()


def test_criterion_10_kernel_oracles():
    t = time.perf_counter()
    check(10, "saturation routes agree and S-pairs reduce to zero", verify.kernel(seed=0, samples=200), t)
