"""Acceptance criteria 1-11, at the stated tolerances and sample sizes.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or ``python tests/test_acceptance.py``.
"""
import io
import sys
import time
from contextlib import redirect_stdout
from pathlib import Path


sys.path.insert(0, str(Path(__file__).parent))

from cataclysms.cli import main as cli_main  # noqa: E402
from cataclysms.suites import run_suite  # noqa: E402

SEED = 0
RESULTS: dict = {}

TITLES = {
    1: "stretching-map identities (1e-9, 100 samples each, < 10 s)",
    2: "shearing inverse/composition/equivariance (1e-8, 50 samples, < 30 s)",
    3: "deformed relator (1e-7, 20 cycles x 3 bases) and exact zero cycle",
    4: "deformed flags are eigenflags (1e-7, >= 20 vertices), reference vertices fixed",
    5: "additivity (1e-7, 10 pairs) and factorization (1e-8)",
    6: "block embedding compatibility (1e-8) and exterior square witness (>= 1e-3)",
    7: "horocyclic triviality criterion (1e-9 equal, >= 1e-3 differ)",
    8: "Busemann recovery (1e-8, 50 instances, single leaf)",
    9: "dimension formulas via the CLI (exact)",
    10: "slithering identities (1e-9) and spiral decay (slope < 0, R^2 >= 0.9, length >= 20)",
    11: "divergence minima strictly increasing over lengths 1..6 (Fuchsian, Hitchin(3))",
}


def record(number):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = (False, f"{type(exc).__name__}: {exc}".splitlines()[0])
                raise
            RESULTS[number] = (True, detail or "")
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _checks(report):
    return {c["name"]: c for c in report.checks}


def _assert_le(check, tol, count=1):
    assert check["mode"] == "le" and check["tol"] <= tol, check
    assert check["count"] >= count, check
    assert check["value"] <= tol, check
    return check["value"]


def _timed(name):
    t0 = time.perf_counter()
    rep = run_suite(name, seed=SEED)
    return rep, time.perf_counter() - t0


@record(1)
def test_criterion_01_stretching():
    rep, secs = _timed("lemma32")
    c = _checks(rep)
    worst = max(_assert_le(c[k], 1e-9, 100) for k in ("additive", "inverse", "reversed", "equivariant"))
    assert secs < 10.0
    return f"max err {worst:.1e}, {secs:.2f} s"


@record(2)
def test_criterion_02_shearing():
    rep, secs = _timed("prop53")
    c = _checks(rep)
    worst = max(_assert_le(c[k], 1e-8, 50) for k in ("inverse", "composition", "equivariance"))
    assert c["chains_nontrivial"]["passed"]
    assert secs < 30.0
    return f"max err {worst:.1e}, {secs:.2f} s"


@record(3)
def test_criterion_03_relator():
    rep, _ = _timed("thm56")
    c = _checks(rep)
    worst = 0.0
    for base in ("fuchsian", "hitchin3", "horocyclic"):
        worst = max(worst, _assert_le(c[f"{base}:relator"], 1e-7, 20))
        assert c[f"{base}:zero_cycle_exact"]["passed"]
    return f"max relator residual {worst:.1e}"


@record(4)
def test_criterion_04_flags():
    rep, _ = _timed("thm58")
    c = _checks(rep)
    a = _assert_le(c["eigenflag_match"], 1e-7, 20)
    b = _assert_le(c["reference_vertices_unchanged"], 1e-7)
    return f"{c['eigenflag_match']['count']} vertices, max dist {max(a, b):.1e}"


@record(5)
def test_criterion_05_additivity():
    rep, _ = _timed("additivity")
    c = _checks(rep)
    a = _assert_le(c["additivity"], 1e-7, 10)
    f = _assert_le(c["factorization"], 1e-8)
    s = _assert_le(c["stretch_conjugation"], 1e-8)
    return f"additivity {a:.1e}, factorization {max(f, s):.1e}"


@record(6)
def test_criterion_06_compose():
    rep, _ = _timed("compose")
    c = _checks(rep)
    d = _assert_le(c["iota31_equivariance"], 1e-8)
    w = c["exterior_square_residual"]
    assert w["mode"] == "ge" and w["value"] >= 1e-3
    return f"deviation {d:.1e}, witness residual {w['value']:.3g}"


@record(7)
def test_criterion_07_htrivial():
    rep = run_suite("htrivial", seed=SEED)
    assert rep.passed, rep.first_failure()
    sep = [c for c in rep.checks if c["name"] == "separating:deviation"]
    assert sep and all(c["value"] <= 1e-9 for c in sep)
    non = _checks(rep)["nonseparating:deviation"]
    assert non["value"] >= 1e-3
    return f"separating {max(c['value'] for c in sep):.1e}, non-separating {non['value']:.3g}"


@record(8)
def test_criterion_08_busemann():
    rep, _ = _timed("busemann")
    c = _checks(rep)
    r = _assert_le(c["recovery"], 1e-8, 50)
    s = _assert_le(c["single_leaf"], 1e-8)
    assert c["multi_leaf_instances"]["passed"]
    return f"max err {max(r, s):.1e}"


def _dims(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["dims", *argv])
    assert code == 0
    return int(buf.getvalue().strip())


@record(9)
def test_criterion_09_dims():
    assert _dims("--genus", "2", "--n", "3", "--theta", "all", "--maximal") == 13
    cases = [("3", "all", 2), ("4", "1,3", 2), ("5", "2,3", 2), ("2", "all", 1)]
    for n, theta, size in cases:
        for m in (1, 2, 3):
            assert _dims("--n", n, "--theta", theta, "--multicurve", str(m)) == size * m
    return "13 and |theta| m"


@record(10)
def test_criterion_10_slithering():
    rep, _ = _timed("slithering")
    c = _checks(rep)
    worst = max(_assert_le(c[k], 1e-9) for k in ("identity", "inverse", "composition", "sends_flag_pair"))
    assert c["decay_monotone"]["passed"]
    assert c["decay_slope"]["value"] < 0
    assert c["decay_r2"]["value"] >= 0.9
    assert c["prefix_length"]["value"] >= 20
    return f"max err {worst:.1e}, slope {c['decay_slope']['value']:.3f}, R^2 {c['decay_r2']['value']:.4f}"


@record(11)
def test_criterion_11_divergence():
    rep = run_suite("divergence", seed=SEED)
    c = _checks(rep)
    for base in ("fuchsian", "hitchin3"):
        minima = c[f"{base}:strictly_increasing"]["value"]
        assert len(minima) == 6
        assert all(b > a for a, b in zip(minima, minima[1:])), minima
    return "both bases increasing"


def summary_lines():
    lines = []
    for k in sorted(TITLES):
        if k not in RESULTS:
            continue
        ok, detail = RESULTS[k]
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {TITLES[k]} [{detail}]")
    return lines


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except BaseException:
            pass
    for line in summary_lines():
        print(line)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
