"""Acceptance criteria C1 to C7.

Each test prints one PASS/FAIL line (also collected into the terminal summary)
and then asserts the criterion at its stated tolerance.
"""

import io

import mpmath as mp
import numpy as np

from sgbeam.assembly import assemble, condense
from sgbeam.cli import parse_config, run
from sgbeam.diffmat import SCHEMES, build_weights
from sgbeam.grid import make_grid
from sgbeam.linalg import to_float
from sgbeam.model import BeamCase, LengthScales, Vibration, nondimensionalize

from conftest import (PROPS, dq_buckling, dq_modes, dq_static, oracle_buckling,
                      oracle_frequencies, oracle_static)
from test_diffmat import mp_poly_state

CLASSICAL = (1e-3, 5e-4)


def rel(a, b):
    return abs(a - b) / abs(b)


def within_unit(value, ref, unit=1e-4):
    """Value rounded to the printed decimals lies within one unit of the printed reference."""
    return abs(round(value, 4) - ref) <= unit + 1e-12


def nd(quantity, value):
    out = np.asarray(nondimensionalize(quantity, value, PROPS), dtype=float)
    return float(out) if out.ndim == 0 else out


def static_summary(sol_or_exact, point):
    """(w_bar at point, |w''L| x1e3 at point, |D_m(0)| x1e3, |T_m(0)| x1e3)."""
    if hasattr(sol_or_exact, "derivs"):
        i = {0.5: len(sol_or_exact.x) // 2, 1.0: -1}[point]
        w, w2 = sol_or_exact.derivs[0][i], sol_or_exact.derivs[2][i]
        dm, tm = sol_or_exact.forces[("Mbar", "left")], sol_or_exact.forces[("Mbbar", "left")]
    else:
        w, w2 = sol_or_exact.deriv(point, 0)[0], sol_or_exact.deriv(point, 2)[0]
        dm, tm = sol_or_exact.force("Mbar", 0.0), sol_or_exact.force("Mbbar", 0.0)
    return (nd("deflection", w), abs(nd("curvature", w2)) * 1e3,
            abs(nd("double_moment", dm)) * 1e3, abs(nd("triple_moment", tm)) * 1e3)


# ----------------------------------------------------------------- C1

C1_REFERENCE = {(0.1, 0.05): (1.1743, 0.4598, 5.0252, 0.1218),
                (0.15, 0.1): (0.9936, 0.4040, 11.6045, 0.7052)}


def test_c1_static_simply_supported(report):
    fails, worst = [], 0.0
    for g, ref in C1_REFERENCE.items():
        dq = static_summary(dq_static("ss", g), 0.5)
        ex = static_summary(oracle_static("ss", g), 0.5)
        for name, d, e, r in zip(("w", "w''L", "D_m", "T_m"), dq, ex, ref):
            worst = max(worst, rel(d, e))
            if rel(d, e) > 1e-3 or not within_unit(d, r):
                fails.append(f"{name}{g}: dq={d:.6f} oracle={e:.6f} ref={r}")
    report("C1 static simply supported, N=21", not fails,
           f"max rel vs oracle {worst:.1e}; " + ("; ".join(fails) or "all within 1 unit of the 4th decimal"))
    assert not fails


# ----------------------------------------------------------------- C2

C2_REFERENCE = {("clamped", (0.1, 0.05)): 0.0810, ("clamped", (0.15, 0.1)): 0.0313,
                ("cantilever", (0.1, 0.05)): 7.6106, ("cantilever", (0.15, 0.1)): 5.3437}


def test_c2_static_clamped_cantilever(report):
    fails, parts = [], []
    for (kind, g), ref in C2_REFERENCE.items():
        point = 1.0 if kind == "cantilever" else 0.5
        dq = static_summary(dq_static(kind, g), point)[0]
        ex = static_summary(oracle_static(kind, g), point)[0]
        err = rel(dq, ref)
        parts.append(f"{kind}{g} dq={dq:.5f} oracle={ex:.5f} ref={ref} rel={err:.1e}")
        if err > 1e-3:
            fails.append(parts[-1])
    report("C2 static clamped/cantilever, N=21, 1e-3 rel", not fails, "; ".join(fails or parts))
    assert not fails, fails


# ----------------------------------------------------------------- C3

C3_X = (0.0, 0.0125, 0.0495, 0.1091, 0.1882, 0.2830, 0.3887, 0.5,
        0.6113, 0.7169, 0.8117, 0.8909, 0.9505, 0.9875, 1.0)
C3_EXACT = {
    "w": (0.0, 0.0377, 0.1487, 0.3249, 0.5447, 0.7657, 0.9317, 0.9936,
          0.9317, 0.7657, 0.5447, 0.3249, 0.1487, 0.0377, 0.0),
    "w''": (0.0, -0.0021, -0.0266, -0.0961, -0.1997, -0.3036, -0.3775, -0.4040,
            -0.3777, -0.3036, -0.1997, -0.0961, -0.0266, -0.0021, 0.0),
    "w'''": (0.0, -0.3191, -0.9375, -1.3050, -1.2506, -0.9196, -0.4758, 0.0,
             0.4758, 0.9196, 1.2506, 1.3049, 0.9375, 0.3191, 0.0),
}
C3_DQ_COLUMNS = {
    "w": C3_EXACT["w"],
    "w''": (0.0, -0.0021, -0.0266, -0.0961, -0.1997, -0.3036, -0.3775, -0.4040,
            -0.3776, -0.3036, -0.1997, -0.0961, -0.0266, -0.0021, 0.0),
    "w'''": (0.0, -0.3187, -0.9373, -1.3049, -1.2507, -0.9197, -0.4758, 0.0,
             0.4758, 0.9197, 1.2507, 1.3049, 0.9373, 0.3187, 0.0),
}


def c3_profile():
    sol = dq_static("ss", (0.15, 0.1), 15)
    assert np.allclose(sol.x, C3_X, atol=1e-4)
    return {"w": nd("deflection", sol.derivs[0]),
            "w''": nd("curvature", sol.derivs[2]) * 1e3,
            "w'''": nd("triple_derivative", sol.derivs[3]) * 1e3}


def profile_misses(profile, reference):
    return [f"{k}@x={x}: {v:.5f} vs {r}" for k in reference
            for x, v, r in zip(C3_X, profile[k], reference[k]) if not within_unit(v, r)]


def test_c3_profile(report):
    profile = c3_profile()
    misses = profile_misses(profile, C3_EXACT)
    report("C3 profile, simply supported N=15, 15 stations vs exact columns", not misses,
           "; ".join(misses) or "w, w'', w''' all within 1 unit of the 4th decimal")
    # informational: the reference discrete columns carry their own discretization error
    info = profile_misses(profile, C3_DQ_COLUMNS)
    print(f"INFO  C3 vs reference discrete columns: {len(info)} station(s) off by more than 1 unit: "
          + "; ".join(info))
    assert not misses


# ----------------------------------------------------------------- C4

C4_REFERENCE = {
    ("ss", (0.1, 0.05)): (10.4058, 47.6156, 127.2946, 271.1597, 505.4257, 860.6195),
    ("ss", (0.15, 0.1)): (11.3340, 61.5401, 193.8714, 473.8175, 989.3680, 1851.5906),
    ("clamped", (0.1, 0.05)): (40.4857, 124.6561, 278.9482, 530.1349, 910.2262, 1455.7444),
    ("clamped", (0.15, 0.1)): (65.4235, 221.4764, 544.9086, 1129.4247, 2091.9224, 3573.1262),
    ("cantilever", (0.1, 0.05)): (4.5320, 30.0400, 93.4723, 209.9177, 401.8808, 696.6921),
    ("cantilever", (0.15, 0.1)): (5.4324, 38.0950, 129.9835, 326.7750, 699.1683, 1340.2756),
    ("free-free", (0.1, 0.05)): (23.4398, 72.0235, 161.3873, 309.2713, 538.4729, 876.6273),
    ("free-free", (0.15, 0.1)): (24.3230, 81.5930, 203.6489, 439.4334, 859.4885, 1555.9236),
}


def c4_tolerance(kind, mode):
    # the cantilever fundamental is the known outlier entry
    return 5e-3 if kind == "cantilever" and mode == 0 else 2e-3


def test_c4_frequencies(report):
    fails, worst = [], (0.0, "")
    for (kind, g), ref in C4_REFERENCE.items():
        dq = dq_modes(kind, g).frequencies
        ex = oracle_frequencies(kind, g)
        for j, r in enumerate(ref):
            for src, v in (("dq", dq[j]), ("oracle", ex[j])):
                err = rel(v, r)
                if err > worst[0]:
                    worst = (err, f"{src} {kind}{g} mode {j + 1}")
                if err > c4_tolerance(kind, j):
                    fails.append(f"{src} {kind}{g} mode {j + 1}: {v:.4f} vs {r} ({err:.1e})")
    report("C4 frequencies, 4 supports x 2 scale pairs x 6 modes, dq N=21 and oracle", not fails,
           "; ".join(fails) or f"worst rel {worst[0]:.1e} ({worst[1]})")
    assert not fails


# ----------------------------------------------------------------- C5

C5_REFERENCE = {("ss", (0.1, 0.05)): 10.9704, ("ss", (0.15, 0.1)): 13.0084,
                ("clamped", (0.1, 0.05)): 97.1445, ("clamped", (0.15, 0.1)): 229.9456,
                ("cantilever", (0.1, 0.05)): 3.2661, ("cantilever", (0.15, 0.1)): 4.0565,
                ("propped", (0.1, 0.05)): 32.2686, ("propped", (0.15, 0.1)): 53.9331}


def test_c5_buckling(report):
    fails, parts = [], []
    for (kind, g), ref in C5_REFERENCE.items():
        dq, ex = dq_buckling(kind, g), oracle_buckling(kind, g)
        parts.append(f"{kind}{g} dq={dq:.4f} oracle={ex:.4f}")
        for src, v in (("dq", dq), ("oracle", ex)):
            if rel(v, ref) > 1e-3:
                fails.append(f"{src} {kind}{g}: {v:.4f} vs {ref} ({rel(v, ref):.1e})")
    report("C5 buckling loads, dq N=21 and oracle, 1e-3 rel", not fails, "; ".join(fails or parts))
    assert not fails


# ----------------------------------------------------------------- C6

def test_c6_classical_limit(report):
    checks = [("ss deflection", static_summary(dq_static("ss", CLASSICAL), 0.5)[0], 1.30208)]
    for kind, ref in (("ss", 9.8696), ("clamped", 22.373), ("cantilever", 3.5160), ("free-free", 22.373)):
        checks.append((f"{kind} omega_1", dq_modes(kind, CLASSICAL, 21, 1).frequencies[0], ref))
    for kind, ref in (("ss", 9.8696), ("clamped", 39.478), ("cantilever", 2.4674), ("propped", 20.19)):
        checks.append((f"{kind} P", dq_buckling(kind, CLASSICAL), ref))
    fails = [f"{name}: {v:.4f} vs {r} ({rel(v, r):.1%})" for name, v, r in checks if rel(v, r) > 5e-3]
    passed = [name for name, v, r in checks if rel(v, r) <= 5e-3]
    report("C6 classical limit g=(1e-3, 5e-4) L, N=21, 0.5%", not fails,
           f"{len(passed)}/{len(checks)} within 0.5% ({', '.join(passed)}); " + "; ".join(fails))
    assert not fails


# ----------------------------------------------------------------- C7

def exactness_error(n, scheme):
    dps = BeamCase("ss", LengthScales(0.1, 0.05), n_points=n).precision
    coeffs = [int(c) for c in np.random.default_rng(7 * n).integers(-9, 10, size=n)]
    with mp.workdps(dps):
        g = make_grid(n, 1.0, dps)
        mw = build_weights(g, scheme)
        v, fields = mp_poly_state(coeffs, g.coords)
        worst = 0.0
        for m in range(1, 9):
            scale = max(1, max(abs(r) for r in fields[m]))
            worst = max(worst, float(max(abs(e) for e in mw.order(m) @ v - fields[m]) / scale))
    return worst


def test_c7_property_suites(report, tmp_path):
    results = {}
    results["exactness N=5,9,15,21 <= 1e-6"] = max(
        exactness_error(n, s) for n in (5, 9, 15, 21) for s in SCHEMES) <= 1e-6

    xs = np.linspace(0.0, 1.0, 50)
    results["oracle residual <= 1e-6 q"] = all(
        np.max(np.abs(oracle_static(k, g).operator_residual(xs))) <= 1e-6
        for k in ("ss", "clamped", "cantilever", "propped") for g in ((0.1, 0.05), (0.15, 0.1)))

    results["static residual <= 1e-9 |f|"] = all(
        dq_static(k, (0.1, 0.05)).residual <= 1e-9 for k in ("ss", "clamped", "cantilever", "propped"))

    sym = []
    for kind in ("ss", "clamped"):
        w = dq_static(kind, (0.15, 0.1)).derivs[0]
        sym.append(np.max(np.abs(w - w[::-1])) <= 1e-8 * np.max(np.abs(w)))
    for kind in ("ss", "clamped", "free-free"):
        c = BeamCase(kind, LengthScales(0.15, 0.1), load=Vibration(), n_points=15)
        system, _ = assemble(c)
        k = to_float(condense(system, c.precision).k_red)
        sym.append(np.max(np.abs(k[::-1, ::-1] - k)) <= 1e-8 * np.max(np.abs(k)))
    results["mirror symmetry"] = all(sym)

    argv = ["convergence", "--analysis", "buckle", "--bc", "ss", "--n-list", "9,13"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(parse_config(argv + ["--csv", str(a)]), out=io.StringIO())
    run(parse_config(argv + ["--csv", str(b)]), out=io.StringIO())
    results["csv determinism"] = a.read_bytes() == b.read_bytes()

    bad = [k for k, ok in results.items() if not ok]
    report("C7 property suites", not bad, "; ".join(f"{k}: {'ok' if ok else 'FAILED'}" for k, ok in results.items()))
    assert not bad
