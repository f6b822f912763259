"""Acceptance checks, one reported line per criterion.

Each check returns (ok, detail). Under pytest every sub-check is its own
test and the verdicts are printed in the terminal summary; running this
file directly prints the same lines.

    python3 tests/test_acceptance.py
    pytest tests/test_acceptance.py -v
"""

import time

import numpy as np
import pytest

from deltacomb import Potential, RandomModel, random_potential
from deltacomb import bounds, determinant, jost, random_spectra as rs, trace_entropy as te
from deltacomb.lattice import is_nonresonant

RESULTS = {}     # criterion -> list of (part, ok, detail)
INFO = []        # informational lines, no verdict
LAM = (np.pi / 3) ** 2   # gamma = 1, p = 0.456 for kappa = 2, a = 0


def record(crit, part, ok, detail):
    RESULTS.setdefault(crit, []).append((part, bool(ok), detail))
    return bool(ok), f"criterion {crit} {part}: {detail}"


def ensemble(seed, n, max_support=20, scale=2.0, sign=None):
    rng = np.random.default_rng(seed)
    return [random_potential(rng, int(rng.integers(1, max_support + 1)), scale, sign)
            for _ in range(n)]


def regular_real_k(rng, n, lo=0.05, hi=3.1):
    k = rng.uniform(lo, hi, 4 * n)
    return k[np.abs(k - np.pi) > 1e-3][:n]


# -- 1 ------------------------------------------------------------------------

def check_1():
    pots = ensemble(101, 100)
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    worst = 0.0
    for V in pots:
        k = regular_real_k(rng, 20) + 1j * rng.uniform(0.01, 2.0, 20)
        a = jost.jost_coefficients(V, k)[0]
        L = determinant.perturbation_det(V, k)
        worst = max(worst, float(np.max(np.abs(a - L) / np.abs(L))))
    dt = time.perf_counter() - t0
    return record(1, 'a = L', worst < 1e-9 and dt < 10,
                  f"max |a-L|/|L| = {worst:.2e} (< 1e-9), runtime {dt:.2f} s (< 10 s)")


# -- 2 ------------------------------------------------------------------------

def check_2():
    pots = ensemble(101, 100)
    rng = np.random.default_rng(202)
    unit = wr = unit_rel = wr_rel = a_max = 0.0
    for V in pots:
        k = regular_real_k(rng, 20)
        a, b, _, _ = jost.jost_coefficients(V, k)
        res = np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - 1)
        unit = max(unit, float(res.max()))
        unit_rel = max(unit_rel, float(np.max(res / np.abs(a) ** 2)))
        a_max = max(a_max, float(np.abs(a).max()))
        for kk in k[:5]:
            sol = jost.jost_solve(V, kk)
            w = np.array([jost.wronskian(sol, n) for n in range(sol.n_min + 1, sol.n_sup + 1)])
            scale = np.max(np.abs(sol.u)) ** 2
            wr = max(wr, float(np.max(np.abs(w - w[0]))))
            wr_rel = max(wr_rel, float(np.max(np.abs(w - w[0])) / scale))
    INFO.append(f"2: max |a| = {a_max:.3e}; unitarity residual / |a|^2 <= {unit_rel:.1e}; "
                f"Wronskian drift / max|u|^2 <= {wr_rel:.1e} (double-precision floor)")
    return record(2, 'unitarity/Wronskian', unit < 1e-9 and wr < 1e-10,
                  f"max ||a|^2-|b|^2-1| = {unit:.2e} (< 1e-9), "
                  f"max Wronskian drift = {wr:.2e} (< 1e-10)")


# -- 3 ------------------------------------------------------------------------

def check_3():
    pots = ensemble(101, 100)
    k = np.linspace(0.05, 3.1, 1000)
    k = k[is_nonresonant(k)]
    ident = 0.0
    slack = np.inf
    for V in pots:
        _, _, u0, _ = jost.jost_coefficients(V, k)
        M = jost.m_function(V, k)
        ident = max(ident, float(np.max(np.abs(np.abs(u0) ** 2 * M.imag - k) / k)))
        L = determinant.perturbation_det(V, k)
        slack = min(slack, float(np.min(4 * np.abs(L) ** 2 - k / M.imag)))
    return record(3, 'm-function', ident < 1e-9 and slack >= 0,
                  f"max rel |u0|^2 ImM - k = {ident:.2e} (< 1e-9), "
                  f"min slack of 4|L|^2 >= k/ImM = {slack:.3e} (>= 0), "
                  f"100 potentials x {len(k)} nodes")


# -- 4 ------------------------------------------------------------------------

def check_4():
    err = max(abs(determinant.line_bound_states(Potential([v]))[0] + v * v / 4)
              for v in (-0.5, -1.0, -1.9))
    E = bounds.halfline_eigenvalues(Potential([-np.e / np.sinh(1.0)]))
    herr = abs(np.sqrt(-E[0]) - 1.0) if len(E) == 1 else np.inf
    return record(4, 'single delta', err < 1e-10 and herr < 1e-8,
                  f"line |E + v^2/4| = {err:.2e} (< 1e-10), "
                  f"half-line |eps - 1| = {herr:.2e} (< 1e-8)")


# -- 5 ------------------------------------------------------------------------

def check_5():
    pots = ensemble(501, 100, scale=1.9, sign=-1)
    sqrt_margin = min(bounds.lieb_thirring_sqrt(V).margin for V in pots)
    single = max(abs(bounds.lieb_thirring_sqrt(Potential([v])).margin)
                 for v in (-0.1, -0.7, -1.5, -1.99))
    p_margin = min(bounds.lieb_thirring_p(V, p).margin for V in pots for p in (1.0, 1.5))
    c1 = abs(bounds.cp_constant(1.0) - 16 * np.sqrt(2) / (3 * np.pi))
    c32 = abs(bounds.cp_constant(1.5) - 3 * np.sqrt(2))
    ok = sqrt_margin >= -1e-12 and single < 1e-8 and p_margin >= 0 and max(c1, c32) < 1e-8
    return record(5, 'Lieb-Thirring', ok,
                  f"min margin p=1/2 = {sqrt_margin:.3e}, single-site |gap| = {single:.1e} "
                  f"(< 1e-8), min margin p in {{1, 3/2}} = {p_margin:.3e}, "
                  f"|C_1 err| = {c1:.1e}, |C_3/2 err| = {c32:.1e} (< 1e-8)")


# -- 6 ------------------------------------------------------------------------

def check_6():
    pots = ensemble(601, 50, scale=2.0, sign=-1)
    worst = 0.0
    count_ok = True
    for V in pots:
        bs = bounds.bs_crossings(V)
        ld = np.sort(np.sqrt(-determinant.line_bound_states(V)))
        if len(bs) != len(ld):
            count_ok = False
            continue
        if len(bs):
            worst = max(worst, float(np.max(np.abs(bs - ld))))
    n_mono = 0
    mono_ok = True
    for V in pots[:20]:
        for eps in (0.05, 0.3, 1.0, 3.0):
            for tau in (0.01, 0.5, 2.0):
                for n in (1, 2, 5, 20):
                    n_mono += 1
                    mono_ok &= bounds.monotonicity_check(V, eps, tau, n).holds
    ok = count_ok and worst < 1e-8 and mono_ok
    return record(6, 'Birman-Schwinger', ok,
                  f"max |eps_BS - eps_L| = {worst:.2e} (< 1e-8), counts agree: {count_ok}, "
                  f"monotonicity holds on {n_mono} (eps, tau, n): {mono_ok}")


# -- 7 ------------------------------------------------------------------------

def check_7():
    pots = ensemble(701, 1000)
    rng = np.random.default_rng(702)
    k = regular_real_k(rng, 1000, 0.1, 3.0)
    sym = fourier = 0.0
    for V, kk in zip(pots, k):
        sym = max(sym, determinant.symmetrized_identity(V, kk).residual)
        fourier = max(fourier, float(te.node_identities(V, kk)[2][0]))
    return record(7, 'cancellation identity', sym < 1e-9 and fourier < 1e-9,
                  f"max symmetrized residual = {sym:.2e}, "
                  f"max Fourier real-part residual = {fourier:.2e} (< 1e-9), 1000 pairs")


# -- 8 ------------------------------------------------------------------------

W8 = te.WeightPoly(1.0, 2.0)


def check_8a():
    z = te.z_functional(Potential(), W8)
    exact = -np.log(4) * (W8.beta - W8.alpha) ** 11 / 2772
    return record(8, 'Z(0) closed form', abs(z - exact) < 1e-9,
                  f"|Z(0) - closed form| = {abs(z - exact):.1e} (< 1e-9)")


def check_8b():
    fails = []
    for i, V in enumerate(ensemble(801, 20, scale=1.0)):
        end = V.support_end
        cuts = [c for c in (5, 10, 15) if c < end] + [end]
        rows, zV, ok = te.semicontinuity_probe(V, W8, cuts)
        if not ok:
            fails.append((i, zV - min(z for _, z in rows)))
    worst = max((d for _, d in fails), default=0.0)
    return record(8, 'semicontinuity', not fails,
                  f"Z(V) <= min_n Z(V_n) + 1e-6 fails on {len(fails)}/20, "
                  f"worst excess {worst:.2e}")


def check_8c():
    pots = ensemble(802, 50, scale=1.0)
    cs = [te.empirical_constant([te.trace_inequality_report(V, W8) for V in part])
          for part in (pots[:25], pots[25:])]
    finite = all(np.isfinite(cs))
    rel = abs(cs[0] - cs[1]) / abs(cs[0]) if finite else np.inf
    return record(8, 'empirical C', finite and rel <= 0.2,
                  f"C = {cs[0]:.4e}, {cs[1]:.4e}; finite {finite}, "
                  f"relative spread {rel:.1%} (<= 20%)")


# -- 9 ------------------------------------------------------------------------

def check_9i():
    worst = 0.0
    for lam, a in ((LAM, 0.0), (30.0, 1.0), (2.0, -0.5)):
        m = RandomModel(2.0, 0.5, a, seed=901)
        for r in range(5):
            tr = rs.prufer_flow(m, lam, 5000, r)
            lr, th = rs.prufer_from_solution(rs.solve_recurrence(m, lam, 5000, r), lam, a)
            worst = max(worst, float(np.max(np.abs(lr - tr.logR2))),
                        float(np.max(np.abs(np.angle(np.exp(1j * (th - tr.theta)))))))
    return record(9, '(i) Pruefer oracle', worst < 1e-10,
                  f"max step-wise deviation = {worst:.2e} (< 1e-10), 15 realizations")


def check_9ii():
    model = RandomModel(2.0, 0.5, 0.0, seed=902)
    p = rs.decay_exponent(LAM, 0.0, 2.0)
    n = 100_000
    logR2 = rs.prufer_ensemble(model, LAM, n, range(200), [n])
    ratio = float(logR2.mean() / np.log(n))
    rel = abs(ratio - 2 * p) / (2 * p)
    INFO.append(f"9(ii): mean log R^2 / log n = {ratio:.4f}; 2p = {2 * p:.4f}; "
                f"2p Var(omega) = 2p/3 = {2 * p / 3:.4f} for uniform omega on [-1, 1]")
    return record(9, '(ii) alpha=1/2 growth', rel <= 0.15,
                  f"mean log R^2/log n = {ratio:.4f} vs 2p = {2 * p:.4f}, p = {p:.4f}, "
                  f"deviation {rel:.1%} (<= 15%)")


def check_9iii():
    model = RandomModel(2.0, 0.75, 0.0, seed=903)
    pr = rs.r4_moment_probe(model, LAM, 20_000, 400)
    finite = bool(np.all(np.isfinite(pr.bound)))
    return record(9, '(iii) R^4 bound', finite and pr.max_ratio <= 1 + 1e-12,
                  f"bound at n = 2e4: {pr.bound[-1]:.3e} (finite {finite}), "
                  f"max E[R^4]/bound = {pr.max_ratio:.3f} (<= 1)")


def check_9iv():
    alpha = 0.3
    model = RandomModel(2.0, alpha, 0.0, seed=904)
    p = rs.decay_exponent(LAM, 0.0, 2.0)
    L = np.geomspace(100, 20_000, 8)
    logs = []
    for r in range(40):
        W, E = rs.discrete_equation(model, LAM, int(L[-1]) + 2, r)
        logs.append([np.log(rs.subordination_ratio(W, E, x)) for x in L])
    tau = rs.fit_stretched_exponent(L, np.mean(logs, axis=0), alpha)
    target = (1 - 2 * alpha) * p
    rel = abs(tau - target) / target
    INFO.append(f"9(iv): fitted tau = {tau:.4f}; (1-2a)p = {target:.4f}; "
                f"p Var(omega)/(1-2a) = {p / 3 / (1 - 2 * alpha):.4f}")
    return record(9, '(iv) alpha=0.3 decay', rel <= 0.2,
                  f"fitted tau = {tau:.4f} vs (1-2a)p = {target:.4f}, deviation {rel:.1%} (<= 20%)")


# -- 10 -----------------------------------------------------------------------

def check_10():
    lam_max = 400.0
    b0 = rs.band_edges(0.0, lam_max)
    flat = len(b0) == 1 and abs(b0[0][0]) < 1e-9 and abs(b0[0][1] - lam_max) < 1e-9
    gaps = rs.gaps_from_bands(rs.band_edges(1.0, lam_max))
    adj = [min(abs(g[0] - (np.pi * n) ** 2) for g in gaps) for n in range(1, 6)]
    K = rs.k_region(1.0, 0.5, 2.5, lam_max)
    disjoint = all(hi <= g0 + 1e-9 or lo >= g1 - 1e-9 for lo, hi in K for g0, g1 in gaps)
    ok = flat and max(adj) < 1e-8 and disjoint and len(K) > 0
    return record(10, 'band geometry', ok,
                  f"a=0 single band [0, {lam_max:g}]: {flat}; a=1 gap edge vs (pi n)^2, "
                  f"n<=5: max offset {max(adj):.1e}; K disjoint from {len(gaps)} gaps: "
                  f"{disjoint} ({len(K)} intervals)")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7,
          check_8a, check_8b, check_8c, check_9i, check_9ii, check_9iii, check_9iv,
          check_10]


def summary_lines():
    out = []
    for crit in sorted(RESULTS):
        parts = RESULTS[crit]
        verdict = 'PASS' if all(ok for _, ok, _ in parts) else 'FAIL'
        detail = '; '.join(f"{name}: {'ok' if ok else 'FAIL'} [{d}]" for name, ok, d in parts)
        out.append(f"{verdict} criterion {crit}: {detail}")
    out += [f"INFO {line}" for line in INFO]
    return out


@pytest.mark.parametrize('check', CHECKS, ids=[c.__name__ for c in CHECKS])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


if __name__ == '__main__':
    for c in CHECKS:
        t0 = time.perf_counter()
        c()
        print(f"  {c.__name__} done in {time.perf_counter() - t0:.1f} s", flush=True)
    print('\n'.join(summary_lines()))
