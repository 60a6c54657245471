# core/selftest.py

"""Deterministic invariant checks; no Monte Carlo sampling."""
import math
import time
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from core.analysis import (
    bump,
    cauchy_reconstruct,
    contour_linstat_cov,
    predicted_linstat_cov,
    window_profile,
)
from core.ensemble import CumulantSums, EnsembleSpec, EntryDistribution, Family, cumulant_sums
from core.errors import CoincidentSpectralParameter
from core.spectral import (
    SpectralWindow,
    msc_stieltjes,
    quantile,
    semicircle_cdf,
    sine_kernel,
    window_average,
)
from core.theory import V_of_E, f_functions, g_functions, lp_polarized_covariance, m_boundary
from formal import exponents, format_monomial, nu_counters, parse_monomial, random_monomial
from utils.logger import logger

EXAMPLE_MONOMIAL = ("N^{α+1} E[u(G,3)] E[u(B*,4)] E[e(A,2,i1,i2) e(B,2,i3,i3) e(A,2,i2,i4)] "
                    "E[e(A,1,i6,i1) e(B,1,i5,i6) au(A,7)]")
SELFTEST_SEED = 7


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": self.seconds}


Check = Callable[[], Tuple[bool, str]]


# -- formal ---------------------------------------------------------------

def check_example_counters() -> Tuple[bool, str]:
    nu = nu_counters(parse_monomial(EXAMPLE_MONOMIAL))
    return nu == (5, 9, 2, 1, 2, 3), f"nu={nu}"


def check_example_exponents() -> Tuple[bool, str]:
    r = exponents(parse_monomial(EXAMPLE_MONOMIAL), 0.5, 0.5)
    got = (r.b0, r.b1, r.b, r.bstar)
    return got == (6.25, 3.75, -3.5, 2.25), f"b0,b1,b,b*={got}"


def check_remark_monomial() -> Tuple[bool, str]:
    P = parse_monomial("N^0 E[au(G,1) au(F*,1)]")
    worst = 0.0
    for alpha, beta_exp in [(0.5, 0.5), (0.7, 0.2), (0.3, 0.1), (0.9, 0.9)]:
        r = exponents(P, alpha, beta_exp)
        worst = max(worst, abs(r.bstar - (2 * beta_exp - 2)), abs(r.b0 - (2 * alpha - 2)))
    return worst < 1e-15, f"max deviation {worst:.1e}"


def check_formal_corpus() -> Tuple[bool, str]:
    rng = np.random.default_rng(SELFTEST_SEED)
    bad = 0
    for _ in range(1000):
        P = random_monomial(rng)
        if parse_monomial(format_monomial(P)) != P:
            bad += 1
            continue
        beta_exp, alpha = sorted(rng.uniform(0.0, 0.999, size=2))
        r = exponents(P, alpha, beta_exp)
        if r.b0 < r.b - 1e-12 or r.b0 < r.bstar - 1e-12:
            bad += 1
    return bad == 0, f"{bad} of 1000 monomials failed round-trip or ordering"


# -- spectral -------------------------------------------------------------

def check_m_equation() -> Tuple[bool, str]:
    rng = np.random.default_rng(SELFTEST_SEED)
    x = rng.uniform(-5.0, 5.0, 1000)
    y = 10.0 ** rng.uniform(-3.0, 1.0, 1000) * rng.choice([-1.0, 1.0], 1000)
    z = x + 1j * y
    m = msc_stieltjes(z)
    residual = float(np.max(np.abs(m * m + z * m + 1.0)))
    upper = y > 0
    ok = residual < 1e-12 and np.all(np.abs(m[upper]) < 1.0) and np.all(m[upper].imag > 0)
    return bool(ok), f"max residual {residual:.1e}"


def check_quantiles() -> Tuple[bool, str]:
    worst = max(abs(semicircle_cdf(quantile(k, 97)) - k / 97) for k in range(1, 97))
    g1 = quantile(1, 4)
    return worst < 1e-10 and abs(g1 + 0.80795) < 1e-4, f"cdf error {worst:.1e}, gamma_1(N=4)={g1:.5f}"


def check_sine_kernel_average() -> Tuple[bool, str]:
    details, ok = [], True
    for U in (20.0, 50.0, 100.0):
        avg = window_average(lambda u: sine_kernel(u)["Y1"], U, 5.0)
        asym = window_average(lambda u: sine_kernel(u)["Y1_avg_asym"], U, 5.0)
        ok = ok and abs(avg - asym) <= 10.0 * U ** -6
        details.append(f"U={U:g}: {abs(avg - asym):.1e}")
    k0 = sine_kernel(0.0)
    ok = ok and k0["Y1"] == -1.0 and k0["Y2"] == -1.0
    return ok, ", ".join(details)


# -- theory ---------------------------------------------------------------

def check_boundary_identities() -> Tuple[bool, str]:
    rng = np.random.default_rng(SELFTEST_SEED)
    eps = 1e-7
    worst = 0.0
    for x1, x2 in rng.uniform(-1.8, 1.8, size=(50, 2)):
        if abs(x1 - x2) < 1e-3:
            continue
        pm = f_functions(complex(x1, eps), complex(x2, -eps), "conjugate")
        pp = f_functions(complex(x1, eps), complex(x2, eps), "nonconjugate")
        g = g_functions(x1, x2)
        k1, k2 = math.sqrt(4 - x1 * x1), math.sqrt(4 - x2 * x2)
        m1, m2 = m_boundary(x1), m_boundary(x2)
        pairs = [
            (g["g1"], 2 * pm["f2"].real - 2 * pp["f5"].real),
            (g["g2"], 2 * pm["f3"].real - 2 * pp["f6"].real),
            (g["g3"], 2 * pm["f4"].real - 2 * pp["f7"].real),
            (g["g4"], 2 * (m1 * m2.conjugate()).real / (k1 * k2) - 2 * (-m1 * m2).real / (k1 * k2)),
        ]
        for exact, assembled in pairs:
            worst = max(worst, abs(exact - assembled) / max(1.0, abs(exact)))
        worst = max(worst, abs(pm["f1"].real) / max(1.0, abs(pm["f1"])))
    return worst < 1e-5, f"max relative deviation {worst:.1e}"


def check_symmetries() -> Tuple[bool, str]:
    rng = np.random.default_rng(SELFTEST_SEED)
    worst = 0.0
    for x1, x2 in rng.uniform(-1.9, 1.9, size=(20, 2)):
        a, b = g_functions(x1, x2), g_functions(x2, x1)
        worst = max(worst, *(abs(a[k] - b[k]) for k in a))
        z1, z2 = complex(x1, 0.3), complex(x2, 0.1)
        worst = max(worst, abs(f_functions(z1, z2)["f5"] - f_functions(z2, z1)["f5"]))
    for E in (0.3, 0.9, 1.5):
        worst = max(worst, abs(V_of_E(E) + V_of_E(-E)))
    g = g_functions(0.0, 0.0)
    exact = abs(g["g1"] + 0.5) < 1e-15 and abs(g["g2"] - 2.0) < 1e-15 and abs(V_of_E(0.0)) < 1e-15
    try:
        f_functions(0.5 + 0.1j, 0.5 + 0.1j)
        pole = False
    except CoincidentSpectralParameter:
        pole = True
    return worst < 1e-12 and exact and pole, f"max asymmetry {worst:.1e}"


def check_cumulants() -> Tuple[bool, str]:
    two = EntryDistribution(Family.TWO_POINT, p=0.2)
    m3, m4 = two.standard_moments()
    ok = abs(m3 - 1.5) < 1e-12 and abs(m4 - 3.25) < 1e-12
    spec = EnsembleSpec(1, 200, EntryDistribution(Family.RADEMACHER), EntryDistribution(Family.RADEMACHER))
    s = cumulant_sums(spec)
    ok = ok and abs(s.sum_c4 - (-2.0 * 199 / 200 - 8.0 / 200)) < 1e-12
    gue = cumulant_sums(EnsembleSpec(2, 50))
    ok = ok and gue.sum_c22 == 0.0 and gue.sum_c3_diag == 0.0
    return ok, f"two_point(p=0.2) m3={m3:.4f} m4={m4:.4f}; rademacher sum_C4={s.sum_c4:.5f}"


# -- analysis -------------------------------------------------------------

def check_bump() -> Tuple[bool, str]:
    f = bump(1.0)
    c = float(f(0.0)) * math.e
    edge = max(abs(float(f.derivative(x, n))) for x in (1 - 1e-6, -(1 - 1e-6)) for n in range(4))
    return abs(c - 2.25229) < 1e-4 and edge < 1e-30, f"c={c:.6f}, edge derivatives {edge:.1e}"


def check_reconstruction() -> Tuple[bool, str]:
    f = bump(1.0)
    rng = np.random.default_rng(SELFTEST_SEED)
    worst = abs(cauchy_reconstruct(f, 0.3, 0.5, 3) - float(f(0.3)))
    for _ in range(5):
        lam = float(rng.uniform(-0.9, 0.9))
        a = float(rng.uniform(0.1, 1.0))
        k = int(rng.integers(2, 5))
        worst = max(worst, abs(cauchy_reconstruct(f, lam, a, k) - float(f(lam))))
    return worst < 1e-6, f"max error {worst:.1e}"


def check_cross_representation() -> Tuple[bool, str]:
    window = SpectralWindow(0.0, 0.1, 0.02, 1.0)
    f = bump(1.0)
    sums = CumulantSums.gaussian(1, 400)
    direct = predicted_linstat_cov(window, f, f, sums, 1, 400)
    contour = contour_linstat_cov(window, f, f, sums, 1, 400)
    rel = abs(direct - contour) / abs(direct)
    return rel < 1e-3, f"kernel {direct:.6e} vs contour {contour:.6e} (rel {rel:.1e})"


def check_macroscopic_polarization() -> Tuple[bool, str]:
    N = 10_000
    window = SpectralWindow(0.0, 0.3, 0.2, 1.0)
    f = bump(1.0)
    sums = CumulantSums.gaussian(1, N)
    meso = N ** 2 * predicted_linstat_cov(window, f, f, sums, 1, N)
    macro = lp_polarized_covariance(window_profile(f, window, 1), window_profile(f, window, -1), sums, 1, tol=1e-6)
    rel = abs(meso - macro) / abs(macro)
    return rel < 0.05, f"mesoscopic {meso:.5e} vs macroscopic {macro:.5e} (rel {rel:.1e})"


CHECKS: List[Tuple[str, Check]] = [
    ("formal example counters", check_example_counters),
    ("formal example exponents", check_example_exponents),
    ("formal remark monomial", check_remark_monomial),
    ("formal corpus round-trip and ordering", check_formal_corpus),
    ("m-equation residual", check_m_equation),
    ("quantile inverse", check_quantiles),
    ("averaged sine kernel", check_sine_kernel_average),
    ("boundary-limit identities", check_boundary_identities),
    ("exchange symmetries", check_symmetries),
    ("closed-form cumulants", check_cumulants),
    ("bump normalization", check_bump),
    ("almost-analytic reconstruction", check_reconstruction),
    ("cross-representation", check_cross_representation),
    ("macroscopic polarization", check_macroscopic_polarization),
]


def run_selftest(show: bool = True) -> List[CheckResult]:
    results = []
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            passed, detail = check()
        except Exception as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    if show:
        logger.check_table(results)
    return results
