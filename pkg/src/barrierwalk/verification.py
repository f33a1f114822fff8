"""
Self-check suite run by ``barrierwalk verify``.

Every check is a function returning a :class:`CheckResult`.  A check that
raises is recorded as failed with the exception text, so a broken build
still produces a complete report.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import analysis as an
from . import continuous as cw
from . import discrete as dw
from .numerics import is_unitary, unitary_fractional_power_apply

SPECTRUM_SIZES = tuple(2 ** k for k in range(2, 15))
SPECTRUM_PHIS = (0.0, 0.01, 0.1, 0.5, 1.0)
TABLE_SIZES = (1024, 4096, 16384)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"[{status}] {self.name}: {self.detail}"


@dataclass(frozen=True)
class VerifyConfig:
    oracle_cap: int = dw.DEFAULT_ORACLE_CAP
    tol_p: float = 0.02
    tol_t: float = 0.05


def check_unitarity(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in SPECTRUM_SIZES:
        for phi in SPECTRUM_PHIS:
            p = dw.DiscreteParams(n, phi)
            for m in (dw.reduced_operator(p), dw.faulty_shift_reduced(p), dw.coin_reduced(p)):
                if not is_unitary(m, 1e-10):
                    return CheckResult("unitarity", False, f"non-unitary factor at N={n}, phi={phi}")
    p = dw.DiscreteParams(1024, 0.1)
    u = dw.reduced_operator(p)
    psi = dw.initial_reduced(p).as_array()
    for _ in range(10_000):
        psi = u @ psi
        worst = max(worst, abs(np.linalg.norm(psi) - 1.0))
    if worst >= 1e-9:
        return CheckResult("unitarity", False, f"reduced norm drift {worst:.3e} over 1e4 steps")
    return CheckResult("unitarity", True, f"all factors unitary; 1e4-step drift {worst:.2e}")


def check_eigen_residuals(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in SPECTRUM_SIZES:
        for phi in SPECTRUM_PHIS:
            p = dw.DiscreteParams(n, phi)
            s = dw.spectrum(p)
            u = dw.reduced_operator(p)
            for vec, val in zip((s.psi_phi, s.psi_plus, s.psi_minus), s.values):
                worst = max(worst, float(np.linalg.norm(u @ vec - val * vec)))
    return CheckResult("eigen-residuals", worst < 1e-10, f"max residual {worst:.2e}")


def check_evolution_identity(cfg: VerifyConfig) -> CheckResult:
    worst = 0.0
    for n in SPECTRUM_SIZES:
        for phi in SPECTRUM_PHIS:
            s = dw.spectrum(dw.DiscreteParams(n, phi))
            total, diff = dw.sum_diff_vectors(s)
            out = unitary_fractional_power_apply(s.pairs, math.pi / (2 * s.sigma), total)
            worst = max(worst, float(np.max(np.abs(out - 1j * diff))))
    return CheckResult("evolution-identity", worst < 1e-10, f"max deviation {worst:.2e}")


def check_discrete_oracle(cfg: VerifyConfig) -> CheckResult:
    sizes = [n for n in (8, 16, 32) if n <= cfg.oracle_cap]
    if not sizes:
        return CheckResult("discrete-oracle", True, "no size under the oracle cap", skipped=True)
    worst = 0.0
    for n in sizes:
        for phi in (0.0, 0.1, 0.3, 1.0):
            p = dw.DiscreteParams(n, phi)
            full = dw.simulate_full(p, 200, cap=cfg.oracle_cap)
            red = dw.simulate_reduced(p, 200)
            worst = max(worst, float(np.max(np.abs(full.p - red.p))))
    return CheckResult("discrete-oracle", worst <= 1e-10, f"N={sizes}: max deviation {worst:.2e}")


def _table_check(name: str, family: an.ScalingFamily, cfg: VerifyConfig) -> CheckResult:
    rows = an.sweep_discrete(family, TABLE_SIZES)
    report = an.verify_table1(rows, cfg.tol_p, cfg.tol_t)
    detail = (
        f"peaks {[(r.peak_x, round(r.peak_p, 4)) for r in rows]}; "
        f"worst |dp|={report.worst_dev_p:.3g}, |dt|/t={report.worst_dev_t_rel:.3g}"
    )
    return CheckResult(name, report.passed, detail)


def check_table1_sub_threshold(cfg: VerifyConfig) -> CheckResult:
    return _table_check("table1-sub-threshold", an.ScalingFamily(0.0, 0.0), cfg)


def check_table1_critical(cfg: VerifyConfig) -> CheckResult:
    return _table_check("table1-critical", an.ScalingFamily(1.0, -0.5), cfg)


def check_super_threshold_stagnation(cfg: VerifyConfig) -> CheckResult:
    sizes = (1024, 4096, 16384, 65536)
    details = []
    ok = True
    for fam in (an.ScalingFamily(1.0, -0.25), an.ScalingFamily(0.02, 0.0)):
        peaks = [r.peak_p for r in an.sweep_discrete(fam, sizes)]
        ok &= all(b < a for a, b in zip(peaks, peaks[1:]))
        details.append(f"a={fam.a},b={fam.b}: {[round(x, 4) for x in peaks]}")
    n = 65536
    top = float(dw.simulate_reduced(dw.DiscreteParams(n, 0.02), an.default_steps(n)).p.max())
    ok &= top < 0.05
    details.append(f"max p at N=65536, phi=0.02: {top:.4f}")
    return CheckResult("super-threshold-stagnation", ok, "; ".join(details))


def check_continuous_search(cfg: VerifyConfig) -> CheckResult:
    p = cw.ContinuousParams(1024, 1.0, 0.0, dt=0.01)
    gap = cw.spectrum_c(p).gap
    prob = cw.evolve_reduced_c(p, math.pi * math.sqrt(1024) / 2).success_probability
    ok = abs(gap - 2 / math.sqrt(1024)) <= 1e-12 and prob >= 0.999
    return CheckResult("continuous-search", ok, f"gap={gap!r}, p(pi sqrt(N)/2)={prob:.6f}")


def check_continuous_oracle(cfg: VerifyConfig) -> CheckResult:
    sizes = [n for n in (16, 32) if n <= cfg.oracle_cap]
    if not sizes:
        return CheckResult("continuous-oracle", True, "no size under the oracle cap", skipped=True)
    worst = worst_shift = drift = 0.0
    for n in sizes:
        for eps in (0.0, 0.3):
            p = cw.ContinuousParams(n, 1.0, eps, t_max=2 * math.pi * math.sqrt(n), dt=0.1)
            exact = cw.success_series_c(p).p
            with_shift = cw.integrate_full_c(p, cap=cfg.oracle_cap)
            no_shift = cw.integrate_full_c(p, identity_shift=False, cap=cfg.oracle_cap)
            worst = max(worst, float(np.max(np.abs(with_shift.series.p - exact))))
            worst_shift = max(worst_shift, float(np.max(np.abs(with_shift.series.p - no_shift.series.p))))
            drift = max(drift, with_shift.norm_drift, no_shift.norm_drift)
    ok = worst <= 1e-8 and worst_shift <= 1e-9 and drift < 1e-9
    return CheckResult(
        "continuous-oracle",
        ok,
        f"N={sizes}: vs exact {worst:.2e}, shift variant {worst_shift:.2e}, drift {drift:.2e}",
    )


def check_compensation(cfg: VerifyConfig) -> CheckResult:
    base = cw.success_series_c(cw.ContinuousParams(1024, 1.0, 0.0, dt=0.1)).p
    worst = 0.0
    for eps in (0.1, 0.5, 0.9):
        comp = cw.ContinuousParams(1024, 1.0 / (1.0 - eps), eps, dt=0.1)
        worst = max(worst, float(np.max(np.abs(cw.success_series_c(comp).p - base))))
    return CheckResult("compensation", worst <= 1e-12, f"max deviation {worst:.2e}")


CHECKS: tuple[Callable[[VerifyConfig], CheckResult], ...] = (
    check_unitarity,
    check_eigen_residuals,
    check_evolution_identity,
    check_discrete_oracle,
    check_table1_sub_threshold,
    check_table1_critical,
    check_super_threshold_stagnation,
    check_continuous_search,
    check_continuous_oracle,
    check_compensation,
)


def run_all(cfg: VerifyConfig = VerifyConfig()) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        name = check.__name__.removeprefix("check_").replace("_", "-")
        try:
            results.append(check(cfg))
        except Exception as exc:  # report, never abort the suite
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results


def report_dict(cfg: VerifyConfig, results: list[CheckResult]) -> dict:
    return {
        "params": asdict(cfg),
        "passed": all(r.passed for r in results),
        "failed": [r.name for r in results if not r.passed],
        "checks": [asdict(r) for r in results],
    }
