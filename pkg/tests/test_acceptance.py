"""Acceptance criteria, each checked at its stated tolerance.

Every test prints one ``[PASS]``/``[FAIL]``/``[SKIP]`` line; the lines are
repeated in the terminal summary so they show up without ``-s``.
"""

import dataclasses
import math
import os
import shutil
import time
from pathlib import Path

import numpy as np
import pytest

from shockgrid import pipeline
from shockgrid.epidemic import EpidemicParams, attack_rate_estimate, labor_loss_morbidity, labor_loss_mortality
from shockgrid.scenarios import NAICS_SECTORS, load_scenario
from shockgrid.testkit import engine_outputs, generate, max_abs_diff, oracle_shocks, write_inputs

from conftest import ACCEPTANCE_LINES as LINES, T1_DIR
from invariants import check_invariants
from reference_tables import CBO_TABLE, checksum

FULL_DATA_ENV = "SHOCKGRID_FULL_DATA_CONFIG"


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    LINES.append(line)
    print(line)


def compare(name, got, want, tol, failures):
    bad = (isinstance(got, float) and math.isnan(got)) or abs(got - want) > tol
    if bad:
        failures.append(f"{name}={got!r} (want {want} ± {tol:g})")


def test_1_toy_exactness(tmp_path):
    d = tmp_path / "t1"
    shutil.copytree(T1_DIR, d)
    start = time.perf_counter()
    config = pipeline.load_config(d / "config.txt", output_dir=str(d / "out"))
    results = pipeline.compute(pipeline.prepare(config))
    pipeline.write_outputs(pipeline.render(results), config.output_dir)
    elapsed = time.perf_counter() - start

    by_code = lambda vec: dict(zip((c.digits for c in vec.entities), vec.values.tolist()))
    ind, occ = results.industry, results.occupation
    occ_order = ("172041", "132041", "472011")
    ind_order = ("3251", "6211")
    expected = {
        ("industry", "e"): (0.5, 1.0), ("industry", "r"): (0.125, 0.5), ("industry", "supply"): (-0.4375, 0.0),
        ("occupation", "x"): (0.5, 1.0, 0.7), ("occupation", "y"): (0.5, 1.0, 0.0),
        ("occupation", "supply"): (-0.25, 0.0, -0.3), ("occupation", "demand"): (-0.10, 0.15, 0.0),
    }
    failures = []
    for (level, key), want in expected.items():
        vec = (ind if level == "industry" else occ)[key]
        got = by_code(vec)
        order = ind_order if level == "industry" else occ_order
        for code, w in zip(order, want):
            compare(f"{key}[{code}]", got[code], w, 1e-12, failures)
    cells = results.report.cells["total"]
    compare("employment", cells["employment"], -0.21875, 1e-12, failures)
    compare("wages", cells["wages"], -0.15385, 1e-5, failures)
    compare("value_added", cells["value_added"], -0.175, 1e-12, failures)
    venn = results.report.venn
    for name, want in zip(("non_essential", "cannot_remote", "intersection", "essential_and_remote"),
                          (0.25, 0.6875, 0.21875, 0.09375)):
        compare(f"venn.{name}", getattr(venn, name), want, 1e-12, failures)
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.3f}s >= 1s")
    ok = not failures
    report("1", ok, f"toy economy T1, runtime {elapsed:.3f}s" + ("" if ok else "; mismatches: " + "; ".join(failures)))
    assert ok, failures


def test_2_oracle_equivalence():
    rng = np.random.default_rng(20240501)
    start = time.perf_counter()
    worst, where, seed_at = 0.0, "", None
    for i in range(200):
        dims = (int(rng.integers(1, 11)), int(rng.integers(3, 16)), int(rng.integers(1, 13)), int(rng.integers(1, 31)))
        seed = int(rng.integers(2**31))
        econ = generate(seed, dims, degenerate=bool(i % 5 == 4))
        diff, key = max_abs_diff(engine_outputs(econ), oracle_shocks(econ))
        if diff > worst:
            worst, where, seed_at = diff, key, (seed, dims)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 30
    report("2", ok, f"200 synthetic economies, max abs diff {worst:.3g} at {where or '-'} {seed_at or ''}, "
                    f"runtime {elapsed:.2f}s")
    assert ok


def test_3_invariant_suite():
    rng = np.random.default_rng(7)
    failures = []
    cases = 1000
    for i in range(cases):
        dims = (int(rng.integers(1, 11)), int(rng.integers(3, 16)), int(rng.integers(1, 13)), int(rng.integers(1, 31)))
        seed = int(rng.integers(2**31))
        econ = generate(seed, dims, degenerate=bool(rng.random() < 0.2))
        try:
            check_invariants(econ, float(10 ** rng.uniform(-2, 6)), float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
        except AssertionError as exc:
            failures.append((seed, dims, str(exc)[:80]))
    ok = not failures
    report("3", ok, f"{cases} randomized invariant cases, {len(failures)} failures"
                    + ("" if ok else f"; first: {failures[0]}"))
    assert ok


def test_4_scenario_fidelity():
    sev, mild = load_scenario("cbo_severe"), load_scenario("cbo_mild")
    mismatches = [
        s for s in NAICS_SECTORS
        if (sev.shock(s), mild.shock(s)) != (CBO_TABLE[s][0] / 100, CBO_TABLE[s][1] / 100)
    ]
    got = {s: (round(sev.shock(s) * 100), round(mild.shock(s) * 100)) for s in NAICS_SECTORS}
    same_sum = checksum(got) == checksum(CBO_TABLE)
    ok = not mismatches and same_sum and len(NAICS_SECTORS) == 24 and sev.shock("48") == -0.67
    report("4", ok, f"24 sectors x 2 CBO scenarios, mismatched rows {mismatches or 'none'}, "
                    f"checksum {'match' if same_sum else 'differs'}")
    assert ok


def test_5_epidemic_labor_loss():
    morb = labor_loss_morbidity(EpidemicParams(0.80, 0.01, weeks_out=3, weeks_per_year=48), 0.01)
    mort = labor_loss_mortality(EpidemicParams(0.80, 0.01))
    attack = attack_rate_estimate(132547, 60431283, 2, 4)
    ok = (abs(morb - 0.049375) <= 1e-12 and round(100 * morb, 2) == 4.94
          and abs(mort - 0.008) <= 1e-12 and abs(attack - 0.0176) <= 1e-4)
    report("5", ok, f"morbidity {morb:.6f}, mortality {mort:.6f}, attack rate {attack:.6f}")
    assert ok


# published full-data targets, percent (fractions for the essential share)
FULL_TARGETS = {
    "supply": {"employment": -21, "wages": -15, "value_added": -18},
    "demand": {"employment": -13, "wages": -8, "value_added": -8},
    "total": {"employment": -24, "wages": -17, "value_added": -22},
}
FULL_QUARTILES = (-42, -24, -21, -7)
FULL_LOST_WAGES = (30, 23, 29, 18)
FULL_HEALTH = {"employment": -22, "wages": -15, "value_added": -21}
FULL_HEALTH_QUARTILES = (-41, -22, -20, -4)


def test_6_full_data_reproduction(tmp_path):
    path = os.environ.get(FULL_DATA_ENV)
    if not path:
        line = f"[SKIP] criterion 6: full external dataset not supplied (set {FULL_DATA_ENV} to its config.txt)"
        LINES.append(line)
        print(line)
        pytest.skip("full external dataset not supplied")

    config = pipeline.load_config(path, output_dir=str(tmp_path / "full"), scenario="cbo_severe")
    model = pipeline.prepare(config)
    base = pipeline.compute(model).report
    health = pipeline.compute(pipeline.prepare(dataclasses.replace(config, health_growth=True))).report
    failures = []
    for shock, cells in FULL_TARGETS.items():
        for measure, want in cells.items():
            compare(f"{shock}.{measure}", 100 * base.cells[shock][measure], want, 1.0, failures)
    compare("essential fine-code fraction", float(np.mean(model.u)), 0.58, 0.01, failures)
    for q, want, lost in zip(base.quartiles, FULL_QUARTILES, FULL_LOST_WAGES):
        compare(f"q{q.quartile}.employment", 100 * q.employment_shock, want, 1.0, failures)
        compare(f"q{q.quartile}.lost_wages", 100 * q.lost_wage_share, lost, 1.0, failures)
    for measure, want in FULL_HEALTH.items():
        compare(f"health.{measure}", 100 * health.cells["total_health"][measure], want, 1.0, failures)
    for q, want in zip(health.quartiles, FULL_HEALTH_QUARTILES):
        compare(f"health.q{q.quartile}", 100 * q.employment_shock, want, 1.0, failures)
    compare("venn.non_essential", 100 * base.venn.non_essential, 36, 1.0, failures)
    compare("venn.cannot_remote", 100 * base.venn.cannot_remote, 56, 1.0, failures)
    ok = not failures
    report("6", ok, "full-data aggregates within 1 point" + ("" if ok else ": " + "; ".join(failures)))
    assert ok


def test_7_determinism_and_scale(tmp_path):
    d = tmp_path / "t1"
    shutil.copytree(T1_DIR, d)
    snapshots = []
    for run in ("a", "b"):
        out = d / run
        pipeline.run(pipeline.load_config(d / "config.txt", output_dir=str(out)))
        snapshots.append({p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
    identical = snapshots[0] == snapshots[1] and len(snapshots[0]) == 9

    econ = generate(2024, (300, 800, 350, 1100), density=1.0)
    config = write_inputs(econ, tmp_path / "scale")
    start = time.perf_counter()
    pipeline.run(pipeline.load_config(config))
    elapsed = time.perf_counter() - start
    ok = identical and elapsed < 5.0
    report("7", ok, f"byte-identical reruns {'yes' if identical else 'NO'}; "
                    f"N=300 J=800 I=350 K=1100 dense run {elapsed:.2f}s")
    assert ok
