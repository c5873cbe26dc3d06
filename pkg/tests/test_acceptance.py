"""Acceptance criteria. Each test prints one PASS/FAIL line; the terminal
summary repeats them."""

import math
import time

import numpy as np
import pytest

from gchain.chains import (Band, BandedSpec, ExchangeableSpec, ToeplitzMixtureSpec,
                           banded_is_g_chain, direct_section_check, exchangeable_is_g_chain,
                           materialize, separability_certificate)
from gchain.entanglement import FamilyParams, Verdict, lemma52_window, lemma_gamma, simon_test
from gchain.entropy_rate import (entropy_sequence, kms_rate, rate_gap_bound,
                                 spectral_measure_distance, toeplitz_spectrum)
from gchain.gmatrix import is_g_matrix, von_neumann_entropy
from gen import random_g_matrix, random_psd, random_symmetric, random_valid_exchangeable

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])


def report(number, ok, detail):
    print(f"\nCRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_01_exchangeable_criterion_matches_sections():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    cases = valid_seen = invalid_seen = 0
    bad = []
    for i in range(240):
        k = 1 + i % 2
        if i % 3 == 0:
            A, B = random_valid_exchangeable(rng, k)
        else:
            A = random_g_matrix(rng, k, 0.5, 1.2) + random_symmetric(rng, k, -0.3, 0.3)
            B = random_symmetric(rng, k, -0.4, 0.4)
        crit = exchangeable_is_g_chain(A, B, 1e-9)
        sections = direct_section_check(ExchangeableSpec(A, B), 6, 1e-9)
        cases += 1
        if crit and not all(sections):
            bad.append((i, "criterion true but a section fails"))
        if crit:
            valid_seen += 1
        if crit.margins["A_minus_B_min_eig"] < -1e-6:
            invalid_seen += 1
            if all(sections):
                bad.append((i, "A - B fails but every section passes"))
    elapsed = time.perf_counter() - start
    ok = not bad and cases >= 200 and valid_seen >= 50 and invalid_seen >= 50 and elapsed < 30
    report(1, ok, f"{cases} pairs, {valid_seen} valid, {invalid_seen} with A-B failing, "
                  f"{len(bad)} disagreements, {elapsed:.1f}s")


def test_criterion_02_exchangeable_entropy_closed_form():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    for i in range(50):
        A, B = random_valid_exchangeable(rng, 1 + i % 2)
        sA_B = von_neumann_entropy(A - B)
        for n in range(1, 33):
            s_n = von_neumann_entropy(materialize(ExchangeableSpec(A, B), range(1, n + 1)).matrix)
            closed = (n - 1) * sA_B + von_neumann_entropy(A + (n - 1) * B)
            worst = max(worst, abs(s_n - closed) / (1 + s_n))
    elapsed = time.perf_counter() - start
    report(2, worst <= 1e-8 and elapsed < 60, f"worst scaled error {worst:.2e}, {elapsed:.1f}s")


def _suite_specs():
    rng = np.random.default_rng(303)
    specs = {f"exchangeable_{i}": ExchangeableSpec(*random_valid_exchangeable(rng, 1)) for i in range(3)}
    specs["exchangeable_k2"] = ExchangeableSpec(*random_valid_exchangeable(rng, 2))
    specs["exchangeable_example"] = ExchangeableSpec(I2, 0.25 * I2)
    for j in (1, 2, 3):
        specs[f"banded_j{j}"] = BandedSpec(0.7 * I2, 0.2 * Z, j)
        specs[f"banded_j{j}_remark"] = BandedSpec(0.7 * I2, 0.24 * Z, j)
    specs["mixture_12"] = ToeplitzMixtureSpec(0.7 * I2, [Band(1, 0.6, 0.2 * Z), Band(2, 0.4, 0.2 * Z)])
    specs["mixture_13"] = ToeplitzMixtureSpec(0.7 * I2, [Band(1, 0.5, 0.24 * Z), Band(3, 0.5, 0.24 * Z)])
    specs["mixture_mixed_blocks"] = ToeplitzMixtureSpec(
        np.diag([1.0, 0.8]), [Band(1, 0.5, 0.1 * I2), Band(2, 0.3, 0.15 * Z)])
    return specs


def test_criterion_03_entropy_traces_monotone():
    specs = _suite_specs()
    failures = []
    for name, spec in specs.items():
        trace = entropy_sequence(spec, 128, mono_tol=1e-7)
        if not trace.monotone:
            failures.append(f"{name}: {trace.violations[0]}")
    report(3, not failures, f"{len(specs)} specs to n=128; failures: {failures or 'none'}")


def test_criterion_04_rate_gap_envelope():
    rng = np.random.default_rng(404)
    specs = [(I2, 0.25 * I2)]
    for i in range(20):
        k = 1 + i % 2
        A_minus_B = random_g_matrix(rng, k, 0.55, 1.5)
        B = random_psd(rng, k, 0.5) + 0.1 * np.eye(2 * k)
        specs.append((A_minus_B + B, B))
    violations = 0
    for A, B in specs:
        target = von_neumann_entropy(A - B)
        rates = entropy_sequence(ExchangeableSpec(A, B), 64).rates
        for n in range(1, 65):
            if abs(rates[n - 1] - target) > rate_gap_bound(A, B, n) + target / n:
                violations += 1
    example = entropy_sequence(ExchangeableSpec(I2, 0.25 * I2), 64).rates[-1]
    gap = abs(example - von_neumann_entropy(0.75 * I2))
    report(4, violations == 0 and gap <= 0.15,
           f"{len(specs)} specs x 64 sections, {violations} envelope violations, example gap {gap:.4f}")


def test_criterion_05_endpoint_reduction():
    rng = np.random.default_rng(505)
    found = checked = 0
    worst = math.inf
    while found < 100:
        k = 1 + found % 2
        A = random_g_matrix(rng, k, 0.6, 1.5)
        B = random_symmetric(rng, k, -0.15, 0.15)
        if not banded_is_g_chain(A, B):
            continue
        found += 1
        for t in rng.uniform(-2, 2, size=50):
            worst = min(worst, is_g_matrix(A + t * B).min_eig)
            checked += 1
    report(5, worst >= -1e-9, f"{found} pairs, {checked} interior t, worst margin {worst:.3e}")


def test_criterion_06_toeplitz_spectra():
    worst = 0.0
    for n in (3, 10, 100):
        closed = np.sort(2 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))
        worst = max(worst, float(np.max(np.abs(toeplitz_spectrum({1: 1.0}, n) - closed))))
    trends = {}
    for label, w in (("p1=1", {1: 1.0}), ("p=(0.5,0.5)", {1: 0.5, 2: 0.5})):
        d = [spectral_measure_distance(w, n) for n in (32, 64, 128, 256)]
        trends[label] = (d, all(b < a for a, b in zip(d, d[1:])))
    ok = worst <= 1e-10 and all(t[1] for t in trends.values())
    detail = ", ".join(f"{k}: {[round(x, 5) for x in v[0]]}" for k, v in trends.items())
    report(6, ok, f"eigenvalue error {worst:.1e}; distances {detail}")


def test_criterion_07_kms_cross_validation():
    start = time.perf_counter()
    A, B, w = 0.7 * I2, 0.2 * Z, {1: 1.0}
    q = kms_rate(A, B, w, 1024)
    q2 = kms_rate(A, B, w, 2048)
    spec = BandedSpec(A, B, 1)
    gaps = [abs(von_neumann_entropy(materialize(spec, range(1, n + 1)).matrix) / n - q.estimate)
            for n in (32, 64, 128, 256)]
    elapsed = time.perf_counter() - start
    stable = abs(q2.estimate - q.estimate) <= q.error_indicator
    ok = all(b < a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 0.05 and stable and elapsed < 120
    report(7, ok, f"gaps {[f'{g:.2e}' for g in gaps]}, doubling shift {abs(q2.estimate - q.estimate):.1e} "
                  f"vs indicator {q.error_indicator:.1e}, {elapsed:.1f}s")


def test_criterion_08_window_matches_simon():
    lam = 0.7
    cs = np.linspace(0, 0.489, 102)[1:-1]
    mismatches = skipped = 0
    for c in cs:
        w = lemma52_window(lam, c)
        if min(abs(c - w.lower), abs(c - w.upper)) < 1e-6:
            skipped += 1
            continue
        if simon_test(lemma_gamma(lam, c)).verdict is not w.verdict:
            mismatches += 1
    report(8, mismatches == 0, f"{len(cs)} values of c, {skipped} skipped at boundaries, "
                               f"{mismatches} mismatches")


def test_criterion_09_remark_chain():
    params = FamilyParams(0.7, 0.24, {1: 1.0})
    spec = BandedSpec(0.7 * I2, 0.24 * Z, 1)
    valid = params.is_valid_chain and bool(banded_is_g_chain(spec.A, spec.B))
    v12 = simon_test(materialize(spec, [1, 2]).matrix).verdict
    rho13 = materialize(spec, [1, 3]).matrix
    exact = np.array_equal(rho13, np.kron(np.eye(2), 0.7 * I2))
    v13 = simon_test(rho13).verdict
    ok = valid and v12 is Verdict.ENTANGLED and exact and v13 is Verdict.SEPARABLE
    report(9, ok, f"valid={valid}, rho(1,2) {v12.value}, rho(1,3) exact={exact} {v13.value}")


def test_criterion_10_exchangeable_pairs_separable():
    rng = np.random.default_rng(1010)
    verdicts = set()
    worst = 0.0
    for _ in range(50):
        spec = ExchangeableSpec(*random_valid_exchangeable(rng, 1))
        verdicts.add(simon_test(materialize(spec, [1, 2]).matrix).verdict)
        cert = separability_certificate(spec, [1, 2])
        worst = max(worst, cert.residual)
        assert cert.separable
    ok = verdicts == {Verdict.SEPARABLE} and worst <= 1e-12
    report(10, ok, f"verdicts {sorted(v.value for v in verdicts)}, worst residual {worst:.1e}")
