"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math

import numpy as np
import pytest

from telefid.canonical import canonicalize, correlation_spectrum, verify_canonical
from telefid.errors import DerivationMismatch
from telefid.figures import (
    CLASSICAL_FIDELITY,
    classify,
    deviation_diagonal,
    fef,
    fef_oracle,
    universal_state_for_fidelity,
)
from telefid.simulator import (
    bilateral_twirl,
    monte_carlo_stats,
    sample_bloch_uniform,
    teleport_fidelity_exact,
    verify_schur_integrals,
)
from telefid.state import (
    bell_diagonal,
    example1,
    example2,
    hs_decompose,
    pure_from_b2,
    random_density_matrix,
    singlet,
    werner,
)
from telefid.sweep import SweepSpec, sweep_rows

from conftest import random_local_unitaries

K = 1 / (3 * math.sqrt(5))
N_MC = 10**6


def test_01_formula_vs_monte_carlo(acceptance):
    states = {
        "singlet": singlet(),
        "werner 0.6": werner(0.6),
        "werner 0.9": werner(0.9),
        **{f"pure a2={a2}": pure_from_b2(1 - a2) for a2 in (0.6, 0.75, 0.9)},
        "bell (0.7,0.2,0.1,0)": bell_diagonal(0.7, 0.2, 0.1, 0.0),
        "example1 0.5": example1(0.5),
        "example2 0.7": example2(0.7),
        **{f"random {s}": random_density_matrix(500 + s) for s in range(20)},
    }
    worst, failures = 0.0, []
    for i, (name, rho) in enumerate(states.items()):
        rep = classify(rho)
        stats = monte_carlo_stats(canonicalize(rho).varrho, N_MC, seed=1000 + i)
        zm, zs = stats.z_scores(rep.max_fidelity, rep.fidelity_deviation)
        worst = max(worst, abs(zm), abs(zs))
        if not stats.agrees_with(rep.max_fidelity, rep.fidelity_deviation, k=4):
            failures.append(name)
    acceptance(1, "MC mean/std vs closed-form F and Delta", not failures,
               f"{len(states)} states, max |z| = {worst:.2f}, failures {failures}")


def test_02_pure_state_laws(acceptance):
    rows = sweep_rows(SweepSpec("pure", 0.0, 0.5, 51))
    err_f = err_c = 0.0
    for r in rows:
        b2 = r["param"]
        two_ab = 2 * math.sqrt(b2 * (1 - b2))
        err_f = max(err_f, abs(r["Delta"] - (1 - r["F"]) / math.sqrt(5)))
        err_c = max(err_c, abs(r["Delta"] - K * (1 - two_ab)))
    entangled = [r["Delta"] for r in rows if r["param"] > 0]
    product = [r["Delta"] for r in rows if r["param"] == 0]
    bound_ok = max(entangled) < K and all(abs(d - K) <= 1e-15 for d in product)
    ok = len(rows) == 51 and err_f <= 1e-12 and err_c <= 1e-12 and bound_ok
    acceptance(2, "pure-state deviation laws and bound", ok,
               f"errs {err_f:.1e}/{err_c:.1e}, sup over entangled {max(entangled):.6f} < {K:.6f}")


def _eq34(p):
    return 2 / (3 * math.sqrt(10)) * math.sqrt((p[1] - p[2]) ** 2 + (p[2] - p[3]) ** 2 + (p[1] - p[3]) ** 2)


def test_03_bell_diagonal_laws(acceptance):
    rng = np.random.default_rng(3)
    vectors = list(rng.dirichlet(np.ones(4), size=900))
    # Werner points and near-Werner points make the "iff" non-vacuous.
    for p0 in rng.uniform(0.25, 1, 50):
        q = (1 - p0) / 3
        vectors.append(np.array([p0, q, q, q]))
    for p0 in rng.uniform(0.3, 0.9, 50):
        q = (1 - p0) / 3
        vectors.append(np.array([p0, q + 1e-6, q - 1e-6, q]))
    max_err, counterexamples, lu_err = 0.0, 0, 0.0
    for p in vectors:
        # Relabel (a local Pauli on one side) so p0 is the dominant weight.
        p = np.array(p, dtype=float)
        k = int(np.argmax(p))
        p[[0, k]] = p[[k, 0]]
        p[0] = 1 - p[1:].sum()
        rho = bell_diagonal(*p)
        direct = deviation_diagonal(np.diag(hs_decompose(rho).t))
        pipeline = classify(rho).fidelity_deviation
        max_err = max(max_err, abs(_eq34(p) - direct), abs(direct - pipeline))
        werner_like = np.ptp(p[1:]) <= 1e-9
        if (pipeline <= 1e-10) != werner_like:
            counterexamples += 1
        rep = classify(rho)
        if (rep.useful and rep.universal) != (werner_like and p[0] > 0.5):
            counterexamples += 1
        lu_err = max(lu_err, abs(pipeline - classify(bell_diagonal(*np.roll(p, 1))).fidelity_deviation))
    ok = max_err <= 1e-12 and counterexamples == 0 and lu_err <= 1e-12
    acceptance(3, "Bell-diagonal deviation formula and Werner characterisation", ok,
               f"{len(vectors)} vectors, max err {max_err:.1e}, counterexamples {counterexamples}")


def test_04_rank2_boundary(acceptance):
    eps = 1e-6
    rep = classify(bell_diagonal(0.5 + eps, 0.5 - eps, 0, 0))
    gap_f = rep.max_fidelity - CLASSICAL_FIDELITY
    gap_d = K - rep.fidelity_deviation
    acceptance(4, "rank-2 boundary at p0 = 1/2 + 1e-6", 0 < gap_f < 1e-5 and 0 < gap_d < 1e-5,
               f"F - 2/3 = {gap_f:.2e}, 1/(3 sqrt5) - Delta = {gap_d:.2e}")


def test_05_x_state_examples(acceptance):
    third = 1 / 3
    ok = True
    ok &= not classify(example1(third - 1e-6)).useful and classify(example1(third + 1e-6)).useful
    r_lo, r_hi = classify(example2(third - 1e-6)), classify(example2(third + 1e-6))
    ok &= not (r_lo.useful and r_lo.universal) and (r_hi.useful and r_hi.universal)
    grid = np.linspace(0.05, 0.95, 11)
    err, max_dev = 0.0, 0.0
    for p in np.concatenate([grid, [third - 1e-6, third + 1e-6]]):
        for fn in (example1, example2):
            rep = classify(fn(p))
            max_dev = max(max_dev, rep.fidelity_deviation)
            err = max(err, abs(rep.max_fidelity - 0.5 * (1 + p)))
            if fn is example2:
                ok &= (rep.useful and rep.universal) == (p > third)
            else:
                ok &= rep.useful == (p > third)
    ok &= err <= 1e-12 and max_dev <= 1e-12
    acceptance(5, "X-state examples: thresholds and F = (1+p)/2", bool(ok),
               f"F err {err:.1e}, max Delta {max_dev:.1e}")


def test_06_universality_characterisation(acceptance):
    bad = 0
    both = 0
    for seed in range(10_000):
        rep = classify(random_density_matrix(seed, rank=1 + seed % 4))
        s = np.array(rep.singular_values)
        equal = np.ptp(s) <= 1e-9 and s[0] > 1 / 3
        both += rep.useful and rep.universal
        bad += (rep.useful and rep.universal) != equal
    # Random states essentially never have equal singular values; add LU-rotated
    # Werner states so both sides of the equivalence are exercised.
    rng = np.random.default_rng(6)
    extra = 0
    for p0 in rng.uniform(0, 1, 500):
        u, v = random_local_unitaries(rng)
        rep = classify(werner(p0).local_unitary(u, v))
        s = np.array(rep.singular_values)
        equal = np.ptp(s) <= 1e-9 and s[0] > 1 / 3
        extra += rep.useful and rep.universal
        bad += (rep.useful and rep.universal) != equal
    acceptance(6, "useful and universal iff equal singular values above 1/3", bad == 0,
               f"{bad} counterexamples; positives: {both} random, {extra} rotated Werner")


def test_07_universal_constructor(acceptance):
    fs = np.linspace(CLASSICAL_FIDELITY, 1, 101)[1:]
    err, ok = 0.0, True
    for f in fs:
        rep = classify(universal_state_for_fidelity(float(f)))
        err = max(err, abs(rep.max_fidelity - f))
        ok &= rep.universal
    acceptance(7, "universal_state_for_fidelity hits F exactly with Delta = 0", ok and err <= 1e-12,
               f"{fs.size} values, max err {err:.1e}")


def test_08_protocol_identity(acceptance):
    rng = np.random.default_rng(8)
    err, mismatches, pairs = 0.0, 0, 0
    for seed in range(1000):
        cf = canonicalize(random_density_matrix(20_000 + seed))
        t = hs_decompose(cf.varrho).t
        for a in sample_bloch_uniform(rng, 10):
            try:
                f = teleport_fidelity_exact(cf.varrho, a)
            except DerivationMismatch:
                mismatches += 1
                continue
            err = max(err, abs(f - 0.5 * (1 - a @ t @ a)))
            pairs += 1
    acceptance(8, "explicit protocol equals (1 - a.T a)/2", mismatches == 0 and err <= 1e-10,
               f"{pairs} pairs, max err {err:.1e}, mismatches {mismatches}")


def test_09_schur_integrals(acceptance):
    rng = np.random.default_rng(9)
    worst, ok = 0.0, True
    for i in range(10):
        rep = verify_schur_integrals(rng.uniform(-1, 1, (3, 3)), N_MC, seed=900 + i)
        worst = max(worst, abs(rep.quadratic_z), abs(rep.quartic_z))
        ok &= rep.passed(4)
    acceptance(9, "sphere averages of a.T a and its square", ok, f"max |z| = {worst:.2f}")


def test_10_canonicalisation(acceptance):
    worst = dict(residual=0.0, offdiag=0.0)
    signs_ok = True
    for seed in range(10_000):
        check = verify_canonical(canonicalize(random_density_matrix(seed, rank=1 + seed % 4)))
        worst["residual"] = max(worst["residual"], check.conjugation_residual, check.diag_mismatch)
        worst["offdiag"] = max(worst["offdiag"], check.max_offdiag)
        signs_ok &= check.sign_pattern_ok
    rng = np.random.default_rng(10)
    rho = random_density_matrix(77)
    s0, _ = correlation_spectrum(rho)
    us, vs = random_local_unitaries(rng, 1000)
    lu = max(np.max(np.abs(correlation_spectrum(rho.local_unitary(u, v))[0] - s0)) for u, v in zip(us, vs))
    ok = worst["residual"] <= 1e-8 and worst["offdiag"] <= 1e-8 and signs_ok and lu <= 1e-9
    acceptance(10, "canonical form residuals, sign pattern, LU invariance", bool(ok),
               f"residual {worst['residual']:.1e}, offdiag {worst['offdiag']:.1e}, LU {lu:.1e}")


def test_11_fef_cross_check(acceptance):
    over, gap = -math.inf, 0.0
    for seed in range(100):
        rho = random_density_matrix(30_000 + seed)
        closed, oracle = fef(rho), fef_oracle(rho, n_samples=200, seed=seed)
        over = max(over, oracle - closed)
        gap = max(gap, closed - oracle)
    acceptance(11, "closed-form FEF vs brute-force oracle", over <= 1e-9 and gap <= 1e-4,
               f"max oracle excess {over:.1e}, max gap {gap:.1e}")


def test_12_twirl(acceptance):
    dev_after, df = 0.0, 0.0
    picked, seed = 0, 40_000
    while picked < 20:
        rho = random_density_matrix(seed, rank=1 + seed % 2)
        seed += 1
        if not classify(rho).useful:
            continue
        # Twirl the optimal representative: its singlet overlap is the FEF.
        varrho = canonicalize(rho).varrho
        before = classify(varrho)
        after = classify(bilateral_twirl(varrho, 10**4, seed=seed))
        dev_after = max(dev_after, after.fidelity_deviation)
        df = max(df, abs(after.max_fidelity - before.max_fidelity))
        picked += 1
    acceptance(12, "bilateral twirl removes deviation and keeps F", dev_after < 5e-2 and df < 5e-3,
               f"20 useful states, max Delta after {dev_after:.1e}, max |dF| {df:.1e}")
