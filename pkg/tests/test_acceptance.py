"""Acceptance criteria 1-9.

Each test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Run directly (``python3 tests/test_acceptance.py``)
for the lines alone.
"""

import json
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from bcwiener import (
    BCLaurentSeries,
    BCMatrix,
    Bicomplex,
    ChannelSeries,
    FactorOptions,
    Realization,
    approximation_error,
    embed_sharp,
    factor_uniqueness_unitary,
    fourier_coefficients,
    from_idempotent,
    inverse,
    invert,
    is_positive,
    norm,
    riesz_projection,
    sharp_route_factorize,
    spectral_density_realization,
    spectral_factorize,
    spectral_fourier_coeffs,
    stein_solve,
    superosc_coeffs,
    superosc_eval,
)
from bcwiener.cli import main as cli_main
from bcwiener.errors import NotInvertibleOnBoundary
from bcwiener.linalg import sharp_conjugate
from bcwiener.realization import fourier_from_realization, stein_residual
from bcwiener.series import merge_channels, samples_to_coefficients, split_channels
from bcwiener.superosc import superosc_sum

FIX = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}


def record(num, title, ok, detail, elapsed=None):
    timing = f", {elapsed:.2f} s" if elapsed is not None else ""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} ({detail}{timing})"
    RESULTS[num] = line
    print(line)
    return ok


def _rand_bc(rng, n):
    z = rng.standard_normal((n, 4))
    return [Bicomplex(complex(a, b), complex(c, d)) for a, b, c, d in z]


# 1 -------------------------------------------------------------------------


def test_criterion_1_idempotent_algebra():
    rng = np.random.default_rng(1)
    Zs, Ws = _rand_bc(rng, 10_000), _rand_bc(rng, 10_000)
    t0 = time.perf_counter()
    worst = 0.0
    for Z, W in zip(Zs, Ws):
        z1, z2 = Z.idempotent()
        w1, w2 = W.idempotent()
        scale = norm(Z) * norm(W)
        P, S = Z * W, Z + W
        Q = Z**3
        Zi = inverse(Z)
        errs = (
            (abs(P.lambda1 - z1 * w1) + abs(P.lambda2 - z2 * w2)) / scale,
            (abs(S.lambda1 - (z1 + w1)) + abs(S.lambda2 - (z2 + w2))) / (norm(Z) + norm(W)),
            (abs(Q.lambda1 - z1**3) + abs(Q.lambda2 - z2**3)) / norm(Z) ** 3,
            abs(Zi.lambda1 - 1 / z1) * abs(z1) + abs(Zi.lambda2 - 1 / z2) * abs(z2),
        )
        worst = max(worst, *errs)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    assert record(1, "idempotent algebra, 1e4 pairs", ok, f"max rel err {worst:.1e}", elapsed)


# 2 -------------------------------------------------------------------------


def test_criterion_2_norm_laws():
    rng = np.random.default_rng(2)
    Zs, Ws = _rand_bc(rng, 10_000), _rand_bc(rng, 10_000)
    # include zero divisors, where the bound is tight in one channel
    Zs[:100] = [from_idempotent(Z.lambda1, 0) for Z in Zs[:100]]
    violations = 0
    for Z, W in zip(Zs, Ws):
        lhs, rhs = norm(Z * W), norm(Z) * norm(W)
        if lhs - rhs > 1e-14 * rhs:
            violations += 1
    assert record(2, "dual-Lie submultiplicativity, 1e4 pairs", violations == 0, f"{violations} violations")


# 3 -------------------------------------------------------------------------


def test_criterion_3_embedding():
    rng = np.random.default_rng(3)
    hom_err, mismatches, n_pos = 0.0, 0, 0
    for trial in range(1000):
        p = 2 if trial % 2 else 4
        M = BCMatrix(*(rng.standard_normal((2, p, p)) + 1j * rng.standard_normal((2, p, p))))
        N = BCMatrix(*(rng.standard_normal((2, p, p)) + 1j * rng.standard_normal((2, p, p))))
        eM, eN = embed_sharp(M), embed_sharp(N)
        scale = np.linalg.norm(eM) * np.linalg.norm(eN)
        hom_err = max(
            hom_err,
            np.linalg.norm(embed_sharp(M @ N) - eM @ eN) / scale,
            np.linalg.norm(embed_sharp(M + N) - eM - eN) / (np.linalg.norm(eM) + np.linalg.norm(eN)),
            np.linalg.norm(embed_sharp(M.star()) - eM.conj().T) / np.linalg.norm(eM),
        )
        # positive, indefinite in one channel, or singular PSD
        H = M @ M.star()
        kind = trial % 3
        if kind == 1:
            shift = np.linalg.eigvalsh(H.P2)[p // 2]
            H = BCMatrix.from_channels(H.P1, H.P2 - shift * np.eye(p))
        elif kind == 2:
            R = BCMatrix(M.M1[:, :1], M.M2[:, :1])
            H = R @ R.star()
        ev = np.linalg.eigvalsh(embed_sharp(H))
        emb_pos = bool(ev[0] >= -1e-10 * max(1.0, np.abs(ev).max()))
        mine = is_positive(H, tol=1e-10 * max(1.0, np.abs(ev).max()))
        n_pos += mine
        mismatches += mine != emb_pos
    ok = hom_err <= 1e-10 and mismatches == 0
    detail = f"hom err {hom_err:.1e}, {mismatches} positivity mismatches, {n_pos} positive of 1000"
    assert record(3, "sharp embedding *-homomorphism and positivity", ok, detail)


# 4 -------------------------------------------------------------------------


def test_criterion_4_inversion():
    t0 = time.perf_counter()
    f = BCLaurentSeries.scalar({0: 1.0, 1: -0.5})
    res = invert(f, K=40, N=256)
    coeff_err = max(
        float(np.max(np.abs(c.coeffs[40:, 0, 0] - 0.5 ** np.arange(41)))) + float(np.max(np.abs(c.coeffs[:40])))
        for c in split_channels(res.series)
    )
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10):
        terms = {}
        for n in range(-2, 3):
            terms[n] = BCMatrix(*(0.15 * (rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3)))))
        # diagonally dominant: |diag| exceeds the rest of the Wiener mass in every channel
        terms[0] = terms[0] + BCMatrix.identity(3).scale(Bicomplex(6, 1))
        worst = max(worst, invert(BCLaurentSeries.from_terms(terms), K=48, N=256).residual)
    try:
        invert(BCLaurentSeries.scalar({0: 1.0, 1: -1.0}))
        raised = False
    except NotInvertibleOnBoundary:
        raised = True
    elapsed = time.perf_counter() - t0
    ok = coeff_err <= 1e-10 and res.residual <= 1e-9 and worst <= 1e-8 and raised and elapsed < 2
    detail = f"coeff err {coeff_err:.1e}, residual {res.residual:.1e}, 3x3 residual {worst:.1e}, singular raised={raised}"
    assert record(4, "inversion", ok, detail, elapsed)


# 5 -------------------------------------------------------------------------


def _outer(rng, p, deg):
    tail = [rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p)) for _ in range(deg)]
    L = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
    g0 = L @ L.conj().T + (2 * sum(np.linalg.norm(t, 2) for t in tail) + 1) * np.eye(p)
    return ChannelSeries(0, np.stack([g0] + tail))


def test_criterion_5_spectral_factorization():
    t0 = time.perf_counter()
    res = spectral_factorize(BCLaurentSeries.scalar({-1: 2.0, 0: 5.0, 1: 2.0}))
    a_err = max(float(np.max(np.abs(c.coeffs[:, 0, 0] - [2, 1]))) for c in split_channels(res.series))

    rng = np.random.default_rng(5)
    b_res, b_cert, c_def, d_cert = 0.0, 0.0, 0.0, 0.0
    for p in range(1, 5):
        for deg in (1, 3, 5):
            g = merge_channels(_outer(rng, p, deg), _outer(rng, p, deg))
            f = g @ g.star()
            fac = spectral_factorize(f, FactorOptions(K=deg))
            b_res = max(b_res, fac.residual)
            b_cert = max(b_cert, factor_uniqueness_unitary(fac.series, g, tol=1e-6).residual / max(1.0, g.norm()))
            if p <= 2:
                sharp = sharp_route_factorize(f.embed(), FactorOptions(K=deg))
                c_def = max(c_def, sharp.info["sharp_defect"])
                for coef in sharp.series.coeffs:
                    c_def = max(c_def, np.linalg.norm(coef - sharp_conjugate(coef)) / max(1.0, np.linalg.norm(coef)))
                cert = factor_uniqueness_unitary(fac.series.embed(), sharp.series, tol=1e-6)
                d_cert = max(d_cert, cert.residual / max(1.0, sharp.series.norm()), cert.unitarity_defect)
    elapsed = time.perf_counter() - t0
    ok = a_err <= 1e-10 and b_res <= 1e-8 and b_cert <= 1e-6 and c_def <= 1e-8 and d_cert <= 1e-6 and elapsed < 10
    detail = f"(a) {a_err:.1e} (b) residual {b_res:.1e} cert {b_cert:.1e} (c) sharp defect {c_def:.1e} (d) cert {d_cert:.1e}"
    assert record(5, "spectral factorization", ok, detail, elapsed)


# 6 -------------------------------------------------------------------------


def _random_regular(rng, n):
    radii = np.where(rng.random(n) < 0.5, rng.uniform(0.1, 0.75, n), rng.uniform(1.34, 3.0, n))
    ev = radii * np.exp(2j * np.pi * rng.random(n))
    S = np.eye(n) + 0.3 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    A = S @ np.diag(ev) @ np.linalg.inv(S)
    cm = lambda r, c: rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))  # noqa: E731
    return Realization(A, cm(n, 2), cm(2, n), cm(2, 2))


def test_criterion_6_realizations():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    th = 2 * np.pi * np.arange(2048) / 2048
    four_err, proj_err = 0.0, 0.0
    for i in range(100):
        R = _random_regular(rng, 1 + i % 8)
        vals = R.on_circle(th)
        oracle = samples_to_coefficients(vals, 16).coeffs
        Ps = riesz_projection(R.A, "schur")
        Pq = riesz_projection(R.A, "quadrature")
        proj_err = max(proj_err, float(np.max(np.abs(Ps.P - Pq.P))))
        F = fourier_coefficients(R, -16, 16, Ps).coeffs
        scale = max(1.0, float(np.max(np.abs(vals))))
        four_err = max(four_err, float(np.max(np.abs(F - oracle))) / scale)
    P = riesz_projection([[2, 1], [0, 0.5]])
    closed = float(np.max(np.abs(P.P - [[1, 2 / 3], [0, 0]])))
    elapsed = time.perf_counter() - t0
    ok = four_err <= 1e-8 and proj_err <= 1e-8 and closed <= 1e-9 and elapsed < 5
    detail = f"DFT err {four_err:.1e}, schur vs quadrature {proj_err:.1e}, closed form {closed:.1e}"
    assert record(6, "realization suite", ok, detail, elapsed)


# 7 -------------------------------------------------------------------------


def test_criterion_7_density_formulas():
    t0 = time.perf_counter()

    def w2(t):
        return abs(1 + 1 / (np.exp(1j * t) - 0.5)) ** 2

    err = 0.0
    for k in range(0, 6):
        numeric = quad(lambda t: w2(t) * np.cos(k * t), -np.pi, np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        numeric /= 2 * np.pi
        closed = 7 / 3 if k == 0 else (5 / 3) * 0.5 ** (k - 1)
        ours = spectral_fourier_coeffs(0.5, 1, 1, 1, k)[0, 0]
        R = spectral_density_realization(0.5, 1, 1, 1)
        via_real = fourier_from_realization(R, None, k)[0, 0]
        err = max(err, abs(closed - numeric), abs(ours - numeric), abs(via_real - numeric))
    X = stein_solve([[0.5]], [[1.0]])
    st_res = stein_residual([[0.5]], [[1.0]], X)
    R = spectral_density_realization(0.5, 1, 1, 1)
    inside = riesz_projection(R.A, side="inside").P
    proj = float(np.max(np.abs(inside - np.array([[1, X[0, 0]], [0, 0]]))))
    elapsed = time.perf_counter() - t0
    ok = err <= 1e-8 and st_res <= 1e-12 and proj <= 1e-9 and elapsed < 2
    detail = f"coeff err {err:.1e}, Stein residual {st_res:.1e}, projector err {proj:.1e}"
    assert record(7, "density Fourier coefficients and projector", ok, detail, elapsed)


# 8 -------------------------------------------------------------------------


def test_criterion_8_superoscillations():
    t0 = time.perf_counter()
    sum_err, form_err = 0.0, 0.0
    t = np.linspace(-3, 3, 61)
    for a in (2, 3, 4, 5, 6):
        for m in range(1, 41):
            c = superosc_coeffs(m, a)
            sum_err = max(sum_err, abs(np.abs(c).sum() - float(a) ** m) / float(a) ** m)
            form_err = max(form_err, float(np.max(np.abs(superosc_sum(m, a, t) - superosc_eval(m, a, t)))) / float(a) ** m)
    tt = np.linspace(-1, 1, 201)
    ratios = []
    for a in (2, 3, 4, 5, 6):
        e = {m: float(np.max(np.abs(superosc_eval(m, a, tt) - np.exp(1j * a * tt)))) for m in (64, 128, 256, 512)}
        ratios += [e[2 * m] / e[m] for m in (64, 128, 256)]
    low = BCLaurentSeries.scalar({-1: Bicomplex(1, 2j), 0: Bicomplex(0.5, -1), 1: Bicomplex(-2, 0.25j)})
    pts = [(x, y) for x in np.linspace(-1, 1, 7) for y in np.linspace(-1, 1, 7)]
    exact_err = approximation_error(low, 16, pts)
    rng = np.random.default_rng(8)
    decay = BCLaurentSeries.scalar(
        {n: Bicomplex(complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))) * 2.0 ** -abs(n) for n in range(-8, 9)}
    )
    grid = [(x, y) for x in np.linspace(-0.5, 0.5, 9) for y in np.linspace(-0.5, 0.5, 9)]
    errs = [approximation_error(decay, m, grid) for m in (32, 64, 128)]
    elapsed = time.perf_counter() - t0
    monotone = errs[0] > errs[1] > errs[2]
    ok = (
        sum_err <= 1e-10
        and form_err <= 1e-10
        and 0.35 <= min(ratios)
        and max(ratios) <= 0.65
        and exact_err <= 1e-13
        and monotone
        and elapsed < 5
    )
    detail = (
        f"sum rel err {sum_err:.1e}, closed form err {form_err:.1e}, ratios [{min(ratios):.3f}, {max(ratios):.3f}], "
        f"low-band err {exact_err:.1e}, errors {errs[0]:.2e} > {errs[1]:.2e} > {errs[2]:.2e}"
    )
    assert record(8, "superoscillations", ok, detail, elapsed)


# 9 -------------------------------------------------------------------------

CLI_CASES = [
    ("decompose", "scalar_k.json", (), 0),
    ("decompose", "matrix_2x2.json", (), 0),
    ("factorize", "density_2_5_2.json", (), 0),
    ("factorize", "factorize_with_options.json", (), 0),
    ("factorize", "not_positive.json", (), 2),
    ("invert", "one_minus_half_z.json", ("-K", "40", "-N", "256"), 0),
    ("invert", "density_2_5_2.json", (), 0),
    ("invert", "one_minus_z.json", (), 2),
    ("realize", "partial_fractions.json", (), 0),
    ("fourier", "realization_riesz.json", ("-K", "4"), 0),
    ("fourier", "realization_riesz.json", ("-K", "4", "--method", "quadrature"), 0),
    ("fourier", "density_abcd.json", ("-K", "4"), 0),
    ("stein", "stein.json", (), 0),
    ("superosc", "superosc_m2_a3.json", (), 0),
    ("superosc", "superosc_sweep.json", (), 0),
    ("approx", "approx.json", ("--grid", "5"), 0),
    ("invert", "malformed.json", (), 3),
    ("invert", "bad_schema.json", (), 3),
]


def _outputs(out: Path):
    files = {}
    for p in (out, Path(str(out) + ".report.json")):
        if p.exists():
            files[p.name] = p.read_bytes()
    return files


def test_criterion_9_cli_determinism():
    t0 = time.perf_counter()
    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for i, (cmd, fixture, extra, expected) in enumerate(CLI_CASES):
            runs = []
            for r in range(3):
                out = tmp / f"case{i}_run{r}.out"
                args = [cmd, "--input", str(FIX / fixture), "--output", str(out), *extra]
                if r < 2:
                    status = cli_main(args)
                else:
                    # a fresh process with a different worker count
                    env = dict(os.environ, BCW_THREADS="1")
                    status = subprocess.run(
                        [sys.executable, "-m", "bcwiener", *args], env=env, capture_output=True
                    ).returncode
                runs.append((status, {k.replace(f"_run{r}", ""): v for k, v in _outputs(out).items()}))
            statuses = {s for s, _ in runs}
            if statuses != {expected}:
                problems.append(f"{cmd} {fixture}: exit {sorted(statuses)} != {expected}")
            if not (runs[0][1] == runs[1][1] == runs[2][1]) or not runs[0][1]:
                problems.append(f"{cmd} {fixture}: outputs differ between runs")
            if expected == 0:
                result = runs[0][1].get(f"case{i}.out")
                if result is not None and cmd not in ("superosc", "approx"):
                    json.loads(result)
    elapsed = time.perf_counter() - t0
    ok = not problems
    detail = f"{len(CLI_CASES)} fixtures x 3 runs, exit codes 0/2/3 observed" if ok else "; ".join(problems)
    assert record(9, "CLI determinism and exit codes", ok, detail, elapsed)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
