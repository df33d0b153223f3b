"""Acceptance criteria 1-10, each reported as one PASS/FAIL line.

The lines are printed as each test finishes (visible with ``-s``) and again
in the terminal summary at the end of the run.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import SPECS, random_d_element
from lcsk.algebras import abelian, cur_sl2, neveu_schwarz, virasoro
from lcsk.cli import main
from lcsk.conformal_maps import (
    bracket_map,
    identity_map,
    lift_linear,
    solve_biderivations,
    solve_centroid,
    solve_commuting,
    verify_centralizer_residual,
    verify_centroid_form,
    verify_commuting_in_centroid,
    verify_current_decomposition,
    verify_polarization,
    verify_swap_identity,
)
from lcsk.current import product_algebra, quotient_poly_algebra, tensor_current
from lcsk.lcs import bracket, bracket_termwise, check_jacobi, check_skew
from lcsk.linsolve import solve_combination
from lcsk.polyring import SPoly
from lcsk.specfile import AlgebraSpecFile, CoefficientSpec, parse_spec, render_spec

RESULTS: dict[int, str] = {}

BUILTINS = {"Virasoro": virasoro, "Neveu-Schwarz": neveu_schwarz, "Cur(sl2)": cur_sl2,
            "abelian2": lambda: abelian(2)}


def record(n: int, ok: bool, summary: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {summary}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def spans(cols, target) -> bool:
    return solve_combination(cols, target) is not None


@pytest.fixture(scope="module")
def vir_solutions():
    V = virasoro()
    return V, solve_centroid(V, 3), solve_biderivations(V, 3, 3)


@pytest.fixture(scope="module")
def vir_t2_solutions():
    A = quotient_poly_algebra(2)
    LA = tensor_current(virasoro(), A)
    return A, LA, solve_centroid(LA, 3), solve_biderivations(LA, 3, 3)


def test_criterion_01_axiom_suite():
    start = time.perf_counter()
    algebras = [f() for f in BUILTINS.values()]
    algebras += [tensor_current(virasoro(), quotient_poly_algebra(N)) for N in (2, 3)]
    failures = [a.name for a in algebras if check_skew(a).residuals or check_jacobi(a).residuals]
    elapsed = time.perf_counter() - start
    record(1, not failures and elapsed < 5,
           f"{len(algebras)} algebras, failures={failures}, {elapsed:.2f}s (limit 5s)")


def test_criterion_02_tensor_preserves_axioms():
    coeffs = [quotient_poly_algebra(N) for N in (1, 2, 3)] + [product_algebra(2)]
    bad = []
    for name, make in BUILTINS.items():
        for A in coeffs:
            LA = tensor_current(make(), A)
            if not (check_skew(LA).passed and check_jacobi(LA).passed):
                bad.append(f"{name}(x){A.name}")
    record(2, not bad, f"{len(BUILTINS) * len(coeffs)} pairs, failures={bad}")


def test_criterion_03_virasoro_centroid_form():
    start = time.perf_counter()
    V = virasoro()
    cent, bider = solve_centroid(V, 3), solve_biderivations(V, 3, 3)
    rep = verify_centroid_form(V, 3, 3, cent=cent, bider=bider)
    elapsed = time.perf_counter() - start
    # the decomposition is phi = c * (id o bracket), with c read off independently
    phi = bider.maps[0] if bider.maps else None
    c = solve_combination([bracket_map(V).vector()], phi.vector()) if phi else None
    ok = (bider.dimension == cent.dimension == 1 and rep.passed and c is not None and c[0] != 0
          and spans([identity_map(V).vector()], cent.maps[0].vector()) and elapsed < 10)
    record(3, ok, f"dim BDer={bider.dimension}, dim Cent={cent.dimension}, centroid-form={rep.status}, "
                  f"c={c[0] if c else None}, {elapsed:.2f}s (limit 10s)")


def test_criterion_04_current_theorem():
    start = time.perf_counter()
    A = quotient_poly_algebra(2)
    LA = tensor_current(virasoro(), A)
    cent, bider = solve_centroid(LA, 3), solve_biderivations(LA, 3, 3)
    form = verify_centroid_form(LA, 3, 3, cent=cent, bider=bider)
    dec = verify_current_decomposition(virasoro(), A, 3, 3, bider=bider)
    lifts = [lift_linear(identity_map(virasoro()), A, A.basis(t), LA).vector() for t in range(2)]
    cols = [m.vector() for m in cent.maps]
    spanning = all(spans(cols, v) for v in lifts) and all(spans(lifts, v) for v in cols)
    elapsed = time.perf_counter() - start
    ok = bider.dimension == cent.dimension == 2 and form.passed and dec.passed and spanning and elapsed < 60
    record(4, ok, f"dim BDer={bider.dimension}, dim Cent={cent.dimension}, centroid-form={form.status}, "
                  f"current-decomposition={dec.status}, spans {{id, t}}={spanning}, {elapsed:.2f}s (limit 60s)")


def test_criterion_05_swap_and_centralizer(vir_solutions, vir_t2_solutions):
    _, _, bider_v = vir_solutions
    _, _, _, bider_t = vir_t2_solutions
    maps = bider_v.maps + bider_t.maps
    swap = [verify_swap_identity(phi) for phi in maps]
    resid = [verify_centralizer_residual(phi) for phi in maps]
    zero = all(r.passed and r.details["center_dimension"] == 0 for r in resid)
    ok = bool(maps) and all(r.passed for r in swap) and zero
    record(5, ok, f"{len(maps)} biderivations, swap-identity all pass={all(r.passed for r in swap)}, "
                  f"centralizer residual identically zero={zero}")


def test_criterion_06_commuting_maps(vir_t2_solutions):
    V = virasoro()
    comm = solve_commuting(V, 3)
    outputs_ok = all(verify_polarization(p).passed for p in comm.maps)
    idrep = verify_polarization(identity_map(V))
    lam, mu, d = SPoly.var("lam"), SPoly.var("mu"), SPoly.var("d")
    expected = 2 * (d + 2 * lam + 2 * mu)
    id_fails = (not idrep.passed and len(idrep.residuals) == 1
                and idrep.residuals[0][1].coeffs[0] == expected)
    _, LA, cent_t, _ = vir_t2_solutions
    in_cent = [verify_commuting_in_centroid(V, 3), verify_commuting_in_centroid(LA, 3, cent=cent_t)]
    ok = comm.dimension == 0 and outputs_ok and id_fails and all(r.passed for r in in_cent)
    record(6, ok, f"dim Comm(Vir)={comm.dimension}, id residual="
                  f"{idrep.residuals[0][1].render() if idrep.residuals else None}, "
                  f"commuting-in-centroid={[r.status for r in in_cent]}")


def test_criterion_07_neveu_schwarz_pipeline(capsys):
    code = main(["verify-all", str(SPECS / "neveu_schwarz.lcs"), "--deg-d", "3", "--deg-l", "3"])
    capsys.readouterr()
    ns = neveu_schwarz()
    cent, bider = solve_centroid(ns, 3), solve_biderivations(ns, 3, 3)
    rep = verify_centroid_form(ns, 3, 3, cent=cent, bider=bider)
    exact = len(rep.decompositions) == bider.dimension
    ok = code == 0 and bider.dimension == cent.dimension and rep.passed and exact
    record(7, ok, f"verify-all exit={code}, dim BDer={bider.dimension}, dim Cent={cent.dimension}, "
                  f"centroid-form={rep.status}")


def test_criterion_08_differential_oracle():
    rng = random.Random(2024)
    lam, mu = SPoly.var("lam"), SPoly.var("mu")
    counts, mismatches = {}, []
    for name, make in BUILTINS.items():
        alg = make()
        n = 0
        for _ in range(100):
            x, y = random_d_element(alg, rng, 3), random_d_element(alg, rng, 3)
            for at in ("lam", lam + mu):
                if bracket(x, y, at) != bracket_termwise(x, y, at):
                    mismatches.append(name)
            n += 1
        counts[name] = n
    record(8, not mismatches and min(counts.values()) >= 100,
           f"pairs per algebra={counts}, mismatches={len(mismatches)}")


def test_criterion_09_monotonicity():
    V = virasoro()
    cents, biders = [], []
    for k in (1, 2, 3, 4):
        cents.append(solve_centroid(V, k).dimension)
        biders.append(solve_biderivations(V, k, k).dimension)

    def good(dims):
        return all(a <= b for a, b in zip(dims, dims[1:])) and len(set(dims[1:])) == 1

    record(9, good(cents) and good(biders), f"centroid dims={cents}, biderivation dims={biders}")


def _fuzz_spec(rng: random.Random) -> AlgebraSpecFile:
    names = rng.sample(["L", "G", "H", "E", "F1"], rng.randint(0, 3))
    par = {g: rng.choice(["even", "odd"]) for g in names}
    d, lam = SPoly.var("d"), SPoly.var("lam")
    brackets = {}
    for a in names:
        for b in names:
            want = "odd" if par[a] != par[b] else "even"
            entry = {}
            for g in names:
                if par[g] == want and rng.random() < 0.5:
                    p = sum((Fraction(rng.randint(-9, 9), rng.randint(1, 5)) * d ** rng.randint(0, 3)
                             * lam ** rng.randint(0, 3) for _ in range(rng.randint(1, 3))), SPoly.zero())
                    if p:
                        entry[g] = p
            if entry:
                brackets[(a, b)] = entry
    coeffs = CoefficientSpec(quotient=rng.randint(1, 4)) if rng.random() < 0.3 else None
    bounds = {k: rng.randint(0, 5) for k in ("deg_d", "deg_l") if rng.random() < 0.5}
    return AlgebraSpecFile(f"fuzz{rng.randint(0, 999)}", tuple((g, par[g]) for g in names),
                           brackets, coeffs, bounds)


def test_criterion_10_cli_contract(capsys):
    shipped = sorted(SPECS.glob("*.lcs"))
    round_trip_fail = []
    for path in shipped:
        spec = parse_spec(path.read_text())
        if parse_spec(render_spec(spec)) != spec:
            round_trip_fail.append(path.name)
    rng = random.Random(10)
    for i in range(100):
        spec = _fuzz_spec(rng)
        if parse_spec(render_spec(spec)) != spec:
            round_trip_fail.append(f"fuzz#{i}")
    centerless = ["virasoro.lcs", "neveu_schwarz.lcs", "cur_sl2.lcs", "virasoro_t2.lcs", "virasoro_qxq.lcs"]
    codes = {name: main(["verify-all", str(SPECS / name)]) for name in centerless}
    corrupted = main(["verify-all", str(SPECS / "corrupted_virasoro.lcs")])
    capsys.readouterr()
    ok = not round_trip_fail and all(c == 0 for c in codes.values()) and corrupted != 0
    record(10, ok, f"round-trip failures={round_trip_fail} ({len(shipped)} shipped + 100 fuzzed), "
                   f"verify-all exits={codes}, corrupted exit={corrupted}")
