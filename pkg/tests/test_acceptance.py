"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Criterion 12's volume-law half is known-red: the mean
reduction entropy of random states converges to the exact Page average,
which sits a fixed 0.5 * N^-K above the asymptotic formula the library
implements; at the mandated sample sizes that systematic gap exceeds three
standard errors (see the decisions ledger).  The test asserts the criterion
as stated and reports both distances.
"""

import time

import numpy as np

from entkit import states as st
from entkit import invariants as inv
from entkit import stellar as sl
from entkit import polytope as poly
from entkit import uniformity as un
from entkit import codes as cd
from entkit import mps as mp


def _finish(num, desc, t0, limit, ok, detail=""):
    elapsed = time.time() - t0
    verdict = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"ACCEPTANCE {num:2d} {verdict}  ({elapsed:6.2f}s < {limit:g}s)  {desc}"
          + (f"  [{detail}]" if detail else ""))
    assert ok, f"criterion {num}: {desc} {detail}"
    assert elapsed < limit, f"criterion {num} exceeded {limit}s ({elapsed:.1f}s)"


def _bounded_sl2(rng):
    u = st.haar_unitary(2, rng)
    v = st.haar_unitary(2, rng)
    s = rng.uniform(0.5, 2.0)
    m = u @ np.diag([s, 1.0 / s]) @ v
    return m / np.sqrt(np.linalg.det(m))


def test_acceptance_01_lu_invariant_table():
    t0 = time.time()
    rows = [
        (st.basis_state((2, 2, 2), "000"), (1, 1, 1, 1, 0)),
        (st.new_state((2, 2, 2), [1, 0, 0, 1, 0, 0, 0, 0]), (1, .5, .5, .25, 0)),
        (st.new_state((2, 2, 2), [1, 0, 0, 0, 0, 1, 0, 0]), (.5, 1, .5, .25, 0)),
        (st.new_state((2, 2, 2), [1, 0, 0, 0, 0, 0, 1, 0]), (.5, .5, 1, .25, 0)),
        (st.w_state(3), (5 / 9, 5 / 9, 5 / 9, 2 / 9, 0)),
        (st.ghz_state(3), (.5, .5, .5, .25, .25)),
    ]
    worst = 0.0
    for state, expected in rows:
        li = inv.lu_invariants(state)
        got = np.array([li.i2, li.i3, li.i4, li.i5, li.i6])
        worst = max(worst, np.abs(got - np.array(expected)).max())
    _finish(1, "LU-invariant table reproduced for all six rows", t0, 1.0,
            worst < 1e-10, f"worst dev {worst:.2e}")


def test_acceptance_02_slocc_table_stability():
    t0 = time.time()
    rng = np.random.default_rng(101)
    reps = [
        (st.basis_state((2, 2, 2), "000"), "Separable", (1, 1, 1)),
        (st.new_state((2, 2, 2), [1, 0, 0, 1, 0, 0, 0, 0]), "BisepA", (1, 2, 2)),
        (st.new_state((2, 2, 2), [1, 0, 0, 0, 0, 1, 0, 0]), "BisepB", (2, 1, 2)),
        (st.new_state((2, 2, 2), [1, 0, 0, 0, 0, 0, 1, 0]), "BisepC", (2, 2, 1)),
        (st.w_state(3), "W", (2, 2, 2)),
        (st.ghz_state(3), "GHZ", (2, 2, 2)),
    ]
    ok = True
    for state, label, ranks in reps:
        cls = inv.slocc_classify3(state)
        ok &= cls.label == label and cls.local_ranks == ranks
        for _ in range(100):
            out = st.apply_local(state, [_bounded_sl2(rng) for _ in range(3)],
                                 mode="slocc")
            moved = inv.slocc_classify3(out)
            ok &= moved.label == label and moved.local_ranks == ranks
    _finish(2, "SLOCC table stable under 100 unit-det maps per class", t0, 10.0, ok)


def test_acceptance_03_monogamy_and_tangle_cross_check():
    t0 = time.time()
    rng = np.random.default_rng(103)
    worst_resid = 0.0
    worst_gap = 0.0
    for _ in range(10_000):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        s = st.new_state((2, 2, 2), v)
        tr = inv.tangle_report(s)
        worst_resid = min(worst_resid, min(tr.monogamy_residuals))
        worst_gap = max(worst_gap,
                        abs(tr.tau3 - 4 * abs(inv.hyperdeterminant3(s.amps))))
    ok = worst_resid >= -1e-9 and worst_gap <= 1e-7
    _finish(3, "monogamy residuals and 3-tangle cross-check on 1e4 samples",
            t0, 30.0, ok, f"min resid {worst_resid:.1e}, max gap {worst_gap:.1e}")


def test_acceptance_04_mean_three_tangle():
    t0 = time.time()
    rng = np.random.default_rng(104)
    n = 200_000
    v = rng.standard_normal((n, 8)) + 1j * rng.standard_normal((n, 8))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    tau3 = 4.0 * np.abs(inv.hyperdeterminant3(v))
    mean = float(tau3.mean())
    ok = abs(mean - 1 / 3) <= 0.005
    _finish(4, "mean 3-tangle over 2e5 Fubini-Study samples is 1/3", t0, 120.0,
            ok, f"mean {mean:.5f}")


def test_acceptance_05_qk_closed_forms():
    t0 = time.time()
    ok = True
    worst = 0.0
    for K in range(2, 11):
        for k in range(1, min(5, K // 2) + 1):
            ghz = abs(un.q_measure(st.ghz_state(K), k) - 2 ** (k - 1) / (2 ** k - 1))
            w = abs(un.q_measure(st.w_state(K), k)
                    - 2 ** (k + 1) * (K - k) * k / ((2 ** k - 1) * K ** 2))
            worst = max(worst, ghz, w)
    ok &= worst < 1e-10
    w6 = st.w_state(6)
    q1, q2, q3 = (un.q_measure(w6, k) for k in (1, 2, 3))
    ok &= q1 < q3 < q2
    _finish(5, "Q_k closed forms (K<=10, k<=5) and W6 ordering", t0, 10.0, ok,
            f"worst dev {worst:.2e}")


def test_acceptance_06_ame_verification():
    t0 = time.time()
    a52 = un.ame52_state()
    stab = un.stabilizer_check(a52, un.AME52_GENERATORS)
    ok = all(abs(v - 1) <= 1e-10 for v in stab)
    ok &= un.k_uniform_level(a52) == 2
    ok &= un.k_uniform_level(un.ame43_state()) == 2
    for s in (un.catalog_state("ghz", 4), un.catalog_state("w", 4),
              un.catalog_state("dicke", 4, 2)):
        ok &= not un.uniformity_report(s).is_ame
    _finish(6, "AME(5,2) stabilizers, uniformity levels, no 4-qubit AME",
            t0, 10.0, ok)


def test_acceptance_07_error_correction():
    t0 = time.time()
    ham = cd.hamming_code()
    rep = cd.repetition_code()
    ok = cd.min_distance(ham) == 3 and cd.min_distance(rep) == 3
    ok &= "".join(map(str, cd.encode(ham, "0101"))) == "0101010"
    cw = cd.encode(ham, "0101")
    for pos in range(7):
        r = cw.copy()
        r[pos] ^= 1
        res = cd.syndrome_decode_weight1(ham, r)
        ok &= res.correctable and res.error_position == pos \
            and np.array_equal(res.codeword, cw)
    kl52 = cd.knill_laflamme_check(un.ame52_state(), 1)
    kl43 = cd.knill_laflamme_check(un.ame43_state(), 1)
    kl_bad = cd.knill_laflamme_check(st.basis_state((2,) * 5, "00000"), 1)
    ok &= kl52.passed and kl52.worst_violation <= 1e-9
    ok &= kl43.passed and kl43.worst_violation <= 1e-9
    ok &= not kl_bad.passed
    _finish(7, "Hamming/repetition codes and Knill-Laflamme checks", t0, 30.0,
            ok, f"KL violations {kl52.worst_violation:.1e}, {kl43.worst_violation:.1e}")


def test_acceptance_08_polytope():
    t0 = time.time()
    ok = np.allclose(poly.local_spectra(st.ghz_state(3)).lambdas, [.5] * 3,
                     atol=1e-10)
    ok &= np.allclose(poly.local_spectra(st.w_state(3)).lambdas, [1 / 3] * 3,
                      atol=1e-10)
    ok &= np.allclose(poly.local_spectra(st.basis_state((2, 2, 2), "000")).lambdas,
                      [0] * 3, atol=1e-10)
    rng = np.random.default_rng(108)
    for i in range(10_000):
        K = int(rng.integers(3, 6))
        v = rng.standard_normal(2 ** K) + 1j * rng.standard_normal(2 ** K)
        s = st.new_state((2,) * K, v)
        if not poly.polygon_check(poly.local_spectra(s)).passed:
            ok = False
            break
    worst = 0.0
    for i in range(1000):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        target = poly.local_spectra(st.new_state((2, 2, 2), v)).lambdas
        back = poly.local_spectra(poly.realize_spectra3(*target)).lambdas
        worst = max(worst, np.abs(np.array(back) - np.array(target)).max())
    ok &= worst < 1e-10
    ok &= [len(poly.polytope_vertices(K)) for K in (3, 4, 5)] == [5, 12, 27]
    _finish(8, "polytope landmarks, 1e4 polygon checks, 1e3 realizations, "
               "vertex counts", t0, 60.0, ok, f"worst inversion {worst:.1e}")


def test_acceptance_09_stellar():
    t0 = time.time()
    types = [sl.degeneracy_type(sl.to_constellation(sl.symmetric_from_pure(s)))
             for s in (st.basis_state((2, 2, 2), "000"), st.w_state(3),
                       st.ghz_state(3))]
    ok = types == [(3,), (2, 1), (1, 1, 1)]
    rng = np.random.default_rng(109)
    stars = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    canon = sl.orbit_canonical(sl.cross_ratio(*stars))
    worst_cr = 0.0
    for _ in range(1000):
        m = sl.MobiusMap(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
        moved = [m(z) for z in stars]
        worst_cr = max(worst_cr,
                       abs(sl.orbit_canonical(sl.cross_ratio(*moved)) - canon))
    ok &= worst_cr <= 1e-9
    tet = sl.from_constellation(
        [0, np.sqrt(2), np.sqrt(2) * np.exp(2j * np.pi / 3),
         np.sqrt(2) * np.exp(-2j * np.pi / 3)])
    fi = sl.form_invariants(sl.form_from_sym(tet), 4)
    ok &= abs(fi.i1) <= 1e-10 and abs(fi.i2) > 1e-3
    worst_syz = 0.0
    for _ in range(1000):
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        worst_syz = max(worst_syz, sl.form_invariants(a, 3).syzygy_residual)
    ok &= worst_syz <= 1e-8
    ok &= sl.partition_count(3) == 3 and sl.partition_count(4) == 5
    ok &= abs(sl.hardy_ramanujan(100) / sl.partition_count(100) - 1) < 0.1
    _finish(9, "stellar types, cross-ratio invariance, tetrahedral quartic, "
               "syzygy, partitions", t0, 30.0, ok,
            f"cr dev {worst_cr:.1e}, syzygy {worst_syz:.1e}")


def test_acceptance_10_mps_core():
    t0 = time.time()
    ok = True
    for K in range(4, 13):
        ok &= mp.from_dense(st.ghz_state(K)).bond_dims == (2,) * (K - 1)
        ok &= mp.from_dense(st.w_state(K)).bond_dims == (2,) * (K - 1)
    worst_res = 0.0
    worst_fid = 1.0
    rng = np.random.default_rng(110)
    for i in range(100):
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        s = st.new_state((2,) * 8, v)
        m = mp.from_dense(s)
        worst_res = max(worst_res, mp.check_canonical(m).max_residual)
        worst_fid = min(worst_fid, abs(mp.to_dense(m).overlap(s)) ** 2)
    ok &= worst_res <= 1e-10 and worst_fid >= 1 - 1e-10
    trunc, _ = mp.truncate(mp.from_dense(st.ghz_state(8)), 1)
    ov = abs(mp.to_dense(trunc).overlap(st.ghz_state(8))) ** 2
    ok &= abs(ov - 0.5) <= 1e-10
    s = st.new_state((2,) * 8, rng.standard_normal(256) + 1j * rng.standard_normal(256))
    m = mp.from_dense(s)
    D = 8
    t8, _ = mp.truncate(m, D)
    best = abs(mp.to_dense(t8).overlap(s)) ** 2
    flat = s.amps.reshape(16, 16)
    beaten = False
    for _ in range(1000):
        a = rng.standard_normal((16, D)) + 1j * rng.standard_normal((16, D))
        b = rng.standard_normal((D, 16)) + 1j * rng.standard_normal((D, 16))
        cand = a @ b
        cand /= np.linalg.norm(cand)
        if abs(np.vdot(cand, flat)) ** 2 > best + 1e-12:
            beaten = True
    ok &= not beaten
    _finish(10, "MPS ranks, canonical residuals, round trips, Eckart-Young",
            t0, 60.0, ok, f"resid {worst_res:.1e}, fid gap {1 - worst_fid:.1e}")


def test_acceptance_11_dmrg():
    t0 = time.time()
    ok = True
    detail = []
    for g in (0.5, 1.0, 1.5):
        ham = mp.ising_hamiltonian(8, g)
        res = mp.dmrg_ground_state(ham, 16, tol=1e-12, seed=111)
        exact = float(np.linalg.eigvalsh(mp.dense_hamiltonian(ham))[0])
        ok &= abs(res.energy - exact) < 1e-8
        ok &= bool(np.all(np.diff(res.rayleigh_history) <= 1e-12))
        detail.append(f"g={g}: {abs(res.energy - exact):.1e}")
    _finish(11, "DMRG matches exact diagonalization for K=8 Ising", t0, 60.0,
            ok, ", ".join(detail))


def test_acceptance_12_volume_vs_area():
    t0 = time.time()
    rng = np.random.default_rng(112)
    samples = 1000
    ent = {x: np.empty(samples) for x in range(1, 7)}
    for i in range(samples):
        v = rng.standard_normal(4096) + 1j * rng.standard_normal(4096)
        v /= np.linalg.norm(v)
        for x in ent:
            m = v.reshape(2 ** x, -1)
            lam = np.clip(np.linalg.eigvalsh(m @ m.conj().T), 0, None)
            lam = lam[lam > 0]
            ent[x][i] = -(lam * np.log(lam)).sum()
    def exact_page(m, n):
        return sum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)
    volume_ok = True
    details = []
    for x, vals in ent.items():
        se = vals.std(ddof=1) / np.sqrt(samples)
        dev_formula = abs(vals.mean() - st.page_expected_entropy(x, 12 - x, 2))
        dev_exact = abs(vals.mean() - exact_page(2 ** x, 2 ** (12 - x)))
        details.append(f"|X|={x}: {dev_formula / se:.1f} se (exact-Page ref: "
                       f"{dev_exact / se:.1f} se)")
        if dev_formula > 3 * se:
            volume_ok = False
    cap_ok = True
    for _ in range(25):
        m = mp.random_mps(20, 2, 4, rng.integers(0, 2 ** 63))
        for bond in range(19):
            if mp.entanglement_entropy(m, bond) > np.log(4) + 1e-12:
                cap_ok = False
    ok = volume_ok and cap_ok
    print("\n".join("    " + d for d in details))
    print(f"    D=4 entropy cap: {'PASS' if cap_ok else 'FAIL'}")
    _finish(12, "mean reduction entropy within 3 SE of the asymptotic Page "
                "formula; D=4 MPS capped at ln 4", t0, 120.0, ok)


def test_acceptance_13_identity_suite():
    t0 = time.time()
    rng = np.random.default_rng(113)
    ok = True
    worst = 0.0
    for _ in range(1000):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        s = st.new_state((2, 2, 2), v)
        i5 = inv.kempe_invariant(s)
        rho_bc = st.partial_trace(s, (1, 2)).entries
        pt = rho_bc.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        worst = max(worst, abs(i5 - np.trace(np.linalg.matrix_power(pt, 3)).real))
        for pair, a, b in [((0, 1), 0, 1), ((0, 2), 0, 2), ((1, 2), 1, 2)]:
            rho_ab = st.partial_trace(s, pair).entries
            ra = st.partial_trace(s, (a,)).entries
            rb = st.partial_trace(s, (b,)).entries
            split = (3 * np.trace(np.kron(ra, rb) @ rho_ab).real
                     - np.trace(np.linalg.matrix_power(ra, 3)).real
                     - np.trace(np.linalg.matrix_power(rb, 3)).real)
            worst = max(worst, abs(i5 - split))
        for site in range(3):
            rho = st.partial_trace(s, (site,)).entries
            t1 = np.trace(rho).real
            t2 = np.trace(rho @ rho).real
            t3 = np.trace(rho @ rho @ rho).real
            syz = abs(2 * t3 - (3 * t1 * t2 - t1 ** 3))
            ok &= syz < 1e-10
    ok &= worst < 1e-9
    _finish(13, "Kempe partial-transpose form, splitting identities, trace "
                "syzygy on 1e3 states", t0, 10.0, ok, f"worst {worst:.1e}")
