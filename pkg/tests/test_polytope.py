import numpy as np
import pytest

from entkit import states as st
from entkit import invariants as inv
from entkit import polytope as poly


def test_local_spectra_landmarks():
    assert np.allclose(poly.local_spectra(st.ghz_state(3)).lambdas, [0.5] * 3)
    assert np.allclose(poly.local_spectra(st.w_state(3)).lambdas, [1 / 3] * 3,
                       atol=1e-12)
    assert np.allclose(poly.local_spectra(st.basis_state((2, 2, 2), "000")).lambdas,
                       [0.0] * 3)


def test_local_spectra_rejects_qutrits():
    with pytest.raises(ValueError):
        poly.local_spectra(st.random_state((3, 3), 0))


def test_polygon_check_missing_corner():
    check = poly.polygon_check(poly.LocalSpectra((0.5, 0.0, 0.0)))
    assert not check.passed
    assert min(check.slacks) == pytest.approx(-0.5)


def test_polygon_check_w_point():
    check = poly.polygon_check(poly.LocalSpectra((1 / 3, 1 / 3, 1 / 3)))
    assert check.passed and not check.boundary


def test_polygon_check_random_states_always_pass():
    for i, dims in enumerate([(2,) * 3, (2,) * 4, (2,) * 5] * 40):
        s = st.random_state(dims, 30_000 + i)
        assert poly.polygon_check(poly.local_spectra(s)).passed


def test_w_pyramid_landmarks():
    assert poly.w_pyramid_test(poly.local_spectra(st.w_state(3)))
    assert not poly.w_pyramid_test(poly.local_spectra(st.ghz_state(3)))
    assert poly.w_pyramid_test(poly.LocalSpectra((0.0, 0.0, 0.0)))


def test_realize_spectra_symmetric_point():
    s = poly.realize_spectra3(1 / 3, 1 / 3, 1 / 3)
    expect = np.zeros(8)
    expect[[1, 2, 4]] = 1 / np.sqrt(6)
    expect[7] = 1 / np.sqrt(2)
    assert np.abs(s.amps - expect).max() < 1e-12


def test_realize_spectra_ghz_corner():
    s = poly.realize_spectra3(0.5, 0.5, 0.5)
    expect = np.zeros(8)
    expect[[1, 2, 4, 7]] = 0.5
    assert np.abs(s.amps - expect).max() < 1e-12


def test_realize_spectra_origin():
    s = poly.realize_spectra3(0, 0, 0)
    assert abs(abs(s.amps[7]) - 1) < 1e-12


def test_realize_spectra_errors():
    with pytest.raises(ValueError, match="triangle"):
        poly.realize_spectra3(0.5, 0.1, 0.1)
    with pytest.raises(ValueError):
        poly.realize_spectra3(0.7, 0.5, 0.5)


def test_realize_inverts_local_spectra():
    rng = np.random.default_rng(21)
    worst = 0.0
    for i in range(300):
        target = poly.local_spectra(st.random_state((2, 2, 2), 40_000 + i)).lambdas
        realized = poly.local_spectra(poly.realize_spectra3(*target)).lambdas
        worst = max(worst, np.abs(np.array(realized) - np.array(target)).max())
    assert worst < 1e-10


def test_vertex_counts():
    assert len(poly.polytope_vertices(3)) == 5
    assert len(poly.polytope_vertices(4)) == 12
    assert len(poly.polytope_vertices(5)) == 27
    with pytest.raises(ValueError):
        poly.polytope_vertices(2)


def test_vertices_pass_polygon_and_saturate_a_facet():
    # every vertex passes and sits on the polytope boundary: 0/1/2 entries
    # saturate box facets, and the weight-<=2 vertices additionally saturate
    # a polygon inequality
    for K in (3, 4, 5):
        for row in poly.polytope_vertices(K):
            check = poly.polygon_check(poly.LocalSpectra(tuple(row)))
            assert check.passed
            assert all(abs(l) < 1e-12 or abs(l - 0.5) < 1e-12 for l in row)
            if np.count_nonzero(row) <= 2:
                assert check.boundary


def test_vertex_table_consistent():
    table = poly.FOUR_QUBIT_VERTEX_TABLE
    assert len(table) == 13
    plain = {tuple(v) for v in poly.polytope_vertices(4).round(6)}
    named = {tuple(np.round(row[1], 6)) for row in table if row[0] != "V"}
    assert named == plain
    v_row = next(row for row in table if row[0] == "V")
    assert v_row[1] == (0.25, 0.5, 0.5, 0.5)
    assert poly.FOUR_QUBIT_COPY_COUNTS["P4"] == 1


def _bounded_sl2(rng):
    u = st.haar_unitary(2, rng)
    v = st.haar_unitary(2, rng)
    s = rng.uniform(0.5, 2.0)
    m = u @ np.diag([s, 1.0 / s]) @ v
    return m / np.sqrt(np.linalg.det(m))


def test_w_class_stays_in_pyramid():
    rng = np.random.default_rng(22)
    for _ in range(200):
        ops = [_bounded_sl2(rng) for _ in range(3)]
        out = st.apply_local(st.w_state(3), ops, mode="slocc")
        assert poly.w_pyramid_test(poly.local_spectra(out))


def test_pyramid_violation_certifies_ghz():
    count = 0
    for i in range(500):
        s = st.random_state((2, 2, 2), 50_000 + i)
        spectra = poly.local_spectra(s)
        if sum(spectra.lambdas) > 1 + 1e-6:
            count += 1
            assert inv.slocc_classify3(s).label == "GHZ"
    assert count > 20  # the check must actually have fired
