import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactrelapse.cubic import eigenvalues_3x3, solve_cubic, solve_quadratic
from contactrelapse.errors import InvalidParameterError


def test_three_real_roots():
    assert solve_cubic(-6, 11, -6, 1).real == pytest.approx((1, 2, 3), abs=1e-12)
    assert solve_cubic(0, -1, 0, 1).real == pytest.approx((-1, 0, 1), abs=1e-14)


def test_one_real_root_and_conjugate_pair():
    r = solve_cubic(1, 0, 0, 1)
    assert r.real == pytest.approx((-1,))
    assert sorted(r.complex, key=lambda z: z.imag) == pytest.approx(
        [complex(0.5, -np.sqrt(3) / 2), complex(0.5, np.sqrt(3) / 2)])


def test_repeated_roots_are_merged_and_flagged():
    r = solve_cubic(-2, 5, -4, 1)   # (x-1)^2 (x-2)
    assert r.real == pytest.approx((1, 2), abs=1e-7)
    assert r.degenerate


def test_falls_back_to_quadratic():
    assert solve_cubic(-1, 0, 1, 1e-15).real == pytest.approx((-1, 1))
    assert solve_quadratic(1, 0, 1).complex


def test_rejects_all_zero():
    with pytest.raises(InvalidParameterError):
        solve_cubic(0, 0, 0, 0)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_roots_agree_with_companion_matrix(roots):
    roots = sorted(roots)
    if min(b - a for a, b in zip(roots, roots[1:])) < 1e-3:
        return
    c = np.poly(roots)  # descending
    got = solve_cubic(c[3], c[2], c[1], c[0]).real
    assert got == pytest.approx(roots, abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_eigenvalues_agree_with_lapack(vals):
    m = np.array(vals).reshape(3, 3)
    got = sorted(eigenvalues_3x3(m.tolist()), key=lambda z: (round(z.real, 6), z.imag))
    want = sorted(np.linalg.eigvals(m), key=lambda z: (round(z.real, 6), z.imag))
    scale = max(1.0, np.abs(m).max())
    # eigenvalues of defective matrices are only sqrt(eps)-conditioned
    assert np.allclose(got, want, atol=1e-5 * scale)
