import csv
import math

import numpy as np
import pytest

from contactrelapse.cubic import solve_cubic
from contactrelapse.errors import InvalidParameterError
from contactrelapse.stability import STABLE, UNSTABLE
from contactrelapse.sturm import Polynomial, count_roots
from contactrelapse.sweep import (R1, R2, R3, R4, SweepCell, SweepGrid, branch_sweep,
                                  classify_regions, contacts_for_r0, equilibrium_heatmap,
                                  r3_window_surface, region_of, write_branches_csv,
                                  write_grid_csv)
from contactrelapse.theorem import coefficients_at


@pytest.fixture(scope="module")
def diagram(relapse_params):
    return branch_sweep(relapse_params, 0.8, 1.7, (0.7, 1.15), steps=200)


def test_contacts_for_r0_hits_target(relapse_params):
    from contactrelapse import derived_rates
    c = contacts_for_r0(relapse_params, 1.2, 0.5, 1.3)
    assert derived_rates(relapse_params, c).r0 == pytest.approx(1.2)
    assert c.kappa == pytest.approx(0.5) and c.theta == pytest.approx(1.3)


@pytest.mark.parametrize("kappa, want", [(0.8, (0.85402, 1.0, 1.01168)),
                                         (0.3, (0.81049, 1.0, 1.00845))])
def test_region_boundaries(relapse_params, kappa, want):
    d = branch_sweep(relapse_params, kappa, 1.7, (0.7, 1.15), steps=100)
    assert d.region_boundaries == pytest.approx(want, abs=1e-4)


def test_regions_in_order(diagram):
    regions = classify_regions(diagram)
    collapsed = [r for k, r in enumerate(regions) if k == 0 or regions[k - 1] != r]
    assert collapsed == [R1, R2, R3, R4]


def test_no_r3_without_enough_recovered_contact(relapse_params):
    d = branch_sweep(relapse_params, 0.8, 1.2, (0.6, 1.15), steps=100)
    assert R3 not in classify_regions(d)
    assert d.region_boundaries == pytest.approx((0.69560, 1.0), abs=1e-4)


def test_branches_keep_stability_and_are_continuous(diagram):
    for b in diagram.branches:
        assert {pt.stability for pt in b.points} == {b.stability}
        steps = np.diff([pt.i_star for pt in b.points])
        assert len(steps) == 0 or np.abs(steps).max() < 0.05
    assert sorted(b.stability for b in diagram.branches) == [STABLE, STABLE, UNSTABLE]


def test_cells_agree_with_sturm_counts(relapse_params, diagram):
    for cell in diagram.cells:
        c = coefficients_at(relapse_params, cell.r0, 0.8, 1.7)
        roots = [x for x in solve_cubic(*c.as_tuple()).real if 0 < x <= 1]
        assert len(roots) == len(cell.endemic)
        assert count_roots(Polynomial(c.as_tuple()), 1e-12, 1.0) == len(cell.endemic)


def test_region_of_labels():
    mk = lambda labs: SweepCell(1.0, tuple((0.1 * k, s) for k, s in enumerate(labs)), UNSTABLE)
    assert region_of(mk([])) == R1
    assert region_of(mk([UNSTABLE, STABLE])) == R2
    assert region_of(mk([STABLE, UNSTABLE, STABLE])) == R3
    assert region_of(mk([STABLE])) == R4
    assert region_of(mk([UNSTABLE])) == "unclassified"


def test_sweep_validation(relapse_params):
    with pytest.raises(InvalidParameterError):
        branch_sweep(relapse_params, 0.8, 1.7, (1.2, 0.8))
    with pytest.raises(InvalidParameterError):
        branch_sweep(relapse_params, 0.0, 1.7)
    with pytest.raises(InvalidParameterError):
        SweepGrid(np.zeros(2), np.zeros(3), np.zeros((3, 2)))


def test_window_surface_monotone_in_kappa(relapse_params):
    g = r3_window_surface(relapse_params, resolution=(5, 3), theta_range=(1.0, 2.0))
    assert np.all(g.payload[:, 0] == 0.0)
    assert np.all(np.diff(g.payload[:, 2]) > 0)


def test_small_heatmap(relapse_params):
    g = equilibrium_heatmap(relapse_params, (0.2, 1.0), (0.0, 2.0), resolution=(2, 2),
                            horizon=2e5)
    assert g.missing == ()
    assert np.all((g.payload >= 0) & (g.payload <= 1))
    # more contact after recovery suppresses prevalence
    assert g.payload[1, 1] < g.payload[1, 0]


def test_csv_outputs_are_deterministic(tmp_path, relapse_params, diagram):
    a = write_branches_csv(diagram, tmp_path / "a.csv").read_bytes()
    again = branch_sweep(relapse_params, 0.8, 1.7, (0.7, 1.15), steps=200, workers=2)
    b = write_branches_csv(again, tmp_path / "b.csv").read_bytes()
    assert a == b
    rows = list(csv.DictReader(open(tmp_path / "a.csv")))
    assert set(rows[0]) == {"r0", "i_star", "stability", "region"}
    assert float(rows[0]["i_star"]) == 0.0


def test_grid_csv_roundtrip(tmp_path):
    g = SweepGrid(np.array([0.1, 0.2]), np.array([1.0, 1.5, 2.0]),
                  np.array([[1 / 3, 2.0, math.nan], [0.0, 1e-17, 5.0]]))
    rows = list(csv.reader(open(write_grid_csv(g, tmp_path / "g.csv"))))
    assert rows[0] == ["kappa", "theta", "payload"]
    assert float(rows[1][2]) == 1 / 3 and rows[3][2] == "nan"
    assert len(rows) == 7
