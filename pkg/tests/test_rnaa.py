import math
from dataclasses import replace

import pytest

from autoqec import codes, css, rnaa
from autoqec.codes import CodeError
from autoqec.config import CYCLE_TIME_R4_S, DEFAULT, SPACING_CALIBRATED_UM
from autoqec.gf2 import BitMatrix


@pytest.fixture(scope="module")
def q3():
    return css.hgps(3)


@pytest.fixture(scope="module")
def q4():
    return css.hgps(4)


@pytest.fixture(scope="module")
def rep_square():
    rep = codes.make_code(BitMatrix([[1, 1, 1]]), BitMatrix([[1, 1, 0], [0, 1, 1]]))
    return css.hgp(rep, rep)


def test_move_time_formula():
    assert rnaa.move_time(0.0) == 0.0
    # 2 sqrt(1e-4 m / 5500 m/s^2), evaluated independently
    assert rnaa.move_time(100.0) == pytest.approx(2.0 * math.sqrt(1e-4 / 5.5e3), rel=1e-12)
    assert rnaa.move_time(100.0) == pytest.approx(2.6968e-4, rel=1e-4)
    assert rnaa.move_time(400.0) == pytest.approx(2 * rnaa.move_time(100.0), rel=1e-12)
    with pytest.raises(ValueError):
        rnaa.move_time(-1.0)


def test_layout_positions_distinct(q3):
    layout = rnaa.grid_layout(q3)
    assert len(layout.positions) == 2 * 49 + 2 * 49
    with pytest.raises(ValueError):
        rnaa.LayoutModel(positions={("q", 0): (0, 0), ("q", 1): (0, 0)}, spacing=1.0)
    with pytest.raises(ValueError):
        rnaa.LayoutModel(positions={("q", 0): (0, 0)}, spacing=0.0)


def apply_plan_checking(plan: rnaa.MovementPlan, layout: rnaa.LayoutModel) -> dict:
    pos = dict(layout.positions)
    for step in plan.steps:
        assert rnaa.step_is_aod_compatible(pos, step)
        for q, (dx, dy) in step.displacements.items():
            x, y = pos[q]
            pos[q] = (x + dx, y + dy)
    return pos


def test_schedule_coverage_and_order(q3):
    plan = rnaa.syndrome_schedule(q3)  # coverage + X-before-Z verified inside
    pairs = sum(len(s.gate_pairs) for s in plan.steps)
    assert pairs == q3.HX.nnz() + q3.HZ.nnz()
    layout = rnaa.grid_layout(q3)
    final = apply_plan_checking(plan, layout)
    assert all(
        final[q] == pytest.approx(layout.positions[q]) for q in layout.positions
    )  # collectives return home: qubits conserved
    measured = [s for s in plan.steps if s.measure]
    assert len(measured) == 1 and len(measured[0].measure) == 2 * 49


def test_schedule_requires_product_structure(q3):
    stripped = css.CssCode(
        HX=q3.HX, HZ=q3.HZ, GX=q3.GX, GZ=q3.GZ, n=q3.n, k=q3.k,
        sector_split=q3.sector_split,
    )
    with pytest.raises(CodeError):
        rnaa.syndrome_schedule(stripped)


def test_schedule_rejects_unstructured_checks():
    c1 = codes.make_code(BitMatrix([[1, 1, 1]]))  # nullspace H is not banded
    q = css.hgp(c1, c1)
    with pytest.raises(CodeError):
        rnaa.syndrome_schedule(q)


def test_calibrated_spacing_is_frozen_constant(q4):
    assert rnaa.calibrate_spacing(q4, CYCLE_TIME_R4_S) == pytest.approx(
        SPACING_CALIBRATED_UM, rel=1e-12
    )


def test_cycle_times_calibrated_and_monotone(q3, q4):
    t4 = rnaa.syndrome_schedule(q4).total
    assert t4 == pytest.approx(CYCLE_TIME_R4_S, rel=1e-9)
    t3 = rnaa.syndrome_schedule(q3).total
    assert t3 < t4  # smaller grid, strictly faster


def test_cycle_time_monotone_in_spacing(q3):
    t1 = rnaa.syndrome_schedule(q3, cfg=replace(DEFAULT, spacing_um=10.0)).total
    t2 = rnaa.syndrome_schedule(q3, cfg=replace(DEFAULT, spacing_um=20.0)).total
    assert t1 < t2


def test_zoned_measurement_adds_transport(q3):
    base = rnaa.syndrome_schedule(q3).total
    zoned = rnaa.syndrome_schedule(q3, cfg=replace(DEFAULT, zoned_measurement=True)).total
    assert zoned > base


def test_local_schedule_on_repetition_product(rep_square):
    plan = rnaa.syndrome_schedule(rep_square)
    x_layers = [s for s in plan.steps if s.gate_pairs and s.label.startswith("x")]
    z_layers = [s for s in plan.steps if s.gate_pairs and s.label.startswith("z")]
    assert len(x_layers) == 4 and len(z_layers) == 4  # weight-4 checks
    # nearest-neighbor stops only: every inter-stop move within one lattice step
    s = plan.meta["spacing_um"]
    gap = DEFAULT.interblock_gap_units
    for step in x_layers + z_layers:
        if step.displacements:
            dx, dy = next(iter(step.displacements.values()))
            assert math.hypot(dx, dy) <= (3 + gap) * s + 1e-9


def test_plan_json_export(q3):
    plan = rnaa.syndrome_schedule(q3)
    blob = plan.to_json_dict()
    assert blob["total_s"] == pytest.approx(plan.total)
    assert len(blob["steps"]) == len(plan.steps)
    assert blob["steps"][0]["moves_um"]


def test_fold_rearrangement_matches_permutation():
    from autoqec import cqlu

    layout = rnaa.default_fold_layout()
    plan = rnaa.autocnot_rearrangement(layout)
    assert len(plan.steps) == 3
    assert plan.total <= 2.4e-3
    final = apply_plan_checking(plan, layout)
    s = layout.spacing
    # position map restricted to the 15 nonzero cells equals the fold gadget
    fold = cqlu.auto_permutation()
    for j in range(15):
        got = final[("q", j + 1)]
        assert got[0] == pytest.approx((fold(j) + 1) * s)
        assert got[1] == pytest.approx(0.0)


def test_shift_rearrangement(q4):
    plan = rnaa.dirty_shift_rearrangement(offset=1)
    assert plan.total <= 1.2e-3
    layout = rnaa.default_shift_layout()
    final = apply_plan_checking(plan, layout)
    order = [q[1] for q in sorted(final, key=lambda q: final[q][0])]
    assert order == [(i + 1) % 15 for i in range(15)]
    empty = rnaa.dirty_shift_rearrangement(offset=0)
    assert empty.total == 0.0 and not empty.steps


def test_aod_compatibility_checker_rejects_crossings():
    pos = {("q", 0): (0.0, 0.0), ("q", 1): (1.0, 0.0)}
    bad = rnaa.MoveStep(
        displacements={("q", 0): (2.0, 0.0), ("q", 1): (-2.0, 0.0)}, group_axis="rigid"
    )
    assert not rnaa.step_is_aod_compatible(pos, bad)
    ok = rnaa.MoveStep(
        displacements={("q", 0): (2.0, 0.0), ("q", 1): (2.0, 0.0)}, group_axis="rigid"
    )
    assert rnaa.step_is_aod_compatible(pos, ok)
