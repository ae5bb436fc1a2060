"""Atom-array timing model: grid layouts, collective-move syndrome
schedules, and the fold/shift rearrangement plans.

Distance l (um) costs 2 sqrt(l / a) seconds at acceleration a. One check
collective moves at a time (globally synchronous steps). A step declares
how its moved atoms are grouped (whole set rigid, or per starting row /
column); within each group the coordinate order must be preserved, which
is what the tweezer rows and columns can realize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codes import CodeError
from .config import DEFAULT, Config
from .css import CssCode
from .gf2 import BitMatrix

Qubit = tuple


def move_time(l_um: float, acceleration: float = 5.5e3) -> float:
    """Seconds to move a distance of l_um micrometers: 2 sqrt(l / a)."""
    if l_um < 0:
        raise ValueError("negative distance")
    return 2.0 * math.sqrt(l_um * 1e-6 / acceleration)


@dataclass(frozen=True)
class LayoutModel:
    """Static positions (um) for every qubit label."""

    positions: dict[Qubit, tuple[float, float]]
    spacing: float
    zones: dict[Qubit, str] | None = None

    def __post_init__(self) -> None:
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")
        if len(set(self.positions.values())) != len(self.positions):
            raise ValueError("positions must be distinct")


@dataclass(frozen=True)
class MoveStep:
    """One synchronous step: a grouped move, then gates, then measurements.

    group_axis: 'rigid' moves the whole set as one translation; 'x'
    picks atoms per starting column, 'y' per starting row.
    """

    displacements: dict[Qubit, tuple[float, float]]
    gate_pairs: tuple[tuple[Qubit, Qubit], ...] = ()
    measure: tuple[Qubit, ...] = ()
    duration: float = 0.0
    label: str = ""
    group_axis: str = "rigid"


@dataclass(frozen=True)
class MovementPlan:
    steps: tuple[MoveStep, ...]
    total: float
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "total_s": self.total,
            "meta": self.meta,
            "steps": [
                {
                    "label": s.label,
                    "duration_s": s.duration,
                    "group_axis": s.group_axis,
                    "moves_um": {str(q): list(d) for q, d in s.displacements.items()},
                    "gates": [[str(a), str(b)] for a, b in s.gate_pairs],
                    "measure": [str(q) for q in s.measure],
                }
                for s in self.steps
            ],
        }

    def final_positions(self, layout: LayoutModel) -> dict[Qubit, tuple[float, float]]:
        pos = dict(layout.positions)
        for s in self.steps:
            for q, (dx, dy) in s.displacements.items():
                x, y = pos[q]
                pos[q] = (x + dx, y + dy)
        return pos


def step_is_aod_compatible(positions: dict, step: MoveStep, tol: float = 1e-9) -> bool:
    """Order preservation within each moved row/column group of the step."""
    moved = list(step.displacements)
    if not moved:
        return True
    if step.group_axis == "rigid":
        groups = [moved]
    else:
        axis = 0 if step.group_axis == "x" else 1
        by_key: dict[float, list[Qubit]] = {}
        for q in moved:
            by_key.setdefault(round(positions[q][axis], 6), []).append(q)
        groups = list(by_key.values())
    for group in groups:
        for axis in (0, 1):
            before = [positions[q][axis] for q in group]
            after = [positions[q][axis] + step.displacements[q][axis] for q in group]
            for i in range(len(group)):
                for j in range(len(group)):
                    if before[i] < before[j] - tol and after[i] > after[j] + tol:
                        return False
    return True


# -- offset structure of banded / circulant checks ------------------------------


def _offset_structure(H: BitMatrix) -> tuple[list[int], bool]:
    """Row-index offsets (supp(row a) = a + E) of a banded or circulant
    check matrix; returns (offsets, modular). Raises CodeError otherwise."""
    arr = H.to_array()
    m, n = arr.shape
    incid = [(a, c) for a in range(m) for c in np.nonzero(arr[a])[0]]
    if not incid:
        return [], False
    # circulant first: a cyclic pattern also matches the banded test, but
    # with spurious wrap offsets that split the collective stops
    if m == n:
        modular = sorted({(int(c) - a) % n for a, c in incid})
        if all(
            set(np.nonzero(arr[a])[0]) == {(a + e) % n for e in modular}
            for a in range(m)
        ):
            return modular, True
    plain = sorted({int(c) - a for a, c in incid})
    if all(
        set(np.nonzero(arr[a])[0]) == {a + e for e in plain if 0 <= a + e < n}
        for a in range(m)
    ):
        return plain, False
    raise CodeError("check matrix has no banded or circulant offset structure")


# -- grid layout ----------------------------------------------------------------


def grid_layout(code: CssCode, cfg: Config = DEFAULT) -> LayoutModel:
    """Side-by-side data grids with check collectives parked at half spacing.

    Left data (i, j) sits at (j, i) lattice units; right data (a, c) at
    (n2 + gap + c, a). X checks park over the left grid, Z checks over
    the right grid, both offset by half a unit diagonally.
    """
    if code.product_seeds is None:
        raise CodeError("layout requires a product code with recorded seeds")
    H1, H2 = code.product_seeds
    n1, n2 = H1.cols, H2.cols
    m1, m2 = H1.rows, H2.rows
    s = cfg.spacing_um
    off = n2 + cfg.interblock_gap_units
    pos: dict[Qubit, tuple[float, float]] = {}
    for i in range(n1):
        for j in range(n2):
            pos[("dl", i, j)] = (j * s, i * s)
    for a in range(m1):
        for c in range(m2):
            pos[("dr", a, c)] = ((off + c) * s, a * s)
    for a in range(m1):
        for b in range(n2):
            pos[("ax", a, b)] = ((b + 0.5) * s, (a + 0.5) * s)
    for i in range(n1):
        for c in range(m2):
            pos[("az", i, c)] = ((off + c + 0.5) * s, (i + 0.5) * s)
    return LayoutModel(positions=pos, spacing=s)


def _collective_pass(
    labels: list[Qubit],
    park: dict[Qubit, tuple[float, float]],
    stops: list[tuple[tuple[float, float], list[tuple[Qubit, Qubit]]]],
    cfg: Config,
    tag: str,
) -> list[MoveStep]:
    """Rigid moves of one check collective through (offset, gates) stops,
    ending with the return home."""
    steps = []
    cur = (0.0, 0.0)
    for idx, (offset, gates) in enumerate(stops):
        dx, dy = offset[0] - cur[0], offset[1] - cur[1]
        dist = math.hypot(dx, dy)
        steps.append(
            MoveStep(
                displacements={q: (dx, dy) for q in labels},
                gate_pairs=tuple(gates),
                duration=move_time(dist, cfg.acceleration_m_s2) + cfg.gate_time_s,
                label=f"{tag}-stop{idx}",
                group_axis="rigid",
            )
        )
        cur = offset
    if cur != (0.0, 0.0):
        dist = math.hypot(cur[0], cur[1])
        steps.append(
            MoveStep(
                displacements={q: (-cur[0], -cur[1]) for q in labels},
                duration=move_time(dist, cfg.acceleration_m_s2),
                label=f"{tag}-home",
                group_axis="rigid",
            )
        )
    return steps


def syndrome_schedule(code: CssCode, layout: LayoutModel | None = None, cfg: Config = DEFAULT) -> MovementPlan:
    """Alternating collective-move schedule for one syndrome round.

    The X collective visits every row offset of the first seed over the
    left grid, hops to the right grid for the column offsets of the
    second seed, and returns; the Z collective follows symmetrically.
    Every (check, data) incidence is gated exactly once and every data
    qubit sees all its X checks before any Z check. The final step
    measures all check qubits in place.
    """
    if code.product_seeds is None:
        raise CodeError("unsupported code structure: product seeds unknown")
    H1, H2 = code.product_seeds
    if layout is None:
        layout = grid_layout(code, cfg)
    s = layout.spacing
    n1, n2, m1, m2 = H1.cols, H2.cols, H1.rows, H2.rows
    off_blocks = (n2 + cfg.interblock_gap_units) * s

    def centered(offsets: list[int], modular: bool, size: int) -> list[int]:
        if not modular:
            return offsets
        return [e - size if e > size // 2 else e for e in offsets]

    e1, mod1 = _offset_structure(H1)  # row offsets of H1
    e2, mod2 = _offset_structure(H2)
    e1c, mod1c = _offset_structure(H1.T)  # column offsets of H1
    e2c, mod2c = _offset_structure(H2.T)
    e1 = centered(e1, mod1, n1)
    e2 = centered(e2, mod2, n2)
    e1c = centered(e1c, mod1c, m1)
    e2c = centered(e2c, mod2c, m2)

    def valid(a: int, e: int, size: int, modular: bool) -> int | None:
        t = (a + e) % size if modular else a + e
        return t if 0 <= t < size else None

    x_labels = [("ax", a, b) for a in range(m1) for b in range(n2)]
    x_stops = []
    for e in sorted(e1):
        gates = []
        for a in range(m1):
            i = valid(a, e, n1, mod1)
            if i is not None:
                gates += [(("ax", a, b), ("dl", i, b)) for b in range(n2)]
        x_stops.append(((0.0, e * s), gates))
    for f in sorted(e2c):
        gates = []
        for b in range(n2):
            c = valid(b, f, m2, mod2c)
            if c is not None:
                gates += [(("ax", a, b), ("dr", a, c)) for a in range(m1)]
        x_stops.append(((off_blocks + f * s, 0.0), gates))

    z_labels = [("az", i, c) for i in range(n1) for c in range(m2)]
    z_stops = []
    for g in sorted(e1c):
        gates = []
        for i in range(n1):
            a = valid(i, g, m1, mod1c)
            if a is not None:
                gates += [(("az", i, c), ("dr", a, c)) for c in range(m2)]
        z_stops.append(((0.0, g * s), gates))
    for f in sorted(e2):
        gates = []
        for c in range(m2):
            j = valid(c, f, n2, mod2)
            if j is not None:
                gates += [(("az", i, c), ("dl", i, j)) for i in range(n1)]
        z_stops.append(((-off_blocks + f * s, 0.0), gates))

    steps = _collective_pass(x_labels, layout.positions, x_stops, cfg, "x")
    steps += _collective_pass(z_labels, layout.positions, z_stops, cfg, "z")
    t_meas = cfg.measure_time_s
    if cfg.zoned_measurement:
        t_meas += move_time(off_blocks, cfg.acceleration_m_s2)
    steps.append(
        MoveStep(
            displacements={},
            measure=tuple(x_labels + z_labels),
            duration=t_meas,
            label="measure",
        )
    )

    _verify_schedule(code, steps)
    total = sum(st.duration for st in steps)
    return MovementPlan(
        steps=tuple(steps),
        total=total,
        meta={"n": code.n, "k": code.k, "spacing_um": s, "cycle_time_s": total},
    )


def _incidence_key(kind: str, check: Qubit, data: Qubit, n1: int, n2: int, m1: int, m2: int):
    if kind == "x":
        row = check[1] * n2 + check[2]
    else:
        row = check[1] * m2 + check[2]
    if data[0] == "dl":
        col = data[1] * n2 + data[2]
    else:
        col = n1 * n2 + data[1] * m2 + data[2]
    return (kind, row, col)


def _verify_schedule(code: CssCode, steps: list[MoveStep]) -> None:
    H1, H2 = code.product_seeds
    n1, n2, m1, m2 = H1.cols, H2.cols, H1.rows, H2.rows
    seen: set = set()
    data_phase: dict[Qubit, int] = {}
    for st in steps:
        for check, data in st.gate_pairs:
            kind = "x" if check[0] == "ax" else "z"
            key = _incidence_key(kind, check, data, n1, n2, m1, m2)
            if key in seen:
                raise CodeError(f"incidence gated twice: {key}")
            seen.add(key)
            phase = 0 if kind == "x" else 1
            if data_phase.get(data, 0) > phase:
                raise CodeError(f"Z before X on data qubit {data}")
            data_phase[data] = phase
    expected = set()
    hx = code.HX.to_array()
    for row in range(hx.shape[0]):
        for col in np.nonzero(hx[row])[0]:
            expected.add(("x", row, int(col)))
    hz = code.HZ.to_array()
    for row in range(hz.shape[0]):
        for col in np.nonzero(hz[row])[0]:
            expected.add(("z", row, int(col)))
    if seen != expected:
        raise CodeError(
            f"schedule covers {len(seen)} incidences, expected {len(expected)}"
        )


def cycle_time(code: CssCode, cfg: Config = DEFAULT) -> float:
    return syndrome_schedule(code, cfg=cfg).total


def calibrate_spacing(code: CssCode, target_s: float, cfg: Config = DEFAULT) -> float:
    """Lattice spacing (um) that pins the code's cycle time to target_s.

    All move distances scale linearly with spacing, so the movement part
    of the cycle is C sqrt(spacing); the fixed terms (gates, measurement)
    do not scale. One closed-form solve, no iteration.
    """
    from dataclasses import replace

    probe = replace(cfg, spacing_um=1.0)
    t_probe = syndrome_schedule(code, cfg=probe).total
    fixed = cfg.measure_time_s + cfg.gate_time_s * _gate_layer_count(code, probe)
    c = t_probe - fixed
    if target_s <= fixed:
        raise ValueError("target cycle time below fixed schedule terms")
    return ((target_s - fixed) / c) ** 2


def _gate_layer_count(code: CssCode, cfg: Config) -> int:
    plan = syndrome_schedule(code, cfg=cfg)
    return sum(1 for st in plan.steps if st.gate_pairs)


# -- rearrangement plans ---------------------------------------------------------


def default_fold_layout(cfg: Config = DEFAULT, count: int = 16) -> LayoutModel:
    """The head row of a square-grid block: `count` atoms on one line."""
    s = cfg.spacing_um
    return LayoutModel(
        positions={("q", i): (i * s, 0.0) for i in range(count)}, spacing=s
    )


def autocnot_rearrangement(layout: LayoutModel | None = None, cfg: Config = DEFAULT) -> MovementPlan:
    """Three-move fold of a 16-atom row realizing the square transposition.

    Atom i = 4a + b goes (i, 0) -> (i, tau(i)) -> (i/16, tau(i)) ->
    (tau(i), 0) in lattice units, with tau the 4x4 transpose map. Each
    step moves singleton rows/columns, so coordinate order is preserved
    within every group; the last step can fuse with a following
    transversal gate. The final assignment is the fold permutation.
    """
    from .cqlu import tau_square

    if layout is None:
        layout = default_fold_layout(cfg)
    s = layout.spacing
    count = len(layout.positions)
    side = int(round(math.sqrt(count)))
    if side * side != count:
        raise CodeError("fold layout must hold a square count of atoms")
    tau = {i: tau_square(i, side) for i in range(count)}

    acc = cfg.acceleration_m_s2
    d1 = {("q", i): (0.0, tau[i] * s) for i in range(count)}
    d2 = {("q", i): ((i / count - i) * s, 0.0) for i in range(count)}
    d3 = {("q", i): ((tau[i] - i / count) * s, -tau[i] * s) for i in range(count)}
    steps = []
    pos = dict(layout.positions)
    for idx, (d, axis) in enumerate(((d1, "x"), (d2, "y"), (d3, "y"))):
        dur = move_time(max(math.hypot(dx, dy) for dx, dy in d.values()), acc)
        st = MoveStep(displacements=d, duration=dur, label=f"fold-{idx}", group_axis=axis)
        if not step_is_aod_compatible(pos, st):
            raise CodeError(f"fold step {idx} violates order preservation")
        for q, (dx, dy) in d.items():
            x, y = pos[q]
            pos[q] = (x + dx, y + dy)
        steps.append(st)
    total = sum(st.duration for st in steps)
    plan = MovementPlan(steps=tuple(steps), total=total, meta={"kind": "fold", "side": side})
    final = plan.final_positions(layout)
    for i in range(count):
        expect = (tau[i] * s, 0.0)
        got = final[("q", i)]
        if abs(got[0] - expect[0]) > 1e-9 or abs(got[1] - expect[1]) > 1e-9:
            raise CodeError("fold plan does not realize the transposition")
    return plan


def default_shift_layout(cfg: Config = DEFAULT, count: int = 15) -> LayoutModel:
    s = cfg.spacing_um
    return LayoutModel(
        positions={("q", i): (i * s, 0.0) for i in range(count)}, spacing=s
    )


def dirty_shift_rearrangement(
    layout: LayoutModel | None = None, offset: int = 1, cfg: Config = DEFAULT
) -> MovementPlan:
    """Single collective move realizing a cyclic column relabeling.

    The `offset` lowest columns translate past the far edge in one rigid
    move; sorting the final positions yields the original order rotated
    by `offset`. Zero offset returns an empty plan.
    """
    if layout is None:
        layout = default_shift_layout(cfg)
    count = len(layout.positions)
    offset %= count
    if offset == 0:
        return MovementPlan(steps=(), total=0.0, meta={"kind": "shift", "offset": 0})
    s = layout.spacing
    moved = {("q", i): (count * s, 0.0) for i in range(offset)}
    dur = move_time(count * s, cfg.acceleration_m_s2)
    st = MoveStep(displacements=moved, duration=dur, label="shift", group_axis="rigid")
    if not step_is_aod_compatible(layout.positions, st):
        raise CodeError("shift step violates order preservation")
    return MovementPlan(
        steps=(st,), total=dur, meta={"kind": "shift", "offset": offset}
    )
