"""Syndrome-extraction circuit emission as line-oriented stabilizer text.

The format is the widely used stabilizer-circuit text dialect (QUBIT_COORDS,
R/RX, CX, M/MX with flip probability, X_ERROR/Z_ERROR, DEPOLARIZE1/2,
DETECTOR, OBSERVABLE_INCLUDE, rec[-k] back-references). Emission is
deterministic; all noise lines vanish at p = 0.

Noise model: reset and measurement flips with probability p, depolarizing
noise with probability p on every one- and two-qubit gate, plus one
optional extra single-qubit depolarizing layer on all data qubits halfway
through the experiment to stand in for transversal-logic movement noise.
No idle noise is applied to unmoved qubits.
"""

from __future__ import annotations

import io

import numpy as np

from .codes import CodeError
from .css import CssCode


def _schedule_layers(code: CssCode) -> list[tuple[str, list[tuple[int, int]]]]:
    """Ordered gate layers as (check_kind, [(check_row, data_col), ...]).

    Product codes follow the movement schedule's stop order so circuit
    and movement plan describe the same experiment; other codes fall back
    to one layer per check matrix with X first.
    """
    if code.product_seeds is not None:
        from .rnaa import syndrome_schedule

        H1, H2 = code.product_seeds
        n1, n2, m1, m2 = H1.cols, H2.cols, H1.rows, H2.rows
        plan = syndrome_schedule(code)
        layers = []
        for step in plan.steps:
            if not step.gate_pairs:
                continue
            kind = "x" if step.gate_pairs[0][0][0] == "ax" else "z"
            pairs = []
            for check, data in step.gate_pairs:
                if kind == "x":
                    row = check[1] * n2 + check[2]
                else:
                    row = check[1] * m2 + check[2]
                if data[0] == "dl":
                    col = data[1] * n2 + data[2]
                else:
                    col = n1 * n2 + data[1] * m2 + data[2]
                pairs.append((row, col))
            layers.append((kind, pairs))
        return layers
    layers = []
    for kind, H in (("x", code.HX), ("z", code.HZ)):
        arr = H.to_array()
        pairs = [
            (row, int(col)) for row in range(arr.shape[0]) for col in np.nonzero(arr[row])[0]
        ]
        layers.append((kind, pairs))
    return layers


class _Recorder:
    """Tracks the global measurement record for rec[-k] references."""

    def __init__(self) -> None:
        self.count = 0
        self.index: dict[tuple, int] = {}

    def add(self, key: tuple) -> None:
        self.index[key] = self.count
        self.count += 1

    def rec(self, key: tuple) -> str:
        return f"rec[{self.index[key] - self.count}]"


def emit_memory_experiment(
    code: CssCode,
    rounds: int,
    p: float,
    transversal_marker: bool = False,
    basis: str = "Z",
) -> str:
    """Memory experiment with `rounds` syndrome rounds at noise p.

    Detectors compare consecutive syndrome rounds (the measured basis
    also gets the deterministic first and final boundary detectors);
    observables are the canonical logical operators of the measured
    basis. When `transversal_marker` is set, one extra depolarizing
    layer hits all data qubits after round floor(rounds / 2).
    """
    if rounds < 1:
        raise CodeError("rounds must be positive")
    if basis not in ("Z", "X"):
        raise CodeError("basis must be 'Z' or 'X'")
    n = code.n
    mx, mz = code.HX.rows, code.HZ.rows
    ax0, az0 = n, n + mx  # qubit index offsets
    layers = _schedule_layers(code)
    hx, hz = code.HX.to_array(), code.HZ.to_array()
    noisy = p > 0

    out = io.StringIO()
    out.write(f"# memory experiment: basis {basis}, rounds {rounds}, p {p:g}\n")
    out.write("# noise: reset/measure flips p; gate depolarizing p; no idle noise\n")
    if transversal_marker:
        out.write(
            f"# transversal marker: DEPOLARIZE1(p) on data after round {rounds // 2}\n"
        )
    for q in range(n):
        out.write(f"QUBIT_COORDS({q}, 0) {q}\n")
    for a in range(mx):
        out.write(f"QUBIT_COORDS({a}, 1) {ax0 + a}\n")
    for a in range(mz):
        out.write(f"QUBIT_COORDS({a}, 2) {az0 + a}\n")

    rec = _Recorder()
    data = " ".join(str(q) for q in range(n))
    xanc = " ".join(str(ax0 + a) for a in range(mx))
    zanc = " ".join(str(az0 + a) for a in range(mz))

    out.write(("R " if basis == "Z" else "RX ") + data + "\n")
    if noisy:
        out.write((f"X_ERROR({p}) " if basis == "Z" else f"Z_ERROR({p}) ") + data + "\n")

    for rnd in range(1, rounds + 1):
        out.write(f"# round {rnd}\n")
        out.write(f"RX {xanc}\n")
        if noisy:
            out.write(f"Z_ERROR({p}) {xanc}\n")
        out.write(f"R {zanc}\n")
        if noisy:
            out.write(f"X_ERROR({p}) {zanc}\n")
        for kind, pairs in layers:
            targets = []
            for row, col in pairs:
                if kind == "x":
                    targets += [ax0 + row, col]  # X ancilla controls
                else:
                    targets += [col, az0 + row]  # data controls Z ancilla
            out.write("CX " + " ".join(map(str, targets)) + "\n")
            if noisy:
                out.write(f"DEPOLARIZE2({p}) " + " ".join(map(str, targets)) + "\n")
        out.write((f"MX({p}) " if noisy else "MX ") + xanc + "\n")
        for a in range(mx):
            rec.add(("x", rnd, a))
        out.write((f"M({p}) " if noisy else "M ") + zanc + "\n")
        for a in range(mz):
            rec.add(("z", rnd, a))

        if basis == "Z":
            for a in range(mz):
                if rnd == 1:
                    out.write(f"DETECTOR {rec.rec(('z', 1, a))}\n")
                else:
                    out.write(
                        f"DETECTOR {rec.rec(('z', rnd, a))} {rec.rec(('z', rnd - 1, a))}\n"
                    )
            if rnd > 1:
                for a in range(mx):
                    out.write(
                        f"DETECTOR {rec.rec(('x', rnd, a))} {rec.rec(('x', rnd - 1, a))}\n"
                    )
        else:
            for a in range(mx):
                if rnd == 1:
                    out.write(f"DETECTOR {rec.rec(('x', 1, a))}\n")
                else:
                    out.write(
                        f"DETECTOR {rec.rec(('x', rnd, a))} {rec.rec(('x', rnd - 1, a))}\n"
                    )
            if rnd > 1:
                for a in range(mz):
                    out.write(
                        f"DETECTOR {rec.rec(('z', rnd, a))} {rec.rec(('z', rnd - 1, a))}\n"
                    )

        if transversal_marker and rnd == rounds // 2 and noisy:
            out.write(f"DEPOLARIZE1({p}) {data}\n")

    out.write((("M" if basis == "Z" else "MX") + (f"({p}) " if noisy else " ")) + data + "\n")
    for q in range(n):
        rec.add(("d", q))

    check = hz if basis == "Z" else hx
    kind = "z" if basis == "Z" else "x"
    for a in range(check.shape[0]):
        refs = [rec.rec(("d", int(q))) for q in np.nonzero(check[a])[0]]
        refs.append(rec.rec((kind, rounds, a)))
        out.write("DETECTOR " + " ".join(refs) + "\n")

    logicals = (code.GZ if basis == "Z" else code.GX).to_array()
    for i in range(logicals.shape[0]):
        refs = [rec.rec(("d", int(q))) for q in np.nonzero(logicals[i])[0]]
        out.write(f"OBSERVABLE_INCLUDE({i}) " + " ".join(refs) + "\n")
    return out.getvalue()


def count_instructions(circuit: str, name: str) -> int:
    """Number of single-target applications of an instruction.

    Two-qubit gates count per pair; one-qubit instructions per target.
    """
    total = 0
    for line in circuit.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        op, *args = line.split()
        base = op.split("(")[0]
        if base != name:
            continue
        if base in ("CX", "CZ", "DEPOLARIZE2"):
            total += len(args) // 2
        else:
            total += len(args)
    return total


NOISE_OPS = ("X_ERROR", "Z_ERROR", "DEPOLARIZE1", "DEPOLARIZE2")


def count_noise_instructions(circuit: str) -> int:
    """Total noise-channel applications, plus noisy measurements."""
    total = sum(count_instructions(circuit, op) for op in NOISE_OPS)
    for line in circuit.splitlines():
        op = line.split()[0] if line.strip() and not line.startswith("#") else ""
        if "(" in op and op.split("(")[0] in ("M", "MX", "MR", "MRX"):
            total += len(line.split()) - 1
    return total
