"""Code modification: embed prescribed logical gate groups as automorphisms.

Three construction families:
  * orbit completion - extend the generator columns until the prescribed
    gate group acts by column permutation;
  * bounded-weight check emission - rebuild the check matrix of a
    completed code in a block form whose row weights are controlled by
    the seed check weight and the gate sparsity;
  * matrix-automorphism conversion - enlarge the check matrix until every
    certified automorphism also permutes check rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .autogroup import AutomorphismGadget, check_automorphism, is_matrix_automorphism
from .codes import CodeError, ExpansionRecord, LinearCode, make_code
from .gf2 import BitMatrix, Permutation


class InvariantViolation(AssertionError):
    """A construction failed one of its certified numeric bounds."""


def find_col_permutation(a: BitMatrix, b: BitMatrix) -> Permutation | None:
    """sigma with permute_cols(a, sigma) == b; duplicate columns match
    lowest unused index first."""
    if a.shape != b.shape:
        return None
    aarr, barr = a.to_array(), b.to_array()
    pos: dict[bytes, list[int]] = {}
    for j in range(b.cols):
        pos.setdefault(barr[:, j].tobytes(), []).append(j)
    for v in pos.values():
        v.reverse()
    image = [0] * a.cols
    for j in range(a.cols):
        cand = pos.get(aarr[:, j].tobytes())
        if not cand:
            return None
        image[j] = cand.pop()
    return Permutation(tuple(image))


def verify_gate_group(gates: list[BitMatrix]) -> list[BitMatrix]:
    """Validate a gate list as a matrix group; return it identity-first.

    Requires every gate invertible and the set closed under products.
    The returned order (identity, then first occurrence) fixes the block
    labeling of every construction below.
    """
    if not gates:
        raise CodeError("empty gate list")
    k = gates[0].rows
    seen: dict[bytes, BitMatrix] = {}
    ordered: list[BitMatrix] = []
    for g in gates:
        if g.shape != (k, k):
            raise gf2.DimensionError("gates must share a square shape")
        if gf2.inverse(g) is None:
            raise CodeError("gate is singular")
        key = g.to_array().tobytes()
        if key not in seen:
            seen[key] = g
            ordered.append(g)
    for a in ordered:
        for b in ordered:
            if gf2.mul(a, b).to_array().tobytes() not in seen:
                raise CodeError("gates not closed under product")
    ident = BitMatrix.identity(k)
    ikey = ident.to_array().tobytes()
    if ikey not in seen:
        raise CodeError("gate group lacks the identity")
    ordered.sort(key=lambda g: g.to_array().tobytes() != ikey)
    return ordered


def gate_sparsity(gates: list[BitMatrix]) -> int:
    """max over the group of max(row weight, column weight)."""
    return max(max(g.max_row_weight(), g.max_col_weight()) for g in gates)


def automorphism_completion(
    code: LinearCode, gates: list[BitMatrix]
) -> tuple[LinearCode, list[AutomorphismGadget]]:
    """Extend the code so every gate becomes a column-permutation gadget.

    The output columns are the closure of the generator columns under the
    gate group: each column's multiplicity is raised to the maximum over
    its orbit, original columns stay in place, new columns are appended in
    orbit-discovery order. The result is an [n' <= n m, k, <= d m] code
    carrying the seed as provenance, and every gate certifies on it.
    """
    group = verify_gate_group(gates)
    if group[0].rows != code.k:
        raise gf2.DimensionError(f"gates act on {group[0].rows} bits, code has k = {code.k}")
    garrs = [g.to_array() for g in group]
    arr = code.G.to_array()

    mult: dict[bytes, int] = {}
    col_order: list[bytes] = []
    vec: dict[bytes, np.ndarray] = {}
    for j in range(code.n):
        key = arr[:, j].tobytes()
        if key not in mult:
            col_order.append(key)
            vec[key] = arr[:, j].copy()
        mult[key] = mult.get(key, 0) + 1

    # orbit partition of the distinct columns (plus newly reached vectors)
    orbit_of: dict[bytes, int] = {}
    orbits: list[list[bytes]] = []
    queue = list(col_order)
    qi = 0
    while qi < len(queue):
        key = queue[qi]
        qi += 1
        if key in orbit_of:
            continue
        oid = len(orbits)
        members: list[bytes] = []
        stack = [key]
        orbit_of[key] = oid
        while stack:
            cur = stack.pop(0)
            members.append(cur)
            v = vec[cur]
            for ga in garrs:
                w = (ga @ v) & 1
                wkey = w.tobytes()
                if wkey not in vec:
                    vec[wkey] = w
                if wkey not in orbit_of:
                    orbit_of[wkey] = oid
                    stack.append(wkey)
        orbits.append(members)

    target = {}
    for members in orbits:
        need = max(mult.get(m, 0) for m in members)
        for m in members:
            target[m] = need

    new_cols = [arr[:, j] for j in range(code.n)]
    have = dict(mult)
    for members in orbits:
        for m in members:
            for _ in range(target[m] - have.get(m, 0)):
                new_cols.append(vec[m])
            have[m] = target[m]

    Gx = BitMatrix(np.stack(new_cols, axis=1))
    completed = make_code(Gx)
    completed.seed = ExpansionRecord(seed_G=code.G, seed_H=code.H, gates=tuple(group))
    if completed.n > code.n * len(group):
        raise InvariantViolation("completion exceeded n*m columns")

    gadgets = []
    for g in group:
        sigma = find_col_permutation(Gx, gf2.mul(g, Gx))
        if sigma is None:
            raise InvariantViolation("completed code is not gate-invariant")
        gadget = check_automorphism(completed, sigma)
        if gadget is None or gadget.g != g:
            raise InvariantViolation("gate failed certification on completed code")
        gadgets.append(gadget)
    return completed, gadgets


# -- bounded-weight check construction ---------------------------------------


@dataclass(frozen=True)
class LdpcAudit:
    """Intermediate blocks of the bounded-weight check construction."""

    basis_change: BitMatrix  # P_G with P_G G_seed in RREF
    pivot_cols: tuple[int, ...]
    M: BitMatrix  # non-pivot part of the reduced seed generator
    H1: BitMatrix  # seed checks restricted to pivot columns
    PH: BitMatrix  # seed checks restricted to free columns
    conjugated_gates: tuple[BitMatrix, ...]
    padded_checks: BitMatrix  # block-form checks before folding
    seed_row_bound: int  # w
    sparsity: int  # t over the conjugated group
    stated_bound: int
    measured_max_row: int
    measured_max_col: int


def _seed_frame(seed_G: BitMatrix, seed_H: BitMatrix, group: list[BitMatrix]):
    """Reduce the seed to its pivot frame and conjugate the gates into it."""
    k, n = seed_G.rows, seed_G.cols
    Gr, pivots = gf2.rref(seed_G)
    if len(pivots) != k:
        raise CodeError("seed generator is not full rank")
    PGt = gf2.solve_right(seed_G.T, Gr.T)
    assert PGt is not None
    PG = PGt.T
    PGi = gf2.inverse(PG)
    assert PGi is not None
    free = [c for c in range(n) if c not in set(pivots)]
    Gr_arr = Gr.to_array()
    M = BitMatrix(Gr_arr[:, free]) if free else BitMatrix.zeros(k, 0)
    Harr = seed_H.to_array()
    H1 = BitMatrix(Harr[:, list(pivots)])
    PH = BitMatrix(Harr[:, free]) if free else BitMatrix.zeros(seed_H.rows, 0)
    if H1 != gf2.mul(PH, M.T):
        raise InvariantViolation("seed checks inconsistent with pivot frame")
    conj = [gf2.mul(gf2.mul(PG, g), PGi) for g in group]
    return PG, pivots, free, M, H1, PH, conj


def _padded_blocks(M: BitMatrix, H1: BitMatrix, PH: BitMatrix, conj: list[BitMatrix], flavor: str):
    """Generator and check blocks of the padded (m-copy) expansion.

    Layout: m gate blocks of k columns, then m blocks of (n-k) columns
    holding each gate applied to M. Bottom checks repeat the seed check
    pair (H1 | PH) per copy; top checks tie consecutive gate blocks
    (flavor 't') or every block to the first (flavor 'm').
    """
    m = len(conj)
    k = conj[0].rows
    r = M.cols  # n - k
    width = m * k + m * r

    gen_cols = [g.to_array() for g in conj]
    for g in conj:
        gen_cols.append(gf2.mul(g, M).to_array())
    G_pad = BitMatrix(np.concatenate(gen_cols, axis=1))

    top = []
    eyek = np.eye(k, dtype=np.uint8)
    for i in range(1, m):
        blk = np.zeros((k, width), dtype=np.uint8)
        if flavor == "t":
            prev_inv = gf2.inverse(conj[i - 1])
            assert prev_inv is not None
            blk[:, (i - 1) * k : i * k] = gf2.mul(prev_inv, conj[i]).T.to_array()
            blk[:, i * k : (i + 1) * k] = eyek
        elif flavor == "m":
            gi_inv = gf2.inverse(conj[i])
            assert gi_inv is not None
            blk[:, :k] = eyek
            blk[:, i * k : (i + 1) * k] = gi_inv.T.to_array()
        else:
            raise CodeError(f"unknown flavor {flavor!r}; use 't' or 'm'")
        top.append(blk)

    bottom = []
    h1a, pha = H1.to_array(), PH.to_array()
    for j in range(m):
        blk = np.zeros((H1.rows, width), dtype=np.uint8)
        blk[:, j * k : (j + 1) * k] = h1a
        blk[:, m * k + j * r : m * k + (j + 1) * r] = pha
        bottom.append(blk)

    top_m = BitMatrix(np.concatenate(top, axis=0)) if top else BitMatrix.zeros(0, width)
    bottom_m = BitMatrix(np.concatenate(bottom, axis=0))
    return G_pad, top_m, bottom_m


def _dedup_rows(m: BitMatrix, drop_zero: bool = True) -> BitMatrix:
    arr = m.to_array()
    seen = set()
    keep = []
    for i in range(arr.shape[0]):
        key = arr[i].tobytes()
        if drop_zero and not arr[i].any():
            continue
        if key in seen:
            continue
        seen.add(key)
        keep.append(i)
    return BitMatrix(arr[keep]) if keep else BitMatrix.zeros(0, m.cols)


def ldpc_checks(
    code: LinearCode,
    gates: list[BitMatrix],
    flavor: str = "t",
    audit: bool = False,
) -> BitMatrix | tuple[BitMatrix, LdpcAudit]:
    """Bounded-row-weight check matrix for a completed code.

    `code` must come from automorphism_completion (the seed travels as
    provenance). The checks are built in block form over the padded
    m-copy expansion of the seed, then folded onto the completed code's
    columns; folding merges duplicate coordinates and never increases a
    row weight. Flavor 't' chains consecutive gate blocks (row bound
    w + t + 1, asserted); flavor 'm' ties every block to the first (row
    bound w + m + 1, reported).
    """
    if code.seed is None:
        raise CodeError("code lacks expansion provenance; run automorphism_completion")
    group = verify_gate_group(gates)
    rec = code.seed
    if {g.to_array().tobytes() for g in group} != {g.to_array().tobytes() for g in rec.gates}:
        raise CodeError("gate group differs from the one recorded at completion")
    group = list(rec.gates)  # constructions must match the recorded labeling
    PG, pivots, free, M, H1, PH, conj = _seed_frame(rec.seed_G, rec.seed_H, group)
    G_pad, top, bottom = _padded_blocks(M, H1, PH, conj, flavor)
    H_pad = gf2.vstack(top, bottom)

    m = len(group)
    k = code.k
    n_seed = rec.seed_G.cols
    if not gf2.mul(H_pad, G_pad.T).is_zero():
        raise InvariantViolation("padded checks not orthogonal to padded generator")
    if gf2.rank(H_pad) != m * n_seed - k:
        raise InvariantViolation("padded checks do not span the dual")

    # fold the padded coordinates onto the completed code's columns
    target_arr = gf2.mul(PG, code.G).to_array()
    pad_arr = G_pad.to_array()
    by_vec: dict[bytes, list[int]] = {}
    for q in range(G_pad.cols):
        by_vec.setdefault(pad_arr[:, q].tobytes(), []).append(q)
    for v in by_vec.values():
        v.reverse()
    assign: dict[int, list[int]] = {j: [] for j in range(code.n)}
    first_target: dict[bytes, int] = {}
    for j in range(code.n):
        key = target_arr[:, j].tobytes()
        first_target.setdefault(key, j)
        cand = by_vec.get(key)
        if not cand:
            raise InvariantViolation("completed column missing from padded expansion")
        assign[j].append(cand.pop())
    for key, rest in by_vec.items():
        if not rest:
            continue
        if key not in first_target:
            raise InvariantViolation("padded column missing from completed code")
        assign[first_target[key]].extend(rest)

    hp = H_pad.to_array()
    folded = np.zeros((H_pad.rows, code.n), dtype=np.uint8)
    for j, qs in assign.items():
        if len(qs) == 1:
            folded[:, j] = hp[:, qs[0]]
        else:
            folded[:, j] = np.bitwise_xor.reduce(hp[:, qs], axis=1)
    H_out = _dedup_rows(BitMatrix(folded))

    if not gf2.mul(H_out, code.G.T).is_zero():
        raise InvariantViolation("folded checks not orthogonal to completed generator")
    if gf2.rank(H_out) != code.n - k:
        raise InvariantViolation("folded checks do not span the completed dual")

    w = rec.seed_H.max_row_weight()
    t = gate_sparsity(conj)
    stated = w + t + 1 if flavor == "t" else w + m + 1
    max_row = H_out.max_row_weight()
    if flavor == "t" and max_row > stated:
        raise InvariantViolation(f"row weight {max_row} exceeds stated bound {stated}")

    if audit:
        return H_out, LdpcAudit(
            basis_change=PG,
            pivot_cols=tuple(pivots),
            M=M,
            H1=H1,
            PH=PH,
            conjugated_gates=tuple(conj),
            padded_checks=H_pad,
            seed_row_bound=w,
            sparsity=t,
            stated_bound=stated,
            measured_max_row=max_row,
            measured_max_col=H_out.max_col_weight(),
        )
    return H_out


def matrix_automorphism_conversion(code: LinearCode, sigmas: list[Permutation]) -> LinearCode:
    """Stack the check matrix over the permutation group so each sigma
    becomes a matrix automorphism.

    Every sigma must certify as a plain automorphism and the set must be
    closed under composition. Duplicate rows are removed keeping the
    first occurrence, so the row count stays at most rows(H) * m.
    """
    images = {s.image for s in sigmas}
    images.add(Permutation.identity(code.n).image)
    for a in list(images):
        for b in list(images):
            comp = Permutation(a).compose(Permutation(b)).image
            if comp not in images:
                raise CodeError("sigmas not closed under composition")
    ordered = [Permutation.identity(code.n)]
    ordered += [s for s in sigmas if not s.is_identity()]
    seen_img = set()
    uniq: list[Permutation] = []
    for s in ordered:
        if s.image not in seen_img:
            seen_img.add(s.image)
            uniq.append(s)
    for s in uniq:
        if check_automorphism(code, s) is None:
            raise CodeError(f"sigma {s.cycle_notation()} is not a certified automorphism")

    stacked = gf2.stack_rows([gf2.permute_cols(code.H, s) for s in uniq])
    H_new = _dedup_rows(stacked)
    out = make_code(code.G, H_new)
    out.seed = code.seed
    for s in uniq:
        if is_matrix_automorphism(out, s) is None:
            raise InvariantViolation("sigma fails matrix-automorphism check after conversion")
    return out


def _block_permutation(group: list[BitMatrix], gate: BitMatrix, k: int, r: int) -> Permutation:
    """Column permutation induced on the padded layout by left action of `gate`."""
    keys = {g.to_array().tobytes(): i for i, g in enumerate(group)}
    m = len(group)
    pi = [keys[gf2.mul(gate, g).to_array().tobytes()] for g in group]
    image = [0] * (m * k + m * r)
    for j in range(m):
        # block pi[j] holds gate*g_j, which left action places at slot j
        for a in range(k):
            image[pi[j] * k + a] = j * k + a
        for b in range(r):
            image[m * k + pi[j] * r + b] = m * k + j * r + b
    return Permutation(tuple(image))


def expanded_conversion(
    code: LinearCode, gates: list[BitMatrix], audit: bool = False
) -> LinearCode | tuple[LinearCode, list[AutomorphismGadget]]:
    """Padded expansion whose emitted checks make every gate a matrix
    automorphism.

    Builds the m-copy code over the seed's pivot frame, closes the top
    check rows under the induced block permutations (at most (m-1) m k
    top rows), and keeps the per-copy seed checks, which the block
    permutations already permute row-for-row.
    """
    group = verify_gate_group(gates)
    if group[0].rows != code.k:
        raise gf2.DimensionError("gates act on the wrong number of bits")
    PG, pivots, free, M, H1, PH, conj = _seed_frame(code.G, code.H, group)
    G_pad, top, bottom = _padded_blocks(M, H1, PH, conj, "t")
    m, k, r = len(group), code.k, M.cols

    sigmas = [_block_permutation(conj, g, k, r) for g in conj]
    for g, s in zip(conj, sigmas):
        if gf2.mul(g, G_pad) != gf2.permute_cols(G_pad, s):
            raise InvariantViolation("induced block permutation mismatch")

    # close the top rows under every induced column permutation
    rows = {row.tobytes(): row for row in top.to_array()}
    frontier = list(rows.values())
    while frontier:
        nxt = []
        for row in frontier:
            bm = BitMatrix(row[None, :])
            for s in sigmas:
                img = gf2.permute_cols(bm, s).to_array()[0]
                key = img.tobytes()
                if key not in rows:
                    rows[key] = img
                    nxt.append(img)
        frontier = nxt
    top_closed = (
        BitMatrix(np.stack(list(rows.values()), axis=0))
        if rows
        else BitMatrix.zeros(0, G_pad.cols)
    )
    if top_closed.rows > (m - 1) * m * k:
        raise InvariantViolation("closed top rows exceed (m-1) m k")

    H_exp = _dedup_rows(gf2.vstack(top_closed, bottom))
    if not gf2.mul(H_exp, G_pad.T).is_zero():
        raise InvariantViolation("expanded checks not orthogonal")
    if gf2.rank(H_exp) != m * code.n - k:
        raise InvariantViolation("expanded checks do not span the dual")

    w = code.H.max_row_weight()
    t = gate_sparsity(conj)
    if H_exp.max_col_weight() > 2 * (w + m * t + 1):
        raise InvariantViolation("column weight exceeds 2(w + m t + 1)")

    out = make_code(G_pad, H_exp)
    gadgets = []
    for s in sigmas:
        gadget = check_automorphism(out, s)
        if gadget is None or gadget.rho is None:
            raise InvariantViolation("gate not a matrix automorphism on expanded code")
        gadgets.append(gadget)
    if audit:
        return out, gadgets
    return out


def embed_fanout(code: LinearCode, fanout_size: int) -> tuple[LinearCode, AutomorphismGadget]:
    """[2n, k, 2d] doubling that certifies a fan-out gate on `fanout_size` bits.

    The fan-out copies logical bit 0 onto bits 1..fanout_size-1. Requires
    fanout_size <= w + 1 for a w-bounded seed check matrix; the emitted
    checks are (w+2)-bounded.
    """
    w = code.H.max_row_weight()
    if not 1 <= fanout_size <= min(w + 1, code.k):
        raise CodeError(f"fanout size {fanout_size} outside [1, min(w+1, k)] = [1, {min(w + 1, code.k)}]")
    garr = np.eye(code.k, dtype=np.uint8)
    for j in range(1, fanout_size):
        garr[j, 0] = 1
    g_f = BitMatrix(garr)

    PG, pivots, free, M, H1, PH, conj = _seed_frame(code.G, code.H, [BitMatrix.identity(code.k), g_f])
    G_pad, top, bottom = _padded_blocks(M, H1, PH, conj, "t")
    H_pad = _dedup_rows(gf2.vstack(top, bottom))
    if H_pad.max_row_weight() > w + 2:
        raise InvariantViolation(f"fan-out checks exceed row weight {w + 2}")
    out = make_code(G_pad, H_pad)

    sigma = find_col_permutation(G_pad, gf2.mul(g_f, G_pad))
    if sigma is None:
        raise InvariantViolation("fan-out gate does not permute the doubled code")
    gadget = check_automorphism(out, sigma)
    if gadget is None or gadget.g != g_f:
        raise InvariantViolation("fan-out certification failed")
    return out, gadget
