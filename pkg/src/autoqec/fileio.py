"""Round-trippable text bundles for codes, CSS codes, permutations, gates.

Matrix sections hold one row per line as '0'/'1' characters; '#' lines
are comments everywhere. A bundle starts with a header line of counts,
then named sections like `[G]`.
"""

from __future__ import annotations

import io

from .codes import LinearCode, make_code
from .css import CssCode
from .gf2 import BitMatrix, Permutation


class BundleError(ValueError):
    """Malformed bundle file."""


def _split_sections(text: str) -> tuple[str, dict[str, str]]:
    header = None
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1]
            if name in sections:
                raise BundleError(f"duplicate section [{name}]")
            sections[name] = current = []
        elif current is not None:
            current.append(line)
        elif header is None:
            header = line
        else:
            raise BundleError(f"unexpected line before sections: {line!r}")
    if header is None:
        raise BundleError("missing header line")
    return header, {k: "\n".join(v) for k, v in sections.items()}


def write_code_bundle(code: LinearCode) -> str:
    out = io.StringIO()
    out.write("# classical code bundle\n")
    out.write(f"{code.n} {code.k}" + (f" {code.d}" if code.d is not None else "") + "\n")
    out.write("[G]\n" + code.G.to_text() + "\n")
    out.write("[H]\n" + code.H.to_text() + "\n")
    return out.getvalue()


def _section_matrix(sections: dict[str, str], name: str, width: int) -> BitMatrix:
    m = BitMatrix.from_text(sections[name])
    if m.rows == 0:
        return BitMatrix.zeros(0, width)  # empty sections lose their width
    return m


def read_code_bundle(text: str) -> LinearCode:
    header, sections = _split_sections(text)
    parts = header.split()
    if len(parts) not in (2, 3):
        raise BundleError(f"bad code header: {header!r}")
    n, k = int(parts[0]), int(parts[1])
    if "G" not in sections or "H" not in sections:
        raise BundleError("code bundle needs [G] and [H]")
    code = make_code(_section_matrix(sections, "G", n), _section_matrix(sections, "H", n))
    if (code.n, code.k) != (n, k):
        raise BundleError(f"header says [{n},{k}], matrices give [{code.n},{code.k}]")
    if len(parts) == 3:
        code._d = int(parts[2])
    return code


def write_css_bundle(code: CssCode) -> str:
    out = io.StringIO()
    out.write("# css code bundle\n")
    split = code.sector_split if code.sector_split is not None else -1
    out.write(f"{code.n} {code.k} {split}" + (f" {code.d}" if code.d is not None else "") + "\n")
    for name in ("HX", "HZ", "GX", "GZ"):
        out.write(f"[{name}]\n" + getattr(code, name).to_text() + "\n")
    if code.product_seeds is not None:
        h1, h2 = code.product_seeds
        out.write("[SEED1]\n" + h1.to_text() + "\n")
        out.write("[SEED2]\n" + h2.to_text() + "\n")
    return out.getvalue()


def read_css_bundle(text: str) -> CssCode:
    header, sections = _split_sections(text)
    parts = header.split()
    if len(parts) not in (3, 4):
        raise BundleError(f"bad css header: {header!r}")
    n, k, split = int(parts[0]), int(parts[1]), int(parts[2])
    missing = {"HX", "HZ", "GX", "GZ"} - set(sections)
    if missing:
        raise BundleError(f"css bundle missing sections: {sorted(missing)}")
    seeds = None
    if "SEED1" in sections and "SEED2" in sections:
        seeds = (BitMatrix.from_text(sections["SEED1"]), BitMatrix.from_text(sections["SEED2"]))
    code = CssCode(
        HX=_section_matrix(sections, "HX", n),
        HZ=_section_matrix(sections, "HZ", n),
        GX=_section_matrix(sections, "GX", n),
        GZ=_section_matrix(sections, "GZ", n),
        n=n,
        k=k,
        d=int(parts[3]) if len(parts) == 4 else None,
        sector_split=None if split < 0 else split,
        product_seeds=seeds,
    )
    code.validate()
    return code


def is_css_bundle(text: str) -> bool:
    try:
        _, sections = _split_sections(text)
    except BundleError:
        return False
    return "HX" in sections


def write_permutation(p: Permutation) -> str:
    return "# permutation image\n" + " ".join(str(i) for i in p.image) + "\n"


def read_permutations(text: str) -> list[Permutation]:
    """One permutation per non-comment line, as space-separated images."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(Permutation(tuple(int(v) for v in line.split())))
    if not out:
        raise BundleError("no permutations in file")
    return out


def read_permutation(text: str) -> Permutation:
    perms = read_permutations(text)
    if len(perms) != 1:
        raise BundleError(f"expected one permutation, found {len(perms)}")
    return perms[0]


def write_gates(gates: list[BitMatrix]) -> str:
    out = io.StringIO()
    for g in gates:
        out.write("[GATE]\n" + g.to_text() + "\n")
    return out.getvalue()


def read_gates(text: str) -> list[BitMatrix]:
    """Gate list: each k x k matrix under its own [GATE] section."""
    gates = []
    current: list[str] = []
    seen_any = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[GATE]":
            if current:
                gates.append(BitMatrix.from_text("\n".join(current)))
                current = []
            seen_any = True
        elif seen_any:
            current.append(line)
        else:
            raise BundleError("gate file must start with [GATE]")
    if current:
        gates.append(BitMatrix.from_text("\n".join(current)))
    if not gates:
        raise BundleError("no gates in file")
    return gates
