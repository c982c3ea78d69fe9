"""Standard test groups, the default verification corpus, and file formats.

Group file (text, one group per file, ``#`` comments and blank lines ignored)::

    name Sym3
    kind perm
    degree 3
    generators 2
    2 1 3
    2 3 1

Permutation generators are 1-based image arrays. For ``kind unitriangular`` the
header has ``dimension n`` and ``modulus m`` and each generator line lists all
n*n entries row-major. ``save`` writes exactly this layout, so a saved file
loads to the same generator list and element indexing and re-saves to the
same bytes.

Corpus manifest (JSON)::

    {"entries": [{"name": "Sym4", "construction": {"kind": "symmetric", "n": 4},
                  "expected": {"order": 24, "exponent": 12, "class": "not nilpotent"}}]}

A construction is either a constructor (``kind`` plus its parameters;
``direct_product`` takes ``factors``: two constructions) or ``{"file": path}``
relative to the manifest.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional, Union

from . import groups as gr
from .elements import Perm, UniMatrix
from .groups import FiniteGroup, GroupTooLarge

log = logging.getLogger(__name__)

NOT_NILPOTENT = "not nilpotent"
UT_MODULI = (2, 3, 4, 5, 8, 9)


class GroupFileError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None, path: Optional[str] = None):
        where = f"{path}:" if path else ""
        where += f"line {line}: " if line is not None else (" " if path else "")
        super().__init__(f"{where}{msg}")
        self.line = line


# -- constructors --------------------------------------------------------------------

def _cycle(n: int, pts) -> Perm:
    return Perm.from_cycles(n, tuple(pts))


def symmetric(n: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """Sym(n) on transposition (1 2) and n-cycle (1 2 ... n)."""
    if not 1 <= n <= 7:
        raise ValueError("symmetric: need 1 <= n <= 7")
    gens = [_cycle(n, (1, 2)), _cycle(n, range(1, n + 1))] if n >= 2 else [Perm([0])]
    return gr.close(gens, cap=cap, name=f"Sym{n}")


def alternating(n: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """Alt(n) on (1 2 3) and (1 2 ... n) for odd n or (2 3 ... n) for even n."""
    if not 3 <= n <= 7:
        raise ValueError("alternating: need 3 <= n <= 7")
    gens = [_cycle(n, (1, 2, 3))]
    if n > 3:
        gens.append(_cycle(n, range(1, n + 1)) if n % 2 else _cycle(n, range(2, n + 1)))
    return gr.close(gens, cap=cap, name=f"Alt{n}")


def dihedral(order: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n) on rotation (1 ... n) and reflection i -> n+1-i."""
    if order % 2 or order < 6:
        raise ValueError("dihedral: order must be even and >= 6")
    n = order // 2
    refl = Perm.from_cycles(n, *[(i, n + 1 - i) for i in range(1, n // 2 + 1)])
    return gr.close([_cycle(n, range(1, n + 1)), refl], cap=cap, name=f"D{order}")


def quaternion(order: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """Generalized quaternion group <a, b | a^N = 1, b^2 = a^(N/2), a^b = a^-1>, N = order/2.

    Realized by right multiplication on the normal forms a^i b^j, point i + N*j.
    """
    if order < 8 or order & (order - 1):
        raise ValueError("quaternion: order must be a power of 2, at least 8")
    N = order // 2
    a = [0] * order
    b = [0] * order
    for i in range(N):
        a[i] = (i + 1) % N                  # a^i * a
        a[i + N] = (i - 1) % N + N          # a^i b * a = a^(i-1) b
        b[i] = i + N                        # a^i * b
        b[i + N] = (i + N // 2) % N         # a^i b * b = a^(i + N/2)
    return gr.close([Perm(a), Perm(b)], cap=cap, name=f"Q{order}")


def cyclic(n: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic: need n >= 1")
    gen = _cycle(n, range(1, n + 1)) if n >= 2 else Perm([0])
    return gr.close([gen], cap=cap, name=f"C{n}")


def unitriangular(n: int, m: int, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """UT(n, Z/m) on the elementary matrices with a single 1 at (i, i+1)."""
    if not 2 <= n <= 6:
        raise ValueError("unitriangular: need 2 <= n <= 6")
    if m not in UT_MODULI:
        raise ValueError(f"unitriangular: modulus must be one of {UT_MODULI}")
    gens = [UniMatrix.elementary(n, m, i, i + 1) for i in range(1, n)]
    return gr.close(gens, cap=cap, name=f"UT({n},{m})")


def regular_permutations(G: FiniteGroup) -> list[Perm]:
    """Generators of G acting on its own element indices by right multiplication."""
    return [Perm(G.batch_mul(range(G.order), g).tolist()) for g in G.generators]


def _as_perm_gens(G: FiniteGroup) -> list[Perm]:
    if isinstance(G.element(0), Perm):
        return [G.element(g) for g in G.generators]
    return regular_permutations(G)


def direct_product(A: FiniteGroup, B: FiniteGroup, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    """A x B on disjoint point sets; matrix factors enter through their regular representation."""
    ga, gb = _as_perm_gens(A), _as_perm_gens(B)
    da, db = ga[0].degree, gb[0].degree
    gens = [Perm(list(p.images) + list(range(da, da + db))) for p in ga]
    gens += [Perm(list(range(da)) + [da + i for i in p.images]) for p in gb]
    return gr.close(gens, cap=cap, name=f"{A.name}x{B.name}")


CONSTRUCTORS = {
    "symmetric": (symmetric, ("n",)),
    "alternating": (alternating, ("n",)),
    "dihedral": (dihedral, ("order",)),
    "quaternion": (quaternion, ("order",)),
    "cyclic": (cyclic, ("n",)),
    "unitriangular": (unitriangular, ("n", "m")),
}


def make(construction: dict, cap: int = gr.DEFAULT_CAP, base_dir: str = ".") -> FiniteGroup:
    """Build a group from a construction dict (see module docstring)."""
    if not isinstance(construction, dict):
        raise ValueError("construction must be an object")
    if "file" in construction:
        return load(os.path.join(base_dir, construction["file"]), cap=cap)
    kind = construction.get("kind")
    if kind == "direct_product":
        factors = construction.get("factors")
        if not isinstance(factors, list) or len(factors) != 2:
            raise ValueError("direct_product needs exactly two factors")
        return direct_product(*(make(f, cap, base_dir) for f in factors), cap=cap)
    if kind not in CONSTRUCTORS:
        raise ValueError(f"unknown constructor {kind!r}")
    fn, names = CONSTRUCTORS[kind]
    args = []
    for nm in names:
        v = construction.get(nm)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{kind}: parameter {nm!r} must be an integer")
        args.append(v)
    extra = set(construction) - set(names) - {"kind"}
    if extra:
        raise ValueError(f"{kind}: unexpected parameters {sorted(extra)}")
    return fn(*args, cap=cap)


# -- corpus entries ---------------------------------------------------------------------

def metadata(G: FiniteGroup) -> dict:
    cls = gr.nilpotency_class(G)
    return {"order": G.order, "exponent": gr.exponent(G), "class": NOT_NILPOTENT if cls is None else cls}


@dataclass
class CorpusEntry:
    name: str
    construction: dict
    expected: dict = field(default_factory=dict)

    def build(self, cap: int = gr.DEFAULT_CAP, base_dir: str = ".") -> FiniteGroup:
        G = make(self.construction, cap=cap, base_dir=base_dir)
        G.name = self.name
        return G

    def mismatches(self, G: FiniteGroup) -> list[str]:
        """Differences between the expected metadata and G (only keys given are checked)."""
        unknown = set(self.expected) - {"order", "exponent", "class"}
        if unknown:
            return [f"unknown expected fields {sorted(unknown)}"]
        out = []
        if "order" in self.expected and self.expected["order"] != G.order:
            out.append(f"order: expected {self.expected['order']}, got {G.order}")
        if set(self.expected) - {"order"} and not out:
            meta = metadata(G)
            for k in ("exponent", "class"):
                if k in self.expected and self.expected[k] != meta[k]:
                    out.append(f"{k}: expected {self.expected[k]}, got {meta[k]}")
        return out

    def to_dict(self) -> dict:
        return {"name": self.name, "construction": self.construction, "expected": self.expected}


def _e(name, kind, meta, **params) -> CorpusEntry:
    order, exponent, cls = meta
    return CorpusEntry(name, {"kind": kind, **params}, {"order": order, "exponent": exponent, "class": cls})


NN = NOT_NILPOTENT


def default_corpus() -> list[CorpusEntry]:
    return [
        _e("Sym3", "symmetric", (6, 6, NN), n=3),
        _e("Sym4", "symmetric", (24, 12, NN), n=4),
        _e("Sym5", "symmetric", (120, 60, NN), n=5),
        _e("Alt4", "alternating", (12, 6, NN), n=4),
        _e("Alt5", "alternating", (60, 30, NN), n=5),
        _e("D8", "dihedral", (8, 4, 2), order=8),
        _e("D12", "dihedral", (12, 6, NN), order=12),
        _e("D16", "dihedral", (16, 8, 3), order=16),
        _e("D32", "dihedral", (32, 16, 4), order=32),
        _e("Q8", "quaternion", (8, 4, 2), order=8),
        _e("Q16", "quaternion", (16, 8, 3), order=16),
        _e("Q32", "quaternion", (32, 16, 4), order=32),
        _e("C3", "cyclic", (3, 3, 1), n=3),
        _e("C8", "cyclic", (8, 8, 1), n=8),
        _e("C9", "cyclic", (9, 9, 1), n=9),
        _e("UT(3,2)", "unitriangular", (8, 4, 2), n=3, m=2),
        _e("UT(3,3)", "unitriangular", (27, 3, 2), n=3, m=3),
        _e("UT(3,5)", "unitriangular", (125, 5, 2), n=3, m=5),
        _e("UT(4,2)", "unitriangular", (64, 4, 3), n=4, m=2),
        _e("UT(4,3)", "unitriangular", (729, 9, 3), n=4, m=3),
        _e("UT(6,2)", "unitriangular", (32768, 8, 5), n=6, m=2),
        CorpusEntry("C3xQ8", {"kind": "direct_product",
                              "factors": [{"kind": "cyclic", "n": 3}, {"kind": "quaternion", "order": 8}]},
                    {"order": 24, "exponent": 12, "class": 2}),
        CorpusEntry("Sym3xD8", {"kind": "direct_product",
                                "factors": [{"kind": "symmetric", "n": 3}, {"kind": "dihedral", "order": 8}]},
                    {"order": 48, "exponent": 12, "class": NN}),
    ]


def manifest_dict(entries: list[CorpusEntry]) -> dict:
    return {"entries": [e.to_dict() for e in entries]}


def save_manifest(entries: list[CorpusEntry], path: str):
    with open(path, "w") as fh:
        json.dump(manifest_dict(entries), fh, indent=2)
        fh.write("\n")


def load_manifest(path: str) -> list[CorpusEntry]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GroupFileError(f"invalid JSON: {exc.msg}", exc.lineno, path) from None
    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise GroupFileError("manifest must be an object with an 'entries' list", path=path)
    out = []
    for i, raw in enumerate(data["entries"]):
        if not isinstance(raw, dict) or "name" not in raw or "construction" not in raw:
            raise GroupFileError(f"entry {i} needs 'name' and 'construction'", path=path)
        out.append(CorpusEntry(str(raw["name"]), raw["construction"], raw.get("expected", {}) or {}))
    return out


@dataclass
class BuiltCorpus:
    groups: list[tuple[str, FiniteGroup]]
    skipped: list[tuple[str, str]]


def build_corpus(entries: list[CorpusEntry], cap: int = gr.DEFAULT_CAP, base_dir: str = ".") -> BuiltCorpus:
    """Construct every entry; failed constructions and metadata mismatches are skipped with a reason."""
    groups, skipped = [], []
    for e in entries:
        try:
            G = e.build(cap=cap, base_dir=base_dir)
        except (ValueError, TypeError, GroupTooLarge, OSError) as exc:
            skipped.append((e.name, f"construction failed: {exc}"))
            continue
        bad = e.mismatches(G)
        if bad:
            skipped.append((e.name, "metadata mismatch: " + "; ".join(bad)))
            continue
        groups.append((e.name, G))
    return BuiltCorpus(groups, skipped)


# -- group files ------------------------------------------------------------------------

def dumps(G: Union[FiniteGroup, CorpusEntry]) -> str:
    if isinstance(G, CorpusEntry):
        G = G.build()
    gens = [G.element(g) for g in G.generators]
    e0 = gens[0]
    lines = [f"name {G.name}"]
    if isinstance(e0, Perm):
        lines += ["kind perm", f"degree {e0.degree}", f"generators {len(gens)}"]
        lines += [" ".join(map(str, g.image_array())) for g in gens]
    elif isinstance(e0, UniMatrix):
        lines += ["kind unitriangular", f"dimension {e0.n}", f"modulus {e0.m}", f"generators {len(gens)}"]
        lines += [" ".join(str(v) for row in g.rows() for v in row) for g in gens]
    else:
        raise TypeError("only permutation and unitriangular groups can be saved")
    return "\n".join(lines) + "\n"


def save(G: Union[FiniteGroup, CorpusEntry], path: str):
    with open(path, "w") as fh:
        fh.write(dumps(G))


def _int(tok: str, lineno: int, path) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GroupFileError(f"expected an integer, got {tok!r}", lineno, path) from None


def loads(text: str, cap: int = gr.DEFAULT_CAP, path: Optional[str] = None) -> FiniteGroup:
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    header: dict[str, tuple[int, str]] = {}
    pos = 0
    while pos < len(lines):
        lineno, ln = lines[pos]
        key, _, val = ln.partition(" ")
        if key not in ("name", "kind", "degree", "dimension", "modulus", "generators"):
            raise GroupFileError(f"unknown header field {key!r}", lineno, path)
        if key in header:
            raise GroupFileError(f"duplicate field {key!r}", lineno, path)
        header[key] = (lineno, val.strip())
        pos += 1
        if key == "generators":
            break
    for need in ("kind", "generators"):
        if need not in header:
            raise GroupFileError(f"missing '{need}' line", lines[-1][0] if lines else None, path)
    kind = header["kind"][1]
    count = _int(header["generators"][1], header["generators"][0], path)
    body = lines[pos:]
    if count < 1:
        raise GroupFileError("need at least one generator", header["generators"][0], path)
    if len(body) != count:
        at = body[count][0] if len(body) > count else (lines[-1][0])
        raise GroupFileError(f"expected {count} generator lines, found {len(body)}", at, path)
    gens = []
    if kind == "perm":
        if "degree" not in header:
            raise GroupFileError("missing 'degree' line", header["kind"][0], path)
        deg = _int(header["degree"][1], header["degree"][0], path)
        if deg < 1:
            raise GroupFileError("degree must be positive", header["degree"][0], path)
        for lineno, ln in body:
            img = [_int(t, lineno, path) for t in ln.split()]
            if len(img) != deg:
                raise GroupFileError(f"expected {deg} images, got {len(img)}", lineno, path)
            if sorted(img) != list(range(1, deg + 1)):
                raise GroupFileError("image array is not a bijection of 1..degree", lineno, path)
            gens.append(Perm.from_image_array(img))
    elif kind == "unitriangular":
        for need in ("dimension", "modulus"):
            if need not in header:
                raise GroupFileError(f"missing '{need}' line", header["kind"][0], path)
        n = _int(header["dimension"][1], header["dimension"][0], path)
        m = _int(header["modulus"][1], header["modulus"][0], path)
        if n < 2 or m < 2:
            raise GroupFileError("dimension and modulus must be >= 2", header["dimension"][0], path)
        for lineno, ln in body:
            vals = [_int(t, lineno, path) for t in ln.split()]
            if len(vals) != n * n:
                raise GroupFileError(f"expected {n * n} entries, got {len(vals)}", lineno, path)
            try:
                gens.append(UniMatrix.from_rows([vals[i * n:(i + 1) * n] for i in range(n)], m))
            except ValueError as exc:
                raise GroupFileError(str(exc), lineno, path) from None
    else:
        raise GroupFileError(f"unknown kind {kind!r} (expected perm or unitriangular)", header["kind"][0], path)
    name = header["name"][1] if "name" in header else (os.path.splitext(os.path.basename(path))[0] if path else "G")
    return gr.close(gens, cap=cap, name=name)


def load(path: str, cap: int = gr.DEFAULT_CAP) -> FiniteGroup:
    with open(path) as fh:
        return loads(fh.read(), cap=cap, path=path)
