"""Input parsing (XYZR, PDB subset) and canonical complex serialization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .errors import (
    MalformedLine,
    MalformedRecord,
    NoAtoms,
    NonFiniteValue,
    NonPositiveRadius,
)
from .geometry import Ball
from .pipeline import AlphaComplex, complex_stats

#: Van der Waals radii (A) for the elements common in biomolecules; everything
#: else falls back to the table's default radius.
DEFAULT_RADII = {"H": 1.20, "C": 1.70, "N": 1.55, "O": 1.52, "S": 1.80, "P": 1.80}

WATER_RESNAMES = frozenset({"HOH", "WAT", "DOD", "H2O", "TIP", "TIP3", "SOL"})


@dataclass(frozen=True)
class RadiusTable:
    """Element symbol (case-insensitive) to radius map with a default."""

    radii: Mapping[str, float]
    default_radius: float = 1.50

    def __post_init__(self):
        normalized = {}
        for element, radius in self.radii.items():
            radius = float(radius)
            if not 0.0 < radius <= 3.0:
                raise ValueError(f"radius for {element!r} must be in (0, 3], got {radius}")
            normalized[str(element).strip().upper()] = radius
        if not 0.0 < self.default_radius <= 3.0:
            raise ValueError("default radius must be in (0, 3]")
        object.__setattr__(self, "radii", normalized)

    @classmethod
    def default(cls) -> "RadiusTable":
        return cls(radii=DEFAULT_RADII)

    @classmethod
    def from_text(cls, text: str) -> "RadiusTable":
        """Parse lines of the form "EL radius"; "default" sets the fallback."""
        radii = {}
        default = 1.50
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedLine(lineno, f"expected 'ELEMENT RADIUS', got {raw!r}")
            try:
                value = float(parts[1])
            except ValueError:
                raise MalformedLine(lineno, f"bad radius {parts[1]!r}") from None
            if parts[0].strip().upper() in ("DEFAULT", "*"):
                default = value
            else:
                radii[parts[0]] = value
        return cls(radii=radii, default_radius=default)

    @classmethod
    def load(cls, path) -> "RadiusTable":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_text(handle.read())

    def lookup(self, element: str) -> float:
        return self.radii.get(str(element).strip().upper(), self.default_radius)


def parse_xyzr(text: str) -> list[Ball]:
    """Parse "x y z r" records, one per line; '#' starts a comment."""
    balls = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise MalformedLine(lineno, f"expected 4 fields, got {len(parts)}")
        try:
            x, y, z, r = (float(p) for p in parts)
        except ValueError:
            raise MalformedLine(lineno, f"non-numeric field in {raw!r}") from None
        if not all(math.isfinite(v) for v in (x, y, z, r)):
            raise NonFiniteValue(lineno, f"non-finite value in {raw!r}")
        if r <= 0.0:
            raise NonPositiveRadius(lineno, r)
        balls.append(Ball(center=(x, y, z), radius=r, index=len(balls)))
    return balls


def format_xyzr(balls: Iterable[Ball]) -> str:
    lines = [f"{b.center[0]!r} {b.center[1]!r} {b.center[2]!r} {b.radius!r}" for b in balls]
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class PdbAtom:
    """One ATOM/HETATM record, already reduced to the fields we use."""

    record: str
    name: str
    resname: str
    chain: str
    resseq: str
    icode: str
    x: float
    y: float
    z: float
    element: str
    line_number: int

    @property
    def is_water(self) -> bool:
        return self.resname.upper() in WATER_RESNAMES

    @property
    def is_hydrogen(self) -> bool:
        return self.element.upper() in ("H", "D")

    @property
    def is_het(self) -> bool:
        return self.record == "HETATM"


def _element_of(element_field: str, name_field: str) -> str:
    element = element_field.strip()
    if not element:
        # fall back to the first alphabetic character of the atom name
        for ch in name_field:
            if ch.isalpha():
                element = ch
                break
    return element.capitalize()


def parse_pdb_atoms(text: str) -> list[PdbAtom]:
    """ATOM/HETATM records from fixed-column PDB text.

    Keeps the first altLoc variant per atom site; waters are retained (the
    caller decides what to filter).
    """
    atoms = []
    seen_sites = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        record = raw[0:6].strip()
        if record not in ("ATOM", "HETATM"):
            continue
        name = raw[12:16]
        resname = raw[17:20].strip()
        chain = raw[21:22]
        resseq = raw[22:26].strip()
        icode = raw[26:27]
        site = (name, resname, chain, resseq, icode)
        if site in seen_sites:
            continue
        seen_sites.add(site)
        try:
            x = float(raw[30:38])
            y = float(raw[38:46])
            z = float(raw[46:54])
        except ValueError:
            raise MalformedRecord(lineno, f"bad coordinates in {raw!r}") from None
        if not all(math.isfinite(v) for v in (x, y, z)):
            raise MalformedRecord(lineno, f"non-finite coordinates in {raw!r}")
        atoms.append(
            PdbAtom(
                record=record,
                name=name,
                resname=resname,
                chain=chain,
                resseq=resseq,
                icode=icode,
                x=x,
                y=y,
                z=z,
                element=_element_of(raw[76:78], name),
                line_number=lineno,
            )
        )
    if not atoms:
        raise NoAtoms("no ATOM/HETATM records found")
    return atoms


def filter_atoms(
    atoms: Sequence[PdbAtom],
    include_het: bool = False,
    include_water: bool = False,
    include_hydrogens: bool = False,
) -> list[PdbAtom]:
    out = []
    for atom in atoms:
        if atom.is_water and not include_water:
            continue
        if atom.is_het and not atom.is_water and not include_het:
            continue
        if atom.is_hydrogen and not include_hydrogens:
            continue
        out.append(atom)
    return out


def balls_from_atoms(atoms: Sequence[PdbAtom], table: RadiusTable) -> list[Ball]:
    return [
        Ball(center=(a.x, a.y, a.z), radius=table.lookup(a.element), index=i)
        for i, a in enumerate(atoms)
    ]


def parse_pdb(text: str, table: RadiusTable) -> list[Ball]:
    """One ball per ATOM/HETATM record (waters and heteroatoms included)."""
    return balls_from_atoms(parse_pdb_atoms(text), table)


def write_complex(k: AlphaComplex, version: str = __version__) -> str:
    """Canonical ASCII serialization: a header line, then one line per
    simplex ("dim v0 [v1 [v2 [v3]]]") in (dimension, lexicographic) order.
    Byte-identical for identical complexes."""
    lines = [f"alphax {version} n={k.ball_count} alpha={float(k.alpha)!r}"]
    for dim in range(4):
        for row in k.level(dim):
            lines.append(f"{dim} " + " ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_complex(text: str) -> AlphaComplex:
    """Parse a serialized complex back; validates the canonical ordering."""
    lines = text.splitlines()
    if not lines:
        raise MalformedLine(1, "empty document")
    header = lines[0].split()
    if (
        len(header) != 4
        or header[0] != "alphax"
        or not header[2].startswith("n=")
        or not header[3].startswith("alpha=")
    ):
        raise MalformedLine(1, f"bad header {lines[0]!r}")
    try:
        ball_count = int(header[2][2:])
        alpha = float(header[3][6:])
    except ValueError:
        raise MalformedLine(1, f"bad header {lines[0]!r}") from None
    levels: list[list[list[int]]] = [[], [], [], []]
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            fields = [int(f) for f in raw.split()]
        except ValueError:
            raise MalformedLine(lineno, f"non-integer field in {raw!r}") from None
        dim, verts = fields[0], fields[1:]
        if not 0 <= dim <= 3 or len(verts) != dim + 1:
            raise MalformedLine(lineno, f"bad simplex record {raw!r}")
        if any(not 0 <= v < ball_count for v in verts):
            raise MalformedLine(lineno, "vertex index out of range")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise MalformedLine(lineno, "vertices must be strictly increasing")
        levels[dim].append(verts)
    return AlphaComplex.from_rows(
        vertices=np.asarray([v[0] for v in levels[0]], dtype=np.int64),
        edges=np.asarray(levels[1], dtype=np.int64).reshape(-1, 2),
        triangles=np.asarray(levels[2], dtype=np.int64).reshape(-1, 3),
        tets=np.asarray(levels[3], dtype=np.int64).reshape(-1, 4),
        alpha=alpha,
        ball_count=ball_count,
    )


def stats_csv(k: AlphaComplex) -> str:
    """Per-dimension counts plus total and Euler characteristic rows."""
    stats = complex_stats(k)
    lines = ["dim,count"]
    lines += [f"{dim},{count}" for dim, count in enumerate(stats.counts)]
    lines.append(f"total,{stats.total}")
    lines.append(f"euler,{stats.euler}")
    return "\n".join(lines) + "\n"
