"""Built-in worked examples with their recorded verdicts.

Each entry is stored as an instance document (the CLI input format), so
``export`` followed by ``check --input`` is the same computation as
``catalog check``.

Coordinates follow the drawings they were read from:

* SL2 entries use the fundamental-weight basis (α = 2, ρ = 1).
* GL2 entries use the square grid with α = (1,-1) and the centre along (1,1).
* SO4 entries use the square grid with roots (1,1) and (1,-1).
* A2 and G2 entries use the triangular grid with frame e1 = (1,0),
  e2 = (1/2, √3/2): a drawn point (x, y) has coordinates (a, b) with
  x = a + b/2, y = (√3/2) b.  For A2 this frame is the fundamental-weight
  basis, so α1 = (2,-1), α2 = (-1,2), α1+α2 = (1,1) and 2ρ = (2,2).  For G2
  the drawn short roots are (1,0), (0,1), (-1,1) and the long ones (-2,1),
  (-1,2), (1,1), so 2ρ = (-2,6).
"""
from __future__ import annotations

import copy
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import _linalg as la
from .errors import InputError
from .instance import Instance, parse_document, rational_list, rational_lists
from .kstab import SphericalDatum, Verdict, check_kstability, check_with_soliton
from .rootsys import (
    build_root_system,
    from_simple_roots,
    group_compactification_data,
    symmetric_space_data,
)

EXPECTED = ("stable", "not_semistable", "not_ke_but_soliton", "unstable")

_HALF = Fraction(1, 2)
_TRIANGULAR_FORM = [["2/3", "1/3"], ["1/3", "2/3"]]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    document: dict
    expected_status: str
    expected_barycenter: tuple | None
    source_note: str

    @property
    def instance(self) -> Instance:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return parse_document(copy.deepcopy(self.document))

    @property
    def datum(self) -> SphericalDatum:
        return self.instance.datum


def _group_doc(name, simple_roots, form, vertices, m_minus, note):
    rs = from_simple_roots(simple_roots, form)
    g = group_compactification_data(rs)
    return {
        "name": name,
        "note": note,
        "root_system": {"simple_roots": rational_lists(rs.simple_roots), "form": rational_lists(rs.form)},
        "polytope": {"vertices": rational_lists(vertices)},
        "density": {"phi_p": [{"root": rational_list(a), "multiplicity": 2} for a in rs.positive_roots]},
        "valuation": {
            "rays": rational_lists(g.rays),
            "lineality_basis": rational_lists(g.lineality),
            "m_minus_basis": rational_lists(m_minus),
        },
    }


def _symmetric_doc(name, type_letter, rank, vertices, m_minus, note):
    rs = build_root_system(type_letter, rank)
    sym = symmetric_space_data(rs, tuple(la.neg(r) for r in la.identity(rank)))
    return {
        "name": name,
        "note": note,
        "root_system": {"type": type_letter, "rank": rank},
        "polytope": {"vertices": rational_lists(vertices)},
        "density": {"phi_p": "auto"},
        "valuation": {
            "rays": rational_lists(sym.weyl_chamber_generators),
            "lineality_basis": rational_lists(sym.weyl_chamber_lineality),
            "m_minus_basis": rational_lists(m_minus),
        },
    }


def _v(*xs):
    return tuple(la.frac(x) for x in xs)


def _build() -> dict[str, CatalogEntry]:
    out: dict[str, CatalogEntry] = {}

    def add(doc, status, bar):
        out[doc["name"]] = CatalogEntry(doc["name"], doc, status,
                                        None if bar is None else tuple(la.vec(bar)), doc["note"])

    # SL2 / T and SL2 / N(T): rank one symmetric spaces, σ = -id
    add(_symmetric_doc("p1xp1_sl2", "A", 1, [_v(0), _v(4)], [_v(2)],
                       "P1 x P1 under the diagonal SL2, moment segment [0,4] in weight coordinates"),
        "stable", [Fraction(8, 3)])
    add(_symmetric_doc("p2_sl2", "A", 1, [_v(0), _v(6)], [_v(4)],
                       "P2 as the space of binary quadrics, moment segment [0,6]"),
        "stable", [Fraction(4)])

    gl2 = [
        [_v(-2, -2), _v(2, 2), _v(2, -2)],
        [_v(2, 2), _v(2, -1), _v(1, -2), _v(-2, -2)],
        [_v(2, -1), _v(2, -2), _v(1, -2), _v(-_HALF, -_HALF), _v(_HALF, _HALF)],
        [_v(2, 2), _v(2, -2), _v(1, -2), _v(-_HALF, -_HALF)],
        [_v(2, -1), _v(2, -3), _v(-_HALF, -_HALF), _v(_HALF, _HALF)],
        [_v(-_HALF, -_HALF), _v(2, 2), _v(2, -3)],
    ]
    for i, verts in enumerate(gl2, start=1):
        note = (f"GL2 group compactification #{i}; square grid, root (1,-1), centre (1,1); "
                "density κ(α,p)^2")
        status = "stable" if i <= 3 else "not_ke_but_soliton"
        bar = [Fraction(2343, 1750), Fraction(-2343, 1750)] if i == 3 else None
        add(_group_doc(f"gl2_cpt_{i}", [_v(1, -1)], la.identity(2), verts,
                       la.identity(2), note), status, bar)

    so4 = [
        [_v(0, 0), _v(3, 3), _v(3, -3)],
        [_v(3, 3), _v(3, 0), _v(Fraction(3, 2), Fraction(-3, 2)), _v(0, 0)],
        [_v(3, 3), _v(3, 1), _v(2, -1), _v(Fraction(3, 2), Fraction(-3, 2)), _v(0, 0)],
    ]
    for i, verts in enumerate(so4, start=1):
        note = f"SO4 group compactification #{i}; square grid, roots (1,1), (1,-1); 2ρ = (2,0)"
        add(_group_doc(f"so4_cpt_{i}", [_v(1, 1), _v(1, -1)], la.identity(2), verts,
                       la.identity(2), note), "stable" if i == 1 else "not_semistable", None)

    frame = ("triangular grid read as (a,b) with x = a + b/2, y = (√3/2) b; "
             "this is the fundamental-weight basis, α1 = (2,-1), α2 = (-1,2)")
    add(_symmetric_doc("complete_conics", "A", 2, [_v(0, 0), _v(6, 0), _v(4, 4), _v(0, 6)],
                       [_v(4, -2), _v(-2, 4)],
                       f"complete conics, wonderful SL3/N(SO3); {frame}; drawn vertices "
                       "(0,0), (6,0), (6,2√3), (3,3√3)"),
        "stable", None)
    add(_symmetric_doc("sl3_so3_picard1", "A", 2, [_v(0, 0), _v(6, 0), _v(0, 6)],
                       [_v(2, 0), _v(0, 2)],
                       f"Picard number one embedding of SL3/SO3; {frame}; drawn vertices "
                       "(0,0), (6,0), (3,3√3)"),
        "stable", None)
    g2_note = ("G2 group compactification of Picard number one; triangular grid read as (a,b) "
               "with x = a + b/2, y = (√3/2) b; short simple root (1,0), long simple root (-2,1); "
               "drawn vertices (0,0), (0,7√3/2), (7/2,7√3/2)")
    add(_group_doc("g2_cpt", [_v(1, 0), _v(-2, 1)], la.mat(_TRIANGULAR_FORM),
                   [_v(0, 0), _v(0, 7), _v(Fraction(-7, 2), 7)], la.identity(2), g2_note),
        "stable", None)
    sl3_note = f"SL3 group compactification of Picard number one; {frame}; drawn vertices (0,0), (5,0), (5/2,5√3/2)"
    rs = build_root_system("A", 2)
    add(_group_doc("sl3_cpt", rs.simple_roots, rs.form, [_v(0, 0), _v(5, 0), _v(0, 5)],
                   la.identity(2), sl3_note), "stable", None)
    return out


_ENTRIES: dict[str, CatalogEntry] | None = None


def _entries() -> dict[str, CatalogEntry]:
    global _ENTRIES
    if _ENTRIES is None:
        _ENTRIES = _build()
    return _ENTRIES


def list_entries() -> list[str]:
    return list(_entries())


def get_entry(name: str) -> CatalogEntry:
    try:
        return _entries()[name]
    except KeyError:
        raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(list_entries())}") from None


def export_entry(name: str) -> dict:
    return copy.deepcopy(get_entry(name).document)


def horospherical_variant(entry: CatalogEntry | str) -> SphericalDatum:
    """Same polytope and density with the valuation cone replaced by the whole space."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    doc = copy.deepcopy(entry.document)
    n = len(doc["polytope"]["vertices"][0])
    doc["name"] = entry.name + "_horospherical"
    doc["valuation"]["rays"] = []
    doc["valuation"]["lineality_basis"] = rational_lists(la.identity(n))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse_document(doc).datum


@dataclass(frozen=True)
class EntryCheck:
    name: str
    expected: str
    verdict: Verdict
    soliton_verdict: Verdict | None
    ok: bool
    barycenter_ok: bool | None


def verify_entry(name: str, tol: float = 1e-10) -> EntryCheck:
    """Run the verdict (and the soliton when needed) and compare with the record."""
    e = get_entry(name)
    d = e.datum
    v = check_kstability(d, tol)
    sv = None
    if e.expected_status == "stable":
        ok = v.status == "stable"
    elif e.expected_status in ("not_semistable", "unstable"):
        ok = v.status == "unstable" and v.destabilizer is not None
        if e.expected_status == "not_semistable" and ok and d.valuation.lineality_basis:
            _, sv = check_with_soliton(d, tol)
            ok = sv.status == "unstable"
    else:  # not_ke_but_soliton
        ok = v.status != "stable"
        try:
            _, sv = check_with_soliton(d, tol)
            ok = ok and sv.status == "stable"
        except Exception:  # noqa: BLE001 - any solver failure means no certificate
            ok = False
    bar_ok = None
    if e.expected_barycenter is not None:
        bar_ok = v.exact and tuple(v.barycenter) == e.expected_barycenter
        ok = ok and bar_ok
    return EntryCheck(name, e.expected_status, v, sv, ok, bar_ok)
