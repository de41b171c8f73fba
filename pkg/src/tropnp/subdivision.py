"""Cell decompositions of R^n induced by tuples of tropical polynomials.

Each factor (a max-affine family, optionally extended by a virtual level as
a pseudo-term at the origin) partitions R^n into argmax regions; the
decomposition is the common refinement.  Every cell carries its dual data:
per-factor argmax sets, their convex hulls (the Minkowski summands), and the
dual polytope, realizing the inclusion-reversing duality with the mixed
subdivision of the Minkowski sum of the extended Newton polytopes.

Factor regions are enumerated through the lifted hull: occurring argmax sets
correspond to the faces of conv{(a, coeff_a)} in R^(n+1) whose normal cone
meets {last coordinate > 0}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .geom import (HBuilder, Polyhedron, _homog_ineq, convex_hull, frac_vec,
                   vdot, vsub)
from .tropical import MINUS_INF, ExtRat, is_minus_inf


@dataclass(frozen=True)
class FactorCell:
    """One argmax region of a single factor: closed cell plus dual data."""
    argmax: frozenset          # exponent tuples attaining the maximum
    has_level: bool            # the virtual level ties the maximum
    eq_h: tuple                # homogenized equality constraints
    in_h: tuple                # homogenized inequality constraints
    dual_points: tuple         # argmax exponents, the level mapped to the origin

    @property
    def bends(self) -> bool:
        return len(self.argmax) + (1 if self.has_level else 0) >= 2


def _entries(n, terms, level):
    entries = [(exp, Fraction(c), False) for exp, c in sorted(terms.items())]
    if not is_minus_inf(level):
        origin = tuple([0] * n)
        if any(exp == origin for exp, _, _ in entries):
            raise ValueError("virtual level clashes with an origin term")
        entries.append((origin, Fraction(level), True))
    return entries


@lru_cache(maxsize=None)
def _factor_cells(n: int, terms: tuple, level) -> tuple:
    """All argmax regions of max over terms (+ level), as FactorCells."""
    entries = _entries(n, dict(terms), level)
    if not entries:
        return (FactorCell(frozenset(), False, (), (), ()),)
    if len(entries) == 1:
        exp, _, is_level = entries[0]
        return (FactorCell(frozenset() if is_level else frozenset([exp]),
                           is_level, (), (), (exp,)),)

    lifted = [exp + (coeff,) for exp, coeff, _ in entries]
    hull = Polyhedron.from_generators(n + 1, lifted).dual_description()
    ineqs, eqs = hull.hrep()
    eq_has_last = any(a[-1] != 0 for a, _ in eqs)

    faces = list(hull.proper_faces_with_active())
    faces.append((hull, tuple()))
    cells = []
    seen = set()
    for face, active in faces:
        if not (eq_has_last or any(ineqs[i][0][-1] > 0 for i in active)):
            continue  # no exposing direction (x, 1): argmax set never occurs
        members = []
        for idx, (exp, coeff, _) in enumerate(entries):
            p = lifted[idx]
            if all(vdot(ineqs[i][0], p) == ineqs[i][1] for i in active):
                members.append(idx)
        key = frozenset(members)
        if key in seen:
            continue
        seen.add(key)
        base_exp, base_coeff, _ = entries[members[0]]
        eq_h, in_h = [], []
        member_set = set(members)
        for idx, (exp, coeff, _) in enumerate(entries):
            if idx == members[0]:
                continue
            normal = vsub(frac_vec(exp), frac_vec(base_exp))
            offset = base_coeff - coeff
            h = _homog_ineq(normal, offset)
            (eq_h if idx in member_set else in_h).append(h)
        argmax = frozenset(entries[i][0] for i in members if not entries[i][2])
        has_level = any(entries[i][2] for i in members)
        dual_points = tuple(sorted(entries[i][0] for i in members))
        cells.append(FactorCell(argmax, has_level, tuple(eq_h), tuple(in_h),
                                dual_points))
    cells.sort(key=lambda c: (len(c.dual_points), c.dual_points))
    return tuple(cells)


def factor_cells(n: int, terms: Mapping, level: ExtRat = MINUS_INF):
    return _factor_cells(n, tuple(sorted(terms.items())), level)


def _argmax_at(terms: Mapping, level, x):
    """(argmax exponent set, level ties) of max(terms, level) at x."""
    best = None if is_minus_inf(level) else Fraction(level)
    argmax = set()
    has_level = best is not None
    for exp, coeff in terms.items():
        v = vdot(x, exp) + coeff
        if best is None or v > best:
            best, argmax, has_level = v, {exp}, False
        elif v == best:
            argmax.add(exp)
    return frozenset(argmax), has_level


# ---------------------------------------------------------------------------
# cells and complexes
# ---------------------------------------------------------------------------

class Cell:
    """A (relatively open) cell, stored by its closure, with dual data."""

    __slots__ = ("id", "closure", "dim", "argmax", "level_flags", "summands",
                 "dual", "_rec")

    def __init__(self, cid, closure, argmax, level_flags, summands, dual):
        self.id = cid
        self.closure = closure
        self.dim = closure.dim
        self.argmax = argmax            # tuple of frozensets, one per factor
        self.level_flags = level_flags  # tuple of bools, level in argmax
        self.summands = summands        # tuple of Polyhedron (dual summands)
        self.dual = dual                # Minkowski sum of the summands
        self._rec = None

    def recession_cone(self):
        if self._rec is None:
            self._rec = self.closure.recession_cone()
        return self._rec

    def summand_dims(self):
        return tuple(s.dim for s in self.summands)

    def __repr__(self):
        return f"Cell(id={self.id}, dim={self.dim}, dual_dim={self.dual.dim})"


class CellComplex:
    """A polyhedral cell decomposition of R^n with dual mixed-subdivision data.

    With `bend_only` the complex holds only the cells on which every factor
    bends (the virtual preimage of the level vector), not a full partition.
    """

    def __init__(self, n, levels, cells, factor_polytopes, bend_only=False):
        self.n = n
        self.levels = tuple(levels)
        self.cells = tuple(cells)
        self.factor_polytopes = tuple(factor_polytopes)
        self.bend_only = bend_only
        self._sum = None

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    @property
    def sum_polytope(self) -> Polyhedron:
        if self._sum is None:
            acc = self.factor_polytopes[0]
            for p in self.factor_polytopes[1:]:
                acc = acc.minkowski_sum(p)
            self._sum = acc.dual_description()
        return self._sum

    def is_transversal(self):
        """(all cells transversal, ids of offending cells)."""
        offenders = [c.id for c in self.cells
                     if c.dual.dim != sum(c.summand_dims())]
        return (not offenders, offenders)

    def cell_containing(self, x):
        """The unique cell whose relative interior contains x (full complexes)."""
        x = frac_vec(x)
        for cell in self.cells:
            if not cell.closure.contains(x):
                continue
            ok = True
            for terms, level, S, has in zip(self._term_maps, self.levels,
                                            cell.argmax, cell.level_flags):
                am, hl = _argmax_at(terms, level, x)
                if am != S or hl != has:
                    ok = False
                    break
            if ok:
                return cell
        return None

    def counts_by_dim(self):
        counts = {}
        for c in self.cells:
            counts[c.dim] = counts.get(c.dim, 0) + 1
        return counts


@dataclass(frozen=True)
class DualCell:
    dual: Polyhedron
    summands: tuple
    cell_id: int


class MixedSubdivision:
    """The dual subdivision of the Minkowski sum, aligned with the complex."""

    def __init__(self, complex_: CellComplex):
        self.complex = complex_
        self.entries = tuple(
            DualCell(c.dual, c.summands, c.id) for c in complex_.cells)

    def maximal(self):
        top = self.complex.sum_polytope.dim
        return [e for e in self.entries if e.dual.dim == top]


def decomposition(term_maps: Sequence[Mapping], levels: Optional[Sequence[ExtRat]] = None,
                  n: Optional[int] = None, *, bend_only: bool = False) -> CellComplex:
    """Common refinement of the argmax-region decompositions of the factors.

    term_maps: one mapping exponent -> coefficient per factor (may be empty).
    levels: per-factor virtual level; all -inf gives the plain corner-locus
    decomposition.  Every nonempty profile intersection is kept once, keyed
    by the exact per-factor argmax sets on its relative interior.
    """
    if n is None:
        n = next(len(e) for tm in term_maps for e in tm)
    if levels is None:
        levels = [MINUS_INF] * len(term_maps)
    if len(levels) != len(term_maps):
        raise ValueError("levels length must match the number of factors")

    factor_lists = []
    for terms, level in zip(term_maps, levels):
        cells = factor_cells(n, terms, level)
        if bend_only:
            cells = tuple(c for c in cells if c.bends)
        factor_lists.append(cells)

    found = []

    def search(i, builder, profile):
        if i == len(factor_lists):
            poly = builder.to_polyhedron()
            if poly.is_empty:
                return
            p = poly.relative_interior_point()
            for terms, level, fc in zip(term_maps, levels, profile):
                am, hl = _argmax_at(terms, level, p)
                if am != fc.argmax or hl != fc.has_level:
                    return  # point sits in a finer cell; that profile owns it
            found.append((profile, poly))
            return
        for fc in factor_lists[i]:
            b = builder.clone()
            for h in fc.eq_h:
                b.add_homog(h, equality=True)
            if b.is_empty:
                continue
            for h in fc.in_h:
                b.add_homog(h)
            if b.is_empty:
                continue
            search(i + 1, b, profile + (fc,))

    search(0, HBuilder(n), ())

    found.sort(key=lambda t: (t[1].dim, t[1].canonical_key()))
    origin = tuple([Fraction(0)] * n)
    cells = []
    for cid, (profile, poly) in enumerate(found):
        summands = []
        for fc in profile:
            pts = fc.dual_points if fc.dual_points else (origin,)
            summands.append(convex_hull(pts))
        dual = summands[0]
        for s in summands[1:]:
            dual = dual.minkowski_sum(s)
        cells.append(Cell(cid, poly,
                          tuple(fc.argmax for fc in profile),
                          tuple(fc.has_level for fc in profile),
                          tuple(summands), dual.dual_description()))

    polytopes = []
    for terms, level in zip(term_maps, levels):
        pts = list(terms)
        if not is_minus_inf(level) or not pts:
            pts = pts + [tuple([0] * n)]
        polytopes.append(convex_hull(pts))

    cx = CellComplex(n, levels, cells, polytopes, bend_only=bend_only)
    cx._term_maps = list(term_maps)
    return cx


def corner_locus_pieces(terms: Mapping, n: int) -> list:
    """The corner locus of one tropical polynomial as closed cells."""
    cx = decomposition([terms], [MINUS_INF], n=n)
    return [c.closure for c in cx.cells if len(c.argmax[0]) >= 2]


def regular_subdivision(support: Sequence, lift: Mapping) -> MixedSubdivision:
    """Regular subdivision of conv(support) from the lifted upper hull.

    Max-plus convention: the subdivision cells are the projections of the
    upper faces of conv{(a, lift(a))}, i.e. the domains where each argmax
    set is attained.  The origin is allowed here (plain lifted supports, no
    virtual level is involved).
    """
    support = [tuple(int(x) for x in p) for p in support]
    if not support:
        raise ValueError("empty support")
    terms = {p: Fraction(lift[p]) for p in support}
    cx = decomposition([terms], [MINUS_INF], n=len(support[0]))
    return MixedSubdivision(cx)


# ---------------------------------------------------------------------------
# duality invariants
# ---------------------------------------------------------------------------

def duality_violations(cx: CellComplex) -> list:
    """Violations of the cell/dual-polytope duality on a complex.

    Checks, cell by cell: the dual is the Minkowski sum of the summands; the
    cell and dual dimensions are complementary; their affine spans are
    orthogonal; and the dual lies on a proper facet of the Minkowski-sum
    polytope exactly when the cell recedes along that facet's outward normal.
    """
    problems = []
    sum_poly = cx.sum_polytope
    ineqs, _ = sum_poly.hrep()
    facets = [(normal, sum_poly.face_in_direction(normal)) for normal, _ in ineqs]
    for cell in cx.cells:
        recomposed = cell.summands[0]
        for s in cell.summands[1:]:
            recomposed = recomposed.minkowski_sum(s)
        if not recomposed.equal_as_sets(cell.dual):
            problems.append((cell.id, "dual is not the sum of its summands"))
        if cell.dim + cell.dual.dim != cx.n:
            problems.append((cell.id, "dim cell + dim dual != n"))
        cell_dirs = _direction_span(cell.closure)
        dual_dirs = _direction_span(cell.dual)
        if any(vdot(u, v) != 0 for u in cell_dirs for v in dual_dirs):
            problems.append((cell.id, "cell and dual spans not orthogonal"))
        rec = cell.recession_cone()
        for normal, facet in facets:
            on_facet = facet.contains_polyhedron(cell.dual)
            recedes = rec.contains(normal)
            if on_facet != recedes:
                problems.append(
                    (cell.id, f"facet duality failed for normal {normal}"))
    return problems


def _direction_span(p: Polyhedron):
    verts = p.vertices
    dirs = [vsub(v, verts[0]) for v in verts[1:]]
    dirs += [frac_vec(r) for r in p.rays]
    dirs += [frac_vec(l) for l in p.lineality]
    return [d for d in dirs if any(x != 0 for x in d)]
