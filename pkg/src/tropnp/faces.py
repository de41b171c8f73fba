"""Extended Newton polytopes and their classified tuple-faces.

For each component support A_i the extended polytope adjoins the origin:
conv(A_i u {0}).  A tuple-face picks one face per member so that the
Minkowski sum of the picks is a face of the summed polytope; these are
enumerated from the proper faces of the sum, each witnessed by a relative
interior vector of its outer normal cone.  Classification flags:

* origin: every member face contains the origin,
* pre_origin: some member face contains the origin,
* dicritical: the whole normal cone of the summed face reaches a vector
  with a strictly positive coordinate and no member face degenerates to
  the origin vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geom import (Cone, DIM_CAP, GeometryError, Polyhedron, convex_hull,
                   frac_vec, primitive, vadd)
from .tropical import TropicalMap


class DimensionCapExceeded(ValueError):
    """Ambient dimension above the configured cap for exact enumeration."""


@dataclass(frozen=True)
class PolytopeTuple:
    """The extended Newton polytopes of a map together with their sum."""
    members: tuple            # one Polyhedron conv(A_i u {0}) per component
    sum: Polyhedron

    @property
    def n(self) -> int:
        return self.sum.n


@dataclass
class TupleFace:
    """One tuple-face: member faces, a witness normal, classification flags."""
    id: int
    members: tuple                 # tuple of Polyhedron, one per component
    witness_normal: tuple          # primitive integer relint normal
    normal_cone: Cone              # outer normal cone of the summed face
    sum_face: Polyhedron
    dicritical: bool = False
    origin: bool = False
    pre_origin: bool = False
    strictly_pre_origin: bool = False
    origin_members: frozenset = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return self.sum_face.n


def delta0(supports: Sequence, n: int = None, dim_cap: int = DIM_CAP) -> PolytopeTuple:
    """Extended Newton polytopes conv(support_i u {0}) and their Minkowski sum.

    Accepts a TropicalMap or a list of exponent collections.
    """
    if isinstance(supports, TropicalMap):
        n = supports.n
        supports = [p.support for p in supports]
    if n is None:
        n = len(next(iter(supports[0])))
    if n > dim_cap:
        raise DimensionCapExceeded(
            f"ambient dimension {n} exceeds the cap {dim_cap}")
    origin = tuple([0] * n)
    members = []
    for sup in supports:
        pts = [tuple(int(x) for x in p) for p in sup]
        members.append(convex_hull(pts + [origin]))
    acc = members[0]
    for p in members[1:]:
        acc = acc.minkowski_sum(p)
    return PolytopeTuple(tuple(members), acc.dual_description())


def _classify(face: TupleFace) -> None:
    origin = tuple([Fraction(0)] * face.n)
    in_members = frozenset(
        i for i, m in enumerate(face.members) if m.contains(origin))
    face.origin_members = in_members
    face.origin = len(in_members) == len(face.members)
    face.pre_origin = bool(in_members)
    face.strictly_pre_origin = face.pre_origin and not face.origin
    some_positive = face.normal_cone.has_positive_coordinate()
    degenerate = any(
        m.dim == 0 and m.contains(origin) for m in face.members)
    face.dicritical = some_positive and not degenerate


def enumerate_tuple_faces(tup: PolytopeTuple) -> list:
    """All tuple-faces: one per proper face of the summed polytope, plus the
    improper face when the sum is lower-dimensional.

    The witness normal is the sum of the outer normals of the facets through
    the face, which lies in the relative interior of the normal cone; the
    member faces are the argmax faces of the members in that direction.

    For a full-dimensional sum the improper face has a trivial normal cone
    and can never matter, but when all supports degenerate onto a common
    lower-dimensional subspace its normal cone is the orthogonal complement
    and it carries genuine contributions, so it is enumerated too.
    """
    faces = []
    for fid, (sum_face, active) in enumerate(tup.sum.proper_faces_with_active()):
        ncone = tup.sum.normal_cone_of_face(active)
        witness = tuple(Fraction(0) for _ in range(tup.n))
        for r in ncone.rays:
            witness = vadd(witness, frac_vec(r))
        if all(x == 0 for x in witness):
            # the face is cut out by equalities alone; any nonzero lineality
            # direction exposes it
            witness = frac_vec(ncone.lineality[0])
        witness = primitive(witness)
        members = []
        for m in tup.members:
            g = m.face_in_direction(witness)
            if g is None:
                raise GeometryError("witness normal unbounded on a member")
            members.append(g)
        tf = TupleFace(fid, tuple(members), witness, ncone, sum_face)
        _classify(tf)
        faces.append(tf)
    if tup.sum.dim < tup.n:
        ncone = tup.sum.normal_cone_of_face([])
        witness = primitive(frac_vec(ncone.lineality[0]))
        tf = TupleFace(len(faces), tuple(tup.members), witness, ncone, tup.sum)
        _classify(tf)
        faces.append(tf)
    return faces


def classify(face: TupleFace) -> TupleFace:
    """Recompute the classification flags in place (idempotent)."""
    _classify(face)
    return face
