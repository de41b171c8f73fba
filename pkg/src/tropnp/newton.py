"""Recovery of the normal fan of the Newton polytope dual to a
tropical non-properness set.

The set is a finite union of polytopes of codimension >= 1.  When it is the
corner locus of some tropical polynomial, the recession cones of its pieces
tile the codimension-1 skeleton of the normal fan of that polynomial's
Newton polytope; the maximal cones are the closures of the connected
components of the complement.  The construction below rebuilds the fan:

1. take the recession cone of every piece,
2. cut R^n by every constraint hyperplane of those cones (a central
   arrangement refined enough that each recession cone is a union of
   arrangement cells),
3. merge adjacent full-dimensional arrangement cones whose shared wall is
   not inside the skeleton, and collect all faces of the merged cones.

Counting cones by dimension gives the face-vector (the number of
j-dimensional polytope faces equals the number of (n-j)-dimensional cones),
and the fan's minimal-plus-one-dimensional cones give the facet normals.
Only the combinatorial type and slopes are recovered: edge lattice lengths
would need tropical multiplicities, which the set does not carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geom import (Cone, Polyhedron, frac_vec, is_zero_vec, matrix_rank,
                   primitive, vdot)
from .engine import TNPSet


class FanError(ValueError):
    """The input union is not the corner locus of any tropical polynomial
    (or is empty), so no Newton polytope can be recovered."""


@dataclass
class RecoveredFan:
    """A complete fan with face counts and facet slopes of the dual polytope."""
    n: int
    cones_by_dim: dict              # dim -> sorted list of Cone
    face_vector: tuple              # entry j counts cones of dimension n - j
    facet_normals: tuple            # primitive outer normals of the facets
    span_dim: int                   # dimension of the dual polytope
    span_normals: tuple             # normals of the polytope's affine span

    @property
    def maximal_cones(self):
        return self.cones_by_dim[self.n]


def _skeleton_cones(pieces: Sequence[Polyhedron]):
    cones = []
    seen = set()
    for p in pieces:
        c = p.recession_cone()
        if c.is_trivial:
            continue
        key = c.canonical_key()
        if key not in seen:
            seen.add(key)
            cones.append(c)
    return cones


def _cut_hyperplanes(cones: Sequence[Cone], n: int):
    normals = set()
    for c in cones:
        ineqs, eqs = c.as_polyhedron().hrep()
        for a, _ in ineqs:
            v = primitive(a)
            normals.add(max(v, tuple(-x for x in v)))
        for a, _ in eqs:
            v = primitive(a)
            normals.add(max(v, tuple(-x for x in v)))
    return sorted(normals)


def _arrangement(n: int, hyperplanes):
    """Sign-vector cells of the central arrangement, as (signs, Cone) pairs."""
    from .geom import HBuilder
    cells = []

    def rec(i, builder, signs):
        if i == len(hyperplanes):
            poly = builder.to_polyhedron()
            if poly.is_empty:
                return
            cells.append((signs, poly))
            return
        a = hyperplanes[i]
        for s in (-1, 0, 1):
            b = builder.clone()
            if s == 0:
                b.add_eq(a, 0)
            elif s == 1:
                b.add_ineq(tuple(-x for x in a), 0)
            else:
                b.add_ineq(a, 0)
            if b.is_empty:
                continue
            rec(i + 1, b, signs + (s,))

    rec(0, HBuilder(n), ())
    return cells


def recover_fan(s: TNPSet) -> RecoveredFan:
    """Rebuild the normal fan of the Newton polytope dual to the set."""
    if s.is_empty:
        raise FanError("empty set: there is no polytope to recover")
    n = s.n
    pieces = s.polytopes
    if any(p.dim > n - 1 for p in pieces):
        raise FanError("pieces must have codimension at least one")

    skeleton = _skeleton_cones(pieces)
    if not skeleton:
        # all pieces bounded: impossible for a corner locus
        raise FanError("no unbounded piece: the set is not a corner locus")

    hyperplanes = _cut_hyperplanes(skeleton, n)
    cells = _arrangement(n, hyperplanes)

    regions = [(signs, poly) for signs, poly in cells if poly.dim == n]
    walls = [(signs, poly) for signs, poly in cells if poly.dim == n - 1]
    if not regions:
        raise FanError("skeleton spans no full-dimensional complement")

    index = {signs: i for i, (signs, _) in enumerate(regions)}
    parent = list(range(len(regions)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    skel_polys = [c.as_polyhedron() for c in skeleton]
    for signs, wall in walls:
        probe = wall.relative_interior_point()
        if any(sp.contains(probe) for sp in skel_polys):
            continue  # wall lies inside the skeleton: keep the separation
        zero_axes = [k for k, sg in enumerate(signs) if sg == 0]
        neighbors = []
        for k in zero_axes:
            for flip in (-1, 1):
                ns = tuple(flip if j == k else sg for j, sg in enumerate(signs))
                if ns in index:
                    neighbors.append(index[ns])
        if len(zero_axes) == 1 and len(neighbors) == 2:
            union(neighbors[0], neighbors[1])

    groups = {}
    for i, (signs, poly) in enumerate(regions):
        groups.setdefault(find(i), []).append(i)
    roots = sorted(groups)
    group_of = {i: roots.index(find(i)) for i in range(len(regions))}

    maximal = []
    for root in roots:
        rays, lins = [], []
        for i in groups[root]:
            rays.extend(regions[i][1].rays)
            lins.extend(regions[i][1].lineality)
        maximal.append(Cone(n, rays, lins))

    # fan validity: each merged cone must be exactly the union of its atomic
    # regions; a conic hull capturing a foreign region means the complement
    # components are not convex, so the input is not a corner locus
    probes = [poly.relative_interior_point() for _, poly in regions]
    for gi, cone in enumerate(maximal):
        cp = cone.as_polyhedron()
        for i, probe in enumerate(probes):
            if group_of[i] != gi and cp.contains(probe):
                raise FanError(
                    "complement regions do not merge into convex cones: "
                    "the set is not the corner locus of a tropical polynomial")

    cones = {}
    for cone in maximal:
        cones[cone.canonical_key()] = cone
        for f in _cone_faces(cone):
            cones[f.canonical_key()] = f
    by_dim = {}
    for cone in cones.values():
        by_dim.setdefault(cone.dim, []).append(cone)
    for d in by_dim:
        by_dim[d].sort(key=lambda c: c.canonical_key())
    for d in range(n + 1):
        by_dim.setdefault(d, [])

    # pairwise intersections must be common faces
    face_keys = {d: {c.canonical_key() for c in by_dim[d]} for d in by_dim}
    for i in range(len(maximal)):
        for j in range(i + 1, len(maximal)):
            inter = maximal[i].intersect(maximal[j])
            if inter.canonical_key() not in face_keys.get(inter.dim, set()):
                raise FanError("cone intersections are not common faces")

    # common lineality = lineality of any maximal cone (all share it)
    W = maximal[0].lineality
    w_dim = matrix_rank([frac_vec(l) for l in W]) if W else 0
    span_dim = n - w_dim

    face_vector = tuple(len(by_dim.get(n - j, [])) for j in range(n))

    facet_cone_dim = w_dim + 1
    facet_normals = []
    for cone in by_dim.get(facet_cone_dim, []):
        if len(cone.rays) != 1:
            raise FanError("facet cone without a unique ray generator")
        facet_normals.append(_orth_project(cone.rays[0], W))
    facet_normals = tuple(sorted(facet_normals))

    span_normals = tuple(sorted(primitive(l) for l in W))
    return RecoveredFan(n, by_dim, face_vector, facet_normals,
                        span_dim, span_normals)


def _cone_faces(cone: Cone):
    faces = []
    for f in cone.as_polyhedron().proper_faces():
        faces.append(Cone(cone.n, f.rays, f.lineality, reduced=True))
    return faces


def _orth_project(ray, lineality):
    """Primitive orthogonal projection of a ray onto the complement of W."""
    v = frac_vec(ray)
    basis = [frac_vec(l) for l in lineality]
    for b in basis:
        denom = vdot(b, b)
        coef = Fraction(vdot(v, b), denom)
        v = tuple(x - coef * y for x, y in zip(v, b))
    if is_zero_vec(v):
        raise FanError("facet ray collapses into the lineality space")
    return primitive(v)
