"""The substitution on decorated tiles, its inverse (composition), supertile
generation, and the five-color substitution of Danzer and van Ophuysen.

Decomposition cuts every LARGE tile by the altitude from its right angle,
keeps SMALL tiles intact, then rescales everything by the reference homothety
H (ratio 1/psi, centered at the origin).  On decorations: all labels are
incremented by 1 mod 4 and all arrows keep their geometric directions; the
newly created altitude is labeled 0 and directed from its foot to the cut
tile's right-angle vertex; the sub-segments the foot creates on the hypotenuse
inherit the (incremented) hypotenuse decoration.

Composition is the exact inverse.  Every SMALL tile determines its unique
would-be partner LARGE tile by pure placement algebra; merged pairs become
LARGE tiles of the composed tiling, unpaired LARGE tiles become SMALL.
"""

from __future__ import annotations

from goldtri.goldfield import AlgebraicNum, ZERO, PSI, PSI_INV, psi_pow
from goldtri.geom import Point, Isometry, isometry_from_triangles
from goldtri.tiles import (TileShape, SideId, SideDecoration, DecoratedTile,
                           Patch, CANONICAL_VERTICES, SIDE_ENDPOINTS,
                           full_sides, make_tile)

# ---------------------------------------------------------------------------
# Fixed geometric data of one decomposition step, derived from the canonical
# LARGE tile: A = right angle, B = large-leg end, C = small-leg end,
# F = foot of the altitude on the hypotenuse.

_A, _B, _C = CANONICAL_VERTICES[TileShape.LARGE]
FOOT = Point(psi_pow(6), psi_pow(5))


def _scale(p: Point, factor: AlgebraicNum) -> Point:
    return Point(p.x * factor, p.y * factor)


def _child_base(shape: TileShape, dst: tuple[Point, Point, Point]) -> Isometry:
    iso = isometry_from_triangles(CANONICAL_VERTICES[shape], dst)
    assert iso.is_orthogonal()
    return iso

# Children of the identity-placed LARGE parent, after the homothety H:
# the LARGE child contains the parent's large leg, the SMALL child the
# parent's small leg; both have their right angle at the scaled foot.
_CHILD_L_BASE = _child_base(
    TileShape.LARGE,
    (_scale(FOOT, PSI_INV), _scale(_B, PSI_INV), _scale(_A, PSI_INV)))
_CHILD_S_BASE = _child_base(
    TileShape.SMALL,
    (_scale(FOOT, PSI_INV), _scale(_A, PSI_INV), _scale(_C, PSI_INV)))


def _child_placement(parent: Isometry, base: Isometry) -> Isometry:
    """Placement of a child for a LARGE parent placed by (M, t):
    x -> M N x + M s + t/psi, where (N, s) is the identity-parent child."""
    mn = parent.compose(base)  # orthogonal part M N, translation M s + t
    bx, by = parent.apply_vector(base.tx, base.ty)
    return Isometry(mn.m00, mn.m01, mn.m10, mn.m11,
                    bx + parent.tx * PSI_INV, by + parent.ty * PSI_INV)


def _parent_placement(child: Isometry, base: Isometry) -> Isometry:
    """Inverse of _child_placement: recover the LARGE parent placement."""
    inv = base.invert()
    m = child.compose(inv)  # orthogonal part M, translation irrelevant
    bx, by = m.apply_vector(base.tx, base.ty)
    return Isometry(m.m00, m.m01, m.m10, m.m11,
                    (child.tx - bx) * PSI, (child.ty - by) * PSI)


# Which parent feature each child side inherits its decoration from.
ALTITUDE = "altitude"
_CHILD_L_SRC = {SideId.HYP: SideId.LLEG, SideId.LLEG: SideId.HYP,
                SideId.SLEG: ALTITUDE}
_CHILD_S_SRC = {SideId.HYP: SideId.SLEG, SideId.SLEG: SideId.HYP,
                SideId.LLEG: ALTITUDE}


def _direction_sign(child_base: Isometry, child_shape: TileShape,
                    child_side: SideId, parent_side: SideId) -> int:
    """Sign of the dot product between the placed child side's designated
    direction and the parent side's, for the identity parent.  Invariant
    under any parent placement because both transform by the same orthogonal
    map."""
    ci, cj = SIDE_ENDPOINTS[child_side]
    cverts = [child_base.apply(v) for v in CANONICAL_VERTICES[child_shape]]
    cdx, cdy = cverts[cj].x - cverts[ci].x, cverts[cj].y - cverts[ci].y
    pi, pj = SIDE_ENDPOINTS[parent_side]
    pverts = CANONICAL_VERTICES[TileShape.LARGE]
    pdx, pdy = pverts[pj].x - pverts[pi].x, pverts[pj].y - pverts[pi].y
    s = (cdx * pdx + cdy * pdy).sign()
    assert s != 0
    return s


_DIR_SIGNS = {}
for _shape, _base, _src in ((TileShape.LARGE, _CHILD_L_BASE, _CHILD_L_SRC),
                            (TileShape.SMALL, _CHILD_S_BASE, _CHILD_S_SRC)):
    for _cs, _ps in _src.items():
        if _ps is not ALTITUDE:
            _DIR_SIGNS[(_shape, _cs)] = _direction_sign(_base, _shape, _cs, _ps)


def _check_altitude_orientation():
    # The altitude side of each child must run from the (scaled) foot to the
    # (scaled) parent right-angle vertex, i.e. forward in designated direction.
    for shape, base, side in ((TileShape.LARGE, _CHILD_L_BASE, SideId.SLEG),
                              (TileShape.SMALL, _CHILD_S_BASE, SideId.LLEG)):
        i, j = SIDE_ENDPOINTS[side]
        verts = [base.apply(v) for v in CANONICAL_VERTICES[shape]]
        assert verts[i] == _scale(FOOT, PSI_INV)
        assert verts[j] == _scale(_A, PSI_INV)


_check_altitude_orientation()


class PartialDecorationError(ValueError):
    pass


def _inherit(parent_decor: SideDecoration, sgn: int) -> SideDecoration:
    if parent_decor.label is None or parent_decor.forward is None:
        raise PartialDecorationError("decompose requires fully decorated tiles")
    fwd = parent_decor.forward if sgn > 0 else not parent_decor.forward
    return SideDecoration((parent_decor.label + 1) % 4, fwd)


_ALTITUDE_DECOR = SideDecoration(0, True)


def decompose_tile_list(t: DecoratedTile) -> list[DecoratedTile]:
    p = t.placement
    if t.shape is TileShape.SMALL:
        if not t.is_fully_decorated():
            raise PartialDecorationError("decompose requires fully decorated tiles")
        q = Isometry(p.m00, p.m01, p.m10, p.m11, p.tx * PSI_INV, p.ty * PSI_INV)
        sides = tuple(SideDecoration((d.label + 1) % 4, d.forward)
                      for d in t.sides)
        return [DecoratedTile(TileShape.LARGE, q, sides)]

    children = []
    for shape, base, src in ((TileShape.LARGE, _CHILD_L_BASE, _CHILD_L_SRC),
                             (TileShape.SMALL, _CHILD_S_BASE, _CHILD_S_SRC)):
        q = _child_placement(p, base)
        sides = []
        for side in SideId:
            ps = src[side]
            if ps is ALTITUDE:
                sides.append(_ALTITUDE_DECOR)
            else:
                sides.append(_inherit(t.sides[ps], _DIR_SIGNS[(shape, side)]))
        children.append(DecoratedTile(shape, q, tuple(sides)))
    return children


def decompose_tile(t: DecoratedTile) -> Patch:
    """One decomposition step of a single fully decorated tile: a SMALL tile
    turns into a LARGE one, a LARGE tile is cut into a LARGE and a SMALL
    child.  Raises PartialDecorationError on partially decorated input."""
    return Patch(decompose_tile_list(t), validate=False)


def decompose_patch(p: Patch) -> Patch:
    out = []
    for t in p:
        out.extend(decompose_tile_list(t))
    return Patch(out, validate=False)


# ---------------------------------------------------------------------------
# Seeds and supertiles

DEFAULT_SEED_SIDES = full_sides((0, True), (1, True), (0, True))


def admissible_seed_sides() -> list:
    """All 8 parity-admissible label assignments of a LARGE seed (directions
    fixed forward)."""
    out = []
    for hyp in (0, 2):
        for lleg in (1, 3):
            for sleg in (0, 2):
                out.append(full_sides((hyp, True), (lleg, True), (sleg, True)))
    return out


def seed_tile(sides=DEFAULT_SEED_SIDES) -> DecoratedTile:
    return make_tile(TileShape.LARGE, Isometry.identity(), sides)


_SUPERTILE_CACHE: dict = {}


def supertile(n: int, seed: DecoratedTile | None = None) -> Patch:
    """The n-fold decorated decomposition of a LARGE seed tile."""
    if n < 0:
        raise ValueError("order must be >= 0")
    if seed is None:
        seed = seed_tile()
    if seed.shape is not TileShape.LARGE:
        raise ValueError("seed must be a LARGE tile")
    key = (n, seed)
    hit = _SUPERTILE_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 0:
        result = Patch([seed], validate=False)
    else:
        result = decompose_patch(supertile(n - 1, seed))
    _SUPERTILE_CACHE[key] = result
    return result


def supertile_region(n: int) -> tuple[Point, Point, Point]:
    """Corners of the triangle covered by supertile(n) for an identity seed."""
    f = psi_pow(-n)
    return tuple(_scale(v, f) for v in CANONICAL_VERTICES[TileShape.LARGE])


# ---------------------------------------------------------------------------
# Composition


class ComposeError(ValueError):
    pass


class NotComposable(ComposeError):
    def __init__(self, tile, reason):
        super().__init__(f"not composable at {tile!r}: {reason}")
        self.tile = tile
        self.reason = reason


class BoundaryBlocked(NotComposable):
    """A SMALL tile's partner region lies beyond the covered part of the
    patch: not composable as a standalone tiling, but ignorable when the
    patch is a fragment of something larger."""

    def __init__(self, tile):
        super().__init__(tile, "partner region outside the patch")


def partner_large_placement(s: Isometry) -> Isometry:
    """Placement of the unique LARGE tile merging with a SMALL tile placed
    by s (they are the two children of one cut)."""
    return _child_placement(_parent_placement(s, _CHILD_S_BASE), _CHILD_L_BASE)


def sibling_small_placement(l: Isometry) -> Isometry:
    """Placement of the SMALL sibling of a LARGE child placed by l."""
    return _child_placement(_parent_placement(l, _CHILD_L_BASE), _CHILD_S_BASE)


def _pull_decor(child: DecoratedTile, child_side: SideId) -> SideDecoration:
    """Parent-side decoration recovered from a child side (label -1, direction
    transported geometrically)."""
    d = child.sides[child_side]
    label = None if d.label is None else (d.label - 1) % 4
    fwd = None
    if d.forward is not None:
        sgn = _DIR_SIGNS[(child.shape, child_side)]
        fwd = d.forward if sgn > 0 else not d.forward
    return SideDecoration(label, fwd)


def _parent_of_pair(s: DecoratedTile, l: DecoratedTile) -> DecoratedTile:
    """Merged parent LARGE tile (final scale) of a SMALL tile and its partner."""
    placement = _parent_placement(s.placement, _CHILD_S_BASE)
    dl, ds = l.sides[SideId.LLEG], s.sides[SideId.SLEG]
    if dl.label is not None and ds.label is not None and dl.label != ds.label:
        raise NotComposable(s, "hypotenuse sub-segment labels disagree")
    if dl.forward is not None and ds.forward is not None:
        ga = l.arrow_direction(SideId.LLEG)
        gb = s.arrow_direction(SideId.SLEG)
        if (ga[0] * gb[0] + ga[1] * gb[1]).sign() < 0:
            raise NotComposable(s, "hypotenuse sub-segment directions disagree")
    hyp = _pull_decor(l, SideId.LLEG).merge(_pull_decor(s, SideId.SLEG))
    lleg = _pull_decor(l, SideId.HYP)
    sleg = _pull_decor(s, SideId.HYP)
    return DecoratedTile(TileShape.LARGE, placement, (hyp, lleg, sleg))


def _parent_of_single_large(l: DecoratedTile) -> DecoratedTile:
    q = l.placement
    placement = Isometry(q.m00, q.m01, q.m10, q.m11, q.tx * PSI, q.ty * PSI)
    sides = tuple(SideDecoration(None if d.label is None else (d.label - 1) % 4,
                                 d.forward)
                  for d in l.sides)
    return DecoratedTile(TileShape.SMALL, placement, sides)


def compose_patch(p: Patch, on_boundary: str = "raise") -> Patch:
    """Inverse of decompose_patch.

    Every SMALL tile is merged with its unique partner LARGE tile; unpaired
    LARGE tiles become SMALL.  A SMALL whose partner position is occupied by
    other tiles, or whose merge decorations disagree, raises NotComposable.
    A SMALL whose partner region lies beyond the covered part of the patch
    raises BoundaryBlocked, or is dropped with on_boundary="skip" (for
    fragment-of-tiling callers that ignore boundary effects).
    """
    if on_boundary not in ("raise", "skip"):
        raise ValueError("on_boundary must be 'raise' or 'skip'")
    consumed = set()
    parents = []
    dropped = set()
    for t in p:
        if t.shape is not TileShape.SMALL:
            continue
        partner = partner_large_placement(t.placement)
        pkey = (TileShape.LARGE.value,) + partner.key()
        mate = p.get(pkey)
        if mate is not None:
            consumed.add(pkey)
            consumed.add(t.placement_key())
            parents.append(_parent_of_pair(t, mate))
            continue
        tri = tuple(partner.apply(v) for v in CANONICAL_VERTICES[TileShape.LARGE])
        blocker = p.overlaps_any(tri)
        if blocker is not None:
            raise NotComposable(t, f"partner region occupied by {blocker!r}")
        if on_boundary == "raise":
            raise BoundaryBlocked(t)
        dropped.add(t.placement_key())
    for t in p:
        key = t.placement_key()
        if key in consumed or key in dropped or t.shape is not TileShape.LARGE:
            continue
        parents.append(_parent_of_single_large(t))
    return Patch(parents, validate=False)


# ---------------------------------------------------------------------------
# Areas (for the conservation invariant)

_TWO_AREA = {TileShape.LARGE: psi_pow(5), TileShape.SMALL: psi_pow(7)}


def patch_double_area(p: Patch) -> AlgebraicNum:
    """Twice the total area, exact in Z[psi]."""
    total = ZERO
    for t in p:
        total = total + _TWO_AREA[t.shape]
    return total


# ---------------------------------------------------------------------------
# The Danzer - van Ophuysen five-color substitution.
#
# A mark in Z5 rides on every tile.  Cutting a LARGE tile sends mark k to
# 2k on the LARGE child and 4k on the SMALL child; a SMALL tile keeps its
# geometry (becoming LARGE) and its mark goes to k + 1.  Addition and
# multiplication mod 5.  The shift by y adds y to all LARGE marks and 2y to
# all SMALL marks.

Coloring5 = dict


def dvo_seed_coloring(p: Patch, k: int = 0) -> Coloring5:
    return {t.placement_key(): k % 5 for t in p}


DVO_L_CHILD_MULT = 2
DVO_S_CHILD_MULT = 4
DVO_L_CHILD_ADD = 0
DVO_S_CHILD_ADD = 0
DVO_SMALL_TO_LARGE_ADD = 1


def dvo_decompose(p: Patch, c: Coloring5) -> tuple[Patch, Coloring5]:
    """Geometric decomposition together with the mod-5 mark maps."""
    out = []
    marks: Coloring5 = {}
    for t in p:
        k = c[t.placement_key()]
        children = decompose_tile_list(t)
        if t.shape is TileShape.SMALL:
            (child,) = children
            marks[child.placement_key()] = (k + DVO_SMALL_TO_LARGE_ADD) % 5
        else:
            for child in children:
                if child.shape is TileShape.LARGE:
                    marks[child.placement_key()] = (DVO_L_CHILD_MULT * k
                                                    + DVO_L_CHILD_ADD) % 5
                else:
                    marks[child.placement_key()] = (DVO_S_CHILD_MULT * k
                                                    + DVO_S_CHILD_ADD) % 5
        out.extend(children)
    return Patch(out, validate=False), marks


def dvo_shift(p: Patch, c: Coloring5, y: int) -> Coloring5:
    """Increment LARGE marks by y and SMALL marks by 2y (mod 5)."""
    out: Coloring5 = {}
    for t in p:
        k = c[t.placement_key()]
        out[t.placement_key()] = (k + (y if t.shape is TileShape.LARGE else 2 * y)) % 5
    return out
