"""Proto-tile geometry, side decorations, decorated tiles and patches.

Canonical proto-tiles (lengths in units of the uncut triangle's hypotenuse):

* LARGE: right angle at the origin, large leg psi^2 along +x, small leg psi^3
  along +y, hypotenuse psi.
* SMALL: right angle at the origin, large leg psi^3 along +x, small leg psi^4
  along +y, hypotenuse psi^2.

Each side has a designated direction: legs run from the right-angle vertex to
their far ends, the hypotenuse from the large-leg end to the small-leg end.
A side decoration is an optional label mod 4 plus an optional direction bit
relative to the designated direction; decorations are intrinsic and transported
by the placement (including reflections).

Fully decorated tiles obey the parity rule: on LARGE the hypotenuse and small
leg are even and the large leg odd; on SMALL the large leg is even and the
other two sides odd.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from goldtri.goldfield import AlgebraicNum, ZERO, psi_pow, cmp_exact
from goldtri.geom import (Point, Segment, Isometry, orient, triangles_overlap,
                          point_in_closed_triangle, segment_overlap, line_key)


class TileShape(enum.Enum):
    SMALL = "S"
    LARGE = "L"


class SideId(enum.IntEnum):
    HYP = 0
    LLEG = 1
    SLEG = 2


# Canonical vertices: (right angle, large-leg end, small-leg end).
CANONICAL_VERTICES = {
    TileShape.LARGE: (Point(ZERO, ZERO), Point(psi_pow(2), ZERO), Point(ZERO, psi_pow(3))),
    TileShape.SMALL: (Point(ZERO, ZERO), Point(psi_pow(3), ZERO), Point(ZERO, psi_pow(4))),
}

# Side -> (start vertex index, end vertex index) in canonical order.
SIDE_ENDPOINTS = {
    SideId.HYP: (1, 2),
    SideId.LLEG: (0, 1),
    SideId.SLEG: (0, 2),
}

# Parity (label mod 2) required on each side of a fully decorated tile.
SIDE_PARITY = {
    TileShape.LARGE: {SideId.HYP: 0, SideId.LLEG: 1, SideId.SLEG: 0},
    TileShape.SMALL: {SideId.HYP: 1, SideId.LLEG: 0, SideId.SLEG: 1},
}

SIDE_LENGTH_POW = {
    TileShape.LARGE: {SideId.HYP: 1, SideId.LLEG: 2, SideId.SLEG: 3},
    TileShape.SMALL: {SideId.HYP: 2, SideId.LLEG: 3, SideId.SLEG: 4},
}


@dataclass(frozen=True)
class SideDecoration:
    """Optional label in Z4 and optional direction bit (True = along the
    side's designated direction)."""

    label: int | None = None
    forward: bool | None = None

    def is_empty(self) -> bool:
        return self.label is None and self.forward is None

    def is_full(self) -> bool:
        return self.label is not None and self.forward is not None

    def compatible(self, other: SideDecoration) -> bool:
        if self.label is not None and other.label is not None and self.label != other.label:
            return False
        if self.forward is not None and other.forward is not None and self.forward != other.forward:
            return False
        return True

    def merge(self, other: SideDecoration) -> SideDecoration:
        return SideDecoration(
            self.label if self.label is not None else other.label,
            self.forward if self.forward is not None else other.forward)

    def intersect(self, other: SideDecoration) -> SideDecoration:
        return SideDecoration(
            self.label if self.label == other.label else None,
            self.forward if self.forward == other.forward else None)


EMPTY_DECOR = SideDecoration()

Sides = tuple[SideDecoration, SideDecoration, SideDecoration]
NO_DECOR: Sides = (EMPTY_DECOR, EMPTY_DECOR, EMPTY_DECOR)


def full_sides(hyp: tuple[int, bool], lleg: tuple[int, bool],
               sleg: tuple[int, bool]) -> Sides:
    return (SideDecoration(hyp[0] % 4, hyp[1]),
            SideDecoration(lleg[0] % 4, lleg[1]),
            SideDecoration(sleg[0] % 4, sleg[1]))


class DecoratedTile:
    """A placed proto-tile with (possibly partial) side decorations."""

    __slots__ = ("shape", "placement", "sides", "_vertices", "_pkey",
                 "_bbox", "_hash")

    def __init__(self, shape: TileShape, placement: Isometry,
                 sides: Sides = NO_DECOR):
        self.shape = shape
        self.placement = placement
        self.sides = sides
        self._vertices = tuple(placement.apply(v) for v in CANONICAL_VERTICES[shape])
        self._pkey = (shape.value,) + placement.key()
        self._bbox = None
        self._hash = None
        self._check_parity()

    def _check_parity(self):
        parity = SIDE_PARITY[self.shape]
        for side in SideId:
            lab = self.sides[side].label
            if lab is not None and lab % 2 != parity[side]:
                raise ValueError(
                    f"label {lab} violates parity on {side.name} of {self.shape.name}")

    # -- identity ------------------------------------------------------------

    def placement_key(self):
        return self._pkey

    def __eq__(self, other):
        return (isinstance(other, DecoratedTile) and self._pkey == other._pkey
                and self.sides == other.sides)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self._pkey, self.sides))
        return h

    def __repr__(self):
        return f"DecoratedTile({self.shape.name}, at {self._vertices[0]!r}, sides={self.sides})"

    # -- geometry ------------------------------------------------------------

    def placed_vertices(self) -> tuple[Point, Point, Point]:
        return self._vertices

    def bbox(self):
        b = self._bbox
        if b is None:
            xs = []
            ys = []
            for v in self._vertices:
                fx, fy = v.approx()
                xs.append(fx)
                ys.append(fy)
            b = self._bbox = (min(xs), min(ys), max(xs), max(ys))
        return b

    def side_segment(self, side: SideId) -> Segment:
        i, j = SIDE_ENDPOINTS[side]
        return Segment(self._vertices[i], self._vertices[j])

    def side_direction(self, side: SideId) -> tuple[AlgebraicNum, AlgebraicNum]:
        """Placed designated direction vector of the side."""
        i, j = SIDE_ENDPOINTS[side]
        a, b = self._vertices[i], self._vertices[j]
        return (b.x - a.x, b.y - a.y)

    def arrow_direction(self, side: SideId) -> tuple[AlgebraicNum, AlgebraicNum] | None:
        """Geometric direction of the decoration arrow, if present."""
        fwd = self.sides[side].forward
        if fwd is None:
            return None
        dx, dy = self.side_direction(side)
        return (dx, dy) if fwd else (-dx, -dy)

    def contains_point(self, p: Point) -> bool:
        x, y = p.approx()
        x0, y0, x1, y1 = self.bbox()
        if x < x0 - 1e-6 or x > x1 + 1e-6 or y < y0 - 1e-6 or y > y1 + 1e-6:
            return False
        return point_in_closed_triangle(p, self._vertices)

    # -- decoration updates --------------------------------------------------

    def with_sides(self, sides: Sides) -> DecoratedTile:
        return DecoratedTile(self.shape, self.placement, sides)

    def erase_decorations(self) -> DecoratedTile:
        return DecoratedTile(self.shape, self.placement, NO_DECOR)

    def is_fully_decorated(self) -> bool:
        return all(d.is_full() for d in self.sides)


def make_tile(shape: TileShape, placement: Isometry = None,
              sides: Sides = NO_DECOR) -> DecoratedTile:
    return DecoratedTile(shape, placement or Isometry.identity(), sides)


def placed_vertices(t: DecoratedTile) -> tuple[Point, Point, Point]:
    return t.placed_vertices()


def side_segment(t: DecoratedTile, s: SideId) -> Segment:
    return t.side_segment(s)


# ---------------------------------------------------------------------------
# Patches


class OverlapError(ValueError):
    def __init__(self, new_tile, existing):
        super().__init__(f"tile overlaps an existing tile: {new_tile!r} vs {existing!r}")
        self.new_tile = new_tile
        self.existing = existing


_CELL = 1.0


def _bbox_cells(bbox):
    x0, y0, x1, y1 = bbox
    for cx in range(int((x0 - 1e-6) // _CELL), int((x1 + 1e-6) // _CELL) + 1):
        for cy in range(int((y0 - 1e-6) // _CELL), int((y1 + 1e-6) // _CELL) + 1):
            yield (cx, cy)


def _cmp_point(p: Point, q: Point) -> int:
    c = cmp_exact(p.x, q.x)
    return c if c else cmp_exact(p.y, q.y)


_SORTVERT_CACHE: dict = {}


def _tile_sort_vertices(t: DecoratedTile):
    key = t.placement_key()
    v = _SORTVERT_CACHE.get(key)
    if v is None:
        import functools
        v = tuple(sorted(t.placed_vertices(), key=functools.cmp_to_key(_cmp_point)))
        if len(_SORTVERT_CACHE) > 500000:
            _SORTVERT_CACHE.clear()
        _SORTVERT_CACHE[key] = v
    return v


def _cmp_tile(a: DecoratedTile, b: DecoratedTile) -> int:
    for pa, pb in zip(_tile_sort_vertices(a), _tile_sort_vertices(b)):
        c = _cmp_point(pa, pb)
        if c:
            return c
    return 0 if a.placement_key() == b.placement_key() else (
        -1 if a.placement_key() < b.placement_key() else 1)


class Patch:
    """An immutable finite set of pairwise non-overlapping decorated tiles.

    Tiles are keyed by exact placement (shape + isometry); iteration follows a
    deterministic canonical order (lexicographic on placed vertices).
    """

    __slots__ = ("_tiles", "_order", "_grid", "_vertex_index", "_vertex_list")

    def __init__(self, tiles=(), validate: bool = True):
        self._tiles: dict = {}
        self._order = None
        self._grid = None
        self._vertex_index = None
        self._vertex_list = None
        for t in tiles:
            key = t.placement_key()
            if key in self._tiles:
                raise OverlapError(t, self._tiles[key])
            self._tiles[key] = t
        if validate:
            self._validate_no_overlap()

    def _validate_no_overlap(self):
        grid = self._build_grid()
        for t in self._tiles.values():
            for other in self._candidates_bbox(t.bbox(), grid):
                if other is t:
                    continue
                if id(other) < id(t):
                    continue  # each unordered pair once
                if triangles_overlap(t.placed_vertices(), other.placed_vertices()):
                    raise OverlapError(t, other)

    # -- indexes ---------------------------------------------------------

    def _build_grid(self):
        if self._grid is None:
            grid: dict = {}
            for t in self._tiles.values():
                for cell in _bbox_cells(t.bbox()):
                    grid.setdefault(cell, []).append(t)
            self._grid = grid
        return self._grid

    def _candidates_bbox(self, bbox, grid=None):
        grid = grid if grid is not None else self._build_grid()
        seen = set()
        out = []
        for cell in _bbox_cells(bbox):
            for t in grid.get(cell, ()):
                if id(t) not in seen:
                    seen.add(id(t))
                    out.append(t)
        return out

    def _build_vertex_index(self):
        if self._vertex_index is None:
            idx: dict = {}
            for t in self._tiles.values():
                for v in t.placed_vertices():
                    idx.setdefault(v.key(), []).append(t)
            self._vertex_index = idx
        return self._vertex_index

    # -- basic container protocol ----------------------------------------

    def __len__(self):
        return len(self._tiles)

    def __iter__(self):
        if self._order is None:
            import functools
            self._order = sorted(self._tiles.values(),
                                 key=functools.cmp_to_key(_cmp_tile))
        return iter(self._order)

    def __contains__(self, item):
        if isinstance(item, DecoratedTile):
            return item.placement_key() in self._tiles
        return item in self._tiles

    def get(self, pkey) -> DecoratedTile | None:
        return self._tiles.get(pkey)

    def tiles(self):
        return list(self)

    def shape_counts(self) -> dict[TileShape, int]:
        counts = {TileShape.LARGE: 0, TileShape.SMALL: 0}
        for t in self._tiles.values():
            counts[t.shape] += 1
        return counts

    # -- queries -----------------------------------------------------------

    def vertices(self) -> list[Point]:
        """All distinct tile vertices, in deterministic order."""
        if self._vertex_list is None:
            import functools
            seen = {}
            for t in self._tiles.values():
                for v in t.placed_vertices():
                    seen.setdefault(v.key(), v)
            self._vertex_list = sorted(seen.values(),
                                       key=functools.cmp_to_key(_cmp_point))
        return self._vertex_list

    def is_vertex(self, p: Point) -> bool:
        return p.key() in self._build_vertex_index()

    def tiles_with_vertex(self, p: Point) -> list[DecoratedTile]:
        return list(self._build_vertex_index().get(p.key(), ()))

    def tiles_at_point(self, p: Point) -> list[DecoratedTile]:
        """Tiles whose closure contains p (vertex, side or interior)."""
        x, y = p.approx()
        out = [t for t in self._candidates_bbox((x, y, x, y))
               if t.contains_point(p)]
        out.sort(key=lambda t: t.placement_key())
        return out

    def overlaps_any(self, tri) -> DecoratedTile | None:
        xs = [v.approx()[0] for v in tri]
        ys = [v.approx()[1] for v in tri]
        for t in self._candidates_bbox((min(xs), min(ys), max(xs), max(ys))):
            if triangles_overlap(tri, t.placed_vertices()):
                return t
        return None

    # -- construction --------------------------------------------------------

    def add_tile(self, t: DecoratedTile) -> Patch:
        """New patch with t inserted; OverlapError if it overlaps."""
        key = t.placement_key()
        existing = self._tiles.get(key)
        if existing is not None:
            raise OverlapError(t, existing)
        hit = self.overlaps_any(t.placed_vertices())
        if hit is not None:
            raise OverlapError(t, hit)
        tiles = dict(self._tiles)
        tiles[key] = t
        return Patch._from_dict(tiles)

    def replace_tile(self, t: DecoratedTile) -> Patch:
        """New patch with the same-placement tile's decorations replaced."""
        key = t.placement_key()
        if key not in self._tiles:
            raise KeyError("no tile at this placement")
        tiles = dict(self._tiles)
        tiles[key] = t
        return Patch._from_dict(tiles)

    @classmethod
    def _from_dict(cls, tiles: dict) -> Patch:
        p = cls.__new__(cls)
        p._tiles = tiles
        p._order = None
        p._grid = None
        p._vertex_index = None
        p._vertex_list = None
        return p


def add_tile(p: Patch, t: DecoratedTile) -> Patch:
    return p.add_tile(t)


# ---------------------------------------------------------------------------
# Edge consistency (local rule item 1)


@dataclass(frozen=True)
class EdgeViolation:
    tile_a: DecoratedTile
    side_a: SideId
    tile_b: DecoratedTile
    side_b: SideId
    reason: str


def _sides_by_line(p: Patch):
    """Group all placed tile sides by canonical line key.

    Yields per line: list of (tile, side, t_lo, t_hi, lo_float, hi_float,
    dir_sign) where t parameters are along the line's reference direction and
    dir_sign is the sign of the side's designated direction against it.
    """
    from goldtri.geom import line_reference_direction
    groups: dict = {}
    for t in p:
        for side in SideId:
            seg = t.side_segment(side)
            key = line_key(seg.a, seg.b)
            groups.setdefault(key, []).append((t, side, seg))
    for key, entries in groups.items():
        dx, dy = line_reference_direction(key)
        rows = []
        for t, side, seg in entries:
            ta = dx * seg.a.x + dy * seg.a.y
            tb = dx * seg.b.x + dy * seg.b.y
            s = (tb - ta).sign()
            lo, hi = (ta, tb) if s > 0 else (tb, ta)
            flo, elo = lo.approx_with_err()
            fhi, ehi = hi.approx_with_err()
            rows.append((t, side, lo, hi, flo - elo, fhi + ehi))
        yield key, rows


def edge_consistency(p: Patch) -> list[EdgeViolation]:
    """Violations of decoration matching along shared positive-length
    side intervals.  Only components present on both sides are compared;
    directions are compared geometrically along the common line.
    """
    violations = []
    for _key, rows in _sides_by_line(p):
        rows.sort(key=lambda r: r[4])
        for i, (ta, sa, loa, hia, flo_a, fhi_a) in enumerate(rows):
            for (tb, sb, lob, hib, flo_b, fhi_b) in rows[i + 1:]:
                if flo_b > fhi_a:
                    break  # sorted by lower bound: no later row can overlap
                if (hia - lob).sign() <= 0 or (hib - loa).sign() <= 0:
                    continue
                if ta.placement_key() == tb.placement_key():
                    continue
                da, db = ta.sides[sa], tb.sides[sb]
                if da.label is not None and db.label is not None and da.label != db.label:
                    violations.append(EdgeViolation(ta, sa, tb, sb, "label"))
                    continue
                if da.forward is not None and db.forward is not None:
                    ga = ta.arrow_direction(sa)
                    gb = tb.arrow_direction(sb)
                    dot = ga[0] * gb[0] + ga[1] * gb[1]
                    if dot.sign() < 0:
                        violations.append(EdgeViolation(ta, sa, tb, sb, "direction"))
    return violations


# ---------------------------------------------------------------------------
# JSON conversion (bit-exact patch format)


_SIDE_NAMES = {SideId.HYP: "hyp", SideId.LLEG: "lleg", SideId.SLEG: "sleg"}
_NAME_SIDES = {v: k for k, v in _SIDE_NAMES.items()}


def tile_to_obj(t: DecoratedTile) -> dict:
    iso = t.placement
    sides = {}
    for side in SideId:
        d = t.sides[side]
        if d.is_empty():
            sides[_SIDE_NAMES[side]] = None
        else:
            sides[_SIDE_NAMES[side]] = {
                "label": d.label,
                "dir": None if d.forward is None else ("fwd" if d.forward else "bwd"),
            }
    return {
        "shape": t.shape.value,
        "iso": {
            "m": [list(iso.m00.coeffs()), list(iso.m01.coeffs()),
                  list(iso.m10.coeffs()), list(iso.m11.coeffs())],
            "t": [list(iso.tx.coeffs()), list(iso.ty.coeffs())],
        },
        "sides": sides,
    }


def tile_from_obj(obj: dict) -> DecoratedTile:
    shape = TileShape(obj["shape"])
    m = obj["iso"]["m"]
    tr = obj["iso"]["t"]
    iso = Isometry(AlgebraicNum.from_coeffs(m[0]), AlgebraicNum.from_coeffs(m[1]),
                   AlgebraicNum.from_coeffs(m[2]), AlgebraicNum.from_coeffs(m[3]),
                   AlgebraicNum.from_coeffs(tr[0]), AlgebraicNum.from_coeffs(tr[1]))
    if not iso.is_orthogonal():
        raise ValueError("placement is not an isometry")
    sides = []
    for side in SideId:
        d = obj["sides"].get(_SIDE_NAMES[side])
        if d is None:
            sides.append(EMPTY_DECOR)
        else:
            fwd = d.get("dir")
            sides.append(SideDecoration(
                d.get("label"),
                None if fwd is None else (fwd == "fwd")))
    return DecoratedTile(shape, iso, tuple(sides))


def patch_to_obj(p: Patch) -> dict:
    return {"tiles": [tile_to_obj(t) for t in p]}


def patch_from_obj(obj: dict) -> Patch:
    return Patch([tile_from_obj(o) for o in obj["tiles"]])
