"""Stars, crowns, their catalogs up to isometry, and the local rule checker.

A star records everything a tiling knows around one vertex: the tiles whose
closure contains the vertex, with decorations kept only on the sides passing
through it.  A star is complete when the tiles cover a full neighborhood of
the center; legality of complete stars is defined operationally by the catalog
generated from supertiles.

Canonical forms: two stars (or crowns) compare equal iff some isometry maps
one onto the other preserving shapes and all retained decorations.  Scalene
tiles admit exactly one isometry per ordered tile pair, so the canonical key
is the minimum, over all tiles, of the star serialized in the coordinate
frame that returns that tile to its canonical position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from goldtri.goldfield import AlgebraicNum
from goldtri.geom import Point, Isometry
from goldtri.tiles import (TileShape, SideId, SideDecoration, DecoratedTile,
                           Patch, EMPTY_DECOR, SIDE_ENDPOINTS,
                           edge_consistency)
from goldtri.subst import (supertile, seed_tile, admissible_seed_sides,
                           dvo_seed_coloring, dvo_decompose, dvo_shift,
                           decompose_patch)


# ---------------------------------------------------------------------------
# Directions around a point: exact angular order


def _half(ux: AlgebraicNum, uy: AlgebraicNum) -> int:
    sy = uy.sign()
    if sy > 0:
        return 0
    if sy < 0:
        return 1
    return 0 if ux.sign() > 0 else 1


def _dir_cmp(u, v) -> int:
    hu, hv = _half(*u), _half(*v)
    if hu != hv:
        return -1 if hu < hv else 1
    cr = (u[0] * v[1] - u[1] * v[0]).sign()
    return -cr


def _same_dir(u, v) -> bool:
    return ((u[0] * v[1] - u[1] * v[0]).is_zero()
            and (u[0] * v[0] + u[1] * v[1]).sign() > 0)


def _rot90(u):
    return (-u[1], u[0])


# ---------------------------------------------------------------------------
# Stars


def _ccw_vertices(t: DecoratedTile):
    v = t.placed_vertices()
    if t.placement.det_sign() > 0:
        return v
    return (v[0], v[2], v[1])


def _wedges_at(t: DecoratedTile, v: Point):
    """CCW wedges (start_dir, end_dir) that tile t covers around point v."""
    w = _ccw_vertices(t)
    for i in range(3):
        if w[i] == v:
            d1 = (w[(i + 1) % 3].x - v.x, w[(i + 1) % 3].y - v.y)
            d2 = (w[(i + 2) % 3].x - v.x, w[(i + 2) % 3].y - v.y)
            return [(d1, d2)]
    # v lies in the interior of one side; the tile covers a half-plane wedge.
    for i in range(3):
        a, b = w[i], w[(i + 1) % 3]
        cross = ((b.x - a.x) * (v.y - a.y) - (b.y - a.y) * (v.x - a.x))
        if cross.is_zero():
            d = (b.x - v.x, b.y - v.y)
            n = _rot90(d)
            back = (a.x - v.x, a.y - v.y)
            return [(d, n), (n, back)]
    raise ValueError("point is not on the tile boundary")


def _covers_full_circle(wedges) -> bool:
    if not wedges:
        return False
    import functools
    ordered = sorted(wedges, key=functools.cmp_to_key(
        lambda A, B: _dir_cmp(A[0], B[0])))
    n = len(ordered)
    for i in range(n):
        if not _same_dir(ordered[i][1], ordered[(i + 1) % n][0]):
            return False
    return True


class Star:
    """Vertex-centered fragment with decorations only on sides through the
    center."""

    __slots__ = ("center", "tiles", "complete", "_key", "_ukey")

    def __init__(self, center: Point, tiles: tuple, complete: bool):
        self.center = center
        self.tiles = tiles
        self.complete = complete
        self._key = None
        self._ukey = None

    def patch(self) -> Patch:
        return Patch(self.tiles, validate=False)

    def __len__(self):
        return len(self.tiles)

    def __repr__(self):
        return (f"Star(center={self.center!r}, tiles={len(self.tiles)}, "
                f"complete={self.complete})")


def _side_contains(t: DecoratedTile, side: SideId, v: Point) -> bool:
    i, j = SIDE_ENDPOINTS[side]
    verts = t.placed_vertices()
    a, b = verts[i], verts[j]
    if v == a or v == b:
        return True
    cross = (b.x - a.x) * (v.y - a.y) - (b.y - a.y) * (v.x - a.x)
    if not cross.is_zero():
        return False
    dot = (b.x - a.x) * (v.x - a.x) + (b.y - a.y) * (v.y - a.y)
    if dot.sign() <= 0:
        return False
    return (dot - ((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y))).sign() < 0


def restrict_tile_to_center(t: DecoratedTile, v: Point) -> DecoratedTile:
    sides = tuple(t.sides[s] if _side_contains(t, s, v) else EMPTY_DECOR
                  for s in SideId)
    return t.with_sides(sides)


def extract_star(p: Patch, v: Point) -> Star:
    """The star of p centered at vertex v.  Raises ValueError when v is not a
    vertex of any tile."""
    if not p.is_vertex(v):
        raise ValueError("center is not a vertex of the patch")
    members = p.tiles_at_point(v)
    wedges = []
    for t in members:
        wedges.extend(_wedges_at(t, v))
    complete = _covers_full_circle(wedges)
    tiles = tuple(restrict_tile_to_center(t, v) for t in members)
    return Star(v, tiles, complete)


# ---------------------------------------------------------------------------
# Canonical forms


def _decor_serial(d: SideDecoration):
    return (d.label if d.label is not None else -1,
            -1 if d.forward is None else int(d.forward))


def _tile_serial(t: DecoratedTile, frame: Isometry, colored: bool,
                 mark: int | None = None):
    placement = frame.compose(t.placement)
    sides = (tuple(_decor_serial(d) for d in t.sides) if colored else None)
    return (t.shape.value, placement.key(), sides, mark)


def _star_serial(center: Point, tiles, frame: Isometry, colored: bool,
                 marks=None):
    c = frame.apply(center)
    rows = []
    for i, t in enumerate(tiles):
        rows.append(_tile_serial(t, frame, colored,
                                 None if marks is None else marks[i]))
    rows.sort()
    return (c.key(), tuple(rows))


def canonical_star(s: Star, colored: bool = True):
    """Canonical key: equal for two stars iff an isometry maps one onto the
    other preserving shapes and retained decorations (colored=False ignores
    decorations)."""
    if colored:
        if s._key is not None:
            return s._key
    elif s._ukey is not None:
        return s._ukey
    best = None
    for t in s.tiles:
        frame = t.placement.invert()
        serial = _star_serial(s.center, s.tiles, frame, colored)
        if best is None or serial < best:
            best = serial
    if colored:
        s._key = best
    else:
        s._ukey = best
    return best


def canonical_tile(t: DecoratedTile):
    """Canonical key of a single decorated tile up to isometry: decorations
    are intrinsic, so only the shape and side decorations remain."""
    return (t.shape.value, tuple(_decor_serial(d) for d in t.sides))


# ---------------------------------------------------------------------------
# Star catalog


@dataclass
class CatalogStar:
    key: tuple
    star: Star                      # representative, as first found
    first_order: int
    witness: tuple                  # (seed_index, order, center Point)
    class_index: int | None = None  # 1..7 once classified
    axis_label: int | None = None
    variant: int | None = None      # 0 or 1 within (class, axis label)

    @property
    def class_name(self) -> str:
        return f"C{self.class_index}" if self.class_index else "?"


class StarCatalog:
    def __init__(self):
        self.entries: dict[tuple, CatalogStar] = {}
        self.max_order_built = -1

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries

    def get(self, key) -> CatalogStar | None:
        return self.entries.get(key)

    def stars(self) -> list[CatalogStar]:
        return [self.entries[k] for k in sorted(self.entries)]

    def by_class(self) -> dict[str, list[CatalogStar]]:
        out: dict[str, list[CatalogStar]] = {}
        for e in self.stars():
            out.setdefault(e.class_name, []).append(e)
        return out

    def classes_of_order(self) -> dict[int, int]:
        """Highest first_order per class index (diagnostic)."""
        out: dict[int, int] = {}
        for e in self.stars():
            if e.class_index:
                out[e.class_index] = max(out.get(e.class_index, 0), e.first_order)
        return out


def complete_stars(p: Patch) -> list[Star]:
    out = []
    for v in p.vertices():
        s = extract_star(p, v)
        if s.complete:
            out.append(s)
    return out


def build_star_catalog(max_order: int, seeds=None, classify: bool = True) -> StarCatalog:
    """All complete stars of supertiles of order <= max_order over the given
    seed decorations (default: the 8 parity-admissible label assignments),
    canonicalized up to isometry.  Remark-style legality: a complete star is
    legal iff it appears here.
    """
    if max_order < 4:
        raise ValueError("no complete stars exist below order 4")
    if seeds is None:
        seeds = [seed_tile(s) for s in admissible_seed_sides()]
    catalog = StarCatalog()
    for si, seed in enumerate(seeds):
        for order in range(4, max_order + 1):
            p = supertile(order, seed)
            for s in complete_stars(p):
                key = canonical_star(s)
                if key not in catalog.entries:
                    catalog.entries[key] = CatalogStar(
                        key, s, order, (si, order, s.center))
    catalog.max_order_built = max_order
    if classify:
        classify_catalog(catalog)
    return catalog


def is_legal_star(s: Star, catalog: StarCatalog) -> bool:
    if not s.complete:
        raise ValueError("legality is defined for complete stars")
    return canonical_star(s) in catalog


# ---------------------------------------------------------------------------
# Axis detection and classification


def star_axis(s: Star):
    """The unique full line through the center whose side decorations all
    coincide (same label, same geometric direction).  Returns
    (line_key, label, arrow_sign_along_reference_direction) or None.
    """
    from goldtri.geom import line_key, line_reference_direction
    lines: dict = {}
    for t in s.tiles:
        for side in SideId:
            if not _side_contains(t, side, s.center):
                continue
            seg = t.side_segment(side)
            key = line_key(seg.a, seg.b)
            lines.setdefault(key, []).append((t, side))
    axes = []
    for key, sides in lines.items():
        dx, dy = line_reference_direction(key)
        t0 = dx * s.center.x + dy * s.center.y
        has_pos = has_neg = False
        labels = set()
        arrow_signs = set()
        ok = True
        for t, side in sides:
            seg = t.side_segment(side)
            for endpoint in (seg.a, seg.b):
                tt = (dx * endpoint.x + dy * endpoint.y - t0).sign()
                if tt > 0:
                    has_pos = True
                elif tt < 0:
                    has_neg = True
            d = t.sides[side]
            labels.add(d.label)
            arrow = t.arrow_direction(side)
            if arrow is None:
                arrow_signs.add(None)
            else:
                arrow_signs.add((arrow[0] * dx + arrow[1] * dy).sign())
        if not (has_pos and has_neg):
            continue
        if len(labels) != 1 or len(arrow_signs) != 1:
            continue
        (label,) = labels
        (sign_,) = arrow_signs
        axes.append((key, label, sign_))
    if len(axes) == 1:
        return axes[0]
    return None


def _center_on_side_of(s: Star, shape: TileShape, side: SideId) -> bool:
    for t in s.tiles:
        if t.shape is not shape:
            continue
        if s.center in t.placed_vertices():
            continue
        if _side_contains(t, side, s.center):
            return True
    return False


def _has_sharing_pair(s: Star, shape: TileShape, side: SideId) -> bool:
    segs = {}
    for t in s.tiles:
        if t.shape is not shape:
            continue
        seg = t.side_segment(side)
        key = frozenset((seg.a.key(), seg.b.key()))
        segs.setdefault(key, 0)
        segs[key] += 1
    return any(v >= 2 for v in segs.values())


class ClassificationError(RuntimeError):
    pass


def classify_catalog(catalog: StarCatalog) -> None:
    """Assign C1..C7 and axis data.

    C1..C5 are pinned by their stated features: C1 is the unique shape whose
    center lies inside the large leg of a large tile, C2 inside the hypotenuse
    of a large tile; C3 has two small tiles sharing the small leg, C4 two
    large tiles sharing the small leg, C5 two small tiles sharing the
    hypotenuse.  C6 and C7 share one uncolored shape and are separated by the
    parity of the axis label (even = C6), which matches the index parity rule.
    """
    groups: dict = {}
    for e in catalog.stars():
        groups.setdefault(canonical_star(e.star, colored=False), []).append(e)

    feature_of_group = {}
    for ukey, entries in groups.items():
        s = entries[0].star
        feats = set()
        if _center_on_side_of(s, TileShape.LARGE, SideId.LLEG):
            feats.add(1)
        if _center_on_side_of(s, TileShape.LARGE, SideId.HYP):
            feats.add(2)
        if _has_sharing_pair(s, TileShape.SMALL, SideId.SLEG):
            feats.add(3)
        if _has_sharing_pair(s, TileShape.LARGE, SideId.SLEG):
            feats.add(4)
        if _has_sharing_pair(s, TileShape.SMALL, SideId.HYP):
            feats.add(5)
        feature_of_group[ukey] = feats

    assigned: dict = {}
    for idx in (1, 2, 3, 4, 5):
        hits = [uk for uk, feats in feature_of_group.items() if idx in feats]
        if len(hits) != 1:
            raise ClassificationError(
                f"feature {idx} matched {len(hits)} shape groups")
        assigned[hits[0]] = idx

    rest = [uk for uk in groups if uk not in assigned]
    if len(rest) != 1:
        raise ClassificationError(
            f"expected one residual shape group for C6/C7, got {len(rest)}")

    for ukey, entries in groups.items():
        for e in entries:
            axis = star_axis(e.star)
            if axis is None:
                raise ClassificationError(f"no unique axis for {e.key!r}")
            e.axis_label = axis[1]
            if ukey in assigned:
                e.class_index = assigned[ukey]
            else:
                e.class_index = 6 if e.axis_label % 2 == 0 else 7

    # Index parity must match axis label parity (C6/C7 satisfy by choice).
    for e in catalog.stars():
        if e.class_index in (1, 2, 3, 4, 5):
            if e.axis_label % 2 != e.class_index % 2:
                raise ClassificationError(
                    f"axis parity mismatch for C{e.class_index}: {e.axis_label}")

    # Variant numbering within (class, axis label), by canonical key order.
    buckets: dict = {}
    for e in catalog.stars():
        buckets.setdefault((e.class_index, e.axis_label), []).append(e)
    for bucket in buckets.values():
        bucket.sort(key=lambda e: e.key)
        for i, e in enumerate(bucket):
            e.variant = i


# ---------------------------------------------------------------------------
# Rule L checking


@dataclass
class RuleLReport:
    edge_violations: list
    illegal_stars: list  # (center Point, canonical key)

    def ok(self) -> bool:
        return not self.edge_violations and not self.illegal_stars


def check_rule_L(p: Patch, catalog: StarCatalog) -> RuleLReport:
    """Item (1): decoration matching along shared side intervals.
    Item (2): every complete star is legal per the catalog."""
    edge = edge_consistency(p)
    illegal = []
    for s in complete_stars(p):
        if canonical_star(s) not in catalog:
            illegal.append((s.center, canonical_star(s)))
    return RuleLReport(edge, illegal)


# ---------------------------------------------------------------------------
# Crowns (Danzer - van Ophuysen five-color rule)


class Crown:
    __slots__ = ("center", "tiles", "marks", "complete", "_key")

    def __init__(self, center: Point, tiles: tuple, marks: tuple, complete: bool):
        self.center = center
        self.tiles = tiles
        self.marks = marks
        self.complete = complete
        self._key = None

    def __len__(self):
        return len(self.tiles)

    def __repr__(self):
        return (f"Crown(center={self.center!r}, tiles={len(self.tiles)}, "
                f"marks={self.marks}, complete={self.complete})")


def extract_crown(p: Patch, coloring, v: Point) -> Crown:
    """All tiles whose closure contains v, with their mod-5 marks."""
    if not p.is_vertex(v):
        raise ValueError("center is not a vertex of the patch")
    members = p.tiles_at_point(v)
    wedges = []
    for t in members:
        wedges.extend(_wedges_at(t, v))
    complete = _covers_full_circle(wedges)
    marks = tuple(coloring[t.placement_key()] for t in members)
    return Crown(v, tuple(members), marks, complete)


def canonical_crown(c: Crown):
    if c._key is not None:
        return c._key
    best = None
    for t in c.tiles:
        frame = t.placement.invert()
        serial = _star_serial(c.center, c.tiles, frame, colored=False,
                              marks=c.marks)
        if best is None or serial < best:
            best = serial
    c._key = best
    return best


def crown_shift(c: Crown, y: int) -> Crown:
    marks = tuple((m + (y if t.shape is TileShape.LARGE else 2 * y)) % 5
                  for t, m in zip(c.tiles, c.marks))
    return Crown(c.center, c.tiles, marks, c.complete)


class CrownCatalog:
    def __init__(self):
        self.entries: dict[tuple, Crown] = {}
        self.first_order: dict[tuple, int] = {}
        self.stable_since: int | None = None
        self.max_order_built = -1

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries


def build_crown_catalog(max_order: int, seed_mark: int = 0) -> CrownCatalog:
    """Complete crowns of DvO-colored supertiles up to isometry, closed under
    the shift operation (the shift of a legal crown is legal, so closing under
    shifts equals cataloguing all five seed marks)."""
    catalog = CrownCatalog()
    p = supertile(0)
    c = dvo_seed_coloring(p, seed_mark)
    for order in range(0, max_order + 1):
        if order > 0:
            p, c = dvo_decompose(p, c)
        added = False
        for v in p.vertices():
            crown = extract_crown(p, c, v)
            if not crown.complete:
                continue
            for y in range(5):
                shifted = crown_shift(crown, y)
                key = canonical_crown(shifted)
                if key not in catalog.entries:
                    catalog.entries[key] = shifted
                    catalog.first_order[key] = order
                    added = True
        if added:
            catalog.stable_since = None
        elif catalog.stable_since is None:
            catalog.stable_since = order
    catalog.max_order_built = max_order
    return catalog


def crown_classes(catalog: CrownCatalog) -> list[list[tuple]]:
    """Shift-equivalence classes of catalog crowns (keys)."""
    seen = set()
    classes = []
    for key in sorted(catalog.entries):
        if key in seen:
            continue
        crown = catalog.entries[key]
        orbit = []
        for y in range(5):
            k = canonical_crown(crown_shift(crown, y))
            if k not in catalog.entries:
                raise RuntimeError("catalog is not shift-closed")
            if k not in seen:
                seen.add(k)
                orbit.append(k)
        classes.append(sorted(orbit))
    return classes
