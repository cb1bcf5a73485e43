"""Exact planar geometry over Z[psi]^2: points, isometries, orientation and
overlap predicates, segment overlap, and canonical line keys.

All predicates decide through goldfield sign determination; floating point is
used only as a conservative prefilter for bounding boxes and never decides an
outcome.
"""

from __future__ import annotations

from math import gcd

from goldtri.goldfield import AlgebraicNum, ZERO, ONE, div_exact

Coeffs = tuple[int, int, int, int]


class Point:
    __slots__ = ("x", "y", "_key", "_float")

    def __init__(self, x: AlgebraicNum, y: AlgebraicNum):
        self.x = x
        self.y = y
        self._key = None
        self._float = None

    def key(self) -> tuple[Coeffs, Coeffs]:
        k = self._key
        if k is None:
            k = self._key = (self.x.coeffs(), self.y.coeffs())
        return k

    def approx(self) -> tuple[float, float]:
        f = self._float
        if f is None:
            f = self._float = (float(self.x), float(self.y))
        return f

    def __eq__(self, other):
        return isinstance(other, Point) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        fx, fy = self.approx()
        return f"Point({fx:.6f}, {fy:.6f})"


ORIGIN = Point(ZERO, ZERO)


class Segment:
    """Directed segment with distinct endpoints."""

    __slots__ = ("a", "b")

    def __init__(self, a: Point, b: Point):
        if a == b:
            raise ValueError("degenerate segment")
        self.a = a
        self.b = b

    def __eq__(self, other):
        return isinstance(other, Segment) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a.key(), self.b.key()))

    def __repr__(self):
        return f"Segment({self.a!r} -> {self.b!r})"


class Isometry:
    """Planar isometry x -> M x + t with orthogonal M over Z[psi]."""

    __slots__ = ("m00", "m01", "m10", "m11", "tx", "ty", "_key")

    def __init__(self, m00, m01, m10, m11, tx, ty):
        self.m00 = m00
        self.m01 = m01
        self.m10 = m10
        self.m11 = m11
        self.tx = tx
        self.ty = ty
        self._key = None

    @classmethod
    def identity(cls) -> Isometry:
        return cls(ONE, ZERO, ZERO, ONE, ZERO, ZERO)

    @classmethod
    def translation(cls, tx: AlgebraicNum, ty: AlgebraicNum) -> Isometry:
        return cls(ONE, ZERO, ZERO, ONE, tx, ty)

    @classmethod
    def rotation90(cls) -> Isometry:
        return cls(ZERO, -ONE, ONE, ZERO, ZERO, ZERO)

    @classmethod
    def reflection_x(cls) -> Isometry:
        return cls(ONE, ZERO, ZERO, -ONE, ZERO, ZERO)

    def key(self):
        k = self._key
        if k is None:
            k = self._key = (self.m00.coeffs(), self.m01.coeffs(),
                             self.m10.coeffs(), self.m11.coeffs(),
                             self.tx.coeffs(), self.ty.coeffs())
        return k

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_orthogonal(self) -> bool:
        """Exact check of M^T M = I."""
        a, b, c, d = self.m00, self.m01, self.m10, self.m11
        return ((a * a + c * c) == ONE and (b * b + d * d) == ONE
                and (a * b + c * d).is_zero())

    def det(self) -> AlgebraicNum:
        return self.m00 * self.m11 - self.m01 * self.m10

    def det_sign(self) -> int:
        return self.det().sign()

    def apply(self, p: Point) -> Point:
        return Point(self.m00 * p.x + self.m01 * p.y + self.tx,
                     self.m10 * p.x + self.m11 * p.y + self.ty)

    def apply_vector(self, vx: AlgebraicNum, vy: AlgebraicNum):
        return (self.m00 * vx + self.m01 * vy, self.m10 * vx + self.m11 * vy)

    def compose(self, other: Isometry) -> Isometry:
        """self after other: (self.compose(other))(x) = self(other(x))."""
        return Isometry(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
            self.m00 * other.tx + self.m01 * other.ty + self.tx,
            self.m10 * other.tx + self.m11 * other.ty + self.ty,
        )

    def invert(self) -> Isometry:
        # Orthogonal part inverts by transposition.
        a, b, c, d = self.m00, self.m10, self.m01, self.m11
        return Isometry(a, b, c, d,
                        -(a * self.tx + b * self.ty),
                        -(c * self.tx + d * self.ty))

    def __repr__(self):
        return ("Isometry(m=[[%s, %s], [%s, %s]], t=(%s, %s))"
                % (self.m00, self.m01, self.m10, self.m11, self.tx, self.ty))


def apply(iso: Isometry, p: Point) -> Point:
    return iso.apply(p)


def compose(a: Isometry, b: Isometry) -> Isometry:
    return a.compose(b)


def invert(a: Isometry) -> Isometry:
    return a.invert()


def isometry_from_triangles(src: tuple[Point, Point, Point],
                            dst: tuple[Point, Point, Point]) -> Isometry:
    """The unique affine map sending src[i] -> dst[i], returned as an Isometry.

    Caller guarantees the correspondence is actually rigid; orthogonality can
    be re-checked via is_orthogonal().  Exact over Q(psi) with Z[psi] result
    (true for all congruent tile correspondences in this engine).
    """
    # Solve M (src1-src0) = dst1-dst0, M (src2-src0) = dst2-dst0.
    ux, uy = src[1].x - src[0].x, src[1].y - src[0].y
    vx, vy = src[2].x - src[0].x, src[2].y - src[0].y
    px, py = dst[1].x - dst[0].x, dst[1].y - dst[0].y
    qx, qy = dst[2].x - dst[0].x, dst[2].y - dst[0].y
    det = ux * vy - uy * vx
    if det.is_zero():
        raise ValueError("degenerate source triangle")
    # M = [[px, qx], [py, qy]] * [[ux, vx], [uy, vy]]^-1
    m00n = px * vy - qx * uy
    m01n = qx * ux - px * vx
    m10n = py * vy - qy * uy
    m11n = qy * ux - py * vx
    out = []
    for num in (m00n, m01n, m10n, m11n):
        q, den = div_exact(num, det)
        if den != 1:
            raise ValueError("correspondence is not Z[psi]-rigid")
        out.append(q)
    m00, m01, m10, m11 = out
    tx = dst[0].x - (m00 * src[0].x + m01 * src[0].y)
    ty = dst[0].y - (m10 * src[0].x + m11 * src[0].y)
    return Isometry(m00, m01, m10, m11, tx, ty)


# ---------------------------------------------------------------------------
# Predicates


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the determinant of (q - p, r - p): +1 ccw, -1 cw, 0 collinear."""
    return ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)).sign()


def _ccw(tri: tuple[Point, Point, Point]) -> tuple[Point, Point, Point]:
    s = orient(*tri)
    if s == 0:
        raise ValueError("degenerate triangle")
    return tri if s > 0 else (tri[0], tri[2], tri[1])


def triangles_overlap(t1: tuple[Point, Point, Point],
                      t2: tuple[Point, Point, Point]) -> bool:
    """True iff the open interiors intersect.  Exact edge-separation test."""
    a = _ccw(t1)
    b = _ccw(t2)
    for tri, other in ((a, b), (b, a)):
        for i in range(3):
            p, q = tri[i], tri[(i + 1) % 3]
            # ccw: interior strictly left of p->q; separated if other is
            # entirely right of or on the line.
            if all(orient(p, q, v) <= 0 for v in other):
                return False
    return True


def point_in_closed_triangle(p: Point, tri: tuple[Point, Point, Point]) -> bool:
    a = _ccw(tri)
    for i in range(3):
        if orient(a[i], a[(i + 1) % 3], p) < 0:
            return False
    return True


def segment_overlap(s1: Segment, s2: Segment) -> Segment | None:
    """The positive-length common sub-segment of two collinear segments,
    or None.  Result endpoints are taken from the inputs (no new arithmetic).
    """
    a1, b1, a2, b2 = s1.a, s1.b, s2.a, s2.b
    if orient(a1, b1, a2) != 0 or orient(a1, b1, b2) != 0:
        return None
    dx, dy = b1.x - a1.x, b1.y - a1.y

    def t(p: Point) -> AlgebraicNum:
        return dx * (p.x - a1.x) + dy * (p.y - a1.y)

    pts = [(t(p), p) for p in (a1, b1, a2, b2)]
    lo1, hi1 = sorted(pts[:2], key=lambda e: e[0])
    lo2, hi2 = sorted(pts[2:], key=lambda e: e[0])
    lo = lo1 if (lo1[0] - lo2[0]).sign() >= 0 else lo2
    hi = hi1 if (hi1[0] - hi2[0]).sign() <= 0 else hi2
    if (hi[0] - lo[0]).sign() <= 0:
        return None
    return Segment(lo[1], hi[1])


# ---------------------------------------------------------------------------
# Canonical line keys.  A line a*x + b*y = c is keyed uniquely up to the
# Q(psi)-scalar by normalizing the first nonzero normal component to 1 and
# clearing denominators minimally.


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def line_key(p: Point, q: Point):
    nx = p.y - q.y
    ny = q.x - p.x
    c = nx * p.x + ny * p.y
    lead = nx if not nx.is_zero() else ny
    parts = []
    dens = []
    for comp in (nx, ny, c):
        num, den = div_exact(comp, lead)
        parts.append(num)
        dens.append(den)
    m = 1
    for d in dens:
        m = _lcm(m, d)
    ints = []
    for num, den in zip(parts, dens):
        s = m // den
        ints.extend(x * s for x in num.coeffs())
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = gcd(g, m)
    if g > 1:
        ints = [v // g for v in ints]
        m //= g
    return (m, *ints)


def line_reference_direction(key) -> tuple[AlgebraicNum, AlgebraicNum]:
    """A fixed direction vector along the line identified by the key."""
    nx = AlgebraicNum(*key[1:5])
    ny = AlgebraicNum(*key[5:9])
    return (-ny, nx)
