"""Exact arithmetic in the ring Z[psi], where psi is the positive real root
of x^4 + x^2 - 1.

psi = sqrt((sqrt(5) - 1) / 2) ~ 0.78615137775742.  psi^2 is the inverse golden
ratio, and psi is a unit of the ring: psi * (psi + psi^3) = 1.  Every element
is represented canonically as c0 + c1*psi + c2*psi^2 + c3*psi^3 with unbounded
integer coefficients; representation is unique because the minimal polynomial
has degree 4, so equality and zero-testing are coefficient-wise.

Sign determination evaluates the element on a shrinking integer interval
enclosure of psi; a nonzero canonical element has nonzero value, so the loop
terminates.
"""

from __future__ import annotations

from math import isqrt

# Float approximation of psi, for non-authoritative fast paths only.
PSI_FLOAT = 0.7861513777574233

# ---------------------------------------------------------------------------
# Certified integer enclosures of psi: _enclosure(b) returns (lo, hi) with
# lo/2^b < psi < hi/2^b, verified against the minimal polynomial.

_ENCLOSURES: dict[int, tuple[int, int]] = {}


def _minpoly_scaled(x: int, bits: int) -> int:
    """Sign-equivalent of f(x / 2^bits) for f(t) = t^4 + t^2 - 1."""
    return x ** 4 + (x * x << (2 * bits)) - (1 << (4 * bits))


def _enclosure(bits: int) -> tuple[int, int]:
    try:
        return _ENCLOSURES[bits]
    except KeyError:
        pass
    s = isqrt(5 << (4 * bits))            # ~ sqrt(5) * 2^(2 bits)
    g = (s - (1 << (2 * bits))) >> 1      # ~ psi^2 * 2^(2 bits)
    p = isqrt(g << 0)                     # ~ psi * 2^bits
    lo, hi = p - 2, p + 2
    while _minpoly_scaled(lo, bits) >= 0:
        lo -= 1
    while _minpoly_scaled(hi, bits) <= 0:
        hi += 1
    if lo < 0:
        lo = 0
    _ENCLOSURES[bits] = (lo, hi)
    return lo, hi


def _interval_eval(c0: int, c1: int, c2: int, c3: int, bits: int) -> tuple[int, int]:
    """Enclosure of (c0 + c1 psi + c2 psi^2 + c3 psi^3) * 2^(4 bits)."""
    lo, hi = _enclosure(bits)
    # Power enclosures, all scaled to the common denominator 2^(4 bits).
    p1 = (lo << (3 * bits), hi << (3 * bits))
    p2 = (lo * lo << (2 * bits), hi * hi << (2 * bits))
    p3 = (lo * lo * lo << bits, hi * hi * hi << bits)
    L = c0 << (4 * bits)
    U = L
    for c, (a, b) in ((c1, p1), (c2, p2), (c3, p3)):
        if c >= 0:
            L += c * a
            U += c * b
        else:
            L += c * b
            U += c * a
    return L, U


class AlgebraicNum:
    """An element of Z[psi] in canonical (degree < 4) form."""

    __slots__ = ("c0", "c1", "c2", "c3", "_hash")

    def __init__(self, c0: int = 0, c1: int = 0, c2: int = 0, c3: int = 0):
        self.c0 = c0
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3
        self._hash = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> AlgebraicNum:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_coeffs(cls, coeffs) -> AlgebraicNum:
        c0, c1, c2, c3 = coeffs
        return cls(int(c0), int(c1), int(c2), int(c3))

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, AlgebraicNum):
            return AlgebraicNum(self.c0 + other.c0, self.c1 + other.c1,
                                self.c2 + other.c2, self.c3 + other.c3)
        if isinstance(other, int):
            return AlgebraicNum(self.c0 + other, self.c1, self.c2, self.c3)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, AlgebraicNum):
            return AlgebraicNum(self.c0 - other.c0, self.c1 - other.c1,
                                self.c2 - other.c2, self.c3 - other.c3)
        if isinstance(other, int):
            return AlgebraicNum(self.c0 - other, self.c1, self.c2, self.c3)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraicNum(-self.c0, -self.c1, -self.c2, -self.c3)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicNum(self.c0 * other, self.c1 * other,
                                self.c2 * other, self.c3 * other)
        if not isinstance(other, AlgebraicNum):
            return NotImplemented
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = other.c0, other.c1, other.c2, other.c3
        # Polynomial product, degree <= 6.
        p0 = a0 * b0
        p1 = a0 * b1 + a1 * b0
        p2 = a0 * b2 + a1 * b1 + a2 * b0
        p3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        p4 = a1 * b3 + a2 * b2 + a3 * b1
        p5 = a2 * b3 + a3 * b2
        p6 = a3 * b3
        # Reduce by psi^4 = 1 - psi^2, psi^5 = psi - psi^3, psi^6 = 2 psi^2 - 1.
        return AlgebraicNum(p0 + p4 - p6, p1 + p5, p2 - p4 + 2 * p6, p3 - p5)

    __rmul__ = __mul__

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0 and self.c2 == 0 and self.c3 == 0

    def sign(self) -> int:
        """Sign of the real value at psi: -1, 0 or +1.  Exact."""
        if self.is_zero():
            return 0
        bits = 64
        while True:
            L, U = _interval_eval(self.c0, self.c1, self.c2, self.c3, bits)
            if L > 0:
                return 1
            if U < 0:
                return -1
            bits *= 2

    def __eq__(self, other):
        if isinstance(other, AlgebraicNum):
            return (self.c0 == other.c0 and self.c1 == other.c1
                    and self.c2 == other.c2 and self.c3 == other.c3)
        if isinstance(other, int):
            return self.c0 == other and self.c1 == 0 and self.c2 == 0 and self.c3 == 0
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.c0, self.c1, self.c2, self.c3))
        return h

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        p = PSI_FLOAT
        return self.c0 + p * (self.c1 + p * (self.c2 + p * self.c3))

    def approx_with_err(self) -> tuple[float, float]:
        """Float approximation plus a rigorous bound on its absolute error."""
        try:
            f = float(self)
            err = 1e-14 * (1.0 + abs(self.c0) + abs(self.c1)
                           + abs(self.c2) + abs(self.c3))
        except OverflowError:
            return (0.0, float("inf"))
        return (f, err)

    def __repr__(self):
        return f"AlgebraicNum({self.c0}, {self.c1}, {self.c2}, {self.c3})"

    def __str__(self):
        parts = []
        for c, name in zip(self.coeffs(), ("", "psi", "psi^2", "psi^3")):
            if c:
                parts.append(f"{c:+}{'*' + name if name else ''}")
        return "".join(parts) if parts else "0"


ZERO = AlgebraicNum(0, 0, 0, 0)
ONE = AlgebraicNum(1, 0, 0, 0)
PSI = AlgebraicNum(0, 1, 0, 0)
PSI_INV = AlgebraicNum(0, 1, 0, 1)  # psi^-1 = psi + psi^3


def add(a: AlgebraicNum, b: AlgebraicNum) -> AlgebraicNum:
    return a + b


def mul(a: AlgebraicNum, b: AlgebraicNum) -> AlgebraicNum:
    return a * b


def sign(a: AlgebraicNum) -> int:
    return a.sign()


def cmp_exact(a: AlgebraicNum, b: AlgebraicNum) -> int:
    """Exact three-way comparison with a rigorous float fast path."""
    fa, ea = a.approx_with_err()
    fb, eb = b.approx_with_err()
    if fa - ea > fb + eb:
        return 1
    if fa + ea < fb - eb:
        return -1
    return (a - b).sign()


_POW_CACHE: dict[int, AlgebraicNum] = {0: ONE, 1: PSI, -1: PSI_INV}


def psi_pow(n: int) -> AlgebraicNum:
    """Canonical form of psi^n, any integer n (psi is a unit)."""
    try:
        return _POW_CACHE[n]
    except KeyError:
        pass
    if n > 0:
        r = psi_pow(n - 1) * PSI
    else:
        r = psi_pow(n + 1) * PSI_INV
    _POW_CACHE[n] = r
    return r


# ---------------------------------------------------------------------------
# Exact division in the fraction field Q(psi), used for canonical line keys.


def _det4(m) -> int:
    """Determinant of a 4x4 integer matrix (rows of 4)."""
    ((a, b, c, d), (e, f, g, h), (i, j, k, l), (m0, n, o, p)) = m
    kp_lo = k * p - l * o
    jp_ln = j * p - l * n
    jo_kn = j * o - k * n
    ip_lm = i * p - l * m0
    io_km = i * o - k * m0
    in_jm = i * n - j * m0
    return (a * (f * kp_lo - g * jp_ln + h * jo_kn)
            - b * (e * kp_lo - g * ip_lm + h * io_km)
            + c * (e * jp_ln - f * ip_lm + h * in_jm)
            - d * (e * jo_kn - f * io_km + g * in_jm))


def _mul_psi_coeffs(c: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    c0, c1, c2, c3 = c
    # (c0 + c1 psi + c2 psi^2 + c3 psi^3) * psi, reduced.
    return (c3, c0, c1 - c3, c2)


def div_exact(a: AlgebraicNum, b: AlgebraicNum) -> tuple[AlgebraicNum, int]:
    """Exact quotient a/b in Q(psi) as (numerator, positive denominator).

    The denominator is a positive integer; gcd-reduced.  Raises
    ZeroDivisionError for b == 0.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero in Q(psi)")
    cols = [b.coeffs()]
    for _ in range(3):
        cols.append(_mul_psi_coeffs(cols[-1]))
    # Solve M x = a by Cramer's rule; M has columns b * psi^j.
    rows = [tuple(cols[j][i] for j in range(4)) for i in range(4)]
    det = _det4(rows)
    target = a.coeffs()
    nums = []
    for j in range(4):
        rep = [tuple(target[i] if jj == j else rows[i][jj] for jj in range(4))
               for i in range(4)]
        nums.append(_det4(rep))
    if det < 0:
        det = -det
        nums = [-x for x in nums]
    from math import gcd
    g = gcd(det, *map(abs, nums)) if any(nums) else det
    if g > 1:
        det //= g
        nums = [x // g for x in nums]
    return AlgebraicNum(*nums), det
