"""Exact and floating matrix algebra around SL2: Iwasawa factorization,
the scaling character on the normalizer of the unipotent subgroup,
commensurator elements, parabolic stabilizers of quadratic irrationals,
and the 4x4 rational quaternion representation.

All rational-algebra paths use fractions.Fraction end to end; floats only
appear in final embeddings into SL2(R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotInNormalizerError

__all__ = [
    "RationalMat",
    "Surd",
    "IwasawaTriple",
    "iwasawa",
    "chi_of",
    "commensurator_element",
    "ParabolicElement",
    "parabolic_family_element",
    "quat_rep",
    "quat_mul",
    "quat_norm",
]

_NORMALIZER_TOL = 1e-9  # off-unipotent entries of the conjugate


# ---------------------------------------------------------------------------
# exact rational matrices


class RationalMat:
    """Small dense matrix over Q (2x2 or 4x4 in practice).

    Fractions keep denominators positive and reduced automatically.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(Fraction(v) for v in r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, n: int) -> "RationalMat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, RationalMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "RationalMat") -> "RationalMat":
        return RationalMat(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "RationalMat") -> "RationalMat":
        return RationalMat(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __matmul__(self, other: "RationalMat") -> "RationalMat":
        n = self.n
        cols = list(zip(*other.rows))
        return RationalMat(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows]
        )

    def scale(self, c) -> "RationalMat":
        c = Fraction(c)
        return RationalMat([[c * v for v in row] for row in self.rows])

    def det(self) -> Fraction:
        n = self.n
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        # fraction-free enough for 4x4: Laplace along the first row
        total = Fraction(0)
        for j in range(n):
            minor = RationalMat(
                [[self.rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
            )
            term = self.rows[0][j] * minor.det()
            total += term if j % 2 == 0 else -term
        return total

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.rows], dtype=np.float64)

    def __repr__(self):
        return f"RationalMat({[[str(v) for v in row] for row in self.rows]})"


# ---------------------------------------------------------------------------
# surds: p + q*sqrt(d) with rational p, q


@dataclass(frozen=True)
class Surd:
    """Element p + q*sqrt(d) of the real quadratic field Q(sqrt(d))."""

    p: Fraction
    q: Fraction
    d: int

    @classmethod
    def make(cls, p, q, d: int) -> "Surd":
        return cls(Fraction(p), Fraction(q), int(d))

    def _check(self, other: "Surd"):
        if self.d != other.d:
            raise ValueError("surds live in different quadratic fields")

    def __add__(self, other):
        if isinstance(other, Surd):
            self._check(other)
            return Surd(self.p + other.p, self.q + other.q, self.d)
        return Surd(self.p + Fraction(other), self.q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Surd) else Surd(-Fraction(other), 0, self.d))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Surd):
            self._check(other)
            return Surd(
                self.p * other.p + self.d * self.q * other.q,
                self.p * other.q + self.q * other.p,
                self.d,
            )
        c = Fraction(other)
        return Surd(self.p * c, self.q * c, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Surd):
            c = Fraction(other)
            return Surd(self.p / c, self.q / c, self.d)
        self._check(other)
        norm = other.p * other.p - self.d * other.q * other.q
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        conj = Surd(other.p, -other.q, self.d)
        num = self * conj
        return Surd(num.p / norm, num.q / norm, self.d)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.d == other.d and self.p == other.p and self.q == other.q
        return self.q == 0 and self.p == Fraction(other)

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __repr__(self):
        return f"({self.p} + {self.q}*sqrt({self.d}))"


# ---------------------------------------------------------------------------
# Iwasawa decomposition g = n s k


@dataclass(frozen=True)
class IwasawaTriple:
    """Factors of g = n·s·k: unipotent, positive diagonal, rotation."""

    n: np.ndarray
    s: np.ndarray
    k: np.ndarray

    def product(self) -> np.ndarray:
        return self.n @ self.s @ self.k

    @property
    def x(self) -> float:
        return float(self.n[0, 1])

    @property
    def t(self) -> float:
        return float(self.s[0, 0])

    @property
    def angle(self) -> float:
        return math.atan2(float(self.k[1, 0]), float(self.k[0, 0]))


def iwasawa(g) -> IwasawaTriple:
    """Unique factorization g = n·s·k with s positive diagonal of det 1."""
    m = np.asarray(g, dtype=np.float64)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1.0) > 1e-9:
        raise ValueError(f"matrix is not unimodular: det={det!r}")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    den = c * c + d * d
    if den == 0.0:
        raise ValueError("singular input")
    x = (b * d + a * c) / den
    y = det / den
    t = math.sqrt(y)
    n = np.array([[1.0, x], [0.0, 1.0]])
    s = np.array([[t, 0.0], [0.0, 1.0 / t]])
    # k = s^-1 n^-1 g is a rotation; build it directly
    k = np.array([[1.0 / t, -x / t], [0.0, t]]) @ m
    return IwasawaTriple(n=n, s=s, k=k)


# ---------------------------------------------------------------------------
# the scaling character chi on the normalizer of U


def chi_of(gamma, u) -> float:
    """chi with gamma·u·gamma^-1 = u^chi, for gamma normalizing U.

    u must be upper unitriangular with parameter s != 0; raises
    NotInNormalizerError when the conjugate is not of that shape.
    """
    gm = np.asarray(gamma, dtype=np.float64)
    um = np.asarray(u, dtype=np.float64)
    s = um[0, 1]
    if not (
        abs(um[0, 0] - 1.0) < 1e-12
        and abs(um[1, 1] - 1.0) < 1e-12
        and abs(um[1, 0]) < 1e-12
        and s != 0.0
    ):
        raise ValueError("u must be upper unitriangular with nonzero parameter")
    det = gm[0, 0] * gm[1, 1] - gm[0, 1] * gm[1, 0]
    if abs(det) < 1e-12:
        raise ValueError("gamma is singular")
    inv = np.array([[gm[1, 1], -gm[0, 1]], [-gm[1, 0], gm[0, 0]]]) / det
    conj = gm @ um @ inv
    off = max(abs(conj[0, 0] - 1.0), abs(conj[1, 1] - 1.0), abs(conj[1, 0]))
    if off > _NORMALIZER_TOL:
        raise NotInNormalizerError(
            f"conjugate is not unipotent upper-triangular (deviation {off:.3e})"
        )
    chi = conj[0, 1] / s
    if chi <= 0:
        raise NotInNormalizerError(f"conjugation scales u by a non-positive factor {chi!r}")
    return float(chi)


# ---------------------------------------------------------------------------
# commensurator of SL2(Z)


def commensurator_element(a_mat) -> np.ndarray:
    """A / sqrt(det A) for rational A with det A > 0; result has det 1."""
    if not isinstance(a_mat, RationalMat):
        a_mat = RationalMat(a_mat)
    det = a_mat.det()
    if det <= 0:
        raise ValueError(f"det A must be positive, got {det}")
    return a_mat.to_float() / math.sqrt(float(det))


# ---------------------------------------------------------------------------
# parabolic stabilizer family of a quadratic irrational


@dataclass(frozen=True)
class ParabolicElement:
    """Det-normalized stabilizer element plus the surd data it fixes.

    The raw rational matrix [[(t+bu)/2, au], [-cu, (t-bu)/2]] fixes the
    roots of the reversed polynomial c z^2 + b z + a (not a z^2 + b z + c;
    row/column convention of the source display), so those roots are
    reported and verified, surd-exactly and in floating point.
    """

    matrix: np.ndarray
    raw: RationalMat
    fixed_points: tuple  # Surd pair, or () for scalar elements
    discriminant: int


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _mobius_fixes(m: RationalMat, z: Surd) -> bool:
    # (m00 z + m01) == z (m10 z + m11), exactly in Q(sqrt d)
    lhs = z * m[0, 0] + Surd.make(m[0, 1], 0, z.d)
    rhs = z * (z * m[1, 0] + Surd.make(m[1, 1], 0, z.d))
    return lhs == rhs


def parabolic_family_element(a: int, b: int, c: int, t, u) -> ParabolicElement:
    """Element [[(t+bu)/2, au], [-cu, (t-bu)/2]] normalized to det 1.

    Preconditions: gcd(a,b,c)=1, d = b^2-4ac positive and nonsquare,
    t^2 - d u^2 > 0 with t, u rational.
    """
    a, b, c = int(a), int(b), int(c)
    if math.gcd(math.gcd(abs(a), abs(b)), abs(c)) != 1:
        raise ValueError("a, b, c must have gcd 1")
    d = b * b - 4 * a * c
    if d <= 0:
        raise ValueError(f"discriminant {d} is not positive")
    if _is_square(d):
        raise ValueError(f"discriminant {d} is a perfect square; the root is rational")
    t = Fraction(t)
    u = Fraction(u)
    norm = t * t - d * u * u
    if norm <= 0:
        raise ValueError(f"t^2 - d u^2 = {norm} is not positive")
    raw = RationalMat(
        [
            [(t + b * u) / 2, a * u],
            [-c * u, (t - b * u) / 2],
        ]
    )
    det = raw.det()  # equals (t^2 - d u^2) / 4 > 0
    mat = raw.to_float() / math.sqrt(float(det))
    if u == 0:
        return ParabolicElement(matrix=mat, raw=raw, fixed_points=(), discriminant=d)
    roots = (
        Surd(Fraction(-b, 2 * c), Fraction(1, 2 * c), d),
        Surd(Fraction(-b, 2 * c), Fraction(-1, 2 * c), d),
    )
    for z in roots:
        if not _mobius_fixes(raw, z):
            raise AssertionError("stabilizer failed to fix its quadratic irrational")
        zf = float(z)
        img = (mat[0, 0] * zf + mat[0, 1]) / (mat[1, 0] * zf + mat[1, 1])
        if abs(img - zf) > 1e-10 * max(1.0, abs(zf)):
            raise AssertionError("floating-point fixed-point check failed")
    return ParabolicElement(matrix=mat, raw=raw, fixed_points=roots, discriminant=d)


# ---------------------------------------------------------------------------
# quaternion representation psi: D -> M4(Q)


def _basis_matrices(a: Fraction, b: Fraction):
    one = RationalMat.identity(4)
    w = RationalMat(
        [
            [0, 1, 0, 0],
            [a, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, a, 0],
        ]
    )
    om = RationalMat(
        [
            [0, 0, 1, 0],
            [0, 0, 0, -1],
            [b, 0, 0, 0],
            [0, -b, 0, 0],
        ]
    )
    wom = RationalMat(
        [
            [0, 0, 0, 1],
            [0, 0, -a, 0],
            [0, b, 0, 0],
            [-a * b, 0, 0, 0],
        ]
    )
    return one, w, om, wom


def quat_rep(x0, x1, x2, x3, a, b) -> RationalMat:
    """Exact 4x4 image x0·I + x1·psi(w) + x2·psi(W) + x3·psi(wW).

    a > 0 required; psi is a ring homomorphism for the product convention
    of quat_mul, and det psi = (reduced norm)^2.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0:
        raise ValueError("a must be positive")
    one, w, om, wom = _basis_matrices(a, b)
    return (
        one.scale(x0) + w.scale(x1) + om.scale(x2) + wom.scale(x3)
    )


def quat_mul(x, y, a, b):
    """Quaternion product in the convention matched to quat_rep.

    Relations: w^2 = a, W^2 = b, k^2 = -ab with k the third basis vector
    (k = W·w, so w·W = -k); anticommutation holds as usual.
    """
    a = Fraction(a)
    b = Fraction(b)
    x0, x1, x2, x3 = (Fraction(v) for v in x)
    y0, y1, y2, y3 = (Fraction(v) for v in y)
    return (
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 + b * x2 * y3 - b * x3 * y2,
        x0 * y2 + x2 * y0 - a * x1 * y3 + a * x3 * y1,
        x0 * y3 + x3 * y0 - x1 * y2 + x2 * y1,
    )


def quat_norm(x, a, b) -> Fraction:
    """Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2."""
    a = Fraction(a)
    b = Fraction(b)
    x0, x1, x2, x3 = (Fraction(v) for v in x)
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3
