"""Dense square matrices over an exact scalar ring, block assembly, and
fraction-free determinants.

There is deliberately no general matrix inversion: every matrix that needs
an inverse in this package is a representation image, and its inverse is the
image of the inverse word.
"""

from __future__ import annotations

from .ring import INT, ring_from_descriptor


class RingMatrix:
    """Immutable square matrix; entries live in one scalar ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows):
        rows = tuple(tuple(r) for r in rows)
        for r in rows:
            if len(r) != len(rows):
                raise ValueError("matrix must be square")
        self.ring = ring
        self.rows = rows

    @classmethod
    def identity(cls, ring, d: int) -> "RingMatrix":
        one, zero = ring.one, ring.zero
        return cls(ring, tuple(
            tuple(one if i == j else zero for j in range(d)) for i in range(d)
        ))

    @classmethod
    def zeros(cls, ring, d: int) -> "RingMatrix":
        zero = ring.zero
        return cls(ring, tuple(tuple(zero for _ in range(d)) for _ in range(d)))

    @classmethod
    def from_ints(cls, ring, rows) -> "RingMatrix":
        return cls(ring, tuple(
            tuple(ring.from_int(v) for v in row) for row in rows
        ))

    @property
    def degree(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
        )

    def __mul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        d = self.degree
        zero = self.ring.zero
        out = []
        for i in range(d):
            acc = [zero] * d
            for k, a in enumerate(self.rows[i]):
                if a == zero:
                    continue
                brow = other.rows[k]
                for j in range(d):
                    b = brow[j]
                    if b == zero:
                        continue
                    acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return RingMatrix(self.ring, tuple(out))

    def __pow__(self, k: int) -> "RingMatrix":
        if k < 0:
            raise ValueError("no generic inversion; use the inverse image")
        out = RingMatrix.identity(self.ring, self.degree)
        for _ in range(k):
            out = out * self
        return out

    def scalar_mul(self, c) -> "RingMatrix":
        return RingMatrix(self.ring, tuple(
            tuple(c * x for x in row) for row in self.rows
        ))

    def is_identity(self) -> bool:
        return self == RingMatrix.identity(self.ring, self.degree)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def to_json(self):
        enc = self.ring.scalar_to_json
        return {
            "degree": self.degree,
            "ring": self.ring.descriptor(),
            "rows": [[enc(x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, doc) -> "RingMatrix":
        ring = ring_from_descriptor(doc["ring"])
        dec = ring.scalar_from_json
        rows = tuple(tuple(dec(x) for x in row) for row in doc["rows"])
        m = cls(ring, rows)
        if m.degree != doc["degree"]:
            raise ValueError("degree field does not match row count")
        return m

    def __repr__(self):
        return "RingMatrix([\n" + "\n".join(
            "  [" + ", ".join(repr(x) for x in row) + "]" for row in self.rows
        ) + f"\n]) over {self.ring!r}"


def block_grid(ring, bdeg: int, k: int, blocks) -> "RingMatrix":
    """Assemble a k*k grid of bdeg-degree blocks; missing entries are zero.

    blocks maps (i, j) -> RingMatrix or None for an identity block.
    """
    d = bdeg * k
    zero = ring.zero
    rows = [[zero] * d for _ in range(d)]
    ident = RingMatrix.identity(ring, bdeg)
    for (bi, bj), blk in blocks.items():
        if blk is None:
            blk = ident
        if blk.degree != bdeg:
            raise ValueError("inhomogeneous block degree")
        if blk.ring != ring:
            raise ValueError("block over a different ring")
        for i in range(bdeg):
            row = blk.rows[i]
            out = rows[bi * bdeg + i]
            for j in range(bdeg):
                out[bj * bdeg + j] = row[j]
    return RingMatrix(ring, tuple(tuple(r) for r in rows))


def block_diag(blocks) -> "RingMatrix":
    if not blocks:
        raise ValueError("empty block list")
    bdeg = blocks[0].degree
    return block_grid(
        blocks[0].ring, bdeg, len(blocks),
        {(i, i): b for i, b in enumerate(blocks)},
    )


def block_companion(superdiag, corner) -> "RingMatrix":
    """Blocks (i, i+1) from superdiag (None means identity), corner at (k, 1).

    This is the stable-letter shape: identity blocks shifting the cosets and
    the subgroup image in the lower-left corner.
    """
    k = len(superdiag) + 1
    grid = {(i, i + 1): blk for i, blk in enumerate(superdiag)}
    grid[(k - 1, 0)] = corner
    return block_grid(corner.ring, corner.degree, k, grid)


def get_block(m: RingMatrix, i: int, j: int, bdeg: int) -> RingMatrix:
    rows = tuple(
        m.rows[i * bdeg + r][j * bdeg: (j + 1) * bdeg] for r in range(bdeg)
    )
    return RingMatrix(m.ring, rows)


def conjugate(m: RingMatrix, u: RingMatrix, u_inv: RingMatrix) -> RingMatrix:
    """Return u_inv * m * u, after checking u_inv is a two-sided inverse."""
    ident = RingMatrix.identity(u.ring, u.degree)
    if u * u_inv != ident or u_inv * u != ident:
        raise ValueError("u_inv is not a two-sided inverse of u")
    return u_inv * m * u


def det2(m: RingMatrix):
    if m.degree != 2:
        raise ValueError("det2 needs a 2x2 matrix")
    (a, b), (c, d) = m.rows
    return a * d - b * c


def det_bareiss(m: RingMatrix) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    if m.ring != INT:
        raise ValueError("Bareiss determinant is for integer matrices")
    n = m.degree
    if n == 0:
        return 1
    a = [list(row) for row in m.rows]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
            a[r][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1]
