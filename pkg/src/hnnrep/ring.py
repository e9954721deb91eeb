"""Exact scalar rings for the representation matrices.

LaurentPoly is an element of Z[lam, mu, s, s^-1]: lam and mu exponents are
non-negative (every matrix entry the constructions produce is polynomial in
lam, mu), the s exponent is unrestricted.  QpScalar is a rational x / p^k
with a fixed prime p.  Plain Python ints and Fractions serve as the integer
and rational scalar rings for the integer representation and the splittable
engine.

Each ring has a small descriptor object carrying zero/one, integer
embedding, and a bit-exact JSON encoding of its scalars.
"""

from __future__ import annotations

from fractions import Fraction

Monomial = "tuple[int, int, int]"  # exponents of (lam, mu, s)


class LaurentPoly:
    """Integer-coefficient polynomial in lam, mu and the invertible s."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                a, b, c = mono
                if a < 0 or b < 0:
                    raise ValueError(f"negative lam/mu exponent in {mono}")
                if coeff:
                    clean[mono] = coeff
        self.terms = clean

    @classmethod
    def const(cls, k: int) -> "LaurentPoly":
        return cls({(0, 0, 0): k})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff: int = 1) -> "LaurentPoly":
        return cls({(a, b, c): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = out.get(mono, 0) + coeff
            if new:
                out[mono] = new
            elif mono in out:
                del out[mono]
        result = LaurentPoly()
        result.terms = out
        return result

    def __neg__(self):
        result = LaurentPoly()
        result.terms = {m: -c for m, c in self.terms.items()}
        return result

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (a1, b1, c1), k1 in self.terms.items():
            for (a2, b2, c2), k2 in other.terms.items():
                mono = (a1 + a2, b1 + b2, c1 + c2)
                new = out.get(mono, 0) + k1 * k2
                if new:
                    out[mono] = new
                elif mono in out:
                    del out[mono]
        result = LaurentPoly()
        result.terms = out
        return result

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use unit_inverse for negative powers")
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def is_unit(self) -> bool:
        """Units of the ring are exactly +-s^c."""
        if len(self.terms) != 1:
            return False
        ((a, b, _c),) = self.terms.keys()
        (coeff,) = self.terms.values()
        return a == 0 and b == 0 and coeff in (1, -1)

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ValueError(f"{self!r} is not a unit")
        ((_a, _b, c),) = self.terms.keys()
        (coeff,) = self.terms.values()
        return LaurentPoly({(0, 0, -c): coeff})

    def specialize(self, lam0: int, mu0: int, prime: int) -> "QpScalar":
        """Evaluate at lam = lam0, mu = mu0, s = prime, landing in Q_p."""
        shift = max((0,) + tuple(-c for (_, _, c) in self.terms))
        num = 0
        for (a, b, c), coeff in self.terms.items():
            num += coeff * lam0**a * mu0**b * prime ** (c + shift)
        return QpScalar(num, shift, prime)

    def to_json(self):
        return [[a, b, c, str(k)] for (a, b, c), k in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, doc) -> "LaurentPoly":
        return cls({(a, b, c): int(k) for a, b, c, k in doc})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), k in sorted(self.terms.items()):
            body = []
            if a:
                body.append(f"lam^{a}" if a != 1 else "lam")
            if b:
                body.append(f"mu^{b}" if b != 1 else "mu")
            if c:
                body.append(f"s^{c}" if c != 1 else "s")
            if abs(k) != 1 or not body:
                body.insert(0, str(abs(k)))
            term = "*".join(body)
            parts.append(("- " if k < 0 else "+ ") + term)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


class QpScalar:
    """Rational num / p^k for a fixed prime p; p never divides num unless k = 0."""

    __slots__ = ("num", "k", "p")

    def __init__(self, num: int, k: int, p: int):
        if k < 0:
            raise ValueError("denominator exponent must be non-negative")
        while k > 0 and num % p == 0:
            num //= p
            k -= 1
        if num == 0:
            k = 0
        self.num = num
        self.k = k
        self.p = p

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __bool__(self):
        return self.num != 0

    def __eq__(self, other):
        return (
            isinstance(other, QpScalar)
            and self.p == other.p
            and self.num == other.num
            and self.k == other.k
        )

    def __add__(self, other):
        self._check(other)
        k = max(self.k, other.k)
        num = self.num * self.p ** (k - self.k) + other.num * self.p ** (k - other.k)
        return QpScalar(num, k, self.p)

    def __neg__(self):
        return QpScalar(-self.num, self.k, self.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return QpScalar(self.num * other.num, self.k + other.k, self.p)

    def is_unit(self) -> bool:
        """Units of Q_p are +-p^e."""
        num = abs(self.num)
        while num % self.p == 0:
            num //= self.p
        return num == 1

    def unit_inverse(self) -> "QpScalar":
        if not self.is_unit():
            raise ValueError(f"{self!r} is not a unit of Q_{self.p}")
        sign = 1 if self.num > 0 else -1
        e = 0  # value is sign * p^e
        num = abs(self.num)
        while num % self.p == 0:
            num //= self.p
            e += 1
        e -= self.k
        if e >= 0:
            return QpScalar(sign, e, self.p)
        return QpScalar(sign * self.p ** (-e), 0, self.p)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.p**self.k)

    def to_json(self):
        return [str(self.num), self.k]

    def __repr__(self):
        return str(self.num) if self.k == 0 else f"{self.num}/{self.p}^{self.k}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class LaurentRing:
    kind = "laurent"

    @property
    def zero(self):
        return LaurentPoly()

    @property
    def one(self):
        return LaurentPoly.const(1)

    def from_int(self, k):
        return LaurentPoly.const(k)

    def lam(self):
        return LaurentPoly.monomial(1, 0, 0)

    def mu(self):
        return LaurentPoly.monomial(0, 1, 0)

    def s_power(self, c: int, coeff: int = 1):
        return LaurentPoly.monomial(0, 0, c, coeff)

    def descriptor(self):
        return {"kind": "laurent"}

    def scalar_to_json(self, x):
        return x.to_json()

    def scalar_from_json(self, doc):
        return LaurentPoly.from_json(doc)

    def __eq__(self, other):
        return isinstance(other, LaurentRing)

    def __repr__(self):
        return "LaurentRing()"


class QpRing:
    kind = "qp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def zero(self):
        return QpScalar(0, 0, self.p)

    @property
    def one(self):
        return QpScalar(1, 0, self.p)

    def from_int(self, k):
        return QpScalar(k, 0, self.p)

    def descriptor(self):
        return {"kind": "qp", "prime": self.p}

    def scalar_to_json(self, x):
        return x.to_json()

    def scalar_from_json(self, doc):
        num, k = doc
        return QpScalar(int(num), k, self.p)

    def __eq__(self, other):
        return isinstance(other, QpRing) and self.p == other.p

    def __repr__(self):
        return f"QpRing({self.p})"


class IntRing:
    kind = "integer"
    zero = 0
    one = 1

    def from_int(self, k):
        return k

    def descriptor(self):
        return {"kind": "integer"}

    def scalar_to_json(self, x):
        return str(x)

    def scalar_from_json(self, doc):
        return int(doc)

    def __eq__(self, other):
        return isinstance(other, IntRing)

    def __repr__(self):
        return "IntRing()"


class FractionRing:
    kind = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, k):
        return Fraction(k)

    def descriptor(self):
        return {"kind": "rational"}

    def scalar_to_json(self, x):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def scalar_from_json(self, doc):
        return Fraction(doc)

    def __eq__(self, other):
        return isinstance(other, FractionRing)

    def __repr__(self):
        return "FractionRing()"


LAURENT = LaurentRing()
INT = IntRing()
QQ = FractionRing()


def ring_from_descriptor(doc):
    kind = doc["kind"]
    if kind == "laurent":
        return LAURENT
    if kind == "qp":
        return QpRing(doc["prime"])
    if kind == "integer":
        return INT
    if kind == "rational":
        return QQ
    raise ValueError(f"unknown ring kind {kind!r}")


def specialize(p: LaurentPoly, lam0: int, mu0: int, prime: int) -> QpScalar:
    return p.specialize(lam0, mu0, prime)
