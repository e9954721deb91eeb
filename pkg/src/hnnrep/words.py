"""Free-group words, their endomorphisms, and the stable-letter calculus for
HNN extensions of a free group by a virtually inner automorphism.

An extension here is the group generated by base letters x0..x{r-1} and a
stable letter t subject to t^-1 x t = phi(x), where phi is an automorphism
of the free group F(x0..x{r-1}) with phi^n inner: phi^n(x) = w0 x w0^-1.
Every element has a unique normal form t^l * f with f a reduced base word;
all equality questions are settled through that normal form.

Words are immutable tuples of (generator, sign) symbols.  Base words are
kept freely reduced at all times; mixed words (which may contain t) are
stored as written and only reduced through the normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .errors import VerificationError

# Symbol ids: base generators are 0..rank-1, the stable letter is T_GEN.
T_GEN = -1

Sym = "tuple[int, int]"


def _reduce(syms):
    """Freely reduce a symbol sequence (single left-to-right stack pass)."""
    out = []
    for sym in syms:
        if out and out[-1][0] == sym[0] and out[-1][1] == -sym[1]:
            out.pop()
        else:
            out.append(sym)
    return tuple(out)


def _sym_str(sym):
    gen, sign = sym
    name = "t" if gen == T_GEN else f"x{gen}"
    return name if sign == 1 else f"{name}^-1"


def _check_syms(syms, allow_t):
    for gen, sign in syms:
        if sign not in (1, -1):
            raise ValueError(f"bad sign {sign!r}")
        if gen < 0 and not (allow_t and gen == T_GEN):
            raise ValueError(f"bad generator id {gen!r}")


@dataclass(frozen=True)
class Word:
    """Freely reduced word over the base generators only."""

    syms: tuple = ()

    def __post_init__(self):
        _check_syms(self.syms, allow_t=False)
        if self.syms != _reduce(self.syms):
            raise ValueError("word is not freely reduced; use Word.make")

    @staticmethod
    def make(syms) -> "Word":
        return Word(_reduce(tuple(syms)))

    @staticmethod
    def gen(i: int, sign: int = 1) -> "Word":
        return Word(((i, sign),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.syms + other.syms))

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.syms)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        out = Word()
        for _ in range(k):
            out = out * self
        return out

    def __len__(self):
        return len(self.syms)

    @property
    def min_rank(self) -> int:
        """Smallest rank of a free group containing this word."""
        return 1 + max((g for g, _ in self.syms), default=-1)

    def __str__(self):
        return " ".join(_sym_str(s) for s in self.syms) if self.syms else "ε"


@dataclass(frozen=True)
class MixedWord:
    """Word over the base generators and the stable letter, stored unreduced."""

    syms: tuple = ()

    def __post_init__(self):
        _check_syms(self.syms, allow_t=True)

    @staticmethod
    def gen(i: int, sign: int = 1) -> "MixedWord":
        return MixedWord(((i, sign),))

    @staticmethod
    def t(sign: int = 1) -> "MixedWord":
        return MixedWord(((T_GEN, sign),))

    @staticmethod
    def from_word(w: Word) -> "MixedWord":
        return MixedWord(w.syms)

    def __mul__(self, other: "MixedWord") -> "MixedWord":
        return MixedWord(self.syms + other.syms)

    def inverse(self) -> "MixedWord":
        return MixedWord(tuple((g, -s) for g, s in reversed(self.syms)))

    def __pow__(self, k: int) -> "MixedWord":
        if k < 0:
            return self.inverse() ** (-k)
        return MixedWord(self.syms * k)

    def free_reduce(self) -> "MixedWord":
        return MixedWord(_reduce(self.syms))

    def __len__(self):
        return len(self.syms)

    @property
    def min_rank(self) -> int:
        return 1 + max((g for g, _ in self.syms), default=-1)

    def __str__(self):
        return " ".join(_sym_str(s) for s in self.syms) if self.syms else "ε"


_TERM_RE = re.compile(r"^(x(\d+)|t)(\^(-?\d+))?$")


def parse_word(text: str) -> MixedWord:
    """Parse the word grammar: whitespace-separated terms gen('^'signed-int)?.

    Generators are x<digits> or t; an exponent expands to |k| symbols, e.g.
    "x0 t^-1 x1^2 t" and "ε" (or "") is the empty word.
    """
    text = text.strip()
    if text in ("", "ε", "1"):
        return MixedWord()
    syms = []
    for term in text.split():
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"cannot parse term {term!r}")
        gen = T_GEN if m.group(1) == "t" else int(m.group(2))
        exp = int(m.group(4)) if m.group(4) is not None else 1
        sign = 1 if exp > 0 else -1
        syms.extend([(gen, sign)] * abs(exp))
    return MixedWord(tuple(syms))


def parse_base_word(text: str) -> Word:
    w = parse_word(text)
    if any(g == T_GEN for g, _ in w.syms):
        raise ValueError("base word cannot contain the stable letter t")
    return Word.make(w.syms)


def _substitute(images, w: Word) -> Word:
    """Apply the generator-image table to w, reducing as we go."""
    out = []
    for g, s in w.syms:
        img = images[g].syms if s == 1 else images[g].inverse().syms
        for sym in img:
            if out and out[-1][0] == sym[0] and out[-1][1] == -sym[1]:
                out.pop()
            else:
                out.append(sym)
    return Word(tuple(out))


@dataclass(frozen=True)
class Endomorphism:
    """Free-group endomorphism given by generator images.

    If inverse_images is present the map is an automorphism; the pair of
    tables is validated by substituting one into the other on every
    generator.
    """

    rank: int
    images: tuple
    inverse_images: tuple = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(self.images) != self.rank:
            raise ValueError("one image per generator required")
        for w in self.images:
            if w.min_rank > self.rank:
                raise ValueError("image uses a generator outside the rank")
        if self.inverse_images is not None:
            if len(self.inverse_images) != self.rank:
                raise ValueError("one inverse image per generator required")
            for i in range(self.rank):
                back = _substitute(self.inverse_images, self.images[i])
                forth = _substitute(self.images, self.inverse_images[i])
                if back != Word.gen(i) or forth != Word.gen(i):
                    raise ValueError(
                        f"inverse images do not invert the map on x{i}"
                    )

    @staticmethod
    def identity(rank: int) -> "Endomorphism":
        gens = tuple(Word.gen(i) for i in range(rank))
        return Endomorphism(rank, gens, gens)

    @property
    def invertible(self) -> bool:
        return self.inverse_images is not None

    def apply(self, w: Word) -> Word:
        if w.min_rank > self.rank:
            raise ValueError("word rank exceeds endomorphism rank")
        return _substitute(self.images, w)

    def inverse(self) -> "Endomorphism":
        if self.inverse_images is None:
            raise ValueError("endomorphism has no inverse images")
        return Endomorphism(self.rank, self.inverse_images, self.images)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """Return self o other (apply other first)."""
        if self.rank != other.rank:
            raise ValueError("rank mismatch in composition")
        images = tuple(self.apply(w) for w in other.images)
        inv = None
        if self.invertible and other.invertible:
            other_inv = other.inverse()
            inv = tuple(other_inv.apply(w) for w in self.inverse_images)
        return Endomorphism(self.rank, images, inv)

    def power(self, k: int) -> "Endomorphism":
        if k == 0:
            return Endomorphism.identity(self.rank)
        if k < 0:
            return self.inverse().power(-k)
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def same_map(self, other: "Endomorphism") -> bool:
        """Equality as maps: identical images on every generator."""
        return self.rank == other.rank and self.images == other.images


def endo_power(e: Endomorphism, k: int) -> Endomorphism:
    return e.power(k)


def inner_endomorphism(rank: int, g: Word) -> Endomorphism:
    """Conjugation x -> g x g^-1 as an automorphism."""
    ginv = g.inverse()
    images = tuple(g * Word.gen(i) * ginv for i in range(rank))
    inverse = tuple(ginv * Word.gen(i) * g for i in range(rank))
    return Endomorphism(rank, images, inverse)


def _shift_automorphism(rank: int, head: Word) -> Endomorphism:
    """Automorphism x0 -> head, xi -> x_{i-1}, with inverses solved.

    The inverse is triangular: x_j -> x_{j+1} for j < rank-1 comes straight
    from the shift, and the last inverse image is solved from the head word,
    which must contain the top generator exactly once.
    """
    images = (head,) + tuple(Word.gen(i) for i in range(rank - 1))
    hits = [(pos, s) for pos, (g, s) in enumerate(head.syms) if g == rank - 1]
    if len(hits) != 1:
        raise ValueError("head word must contain the top generator exactly once")
    pos, eps = hits[0]
    shift_up = lambda w: Word.make((g + 1, s) for g, s in w.syms)
    a = shift_up(Word(head.syms[:pos]))
    b = shift_up(Word(head.syms[pos + 1:]))
    # x0 = a * u^eps * b, where u is the missing inverse image of x_{rank-1}
    u_eps = a.inverse() * Word.gen(0) * b.inverse()
    last = u_eps if eps == 1 else u_eps.inverse()
    inverse = tuple(Word.gen(j + 1) for j in range(rank - 1)) + (last,)
    return Endomorphism(rank, images, inverse)


@dataclass(frozen=True)
class HnnSpec:
    """Data (rank, phi, n, w0) of an HNN extension with phi^n inner.

    phi^n(x) = w0 x w0^-1 is checked on every generator.  Minimality of n is
    trusted, not decided; the built-in Artin specs satisfy it.
    """

    rank: int
    phi: Endomorphism
    n: int
    w0: Word

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("inner power must be positive")
        if self.phi.rank != self.rank:
            raise ValueError("phi rank does not match spec rank")
        if not self.phi.invertible:
            raise ValueError("phi must be an automorphism")
        if self.w0.min_rank > self.rank:
            raise ValueError("w0 uses a generator outside the rank")
        phi_n = self.phi.power(self.n)
        w0_inv = self.w0.inverse()
        for i in range(self.rank):
            if phi_n.apply(Word.gen(i)) != self.w0 * Word.gen(i) * w0_inv:
                raise ValueError(
                    f"phi^{self.n} is not conjugation by w0 on x{i}"
                )

    @cached_property
    def phi_inv(self) -> Endomorphism:
        return self.phi.inverse()

    @property
    def f(self) -> Word:
        """The conjugator with phi^n(x) = f^-1 x f, namely w0^-1."""
        return self.w0.inverse()

    @property
    def generators(self):
        """Mixed-word generators x0..x{rank-1}, t."""
        gens = [MixedWord.gen(i) for i in range(self.rank)]
        gens.append(MixedWord.t())
        return gens


@dataclass(frozen=True)
class NormalForm:
    l: int
    f: Word

    @property
    def trivial(self) -> bool:
        return self.l == 0 and not self.f.syms

    def __str__(self):
        return f"t^{self.l} · {self.f}"


def normal_form(spec: HnnSpec, w) -> NormalForm:
    """Normal form t^l * f of a mixed word, by a single left-to-right scan.

    A base symbol appends to f; reading t^e sets l += e and f := phi^e(f).
    """
    syms = w.syms if isinstance(w, (Word, MixedWord)) else tuple(w)
    l = 0
    f = Word()
    for g, s in syms:
        if g == T_GEN:
            l += s
            f = spec.phi.apply(f) if s == 1 else spec.phi_inv.apply(f)
        else:
            if g >= spec.rank:
                raise ValueError(f"generator x{g} outside rank {spec.rank}")
            f = f * Word.gen(g, s)
    return NormalForm(l, f)


def equal(spec: HnnSpec, u, v) -> bool:
    """Word problem for the extension: compare normal forms."""
    return normal_form(spec, u) == normal_form(spec, v)


def center_generator(spec: HnnSpec) -> MixedWord:
    """The central element t^n * w0, verified to commute with every generator."""
    z = MixedWord.t() ** spec.n * MixedWord.from_word(spec.w0)
    for g in spec.generators:
        if not equal(spec, z * g, g * z):
            raise VerificationError(f"t^n w0 does not commute with {g}")
    return z


def artin_even_spec(n: int) -> HnnSpec:
    """HNN data of the Artin group on two generators with even index 2n.

    The automorphism sends x0 to the conjugate of the top generator by
    x0..x_{n-2} and shifts the rest down; its n-th power is conjugation by
    Delta = x0 x1 .. x_{n-1}.
    """
    if n < 2:
        raise ValueError("even Artin spec needs n >= 2")
    c = Word.make((i, 1) for i in range(n - 1))
    head = c * Word.gen(n - 1) * c.inverse()
    phi = _shift_automorphism(n, head)
    delta = Word.make((i, 1) for i in range(n))
    return HnnSpec(rank=n, phi=phi, n=n, w0=delta)


def artin_odd_spec(n: int) -> HnnSpec:
    """HNN data of the Artin group on two generators with odd index 2n+1.

    The free group has rank 2n; the automorphism psi sends x0 to
    x0 x2 .. x_{2n-2} x_{2n-1}^-1 .. x1^-1 and shifts the rest down.  Its
    2(2n+1)-th power is conjugation by
    Sigma = x0 x2 .. x_{2n-2} (x0 x1 .. x_{2n-1})^-1 x1 x3 .. x_{2n-1}.
    """
    if n < 1:
        raise ValueError("odd Artin spec needs n >= 1")
    rank = 2 * n
    evens = Word.make((i, 1) for i in range(0, rank, 2))
    odds_desc_inv = Word.make((i, -1) for i in range(rank - 1, 0, -2))
    head = evens * odds_desc_inv
    psi = _shift_automorphism(rank, head)
    all_gens = Word.make((i, 1) for i in range(rank))
    odds = Word.make((i, 1) for i in range(1, rank, 2))
    sigma = evens * all_gens.inverse() * odds
    return HnnSpec(rank=rank, phi=psi, n=2 * (2 * n + 1), w0=sigma)


def psi_inverse_power_x0(n: int, i: int) -> Word:
    """Closed form of psi^-i(x0) for the odd spec: x_i while the shift lasts
    (i <= 2n-1), then Sigma^-1 psi^{4n+2-i}(x0) Sigma."""
    if not 1 <= i <= 4 * n + 1:
        raise ValueError(f"i must lie in [1, {4 * n + 1}]")
    if i <= 2 * n - 1:
        return Word.gen(i)
    spec = artin_odd_spec(n)
    w = spec.phi.power(4 * n + 2 - i).apply(Word.gen(0))
    return spec.w0.inverse() * w * spec.w0


def artin_canonical(m: int):
    """Canonical two-generator presentation data for Artin index m >= 3.

    Returns (x, y, (lhs, rhs)) as mixed words over the matching HNN spec:
    even m = 2n gives x = x0, y = t with (x0 t)^n = (t x0)^n; odd m = 2n+1
    gives x = t, y = x0 t with (t x0 t)^n t = (x0 t^2)^n x0 t.  Both sides
    are verified equal under the spec's normal form.
    """
    if m < 3:
        raise ValueError("Artin index must be at least 3")
    t = MixedWord.t()
    x0 = MixedWord.gen(0)
    if m % 2 == 0:
        n = m // 2
        spec = artin_even_spec(n)
        x, y = x0, t
        lhs = (x0 * t) ** n
        rhs = (t * x0) ** n
    else:
        n = (m - 1) // 2
        spec = artin_odd_spec(n)
        x, y = t, x0 * t
        lhs = (t * x0 * t) ** n * t
        rhs = (x0 * t * t) ** n * x0 * t
    if not equal(spec, lhs, rhs):
        raise VerificationError(f"canonical relation fails for m = {m}")
    return x, y, (lhs, rhs)


@dataclass(frozen=True)
class HolomorphCheck:
    ok: bool
    convention: str = None

    def __bool__(self):
        return self.ok


def holomorph_conjugation_check(phi: Endomorphism, g: Word) -> HolomorphCheck:
    """Check that conjugating the inner map of g by phi gives the inner map
    of phi(g), trying both composition-order conventions.

    With ghat(w) = g w g^-1, the candidate identities are
    phi o ghat o phi^-1 = inner(phi(g))   ("ltr": phi^-1 applied first) and
    phi^-1 o ghat o phi = inner(phi(g))   ("rtl": phi applied first).
    Returns which convention verifies on every generator, if either does.
    """
    if not phi.invertible:
        raise ValueError("phi must be invertible")
    rank = phi.rank
    if g.min_rank > rank:
        raise ValueError("g outside the rank of phi")
    ghat = inner_endomorphism(rank, g)
    target = inner_endomorphism(rank, phi.apply(g))
    phi_inv = phi.inverse()
    ltr = phi.compose(ghat).compose(phi_inv)
    rtl = phi_inv.compose(ghat).compose(phi)
    if ltr.same_map(target):
        return HolomorphCheck(True, "ltr")
    if rtl.same_map(target):
        return HolomorphCheck(True, "rtl")
    return HolomorphCheck(False, None)
