"""Sparse multivariate Laurent polynomials over the integers.

A :class:`LaurentPoly` is an immutable map from exponent tuples (one signed
entry per variable) to nonzero Python integers.  Division is exact-or-nothing:
:func:`div_exact` returns ``None`` when the quotient is not a Laurent
polynomial.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import _packed

__all__ = [
    "LaurentPoly",
    "LaurentFraction",
    "RankMismatch",
    "div_exact",
    "den_vector",
    "has_var_in_denominator",
    "compare",
    "substitute",
    "fraction_equal",
    "evaluate",
]


class RankMismatch(ValueError):
    pass


Exponent = tuple  # tuple[int, ...]


class LaurentPoly:
    """Element of Z[x1^±1, ..., xn^±1] stored as ``{exponent: coeff}``."""

    __slots__ = ("rank", "_terms", "_hash", "_sort_key")

    def __init__(self, rank: int, terms: Mapping[Exponent, int] | Iterable = ()):
        if rank < 1:
            raise ValueError(f"rank must be positive, got {rank}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, int] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != rank:
                raise ValueError(f"exponent {exp} does not have length {rank}")
            c = clean.get(exp, 0) + int(coeff)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.rank = rank
        self._terms = clean
        self._hash = None
        self._sort_key = None

    @classmethod
    def _raw(cls, rank: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.rank = rank
        p._terms = terms
        p._hash = None
        p._sort_key = None
        return p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls._raw(rank, {(0,) * rank: int(c)} if c else {})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(rank, 1)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        exp = tuple(int(e) for e in exp)
        return cls._raw(len(exp), {exp: int(coeff)} if coeff else {})

    @classmethod
    def var(cls, rank: int, i: int) -> "LaurentPoly":
        """The coordinate variable x_{i+1} (0-based ``i``)."""
        if not 0 <= i < rank:
            raise IndexError(f"variable index {i} out of range for rank {rank}")
        exp = [0] * rank
        exp[i] = 1
        return cls._raw(rank, {tuple(exp): 1})

    # -- basic protocol ----------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def __getstate__(self):
        return (self.rank, self._terms)

    def __setstate__(self, state):
        self.rank, self._terms = state
        self._hash = None
        self._sort_key = None

    def __repr__(self) -> str:
        return f"LaurentPoly({self.rank}, {self.to_string()!r})"

    def __str__(self) -> str:
        return self.to_string()

    def _check(self, other: "LaurentPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.rank)
            return LaurentPoly._raw(self.rank, {e: c * other for e, c in self._terms.items()})
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers only exist for monomials")
            (exp, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("negative powers only exist for unit monomials")
            return LaurentPoly._raw(self.rank, {tuple(k * e for e in exp): c ** (-k)})
        result = LaurentPoly.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial x^exp."""
        return LaurentPoly._raw(
            self.rank,
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()},
        )

    # -- inspection --------------------------------------------------------

    def min_exponents(self) -> tuple:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return tuple(min(col) for col in zip(*self._terms))

    def coefficients(self) -> list[int]:
        return list(self._terms.values())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def sort_key(self) -> tuple:
        """Key realising :func:`compare`; cached."""
        if self._sort_key is None:
            self._sort_key = tuple(
                sorted((tuple(-e for e in exp), c) for exp, c in self._terms.items())
            )
        return self._sort_key

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in canonical order: higher power of x1 first, then x2, ..."""
        return [(tuple(-e for e in exp), c) for exp, c in self.sort_key()]

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.rank)]
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, exp):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_fraction_string(self) -> str:
        """Render as ``numerator / monomial`` with the numerator a polynomial."""
        d = tuple(max(e, 0) for e in den_vector(self))
        num = self.shift(d)
        den = "*".join(
            (f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}") for i, e in enumerate(d) if e > 0
        )
        num_s = num.to_string()
        if not den:
            return num_s
        if len(num) > 1:
            num_s = f"({num_s})"
        return f"{num_s}/({den})" if "*" in den else f"{num_s}/{den}"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "terms": [{"exp": list(exp), "coeff": str(c)} for exp, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        rank = int(data["rank"])
        return cls(rank, [(t["exp"], int(t["coeff"])) for t in data["terms"]])


@dataclass(frozen=True)
class LaurentFraction:
    """Unreduced quotient of two Laurent polynomials."""

    num: LaurentPoly
    den: LaurentPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        self.num._check(self.den)

    @classmethod
    def of(cls, p: LaurentPoly) -> "LaurentFraction":
        return cls(p, LaurentPoly.one(p.rank))

    @property
    def rank(self) -> int:
        return self.num.rank


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out = dict(a._terms)
    for e, c in b._terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return LaurentPoly._raw(a.rank, out)


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    if not a._terms or not b._terms:
        return LaurentPoly.zero(a.rank)
    if len(a._terms) * len(b._terms) >= _packed.MIN_WORK:
        packed = _packed.mul_terms(a._terms, b._terms)
        if packed is not None:
            return LaurentPoly._raw(a.rank, packed)
    out: dict[tuple, int] = {}
    get = out.get
    bt = list(b._terms.items())
    for ea, ca in a._terms.items():
        for eb, cb in bt:
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = get(e, 0) + ca * cb
    return LaurentPoly._raw(a.rank, {e: c for e, c in out.items() if c})


def _grlex(exp: tuple) -> tuple:
    # graded lex with x1 most significant; larger key = larger term
    return (sum(exp), exp)


def div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    """Return ``q`` with ``q * b == a`` if ``q`` is a Laurent polynomial, else ``None``.

    Both operands are shifted into the polynomial ring, with the divisor made
    coprime to every variable; the quotient is then Laurent iff it is a
    polynomial, which single-divisor reduction under graded lex decides.
    """
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    n = a.rank
    if a.is_zero():
        return LaurentPoly.zero(n)
    amin = a.min_exponents()
    bmin = b.min_exponents()
    if len(b._terms) == 1:
        (_, bc), = b._terms.items()
        out = {}
        for e, c in a._terms.items():
            qc, r = divmod(c, bc)
            if r:
                return None
            out[tuple(x - y for x, y in zip(e, bmin))] = qc
        return LaurentPoly._raw(n, out)

    neg_a = tuple(-m for m in amin)
    neg_b = tuple(-m for m in bmin)
    rem = {tuple(x + y for x, y in zip(e, neg_a)): c for e, c in a._terms.items()}
    div_terms = [(tuple(x + y for x, y in zip(e, neg_b)), c) for e, c in b._terms.items()]
    shift = tuple(x - y for x, y in zip(amin, bmin))

    if len(rem) * len(div_terms) >= _packed.MIN_WORK:
        fast = _packed.divexact_terms(rem, dict(div_terms))
        if fast is False:
            return None
        if fast is not None:
            q = LaurentPoly._raw(n, fast)
            if mul(q, LaurentPoly._raw(n, dict(div_terms)))._terms == rem:
                return q.shift(shift)
    lead_e, lead_c = max(div_terms, key=lambda t: _grlex(t[0]))
    tail = [(e, c) for e, c in div_terms if e != lead_e]

    # max-heap of remainder exponents; a leading term the divisor cannot
    # absorb lands in the remainder for good, so we stop at the first one
    heap = [(tuple(-k for k in _flat(_grlex(e)))) for e in rem]
    heapq.heapify(heap)
    quotient: dict[tuple, int] = {}
    while heap:
        key = heapq.heappop(heap)
        e = _unflat(key)
        c = rem.get(e)
        if c is None:
            continue
        qe = tuple(x - y for x, y in zip(e, lead_e))
        if min(qe) < 0:
            return None
        qc, r = divmod(c, lead_c)
        if r:
            return None
        quotient[qe] = qc
        del rem[e]
        for te, tc in tail:
            ne = tuple(x + y for x, y in zip(qe, te))
            nc = rem.get(ne, 0) - qc * tc
            if nc:
                if ne not in rem:
                    heapq.heappush(heap, tuple(-k for k in _flat(_grlex(ne))))
                rem[ne] = nc
            else:
                rem.pop(ne, None)
    return LaurentPoly._raw(
        n, {tuple(x + y for x, y in zip(e, shift)): c for e, c in quotient.items()}
    )


def _flat(key: tuple) -> tuple:
    return (key[0],) + key[1]


def _unflat(neg_key: tuple) -> tuple:
    return tuple(-k for k in neg_key[1:])


def den_vector(p: LaurentPoly) -> tuple:
    """Denominator vector: d_i = -(least exponent of x_i in p)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no denominator vector")
    return tuple(-m for m in p.min_exponents())


def has_var_in_denominator(p: LaurentPoly, i: int) -> bool:
    if not 0 <= i < p.rank:
        raise IndexError(f"variable index {i} out of range for rank {p.rank}")
    return den_vector(p)[i] > 0


def compare(a: LaurentPoly, b: LaurentPoly) -> int:
    """Three-way total order on Laurent polynomials of equal rank (-1, 0, 1)."""
    a._check(b)
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


def substitute(p: LaurentPoly, images: Sequence[LaurentFraction]) -> LaurentFraction:
    """Evaluate ``p`` at ``x_i -> images[i]`` over one common denominator.

    No cancellation is attempted; compare results with :func:`fraction_equal`.
    """
    if len(images) != p.rank:
        raise ValueError(f"need {p.rank} images, got {len(images)}")
    if not images:
        raise ValueError("no images")
    m = images[0].rank
    for img in images:
        if img.den.is_zero():
            raise ZeroDivisionError("image with zero denominator")
        if img.rank != m:
            raise RankMismatch("images of different ranks")
    if p.is_zero():
        return LaurentFraction(LaurentPoly.zero(m), LaurentPoly.one(m))
    pos = [max(0, max(e[i] for e in p._terms)) for i in range(p.rank)]
    neg = [max(0, -min(e[i] for e in p._terms)) for i in range(p.rank)]
    for i, img in enumerate(images):
        if neg[i] and img.num.is_zero():
            raise ZeroDivisionError(f"x{i + 1} appears inverted but its image is zero")

    cache: dict[tuple, LaurentPoly] = {}

    def power(i: int, which: str, k: int) -> LaurentPoly:
        key = (i, which, k)
        if key not in cache:
            base = images[i].num if which == "n" else images[i].den
            cache[key] = base ** k
        return cache[key]

    den = LaurentPoly.one(m)
    for i in range(p.rank):
        if pos[i]:
            den = mul(den, power(i, "d", pos[i]))
        if neg[i]:
            den = mul(den, power(i, "n", neg[i]))
    num = LaurentPoly.zero(m)
    for exp, c in p._terms.items():
        term = LaurentPoly.constant(m, c)
        for i, e in enumerate(exp):
            if e + neg[i]:
                term = mul(term, power(i, "n", e + neg[i]))
            if pos[i] - e:
                term = mul(term, power(i, "d", pos[i] - e))
        num = add(num, term)
    return LaurentFraction(num, den)


def fraction_equal(a: LaurentFraction, b: LaurentFraction) -> bool:
    return mul(a.num, b.den) == mul(b.num, a.den)


def evaluate(p: LaurentPoly, point: Sequence, modulus: int | None = None):
    """Evaluate at a point of nonzero values.

    With ``modulus`` the computation is done in Z/modulus (a prime); otherwise
    the values may be ints or :class:`fractions.Fraction`.
    """
    if len(point) != p.rank:
        raise ValueError(f"need {p.rank} coordinates, got {len(point)}")
    total = 0
    if modulus is None:
        from fractions import Fraction

        for exp, c in p._terms.items():
            t = Fraction(c)
            for v, e in zip(point, exp):
                if e:
                    t *= Fraction(v) ** e
            total += t
        return total
    for exp, c in p._terms.items():
        t = c % modulus
        for v, e in zip(point, exp):
            if e:
                t = t * pow(v, e, modulus) % modulus
        total = (total + t) % modulus
    return total
