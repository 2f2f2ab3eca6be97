"""Kronecker substitution: dense polynomials packed into one big integer.

Each coefficient occupies a fixed-width slot of ``wb`` bytes, slots laid out
by a mixed-radix index over the exponent box.  Packing is evaluation at a
power of two, hence a ring homomorphism; products and exact quotients are
computed by GMP on the packed integers and unpacked as balanced digits.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpz

# a dense box is only worth it when it is not much larger than the sparse work
DENSITY = 32
MIN_WORK = 4096


def _strides(dims):
    strides, s = [], 1
    for d in dims:
        strides.append(s)
        s *= d
    return strides, s


def _pack(terms, lo, strides, size, wb):
    pos = bytearray(size * wb)
    neg = None
    for exp, c in terms:
        idx = 0
        for e, l, s in zip(exp, lo, strides):
            idx += (e - l) * s
        off = idx * wb
        if c > 0:
            pos[off:off + wb] = c.to_bytes(wb, "little")
        else:
            if neg is None:
                neg = bytearray(size * wb)
            neg[off:off + wb] = (-c).to_bytes(wb, "little")
    value = mpz(int.from_bytes(pos, "little"))
    if neg is not None:
        value -= mpz(int.from_bytes(neg, "little"))
    return value


def _unpack(value, lo, dims, size, wb):
    """Balanced-digit decoding; ``None`` if some digit does not fit."""
    half = 1 << (8 * wb - 1)
    zero = b"\x00" * (wb - 1) + b"\x80"
    v = int(value) + int.from_bytes(zero * size, "little")
    if v < 0 or v.bit_length() > 8 * wb * size:
        return None
    buf = v.to_bytes(size * wb, "little")
    out = {}
    n = len(dims)
    for idx in range(size):
        chunk = buf[idx * wb:(idx + 1) * wb]
        if chunk == zero:
            continue
        c = int.from_bytes(chunk, "little") - half
        exp = [0] * n
        rest = idx
        for i in range(n):
            rest, r = divmod(rest, dims[i])
            exp[i] = r + lo[i]
        out[tuple(exp)] = c
    return out


def _bounds(terms):
    exps = list(terms)
    lo = tuple(min(col) for col in zip(*exps))
    hi = tuple(max(col) for col in zip(*exps))
    return lo, hi


def worthwhile(size: int, wb: int, work: int) -> bool:
    return work >= MIN_WORK and size * wb <= DENSITY * work


def mul_terms(a: dict, b: dict) -> dict | None:
    """Product of two nonzero term maps, or ``None`` if packing is not worth it."""
    alo, ahi = _bounds(a)
    blo, bhi = _bounds(b)
    lo = tuple(x + y for x, y in zip(alo, blo))
    dims = [ah - al + bh - bl + 1 for al, ah, bl, bh in zip(alo, ahi, blo, bhi)]
    strides, size = _strides(dims)
    bound = min(len(a), len(b)) * max(map(abs, a.values())) * max(map(abs, b.values()))
    wb = (bound.bit_length() + 1) // 8 + 1
    if not worthwhile(size, wb, len(a) * len(b)):
        return None
    A = _pack(a.items(), alo, strides, size, wb)
    B = _pack(b.items(), blo, strides, size, wb)
    out = _unpack(A * B, lo, dims, size, wb)
    if out is None:  # pragma: no cover - slot width is a proven bound
        raise ArithmeticError("packed product overflowed its slots")
    return out


def divexact_terms(a: dict, b: dict):
    """Quotient of polynomials (nonnegative exponents, ``b`` coprime to every
    variable).

    Returns a candidate quotient, ``False`` when ``b`` certainly does not
    divide ``a``, or ``None`` when undecided (not worth packing, or the
    quotient's coefficients outgrew the slot width).
    """
    alo, ahi = _bounds(a)
    _, bhi = _bounds(b)
    if any(bh > ah for bh, ah in zip(bhi, ahi)):
        return False
    dims = [ah + 1 for ah in ahi]
    strides, size = _strides(dims)
    wb = (max(map(abs, a.values())).bit_length() + 1) // 8 + 2
    if not worthwhile(size, wb, len(a) * len(b)):
        return None
    zero = (0,) * len(dims)
    A = _pack(a.items(), zero, strides, size, wb)
    B = _pack(b.items(), zero, strides, size, wb)
    Q, R = gmpy2.t_divmod(A, B)
    if R:
        return False
    # a candidate only: the caller must confirm q * b == a
    return _unpack(Q, zero, dims, size, wb) or None
