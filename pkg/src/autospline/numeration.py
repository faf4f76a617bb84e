"""Sign-prefixed two-row encoding of the ring Z[1/b].

A number ``z`` is written as a string of columns over the alphabet of digit
pairs ``(alpha, beta)``.  The first column is the sign marker, ``(0, 0)`` for
``z >= 0`` and ``(1, 1)`` for ``z < 0``.  The remaining ``k`` columns carry the
integer digits of ``|z|`` least significant first on the top row and the
fractional digits most significant first on the bottom row, with ``k`` minimal.
Zero is the single column ``(0, 0)``.

Inside automata a column is stored as the integer ``alpha * b + beta``; the
padding symbol is :data:`PAD`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

PAD = -1


class RepresentationError(ValueError):
    """A value does not lie in Z[1/b] or a string is not a canonical encoding."""


def check_base(b: int) -> int:
    if not isinstance(b, int) or b < 2 or b % 2:
        raise ValueError(f"base must be an even integer >= 2, got {b!r}")
    return b


def symbol(alpha: int, beta: int, b: int) -> int:
    return alpha * b + beta


def digits(sym: int, b: int) -> tuple[int, int]:
    return divmod(sym, b)


def sign_symbols(b: int) -> tuple[int, int]:
    """Codes of the positive and negative sign columns."""
    return 0, b + 1


def as_fraction(z) -> Fraction:
    if isinstance(z, Fraction):
        return z
    if isinstance(z, str):
        return Fraction(z.strip())
    if isinstance(z, float):
        raise TypeError("floats are not accepted; pass an exact fraction")
    return Fraction(z)


def in_ring(z, b: int) -> bool:
    """True when the denominator of ``z`` divides a power of ``b``."""
    q = as_fraction(z).denominator
    # every prime factor of q is at least 2, so its exponent is below q.bit_length()
    return pow(b, q.bit_length(), q) == 0 if q > 1 else True



def fraction_length(z, b: int) -> int:
    """Minimal number of base-``b`` fractional digits of ``z``."""
    z = as_fraction(z)
    if not in_ring(z, b):
        raise RepresentationError(f"{z} is not in Z[1/{b}]")
    return _fraction_length(z.denominator, b)


def _fraction_length(q: int, b: int) -> int:
    if b == 2:
        return q.bit_length() - 1
    n, scale = 0, 1
    while scale % q:
        scale *= b
        n += 1
    return n


def _lsd_digits(n: int, b: int, width: int = 0) -> list[int]:
    """Base-``b`` digits of ``n >= 0``, least significant first, zero-padded to ``width``."""
    if b == 2:
        out = [int(c) for c in reversed(format(n, "b"))] if n else []
    else:
        out = []
        while n:
            n, r = divmod(n, b)
            out.append(r)
    if len(out) < width:
        out += [0] * (width - len(out))
    return out


def _from_lsd_digits(ds: Sequence[int], b: int) -> int:
    if b == 2:
        return int("".join(map(str, reversed(ds))), 2) if ds else 0
    n = 0
    for d in reversed(ds):
        n = n * b + d
    return n


@dataclass(frozen=True)
class EncodedNumber:
    """The column string of one element of Z[1/b], sign column included."""

    base: int
    symbols: tuple[int, ...]

    @property
    def negative(self) -> bool:
        return self.symbols[0] == self.base + 1

    @property
    def columns(self) -> list[tuple[int, int]]:
        return [digits(s, self.base) for s in self.symbols]

    def rows(self) -> tuple[str, str]:
        top = "".join(_digit_char(a) for a, _ in self.columns)
        bottom = "".join(_digit_char(c) for _, c in self.columns)
        return top, bottom

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        top, bottom = self.rows()
        return f"{top}/{bottom}"

    def value(self) -> Fraction:
        return decode(self.symbols, self.base)


def _digit_char(x: int) -> str:
    return "0123456789abcdefghijklmnopqrstuvwxyz"[x] if x < 36 else f"[{x}]"


# base 2 works on digit strings so the per-column loop runs in C
_HIGH_BIT = bytes.maketrans(bytes(range(4)), b"0011")
_LOW_BIT = bytes.maketrans(bytes(range(4)), b"0101")
_BIT_VALUE = bytes.maketrans(b"01", bytes(range(2)))


def _binary_columns(num: int, den: int) -> tuple[int, ...]:
    """Base-2 digit columns of ``num / den > 0``; each column is one byte ``2a + c``."""
    k = den.bit_length() - 1
    ipart, fnum = num >> k, num & (den - 1)
    alphas = format(ipart, "b")[::-1] if ipart else ""
    betas = format(fnum, f"0{k}b") if k else ""
    n = max(len(alphas), len(betas))
    a = alphas.ljust(n, "0").encode().translate(_BIT_VALUE)
    c = betas.ljust(n, "0").encode().translate(_BIT_VALUE)
    # bytes hold 0 or 1, so 2a + c never carries between columns
    merged = 2 * int.from_bytes(a, "big") + int.from_bytes(c, "big")
    return tuple(merged.to_bytes(n, "big"))


def encode(z, b: int) -> EncodedNumber:
    """Encode an element of Z[1/b]."""
    check_base(b)
    z = as_fraction(z)
    num, den = z.numerator, z.denominator
    if b == 2:
        if den & (den - 1):
            raise RepresentationError(f"{z} is not in Z[1/2]")
        if num == 0:
            return EncodedNumber(2, (0,))
        if num < 0:
            return EncodedNumber(2, (3,) + _binary_columns(-num, den))
        return EncodedNumber(2, (0,) + _binary_columns(num, den))
    if not in_ring(z, b):
        raise RepresentationError(f"{z} is not in Z[1/{b}]")
    pos, neg = sign_symbols(b)
    if num == 0:
        return EncodedNumber(b, (pos,))
    k = _fraction_length(den, b)
    scale = b ** k
    ipart, fnum = divmod(abs(num) * (scale // den), scale)
    alphas = _lsd_digits(ipart, b)
    betas = _lsd_digits(fnum, b, k)[::-1]
    n = max(len(alphas), len(betas))
    alphas += [0] * (n - len(alphas))
    betas += [0] * (n - len(betas))
    return EncodedNumber(b, (neg if num < 0 else pos, *[a * b + c for a, c in zip(alphas, betas)]))


def decode(symbols: Sequence[int], b: int) -> Fraction:
    """Inverse of :func:`encode`; rejects non-canonical strings."""
    syms = list(symbols)
    if not syms:
        raise RepresentationError("empty string is not an encoding")
    pos, neg = sign_symbols(b)
    if syms[0] not in (pos, neg):
        raise RepresentationError(f"malformed sign column {digits(syms[0], b)}")
    body = syms[1:]
    if not body:
        if syms[0] == neg:
            raise RepresentationError("negative sign without digits")
        return Fraction(0)
    # PAD is negative, so this also rejects interior padding
    if min(body) < 0 or max(body) >= b * b:
        raise RepresentationError("digit column out of range")
    if body[-1] == 0:
        raise RepresentationError("non-minimal encoding: trailing (0,0) column")
    if b == 2:
        raw = bytes(body)
        ipart = int(raw.translate(_HIGH_BIT)[::-1], 2)
        fnum = int(raw.translate(_LOW_BIT), 2)
    else:
        ipart = _from_lsd_digits([s // b for s in body], b)
        fnum = _from_lsd_digits([s % b for s in reversed(body)], b)
    scale = b ** len(body)
    n = ipart * scale + fnum
    return Fraction(-n if syms[0] == neg else n, scale)


def parse_rows(text: str, b: int) -> EncodedNumber:
    """Parse the two-row display ``"1110/1011"`` back into an encoding."""
    try:
        top, bottom = text.strip().split("/")
    except ValueError:
        raise RepresentationError(f"expected 'top/bottom' rows, got {text!r}") from None
    if len(top) != len(bottom) or not top:
        raise RepresentationError("rows must be nonempty and of equal length")
    syms = tuple(symbol(int(a, 36), int(c, 36), b) for a, c in zip(top, bottom))
    for a, c in zip(top, bottom):
        if int(a, 36) >= b or int(c, 36) >= b:
            raise RepresentationError(f"digit out of range for base {b}")
    decode(syms, b)
    return EncodedNumber(b, syms)


def encode_point(point: Iterable, b: int) -> tuple[tuple[int, ...], ...]:
    """Encode each coordinate; the tracks of the point's convolution."""
    return tuple(encode(z, b).symbols for z in point)


def parse_number(text: str, b: int) -> Fraction:
    """Accept ``p/q`` fractions, integers, or ``@top/bottom`` digit rows.

    Digit rows need the ``@`` prefix because ``11/16`` reads both ways.
    """
    text = text.strip()
    if text.startswith("@"):
        return parse_rows(text[1:], b).value()
    z = Fraction(text)
    if not in_ring(z, b):
        raise RepresentationError(f"{text} is not in Z[1/{b}]")
    return z
