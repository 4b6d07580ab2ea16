"""Arithmetic in GF(2^m), the Teichmuller set and the Galois ring GR(4, m).

Field elements are plain ints: bit ``i`` is the coefficient of ``alpha^i`` in
the polynomial basis, where ``alpha`` is a root of the defining polynomial.
The same int doubles as the label of a Teichmuller element; under that
labeling the transported addition on the Teichmuller set is XOR.

Ring elements are :class:`GRElem` pairs ``(x, y)`` standing for ``x + 2y``
with ``x, y`` Teichmuller.  Every ring operation reduces to field operations
on the labels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np

MAX_M = 15

# bit i of the mask is the coefficient of X^i
DEFAULT_POLYS = {
    1: 0b11,  # X + 1
    2: 0b111,  # X^2 + X + 1
    3: 0b1011,  # X^3 + X + 1
    4: 0b10011,  # X^4 + X + 1
    5: 0b100101,  # X^5 + X^2 + 1
    6: 0b1000011,  # X^6 + X + 1
    7: 0b10000011,  # X^7 + X + 1
    8: 0b100011101,  # X^8 + X^4 + X^3 + X^2 + 1
    9: 0b1000010001,  # X^9 + X^4 + 1
    10: 0b10000001001,  # X^10 + X^3 + 1
    11: 0b100000000101,  # X^11 + X^2 + 1
    12: 0b1000001010011,  # X^12 + X^6 + X^4 + X + 1
    13: 0b10000000011011,  # X^13 + X^4 + X^3 + X + 1
    14: 0b100010001000011,  # X^14 + X^10 + X^6 + X + 1
    15: 0b1000000000000011,  # X^15 + X + 1
}


class FieldError(ValueError):
    """Invalid field parameters (degree out of range, reducible polynomial)."""


class PolyConfigError(ValueError):
    """Malformed line in a polynomial config file."""


class GRElem(NamedTuple):
    """``x + 2y`` in GR(4, m) with ``x`` and ``y`` Teichmuller labels."""

    x: int
    y: int


# ---------------------------------------------------------------------------
# binary polynomials (carry-less)
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, p: int) -> int:
    """Remainder of ``a`` modulo ``p`` over GF(2)."""
    dp = p.bit_length() - 1
    while a and a.bit_length() - 1 >= dp:
        a ^= p << (a.bit_length() - 1 - dp)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree at most deg(p)/2."""
    d = p.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable GF(2^m) context with the lookup tables the sweeps use.

    Build instances with :func:`field_ctx`, which validates the polynomial
    and caches contexts by ``(m, poly)``.
    """

    m: int
    poly: int
    generator: int
    exp: np.ndarray = field(repr=False)  # length 2(2^m - 1)
    log: np.ndarray = field(repr=False)  # log[0] == -1
    sqrt: np.ndarray = field(repr=False)
    tr: np.ndarray = field(repr=False)  # binary trace, indexed by label
    Tr: np.ndarray = field(repr=False)  # Z4 trace of Teichmuller labels
    lmask: np.ndarray = field(repr=False)  # tr(b x) == parity(lmask[b] & x)
    trace_mask: int = 0

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def order(self) -> int:
        """Size of the multiplicative group."""
        return (1 << self.m) - 1

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise field product of label arrays via log tables."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = self.log[a]
        lb = self.log[b]
        r = self.exp[np.where((la < 0) | (lb < 0), 0, la + lb)]
        return np.where((la < 0) | (lb < 0), 0, r).astype(np.int64)

    def inv_vec(self, a) -> np.ndarray:
        """Elementwise inverse; 0 maps to 0."""
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        r = self.exp[np.where(la < 0, 0, (self.order - la) % self.order)]
        return np.where(la < 0, 0, r).astype(np.int64)

    def pow_vec(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        r = self.exp[np.where(la < 0, 0, (la * e) % self.order)]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, r).astype(np.int64)


def default_poly(m: int, overrides: dict[int, int] | None = None) -> int:
    if overrides and m in overrides:
        return overrides[m]
    try:
        return DEFAULT_POLYS[m]
    except KeyError:
        raise FieldError(f"no default polynomial for m={m}") from None


@lru_cache(maxsize=None)
def field_ctx(m: int, poly: int | None = None) -> FieldCtx:
    """Validated, cached field context for GF(2^m) defined by ``poly``."""
    if not 1 <= m <= MAX_M:
        raise FieldError(f"m must satisfy 1 <= m <= {MAX_M}, got {m}")
    if poly is None:
        poly = default_poly(m)
    if poly.bit_length() - 1 != m:
        raise FieldError(f"polynomial {poly:#x} does not have degree {m}")
    if not is_irreducible(poly):
        raise FieldError(f"polynomial {poly:#x} is reducible over GF(2)")

    q = 1 << m
    n = q - 1
    gen = _find_generator(m, poly)

    exp = np.zeros(2 * n, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(n):
        exp[k] = x
        log[x] = k
        x = poly_mod(clmul(x, gen), poly)
    exp[n:] = exp[:n]

    labels = np.arange(q, dtype=np.int64)

    def square(v):
        lv = log[v]
        return np.where(lv < 0, 0, exp[np.where(lv < 0, 0, (2 * lv) % n)])

    # sqrt(a) = a^(2^(m-1)) by m-1 squarings
    sq = labels.copy()
    for _ in range(m - 1):
        sq = square(sq)

    trace_mask = 0
    for k in range(m):
        trace_mask |= _tr_scalar(m, poly, 1 << k) << k
    tr = (np.bitwise_count(labels & trace_mask) & 1).astype(np.uint8)

    ctx = FieldCtx(m=m, poly=poly, generator=gen, exp=exp, log=log, sqrt=sq,
                   tr=tr, Tr=np.zeros(q, dtype=np.uint8), lmask=np.zeros(q, dtype=np.int64),
                   trace_mask=trace_mask)
    Tr = _lemma1_table(ctx)
    lmask = np.zeros(q, dtype=np.int64)
    for k in range(m):
        lmask |= tr[ctx.mul_vec(labels, 1 << k)].astype(np.int64) << k
    object.__setattr__(ctx, "Tr", Tr)
    object.__setattr__(ctx, "lmask", lmask)
    for arr in (exp, log, sq, tr, Tr, lmask):
        _frozen(arr)
    return ctx


def _find_generator(m: int, poly: int) -> int:
    n = (1 << m) - 1
    if n == 1:
        return 1
    primes = _prime_factors(n)
    for g in range(2, 1 << m):
        if all(_pow_scalar(poly, g, n // p) != 1 for p in primes):
            return g
    raise FieldError(f"no generator found for {poly:#x}")  # unreachable for irreducible poly


def _pow_scalar(poly: int, a: int, e: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = poly_mod(clmul(r, a), poly)
        a = poly_mod(clmul(a, a), poly)
        e >>= 1
    return r


def _tr_scalar(m: int, poly: int, x: int) -> int:
    s = 0
    for _ in range(m):
        s ^= x
        x = poly_mod(clmul(x, x), poly)
    assert s in (0, 1)
    return s


def _lemma1_table(ctx: FieldCtx) -> np.ndarray:
    """Z4 trace of every Teichmuller label through the 2-adic expansion."""
    m, n = ctx.m, ctx.order
    labels = np.arange(ctx.q, dtype=np.int64)
    lx = ctx.log[labels]
    nz = lx >= 0

    def power(e):
        return np.where(nz, ctx.exp[np.where(nz, (lx * e) % n, 0)], 0)

    p = np.zeros(ctx.q, dtype=np.int64)
    top = (m - 1) // 2 if m % 2 else m // 2 - 1
    for j in range(1, top + 1):
        p ^= ctx.tr[power((1 << j) + 1)]
    if m % 2 == 0:
        z = power((1 << (m // 2)) + 1)
        lz = ctx.log[z]
        acc = np.zeros(ctx.q, dtype=np.int64)
        for j in range(m // 2):
            acc ^= np.where(lz >= 0, ctx.exp[np.where(lz >= 0, (lz << j) % n, 0)], 0)
        assert np.all((acc == 0) | (acc == 1))
        p ^= acc
    return ((ctx.tr + 2 * p) % 4).astype(np.uint8)


# ---------------------------------------------------------------------------
# scalar operations
# ---------------------------------------------------------------------------

def field_mul(ctx: FieldCtx, a: int, b: int) -> int:
    return poly_mod(clmul(a, b), ctx.poly)


def field_pow(ctx: FieldCtx, a: int, e: int) -> int:
    return _pow_scalar(ctx.poly, a, e)


def field_inv(ctx: FieldCtx, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^m)")
    return _pow_scalar(ctx.poly, a, ctx.order - 1)


def teich_sqrt(ctx: FieldCtx, a: int) -> int:
    """Square root on the Teichmuller set, ``a^(2^(m-1))``."""
    for _ in range(ctx.m - 1):
        a = field_mul(ctx, a, a)
    return a


def oplus(ctx: FieldCtx, a: int, b: int) -> int:
    """Transported addition ``a + b + 2 sqrt(ab)``; XOR under the labeling."""
    return a ^ b


def gr_add(ctx: FieldCtx, u: GRElem, v: GRElem) -> GRElem:
    x1, y1 = u
    x2, y2 = v
    return GRElem(x1 ^ x2, teich_sqrt(ctx, field_mul(ctx, x1, x2)) ^ y1 ^ y2)


def gr_neg(ctx: FieldCtx, u: GRElem) -> GRElem:
    # -(x + 2y) = x + 2(x + y) since 4x = 0 and -x = x + 2x
    return GRElem(u.x, u.x ^ u.y)


def gr_mul(ctx: FieldCtx, u: GRElem, v: GRElem) -> GRElem:
    x1, y1 = u
    x2, y2 = v
    return GRElem(field_mul(ctx, x1, x2), field_mul(ctx, x1, y2) ^ field_mul(ctx, x2, y1))


def z4_to_gr(c: int) -> GRElem:
    """Embed ``c`` in Z4 as the ring element ``c mod 2 + 2 * (c div 2)``."""
    c %= 4
    return GRElem(c & 1, c >> 1)


def tr_bin(ctx: FieldCtx, x: int) -> int:
    """GF(2)-trace ``x + x^2 + ... + x^(2^(m-1))``."""
    return _tr_scalar(ctx.m, ctx.poly, x)


def trace_z4(ctx: FieldCtx, u: GRElem) -> int:
    """Z4 trace via ``Tr(x + 2y) = tr(x) + 2p(x) + 2tr(y)``."""
    return (lemma1_trace(ctx, u.x) + 2 * tr_bin(ctx, u.y)) % 4


def lemma1_trace(ctx: FieldCtx, x: int) -> int:
    """Z4 trace of a Teichmuller element from its 2-adic expansion."""
    m = ctx.m
    p = 0
    top = (m - 1) // 2 if m % 2 else m // 2 - 1
    for j in range(1, top + 1):
        p ^= tr_bin(ctx, field_pow(ctx, x, (1 << j) + 1))
    if m % 2 == 0:
        z = field_pow(ctx, x, (1 << (m // 2)) + 1)
        s = 0
        for _ in range(m // 2):
            s ^= z
            z = field_mul(ctx, z, z)
        assert s in (0, 1), "subfield trace left GF(2)"
        p ^= s
    return (tr_bin(ctx, x) + 2 * p) % 4


def trace_z4_direct(ctx: FieldCtx, u: GRElem) -> int:
    """Z4 trace as the ring sum of the Frobenius orbit ``x^(2^j) + 2 y^(2^j)``."""
    x, y = u
    acc = GRElem(0, 0)
    for _ in range(ctx.m):
        acc = gr_add(ctx, acc, GRElem(x, y))
        x = field_mul(ctx, x, x)
        y = field_mul(ctx, y, y)
    if acc.x not in (0, 1) or acc.y not in (0, 1):
        raise AssertionError(f"trace {acc} is not in Z4")
    return acc.x + 2 * acc.y


def gr_add_vec(ctx: FieldCtx, x1, y1, x2, y2) -> tuple[np.ndarray, np.ndarray]:
    """Pair-law addition on label arrays."""
    x1 = np.asarray(x1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    return x1 ^ x2, ctx.sqrt[ctx.mul_vec(x1, x2)] ^ np.asarray(y1) ^ np.asarray(y2)


def trace_z4_vec(ctx: FieldCtx, x, y) -> np.ndarray:
    """Table path: ``Tr(x) + 2 tr(y)`` for label arrays."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    return (ctx.Tr[x].astype(np.int64) + 2 * ctx.tr[y]) % 4


def trace_z4_direct_vec(ctx: FieldCtx, x, y) -> np.ndarray:
    """Frobenius-orbit ring sum for label arrays; asserts every result lies in Z4."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    ax = np.zeros_like(x)
    ay = np.zeros_like(y)
    for _ in range(ctx.m):
        ax, ay = gr_add_vec(ctx, ax, ay, x, y)
        x = ctx.mul_vec(x, x)
        y = ctx.mul_vec(y, y)
    if np.any(ax > 1) or np.any(ay > 1):
        raise AssertionError("Frobenius orbit sum left Z4")
    return ax + 2 * ay


def teichmuller(ctx: FieldCtx) -> range:
    """Teichmuller labels in canonical (ascending) order."""
    return range(ctx.q)


# ---------------------------------------------------------------------------
# polynomial config files
# ---------------------------------------------------------------------------

_CONFIG_LINE = re.compile(r"^m=(\d+)\s+poly=0x([0-9a-fA-F]+)$")


def parse_poly_config(text: str) -> dict[int, int]:
    """Parse ``m=<int> poly=0x<hex>`` lines; blank lines and ``#`` comments skip."""
    out: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        mo = _CONFIG_LINE.match(line)
        if mo is None:
            raise PolyConfigError(f"line {lineno}: cannot parse {raw!r}")
        m, poly = int(mo.group(1)), int(mo.group(2), 16)
        if not 1 <= m <= MAX_M:
            raise PolyConfigError(f"line {lineno}: m={m} out of range")
        if poly.bit_length() - 1 != m or not is_irreducible(poly):
            raise PolyConfigError(f"line {lineno}: {poly:#x} is not an irreducible degree-{m} polynomial")
        out[m] = poly
    return out


def load_poly_config(path: str | Path) -> dict[int, int]:
    return parse_poly_config(Path(path).read_text(encoding="utf-8"))
