"""Codes from trace defining sets, Lee weights and Z4 standard form.

The code attached to a defining set ``D`` has one codeword per ring element
``u``: ``c(u) = (Tr(u d))_{d in D}``.  :func:`enumerate_code` sweeps all
``4^m`` values of ``u`` through the kernel backend, records the Lee weight
and a 124-bit fingerprint of every codeword, and deduplicates by
fingerprint.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .expsum import s_plus, shifted
from .galois import FieldCtx, GRElem, gr_mul, trace_z4
from .gaussint import GaussInt

LEE = (0, 1, 2, 1)


class EmptyDefiningSet(ValueError):
    pass


class ZeroCode(ValueError):
    pass


class IdentityViolation(AssertionError):
    pass


@dataclass(frozen=True)
class DefiningSetSpec:
    """One of ``single:t``, ``pair:t1,t2`` or ``complement:t``."""

    kind: str
    ts: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("single", "pair", "complement"):
            raise ValueError(f"unknown defining-set kind {self.kind!r}")
        want = 2 if self.kind == "pair" else 1
        if len(self.ts) != want or any(t not in range(4) for t in self.ts):
            raise ValueError(f"{self.kind} needs {want} value(s) in 0..3, got {self.ts}")
        if self.kind == "pair" and self.ts[0] == self.ts[1]:
            raise ValueError("pair needs two distinct trace values")

    @classmethod
    def single(cls, t: int) -> DefiningSetSpec:
        return cls("single", (t,))

    @classmethod
    def pair(cls, t1: int, t2: int) -> DefiningSetSpec:
        return cls("pair", (t1, t2))

    @classmethod
    def complement(cls, t: int) -> DefiningSetSpec:
        return cls("complement", (t,))

    @classmethod
    def parse(cls, text: str) -> DefiningSetSpec:
        kind, _, rest = text.strip().partition(":")
        try:
            ts = tuple(int(v) for v in rest.split(","))
        except ValueError:
            raise ValueError(f"cannot parse defining set {text!r}") from None
        return cls(kind.lower(), ts)

    def trace_values(self) -> frozenset[int]:
        if self.kind == "complement":
            return frozenset(range(4)) - {self.ts[0]}
        return frozenset(self.ts)

    def __str__(self):
        return f"{self.kind}:{','.join(map(str, self.ts))}"


@dataclass(frozen=True, eq=False)
class Code:
    ctx: FieldCtx
    spec: DefiningSetSpec
    coords: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])


@dataclass(frozen=True)
class WeightDistribution:
    entries: tuple[tuple[int, int], ...]
    total_codewords: int

    @classmethod
    def from_counts(cls, counts: dict) -> WeightDistribution:
        entries = tuple(sorted((int(w), int(f)) for w, f in counts.items() if f))
        return cls(entries, sum(f for _, f in entries))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lee_weight", "frequency"])
        w.writerows(self.entries)
        return buf.getvalue()


@dataclass(frozen=True)
class TypeResult:
    k1: int
    k2: int
    matrix: np.ndarray = field(repr=False)
    column_perm: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 4 ** self.k1 * 2 ** self.k2


@dataclass(frozen=True, eq=False)
class Enumeration:
    """Full sweep of a code: per-``u`` weights and fingerprints plus tallies.

    Arrays are indexed by ``a * 2^m + b`` for ``u = a + 2b``.
    """

    code: Code
    weights: np.ndarray = field(repr=False)
    fingerprints: np.ndarray = field(repr=False)
    raw: WeightDistribution
    dedup: WeightDistribution
    kernel_size: int
    backend: str


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def build_defining_set(ctx: FieldCtx, spec: DefiningSetSpec) -> Code:
    """Teichmuller labels whose Z4 trace lies in the requested trace values."""
    mask = np.isin(ctx.Tr, sorted(spec.trace_values()))
    coords = np.flatnonzero(mask).astype(np.int64)
    if coords.size == 0:
        raise EmptyDefiningSet(f"{spec} is empty for m={ctx.m}")
    coords.setflags(write=False)
    return Code(ctx, spec, coords)


def codeword(ctx: FieldCtx, code: Code, u: GRElem) -> tuple[int, ...]:
    """``(Tr(u d_1), ..., Tr(u d_n))`` via the trace tables."""
    ax = ctx.mul_vec(u.x, code.coords)
    bx = ctx.mul_vec(u.y, code.coords)
    return tuple(((ctx.Tr[ax].astype(np.int64) + 2 * ctx.tr[bx]) % 4).tolist())


def codeword_scalar(ctx: FieldCtx, code: Code, u: GRElem) -> tuple[int, ...]:
    """Same as :func:`codeword` through ring multiplication and the scalar trace."""
    return tuple(trace_z4(ctx, gr_mul(ctx, u, GRElem(int(d), 0))) for d in code.coords)


def lee_weight(cw) -> int:
    w = sum(LEE[c % 4] for c in cw)
    # n - Re(sum i^c): i^c has real part 1, 0, -1, 0
    re = sum((1, 0, -1, 0)[c % 4] for c in cw)
    assert w == len(cw) - re
    return w


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _hash_coef(n: int) -> np.ndarray:
    rng = np.random.default_rng(0x2A4C)
    coef = rng.integers(1, kernels.HASH_PRIME, size=(4, n), dtype=np.uint64)
    coef.setflags(write=False)
    return coef


def _chunks(q: int, workers: int) -> list[tuple[int, int]]:
    parts = max(1, min(q, 4 * workers))
    step = -(-q // parts)
    return [(lo, min(lo + step, q)) for lo in range(0, q, step)]


def sweep(ctx: FieldCtx, code: Code, workers: int = 1, backend: str | None = None):
    """Per-``u`` Lee weights and fingerprints for all ``4^m`` ring elements."""
    args = (ctx.Tr, ctx.log, ctx.exp, ctx.lmask, code.coords, _hash_coef(code.n))
    chunks = _chunks(ctx.q, workers)

    def run(lohi):
        return kernels.sweep_block(*args, *lohi, backend=backend)

    if workers <= 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    weights = np.concatenate([p[0] for p in parts])
    fps = np.concatenate([p[1] for p in parts])
    return weights, fps


def enumerate_code(ctx: FieldCtx, code: Code, workers: int = 1, backend: str | None = None) -> Enumeration:
    weights, fps = sweep(ctx, code, workers, backend)
    total = ctx.q * ctx.q

    vals, counts = np.unique(weights, return_counts=True)
    raw = WeightDistribution.from_counts(dict(zip(vals.tolist(), counts.tolist())))

    _, first, inverse, mult = np.unique(fps, axis=0, return_index=True, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    if not np.array_equal(weights[first][inverse], weights):
        raise AssertionError("fingerprint collision: equal fingerprints with different weights")
    dv, dc = np.unique(weights[first], return_counts=True)
    dedup = WeightDistribution.from_counts(dict(zip(dv.tolist(), dc.tolist())))

    # c is a group homomorphism, so every fibre is a coset of the kernel
    kernel_size = int(np.count_nonzero(weights == 0))
    if not np.all(mult == kernel_size) or kernel_size * len(first) != total:
        raise AssertionError(f"fibre sizes {sorted(set(mult.tolist()))} disagree with kernel size {kernel_size}")

    backend_name = backend or kernels.BACKEND
    return Enumeration(code, weights, fps, raw, dedup, kernel_size, backend_name)


def weight_distribution(ctx: FieldCtx, code: Code, dedup: bool = True, workers: int = 1) -> WeightDistribution:
    e = enumerate_code(ctx, code, workers)
    return e.dedup if dedup else e.raw


def min_lee_distance(dist: WeightDistribution) -> int:
    nonzero = [w for w, f in dist.entries if w > 0 and f > 0]
    if not nonzero:
        raise ZeroCode("code has no nonzero codeword")
    return min(nonzero)


def shift_invariant(ctx: FieldCtx, enum: Enumeration, c: int) -> bool:
    """True when ``c(u) == c(u + c)`` for every ring element ``u``."""
    from .expsum import shift_index

    q = ctx.q
    a = np.repeat(np.arange(q, dtype=np.int64), q)
    b = np.tile(np.arange(q, dtype=np.int64), q)
    a2, b2 = shift_index(ctx, a, b, c)
    return bool(np.array_equal(enum.fingerprints, enum.fingerprints[a2 * q + b2]))


# ---------------------------------------------------------------------------
# standard form
# ---------------------------------------------------------------------------

def generator_rows(ctx: FieldCtx, code: Code) -> np.ndarray:
    """Codewords of ``x_i`` and ``2 x_i`` for the polynomial basis ``x_i``."""
    rows = [codeword(ctx, code, GRElem(1 << i, 0)) for i in range(ctx.m)]
    rows += [codeword(ctx, code, GRElem(0, 1 << i)) for i in range(ctx.m)]
    return np.array(rows, dtype=np.int64).reshape(2 * ctx.m, code.n)


def z4_standard_form(G) -> TypeResult:
    """Row-reduce over Z4 into ``[[I, A1, B1 + 2B2], [0, 2I, 2A2]]`` up to column order.

    Unit pivots are taken first (3 is scaled to 1), then 2-pivots; zero rows
    are dropped.
    """
    G = np.array(G, dtype=np.int64) % 4
    if G.ndim != 2:
        raise ValueError("generator matrix must be 2-D")
    rows, n = G.shape
    perm = np.arange(n)

    def swap_cols(i, j):
        if i != j:
            G[:, [i, j]] = G[:, [j, i]]
            perm[[i, j]] = perm[[j, i]]

    r = 0
    while r < rows and r < n:
        hits = np.argwhere(G[r:, r:] % 2 == 1)
        if hits.size == 0:
            break
        i, j = hits[0] + r
        G[[r, i]] = G[[i, r]]
        swap_cols(r, j)
        if G[r, r] == 3:
            G[r] = (3 * G[r]) % 4
        for o in range(rows):
            if o != r and G[o, r]:
                G[o] = (G[o] - G[o, r] * G[r]) % 4
        r += 1
    k1 = r

    c = k1
    while r < rows and c < n:
        hits = np.argwhere(G[r:, c:] == 2)
        if hits.size == 0:
            break
        i, j = hits[0]
        i += r
        j += c
        G[[r, i]] = G[[i, r]]
        swap_cols(c, j)
        for o in range(rows):
            if o == r:
                continue
            e = G[o, c]
            if e in (2, 3):
                G[o] = (G[o] - G[r]) % 4
        r += 1
        c += 1
    k2 = c - k1

    G = G[:r]
    assert np.array_equal(G[:k1, :k1], np.eye(k1, dtype=np.int64))
    assert not G[k1:, :k1].any()
    assert np.array_equal(G[k1:, k1:k1 + k2], 2 * np.eye(k2, dtype=np.int64))
    assert np.all(G[:k1, k1:k1 + k2] <= 1)
    assert np.all(G[k1:] % 2 == 0)
    return TypeResult(k1, k2, G, perm)


def standard_form(ctx: FieldCtx, code: Code) -> TypeResult:
    return z4_standard_form(generator_rows(ctx, code))


# ---------------------------------------------------------------------------
# N0 - N2 identities
# ---------------------------------------------------------------------------

# coefficients of S+(u + c), c = 0..3, and the denominator
_N_IDENTITIES = {
    DefiningSetSpec.single(0): ((1, 1, 1, 1), 8),
    DefiningSetSpec.pair(0, 2): ((1, 0, 1, 0), 4),
    DefiningSetSpec.complement(0): ((3, -1, -1, -1), 8),
}


@dataclass(frozen=True)
class NIdentity:
    spec: DefiningSetSpec
    u: GRElem
    n0: int
    n2: int
    s_combination: GaussInt
    denominator: int

    @property
    def lhs(self) -> int:
        return self.n0 - self.n2

    @property
    def rhs(self) -> Fraction:
        return Fraction(self.s_combination.re, self.denominator)

    @property
    def holds(self) -> bool:
        return self.s_combination.im == 0 and self.rhs == self.lhs


def count_n_identity(ctx: FieldCtx, spec: DefiningSetSpec, u: GRElem) -> NIdentity:
    """Count ``N_j = #{x in D : Tr(ux) = j}`` and compare ``N0 - N2`` with its S+ form."""
    if ctx.m % 2 == 0:
        raise ValueError("N0 - N2 identities are stated for odd m")
    try:
        coeffs, den = _N_IDENTITIES[spec]
    except KeyError:
        raise ValueError(f"no N0 - N2 identity for {spec}") from None
    code = build_defining_set(ctx, spec)
    cw = codeword(ctx, code, u)
    n0 = cw.count(0)
    n2 = cw.count(2)
    comb = GaussInt(0)
    for c, k in enumerate(coeffs):
        if k:
            comb = comb + k * s_plus(ctx, shifted(ctx, u, c))
    rec = NIdentity(spec, u, n0, n2, comb, den)
    if not rec.holds:
        raise IdentityViolation(f"{spec} u={u}: N0-N2={rec.lhs} but S-combination gives {rec.rhs}")
    return rec
