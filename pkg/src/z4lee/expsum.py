"""Exponential sums over the Teichmuller set.

For ``u = a + 2b`` the basic sum is ``chi(a, b) = sum_x i^Tr(ux)`` over the
Teichmuller set.  ``S+(u)`` adds the conjugate-power sum and ``S-(u)``
subtracts it, so ``S+ = 2 Re chi`` and ``S- = 2i Im chi``.

Whole-grid sweeps compute every ``chi(a, b)`` at once with a Walsh-Hadamard
transform over ``x``: for fixed ``a`` the map ``b -> chi(a, b)`` is the
transform of ``x -> i^Tr(ax)`` evaluated at the linear functional of ``b``.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .galois import FieldCtx, GRElem, gr_add, z4_to_gr
from .gaussint import GaussInt

_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_IM = np.array([0, 1, 0, -1], dtype=np.int64)

Factor = tuple[int, str]


@dataclass(frozen=True)
class ValueDistribution:
    """Exact multiset of values, sorted by key.

    Keys are :class:`GaussInt` for single sums and tuples of them for joint
    distributions.
    """

    entries: tuple

    @classmethod
    def from_counter(cls, counts) -> ValueDistribution:
        return cls(tuple(sorted((k, int(v)) for k, v in counts.items() if v)))

    def total(self) -> int:
        return sum(f for _, f in self.entries)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __getitem__(self, key):
        return self.as_dict().get(key, 0)

    def _columns(self) -> list[str]:
        if self.entries and isinstance(self.entries[0][0], tuple):
            k = len(self.entries[0][0])
            cols = [c for j in range(1, k + 1) for c in (f"v{j}_re", f"v{j}_im")]
        else:
            cols = ["value_re", "value_im"]
        return cols + ["frequency"]

    def _rows(self) -> list[list[int]]:
        rows = []
        for key, f in self.entries:
            vals = key if isinstance(key, tuple) else (key,)
            rows.append([c for v in vals for c in (v.re, v.im)] + [f])
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self._columns())
        w.writerows(self._rows())
        return buf.getvalue()

    def to_json(self) -> str:
        cols = self._columns()
        return json.dumps([dict(zip(cols, r)) for r in self._rows()], indent=1)


# ---------------------------------------------------------------------------
# single sums
# ---------------------------------------------------------------------------

def _trace_exponents(ctx: FieldCtx, u: GRElem) -> np.ndarray:
    """``Tr(u x)`` for every Teichmuller ``x``; ``u x = (a x) + 2 (b x)``."""
    xs = np.arange(ctx.q, dtype=np.int64)
    ax = ctx.mul_vec(u.x, xs)
    bx = ctx.mul_vec(u.y, xs)
    return (ctx.Tr[ax].astype(np.int64) + 2 * ctx.tr[bx]) % 4


def _ipow_sum(exps: np.ndarray) -> GaussInt:
    c = np.bincount(exps, minlength=4)
    return GaussInt(int(c[0] - c[2]), int(c[1] - c[3]))


def chi(ctx: FieldCtx, a: int, b: int) -> GaussInt:
    """``sum_x i^Tr((a + 2b) x)`` summed term by term."""
    return _ipow_sum(_trace_exponents(ctx, GRElem(a, b)))


def s_plus(ctx: FieldCtx, u: GRElem) -> GaussInt:
    e = _trace_exponents(ctx, u)
    s = _ipow_sum(e) + _ipow_sum((3 * e) % 4)
    assert s.im == 0, f"S+({u}) = {s} is not real"
    return s


def s_minus(ctx: FieldCtx, u: GRElem) -> GaussInt:
    e = _trace_exponents(ctx, u)
    s = _ipow_sum(e) - _ipow_sum((3 * e) % 4)
    assert s.re == 0, f"S-({u}) = {s} is not imaginary"
    return s


def s_value(ctx: FieldCtx, u: GRElem, sign: str) -> GaussInt:
    return s_plus(ctx, u) if sign == "+" else s_minus(ctx, u)


# ---------------------------------------------------------------------------
# whole-grid tables
# ---------------------------------------------------------------------------

def wht(arr: np.ndarray) -> np.ndarray:
    """In-place unnormalised Walsh-Hadamard transform along the last axis."""
    n = arr.shape[-1]
    lead = arr.shape[:-1]
    h = 1
    while h < n:
        v = arr.reshape(*lead, n // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        v[..., 0, :] += v[..., 1, :]
        v[..., 1, :] = x - v[..., 1, :]
        h *= 2
    return arr


def chi_rows(ctx: FieldCtx, a_lo: int, a_hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``chi(a, b)`` for ``a_lo <= a < a_hi``, all ``b``."""
    a = np.arange(a_lo, a_hi, dtype=np.int64)[:, None]
    xs = np.arange(ctx.q, dtype=np.int64)[None, :]
    e = ctx.Tr[ctx.mul_vec(a, xs)]
    re = wht(_RE[e].copy())
    im = wht(_IM[e].copy())
    return re[:, ctx.lmask], im[:, ctx.lmask]


def chi_table(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    return chi_rows(ctx, 0, ctx.q)


def shift_index(ctx: FieldCtx, a: np.ndarray, b: np.ndarray, c: int) -> tuple[np.ndarray, np.ndarray]:
    """Teichmuller pair of ``(a + 2b) + c`` for ``c`` in Z4, vectorised."""
    cx, cy = z4_to_gr(c)
    if cx:
        return a ^ 1, ctx.sqrt[a] ^ b ^ cy
    return a, b ^ cy


def _blocks(ctx: FieldCtx, workers: int) -> list[tuple[int, int]]:
    # aligned even-sized blocks keep a and a^1 together
    size = max(2, min(ctx.q, (1 << 18) // ctx.q))
    size = 1 << (size.bit_length() - 1)
    return [(lo, min(lo + size, ctx.q)) for lo in range(0, ctx.q, size)]


def _map_blocks(ctx: FieldCtx, fn: Callable, workers: int) -> list:
    blocks = _blocks(ctx, workers)
    if workers <= 1:
        return [fn(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda lh: fn(*lh), blocks))


def _s_block(ctx: FieldCtx, lo: int, hi: int):
    re, im = chi_rows(ctx, lo, hi)
    return 2 * re, 2 * im


def _parse_factors(factors: Iterable) -> list[Factor]:
    out = []
    for f in factors:
        if isinstance(f, (int, np.integer)):
            out.append((int(f) % 4, "+"))
        else:
            c, sign = f
            if sign not in ("+", "-"):
                raise ValueError(f"sign must be '+' or '-', got {sign!r}")
            out.append((int(c) % 4, sign))
    return out


def _gather(ctx, splus, sminus, lo, hi, factors, restrict_star):
    """Per-factor real parts over the block, plus the validity mask."""
    a = np.arange(lo, hi, dtype=np.int64)[:, None] * np.ones((1, ctx.q), dtype=np.int64)
    b = np.arange(ctx.q, dtype=np.int64)[None, :] * np.ones((hi - lo, 1), dtype=np.int64)
    cols = []
    for c, sign in factors:
        a2, b2 = shift_index(ctx, a, b, c)
        tab = splus if sign == "+" else sminus
        cols.append(tab[a2 - lo, b2])
    mask = (a > 1) if restrict_star else np.ones_like(a, dtype=bool)
    return cols, mask


def sweep_s_distribution(ctx: FieldCtx, which: str, workers: int = 1) -> ValueDistribution:
    """Value distribution of S+ or S- over all ``4^m`` ring elements."""
    if which not in ("plus", "minus"):
        raise ValueError("which must be 'plus' or 'minus'")

    def part(lo, hi):
        sp, sm = _s_block(ctx, lo, hi)
        vals, counts = np.unique(sp if which == "plus" else sm, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))

    total: Counter = Counter()
    for d in _map_blocks(ctx, part, workers):
        total.update(d)
    if which == "plus":
        return ValueDistribution.from_counter({GaussInt(v): f for v, f in total.items()})
    return ValueDistribution.from_counter({GaussInt(0, v): f for v, f in total.items()})


def moment(ctx: FieldCtx, factors: Sequence, workers: int = 1) -> GaussInt:
    """``sum_{a != 0,1} sum_b prod_j S_{sign_j}(u + c_j)`` exactly."""
    factors = _parse_factors(factors)
    k = len(factors)
    exact_int64 = k * (ctx.m + 1) + 2 * ctx.m < 62

    def part(lo, hi):
        sp, sm = _s_block(ctx, lo, hi)
        cols, mask = _gather(ctx, sp, sm, lo, hi, factors, restrict_star=True)
        prod = np.ones(cols[0].shape, dtype=np.int64 if exact_int64 else object)
        for col in cols:
            prod = prod * (col if exact_int64 else col.astype(object))
        return int(prod[mask].sum())

    real = sum(_map_blocks(ctx, part, workers))
    # each S- contributes a factor i times its real coefficient
    n_minus = sum(1 for _, s in factors if s == "-")
    return GaussInt.ipow(n_minus) * real


def joint_distribution(ctx: FieldCtx, factors: Sequence, workers: int = 1) -> ValueDistribution:
    """Joint value distribution of ``(S_{sign_j}(u + c_j))_j`` over ``a != 0,1``, all ``b``."""
    factors = _parse_factors(factors)

    def part(lo, hi):
        sp, sm = _s_block(ctx, lo, hi)
        cols, mask = _gather(ctx, sp, sm, lo, hi, factors, restrict_star=True)
        stacked = np.stack([c[mask] for c in cols], axis=1)
        if stacked.size == 0:
            return {}
        rows, counts = np.unique(stacked, axis=0, return_counts=True)
        return {tuple(r): c for r, c in zip(rows.tolist(), counts.tolist())}

    total: Counter = Counter()
    for d in _map_blocks(ctx, part, workers):
        total.update(d)

    def key(vals):
        return tuple(GaussInt(v) if s == "+" else GaussInt(0, v) for v, (_, s) in zip(vals, factors))

    return ValueDistribution.from_counter({key(k): f for k, f in total.items()})


def chi_distribution_for_a(ctx: FieldCtx, a: int) -> ValueDistribution:
    """Distribution of ``chi(a, b)`` as ``b`` runs over the Teichmuller set."""
    re, im = chi_rows(ctx, a, a + 1)
    c = Counter(zip(re[0].tolist(), im[0].tolist()))
    return ValueDistribution.from_counter({GaussInt(r, i): f for (r, i), f in c.items()})


def shifted(ctx: FieldCtx, u: GRElem, c: int) -> GRElem:
    return gr_add(ctx, u, z4_to_gr(c))
