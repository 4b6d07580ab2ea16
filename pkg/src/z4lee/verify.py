"""Verification subjects: enumerate, predict, compare.

Each runner returns a list of :class:`VerificationReport`, one per sub-case.
Runners raise :class:`OutOfTheoremScope` before doing any work when ``m`` is
outside the subject's range.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .codelab import (
    Code,
    DefiningSetSpec,
    Enumeration,
    IdentityViolation,
    TypeResult,
    WeightDistribution,
    build_defining_set,
    count_n_identity,
    enumerate_code,
    min_lee_distance,
    shift_invariant,
    standard_form,
)
from .expsum import (
    ValueDistribution,
    chi_rows,
    joint_distribution,
    moment,
    sweep_s_distribution,
)
from .galois import (
    MAX_M,
    FieldCtx,
    GRElem,
    field_ctx,
    trace_z4_direct_vec,
    trace_z4_vec,
)
from .gaussint import GaussInt
from .oracle import (
    MOMENT_SPECS,
    OutOfTheoremScope,
    VerificationReport,
    check_scope,
    compare,
    family,
    load_table2,
    predict,
    predict_lemma,
    predict_moment,
    tau_sigma,
)

SUBJECTS = (
    "lemma2", "lemma4", "lemma9", "lemma10", "moments",
    "theorem1", "theorem2", "theorem3", "identities", "table2",
)

# the nine closed forms, each possibly covering several factor lists
MOMENT_GROUPS: dict[str, tuple[str, ...]] = {
    "Lemma 5(1)": ("L5.1",),
    "Lemma 5(2)": ("L5.2",),
    "Lemma 6(1)": ("L6.1a", "L6.1b"),
    "Lemma 6(2)": ("L6.2",),
    "Lemma 6(3)": ("L6.3a", "L6.3b"),
    "Lemma 7(1)": ("L7.1",),
    "Lemma 7(2)": ("L7.2a", "L7.2b"),
    "Lemma 8(1)": ("L8.1",),
    "Lemma 8(2)": ("L8.2",),
}

N_SAMPLES = 1000
EXHAUSTIVE_PAIRS_MAX_M = 11


# ---------------------------------------------------------------------------
# code construction summary
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Construction:
    ctx: FieldCtx
    spec: DefiningSetSpec
    code: Code
    enumeration: Enumeration
    type_result: TypeResult

    @property
    def distribution(self) -> WeightDistribution:
        return self.enumeration.dedup

    @property
    def codewords(self) -> int:
        return self.enumeration.dedup.total_codewords

    @property
    def d_lee(self) -> int | None:
        try:
            return min_lee_distance(self.distribution)
        except ValueError:
            return None

    def summary(self) -> dict:
        return {"n": self.code.n, "codewords": self.codewords, "d_lee": self.d_lee,
                "distribution": self.distribution}


def construct(ctx: FieldCtx, spec: DefiningSetSpec, workers: int = 1) -> Construction:
    code = build_defining_set(ctx, spec)
    enum = enumerate_code(ctx, code, workers)
    tres = standard_form(ctx, code)
    return Construction(ctx, spec, code, enum, tres)


def _type_diffs(c: Construction) -> list[dict]:
    if c.type_result.size != c.codewords:
        return [{"key": f"type 4^{c.type_result.k1}*2^{c.type_result.k2}",
                 "predicted": c.codewords, "enumerated": c.type_result.size}]
    return []


def _finish(report: VerificationReport, extra: list[dict], started: float) -> VerificationReport:
    diffs = report.diffs + extra
    return VerificationReport("FAIL" if diffs else "PASS", report.m, report.subject, diffs,
                              (time.perf_counter() - started) * 1000)


def _single(m: int, subject: str, diffs: list[dict], started: float) -> VerificationReport:
    return VerificationReport("FAIL" if diffs else "PASS", m, subject, diffs,
                              (time.perf_counter() - started) * 1000)


# ---------------------------------------------------------------------------
# scope
# ---------------------------------------------------------------------------

def require_scope(subject: str, m: int) -> None:
    if subject not in SUBJECTS:
        raise ValueError(f"unknown subject {subject!r}; choose from {', '.join(SUBJECTS)}")
    if not 1 <= m <= MAX_M:
        raise OutOfTheoremScope(f"m must satisfy 1 <= m <= {MAX_M}")
    if subject.startswith("theorem"):
        th = int(subject[-1])
        check_scope(m, family(th)[0])
    elif subject == "table2":
        ms = sorted({r.m for r in load_table2()})
        if m not in ms:
            raise OutOfTheoremScope(f"table2 has rows for m in {ms} only")
    elif m % 2 == 0 or m < 3:
        raise OutOfTheoremScope(f"{subject} requires odd m >= 3")


# ---------------------------------------------------------------------------
# subjects
# ---------------------------------------------------------------------------

def verify_theorem(ctx: FieldCtx, theorem: int, workers: int = 1) -> list[VerificationReport]:
    out = []
    for spec in family(theorem):
        t0 = time.perf_counter()
        pred = predict(ctx.m, spec)
        c = construct(ctx, spec, workers)
        rep = compare(pred, c.summary(), ctx.m, f"Theorem {theorem} {spec}")
        out.append(_finish(rep, _type_diffs(c), t0))
    return out


def verify_lemma2(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    t0 = time.perf_counter()
    pred = predict_lemma(ctx.m, "L2").as_dict()
    diffs = []
    step = max(1, (1 << 18) // ctx.q)
    for lo in range(1, ctx.q, step):
        hi = min(ctx.q, lo + step)
        re, im = chi_rows(ctx, lo, hi)
        for r in range(hi - lo):
            got = Counter(zip(re[r].tolist(), im[r].tolist()))
            got = {GaussInt(x, y): f for (x, y), f in got.items()}
            for key in sorted(set(pred) | set(got)):
                if pred.get(key, 0) != got.get(key, 0):
                    diffs.append({"key": f"a={lo + r} value {key}", "predicted": pred.get(key, 0),
                                  "enumerated": got.get(key, 0)})
    return [_single(ctx.m, "Lemma 2 chi(a,b) over b, every a != 0", diffs, t0)]


def verify_lemma4(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    out = []
    for which, label in (("plus", "L4plus"), ("minus", "L4minus")):
        t0 = time.perf_counter()
        rep = compare(predict_lemma(ctx.m, label), sweep_s_distribution(ctx, which, workers),
                      ctx.m, f"Lemma 4 S{'+' if which == 'plus' else '-'} distribution")
        out.append(_finish(rep, [], t0))
    return out


def verify_lemma9(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    t0 = time.perf_counter()
    rep = compare(predict_lemma(ctx.m, "L9"), joint_distribution(ctx, [0, 2], workers),
                  ctx.m, "Lemma 9 (S+(u), S+(u+2))")
    return [_finish(rep, [], t0)]


def verify_lemma10(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    t0 = time.perf_counter()
    rep = compare(predict_lemma(ctx.m, "L10"), joint_distribution(ctx, [0, 1, 2, 3], workers),
                  ctx.m, "Lemma 10 (S+(u), ..., S+(u+3))")
    return [_finish(rep, [], t0)]


def verify_moments(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    out = []
    for label, names in MOMENT_GROUPS.items():
        t0 = time.perf_counter()
        diffs = []
        for name in names:
            factors = MOMENT_SPECS[name]
            rep = compare(predict_moment(ctx.m, name), moment(ctx, factors, workers))
            key = "[" + ", ".join(f"({c},{s})" for c, s in factors) + "]"
            diffs += [{**d, "key": key} for d in rep.diffs]
        out.append(_single(ctx.m, label, diffs, t0))
    return out


def _pairs(ctx: FieldCtx, seed: int) -> tuple[np.ndarray, np.ndarray, bool]:
    """All label pairs for small m, otherwise a fixed-seed sample."""
    q = ctx.q
    if ctx.m <= EXHAUSTIVE_PAIRS_MAX_M:
        return np.repeat(np.arange(q, dtype=np.int64), q), np.tile(np.arange(q, dtype=np.int64), q), True
    rng = np.random.default_rng(seed)
    n = 1 << 20
    return rng.integers(0, q, n, dtype=np.int64), rng.integers(0, q, n, dtype=np.int64), False


def check_trace_paths(ctx: FieldCtx) -> VerificationReport:
    t0 = time.perf_counter()
    x, y, full = _pairs(ctx, 0x7A11 + ctx.m)
    fast = trace_z4_vec(ctx, x, y)
    direct = trace_z4_direct_vec(ctx, x, y)
    bad = np.flatnonzero(fast != direct)
    diffs = [{"key": f"Tr({int(x[i])}+2*{int(y[i])})", "predicted": int(direct[i]), "enumerated": int(fast[i])}
             for i in bad[:10]]
    what = "all x+2y" if full else f"{len(x)} sampled x+2y"
    return _single(ctx.m, f"Lemma 1 two-path trace, {what}", diffs, t0)


def check_chi_rotation(ctx: FieldCtx) -> VerificationReport:
    """chi(a, b) = i^(-Tr(b/a)) chi(1, 0) for every a != 0 and b."""
    t0 = time.perf_counter()
    ts = tau_sigma(ctx.m)
    h = 1 << ((ctx.m - 1) // 2)
    base = h * ts.tau * (1 + GaussInt.ipow(ctx.m))
    diffs = []
    re1, im1 = chi_rows(ctx, 1, 2)
    if GaussInt(int(re1[0, 0]), int(im1[0, 0])) != base:
        diffs.append({"key": "chi(1,0)", "predicted": str(base),
                      "enumerated": str(GaussInt(int(re1[0, 0]), int(im1[0, 0])))})
    rot_re = np.array([GaussInt.ipow(-k).re for k in range(4)])
    rot_im = np.array([GaussInt.ipow(-k).im for k in range(4)])
    b = np.arange(ctx.q, dtype=np.int64)
    step = max(1, (1 << 18) // ctx.q)
    for lo in range(1, ctx.q, step):
        hi = min(ctx.q, lo + step)
        re, im = chi_rows(ctx, lo, hi)
        a = np.arange(lo, hi, dtype=np.int64)[:, None]
        k = ctx.Tr[ctx.mul_vec(b[None, :], ctx.inv_vec(a))].astype(np.int64)
        pre = rot_re[k] * base.re - rot_im[k] * base.im
        pim = rot_re[k] * base.im + rot_im[k] * base.re
        bad = np.argwhere((pre != re) | (pim != im))
        for r, col in bad[:10]:
            diffs.append({"key": f"chi({lo + r},{col})", "predicted": str(GaussInt(int(pre[r, col]), int(pim[r, col]))),
                          "enumerated": str(GaussInt(int(re[r, col]), int(im[r, col])))})
    return _single(ctx.m, "Lemma 3 chi(a,b) rotation, all a != 0, b", diffs, t0)


def check_cube_identity(ctx: FieldCtx) -> VerificationReport:
    """(sqrt x + sqrt y)(x + y + sqrt(xy)) = sqrt(x)^3 + sqrt(y)^3 and its zero set."""
    t0 = time.perf_counter()
    x, y, full = _pairs(ctx, 0xA11A + ctx.m)
    sx, sy = ctx.sqrt[x], ctx.sqrt[y]
    inner = x ^ y ^ ctx.sqrt[ctx.mul_vec(x, y)]
    lhs = ctx.mul_vec(sx ^ sy, inner)
    rhs = ctx.pow_vec(sx, 3) ^ ctx.pow_vec(sy, 3)
    diffs = [{"key": f"x={int(x[i])} y={int(y[i])}", "predicted": int(rhs[i]), "enumerated": int(lhs[i])}
             for i in np.flatnonzero(lhs != rhs)[:10]]
    if ctx.m % 2:
        zeros = np.flatnonzero((inner == 0) & ((x != 0) | (y != 0)))
        diffs += [{"key": f"x+y+sqrt(xy)=0 at x={int(x[i])} y={int(y[i])}", "predicted": "only x=y=0",
                   "enumerated": 0} for i in zeros[:10]]
    what = "all pairs" if full else f"{len(x)} sampled pairs"
    return _single(ctx.m, f"cube-root product identity, {what}", diffs, t0)


def check_cubic_roots(ctx: FieldCtx) -> VerificationReport:
    """Roots of mu^3 + mu + 1 in the Teichmuller set: present iff 3 | m, then tr = 0 and Tr = 2."""
    t0 = time.perf_counter()
    mu = np.arange(ctx.q, dtype=np.int64)
    roots = mu[(ctx.pow_vec(mu, 3) ^ mu ^ 1) == 0]
    expected = 3 if ctx.m % 3 == 0 else 0
    diffs = []
    if len(roots) != expected:
        diffs.append({"key": "root count", "predicted": expected, "enumerated": len(roots)})
    for r in roots.tolist():
        if ctx.tr[r] != 0:
            diffs.append({"key": f"tr({r})", "predicted": 0, "enumerated": int(ctx.tr[r])})
        if ctx.Tr[r] != 2:
            diffs.append({"key": f"Tr({r})", "predicted": 2, "enumerated": int(ctx.Tr[r])})
    return _single(ctx.m, "cubic mu^3+mu+1 roots and traces", diffs, t0)


def check_n_identities(ctx: FieldCtx, samples: int = N_SAMPLES) -> VerificationReport:
    t0 = time.perf_counter()
    rng = np.random.default_rng(0x0D15 + ctx.m)
    diffs = []
    specs = (DefiningSetSpec.single(0), DefiningSetSpec.pair(0, 2), DefiningSetSpec.complement(0))
    for spec in specs:
        try:
            build_defining_set(ctx, spec)
        except ValueError:
            continue
        us = rng.integers(0, ctx.q, size=(samples, 2))
        for a, b in us.tolist():
            try:
                count_n_identity(ctx, spec, GRElem(a, b))
            except IdentityViolation as exc:
                diffs.append({"key": f"{spec} u=({a},{b})", "predicted": "N0-N2 = S+ combination",
                              "enumerated": str(exc)})
    return _single(ctx.m, f"N0-N2 identities, {samples} random u per spec", diffs, t0)


# multiplicity implied by the theorems' codeword counts, with the shift that realises it
_SHIFT_WITNESS = {
    DefiningSetSpec.single(0): 1,
    DefiningSetSpec.single(2): 2,
    DefiningSetSpec.pair(0, 2): 2,
}


def check_multiplicity(ctx: FieldCtx, workers: int = 1) -> VerificationReport:
    t0 = time.perf_counter()
    diffs = []
    for th in (1, 2, 3):
        for spec in family(th):
            try:
                pred = predict(ctx.m, spec)
            except OutOfTheoremScope:
                continue
            enum = enumerate_code(ctx, build_defining_set(ctx, spec), workers)
            expected = (ctx.q * ctx.q) // pred.codeword_count
            if enum.kernel_size != expected:
                diffs.append({"key": f"{spec} multiplicity", "predicted": expected, "enumerated": enum.kernel_size})
            c = _SHIFT_WITNESS.get(spec)
            if c is not None and not shift_invariant(ctx, enum, c):
                diffs.append({"key": f"{spec} c(u)=c(u+{c})", "predicted": True, "enumerated": False})
    return _single(ctx.m, "codeword multiplicities and shift invariance", diffs, t0)


def verify_identities(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    return [
        check_trace_paths(ctx),
        check_chi_rotation(ctx),
        check_cube_identity(ctx),
        check_cubic_roots(ctx),
        check_n_identities(ctx),
        check_multiplicity(ctx, workers),
    ]


def verify_table2(ctx: FieldCtx, workers: int = 1) -> list[VerificationReport]:
    built: dict[DefiningSetSpec, Construction] = {}
    out = []
    for row in load_table2():
        if row.m != ctx.m:
            continue
        t0 = time.perf_counter()
        found = []
        for spec in family(row.theorem):
            if spec not in built:
                built[spec] = construct(ctx, spec, workers)
            c = built[spec]
            found.append((spec, (c.code.n, c.type_result.k1, c.type_result.k2, c.d_lee)))
        want = (row.n, row.k1, row.k2, row.our_dL)
        match = [s for s, got in found if got == want]
        diffs = [] if match else [{"key": "[n,k1,k2] d_L", "predicted": list(want),
                                   "enumerated": "; ".join(f"{s}: {list(g)}" for s, g in found)}]
        label = f"Table II [{row.n},{row.k1},{row.k2}] d_L={row.our_dL} Theorem {row.theorem}"
        if match:
            label += f" via {match[0]}"
        out.append(_single(ctx.m, label, diffs, t0))
    return out


RUNNERS: dict[str, Callable[..., list[VerificationReport]]] = {
    "lemma2": verify_lemma2,
    "lemma4": verify_lemma4,
    "lemma9": verify_lemma9,
    "lemma10": verify_lemma10,
    "moments": verify_moments,
    "theorem1": lambda ctx, workers=1: verify_theorem(ctx, 1, workers),
    "theorem2": lambda ctx, workers=1: verify_theorem(ctx, 2, workers),
    "theorem3": lambda ctx, workers=1: verify_theorem(ctx, 3, workers),
    "identities": verify_identities,
    "table2": verify_table2,
}


def run_subject(subject: str, m: int, poly: int | None = None, workers: int = 1) -> list[VerificationReport]:
    require_scope(subject, m)
    return RUNNERS[subject](field_ctx(m, poly), workers)
