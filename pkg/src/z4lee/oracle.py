"""Closed-form predictions for odd m and the exact comparison engine.

Weight tables are written with powers of ``i`` and the sign constant ``tau``;
every entry is evaluated as a Gaussian rational and must come out a rational
integer.  Rows written with ``+-`` expand into two entries with matched
signs; weights that coincide at a given ``m`` merge by adding frequencies.
"""

from __future__ import annotations

import csv
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .codelab import DefiningSetSpec, WeightDistribution
from .expsum import ValueDistribution
from .gaussint import GaussInt


class EvenM(ValueError):
    pass


class OutOfTheoremScope(ValueError):
    pass


class ShapeMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rationals for expression evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Gq:
    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def of(v) -> _Gq:
        if isinstance(v, _Gq):
            return v
        if isinstance(v, GaussInt):
            return _Gq(Fraction(v.re), Fraction(v.im))
        return _Gq(Fraction(v))

    def __add__(self, o):
        o = _Gq.of(o)
        return _Gq(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _Gq.of(o)
        return _Gq(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _Gq.of(o) - self

    def __mul__(self, o):
        o = _Gq.of(o)
        return _Gq(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return _Gq(-self.re, -self.im)


def _p2(k: int) -> Fraction:
    return Fraction(2) ** k


def _ip(k: int) -> _Gq:
    return _Gq.of(GaussInt.ipow(k))


def _int(z, what: str = "value") -> int:
    z = _Gq.of(z)
    if z.im != 0 or z.re.denominator != 1:
        raise AssertionError(f"{what} evaluates to {z.re}+{z.im}i, not a rational integer")
    return int(z.re)


# ---------------------------------------------------------------------------
# sign constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TauSigma:
    m: int
    tau: GaussInt
    sigma: int


def tau_sigma(m: int) -> TauSigma:
    if m % 2 == 0 or m < 3:
        raise EvenM(f"tau and sigma are defined for odd m >= 3, got m={m}")
    tau = GaussInt.ipow((m - 1) // 2) if m % 4 == 1 else GaussInt.ipow((m + 1) // 2)
    assert tau in (GaussInt(1), GaussInt(-1))
    return TauSigma(m, tau, -3 if m % 3 == 0 else 0)


# ---------------------------------------------------------------------------
# theorem tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedFormPrediction:
    m: int
    spec: DefiningSetSpec
    theorem: int
    n: int
    codeword_count: int
    d_lee: int
    table: tuple[tuple[int, int], ...] = field(repr=False)

    def as_dict(self) -> dict[int, int]:
        return dict(self.table)


def theorem_for(spec: DefiningSetSpec) -> int:
    if spec.kind == "single":
        return 1
    if spec.kind == "pair":
        if (spec.ts[0] - spec.ts[1]) % 2:
            raise OutOfTheoremScope(f"{spec}: mixed-parity pairs have no closed form")
        return 2
    return 3


def min_m(theorem: int) -> int:
    """Smallest odd m a theorem covers (m > 3, m > 1, m > 3)."""
    return 3 if theorem == 2 else 5


def check_scope(m: int, spec: DefiningSetSpec) -> int:
    th = theorem_for(spec)
    if m % 2 == 0:
        raise OutOfTheoremScope(f"m={m} is even: no closed form")
    if m < min_m(th):
        raise OutOfTheoremScope(f"Theorem {th} requires m>{min_m(th) - 2}")
    return th


def _th1(m, t, tau, sigma):
    h = (m - 3) // 2
    P = _p2
    rows = [(0, 1)]
    if t == 0:
        params = (P(m - 2) + P(h) * tau, _p2(2 * (m - 1)), P(m - 2) + P(h) * (tau - 2))
        rows += [
            (P(m - 2), P(m - 2) + P(h) * tau - 1),
            (P(m - 2) + P((m - 1) // 2) * tau, P(m - 2) - P(h) * tau),
            (P(m - 2) + P(h) * tau,
             P(m - 4) * (3 * P(m - 1) - 5 + 3 * sigma) - P(h) * (P(m - 2) - 1) * tau),
        ]
        for s in (1, -1):
            rows.append((P(m - 2) + P(h) * (tau + s),
                         P(m - 3) * (P(m - 1) - s * P((m + 1) // 2) - 1 - sigma + s * 2 * tau)))
        for s in (1, -1):
            rows.append((P(m - 2) + P(h) * (tau + 2 * s),
                         P(m - 5) * (P(m - 1) + 1 + sigma - s * 4 * tau)
                         + P((m - 5) // 2) * (P(m - 2) - 1) * (tau - 2 * s)))
    elif t == 2:
        params = (P(m - 2) - P(h) * tau, P(2 * m - 1), P(m - 2) - P(h) * (tau + 2))
        rows += [
            (P(m - 2), P(m - 1) - 1),
            (P(m - 1) - P((m - 1) // 2) * tau, 1),
            (P(m - 2) - P((m - 1) // 2) * tau, P(m - 1) - 1),
            (P(m - 2) - P(h) * tau,
             P(m - 3) * (3 * P(m - 1) - 1 + 3 * sigma) + P((m - 1) // 2) * (P(m - 2) - 1) * tau),
        ]
        for s in (1, -1):
            rows.append((P(m - 2) - P(h) * (tau + s), P(m - 2) * (P(m - 1) - 1 - sigma)))
        for s in (1, -1):
            # literal reading: the whole frequency expression is shared by both rows
            rows.append((P(m - 2) - P(h) * (tau + 2 * s),
                         P(m - 4) * (P(m - 1) - 3 + sigma) - P((m - 7) // 2) * (P(m) - 4) * tau))
    else:
        e = _ip(m + t) * tau
        g = _ip(t - 1)
        it = _ip(m - 1) * tau
        if t == 1:
            params = (P(m - 2) + P(h) * it, P(2 * m), P(m - 2) + P(h) * (it - 2))
        else:
            params = (P(m - 2) - P(h) * it, P(2 * m), P(m - 2) - P(h) * (it + 2))
        rows += [
            (P(m - 1) - P((m - 1) // 2) * e, 1),
            (P(m - 2), P(m - 1) - 1),
            (P(m - 2) - P((m - 1) // 2) * e, P(m - 1) - 1),
            (P(m - 2) - P(h) * e, (P(m) - 2) * (3 * P(m - 3) + P(h) * e) + P(m)),
        ]
        for s in (1, -1):
            rows.append((P(m - 2) + P(h) * g * (it + s), P(m - 2) * (P(m) - 2)))
        for s in (1, -1):
            rows.append((P(m - 2) + P(h) * g * (it + 2 * s), (P(m) - 2) * (P(m - 4) - P((m - 5) // 2) * e)))
    return params, rows


def _th2(m, ts, tau, sigma):
    P = _p2
    params = (P(m - 1), P(2 * m - 1) if ts == (0, 2) else P(2 * m), P(m - 1) - P((m - 1) // 2))
    rows = [(0, 1)]
    if ts == (0, 2):
        rows.append((P(m - 1), P(2 * m - 2) - 1))
        for s in (1, -1):
            rows.append((P(m - 1) + s * P((m - 1) // 2), P(2 * m - 3) - s * P((m - 3) // 2) * (P(m) - 1)))
    else:
        rows += [(P(m), 1), (P(m - 1), P(m - 1) * (P(m) + 2) - 2)]
        for s in (1, -1):
            rows.append((P(m - 1) + s * P((m - 1) // 2), P(2 * m - 2) - P(m - 1)))
    return params, rows


def _th3(m, t, tau, sigma):
    h = (m - 3) // 2
    P = _p2
    base = 3 * P(m - 2)
    rows = [(0, 1)]
    if t == 0:
        params = (base - P(h) * tau, P(2 * m), base - P(h) * (tau + 3))
        rows += [
            (P(m), 1),
            (P(m) - P((m - 1) // 2) * tau, 2),
            (base, P(m) - 2),
            (base - P((m - 1) // 2) * tau, P(m) - 2),
            (base - P(h) * tau, P(m - 2) * (P(m - 1) + 1 + sigma) + P(h) * (P(m) - 4) * tau),
        ]
        for s in (1, -1):
            rows.append((base - P(h) * (tau + s),
                         3 * P(m - 3) * (P(m - 1) + s * P((m + 1) // 2) - 1 - sigma - s * 2 * tau)))
        for s in (1, -1):
            rows.append((base - P(h) * (tau + 2 * s),
                         P(m - 3) * (3 * P(m - 1) - 5 + 3 * sigma) - P((m - 5) // 2) * (P(m) - 4) * tau))
        for s in (1, -1):
            rows.append((base - P(h) * (tau + 3 * s),
                         P(m - 3) * (P(m - 1) - s * P((m + 1) // 2) - 1 - sigma + s * 2 * tau)))
    elif t == 2:
        params = (base + P(h) * tau, P(2 * m), P(m - 1))
        rows += [
            (P(m), 1),
            (P(m - 1), 2),
            (base, P(m) + P((m + 1) // 2) * tau - 4),
            (base + P((m - 1) // 2) * tau, P(m) - P((m + 1) // 2) * tau),
            (base + P(h) * tau, P(m - 2) * (P(m - 1) - 3 + sigma) - P(h) * (P(m) - 4) * tau),
        ]
        for s in (1, -1):
            rows.append((base + P(h) * (tau + s),
                         3 * P(m - 3) * (P(m - 1) - 1 - sigma) - s * P(m - 2) * (P((m - 1) // 2) - tau)))
        for s in (1, -1):
            rows.append((base + P(h) * (tau + 2 * s),
                         P(m - 3) * (3 * P(m - 1) - 1 + 3 * sigma - s * 4 * tau)
                         + P((m - 5) // 2) * (P(m) - 4) * (tau - 2 * s)))
        for s in (1, -1):
            rows.append((base + P(h) * (tau + 3 * s),
                         P(m - 3) * (P(m - 1) - s * P((m + 1) // 2) - 1 - sigma + s * 2 * tau)))
    else:
        e = _ip(m + t) * tau
        g = _ip(t - 1)
        it = _ip(m - 1) * tau
        if t == 1:
            params = (base - P(h) * it, P(2 * m), P(m - 1) - P((m - 1) // 2) * it)
        else:
            params = (base + P(h) * it, P(2 * m), P(m - 1) + P((m - 1) // 2) * it)
        rows += [
            (P(m - 1) + P((m - 1) // 2) * e, 1),
            (base, P(m - 1) - 1),
            (base + P((m - 1) // 2) * e, P(m - 1) - 1),
            (base - P(h) * e, P(m - 1) + P((m - 1) // 2) * e),
            (3 * (P(m - 2) + P(h) * e), P(m - 1) - P((m - 1) // 2) * e),
            (base + P(h) * e, (P(m) - 2) * (P(m - 3) - P(h) * e)),
        ]
        for s in (1, -1):
            rows.append((base - P(h) * g * (it + s), (P(m) - 2) * (3 * P(m - 4) + s * P((m - 5) // 2) * g)))
        for s in (1, -1):
            rows.append((base - P(h) * g * (it + 2 * s),
                         (P(m) - 2) * (3 * P(m - 4) - P((m - 5) // 2) * g * (it - 2 * s))))
        for s in (1, -1):
            rows.append((base - P(h) * g * (it + 3 * s), (P(m) - 2) * (P(m - 4) + s * P((m - 5) // 2) * g)))
    return params, rows


def predict(m: int, spec: DefiningSetSpec) -> ClosedFormPrediction:
    """Evaluate the theorem table for ``spec`` at odd ``m``."""
    th = check_scope(m, spec)
    ts = tau_sigma(m)
    tau = _Gq.of(ts.tau)
    if th == 1:
        params, rows = _th1(m, spec.ts[0], tau, ts.sigma)
    elif th == 2:
        params, rows = _th2(m, tuple(sorted(spec.ts)), tau, ts.sigma)
    else:
        params, rows = _th3(m, spec.ts[0], tau, ts.sigma)

    n, count, d = (_int(v, f"Theorem {th} parameter") for v in params)
    merged: Counter = Counter()
    for w, f in rows:
        wi = _int(w, f"Theorem {th} weight")
        fi = _int(f, f"Theorem {th} frequency")
        if fi < 0:
            raise AssertionError(f"Theorem {th} {spec} m={m}: negative frequency {fi} at weight {wi}")
        merged[wi] += fi
    table = tuple(sorted((w, f) for w, f in merged.items() if f))
    if sum(f for _, f in table) != count:
        raise AssertionError(f"Theorem {th} {spec} m={m}: frequencies sum to "
                             f"{sum(f for _, f in table)}, not {count}")
    return ClosedFormPrediction(m, spec, th, n, count, d, table)


# ---------------------------------------------------------------------------
# lemma distributions and moments
# ---------------------------------------------------------------------------

def _require_odd(m: int):
    if m % 2 == 0 or m < 3:
        raise EvenM(f"closed forms need odd m >= 3, got m={m}")


def lemma10_x(m: int) -> list[int]:
    """The sixteen frequencies of the sign patterns of (S+(u), S+(u+1), S+(u+2), S+(u+3))."""
    _require_odd(m)
    ts = tau_sigma(m)
    tau, sigma = _Gq.of(ts.tau), ts.sigma
    P = _p2
    x1 = P(m - 3) * (P(m - 1) + 1 + sigma + 4 * tau) + P((m - 1) // 2) * (P(m - 2) - 1) * (2 + tau)
    x2 = P(m - 3) * (P(m - 1) + P((m + 1) // 2) - 1 - sigma - 2 * tau)
    x4 = P(m - 3) * (P(m - 1) - 1 + sigma)
    x6 = P(m - 3) * (P(m - 1) - 3 + sigma - P((m + 1) // 2) * tau) + P((m - 1) // 2) * tau
    x8 = P(m - 3) * (P(m - 1) - P((m + 1) // 2) - 1 - sigma + 2 * tau)
    x16 = P(m - 3) * (P(m - 1) + 1 + sigma - 4 * tau) - P((m - 1) // 2) * (P(m - 2) - 1) * (2 - tau)
    by_index = {1: x1, 16: x16}
    for i in (2, 3, 5, 9):
        by_index[i] = x2
    for i in (4, 7, 10, 13):
        by_index[i] = x4
    for i in (6, 11):
        by_index[i] = x6
    for i in (8, 12, 14, 15):
        by_index[i] = x8
    return [_int(by_index[i], f"x{i}") for i in range(1, 17)]


def lemma10_pattern(index: int) -> tuple[int, int, int, int]:
    """Sign pattern of row ``index`` (1-based): +1 or -1 for each of the four sums."""
    bits = index - 1
    return tuple(-1 if bits >> (3 - k) & 1 else 1 for k in range(4))


def predict_lemma(m: int, which: str) -> ValueDistribution:
    """Predicted distributions: ``L2``, ``L4plus``, ``L4minus``, ``L9`` or ``L10``."""
    _require_odd(m)
    P = _p2
    A = _int(P((m - 1) // 2))  # 2^((m-1)/2)
    B = 2 * A  # 2^((m+1)/2)
    q = 2 ** m
    if which == "L2":
        lo, hi = _int(P(m - 2) - P((m - 3) // 2)), _int(P(m - 2) + P((m - 3) // 2))
        counts = {GaussInt(A, A): hi, GaussInt(-A, -A): lo, GaussInt(A, -A): hi, GaussInt(-A, A): lo}
    elif which == "L4plus":
        counts = {GaussInt(2 * q): 1, GaussInt(0): q - 1,
                  GaussInt(B): (q - 1) * (q // 2 + A), GaussInt(-B): (q - 1) * (q // 2 - A)}
    elif which == "L4minus":
        counts = {GaussInt(0): q, GaussInt(0, B): (q // 2) * (q - 1), GaussInt(0, -B): (q // 2) * (q - 1)}
    elif which == "L9":
        pp, mm = GaussInt(B), GaussInt(-B)
        counts = {
            (pp, pp): (q - 2) * (q // 4 + A),
            (pp, mm): q * q // 4 - q // 2,
            (mm, pp): q * q // 4 - q // 2,
            (mm, mm): (q - 2) * (q // 4 - A),
        }
    elif which == "L10":
        xs = lemma10_x(m)
        counts = {}
        for i, x in enumerate(xs, 1):
            key = tuple(GaussInt(s * B) for s in lemma10_pattern(i))
            counts[key] = x
    else:
        raise ValueError(f"unknown lemma distribution {which!r}")
    for k, v in counts.items():
        if v < 0:
            raise AssertionError(f"{which} m={m}: negative frequency at {k}")
    return ValueDistribution.from_counter(counts)


# (name, factors) in the order they are reported; sums run over a != 0, 1
MOMENT_SPECS: dict[str, tuple[tuple[int, str], ...]] = {
    "L5.1": ((0, "+"),),
    "L5.2": ((0, "-"),),
    "L6.1a": ((0, "+"), (2, "+")),
    "L6.1b": ((0, "-"), (2, "-")),
    "L6.2": ((0, "+"), (1, "+")),
    "L6.3a": ((0, "+"), (1, "-")),
    "L6.3b": ((1, "+"), (0, "-")),
    "L7.1": ((0, "+"), (2, "+"), (1, "+")),
    "L7.2a": ((0, "+"), (2, "+"), (1, "-")),
    "L7.2b": ((0, "+"), (1, "-"), (3, "-")),
    "L8.1": ((0, "+"), (2, "+"), (1, "+"), (3, "+")),
    "L8.2": ((0, "+"), (2, "+"), (1, "-"), (3, "-")),
}


def predict_moment(m: int, name: str) -> GaussInt:
    _require_odd(m)
    ts = tau_sigma(m)
    tau, sigma = ts.tau, ts.sigma
    q = 2 ** m
    h = 2 ** ((m - 1) // 2)
    if name == "L5.1":
        return GaussInt(2 * q * (q - 2))
    if name in ("L5.2", "L6.1a", "L6.1b", "L7.2a", "L7.2b", "L8.2"):
        return GaussInt(0)
    if name == "L6.2":
        return 2 * q * (q + (q - 4) * h * tau)
    if name == "L6.3a":
        return 2 ** ((3 * m + 1) // 2) * (q - 2) * GaussInt.ipow(m) * tau
    if name == "L6.3b":
        return -(2 ** ((3 * m + 1) // 2) * (q - 2) * GaussInt.ipow(m) * tau)
    if name == "L7.1":
        return 2 ** (2 * m + 3) * (h * tau - 1)
    if name == "L8.1":
        return GaussInt(2 ** (3 * m + 3) * sigma)
    raise ValueError(f"unknown moment {name!r}")


def moment_name(factors) -> str:
    norm = tuple((c % 4, s) for c, s in factors)
    for name, spec in MOMENT_SPECS.items():
        if spec == norm:
            return name
    raise ValueError(f"no closed form for moment {factors}")


# ---------------------------------------------------------------------------
# Table II snapshot
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableIIRow:
    m: int
    n: int
    k1: int
    k2: int
    best_known_dL: int | None
    our_dL: int
    theorem: int


def load_table2() -> list[TableIIRow]:
    text = resources.files("z4lee").joinpath("data/table2.csv").read_text(encoding="utf-8")
    rows = []
    for rec in csv.DictReader(text.splitlines()):
        best = rec["best_known_dL"].strip()
        rows.append(TableIIRow(int(rec["m"]), int(rec["n"]), int(rec["k1"]), int(rec["k2"]),
                               int(best) if best else None, int(rec["our_dL"]), int(rec["theorem"])))
    return rows


def family(theorem: int) -> list[DefiningSetSpec]:
    if theorem == 1:
        return [DefiningSetSpec.single(t) for t in range(4)]
    if theorem == 2:
        return [DefiningSetSpec.pair(0, 2), DefiningSetSpec.pair(1, 3)]
    return [DefiningSetSpec.complement(t) for t in range(4)]


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    status: str
    m: int
    subject: str
    diffs: list[dict] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def as_dict(self) -> dict:
        return {"status": self.status, "m": self.m, "subject": self.subject,
                "diffs": self.diffs, "runtime_ms": round(self.runtime_ms, 3)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), default=str)

    def first_diff(self) -> str:
        if not self.diffs:
            return ""
        d = self.diffs[0]
        return f"{d['key']}: predicted {d['predicted']}, enumerated {d['enumerated']}"


def _jsonable(v):
    if isinstance(v, GaussInt):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(str(_jsonable(x)) for x in v) + ")"
    return v


def _diff_maps(pred: dict, got: dict, prefix: str = "") -> list[dict]:
    out = []
    for key in sorted(set(pred) | set(got), key=lambda k: (str(type(k)), k)):
        p, g = pred.get(key, 0), got.get(key, 0)
        if p != g:
            out.append({"key": f"{prefix}{_jsonable(key)}", "predicted": p, "enumerated": g})
    return out


def compare(predicted, enumerated, m: int = 0, subject: str = "", started: float | None = None) -> VerificationReport:
    """Exact comparison; every differing entry is listed, no tolerances."""
    if isinstance(predicted, ClosedFormPrediction):
        if not isinstance(enumerated, dict):
            raise ShapeMismatch("a theorem prediction compares against an enumeration summary dict")
        diffs = []
        for key, pv in (("n", predicted.n), ("codewords", predicted.codeword_count), ("d_lee", predicted.d_lee)):
            if enumerated.get(key) != pv:
                diffs.append({"key": key, "predicted": pv, "enumerated": enumerated.get(key)})
        dist = enumerated.get("distribution")
        if isinstance(dist, WeightDistribution):
            dist = dist.as_dict()
        diffs += _diff_maps(predicted.as_dict(), dict(dist or {}), "weight ")
    elif isinstance(predicted, ValueDistribution):
        if not isinstance(enumerated, ValueDistribution):
            raise ShapeMismatch("distribution vs non-distribution")
        diffs = _diff_maps(predicted.as_dict(), enumerated.as_dict())
    elif isinstance(predicted, WeightDistribution):
        if not isinstance(enumerated, WeightDistribution):
            raise ShapeMismatch("weight distribution vs other")
        diffs = _diff_maps(predicted.as_dict(), enumerated.as_dict(), "weight ")
    elif isinstance(predicted, (GaussInt, int)):
        if not isinstance(enumerated, (GaussInt, int)):
            raise ShapeMismatch("scalar vs non-scalar")
        p, g = GaussInt.of(predicted), GaussInt.of(enumerated)
        diffs = [] if p == g else [{"key": "value", "predicted": str(p), "enumerated": str(g)}]
    elif isinstance(predicted, dict):
        if not isinstance(enumerated, dict):
            raise ShapeMismatch("dict vs non-dict")
        diffs = _diff_maps(predicted, enumerated)
    else:
        raise ShapeMismatch(f"cannot compare {type(predicted).__name__}")
    runtime = (time.perf_counter() - started) * 1000 if started is not None else 0.0
    return VerificationReport("FAIL" if diffs else "PASS", m, subject, diffs, runtime)
