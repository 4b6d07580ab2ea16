from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gr4, span_size
from z4lee import kernels
from z4lee.codelab import (
    DefiningSetSpec,
    EmptyDefiningSet,
    WeightDistribution,
    ZeroCode,
    build_defining_set,
    codeword,
    codeword_scalar,
    count_n_identity,
    enumerate_code,
    generator_rows,
    lee_weight,
    min_lee_distance,
    shift_invariant,
    standard_form,
    weight_distribution,
    z4_standard_form,
)
from z4lee.galois import GRElem, field_ctx
from z4lee.oracle import OutOfTheoremScope, family, predict, tau_sigma

ALL_SPECS = [DefiningSetSpec.single(t) for t in range(4)] + \
    [DefiningSetSpec.pair(a, b) for a in range(4) for b in range(a + 1, 4)] + \
    [DefiningSetSpec.complement(t) for t in range(4)]


# ---------------------------------------------------------------------------
# defining sets
# ---------------------------------------------------------------------------

def test_spec_parse_and_validation():
    assert DefiningSetSpec.parse("single:2") == DefiningSetSpec.single(2)
    assert DefiningSetSpec.parse("pair:1,3") == DefiningSetSpec.pair(1, 3)
    assert str(DefiningSetSpec.parse("Complement:0")) == "complement:0"
    assert DefiningSetSpec.complement(1).trace_values() == {0, 2, 3}
    for bad in ("single:4", "pair:1,1", "pair:1", "triple:0", "single:x", "single"):
        with pytest.raises(ValueError):
            DefiningSetSpec.parse(bad)


def test_defining_set_examples():
    ctx = field_ctx(3)
    assert build_defining_set(ctx, DefiningSetSpec.single(0)).coords.tolist() == [0]
    assert build_defining_set(ctx, DefiningSetSpec.pair(0, 2)).n == 4
    assert build_defining_set(field_ctx(5), DefiningSetSpec.complement(0)).n == 26


def test_empty_defining_set_is_reported():
    ctx = field_ctx(1)  # GR(4,1) = Z4, Tr takes only the values 0 and 1
    with pytest.raises(EmptyDefiningSet):
        build_defining_set(ctx, DefiningSetSpec.single(2))
    with pytest.raises(EmptyDefiningSet):
        build_defining_set(field_ctx(2), DefiningSetSpec.single(1))


@pytest.mark.parametrize("m", [5, 7, 9, 11, 13])
def test_defining_set_sizes(m):
    ctx = field_ctx(m)
    tau = tau_sigma(m).tau.re
    h = 2 ** ((m - 3) // 2)
    i_m1 = 1 if m % 4 == 1 else -1
    sizes = [2 ** (m - 2) + h * tau, 2 ** (m - 2) + h * i_m1 * tau,
             2 ** (m - 2) - h * tau, 2 ** (m - 2) - h * i_m1 * tau]
    for t in range(4):
        assert build_defining_set(ctx, DefiningSetSpec.single(t)).n == sizes[t]
        assert build_defining_set(ctx, DefiningSetSpec.complement(t)).n == 2 ** m - sizes[t]


# ---------------------------------------------------------------------------
# codewords and weights
# ---------------------------------------------------------------------------

def test_codeword_examples():
    ctx = field_ctx(3)
    code = build_defining_set(ctx, DefiningSetSpec.pair(0, 2))
    assert code.coords.tolist() == [0, 2, 4, 6]
    assert codeword(ctx, code, GRElem(0, 0)) == (0, 0, 0, 0)
    assert codeword(ctx, code, GRElem(1, 0)) == (0, 2, 2, 2)
    assert codeword(ctx, code, GRElem(0, 1)) == (0, 0, 0, 0)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_codeword_paths_and_model_agree(m):
    ctx = field_ctx(m)
    R = gr4(m, ctx.poly)
    rng = np.random.default_rng(m)
    code = build_defining_set(ctx, DefiningSetSpec.complement(1))
    for a, b in rng.integers(0, ctx.q, size=(40, 2)).tolist():
        u = GRElem(a, b)
        ref = tuple(R.trace(R.mul(R.element(a, b), R.teich[code.coords])).tolist())
        assert codeword(ctx, code, u) == codeword_scalar(ctx, code, u) == ref


def test_lee_weight_examples():
    assert lee_weight((0, 0, 0, 0)) == 0
    assert lee_weight((1, 3)) == 2
    assert lee_weight((0, 2, 2, 2)) == 6


@given(st.lists(st.integers(0, 3), max_size=64))
def test_lee_weight_is_n_minus_real_part(cw):
    re = sum((1j ** c).real for c in cw)
    assert lee_weight(cw) == len(cw) - round(re)
    assert lee_weight([(-c) % 4 for c in cw]) == lee_weight(cw)


def test_weight_distribution_examples():
    ctx = field_ctx(3)
    code = build_defining_set(ctx, DefiningSetSpec.pair(0, 2))
    d = weight_distribution(ctx, code)
    assert d.as_dict() == {0: 1, 2: 15, 4: 15, 6: 1}
    assert d.total_codewords == 32
    assert weight_distribution(ctx, code, dedup=False).total_codewords == 64
    assert weight_distribution(field_ctx(5), build_defining_set(field_ctx(5), DefiningSetSpec.single(2))).total_codewords == 512
    assert d.to_csv().splitlines()[:2] == ["lee_weight,frequency", "0,1"]


@pytest.mark.parametrize("backend", kernels.available_backends())
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_dedup_matches_exact_set(m, backend):
    ctx = field_ctx(m)
    for spec in ALL_SPECS:
        try:
            code = build_defining_set(ctx, spec)
        except EmptyDefiningSet:
            continue
        words = {}
        raw = {}
        for a in range(ctx.q):
            for b in range(ctx.q):
                cw = codeword(ctx, code, GRElem(a, b))
                w = lee_weight(cw)
                words[cw] = w
                raw[w] = raw.get(w, 0) + 1
        exact = {}
        for w in words.values():
            exact[w] = exact.get(w, 0) + 1
        e = enumerate_code(ctx, code, backend=backend)
        assert e.dedup.as_dict() == exact
        assert e.raw.as_dict() == raw
        assert e.backend == backend


def test_min_lee_distance():
    assert min_lee_distance(WeightDistribution.from_counts({0: 1, 6: 3, 2: 1})) == 2
    with pytest.raises(ZeroCode):
        min_lee_distance(WeightDistribution.from_counts({0: 1}))


@pytest.mark.parametrize("m,spec,d", [(3, "pair:0,2", 2), (5, "single:1", 2), (7, "complement:2", 64)])
def test_min_distance_examples(m, spec, d):
    ctx = field_ctx(m)
    code = build_defining_set(ctx, DefiningSetSpec.parse(spec))
    assert min_lee_distance(weight_distribution(ctx, code)) == d


def test_workers_do_not_change_results():
    ctx = field_ctx(9)
    code = build_defining_set(ctx, DefiningSetSpec.single(1))
    one = enumerate_code(ctx, code, workers=1)
    three = enumerate_code(ctx, code, workers=3)
    assert one.dedup == three.dedup
    assert np.array_equal(one.fingerprints, three.fingerprints)


# ---------------------------------------------------------------------------
# multiplicities
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m", [5, 7])
def test_proven_shift_invariance(m):
    ctx = field_ctx(m)
    e0 = enumerate_code(ctx, build_defining_set(ctx, DefiningSetSpec.single(0)))
    assert e0.kernel_size == 4
    assert shift_invariant(ctx, e0, 1)
    ep = enumerate_code(ctx, build_defining_set(ctx, DefiningSetSpec.pair(0, 2)))
    assert ep.kernel_size == 2
    assert shift_invariant(ctx, ep, 2) and not shift_invariant(ctx, ep, 1)
    for t in range(4):
        ec = enumerate_code(ctx, build_defining_set(ctx, DefiningSetSpec.complement(t)))
        assert ec.kernel_size == 1
        assert not shift_invariant(ctx, ec, 2)


@pytest.mark.parametrize("m", [5, 7])
def test_multiplicity_matches_codeword_count(m):
    ctx = field_ctx(m)
    seen = {}
    for th in (1, 2, 3):
        for spec in family(th):
            e = enumerate_code(ctx, build_defining_set(ctx, spec))
            assert e.kernel_size * predict(m, spec).codeword_count == 4 ** m
            seen[str(spec)] = e.kernel_size
    assert seen == {"single:0": 4, "single:1": 1, "single:2": 2, "single:3": 1,
                    "pair:0,2": 2, "pair:1,3": 1, "complement:0": 1, "complement:1": 1,
                    "complement:2": 1, "complement:3": 1}


# ---------------------------------------------------------------------------
# standard form
# ---------------------------------------------------------------------------

def _check_shape(t):
    G, k1, k2 = t.matrix, t.k1, t.k2
    assert G.shape[0] == k1 + k2
    assert np.array_equal(G[:k1, :k1], np.eye(k1, dtype=int))
    assert not G[k1:, :k1].any()
    assert np.array_equal(G[k1:, k1:k1 + k2], 2 * np.eye(k2, dtype=int))
    assert np.all(G[k1:] % 2 == 0)


def test_standard_form_examples():
    t = z4_standard_form(np.zeros((3, 5), dtype=int))
    assert (t.k1, t.k2) == (0, 0)
    ctx = field_ctx(3)
    t = standard_form(ctx, build_defining_set(ctx, DefiningSetSpec.pair(0, 2)))
    assert (t.k1, t.k2) == (2, 1)
    _check_shape(t)
    ctx = field_ctx(5)
    t = standard_form(ctx, build_defining_set(ctx, DefiningSetSpec.single(2)))
    assert (t.k1, t.k2) == (4, 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_standard_form_counts_the_span(rows, cols, data):
    G = np.array(data.draw(st.lists(st.lists(st.integers(0, 3), min_size=cols, max_size=cols),
                                    min_size=rows, max_size=rows)))
    t = z4_standard_form(G)
    _check_shape(t)
    assert t.size == span_size(G)
    # the reduced rows span the column-permuted original code
    assert span_size(t.matrix) == span_size(G[:, t.column_perm]) if t.matrix.size else True


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7])
def test_type_matches_codeword_count(m):
    ctx = field_ctx(m)
    for spec in ALL_SPECS:
        try:
            code = build_defining_set(ctx, spec)
        except EmptyDefiningSet:
            continue
        t = standard_form(ctx, code)
        _check_shape(t)
        assert t.size == enumerate_code(ctx, code).dedup.total_codewords
        assert generator_rows(ctx, code).shape == (2 * m, code.n)


# ---------------------------------------------------------------------------
# N0 - N2 identities
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m", [5, 7, 9])
def test_n_identity_at_zero(m):
    ctx = field_ctx(m)
    rec = count_n_identity(ctx, DefiningSetSpec.single(0), GRElem(0, 0))
    tau = tau_sigma(m).tau.re
    assert rec.lhs == build_defining_set(ctx, DefiningSetSpec.single(0)).n
    assert rec.rhs == 2 ** (m - 2) + 2 ** ((m - 3) // 2) * tau


def test_n_identity_pair_example():
    rec = count_n_identity(field_ctx(3), DefiningSetSpec.pair(0, 2), GRElem(0, 1))
    assert rec.lhs == 4 and rec.rhs == Fraction(4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.sampled_from(list(range(3))), st.data())
def test_n_identity_random(m, which, data):
    ctx = field_ctx(m)
    spec = (DefiningSetSpec.single(0), DefiningSetSpec.pair(0, 2), DefiningSetSpec.complement(0))[which]
    u = GRElem(data.draw(st.integers(0, ctx.q - 1)), data.draw(st.integers(0, ctx.q - 1)))
    assert count_n_identity(ctx, spec, u).holds


def test_n_identity_scope():
    with pytest.raises(ValueError):
        count_n_identity(field_ctx(4), DefiningSetSpec.single(0), GRElem(1, 0))
    with pytest.raises(ValueError):
        count_n_identity(field_ctx(5), DefiningSetSpec.single(1), GRElem(1, 0))


def test_mixed_parity_pairs_enumerate_without_oracle():
    ctx = field_ctx(5)
    spec = DefiningSetSpec.pair(0, 1)
    with pytest.raises(OutOfTheoremScope):
        predict(5, spec)
    e = enumerate_code(ctx, build_defining_set(ctx, spec))
    assert e.dedup.total_codewords == standard_form(ctx, build_defining_set(ctx, spec)).size
