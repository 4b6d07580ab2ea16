import os
import subprocess
import sys

import numpy as np
import pytest

from z4lee import kernels
from z4lee.codelab import DefiningSetSpec, _hash_coef, build_defining_set, codeword, lee_weight
from z4lee.galois import GRElem, field_ctx

compiled = pytest.mark.skipif("compiled" not in kernels.available_backends(),
                              reason="compiled extension not built")


def _args(ctx, code):
    return (ctx.Tr, ctx.log, ctx.exp, ctx.lmask, code.coords, _hash_coef(code.n))


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_weights_match_codewords(backend):
    ctx = field_ctx(5)
    code = build_defining_set(ctx, DefiningSetSpec.complement(3))
    w, fp = kernels.sweep_block(*_args(ctx, code), 3, 7, backend=backend)
    assert w.shape == (4 * ctx.q,) and fp.shape == (4 * ctx.q, 2)
    for a in range(3, 7):
        for b in range(ctx.q):
            assert w[(a - 3) * ctx.q + b] == lee_weight(codeword(ctx, code, GRElem(a, b)))


@compiled
@pytest.mark.parametrize("m,spec", [(3, "pair:0,2"), (6, "single:1"), (7, "complement:0"), (9, "pair:1,3")])
def test_backends_agree(m, spec):
    ctx = field_ctx(m)
    code = build_defining_set(ctx, DefiningSetSpec.parse(spec))
    lo, hi = 1, min(ctx.q, 9)
    wp, fp = kernels.sweep_block(*_args(ctx, code), lo, hi, backend="python")
    wc, fc = kernels.sweep_block(*_args(ctx, code), lo, hi, backend="compiled")
    assert np.array_equal(wp, wc)
    assert np.array_equal(fp, fc)


def test_fingerprints_separate_distinct_words():
    ctx = field_ctx(5)
    code = build_defining_set(ctx, DefiningSetSpec.single(1))
    _, fp = kernels.sweep_block(*_args(ctx, code), 0, ctx.q)
    words = [codeword(ctx, code, GRElem(a, b)) for a in range(ctx.q) for b in range(ctx.q)]
    by_fp = {}
    for f, w in zip(map(tuple, fp.tolist()), words):
        assert by_fp.setdefault(f, w) == w
    assert len(by_fp) == len(set(words))


def test_env_var_forces_python_backend():
    env = dict(os.environ, Z4LEE_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "from z4lee import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_is_fastest_available():
    assert kernels.BACKEND == kernels.available_backends()[-1] or os.environ.get("Z4LEE_BACKEND") == "python"
