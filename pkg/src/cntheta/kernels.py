"""Hot loops: fixed-point multi-limb theta ladders and representation counts.

Numbers in the ladder are fixed-point reals stored as ``int64`` limb vectors
``x = a[0] + sum_k a[k] * 2**(-LIMB_BITS * k)`` with ``a[1:]`` normalised to
``[0, 2**LIMB_BITS)`` and ``a[0]`` a small signed integer part.  A complex
number is a ``(2, L + 1)`` array (real row, imaginary row).  Because the
arithmetic is pure integer, both backends below produce bit-identical
results.

Backends
--------
``numba``  ``@njit`` loops, the default when numba imports.
``numpy``  the same algorithm vectorised over the batch axis.

Set ``CNTHETA_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import math
import os

import numpy as np

LIMB_BITS = 28
LIMB_MASK = (1 << LIMB_BITS) - 1
# (L + 2) * 2**(2 * LIMB_BITS) must stay below 2**63
MAX_LIMBS = 120

_disabled = os.environ.get("CNTHETA_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:  # pragma: no cover - exercised implicitly by whichever backend is live
    if _disabled:
        raise ImportError("numba disabled by CNTHETA_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# conversions (pure Python ints)


def limbs_for_bits(frac_bits: int) -> int:
    L = -(-frac_bits // LIMB_BITS)
    if L > MAX_LIMBS:
        raise ValueError(f"{frac_bits} fraction bits exceeds the kernel limit")
    return max(L, 1)


def int_to_limbs(x: int, L: int) -> np.ndarray:
    """Split the fixed-point integer ``x`` (scaled by 2**(LIMB_BITS*L))."""
    out = np.zeros(L + 1, dtype=np.int64)
    for k in range(L, 0, -1):
        out[k] = x & LIMB_MASK
        x >>= LIMB_BITS
    out[0] = x
    return out


def limbs_to_int(a) -> int:
    x = int(a[0])
    for v in a[1:]:
        x = (x << LIMB_BITS) + int(v)
    return x


def ulp_factor(L: int) -> int:
    """Per-real-multiplication truncation error, in units of the last limb."""
    return L + 2


def ladder_error_ulps(K: int, L: int, weight_max: int, input_ulps: int = 2) -> int:
    """Bound on |computed - exact| of a ladder sum, in last-limb ulps.

    With complex-multiply error u <= 4 * ulp_factor(L) ulps and input errors
    e0 on the three seeds, the ratio error after k steps is at most
    e0 + k (e0 + u) and the term error at most e0 + k (e0 + u) + k^2 (e0 + u) / 2.
    Summing over k <= K with weights bounded by ``weight_max``:
    """
    u = 4 * ulp_factor(L) + input_ulps
    k1 = K + 1
    return weight_max * (k1 * input_ulps + k1 * k1 * u + k1**3 * u)


# --------------------------------------------------------------------------
# numba backend


@njit(cache=True)
def _nb_normalize(t, n):
    for k in range(n - 1, 0, -1):
        c = t[k] >> LIMB_BITS
        t[k] -= c << LIMB_BITS
        t[k - 1] += c


@njit(cache=True)
def _nb_mul_trunc(a, b, out, tmp, L):
    for k in range(L + 2):
        tmp[k] = 0
    for i in range(L + 1):
        ai = a[i]
        if ai == 0:
            continue
        jmax = L + 1 - i
        if jmax > L:
            jmax = L
        for j in range(jmax + 1):
            tmp[i + j] += ai * b[j]
    _nb_normalize(tmp, L + 2)
    for k in range(L + 1):
        out[k] = tmp[k]


@njit(cache=True)
def _nb_cmul(x, y, out, p1, p2, tmp, L):
    # out may alias x; results land in p1/p2 first
    _nb_mul_trunc(x[0], y[0], p1[0], tmp, L)
    _nb_mul_trunc(x[1], y[1], p1[1], tmp, L)
    _nb_mul_trunc(x[0], y[1], p2[0], tmp, L)
    _nb_mul_trunc(x[1], y[0], p2[1], tmp, L)
    for k in range(L + 1):
        out[0, k] = p1[0, k] - p1[1, k]
        out[1, k] = p2[0, k] + p2[1, k]
    _nb_normalize(out[0], L + 1)
    _nb_normalize(out[1], L + 1)


@njit(cache=True)
def _nb_ladder_sum(t0, r0, s, weights, L):
    nb = t0.shape[0]
    K = weights.shape[0] - 1
    acc = np.zeros((nb, 2, L + 1), dtype=np.int64)
    t = np.empty((2, L + 1), dtype=np.int64)
    r = np.empty((2, L + 1), dtype=np.int64)
    p1 = np.empty((2, L + 1), dtype=np.int64)
    p2 = np.empty((2, L + 1), dtype=np.int64)
    tmp = np.empty(L + 2, dtype=np.int64)
    for b in range(nb):
        t[:, :] = t0[b]
        r[:, :] = r0[b]
        for k in range(K + 1):
            w = weights[k]
            if w != 0:
                for c in range(2):
                    for j in range(L + 1):
                        acc[b, c, j] += w * t[c, j]
            if k < K:
                _nb_cmul(t, r, t, p1, p2, tmp, L)
                _nb_cmul(r, s[b], r, p1, p2, tmp, L)
        _nb_normalize(acc[b, 0], L + 1)
        _nb_normalize(acc[b, 1], L + 1)
    return acc


@njit(cache=True)
def _nb_ladder_terms(t0, r0, s, K, L):
    out = np.empty((K + 1, 2, L + 1), dtype=np.int64)
    t = t0.copy()
    r = r0.copy()
    p1 = np.empty((2, L + 1), dtype=np.int64)
    p2 = np.empty((2, L + 1), dtype=np.int64)
    tmp = np.empty(L + 2, dtype=np.int64)
    for k in range(K + 1):
        out[k] = t
        if k < K:
            _nb_cmul(t, r, t, p1, p2, tmp, L)
            _nb_cmul(r, s, r, p1, p2, tmp, L)
    return out


@njit(cache=True)
def _nb_isqrt(v):
    z = int(np.sqrt(v))
    while z * z > v:
        z -= 1
    while (z + 1) * (z + 1) <= v:
        z += 1
    return z


@njit(cache=True)
def _nb_count_reps(target, c1, c2, c3):
    total = 0
    xm = _nb_isqrt(target // c1)
    for x in range(-xm, xm + 1):
        rx = target - c1 * x * x
        ym = _nb_isqrt(rx // c2)
        for y in range(-ym, ym + 1):
            ry = rx - c2 * y * y
            if ry % c3 != 0:
                continue
            z2 = ry // c3
            z = _nb_isqrt(z2)
            if z * z == z2:
                total += 1 if z == 0 else 2
    return total


# --------------------------------------------------------------------------
# numpy backend (vectorised over the leading batch axis)


def _np_normalize(t):
    for k in range(t.shape[-1] - 1, 0, -1):
        c = t[..., k] >> LIMB_BITS
        t[..., k] -= c << LIMB_BITS
        t[..., k - 1] += c


def _np_mul_trunc(a, b, L):
    tmp = np.zeros(a.shape[:-1] + (L + 2,), dtype=np.int64)
    for i in range(L + 1):
        jmax = min(L, L + 1 - i)
        tmp[..., i : i + jmax + 1] += a[..., i : i + 1] * b[..., : jmax + 1]
    _np_normalize(tmp)
    return tmp[..., : L + 1]


def _np_cmul(x, y, L):
    re = _np_mul_trunc(x[..., 0, :], y[..., 0, :], L) - _np_mul_trunc(x[..., 1, :], y[..., 1, :], L)
    im = _np_mul_trunc(x[..., 0, :], y[..., 1, :], L) + _np_mul_trunc(x[..., 1, :], y[..., 0, :], L)
    out = np.stack([re, im], axis=-2)
    _np_normalize(out)
    return out


def _np_ladder_sum(t0, r0, s, weights, L):
    K = weights.shape[0] - 1
    t = t0.copy()
    r = r0.copy()
    acc = np.zeros_like(t0)
    for k in range(K + 1):
        w = int(weights[k])
        if w:
            acc += w * t
        if k < K:
            t = _np_cmul(t, r, L)
            r = _np_cmul(r, s, L)
    _np_normalize(acc)
    return acc


def _np_ladder_terms(t0, r0, s, K, L):
    out = np.empty((K + 1,) + t0.shape, dtype=np.int64)
    t, r = t0.copy(), r0.copy()
    for k in range(K + 1):
        out[k] = t
        if k < K:
            t = _np_cmul(t, r, L)
            r = _np_cmul(r, s, L)
    return out


def _np_count_reps(target, c1, c2, c3):
    xm = math.isqrt(target // c1)
    ym = math.isqrt(target // c2)
    x = np.arange(-xm, xm + 1, dtype=np.int64)[:, None]
    y = np.arange(-ym, ym + 1, dtype=np.int64)[None, :]
    rest = target - c1 * x * x - c2 * y * y
    ok = (rest >= 0) & (rest % c3 == 0)
    z2 = np.where(ok, rest // c3, 0)
    z = np.floor(np.sqrt(z2.astype(np.float64))).astype(np.int64)
    z -= (z * z > z2).astype(np.int64)
    z += ((z + 1) * (z + 1) <= z2).astype(np.int64)
    hit = ok & (z * z == z2)
    return int(np.where(z == 0, 1, 2)[hit].sum())


# --------------------------------------------------------------------------
# dispatch


def ladder_sum(t0, r0, s, weights, L: int, backend: str | None = None) -> np.ndarray:
    """Batched weighted ladder sums.

    For each batch row computes ``sum_k weights[k] * t_k`` where
    ``t_{k+1} = t_k * r_k`` and ``r_{k+1} = r_k * s``.  Inputs are
    ``(nbatch, 2, L + 1)`` limb arrays; ``weights`` is ``int64`` of length K + 1.
    Two complex multiplications per term.
    """
    backend = backend or BACKEND
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (t0, r0, s)]
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _nb_ladder_sum(*args, weights, L)
    return _np_ladder_sum(*args, weights, L)


def ladder_terms(t0, r0, s, K: int, L: int, backend: str | None = None) -> np.ndarray:
    """Every ladder term t_0..t_K for a single (unbatched) ladder."""
    backend = backend or BACKEND
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (t0, r0, s)]
    if backend == "numba":
        return _nb_ladder_terms(*args, K, L)
    return _np_ladder_terms(*args, K, L)


def count_reps(target: int, c1: int, c2: int, c3: int, backend: str | None = None) -> int:
    backend = backend or BACKEND
    if backend == "numba":
        return int(_nb_count_reps(target, c1, c2, c3))
    return _np_count_reps(target, c1, c2, c3)
