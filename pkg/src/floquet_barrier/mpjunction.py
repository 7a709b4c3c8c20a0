"""Extended-precision backend for the quivering-barrier junction system.

The junction matrix mixes modified-Bessel factors of size exp(+-kappa chi0);
beyond kappa*chi0 ~ 15 its condition number exceeds 1/eps64 and double
precision returns garbage.  This backend assembles and LU-solves the square
system (harmonics |n| <= M) in gmpy2 multiprecision complex arithmetic and
reports the truncation residual over a margin of extra projection rows.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import gmpy2
import numpy as np


def _mpc(re, im=0.0):
    return gmpy2.mpc(re, im)


def _bessel_seq_mp(max_order: int, z) -> list:
    """I_0..I_max_order(z) via Miller recurrence in the active context."""
    zero = _mpc(0)
    if z == zero:
        out = [zero] * (max_order + 1)
        out[0] = _mpc(1)
        return out
    if gmpy2.mpfr(z.real) < 0:
        out = _bessel_seq_mp(max_order, -z)
        for k in range(1, max_order + 1, 2):
            out[k] = -out[k]
        return out
    za = abs(z)
    start = max_order + int(1.3 * float(za)) + 40
    work = [zero] * (start + 2)
    work[start] = _mpc(1e-300)
    big = gmpy2.mpfr("1e300")
    for k in range(start, 0, -1):
        work[k - 1] = work[k + 1] + (2 * k / z) * work[k]
        if abs(work[k - 1]) > big:
            inv = 1 / big
            for j in range(start + 2):
                work[j] = work[j] * inv
    total = work[0]
    for k in range(1, start + 1):
        total += 2 * work[k]
    scale = gmpy2.exp(z) / total
    return [work[k] * scale for k in range(max_order + 1)]


def _lu_solve_mp(a: List[list], b: list) -> list:
    """In-place partial-pivot LU solve over gmpy2 complex rows."""
    n = len(a)
    for k in range(n):
        p = k
        best = abs(a[k][k])
        for r in range(k + 1, n):
            v = abs(a[r][k])
            if v > best:
                best = v
                p = r
        if best == 0:
            raise RuntimeError("singular junction system")
        if p != k:
            a[k], a[p] = a[p], a[k]
            b[k], b[p] = b[p], b[k]
        ak = a[k]
        akk = ak[k]
        for r in range(k + 1, n):
            f = a[r][k] / akk
            if f == 0:
                continue
            ar = a[r]
            tail = [x - f * y for x, y in zip(ar[k + 1 :], ak[k + 1 :])]
            ar[k + 1 :] = tail
            ar[k] = f
            b[r] = b[r] - f * b[k]
    x = [None] * n
    for k in range(n - 1, -1, -1):
        s = b[k]
        ak = a[k]
        for c in range(k + 1, n):
            s -= ak[c] * x[c]
        x[k] = s / ak[k]
    return x


def solve_junction_mp(
    energy: float,
    height: float,
    length: float,
    offset: float,
    mass: float,
    omega: float,
    chi0: float,
    mode_cutoff: int,
    order_margin: int,
    digits: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]:
    """Returns (A_l, B_r, B_l, C_r, residual) as complex128 arrays.

    Amplitude magnitudes beyond float range are clamped to +-1e280 per part;
    only closed channels can reach that regime and they carry no flux.
    """
    m_cut = mode_cutoff
    ms = list(range(-m_cut, m_cut + 1))
    nm = len(ms)
    with gmpy2.local_context(gmpy2.context(), precision=int(digits * 3.33) + 64):
        two_mu = _mpc(2.0 * mass)
        e_mp = _mpc(energy)
        om = _mpc(omega)
        ch = _mpc(chi0)
        ii = _mpc(0, 1)

        def branch_sqrt(x):
            r = gmpy2.sqrt(x)
            if gmpy2.mpfr(r.imag) < 0:
                r = -r
            return r

        k1 = [branch_sqrt(two_mu * (e_mp + m * om)) for m in ms]
        k2 = [branch_sqrt(two_mu * (e_mp + m * om - _mpc(height))) for m in ms]
        k3 = [branch_sqrt(two_mu * (e_mp + m * om + _mpc(offset))) for m in ms]
        max_order = (m_cut + order_margin) + m_cut + 1
        seq_k1m = [_bessel_seq_mp(max_order, -ii * k1[j] * ch) for j in range(nm)]
        seq_k2p = [_bessel_seq_mp(max_order, ii * k2[j] * ch) for j in range(nm)]
        seq_k2m = [_bessel_seq_mp(max_order, -ii * k2[j] * ch) for j in range(nm)]
        seq_k3p = [_bessel_seq_mp(max_order, ii * k3[j] * ch) for j in range(nm)]
        seq_inc = _bessel_seq_mp(max_order, ii * k1[m_cut] * ch)
        e2p = [gmpy2.exp(ii * k2[j] * _mpc(length)) for j in range(nm)]
        e3p = [gmpy2.exp(ii * k3[j] * _mpc(length)) for j in range(nm)]
        k10 = k1[m_cut]
        zero = _mpc(0)

        def make_rows(n: int):
            r1 = [zero] * (4 * nm)
            r2 = [zero] * (4 * nm)
            r3 = [zero] * (4 * nm)
            r4 = [zero] * (4 * nm)
            for j in range(nm):
                o = abs(n + ms[j])
                v_k1m = seq_k1m[j][o]
                v_k2p = seq_k2p[j][o]
                v_k2m = seq_k2m[j][o]
                v_k3p = seq_k3p[j][o]
                r1[j] = v_k1m
                r1[nm + j] = -v_k2p
                r1[2 * nm + j] = -v_k2m * e2p[j]
                r2[j] = -ii * k1[j] * v_k1m
                r2[nm + j] = -ii * k2[j] * v_k2p
                r2[2 * nm + j] = ii * k2[j] * v_k2m * e2p[j]
                r3[nm + j] = v_k2p * e2p[j]
                r3[2 * nm + j] = v_k2m
                r3[3 * nm + j] = -v_k3p * e3p[j]
                r4[nm + j] = ii * k2[j] * v_k2p * e2p[j]
                r4[2 * nm + j] = -ii * k2[j] * v_k2m
                r4[3 * nm + j] = -ii * k3[j] * v_k3p * e3p[j]
            o0 = abs(n)
            b1 = -seq_inc[o0]
            b2 = -ii * k10 * seq_inc[o0]
            return (r1, b1), (r2, b2), (r3, zero), (r4, zero)

        a_sq: List[list] = []
        b_sq: list = []
        a_ext: List[list] = []
        b_ext: list = []
        for n in range(-(m_cut + order_margin), m_cut + order_margin + 1):
            for row, rhs in make_rows(n):
                a_ext.append(list(row))
                b_ext.append(rhs)
                if abs(n) <= m_cut:
                    a_sq.append(row)
                    b_sq.append(rhs)
        sol = _lu_solve_mp(a_sq, b_sq)

        res2 = gmpy2.mpfr(0)
        bn2 = gmpy2.mpfr(0)
        for row, rhs in zip(a_ext, b_ext):
            s = -rhs
            for c, v in zip(row, sol):
                if v != 0:
                    s += c * v
            res2 += abs(s) ** 2
            bn2 += abs(rhs) ** 2
        residual = float(gmpy2.sqrt(res2 / bn2)) if bn2 > 0 else math.inf

        def to_c128(v) -> complex:
            re = float(v.real)
            im = float(v.imag)
            if not math.isfinite(re):
                re = math.copysign(1e280, re)
            if not math.isfinite(im):
                im = math.copysign(1e280, im)
            return complex(re, im)

        a_l = np.array([to_c128(sol[j]) for j in range(nm)])
        b_r = np.array([to_c128(sol[nm + j]) for j in range(nm)])
        b_l = np.array([to_c128(sol[2 * nm + j] * e2p[j]) for j in range(nm)])
        c_r = np.array([to_c128(sol[3 * nm + j]) for j in range(nm)])
    return a_l, b_r, b_l, c_r, residual
