#!/usr/bin/env python3
"""Independent reference values for the freeplate test suite.

Everything here is computed with mpmath (50 significant digits) and scipy,
without touching the Rust implementation. The output, oracle_values.json,
is committed; Rust tests freeze the numbers they need from it.

Run:  python3 oracle/oracle.py > oracle/oracle_values.json
"""

import json
import sys

import mpmath as mp
import numpy as np
from scipy import special as sp

mp.mp.dps = 50


# ---------------------------------------------------------------------------
# Ultraspherical Bessel functions: 40-term ascending series in mpmath.
# ---------------------------------------------------------------------------

def series_j(d, l, z, m=0, sign=-1, terms=40):
    """m-th derivative of j_l (sign=-1) or i_l (sign=+1) by term-wise
    differentiation of the ascending series."""
    d = mp.mpf(d)
    z = mp.mpf(z)
    total = mp.mpf(0)
    for k in range(terms):
        p = 2 * k + l
        if p < m:
            continue
        coeff = (mp.mpf(sign) ** k) * mp.power(2, 1 - d / 2) / (
            mp.factorial(k) * mp.gamma(k + d / 2 + l)) / mp.power(2, p)
        ff = mp.ff(p, m)
        total += coeff * ff * (z ** (p - m) if p - m > 0 else mp.mpf(1))
    return total


def bessel_j(d, l, z, m=0):
    """Same quantity through mpmath's Bessel J (different code path)."""
    s = mp.mpf(d - 2) / 2
    return mp.diff(lambda t: t ** (-s) * mp.besselj(s + l, t), mp.mpf(z), m)


def bessel_i(d, l, z, m=0):
    s = mp.mpf(d - 2) / 2
    return mp.diff(lambda t: t ** (-s) * mp.besseli(s + l, t), mp.mpf(z), m)


# ---------------------------------------------------------------------------
# Determinant W_l(a), scipy vectorized (for dense scans) and mpmath (refine).
# ---------------------------------------------------------------------------

def ultra_np(kind, d, l, z):
    """(f, f', f'') of z^{-s} C_{s+l}(z) for C = J or I, numpy arrays."""
    s = (d - 2) / 2.0
    nu = s + l
    if kind == "j":
        c0, c1, c2 = sp.jv(nu, z), sp.jvp(nu, z, 1), sp.jvp(nu, z, 2)
    else:
        c0, c1, c2 = sp.iv(nu, z), sp.ivp(nu, z, 1), sp.ivp(nu, z, 2)
    zs = z ** (-s)
    f = zs * c0
    f1 = -s * z ** (-s - 1) * c0 + zs * c1
    f2 = s * (s + 1) * z ** (-s - 2) * c0 - 2 * s * z ** (-s - 1) * c1 + zs * c2
    return f, f1, f2


def w_np(d, l, tau, a):
    b = np.sqrt(a * a + tau)
    k = l * (l + d - 2)
    j, j1, j2 = ultra_np("j", d, l, a)
    i, i1, i2 = ultra_np("i", d, l, b)
    return (a * a * j2 * (-a * a * b * i1 + k * (b * i1 - i))
            - b * b * i2 * (a * b * b * j1 + k * (a * j1 - j)))


def w_mp(d, l, tau, a):
    a = mp.mpf(a)
    b = mp.sqrt(a * a + tau)
    k = l * (l + d - 2)
    j, j1, j2 = (bessel_j(d, l, a, m) for m in range(3))
    i, i1, i2 = (bessel_i(d, l, b, m) for m in range(3))
    return (a * a * j2 * (-a * a * b * i1 + k * (b * i1 - i))
            - b * b * i2 * (a * b * b * j1 + k * (a * j1 - j)))


def refine(d, l, tau, lo, hi):
    f = lambda x: w_mp(d, l, tau, x)
    flo = f(lo)
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(80):
        mid = (lo + hi) / 2
        fm = f(mid)
        if mp.sign(fm) == mp.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def dense_roots(d, l, tau, a_max, step=1e-4):
    a = np.arange(step, a_max + step / 2, step)
    w = w_np(d, l, tau, a)
    idx = np.nonzero(np.sign(w[:-1]) * np.sign(w[1:]) < 0)[0]
    return [refine(d, l, tau, a[i], a[i + 1]) for i in idx]


def spectrum(d, tau, l_max, count, a_max):
    rows = [(mp.mpf(0), 0, None)]
    for l in range(l_max + 1):
        for a in dense_roots(d, l, tau, a_max):
            rows.append((a * a * (a * a + tau), l, a))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows[:count]


def p11(d):
    f = lambda z: bessel_j(d, 1, z, 1)
    lo, hi = mp.sqrt(d), mp.sqrt(d + 2)
    flo = f(lo)
    for _ in range(120):
        mid = (lo + hi) / 2
        fm = f(mid)
        if mp.sign(fm) == mp.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def numerator(d, tau, l, prof, dprof, ddprof):
    k = l * (l + d - 2)

    def integrand(r):
        R, R1, R2 = prof(r), dprof(r), ddprof(r)
        return (R2 ** 2 + (2 * k + d - 1) / r ** 2 * R1 ** 2
                - 6 * k / r ** 3 * R * R1 + k * (k - d + 4) / r ** 4 * R ** 2
                + tau * (R1 ** 2 + k * R ** 2 / r ** 2)) * r ** (d - 1)

    return mp.quad(integrand, [0, 1])


def num(x):
    return mp.nstr(x, 20)


def main():
    out = {"provenance": "mpmath %s at %d digits; scipy %s dense scans"
           % (mp.__version__, mp.mp.dps, sp.__name__)}

    vals = {}
    vals["j_d2_l1_z1"] = series_j(2, 1, 1)
    vals["j_d2_l1_z1_besselj"] = mp.besselj(1, 1)
    vals["i_d2_l1_z2"] = series_j(2, 1, 2, sign=1)
    vals["i_d2_l1_z2_besseli"] = mp.besseli(1, 2)
    vals["j2_d2_l1_z1"] = series_j(2, 1, 1, m=2)
    # recurrence cross-check: j'' = ((l^2-l)/z^2 - 1) j_l + (d-1)/z j_{l+1}
    vals["j2_d2_l1_z1_recurrence"] = -series_j(2, 1, 1) + series_j(2, 2, 1)
    vals["i1_d2_l0_z1"] = series_j(2, 0, 1, m=1, sign=1)
    vals["i_d2_l1_z1"] = series_j(2, 1, 1, sign=1)
    vals["iscaled_d2_l1_z50"] = mp.exp(-50) * mp.besseli(1, 50)
    vals["j2_d2_l1_z05"] = series_j(2, 1, mp.mpf("0.5"), m=2)
    a, b = mp.mpf("1.5"), mp.mpf("2.5")
    vals["gamma_d2_l1_a15_b25"] = -a * a * series_j(2, 1, a, m=2) / (
        b * b * series_j(2, 1, b, m=2, sign=1))
    vals["y10_d3_north_pole"] = mp.sqrt(1 / mp.quad(
        lambda t: 2 * mp.pi * mp.cos(t) ** 2 * mp.sin(t), [0, mp.pi]))
    out["values"] = {k: num(v) for k, v in vals.items()}

    out["p11"] = {str(d): num(p11(d)) for d in range(2, 16)}

    fund = {}
    for d in (2, 3, 5):
        for tau in (0.1, 1, 10, 100):
            roots = dense_roots(d, 1, tau, float(p11(d)))
            a = roots[0]
            fund["d%d_tau%s" % (d, tau)] = {
                "a": num(a), "omega": num(a * a * (a * a + tau))}
    # tension R^2 tau for the scaling checks (R = 2)
    for d in (2, 3):
        for tau in (0.25, 1, 2.5):
            roots = dense_roots(d, 1, 4 * tau, float(p11(d)))
            a = roots[0]
            fund["d%d_tau%s_R2" % (d, tau)] = {
                "a": num(a), "omega": num(a * a * (a * a + 4 * tau) / 16)}
    out["fundamental"] = fund

    spectra = {}
    for (d, tau, l_max, count, a_max) in ((2, 10, 5, 6, 8.0), (2, 1, 6, 8, 8.0),
                                          (3, 10, 6, 6, 8.0), (3, 1, 6, 8, 8.0)):
        rows = spectrum(d, tau, l_max, count, a_max)
        spectra["d%d_tau%s_lmax%d_count%d" % (d, tau, l_max, count)] = [
            {"omega": num(w), "l": l, "a": (num(a) if a is not None else None)}
            for (w, l, a) in rows]
    out["spectra"] = spectra

    # Rayleigh numerator for fixed profiles (d = 3, tau = 1).
    nums = {}
    for l in (1, 2, 3):
        nums["r_d3_tau1_l%d" % l] = num(numerator(
            3, 1, l, lambda r: r, lambda r: mp.mpf(1), lambda r: mp.mpf(0)))
        nums["poly_d3_tau1_l%d" % l] = num(numerator(
            3, 1, l,
            lambda r: r * r * (1 - r) ** 2 + r,
            lambda r: 1 + 2 * r - 6 * r ** 2 + 4 * r ** 3,
            lambda r: 2 - 12 * r + 12 * r ** 2))
    nums["r_d2_tau1_l1"] = num(numerator(
        2, 1, 1, lambda r: r, lambda r: mp.mpf(1), lambda r: mp.mpf(0)))
    out["numerator"] = nums

    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
