"""McMurchie-Davidson integrals over contracted Cartesian Gaussians.

One-electron matrices (overlap, kinetic, nuclear attraction) and the full
chemist-convention repulsion tensor (ab|cd).  Hermite expansion coefficients
carry the Gaussian product prefactor; the Boys function switches between the
downward series and the erf-based upward recursion.  All kernels are
numba-compiled; basis data arrives as flat arrays (one row per AO function,
coefficients premultiplied by primitive norms).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _boys(nmax, T, out):
    if T < 1e-13:
        for m in range(nmax + 1):
            out[m] = 1.0 / (2 * m + 1)
        return
    if T < 35.0:
        term = 1.0 / (2 * nmax + 1)
        total = term
        k = 1
        while True:
            term *= 2.0 * T / (2 * nmax + 2 * k + 1)
            total += term
            if term < 1e-17 * total:
                break
            k += 1
        emt = math.exp(-T)
        out[nmax] = emt * total
        for m in range(nmax - 1, -1, -1):
            out[m] = (2.0 * T * out[m + 1] + emt) / (2 * m + 1)
    else:
        out[0] = 0.5 * math.sqrt(math.pi / T) * math.erf(math.sqrt(T))
        emt = math.exp(-T)
        for m in range(nmax):
            out[m + 1] = ((2 * m + 1) * out[m] - emt) / (2.0 * T)


@njit(cache=True)
def _hermite_e(i, j, p, PA, PB, K, out):
    """E_t^{ij} for t = 0..i+j, including the product prefactor K."""
    e = np.zeros((i + 1, j + 1, i + j + 1))
    e[0, 0, 0] = K
    for ii in range(1, i + 1):
        for t in range(ii + 1):
            v = PA * e[ii - 1, 0, t]
            if t > 0:
                v += e[ii - 1, 0, t - 1] / (2.0 * p)
            if t + 1 <= ii - 1:
                v += (t + 1) * e[ii - 1, 0, t + 1]
            e[ii, 0, t] = v
    for jj in range(1, j + 1):
        for ii in range(i + 1):
            for t in range(ii + jj + 1):
                v = PB * e[ii, jj - 1, t]
                if t > 0:
                    v += e[ii, jj - 1, t - 1] / (2.0 * p)
                if t + 1 <= ii + jj - 1:
                    v += (t + 1) * e[ii, jj - 1, t + 1]
                e[ii, jj, t] = v
    for t in range(i + j + 1):
        out[t] = e[i, j, t]


@njit(cache=True)
def _e0(i, j, p, PA, PB, K):
    buf = np.zeros(i + j + 1)
    _hermite_e(i, j, p, PA, PB, K, buf)
    return buf[0]


@njit(cache=True)
def _r_tensor(tmax, umax, vmax, p, X, Y, Z, out):
    """out[t,u,v] = R^0_{tuv}(p, (X,Y,Z))."""
    ntot = tmax + umax + vmax
    T = p * (X * X + Y * Y + Z * Z)
    F = np.zeros(ntot + 1)
    _boys(ntot, T, F)
    aux = np.zeros((ntot + 1, tmax + 1, umax + 1, vmax + 1))
    mp = 1.0
    for n in range(ntot + 1):
        aux[n, 0, 0, 0] = mp * F[n]
        mp *= -2.0 * p
    for t in range(1, tmax + 1):
        for n in range(ntot - t + 1):
            v = X * aux[n + 1, t - 1, 0, 0]
            if t > 1:
                v += (t - 1) * aux[n + 1, t - 2, 0, 0]
            aux[n, t, 0, 0] = v
    for u in range(1, umax + 1):
        for t in range(tmax + 1):
            for n in range(ntot - t - u + 1):
                v = Y * aux[n + 1, t, u - 1, 0]
                if u > 1:
                    v += (u - 1) * aux[n + 1, t, u - 2, 0]
                aux[n, t, u, 0] = v
    for vv in range(1, vmax + 1):
        for u in range(umax + 1):
            for t in range(tmax + 1):
                for n in range(ntot - t - u - vv + 1):
                    w = Z * aux[n + 1, t, u, vv - 1]
                    if vv > 1:
                        w += (vv - 1) * aux[n + 1, t, u, vv - 2]
                    aux[n, t, u, vv] = w
    for t in range(tmax + 1):
        for u in range(umax + 1):
            for vv in range(vmax + 1):
                out[t, u, vv] = aux[0, t, u, vv]


@njit(cache=True)
def _overlap_1d(i, j, p, PA, PB, K):
    return _e0(i, j, p, PA, PB, K) * math.sqrt(math.pi / p)


@njit(cache=True)
def overlap_kinetic(centers, lmn, nprim, alphas, coefs):
    n = centers.shape[0]
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1):
            s_ab = 0.0
            t_ab = 0.0
            AB = centers[a] - centers[b]
            ab2 = AB[0] ** 2 + AB[1] ** 2 + AB[2] ** 2
            for ip in range(nprim[a]):
                aa = alphas[a, ip]
                for jp in range(nprim[b]):
                    bb = alphas[b, jp]
                    cc = coefs[a, ip] * coefs[b, jp]
                    p = aa + bb
                    mu = aa * bb / p
                    s1 = np.zeros(3)
                    for d in range(3):
                        P = (aa * centers[a, d] + bb * centers[b, d]) / p
                        K = math.exp(-mu * AB[d] * AB[d])
                        s1[d] = _overlap_1d(
                            lmn[a, d], lmn[b, d], p, P - centers[a, d], P - centers[b, d], K
                        )
                    s_ab += cc * s1[0] * s1[1] * s1[2]
                    # 1D kinetic pieces: -2 b^2 S_{i,j+2} + b(2j+1) S_ij - j(j-1)/2 S_{i,j-2}
                    t1 = np.zeros(3)
                    for d in range(3):
                        i_l = lmn[a, d]
                        j_l = lmn[b, d]
                        P = (aa * centers[a, d] + bb * centers[b, d]) / p
                        K = math.exp(-mu * AB[d] * AB[d])
                        PA = P - centers[a, d]
                        PB = P - centers[b, d]
                        val = bb * (2 * j_l + 1) * _overlap_1d(i_l, j_l, p, PA, PB, K)
                        val -= 2.0 * bb * bb * _overlap_1d(i_l, j_l + 2, p, PA, PB, K)
                        if j_l >= 2:
                            val -= 0.5 * j_l * (j_l - 1) * _overlap_1d(i_l, j_l - 2, p, PA, PB, K)
                        t1[d] = val
                    t_ab += cc * (
                        t1[0] * s1[1] * s1[2]
                        + s1[0] * t1[1] * s1[2]
                        + s1[0] * s1[1] * t1[2]
                    )
            S[a, b] = S[b, a] = s_ab
            T[a, b] = T[b, a] = t_ab
    return S, T


@njit(cache=True)
def nuclear_attraction(centers, lmn, nprim, alphas, coefs, atom_xyz, atom_charge):
    n = centers.shape[0]
    V = np.zeros((n, n))
    n_atoms = atom_xyz.shape[0]
    for a in range(n):
        for b in range(a + 1):
            v_ab = 0.0
            AB = centers[a] - centers[b]
            tmax = lmn[a, 0] + lmn[b, 0]
            umax = lmn[a, 1] + lmn[b, 1]
            vmax = lmn[a, 2] + lmn[b, 2]
            Ex = np.zeros(tmax + 1)
            Ey = np.zeros(umax + 1)
            Ez = np.zeros(vmax + 1)
            R = np.zeros((tmax + 1, umax + 1, vmax + 1))
            for ip in range(nprim[a]):
                aa = alphas[a, ip]
                for jp in range(nprim[b]):
                    bb = alphas[b, jp]
                    cc = coefs[a, ip] * coefs[b, jp]
                    p = aa + bb
                    mu = aa * bb / p
                    Px = (aa * centers[a, 0] + bb * centers[b, 0]) / p
                    Py = (aa * centers[a, 1] + bb * centers[b, 1]) / p
                    Pz = (aa * centers[a, 2] + bb * centers[b, 2]) / p
                    _hermite_e(lmn[a, 0], lmn[b, 0], p, Px - centers[a, 0],
                               Px - centers[b, 0], math.exp(-mu * AB[0] * AB[0]), Ex)
                    _hermite_e(lmn[a, 1], lmn[b, 1], p, Py - centers[a, 1],
                               Py - centers[b, 1], math.exp(-mu * AB[1] * AB[1]), Ey)
                    _hermite_e(lmn[a, 2], lmn[b, 2], p, Pz - centers[a, 2],
                               Pz - centers[b, 2], math.exp(-mu * AB[2] * AB[2]), Ez)
                    for ic in range(n_atoms):
                        _r_tensor(
                            tmax, umax, vmax, p,
                            Px - atom_xyz[ic, 0], Py - atom_xyz[ic, 1], Pz - atom_xyz[ic, 2],
                            R,
                        )
                        acc = 0.0
                        for t in range(tmax + 1):
                            for u in range(umax + 1):
                                for vv in range(vmax + 1):
                                    acc += Ex[t] * Ey[u] * Ez[vv] * R[t, u, vv]
                        v_ab -= cc * atom_charge[ic] * (2.0 * math.pi / p) * acc
            V[a, b] = V[b, a] = v_ab
    return V


@njit(cache=True)
def _pair_data(centers, lmn, nprim, alphas, coefs, a, b, tdim):
    """Per-primitive-pair Hermite data for the contracted pair (a, b)."""
    npair = nprim[a] * nprim[b]
    ps = np.zeros(npair)
    ccs = np.zeros(npair)
    Ps = np.zeros((npair, 3))
    E = np.zeros((npair, 3, tdim))
    AB = centers[a] - centers[b]
    k = 0
    for ip in range(nprim[a]):
        aa = alphas[a, ip]
        for jp in range(nprim[b]):
            bb = alphas[b, jp]
            p = aa + bb
            mu = aa * bb / p
            ps[k] = p
            ccs[k] = coefs[a, ip] * coefs[b, jp]
            for d in range(3):
                P = (aa * centers[a, d] + bb * centers[b, d]) / p
                Ps[k, d] = P
                buf = np.zeros(lmn[a, d] + lmn[b, d] + 1)
                _hermite_e(
                    lmn[a, d], lmn[b, d], p,
                    P - centers[a, d], P - centers[b, d],
                    math.exp(-mu * AB[d] * AB[d]), buf,
                )
                for t in range(buf.shape[0]):
                    E[k, d, t] = buf[t]
            k += 1
    return ps, ccs, Ps, E


@njit(cache=True)
def electron_repulsion(centers, lmn, nprim, alphas, coefs):
    """Full (ab|cd) tensor with 8-fold symmetry filled from canonical quartets."""
    n = centers.shape[0]
    g = np.zeros((n, n, n, n))
    lmax = 0
    for a in range(n):
        for d in range(3):
            if lmn[a, d] > lmax:
                lmax = lmn[a, d]
    tdim = 2 * lmax + 1

    npairs = n * (n + 1) // 2
    pair_a = np.zeros(npairs, dtype=np.int64)
    pair_b = np.zeros(npairs, dtype=np.int64)
    pair_off = np.zeros(npairs + 1, dtype=np.int64)
    k = 0
    total = 0
    for a in range(n):
        for b in range(a + 1):
            pair_a[k] = a
            pair_b[k] = b
            pair_off[k] = total
            total += nprim[a] * nprim[b]
            k += 1
    pair_off[npairs] = total

    ps = np.zeros(total)
    ccs = np.zeros(total)
    Ps = np.zeros((total, 3))
    E = np.zeros((total, 3, tdim))
    for idx in range(npairs):
        p_, c_, P_, E_ = _pair_data(
            centers, lmn, nprim, alphas, coefs, pair_a[idx], pair_b[idx], tdim
        )
        for m in range(p_.shape[0]):
            ps[pair_off[idx] + m] = p_[m]
            ccs[pair_off[idx] + m] = c_[m]
            for d in range(3):
                Ps[pair_off[idx] + m, d] = P_[m, d]
                for t in range(tdim):
                    E[pair_off[idx] + m, d, t] = E_[m, d, t]

    two_pi_52 = 2.0 * math.pi**2.5
    for idx1 in range(npairs):
        a = pair_a[idx1]
        b = pair_b[idx1]
        t1x = lmn[a, 0] + lmn[b, 0]
        t1y = lmn[a, 1] + lmn[b, 1]
        t1z = lmn[a, 2] + lmn[b, 2]
        for idx2 in range(idx1 + 1):
            c = pair_a[idx2]
            d = pair_b[idx2]
            t2x = lmn[c, 0] + lmn[d, 0]
            t2y = lmn[c, 1] + lmn[d, 1]
            t2z = lmn[c, 2] + lmn[d, 2]
            R = np.zeros((t1x + t2x + 1, t1y + t2y + 1, t1z + t2z + 1))
            val = 0.0
            for m1 in range(pair_off[idx1], pair_off[idx1 + 1]):
                p = ps[m1]
                for m2 in range(pair_off[idx2], pair_off[idx2 + 1]):
                    q = ps[m2]
                    rho = p * q / (p + q)
                    _r_tensor(
                        t1x + t2x, t1y + t2y, t1z + t2z, rho,
                        Ps[m1, 0] - Ps[m2, 0],
                        Ps[m1, 1] - Ps[m2, 1],
                        Ps[m1, 2] - Ps[m2, 2],
                        R,
                    )
                    acc = 0.0
                    for t in range(t1x + 1):
                        for u in range(t1y + 1):
                            for v in range(t1z + 1):
                                e1 = E[m1, 0, t] * E[m1, 1, u] * E[m1, 2, v]
                                if e1 == 0.0:
                                    continue
                                for tt in range(t2x + 1):
                                    for uu in range(t2y + 1):
                                        for vv in range(t2z + 1):
                                            e2 = E[m2, 0, tt] * E[m2, 1, uu] * E[m2, 2, vv]
                                            if e2 == 0.0:
                                                continue
                                            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
                                            acc += e1 * e2 * sign * R[t + tt, u + uu, v + vv]
                    val += (
                        ccs[m1] * ccs[m2] * two_pi_52
                        / (p * q * math.sqrt(p + q)) * acc
                    )
            g[a, b, c, d] = val
            g[b, a, c, d] = val
            g[a, b, d, c] = val
            g[b, a, d, c] = val
            g[c, d, a, b] = val
            g[d, c, a, b] = val
            g[c, d, b, a] = val
            g[d, c, b, a] = val
    return g
