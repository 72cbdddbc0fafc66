# Copyright 2026 The ccwp Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent reference values for the ccwp test-suite.

Reads a shipped FCIDUMP, solves RHF / FCI / CCSD with pyscf, and evaluates the
well-posedness constants with scipy sparse algebra in the pyscf string basis
(alpha creators before beta creators). Every operator is assembled explicitly
as a sparse matrix and exponentials are evaluated by Horner's rule, so the code
path shares nothing with the C++ engine beyond the definitions themselves.

Usage: python3 oracle.py <fixture.fcidump> [--full-only] [--no-constants] [--max-rank Q]
Prints one JSON object on stdout.
"""
import contextlib
import json
import sys

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from pyscf import ao2mo, cc, fci, gto, scf
from pyscf.fci import cistring
from pyscf.tools import fcidump


def popc(x):
    return bin(x).count("1")


def apply_str(holes, parts, s):
    """Normal-ordered string a+_{p1}..a+_{pj} a_{hj}..a_{h1} on a bit string."""
    sign = 1
    for l in holes:
        if not s >> l & 1:
            return 0, 0
        sign *= (-1) ** popc(s & ((1 << l) - 1))
        s &= ~(1 << l)
    for a in reversed(parts):
        if s >> a & 1:
            return 0, 0
        sign *= (-1) ** popc(s & ((1 << a) - 1))
        s |= 1 << a
    return sign, s


def solve(path, full_only=False, constants=True, max_rank=5):
    with contextlib.redirect_stdout(sys.stderr):
        d = fcidump.read(path)
    K, N, ecore = d["NORB"], d["NELEC"], d["ECORE"]
    h1 = d["H1"]
    eri = ao2mo.restore(1, d["H2"], K)
    mol = gto.M(verbose=0)
    mol.nelectron = N
    mol.incore_anyway = True
    mf = scf.RHF(mol)
    mf.get_hcore = lambda *a: h1
    mf.get_ovlp = lambda *a: np.eye(K)
    mf.energy_nuc = lambda *a: ecore
    mf._eri = ao2mo.restore(8, eri, K)
    mf.init_guess = "1e"
    mf.conv_tol = 1e-13
    mf.kernel()
    for _ in range(10):
        mo_new, _, stable, _ = mf.stability(return_status=True)
        if stable:
            break
        mf.kernel(mf.make_rdm1(mo_new, mf.mo_occ))
    out = {"norb": K, "nelec": N, "e_hf": float(mf.e_tot),
           "orbital_energies": [float(x) for x in mf.mo_energy]}
    C = mf.mo_coeff
    h = C.T @ h1 @ C
    g = ao2mo.restore(1, ao2mo.incore.full(mf._eri, C), K)
    na = N // 2
    e_all, ci = fci.direct_spin1.kernel(h, g, K, (na, na), ecore=ecore, nroots=2,
                                        tol=1e-13, max_cycle=400)
    E = e_all[0] - ecore
    out["e_fci"] = float(e_all[0])
    out["fci_gap"] = float(e_all[1] - e_all[0])
    psi = ci[0].ravel().copy()
    psi *= np.sign(psi[0])
    out["overlap"] = float(psi[0])
    if N > 2:
        mycc = cc.CCSD(mf)
        mycc.conv_tol = 1e-11
        mycc.conv_tol_normt = 1e-8
        mycc.max_cycle = 400
        mycc.kernel()
        out["e_ccsd"] = float(mycc.e_tot)
    if not constants:
        return out

    strs = cistring.make_strings(range(K), na)
    ns = len(strs)
    D = ns * ns
    refs = (1 << na) - 1
    sidx = {s: i for i, s in enumerate(strs)}
    h2 = fci.direct_spin1.absorb_h1e(h, g, K, (na, na), 0.5)

    def Hop(v):
        return fci.direct_spin1.contract_2e(h2, v.reshape(ns, ns), K, (na, na)).ravel()

    def excitation_of(s):
        return ([p for p in range(K) if (refs >> p & 1) and not s >> p & 1],
                [p for p in range(K) if (s >> p & 1) and not refs >> p & 1])

    ent = []
    for a, s in enumerate(strs):
        hs, ps = excitation_of(s)
        for j, s2 in enumerate(strs):
            sg, r = apply_str(hs, ps, s2)
            if sg:
                ent.append((sidx[r], j, a, sg))
    ent = np.array(ent)
    tg, sr, ex, sg = ent.T
    sref = np.zeros(ns)
    for (r, j, a, s_) in ent:
        if j == 0:
            sref[a] = s_
    R = (tg[:, None] * ns + tg[None, :]).ravel()
    Cc = (sr[:, None] * ns + sr[None, :]).ravel()
    EX = (ex[:, None] * ns + ex[None, :]).ravel()
    SG = (sg[:, None] * sg[None, :]).ravel()
    srefD = np.outer(sref, sref).ravel()

    def Tmat(t):
        v = SG * t[EX]
        m = v != 0
        return sp.csr_matrix((v[m], (R[m], Cc[m])), shape=(D, D))

    lam = mf.mo_energy
    ws = np.array([sum(lam[p] for p in range(K) if s >> p & 1) - sum(lam[:na]) for s in strs])
    W = (ws[:, None] + ws[None, :]).ravel()
    W[0] = 1.0
    rk = np.array([popc(s ^ refs) // 2 for s in strs])
    RK = (rk[:, None] + rk[None, :]).ravel()
    sw = np.sqrt(W)
    e0 = np.zeros(D)
    e0[0] = 1.0
    P0 = (np.arange(D) > 0).astype(float)

    c = psi / psi[0]
    Cm = Tmat(srefD * np.where(np.arange(D) > 0, c, 0.0))
    v = e0.copy()
    t = np.zeros(D)
    for j in range(1, N + 1):
        v = Cm @ v
        t += (-1) ** (j + 1) * v / j
    t[0] = 0.0
    t = srefD * t
    T = Tmat(t)
    Td = T.T.tocsr()

    def expv(M, x, s=1):
        r = x.copy()
        for k in range(N, 0, -1):
            r = x + s * (M @ r) / k
        return r

    out["log_exp_error"] = float(np.abs(expv(T, e0) - c).max())
    Hs = lambda x: Hop(x) - E * x
    out["residual_inf_at_tstar"] = float(np.abs(P0 * srefD * expv(T, Hs(expv(T, e0)), -1)).max())

    def eig_sym(mv, n, which):
        op = sla.LinearOperator((n, n), matvec=mv, dtype=float)
        if n <= 600:
            M = np.column_stack([mv(col) for col in np.eye(n)])
            ev = np.linalg.eigvalsh(0.5 * (M + M.T))
            return {"SA": ev[0], "LA": ev[-1], "LM": ev[np.argmax(abs(ev))]}[which]
        return sla.eigsh(op, k=1, which=which, tol=1e-11, ncv=60, maxiter=5000)[0][0]

    def smax(mv, rmv, n):
        return np.sqrt(eig_sym(lambda x: rmv(mv(x)), n, "LA"))

    def smin(mv, rmv, n):
        return np.sqrt(max(eig_sym(lambda x: rmv(mv(x)), n, "SA"), 0.0))

    u = psi / sw
    u /= np.linalg.norm(u)

    def Aproj(x0):
        x = x0 - u * (u @ x0)
        y = Hs(x / sw) / sw
        y = y - u * (u @ y)
        return y + 5.0 * u * (u @ x0)

    lam0 = eig_sym(Aproj, D, "SA")
    n1 = smax(lambda x: sw * P0 * expv(T, x / sw, -1), lambda y: expv(Td, sw * P0 * y, -1) / sw, D)
    n2 = smax(lambda x: sw * expv(Td, x / sw, 1), lambda y: expv(T, sw * y, 1) / sw, D)
    hn = abs(eig_sym(lambda x: Hs(x / sw) / sw, D, "LM"))
    tm = smax(lambda x: sw * ((T @ (x / sw)) - (Td @ (x / sw))),
              lambda y: (Td @ (sw * y) - T @ (sw * y)) / sw, D)
    out["full"] = {"lambda0": float(lam0), "beta": float(n1 * n2),
                   "infsup_continuous": float(lam0 / (n1 * n2)),
                   "hnorm": float(hn), "tnorm": float(tm),
                   "gamma_monotone": float(lam0 - hn * tm)}

    def jac_norm(Tp, mask):
        Tpd = Tp.T.tocsr()
        S = srefD * mask
        iw = 1.0 / sw
        mv = lambda x: iw * S * expv(Tp, Hs(expv(Tp, S * iw * x, 1)), -1)
        rmv = lambda y: iw * S * expv(Tpd, Hs(expv(Tpd, S * iw * y, -1)), 1)
        idx = np.nonzero(mask)[0]
        n = len(idx)

        def emb(z):
            full = np.zeros(D)
            full[idx] = z
            return full
        return smin(lambda z: mv(emb(z))[idx], lambda z: rmv(emb(z))[idx], n)

    out["full"]["jac_inv_norm"] = float(jac_norm(T, P0))
    if full_only:
        return out

    rows = []
    for Q in range(1, min(N, max_rank + 1)):
        inV = (RK <= Q).astype(float)
        if inV.min() == 1:
            break
        tP = t * inV
        tP[0] = 0.0
        TP = Tmat(tP)
        TPd = TP.T.tocsr()
        lmin = W[inV == 0].min()
        outm = 1 - inV
        coup = smax(lambda x: outm * Hop(inV * x / sw), lambda y: inV * Hop(outm * y) / sw, D)
        bK = smax(lambda x: sw * outm * expv(TP, inV * expv(TP, inV * x / sw, -1), 1),
                  lambda y: inV * expv(TPd, inV * expv(TPd, outm * sw * y, 1), -1) / sw, D)
        d1 = smax(lambda x: sw * inV * expv(TPd, inV * x / sw, 1),
                  lambda y: inV * expv(TP, inV * sw * y, 1) / sw, D)
        d2 = smax(lambda x: sw * P0 * inV * expv(TP, inV * x / sw, -1),
                  lambda y: inV * expv(TPd, inV * P0 * sw * y, -1) / sw, D)
        r3 = np.sqrt(np.sum(Hs(e0) ** 2 / W))
        r3b = np.sqrt(np.sum(Hs(expv(TP, e0)) ** 2 / W))
        rhs = np.sqrt(lmin) * lam0 / bK
        num = lam0 - coup * bK / np.sqrt(lmin)
        rows.append({"rank": Q, "lambda_min": float(lmin), "coupling_norm": float(coup),
                     "beta_k": float(bK), "smallness_rhs": float(rhs),
                     "smallness_ok": bool(coup < rhs), "denom_dagger": float(d1),
                     "denom_minus": float(d2), "r3_reference": float(r3),
                     "r3_truncated": float(r3b),
                     "gamma_discrete": float((num - r3b) / (d1 * d2)),
                     "jac_inv_norm": float(jac_norm(TP, P0 * inV))})
    out["truncated"] = rows
    return out


def main():
    args = sys.argv[1:]
    path = args[0]
    max_rank = int(args[args.index("--max-rank") + 1]) if "--max-rank" in args else 5
    res = solve(path, full_only="--full-only" in args, constants="--no-constants" not in args,
                max_rank=max_rank)
    print(json.dumps(res, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
