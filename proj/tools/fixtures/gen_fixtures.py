# Copyright 2026 The ccwp Authors
# SPDX-License-Identifier: Apache-2.0
"""Generate the molecular FCIDUMP fixtures shipped in data/fixtures.

Integrals are expressed in the Loewdin-orthogonalized atomic-orbital basis so
that the SCF module has real work to do. The core energy record carries the
nuclear repulsion. Geometries are experimental equilibrium structures in
Angstrom and are written next to each FCIDUMP as an .xyz file.

Usage: python3 gen_fixtures.py [outdir]
"""
import os
import sys

import numpy as np
from pyscf import ao2mo, gto

FIXTURES = {
    "h2_sto6g": ("sto-6g", [("H", 0, 0, 0), ("H", 0, 0, 0.7414)]),
    "lih_631g": ("6-31g", [("Li", 0, 0, 0), ("H", 0, 0, 1.5949)]),
    "beh2_sto6g": ("sto-6g", [("Be", 0, 0, 0), ("H", 0, 0, 1.3264), ("H", 0, 0, -1.3264)]),
    "bh3_sto6g": ("sto-6g", [("B", 0, 0, 0), ("H", 0, 1.19, 0),
                             ("H", 1.0306, -0.595, 0), ("H", -1.0306, -0.595, 0)]),
    "hf_631g": ("6-31g", [("H", 0, 0, 0), ("F", 0, 0, 0.9168)]),
    "h2o_sto6g": ("sto-6g", [("O", 0, 0, 0.1173), ("H", 0, 0.7572, -0.4692),
                             ("H", 0, -0.7572, -0.4692)]),
    "nh3_sto6g": ("sto-6g", [("N", 0, 0, 0.1111), ("H", 0, 0.9377, -0.2592),
                             ("H", 0.8121, -0.4689, -0.2592), ("H", -0.8121, -0.4689, -0.2592)]),
    "n2_sto6g": ("sto-6g", [("N", 0, 0, 0), ("N", 0, 0, 1.0977)]),
    "co_sto6g": ("sto-6g", [("C", 0, 0, 0), ("O", 0, 0, 1.128)]),
}


def write_fcidump(path, h, eri, ecore, norb, nelec):
    with open(path, "w") as f:
        f.write(f"&FCI NORB={norb},NELEC={nelec},MS2=0,\n")
        f.write(" ORBSYM=" + ",".join(["1"] * norb) + ",\n")
        f.write(" ISYM=1,\n&END\n")
        for p in range(norb):
            for q in range(p + 1):
                for r in range(norb):
                    for s in range(r + 1):
                        if p * (p + 1) // 2 + q < r * (r + 1) // 2 + s:
                            continue
                        v = eri[p, q, r, s]
                        if abs(v) > 1e-14:
                            f.write(f"{v: .16E} {p + 1} {q + 1} {r + 1} {s + 1}\n")
        for p in range(norb):
            for q in range(p + 1):
                if abs(h[p, q]) > 1e-14:
                    f.write(f"{h[p, q]: .16E} {p + 1} {q + 1} 0 0\n")
        f.write(f"{ecore: .16E} 0 0 0 0\n")


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "..", "data", "fixtures")
    os.makedirs(outdir, exist_ok=True)
    for name, (basis, atoms) in FIXTURES.items():
        mol = gto.M(atom=[(a, (x, y, z)) for a, x, y, z in atoms], basis=basis,
                    unit="Angstrom", verbose=0)
        s = mol.intor("int1e_ovlp")
        e, v = np.linalg.eigh(s)
        x = v @ np.diag(e ** -0.5) @ v.T
        h = x.T @ mol.intor("int1e_kin") @ x + x.T @ mol.intor("int1e_nuc") @ x
        norb = x.shape[1]
        eri = ao2mo.restore(1, ao2mo.kernel(mol, x), norb)
        write_fcidump(os.path.join(outdir, name + ".fcidump"), h, eri,
                      mol.energy_nuc(), norb, mol.nelectron)
        with open(os.path.join(outdir, name + ".xyz"), "w") as f:
            f.write(f"{len(atoms)}\n{name} basis={basis} unit=Angstrom\n")
            for a, xx, yy, zz in atoms:
                f.write(f"{a:2s} {xx: .6f} {yy: .6f} {zz: .6f}\n")
        print(name, "norb", norb, "nelec", mol.nelectron)


if __name__ == "__main__":
    main()
