#!/usr/bin/env python3
"""Regenerate the FCIDUMP corpus under data/ with PySCF (RHF orbitals, minimal basis).

Writes one FCIDUMP per geometry plus data/PROVENANCE.md with the RHF and
PySCF FCI energies used as external cross-checks.
"""
import os
import sys

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")


def h_chain(n, spacing):
    return "; ".join(f"H 0 0 {i * spacing:.6f}" for i in range(n))


SYSTEMS = [
    ("h2_sto3g", "H 0 0 0; H 0 0 0.74"),
    ("h4_chain_sto3g", h_chain(4, 0.90)),
    ("h4_chain_stretched_sto3g", h_chain(4, 1.80)),
    ("lih_sto3g", "Li 0 0 0; H 0 0 1.595"),
    ("beh2_sto3g", "Be 0 0 0; H 0 0 1.326; H 0 0 -1.326"),
]
# H4 chain stretch used by the PEC example (equilibrium spacing ~0.90 A).
for r in (0.90, 1.20, 1.50, 1.80, 2.10):
    SYSTEMS.append((f"h4_pec_{r:.2f}", h_chain(4, r)))


def main():
    os.makedirs(OUT, exist_ok=True)
    rows = []
    for name, atom in SYSTEMS:
        mol = gto.M(atom=atom, basis="sto-3g", unit="Angstrom", verbose=0)
        mf = scf.RHF(mol).run(conv_tol=1e-12)
        path = os.path.join(OUT, f"{name}.fcidump")
        fcidump.from_scf(mf, path, tol=1e-14)
        e_fci = fci.FCI(mf).kernel()[0]
        rows.append((name, atom, mol.nao, mol.nelectron, mf.e_tot, e_fci))
        print(f"{name}: norb={mol.nao} nelec={mol.nelectron} "
              f"E_RHF={mf.e_tot:.10f} E_FCI={e_fci:.10f}", file=sys.stderr)
    with open(os.path.join(OUT, "PROVENANCE.md"), "w") as f:
        f.write("# FCIDUMP corpus\n\n")
        f.write("Generated by `tools/make_fcidumps.py` with PySCF "
                "(RHF canonical orbitals, STO-3G, geometries in Angstrom).\n\n")
        f.write("| file | geometry | norb | nelec | E_RHF (Ha) | E_FCI PySCF (Ha) |\n")
        f.write("|---|---|---|---|---|---|\n")
        for name, atom, norb, nelec, ehf, efci in rows:
            f.write(f"| {name}.fcidump | `{atom}` | {norb} | {nelec} | "
                    f"{ehf:.10f} | {efci:.10f} |\n")


if __name__ == "__main__":
    main()
