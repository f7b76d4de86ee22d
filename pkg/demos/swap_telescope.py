"""Walk the entry-by-entry swap from a GUE sample to a Rademacher sample and
show that the per-step changes of the smallest eigenvalue add up exactly.
"""
import numpy as np

from wignerlab import COMPLEX, gue, telescope_decompose, wigner_ensemble
from wignerlab.ensembles import assemble_matrix, sample_entries

N = 12
spec_v, spec_w = gue(N), wigner_ensemble(N, "rademacher", COMPLEX)
v, w = sample_entries(spec_v, 3), sample_entries(spec_w, 4)


def lam1(H):
    return float(np.linalg.eigvalsh(H)[0])


tel = telescope_decompose(v, w, lam1, spec_v)
print(f"{len(tel.differences)} swaps, largest single step {np.abs(tel.differences).max():.3e}")
print(f"sum of steps        {tel.total:+.15f}")
print(f"F(H^v) - F(H^w)     {lam1(assemble_matrix(v, spec_v)) - lam1(assemble_matrix(w, spec_w)):+.15f}")
