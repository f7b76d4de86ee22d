"""Recover an edge eigenvector overlap from resolvent data alone and compare
with the eigendecomposition."""
from wignerlab import derive_seed, eigendecompose, eigenvector_overlap, gue, reconstruct_overlap, sample_matrix

N = 200
for t in range(5):
    sd = eigendecompose(sample_matrix(gue(N), derive_seed(5, t, "demo")).H)
    r = reconstruct_overlap(sd, 1, 0, 1)
    d = eigenvector_overlap(sd, 1, 0, 1)
    print(f"trial {t}: reconstructed {r.value:.5f}  direct {d:.5f}  gap ok={r.quality}")
