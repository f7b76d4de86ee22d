"""Compare the top-left component of the lowest eigenvector under Gaussian
and Rademacher entries, printing the KS distance for growing N.

Run: python demos/edge_universality.py [trials]
"""
import sys

from wignerlab import ObservableSpec, universality_experiment, wigner_ensemble

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 300
obs = ObservableSpec((("1", 0, 0),), (), "edge")
rep = universality_experiment(lambda N: wigner_ensemble(N, "gaussian"),
                              lambda N: wigner_ensemble(N, "rademacher"),
                              obs, [50, 100, 200], trials, root_seed=1)
for r in rep.results:
    print(f"N={r.N:4d}  KS={list(r.ks.values())[0]:.4f}  mean diff={r.difference:+.4f}")
