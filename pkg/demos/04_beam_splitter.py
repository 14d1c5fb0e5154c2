"""Joint photon counts behind a 50:50 beam splitter.

A coherent input leaves two independent Poisson ports. A Fock input is
spread along the anti-diagonal n + m = N. The su(1,1) state sits in
between: its counts are correlated, squeezed along the diagonal, and the
joint distribution peaks at half the mean photon number.
"""
import numpy as np

from nlcoherent.beamsplitter import channel_report, factorization_test, joint_coherent, joint_fock, joint_su11

cases = {
    "coherent |z|=4": joint_coherent(4.0),
    "Fock n=16": joint_fock(16),
    "su(1,1) |z|=16.7442": joint_su11(16.7442),
}

for label, joint in cases.items():
    rep = channel_report(joint)
    fac = factorization_test(joint)
    peak = np.unravel_index(np.argmax(joint.probs), joint.probs.shape)
    print(label)
    print(f"  port means {rep.horizontal.mean:.4f} / {rep.vertical.mean:.4f}, covariance {rep.covariance:.4f}")
    print(f"  var(n + m) {rep.total_variance:.4f}, mutual information {rep.mutual_information:.4g} nats")
    print(f"  separable: {fac.separable}, peak at {tuple(int(k) for k in peak)}\n")
