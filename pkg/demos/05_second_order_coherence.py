"""Second-order coherence after the beam splitter.

Thinning by a lossless 50:50 splitter preserves g2, so each port shows the
input value. For the Fock state |n> this is 1 - 1/n; for su(1,1) states it
is I1 I3 / I2^2 at argument 2|z|, which climbs to 1 as |z| grows.
"""
from scipy import special

from nlcoherent.beamsplitter import channel_report, joint_fock, joint_su11

print("Fock inputs")
for n in (1, 2, 3, 5, 10, 20):
    g2 = channel_report(joint_fock(n)).g2_horizontal
    print(f"  n={n:2d}  g2={g2:.6f}  1-1/n={1 - 1 / n:.6f}")

print("su(1,1) inputs")
for z in (0.5, 1.0, 2.0, 4.0, 10.0, 30.0):
    g2 = channel_report(joint_su11(z)).g2_horizontal
    x = 2 * z
    closed = special.ive(1, x) * special.ive(3, x) / special.ive(2, x) ** 2
    print(f"  |z|={z:5.1f}  g2={g2:.6f}  Bessel ratio={closed:.6f}")
