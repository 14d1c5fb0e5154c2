"""Photon statistics of su(1,1) coherent states.

The mean photon number grows like |z| for large |z| (rather than |z|^2 for
the ordinary coherent state), and the Mandel parameter starts at 0, dips
monotonically and settles near -1/2. The beam splitter halves Q in each
output port.
"""
from scipy import special

from nlcoherent.algebra import AlgebraSpec
from nlcoherent.beamsplitter import channel_marginal
from nlcoherent.states import coherent_state, photon_distribution, photon_statistics

SU11 = AlgebraSpec.su11()

print(f"{'|z|':>8} {'<n>':>10} {'Bessel <n>':>11} {'Q':>9} {'channel Q':>10} {'cutoff':>7}")
for z in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.7442, 30.0]:
    st = coherent_state(SU11, z)
    p = photon_distribution(st)
    stats = photon_statistics(p)
    channel = photon_statistics(channel_marginal(p))
    closed = z * special.ive(2, 2 * z) / special.ive(1, 2 * z) if z else 0.0
    print(f"{z:8.4f} {stats.mean:10.5f} {closed:11.5f} {stats.mandel_q:9.5f} {channel.mandel_q:10.5f} {st.cutoff:7d}")
