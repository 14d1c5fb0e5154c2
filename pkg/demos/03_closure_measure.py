"""The radial measure behind the resolution of identity.

For a polynomial E the measure is a Meijer G density. Its moments must
reproduce the E-factorials; the last table shows that the coherent-state
projectors then integrate to the identity on a truncated space.
"""
from nlcoherent.algebra import AlgebraSpec
from nlcoherent.completeness import measure_density, resolution_of_identity_check, verify_moments

specs = {
    "identity": AlgebraSpec.identity(),
    "su(1,1)": AlgebraSpec.su11(),
    "linear, delta=0.5": AlgebraSpec.polynomial([1.0], [0.5]),
    "cubic": AlgebraSpec.polynomial([1.0, 1.0, 1.0], [0.0, 0.5, 1.5]),
}

for label, spec in specs.items():
    dens = ", ".join(f"{measure_density(spec, x):.4g}" for x in (0.1, 1.0, 10.0))
    print(f"{label}: density at 0.1, 1, 10 = {dens}")

print()
for label, spec in specs.items():
    n_max = 3 if label == "cubic" else 10
    rep = verify_moments(spec, n_max, quad_tol=1e-10)
    print(f"{label}: moments 0..{n_max}, worst relative error {rep.max_relative_error:.2e}")

print()
for label in ("identity", "su(1,1)"):
    gap = resolution_of_identity_check(specs[label], 12)
    print(f"{label}: max |<n|closure|n> - 1| on 13 levels = {gap:.2e}")
