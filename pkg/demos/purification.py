"""Purify the qutrit and ququint [[3,1,2]] codes into AME states."""

import numpy as np

from mixedstab import em_r, fixture, is_ame, purify

q3 = fixture("q312_3")
phi = purify(q3.basis[:2], 2)
print("phi23 from the qutrit code:", phi.allclose(fixture("phi23")))
support = np.flatnonzero(np.abs(phi.amplitudes) > 1e-12)
print("  support size", len(support), "amplitude", abs(phi.amplitudes[support[0]]))
print("  AME:", is_ame(phi).verdict, " EM_6 =", round(em_r(phi, 6).value, 12))

q5 = fixture("q312_5")
for r in range(2, 6):
    phi = purify(q5.basis[:r], r)
    print(f"phi{r}5: matches fixture {phi.allclose(fixture(f'phi{r}5'), atol=1e-12)}, AME {is_ame(phi).verdict}")
