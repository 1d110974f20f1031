"""
The constants c_p, w_p and the variance coefficient a_p
=======================================================

c_p and w_p are alternating binomial sums that lose about p bits to
cancellation, so they are evaluated with mpmath at p + 128 bits or more.
"""
import mpmath

from mincollector import conjecture_scan, constants

for p in (1, 2, 3, 5, 10, 50, 200):
    cc = constants(p)
    print(f"p={p:3d}  c_p={mpmath.nstr(cc.c_p, 15):>20}  w_p={mpmath.nstr(cc.w_p, 15):>20}  "
          f"a_p={mpmath.nstr(cc.a_p, 12):>16}  bits={cc.precision_bits} lost~{cc.cancellation_bits}")

# a_2 has a closed form: pi^2/6 - 2 ln^2 2
with mpmath.workprec(256):
    print("\na_2 closed form:", mpmath.nstr(mpmath.pi**2 / 6 - 2 * mpmath.log(2) ** 2, 20))
print("a_2 computed:   ", mpmath.nstr(constants(2).a_p, 20))

# the scan checks positivity and strict decrease of a_p
rep = conjecture_scan(120)
print("\nscan up to p=120 ok:", rep.ok)
for p, e in rep.diagnostic.items():
    print(f"  diagnostic at p={p:3d}: {mpmath.nstr(e, 10)}")
