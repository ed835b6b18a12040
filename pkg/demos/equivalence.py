"""Decide SL2-equivalence of binary forms from generator values.

Run: python3 demos/equivalence.py
"""
from jetinv import formsalg

pairs = [
    (3, "x^3+y^3", "x^3+3*x^2*y+3*x*y^2+2*y^3"),
    (3, "x^3+y^3", "x^3-y^3"),
    (3, "x^3", "x^3"),
    (4, "x^4+y^4", "x^4+6*x^2*y^2+y^4"),
]
for degree, a, b in pairs:
    phi = formsalg.Form.parse(a, 2, degree)
    psi = formsalg.Form.parse(b, 2, degree)
    v = formsalg.sl2_equivalent(phi, psi)
    print(f"{a:10s} vs {b:28s} -> {v.status}  {v.to_dict().get('witness', '')}")
