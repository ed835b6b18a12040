"""Restrict the SL2 invariants to a binary cubic and check the relation among them.

Run: python3 demos/binary_cubic_syzygy.py
"""
from jetinv import formsalg, sl2inv, syzygy

phi = formsalg.Form.parse("a1*x^3 + a2*x^2*y + a3*y^3", 2, 3)
print("cubic:", phi)
print("Delta2 restricted:", formsalg.restrict(sl2inv.delta2(), phi))
print("discriminant:", formsalg.discriminant(phi))

R = syzygy.cubic_relation()
print("relation:", R)
print("holds identically:", syzygy.verify_relation(R, syzygy.cubic_values()))

found = syzygy.discover_cubic(5, True)
print("rediscovered from scratch:", [str(r) for r in found])
