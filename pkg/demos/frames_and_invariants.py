"""Build the SL2 invariant frame, expand higher differentials, and check invariance.

Run: python3 demos/frames_and_invariants.py
"""
from jetinv import affineinv, sl2inv, sl3inv
from jetinv.jets import aff2_generators, lie_check, sl2_generators, sl3_generators

n1, n2 = sl2inv.sl2_frame()
print("nabla1 =", n1)
print("nabla2 =", n2)
for k in (2, 3):
    for tau, c in sl2inv.theta_expand_sl2(k).items():
        if c.is_zero():
            continue
        ok = lie_check(c, sl2_generators())
        print(f"I{list(tau)}: weight {sl2inv.weight(c)}, invariant {ok}")

print("affine a2 invariant:", lie_check(affineinv.a2(), aff2_generators()))
print("SL3 Hessian invariant:", lie_check(sl3inv.hessian3(), sl3_generators()))
J = sl3inv.sl3_generators()
print("SL3 frame derivatives of A (J3, J4, J5):", [str(j) for j in J[2:]])
