import pytest

from jetinv import sl3inv
from jetinv.jets import JetError, lie_check, sl3_generators, total_differential

G = sl3_generators()


def test_hessian_is_invariant():
    assert lie_check(sl3inv.hessian3(), G)


def test_total_differential_of_hessian_matches_display():
    dA = total_differential(sl3inv.hessian3()).coefficients
    assert all(a == b for a, b in zip(dA, sl3inv.printed_dA()))


def test_coframe_orthogonality():
    w1, w2, w3 = sl3inv.sl3_coframe()
    assert sl3inv.inverse_pairing(w1, w3).is_zero()
    assert sl3inv.inverse_pairing(w2, w3).is_zero()
    assert not sl3inv.inverse_pairing(w1, w1).is_zero()


def test_frame_is_dual():
    coframe, frame = sl3inv.sl3_coframe(), sl3inv.sl3_frame()
    for i in range(3):
        for j in range(3):
            assert coframe[i].pair(frame[j]) == (1 if i == j else 0)


def test_generator_values():
    J1, J2, J3, J4, J5 = sl3inv.sl3_generators()
    assert J1 == sl3inv.SPACE.u(0, 0, 0)
    assert J2 == sl3inv.hessian3()
    assert J3.is_zero() and J5.is_zero()
    assert J4 == 1


def test_first_order_theta_coefficients():
    assert sl3inv.theta_coefficient_sl3((1, 0, 0)) == 1
    assert sl3inv.theta_coefficient_sl3((0, 1, 0)).is_zero()
    assert sl3inv.theta_coefficient_sl3((0, 0, 1)).is_zero()


def test_second_order_coefficient_is_invariant():
    assert lie_check(sl3inv.theta_coefficient_sl3((1, 1, 0)), G)


def test_builtins():
    assert sl3inv.builtin("A") == sl3inv.hessian3()
    assert sl3inv.builtin("J4") == 1
    assert sl3inv.builtin("omega2") is sl3inv.sl3_coframe()[1]
    assert sl3inv.builtin("I[1,0,0]@1") == 1
    with pytest.raises(JetError):
        sl3inv.builtin("I[1,0,0]@2")
    with pytest.raises(KeyError):
        sl3inv.builtin("J9")
    with pytest.raises(JetError):
        sl3inv.theta_expand_sl3(-1)
