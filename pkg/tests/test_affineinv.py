import pytest

from jetinv.affineinv import (Christoffels, a2, affine_coframe, affine_frame,
                              affine_tresse_coframe, affine_tresse_frame, builtin,
                              connection_tensors, curvature, curve_invariant, hessian, i0, i2,
                              levi_civita, metric_compatible, root, symmetric_differential,
                              theta_expand_affine, theta_expand_affine_root, torsion,
                              volume_coefficient)
from jetinv.jets import JetError, aff2_generators, lie_check
from jetinv.polyalg import VarTable, parse_expression
from jetinv.sl2inv import PLANE, diagonal_weight

A = aff2_generators()
XY = VarTable(("x", "y"))


def test_trivial_connection():
    G = Christoffels.trivial(2)
    T, C = connection_tensors(G)
    assert all(v.is_zero() for v in T.values())
    assert all(v.is_zero() for v in C.values())
    assert G.is_trivial() and G.is_torsion_free()


def test_torsion_detected():
    G = Christoffels(2, {(0, 0, 1): "x"})
    assert not G.is_torsion_free()
    assert torsion(G)[(0, 0, 1)] == parse_expression("x", XY)
    with pytest.raises(JetError):
        symmetric_differential("x*y", G, 2)
    with pytest.raises(JetError):
        Christoffels(2, {(0, 0, 2): 1})


def test_polar_metric_is_flat():
    g = [["1", "0"], ["0", "x^2"]]
    G = levi_civita(g)
    assert G.is_torsion_free()
    assert metric_compatible(g, G)
    assert G[0, 1, 1] == parse_expression("-x", XY)
    assert G[1, 0, 1] == parse_expression("1/x", XY)
    assert all(v.is_zero() for v in curvature(G).values())


def test_hyperbolic_metric_is_curved():
    g = [["1/y^2", "0"], ["0", "1/y^2"]]
    G = levi_civita(g)
    assert metric_compatible(g, G)
    assert any(not v.is_zero() for v in curvature(G).values())
    with pytest.raises(JetError):
        levi_civita([["1", "x"], ["0", "1"]])


def test_symmetric_differential_trivial_connection():
    G = Christoffels.trivial(2)
    t = symmetric_differential("x^3*y", G, 2)
    assert t.component((2, 0)) == parse_expression("6*x*y", XY)
    assert t.component((1, 1)) == parse_expression("3*x^2", XY)
    assert symmetric_differential("x", G, 0).coefficients[(0, 0)] == parse_expression("x", XY)


def test_root_frame_duality_and_volume():
    n1, n2 = affine_frame()
    w1, w2 = affine_coframe()
    one = w1.pair(n1)
    assert one.is_rational() and one.a == 1
    assert w1.pair(n2).is_zero() and w2.pair(n1).is_zero()
    assert w2.pair(n2).a == 1
    assert volume_coefficient() == root() / i2()
    assert n1(i0()) == i2()


def test_root_frame_theta_squares_are_rational_invariants():
    for (i, j), v in theta_expand_affine_root(2).items():
        if v.is_zero():
            continue
        sq = v * v
        assert sq.is_rational()
        assert lie_check(sq.a, A)


def test_tresse_frame_duality():
    tau, om = affine_tresse_frame(), affine_tresse_coframe()
    for i in range(2):
        for j in range(2):
            assert om[i].pair(tau[j]) == (1 if i == j else 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tresse_theta_coefficients(k):
    for (i, j), v in theta_expand_affine(k).items():
        if v.is_zero():
            continue
        assert lie_check(v, A)
        assert diagonal_weight(v, "gamma") == 1 - k


def test_base_invariants():
    assert i0() == PLANE.u(0, 0)
    assert lie_check(i2(), A)


def test_curve_invariants_have_weight_zero():
    assert diagonal_weight(a2(), "gamma") == 0
    for k in (2, 3):
        for i in range(k + 1):
            v = curve_invariant(i, k - i)
            if not v.is_zero():
                assert diagonal_weight(v, "gamma") == 0
                assert lie_check(v, A)


def test_builtins():
    assert builtin("I0") == i0()
    assert builtin("a2") == a2()
    assert builtin("a[1,2]@3") == curve_invariant(1, 2)
    assert builtin("I[2,0]") == theta_expand_affine(2)[(2, 0)]
    with pytest.raises(JetError):
        builtin("a[1,2]@2")
    with pytest.raises(KeyError):
        builtin("zzz")
