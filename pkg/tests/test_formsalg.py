import random
from fractions import Fraction

import pytest

from jetinv.formsalg import (Form, FormError, algebraic_invariant, bracket_resultant, discriminant,
                             form_from_factors, hankel_apolar, hankel_determinant,
                             quartic_invariants, restrict, resultant_convention_constant,
                             sl2_equivalent, sylvester_matrix, sylvester_resultant)
from jetinv.jets import JetContext, JetError
from jetinv.polyalg import parse_expression
from jetinv.sl2inv import delta2

P = JetContext(2, 2)


def unimodular(rng):
    a, b = rng.randint(-3, 3), rng.randint(-3, 3)
    return [[1 + a * b, a], [b, 1]]


def test_parse_polynomial_and_assignments():
    f = Form.parse("x^3 + 3*x*y^2")
    assert f.degree == 3
    # b_σ = σ! times the monomial coefficient
    assert f.coefficients[(3, 0)] == 6 and f.coefficients[(1, 2)] == 6
    g = Form.parse("b[3,0]=6; b[1,2]=6")
    assert f == g
    assert Form.parse("b[2,0]=1, b[0,2]=-1") == Form.parse("x^2/2 - y^2/2")


def test_parse_rejects_bad_input():
    with pytest.raises(FormError):
        Form.parse("x^3 + y")
    with pytest.raises(FormError):
        Form.parse("b[1,0]=1; b[2,0]=1")
    with pytest.raises(FormError):
        Form.parse("c[1,0]=1")


def test_generic_and_polynomial():
    g = Form.generic(2)
    assert str(g.polynomial()) == str(parse_expression("b[2,0]*x^2/2 + b[1,1]*x*y + b[0,2]*y^2/2",
                                                       g.polynomial().table))
    assert not g.is_rational()
    assert Form.parse("x*y").is_rational()


def test_transform_is_composition_with_inverse():
    f = Form.parse("x^2")
    # φ∘A^{-1} with A = [[1,1],[0,1]]: A^{-1}(x, y) = (x - y, y)
    assert f.transform([[1, 1], [0, 1]]) == Form.parse("(x - y)^2")
    with pytest.raises(FormError):
        f.transform([[2, 0], [0, 1]])
    with pytest.raises(FormError):
        f.transform([[1]])


def test_restriction_of_hessian():
    assert restrict(delta2(), Form.parse("x^3 + y^3")) == parse_expression(
        "36*x*y", restrict(delta2(), Form.parse("x^3 + y^3")).table)


def test_restricted_quadric_discriminant():
    # the Hessian of the cubic is a quadric whose discriminant is -16 Discr
    phi = Form.parse("x^3 + a1*x^2*y + a2*x*y^2 + a3*y^3")
    q = restrict(delta2(), phi)
    quad = Form.from_polynomial(q, 2, 2)
    assert discriminant(quad) == -16 * discriminant(phi)


def test_algebraic_invariant():
    inv = algebraic_invariant(delta2(), 2)
    assert str(inv) == "b[2,0]*b[0,2] - b[1,1]^2"
    with pytest.raises((FormError, JetError)):
        algebraic_invariant(P.parse("u[1,0]"), 2)


def test_sylvester_matrix_shape():
    M = sylvester_matrix([1, 2, 3], [4, 5])
    assert len(M) == 3 and all(len(r) == 3 for r in M)


def test_resultant_small_cases():
    assert sylvester_resultant(Form.parse("x^2 - y^2"), Form.parse("x*y")) == -1
    assert sylvester_resultant(Form.parse("x*(x - y)"), Form.parse("x - y")) == 0
    assert bracket_resultant([(1, 1), (1, -1)], [(1, 0), (0, 1)]) == -1


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 5) for m in range(1, 5)])
def test_convention_constant_is_one(n, m):
    assert resultant_convention_constant(n, m) == 1


def test_resultant_invariance():
    rng = random.Random(3)
    for n, m in ((2, 3), (3, 3), (4, 2)):
        phi = Form(2, n, {(i, n - i): rng.randint(-4, 4) for i in range(n + 1)})
        psi = Form(2, m, {(i, m - i): rng.randint(-4, 4) for i in range(m + 1)})
        r = sylvester_resultant(phi, psi)
        for _ in range(5):
            A = unimodular(rng)
            assert sylvester_resultant(phi.transform(A), psi.transform(A)) == r


def test_split_forms_match_bracket_product():
    fp, fq = [(1, 2), (3, -1)], [(2, 5), (1, 1), (0, 1)]
    syl = sylvester_resultant(form_from_factors(fp), form_from_factors(fq))
    assert syl == bracket_resultant(fp, fq)


def test_discriminants():
    assert discriminant(Form.parse("x^3 + y^3")) == 81
    assert discriminant(Form.parse("x^2*y")) == 0
    phi = Form.parse("x^3 + a1*x^2*y + a2*x*y^2 + a3*y^3")
    expected = parse_expression("12*a1^3*a3 - 3*a1^2*a2^2 - 54*a1*a2*a3 + 12*a2^3 + 81*a3^2",
                                discriminant(phi).table)
    assert discriminant(phi) == expected


def test_quartic_invariants():
    alpha, delta = quartic_invariants(Form.parse("x^4 + y^4"))
    assert alpha == -576 and delta == 0
    g = Form.generic(4)
    assert quartic_invariants(g)[0] == hankel_apolar()
    assert quartic_invariants(g)[1] == hankel_determinant()
    rng = random.Random(8)
    phi = Form(2, 4, {(i, 4 - i): rng.randint(-3, 3) for i in range(5)})
    psi = phi.transform(unimodular(rng))
    assert quartic_invariants(phi) == quartic_invariants(psi)


def test_equivalence():
    f = Form.parse("x^3 + 2*x*y^2 + y^3")
    v = sl2_equivalent(f, f.transform([[2, 1], [1, 1]]))
    assert v.status == "equivalent"
    assert sl2_equivalent(Form.parse("x^3 + y^3"), Form.parse("x^3 + 2*y^3")).status == "inequivalent"
    assert sl2_equivalent(Form.parse("x^3"), Form.parse("x^3 + y^3")).status == "irregular"
    assert sl2_equivalent(Form.parse("x^4 + y^4"), Form.parse("x^3 + y^3")).status == "inequivalent"
    q = sl2_equivalent(Form.parse("x^4 + y^4"), Form.parse("x^4 + 2*y^4"))
    assert q.status == "inequivalent" and q.notes
    assert sl2_equivalent(Form.parse("x^4"), Form.parse("x^4")).status == "irregular"
    assert set(v.to_dict()) == {"status", "witness", "notes"}


def test_equivalence_errors():
    with pytest.raises(FormError):
        sl2_equivalent(Form.generic(3), Form.parse("x^3"))
    with pytest.raises(FormError):
        sl2_equivalent(Form.parse("x^5"), Form.parse("y^5"))
