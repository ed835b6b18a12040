import time

import pytest

from jetinv.formsalg import Form
from jetinv.polyalg import RatFunc, VarTable
from jetinv.syzygy import (CUBIC_WEIGHTS, BudgetExceeded, Relation, cubic_relation, cubic_values,
                           discover_cubic, discover_relation, quartic_relation, quartic_values,
                           verify_relation)

T = VarTable(("x",))
x = RatFunc.var(T, "x")


def test_relation_parse_and_normalize():
    R = Relation.parse("-2*Z0^2 + 4*Z1", ("Z0", "Z1"))
    assert str(R) == "Z0^2 - 2*Z1 = 0"
    assert R.degree == 2 and R.slots == ("Z0", "Z1")
    with pytest.raises(ValueError):
        Relation.parse("Z0 - Z0", ("Z0",))
    with pytest.raises(ValueError):
        Relation.parse("1/Z0", ("Z0",))


def test_verify_relation():
    R = Relation.parse("Z0^2 + Z1 - 1", ("Z0", "Z1"))
    assert verify_relation(R, [x, 1 - x * x])
    assert not verify_relation(R, [x, x])
    with pytest.raises(ValueError):
        verify_relation(R, [x])


def test_discover_simple():
    found = discover_relation([x, 1 - x * x], 2)
    assert [str(r) for r in found] == ["Z0^2 + Z1 - 1 = 0"]
    found = discover_relation([x / (x + 1), 1 / (x + 1)], 1)
    assert [str(r) for r in found] == ["Z0 + Z1 - 1 = 0"]
    assert discover_relation([x, x * x * x], 2) == []


def test_discover_respects_deadline():
    with pytest.raises(BudgetExceeded):
        discover_relation(cubic_values(), 5, CUBIC_WEIGHTS, deadline=time.monotonic() - 1)


def test_known_relations_hold():
    assert verify_relation(cubic_relation(), cubic_values())
    assert verify_relation(cubic_relation(), cubic_values(Form.generic(3)))
    assert verify_relation(quartic_relation(), quartic_values())


def test_relation_fails_on_wrong_constant():
    R = Relation.parse("Z0^5 + Z1^2*Z0^2 - 8*D*Z2^2", ("Z0", "Z1", "Z2", "D"))
    assert not verify_relation(R, cubic_values())


def test_rediscover_cubic():
    found = discover_cubic(5)
    assert len(found) == 1
    assert found[0].poly == cubic_relation().poly
    assert discover_cubic(4) == []


def test_rediscover_without_weights():
    found = discover_cubic(5, use_weights=False)
    assert [r.poly for r in found] == [cubic_relation().poly]
