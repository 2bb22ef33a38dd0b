import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultragraph.errors import ModulusOverflow
from ultragraph.index_filter import (
    Decision,
    EmpiricalSet,
    IndexSet,
    SetClass,
    Ultrafilter,
    Undecided,
    boolean_ops,
    from_predicate,
)

EVENS = IndexSet.periodic(2, {0})
ODDS = IndexSet.periodic(2, {1})
ZERO = Ultrafilter.zero()


@st.composite
def index_sets(draw, max_modulus=12, span=24):
    m = draw(st.integers(1, max_modulus))
    res = draw(st.sets(st.integers(0, m - 1)))
    pts = draw(st.sets(st.integers(0, span - 1)))
    flip = draw(st.sets(st.sampled_from(sorted(pts)))) if pts else set()
    return IndexSet(m, res, [n for n in pts if n in flip], [n for n in pts if n not in flip])


@st.composite
def points(draw):
    return Ultrafilter.from_integer(draw(st.integers(0, math.factorial(12) - 1)))


def semantic_horizon(*sets: IndexSet) -> int:
    m = math.lcm(*(s.modulus for s in sets))
    return 3 * m + max(s.exception_bound for s in sets) + 1


class TestExamples:
    def test_member(self):
        assert 4 in EVENS
        assert 5 not in IndexSet.finite({0, 1, 2})
        assert 0 not in IndexSet(2, {0}, removed={0})

    def test_boolean_ops(self):
        assert (EVENS & ODDS).is_empty()
        assert ~IndexSet.finite({0, 1}) == IndexSet.cofinite({0, 1})
        union = IndexSet.periodic(2, {0}) | IndexSet.periodic(3, {0})
        assert union == IndexSet.periodic(6, {0, 2, 3, 4})
        assert [n in union for n in range(12)] == [n % 2 == 0 or n % 3 == 0 for n in range(12)]
        ops = boolean_ops(EVENS, ODDS)
        assert ops.union == IndexSet.everything() and ops.complement == ODDS

    def test_classify(self):
        assert IndexSet.finite({0, 1, 2}).classify() is SetClass.FINITE
        assert IndexSet.cofinite({7}).classify() is SetClass.COFINITE
        assert EVENS.classify() is SetClass.PROPER_PERIODIC

    def test_decide(self):
        assert ZERO.decide(EVENS) is Decision.IN
        assert ZERO.decide(ODDS) is Decision.OUT
        assert Ultrafilter.from_integer(1).decide(ODDS) is Decision.IN
        assert ZERO.decide(IndexSet.finite(range(100))) is Decision.OUT
        assert ZERO.decide(IndexSet.cofinite(range(100))) is Decision.IN

    def test_modulus_overflow(self):
        with pytest.raises(ModulusOverflow):
            ZERO.decide(IndexSet.periodic(13, {0}))
        shallow = Ultrafilter.zero(depth=3)
        with pytest.raises(ModulusOverflow):
            shallow.decide(IndexSet.periodic(4, {0}))

    def test_from_predicate(self):
        evens = from_predicate(64, lambda n: n % 2 == 0)
        assert isinstance(evens, EmpiricalSet) and evens.index_set == EVENS and evens.empirical
        head = from_predicate(64, lambda n: n < 5)
        assert isinstance(head, EmpiricalSet) and head.index_set == IndexSet.finite(range(5))

    def test_primes_are_undecided(self):
        def is_prime(n):
            return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))

        result = from_predicate(64, is_prime)
        assert isinstance(result, Undecided)
        assert result.bitmap[:8] == (False, False, True, True, False, True, False, True)

    def test_from_predicate_exception_budget(self):
        # the budget is 64/8 = 8 head deviations: 6 are tolerated, 9 are not
        assert isinstance(from_predicate(64, lambda n: n < 9 or n % 3 == 0, hint=3), EmpiricalSet)
        assert isinstance(from_predicate(64, lambda n: (n < 18 and n % 2 == 0) != (n % 2 == 1), hint=2), Undecided)

    def test_point_json_and_validation(self):
        p = Ultrafilter.from_integer(12345)
        assert Ultrafilter.from_json(p.to_json()) == p
        with pytest.raises(ValueError):
            Ultrafilter((0, 1, 0))
        with pytest.raises(ValueError):
            Ultrafilter.from_json({"factorial_residues": [0, 5]})
        with pytest.raises(ValueError):
            Ultrafilter.from_json({})

    def test_set_json_round_trip(self):
        s = IndexSet(6, {1, 4}, added={0}, removed={7})
        assert IndexSet.from_json(s.to_json()) == s
        assert s.to_json()["class"] == "proper_periodic"


# -- properties --------------------------------------------------------------------------------


@given(index_sets(), index_sets())
def test_boolean_ops_are_pointwise(a, b):
    for n in range(semantic_horizon(a, b)):
        assert (n in (a | b)) == (n in a or n in b)
        assert (n in (a & b)) == (n in a and n in b)
        assert (n in (a - b)) == (n in a and n not in b)
        assert (n in (a ^ b)) == ((n in a) != (n in b))
        assert (n in ~a) == (n not in a)


@given(index_sets())
def test_canonical_form_is_idempotent(s):
    again = IndexSet(s.modulus, s.residues, s.added, s.removed)
    assert again == s
    assert not (s.added & s.removed)
    assert all(not s.periodic_member(n) for n in s.added)
    assert all(s.periodic_member(n) for n in s.removed)


@given(index_sets(max_modulus=6), st.integers(1, 4))
def test_semantically_equal_sets_share_form(s, k):
    # same set written with a multiple of its modulus
    m = s.modulus * k
    inflated = IndexSet(m, {r for r in range(m) if s.periodic_member(r)}, s.added, s.removed)
    assert inflated == s and hash(inflated) == hash(s)


@given(index_sets(), points())
def test_decide_ignores_exceptions(s, f):
    bare = IndexSet(s.modulus, s.residues)
    assert f.decide(s) == f.decide(bare)


@given(index_sets(), index_sets(), points())
def test_ultrafilter_laws_sampled(a, b, f):
    assert (f.decide(a) is Decision.IN) != (f.decide(~a) is Decision.IN)
    if f.contains(a) and f.contains(b):
        assert f.contains(a & b)
    if f.contains(a):
        assert f.contains(a | b)
    if a.classify() is SetClass.FINITE:
        assert not f.contains(a)


@given(index_sets(max_modulus=6, span=20))
def test_from_predicate_recovers_small_periodic_sets(s):
    # exceptions below window/8 and modulus within the quorum limit are always recovered
    result = from_predicate(160, s.__contains__)
    assert isinstance(result, EmpiricalSet)
    assert result.index_set == s
