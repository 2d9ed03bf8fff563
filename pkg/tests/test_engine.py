import json
from fractions import Fraction as F

import pytest

from a22ps.algebra import Element
from a22ps.exact import I
from a22ps.engine import CacheCorruption, DimCache, dim_table, quotient_dim, rank
from a22ps.graded import Box, TruncationError
from a22ps.presentation import ExtraForm, IdealSpec, member_of_ideal

E = Element.parse
BOX = Box(4, 12)


def test_quotient_dim_examples():
    assert quotient_dim(IdealSpec(1, 0), (1, 1), BOX) == 1
    assert quotient_dim(IdealSpec(1, 1), (1, 1), BOX) == 0
    assert quotient_dim(IdealSpec(1, 0), (2, 4), BOX) == 1
    assert quotient_dim(IdealSpec(1, 0), (2, 2), BOX) == 0
    for k in (1, 2):
        for i in range(k + 1):
            assert quotient_dim(IdealSpec(k, i), (0, 0), BOX) == 1


def test_quotient_dim_outside_box():
    with pytest.raises(TruncationError):
        quotient_dim(IdealSpec(1, 0), (5, 0), BOX)


def test_rank_examples():
    assert rank([E("x1(-1/4)^2"), E("2 x1(-1/4)^2")], (2, 2)) == 1
    assert rank([], (3, 7)) == 0
    assert rank([E("x1(-3/4) x1(-1/4) + 1/2 x12(-1)"), E("x12(-1)")], (2, 4)) == 2
    assert rank([E("x12(-1)").scale(I), E("x12(-1)")], (2, 4)) == 1
    with pytest.raises(ValueError):
        rank([E("x12(-1)")], (2, 2))


def test_level_one_table_matches_hand_count():
    # x1(-1/4)^n x12 words die; charge-one piece is spanned by x1(-(2n+1)/4)
    t = dim_table(IdealSpec(1, 0), BOX)
    assert [t[(1, w)] for w in range(13)] == [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]
    assert t[(2, 2)] == 0 and t[(2, 4)] == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_power_form_agrees_for_low_i(k):
    box = Box(4, 10)
    for i in range(min(k, 1) + 1):
        a = dim_table(IdealSpec(k, i, extra_form=ExtraForm.SumFamily), box)
        b = dim_table(IdealSpec(k, i, extra_form=ExtraForm.PowerForm), box)
        assert a.entries == b.entries


@pytest.mark.parametrize("k, i", [(2, 2), (3, 2), (3, 3)])
def test_power_form_misses_low_charge_extras(k, i):
    # x1(-1/4)^(k-i) x12(-1) has charge k+2-i <= k, below every J generator,
    # and is not a left multiple of x1(-1/4)^(k+1-i)
    e = E(" ".join(["x1(-1/4)"] * (k - i) + ["x12(-1)"]))
    box = Box(5, 12)
    assert member_of_ideal(IdealSpec(k, i, extra_form=ExtraForm.SumFamily), e, box)
    assert not member_of_ideal(IdealSpec(k, i, extra_form=ExtraForm.PowerForm), e, box)


def test_dims_decrease_with_i():
    box = Box(5, 12)
    tables = [dim_table(IdealSpec(2, i), box) for i in range(3)]
    for b in box.bidegrees():
        assert tables[0][b] >= tables[1][b] >= tables[2][b]


def test_cache_round_trip(tmp_path):
    cache = DimCache(tmp_path)
    spec = IdealSpec(1, 0)
    cold = dim_table(spec, BOX, cache)
    files = sorted(tmp_path.rglob("*.json"))
    assert len(files) == len(list(BOX.bidegrees()))
    warm = dim_table(spec, BOX, cache)
    assert cold.to_json() == warm.to_json()
    assert not list(tmp_path.rglob(".tmp-*"))


def test_cache_hit_is_used(tmp_path):
    cache = DimCache(tmp_path)
    spec = IdealSpec(1, 0)
    d = dict(spec.descriptor())
    cache.put(d, (1, 1), 7, 0, 7)
    assert quotient_dim(spec, (1, 1), BOX, cache) == 7


@pytest.mark.parametrize("payload", ["{not json", json.dumps({"dim": 1}), None, "neg"])
def test_cache_corruption_detected(tmp_path, payload):
    cache = DimCache(tmp_path)
    spec = IdealSpec(1, 0)
    quotient_dim(spec, (2, 4), BOX, cache)
    path = cache.path(spec.descriptor(), (2, 4))
    good = json.loads(path.read_text())
    if payload is None:
        good["rank"] += 1
        payload = json.dumps(good)
    elif payload == "neg":
        good["dim"] = -1
        payload = json.dumps(good)
    path.write_text(payload)
    with pytest.raises(CacheCorruption):
        quotient_dim(spec, (2, 4), BOX, cache)


def test_descriptors_separate_conventions(tmp_path):
    from a22ps.presentation import Convention
    cache = DimCache(tmp_path)
    a = IdealSpec(1, 0, Convention.MNeg).descriptor()
    b = IdealSpec(1, 0, Convention.ArgNeg).descriptor()
    assert cache.path(a, (1, 1)) != cache.path(b, (1, 1))
