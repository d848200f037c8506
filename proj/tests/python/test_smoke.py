import pytest

import apxgrp


def unipotent(amb):
    return apxgrp.MatSL.from_rows(amb, [[1, 1], [0, 1]])


def test_arithmetic():
    amb = apxgrp.Ambient(2, 5)
    u = unipotent(amb)
    l = apxgrp.MatSL.from_rows(amb, [[1, 0], [1, 1]])
    assert (u * l).rows() == [[2, 1], [1, 1]]
    assert u.inverse().rows() == [[1, 4], [0, 1]]
    assert (u * u.inverse()) == apxgrp.MatSL.identity(amb)
    assert apxgrp.char_poly(apxgrp.MatSL.from_rows(amb, [[2, 0], [0, 3]])).coefficients == [1, 0, 1]
    with pytest.raises(ValueError):
        apxgrp.MatSL.from_rows(amb, [[2, 0], [0, 2]])


def test_growth_and_certificate():
    amb = apxgrp.Ambient(2, 101)
    a = apxgrp.progression(unipotent(amb), 5)
    assert len(a) == 11
    report = apxgrp.growth_report(a, with_certificate=True)
    assert report.tripling == (31, 11)
    assert report.greedy_k <= 5
    x, k = apxgrp.certify_approximate(a)
    assert apxgrp.verify_control(a, a, x, k[0], k[1])


def test_structure():
    amb = apxgrp.Ambient(2, 5)
    g = apxgrp.full_group(amb)
    assert len(g) == 120
    assert len(apxgrp.enumerate_involved_tori(g)) == 25
    t = apxgrp.TorusHandle(apxgrp.MatSL.from_rows(amb, [[2, 0], [0, 3]]))
    assert apxgrp.weyl_order(g, t) == 2
    report = apxgrp.lp_exponent(g, 1, t)
    assert report.variety_kind == "torus" and report.count == 4


def test_cayley():
    s = apxgrp.standard_unipotents(apxgrp.Ambient(2, 3))
    assert apxgrp.diameter(s).group_order == 24
    assert apxgrp.girth(s) > 0
    spec = apxgrp.spectral_gap(s)
    assert spec.converged and spec.generated
    assert 0.0 < spec.gap <= 2.0


def test_errors():
    with pytest.raises(ValueError):
        apxgrp.Ambient(2, 4)
    amb = apxgrp.Ambient(2, 11)
    with pytest.raises(MemoryError):
        g = apxgrp.full_group(amb)
        apxgrp.product(g, g, budget=10)
    with pytest.raises(ValueError):
        apxgrp.is_regular_semisimple(apxgrp.MatSL.identity(apxgrp.Ambient(2, 2)))
