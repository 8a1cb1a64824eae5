import json
from fractions import Fraction

import pytest

from dqkit import (Atlas, Box, FormalFunction, PolyRep, QQi, SumRep,
                   SymplecticStructure, TrigRep, ValidationError, WeylElement)
from dqkit import serialization as ser


def _roundtrip(obj, to_json, from_json):
    j = json.loads(json.dumps(to_json(obj)))
    return to_json(from_json(j)) == to_json(obj)


def test_rational_strings():
    assert ser.rat_to_str(Fraction(3, 2)) == "3/2"
    assert ser.rat_to_str(Fraction(-4)) == "-4"
    assert ser.rat_from_str("3/2") == Fraction(3, 2)
    with pytest.raises(ValidationError):
        ser.rat_from_str("1/0")
    with pytest.raises(ValidationError):
        ser.rat_from_str("a/b")


def test_poly_roundtrip():
    p = PolyRep(2, {(1, 0): Fraction(3, 2), (0, 2): Fraction(-1)})
    assert _roundtrip(p, ser.smoothrep_to_json, ser.smoothrep_from_json)


def test_trig_roundtrip():
    t = TrigRep(2, {(1, 0): QQi(Fraction(1, 2), Fraction(0)),
                    (0, -1): QQi(Fraction(0), Fraction(1, 3))})
    assert _roundtrip(t, ser.smoothrep_to_json, ser.smoothrep_from_json)


def test_sum_roundtrip():
    s = (SumRep.of(PolyRep(2, {(1, 1): Fraction(1)}))
         + SumRep.of(TrigRep(2, {(1, 0): QQi.of(Fraction(2))})))
    assert _roundtrip(s, ser.smoothrep_to_json, ser.smoothrep_from_json)


def test_formal_roundtrip():
    f = FormalFunction([PolyRep(2, {(1, 0): Fraction(1)}), PolyRep(2)], 1)
    assert _roundtrip(f, ser.formal_to_json, ser.formal_from_json)


def test_formal_length_mismatch_rejected():
    obj = {"N": 2, "coeffs": [ser.smoothrep_to_json(PolyRep(2))]}
    with pytest.raises(ValidationError):
        ser.formal_from_json(obj)


def test_box_roundtrip():
    b = Box([Fraction(0), Fraction(-1, 2)], [Fraction(1), Fraction(3, 2)])
    assert _roundtrip(b, ser.box_to_json, ser.box_from_json)


def test_atlas_roundtrip():
    for a in (Atlas.torus(2), Atlas.default_flat(2)):
        assert _roundtrip(a, ser.atlas_to_json, ser.atlas_from_json)


def test_omega_roundtrip():
    S = SymplecticStructure.standard(2)
    assert _roundtrip(S, ser.omega_to_json, ser.omega_from_json)


def test_degenerate_omega_rejected():
    obj = {"omega_lower": [["0", "0"], ["0", "0"]]}
    with pytest.raises(ValidationError):
        ser.omega_from_json(obj)


def test_weyl_roundtrip():
    w = WeylElement(2, 4, {(0, (1, 1), (0,)): PolyRep(2, {(0, 0): Fraction(2)}),
                           (1, (0, 0), ()): PolyRep(2, {(1, 0): Fraction(1)})})
    assert _roundtrip(w, ser.weyl_to_json, ser.weyl_from_json)


def test_schema_rejections():
    with pytest.raises(ValidationError):
        ser.smoothrep_from_json({"kind": "nope"})
    with pytest.raises(ValidationError):
        ser.smoothrep_from_json({"kind": "poly", "dim": 2,
                                 "terms": [{"exp": [1, 0], "coeff": "x"}]})
    with pytest.raises(ValidationError):
        ser.box_from_json({"lo": ["0"], "hi": []})
    with pytest.raises(ValidationError):
        ser.atlas_from_json({"manifold": "sphere", "charts": []})
