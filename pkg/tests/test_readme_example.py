import json

from blowup_kit.config import RunConfig, resolve_config
from blowup_kit.engine import hypocomplex_reconstruct, pullback, verify_solution
from blowup_kit.serialization import deserialize
from blowup_kit.series import Mode, Series, germ_variables
from blowup_kit.wedge import WedgeSpec


def test_round_trip_through_the_blow_up():
    # h(z, w) = w^3 + z w in n = 2
    h = Series.from_terms(germ_variables(1), 6, Mode.exact, [((0, 3), 1), ((1, 1), 1)])
    f = pullback(h)
    assert f.variables == ("z", "zbar", "s1", "t1")
    assert verify_solution(f).is_solution
    assert hypocomplex_reconstruct(f) == h


def test_run_configuration(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("mode: exact\ntruncation: 12\ntau_bv: 1.0e-8\nseed: 7\n")
    config = resolve_config(path)
    assert config == RunConfig(truncation=12, seed=7)


def test_wedge_spec():
    text = """{"n": 2, "edge": [[-0.5, 0.5], [-0.5, 0.5]],
 "cone_generators": [[1, 1], [-1, -1], [1, -1], [-1, 1]],
 "radius": 0.25, "aperture": 0.3}"""
    w = deserialize(WedgeSpec, json.loads(text))
    assert w.positive_generators() == [(1.0, -1.0), (1.0, 1.0)]
