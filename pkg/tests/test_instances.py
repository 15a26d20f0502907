import numpy as np
import pytest

from plbattle.instances import InstanceSpec, generate_instance


def test_spec_examples():
    assert np.allclose(generate_instance("lower-bound:1,0.1", 3).thetas, [0.6, 0.4, 0.4])
    assert np.array_equal(generate_instance("one-good:1.0,0.6", 4).thetas, [1, 0.6, 0.6, 0.6])
    assert np.allclose(generate_instance("geometric:0.9", 3).thetas, [1, 0.9, 0.81])


def test_explicit_and_random():
    assert np.array_equal(generate_instance("explicit:3,1,2", 3).thetas, [3, 1, 2])
    a = generate_instance("uniform-random:0.5,2,7", 10)
    b = generate_instance(InstanceSpec("uniform-random", (0.5, 2, 7)), 10)
    assert a == b
    assert np.all((a.thetas >= 0.5) & (a.thetas <= 2))
    assert a != generate_instance("uniform-random:0.5,2,8", 10)


@pytest.mark.parametrize(
    "text,n",
    [
        ("nope", 3),
        ("one-good:1", 3),
        ("geometric:-1", 3),
        ("explicit:1,2", 3),
        ("uniform-random:0,1,3", 3),
        ("lower-bound:1,0.5", 3),
        ("one-good:a,b", 3),
        ("one-good:1,0.5", 1),
    ],
)
def test_invalid_specs(text, n):
    with pytest.raises(ValueError):
        generate_instance(text, n)


def test_spec_roundtrip():
    spec = InstanceSpec.parse(" one-good : 1, 0.6 ")
    assert spec == InstanceSpec("one-good", (1.0, 0.6))
    assert str(spec) == "one-good:1,0.6"
    assert InstanceSpec.parse(str(spec)) == spec
