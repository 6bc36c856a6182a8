import pytest
from fractions import Fraction

from leonard_bethe import DIAM, PLAIN, STAR, ParamSet, load_config
from leonard_bethe.errors import ConfigError, DegenerateParams, DomainError
from leonard_bethe.params import (
    check_conditions,
    complete,
    condition_violations,
    dump_config,
    is_cyclic,
    parse_complex,
    parse_config_text,
)

GOOD = """\
# spin one
q = 3
r0 = 1
b = 5
bstar = 7
bdiam = 1/2
s = 1
"""


@pytest.mark.parametrize("text, value", [
    ("1.5", 1.5),
    ("2-0.3i", 2 - 0.3j),
    ("0.5i", 0.5j),
    ("-i", -1j),
    ("1/2", 0.5),
    (" 3 + 4i ", 3 + 4j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["", "abc", "1+2k"])
def test_parse_complex_rejects(text):
    with pytest.raises(ConfigError):
        parse_complex(text)


def test_config_roundtrip(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text(GOOD)
    p = load_config(path)
    assert (p.q, p.r0, p.b, p.bstar, p.bdiam, p.two_s) == (3, 1, 5, 7, 0.5, 2)
    assert p.s == Fraction(1)
    assert parse_config_text(dump_config(p)) == p


@pytest.mark.parametrize("text, fragment", [
    (GOOD.replace("s = 1", ""), "missing"),
    (GOOD + "q = 2\n", "duplicate"),
    (GOOD + "colour = red\n", "unknown key"),
    (GOOD.replace("b = 5", "b 5"), "expected"),
    (GOOD.replace("s = 1", "s = 1/3"), "spin"),
    (GOOD.replace("q = 3", "q = 1"), "root of unity"),
    (GOOD.replace("b = 5", "b = 0"), "nonzero"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config_text(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.txt")


def test_derived_quantities(table1):
    p = table1
    assert p.c == pytest.approx(1 / 5)
    assert p.cdiam == pytest.approx(2)
    assert p.theta(PLAIN, 0) == pytest.approx(5.2)
    assert p.theta(PLAIN, 1) == pytest.approx(45 + 1 / 45)
    assert p.zeta ** -2 == pytest.approx(p.bdiam * p.r0 * p.q ** p.two_s)
    assert p.dim == 3


def test_labels():
    assert complete(PLAIN, STAR) == DIAM
    assert is_cyclic(DIAM, PLAIN) and not is_cyclic(STAR, PLAIN)
    with pytest.raises(DomainError):
        complete(PLAIN, PLAIN)


def test_generic_parameters_pass_gate(table1, half):
    assert condition_violations(table1) == []
    check_conditions(half)


def test_repeated_eigenvalue_is_rejected():
    # b/c = q^-2 makes theta_0 = theta_1
    p = ParamSet(2.0, 1.0, 0.5, 1.3, 0.7, 1)
    assert p.theta(PLAIN, 0) == pytest.approx(p.theta(PLAIN, 1))
    with pytest.raises(DegenerateParams) as info:
        check_conditions(p)
    assert info.value.condition == "(i)"


def test_vanishing_offdiagonal_is_rejected(table1):
    # c* = -r0 q^-1 c c_diam at M = 1 kills an off-diagonal coefficient
    p0 = table1.replace(two_s=1)
    cs = -p0.r0 / p0.q * p0.c * p0.cdiam
    p = p0.replace(bstar=1 / (p0.r0 ** 2 * cs))
    with pytest.raises(DegenerateParams) as info:
        check_conditions(p)
    assert info.value.condition == "(ii)"


def test_digest_is_stable(table1):
    assert table1.digest() == ParamSet(3, 1, 5, 7, 0.5, 2).digest()
    assert table1.digest() != table1.replace(b=5.1).digest()
