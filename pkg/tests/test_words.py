import pytest

from morphic.errors import DivergenceError, ParseError, ValidationError
from morphic.words import (
    MorphicSystem,
    apply_coding,
    apply_morphism,
    generate_prefix,
    make_system,
    morphism_power,
    parse_system,
)


def enc(system, text):
    return system.encode(text)


def test_fix_a_parses(system):
    s = system("fix_a")
    assert s.max_image_len == 2
    assert s.names == ("1", "2", "3", "4")
    assert s.render([s.axiom]) == "4"


def test_fix_c_parses(system):
    assert system("fix_c").max_image_len == 3


def test_empty_image_is_rejected():
    src = "alphabet: a b\naxiom: a\nmorphism:\n  a -> a b\n  b ->\ncoding:\n  a -> a\n  b -> b\n"
    with pytest.raises(ValidationError) as info:
        parse_system(src)
    assert info.value.invariant == "nonerasing"


def test_parse_error_position():
    src = "alphabet: a b\naxiom: a\nmorphism:\n  a => a b\n"
    with pytest.raises(ParseError) as info:
        parse_system(src)
    assert info.value.line == 4


def test_comments_and_multichar_names():
    src = (
        "# comment line\n"
        "alphabet: x0 x1   # trailing\n"
        "axiom: x0\n"
        "morphism:\n  x0 -> x0 x1\n  x1 -> x1\n"
        "coding:\n  x0 -> x0\n  x1 -> x1\n"
    )
    s = parse_system(src)
    assert s.render(generate_prefix(s, 3).text[:3]) == "x0 x1 x1"


def test_axiom_must_prefix_its_image():
    with pytest.raises(ValidationError):
        make_system({"a": "ba", "b": "b"}, "a")


def test_source_round_trip(system):
    for name in ("fix_a", "fix_b", "fix_c", "fix_d", "fix_e"):
        s = system(name)
        assert parse_system(s.to_source()) == s


def test_apply_morphism(system):
    a, c = system("fix_a"), system("fix_c")
    assert a.render(apply_morphism(a, enc(a, "43"))) == "4332"
    assert apply_morphism(a, ()) == ()
    assert c.render(apply_morphism(c, enc(c, "abb"))) == "abbbccbcc"


def test_apply_coding(system):
    a = system("fix_a")
    assert a.render(apply_coding(a, enc(a, "433232213221211"))) == "433131113111111"
    assert a.render(apply_coding(a, enc(a, "21"))) == "11"
    c = system("fix_c")
    w = enc(c, "abbbcc")
    assert apply_coding(c, w) == w


def test_morphism_power(system):
    a = system("fix_a")
    p4 = morphism_power(a, 4)
    assert a.render(p4.phi[a.index("4")]) == "433232213221211"
    assert a.render(p4.phi[a.index("2")]) == "21111"
    assert morphism_power(a, 1) == a


def test_generate_prefix(system):
    c, a = system("fix_c"), system("fix_a")
    assert c.render(generate_prefix(c, 19).text).startswith("abbbccbccbccccbcccc")
    assert a.render(generate_prefix(a, 27).text).startswith("433232213221211322121121113")


def test_prefix_provenance(system):
    for name in ("fix_a", "fix_b", "fix_c", "fix_d", "fix_e"):
        s = system(name)
        pre = generate_prefix(s, 5000)
        text = pre.text
        for q in range(pre.n_images):
            span = pre.image_span(q)
            assert text[span.start:span.end + 1] == s.phi[text[q]]
            assert all(pre.parent[p] == q for p in range(span.start, span.end + 1))


def test_prefix_generation_errors():
    s = make_system({"a": "ab", "b": "b"}, "a")
    assert len(generate_prefix(s, 50).text) >= 50
    with pytest.raises(ValueError):
        generate_prefix(s, 0)
    # built without validation: the axiom image does not start with the axiom
    bad = MorphicSystem(("a", "b"), ((1, 0), (1,)), (0, 1), 0)
    with pytest.raises(DivergenceError):
        generate_prefix(bad, 10)
