import pytest
from hypothesis import given
from hypothesis import strategies as st

from spt.errors import ParseError, ValidationError
from spt.policy import AccessRule, SecurityPolicy, parse_policy, policy_dirty, serialize_policy

REF_POLICY = "R 1 5 1\nR 5 1 1\nR 2 4 1\nR 4 2 1"


def test_parse_ref_policy():
    spm = parse_policy(REF_POLICY)
    assert [(r.subject_id, r.object_id, r.fixed) for r in spm] == [
        (1, 5, 1), (5, 1, 1), (2, 4, 1), (4, 2, 1)
    ]


def test_parse_empty():
    assert len(parse_policy("")) == 0


def test_parse_skips_comments_and_blank_lines():
    spm = parse_policy("# header\n\nR 1 2 0\n  \n# tail\n")
    assert spm.rules == (AccessRule(1, 2, 0),)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("R 1 5 2", 1),
        ("R 1 5 1\nR 1 x 1", 2),
        ("R 1 5", 1),
        ("R 1 5 1 1", 1),
        ("X 1 5 1", 1),
        ("R 3 3 1", 1),
        ("R 0 3 1", 1),
        ("R -1 3 1", 1),
        ("R 1  5 1", 1),
    ],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_policy(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_duplicate_pair_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        parse_policy("R 1 5 1\nR 1 5 0")


def test_reverse_pair_is_not_a_duplicate():
    assert len(parse_policy("R 1 5 1\nR 5 1 1")) == 2


def test_serialize_examples():
    assert serialize_policy(SecurityPolicy((AccessRule(1, 5, 1),))) == "R 1 5 1\n"
    assert serialize_policy(SecurityPolicy()) == ""
    assert serialize_policy(parse_policy(REF_POLICY)) == REF_POLICY + "\n"


def test_policy_dirty_examples():
    spm = parse_policy(REF_POLICY)
    assert policy_dirty(spm)
    assert not policy_dirty(spm.with_fixed(0))
    assert not policy_dirty(SecurityPolicy())


principal = st.integers(min_value=1, max_value=40)


@st.composite
def policies(draw):
    pairs = draw(
        st.lists(
            st.tuples(principal, principal).filter(lambda p: p[0] != p[1]),
            unique=True,
            max_size=12,
        )
    )
    flags = draw(st.lists(st.sampled_from([0, 1]), min_size=len(pairs), max_size=len(pairs)))
    return SecurityPolicy(tuple(AccessRule(s, o, f) for (s, o), f in zip(pairs, flags)))


@given(policies())
def test_round_trip(spm):
    assert parse_policy(serialize_policy(spm)) == spm


@given(policies(), st.data())
def test_dirty_is_monotone_in_fixed_flags(spm, data):
    if not spm.rules:
        return
    i = data.draw(st.integers(0, len(spm.rules) - 1))
    rules = list(spm.rules)
    rules[i] = AccessRule(rules[i].subject_id, rules[i].object_id, 1)
    raised = SecurityPolicy(tuple(rules))
    assert policy_dirty(raised)
    if policy_dirty(spm):
        assert policy_dirty(raised)


@given(policies(), st.data())
def test_non_integer_field_rejected(spm, data):
    if not spm.rules:
        return
    lines = serialize_policy(spm).splitlines()
    i = data.draw(st.integers(0, len(lines) - 1))
    field = data.draw(st.integers(1, 3))
    junk = data.draw(st.sampled_from(["a", "1.5", "0x1", "+1", "1e3", "-"]))
    tokens = lines[i].split(" ")
    tokens[field] = junk
    lines[i] = " ".join(tokens)
    with pytest.raises(ParseError) as info:
        parse_policy("\n".join(lines))
    assert info.value.lineno == i + 1
