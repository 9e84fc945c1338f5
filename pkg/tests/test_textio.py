import json
import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpilab.errors import ParseError
from lpilab.freegroup import Word
from lpilab.group_algebra import LaurentElement, al_f2, standard_polynomial
from lpilab.quotient_algebra import QuotientElement, sample_element
from lpilab.rings import ZZ, PrimeField, ring_from_descriptor
from lpilab.textio import build_parser, main, parse_element, parse_word, serialize, tokenize

DATA = os.path.join(os.path.dirname(__file__), "data", "expressions.txt")


def run_cli(*argv):
    """Drive main() in process and capture its JSON report."""
    import io
    from contextlib import redirect_stderr, redirect_stdout

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_tokenizer_tracks_positions():
    toks = tokenize("x1 +\n 2*y")
    assert [t.kind for t in toks] == ["NAME", "OP", "INT", "OP", "NAME", "END"]
    assert toks[0].line == 1 and toks[0].col == 1
    assert toks[2].line == 2 and toks[2].col == 2
    with pytest.raises(ParseError) as exc:
        tokenize("x1 ? x2")
    assert exc.value.line == 1 and exc.value.col == 4


def test_parse_basic_laurent():
    e = parse_element("1 - x1*x2^-1")
    assert e.coefficient(Word()) == 1
    assert e.coefficient(Word(((1, 1), (2, -1)))) == -1
    assert parse_element("x") == parse_element("x1")
    assert parse_element("y") == parse_element("x2")
    assert parse_element("x1^0") == LaurentElement.one(ZZ)
    assert parse_element("2 - 2").is_zero()


def test_parse_macros():
    assert parse_element("S(3)") == standard_polynomial(3)
    assert parse_element("AL(2)") == al_f2(2)
    f2 = PrimeField(2)
    assert parse_element("S(2)", f2) == standard_polynomial(2, f2)


def test_parse_precedence_and_parens():
    # ^ binds before *, which binds before + and -
    e = parse_element("x1*x2^2")
    assert e.coefficient(Word(((1, 1), (2, 2)))) == 1
    e = parse_element("(x1*x2)^-1")
    assert e.coefficient(Word(((2, -1), (1, -1)))) == 1
    e = parse_element("(x1 + x2)^2")
    assert e.coefficient(Word(((1, 2),))) == 1
    assert e.coefficient(Word(((1, 1), (2, 1)))) == 1


def test_parse_rejects_malformed():
    cases = [
        "", "  ", "x1 +", "* x1", "x1 x2", "2x1", "x9", "x0",
        "S(", "S(3", "S()", "z", "x1^", "x1^^2", "(x1", "x1)",
        "S(9)",
    ]
    for text in cases:
        with pytest.raises(Exception):
            parse_element(text)
    with pytest.raises(ParseError):
        parse_element("(x1 + x2)^-1")  # general elements have no inverse


def test_parse_quotient_context():
    f3 = PrimeField(3)
    e = parse_element("(1 + 2*x)*(1 + y)", f3, "quotient")
    assert e.terms[""] == 1
    assert e.terms["x"] == 2
    assert e.terms["y"] == 1
    assert e.terms["xy"] == 2
    with pytest.raises(ParseError):
        parse_element("x1", ZZ, "quotient")
    with pytest.raises(ParseError):
        parse_element("x^-1", ZZ, "quotient")
    with pytest.raises(ParseError):
        parse_element("S(2)", ZZ, "quotient")


def test_parse_word():
    assert parse_word("x1^2*x2^-1") == Word(((1, 2), (2, -1)))
    assert parse_word("1") == Word()
    with pytest.raises(ParseError):
        parse_word("x1 + x2")
    with pytest.raises(ParseError):
        parse_word("2*x1")


def test_corpus_round_trips():
    """Parse, format, reparse: the two elements must be equal."""
    with open(DATA) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    assert len(lines) == 100
    for line in lines:
        ring_text, context, expr = line.split("|", 2)
        ring = ring_from_descriptor(ring_text)
        e = parse_element(expr, ring, context)
        back = parse_element(e.format(), ring, context) if not e.is_zero() else e
        assert back == e, line


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_laurent_round_trip(seed):
    rng = random.Random(seed)
    terms = []
    for _ in range(rng.randint(1, 5)):
        sylls = tuple(
            (rng.randint(1, 4), rng.choice([-2, -1, 1, 2, 3]))
            for _ in range(rng.randint(0, 4))
        )
        terms.append((Word(sylls), rng.choice([-3, -2, -1, 1, 2, 3])))
    e = LaurentElement(ZZ, terms)
    if e.is_zero():
        return
    assert parse_element(e.format()) == e


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_quotient_round_trip(seed):
    rng = random.Random(seed)
    e = sample_element(ZZ, rng, max_support=5, max_len=4)
    assert parse_element(e.format(), ZZ, "quotient") == e


def test_serialize_shapes():
    from lpilab.matrix_algebra import Matrix

    m = Matrix(ZZ, [[1, 2], [3, 4]])
    assert serialize(m) == [[1, 2], [3, 4]]
    assert serialize({1: m, "note": "x"}) == {"x1": [[1, 2], [3, 4]], "note": "x"}
    assert serialize(Word(((1, 1),))) == "x1"
    assert serialize([1, True, None]) == [1, True, None]


SCHEMA = None


def validate_report(text):
    global SCHEMA
    import jsonschema

    if SCHEMA is None:
        schema_path = os.path.join(
            os.path.dirname(os.path.dirname(__file__)),
            "src", "lpilab", "report_schema.json",
        )
        with open(schema_path) as fh:
            SCHEMA = json.load(fh)
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return report


def test_every_subcommand_emits_schema_valid_reports():
    runs = [
        (0, ["parse", "--expr", "1 - x1*x2^-1"]),
        (0, ["parse", "--expr", "x*y", "--context", "quotient", "--ring", "Fp:2"]),
        (1, ["check-lpi", "--expr", "S(3)", "--algebra", "M2@Fp:2"]),
        (0, ["check-lpi", "--expr", "S(4)", "--algebra", "M2@Fp:2"]),
        (0, ["check-gi", "--word", "x1^6", "--algebra", "M2@Fp:2"]),
        (1, ["check-gi", "--word", "x1^2", "--algebra", "M2@Fp:2"]),
        (0, ["al-verify", "--n", "1", "--field", "Fp:3"]),
        (0, ["witness", "--expr", "1 - x1^2 + x1^5"]),
        (0, ["nilbound", "--algebra", "T2@Fp:2"]),
        (1, ["nilbound", "--algebra", "M2@Fp:2"]),
        (0, ["annihilator", "--algebra", "M2@Fp:2"]),
        (0, ["counterexample", "--poly", "0,2,1"]),
        (0, ["counterexample", "--count", "3", "--deg-max", "3", "--seed", "5"]),
        (0, ["bounds", "--d", "3"]),
        (0, ["quotient", "--n", "2", "--samples", "20", "--seed", "4"]),
        (0, ["s3-expand"]),
        (0, ["idempotents", "--algebra", "M2@Fp:2"]),
    ]
    for want_code, argv in runs:
        code, out, err = run_cli(*argv)
        assert code == want_code, (argv, err)
        report = validate_report(out)
        assert report["command"] == argv[0]


def test_exit_code_two_on_errors():
    cases = [
        ["parse", "--expr", "x1 +"],
        ["parse", "--expr", "x9"],
        ["check-lpi", "--expr", "S(3)", "--algebra", "M2@Fp:4"],
        ["witness", "--expr", "x1*x2*x1^-1*x2^-1"],
        ["al-verify", "--n", "2", "--field", "ZZ"],
        ["check-lpi", "--expr", "S(4)", "--algebra", "M2@Fp:2", "--cap", "100"],
    ]
    for argv in cases:
        code, out, err = run_cli(*argv)
        assert code == 2, argv
        assert err.strip(), argv
        assert not out.strip(), argv


def test_inadmissible_message_mentions_it():
    code, out, err = run_cli("witness", "--expr", "x1*x2*x1^-1*x2^-1")
    assert code == 2
    assert "inadmissible" in err.lower()


def test_missing_seed_is_generated_and_reported():
    code, out, err = run_cli("check-lpi", "--expr", "S(4)", "--algebra", "M2@Fp:2",
                             "--mode", "random", "--budget", "5")
    assert code == 0
    assert "seed" in err
    report = json.loads(out)
    assert isinstance(report["config"]["seed"], int)


def test_env_caps_are_honored(monkeypatch):
    monkeypatch.setenv("LPILAB_CAP", "100")
    code, out, err = run_cli("check-lpi", "--expr", "S(4)", "--algebra", "M2@Fp:2")
    assert code == 2
    assert "cap" in err.lower()
    monkeypatch.setenv("LPILAB_CAP", "notanint")
    code, out, err = run_cli("bounds", "--d", "1")
    assert code == 0  # bounds has no cap flag, env untouched


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lpilab", "bounds", "--d", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    report = validate_report(proc.stdout)
    assert report["details"]["size_bound"] == 6
    assert report["details"]["dimension_bound"] == 7


def test_witness_reports_normalization():
    code, out, _ = run_cli("witness", "--expr", "1 - x1*x2^-1")
    assert code == 0
    report = validate_report(out)
    d = report["details"]
    assert d["substituted_variable"] == "x1"
    assert d["k"] == 2
    assert d["d"] == 7
    normalized = parse_element(d["normalized"])
    for w in normalized.terms:
        if not w.is_identity():
            assert w.exp_sum_total() != 0


def test_parser_builds():
    parser = build_parser()
    args = parser.parse_args(["bounds", "--d", "2"])
    assert args.command == "bounds"
    assert args.d == 2
