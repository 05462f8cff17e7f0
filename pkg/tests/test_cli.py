import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from qhyper.cli import (
    Atom,
    BinOp,
    EvalError,
    Neg,
    Num,
    ParseError,
    Pow,
    Q,
    evaluate,
    main,
    parse,
    parse_scalar,
    to_text,
)
from qhyper.qring import LaurentZ, RationalQ


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


# Parser


def test_product_node():
    node = parse("t[1,2]*t[2,1]")
    assert node == BinOp("*", Atom("t", (1, 2)), Atom("t", (2, 1)))


def test_sum_node():
    node = parse("bin[1](0,2) + (q - q^-1)*tb[1,2]^(1)")
    assert isinstance(node, BinOp) and node.op == "+"
    assert node.left == Atom("bin", (1, 0, 2))
    assert node.right.right == Atom("tb", (1, 2, 1))


def test_juxtaposition_and_precedence():
    assert parse("2 q t[1,1]") == parse("2*q*t[1,1]")
    assert parse("-q^2") == Neg(Pow(Q(), 2))
    assert parse("La[1]^-1") == Pow(Atom("La", (1,)), -1)
    assert parse("tb[2,1]") == Atom("tb", (2, 1, 1))


@pytest.mark.parametrize("text,pos", [("t[1,2", 5), ("t[1,2] +", 8), ("3 $ 4", 2), ("bin[1](0)", 8)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.pos == pos


def test_index_out_of_range():
    with pytest.raises(EvalError, match="out of range"):
        evaluate("t[1,3]", 2)


def test_scalar_parsing():
    assert parse_scalar("q^2 - 1 + q^-1") == LaurentZ.parse("q^2 - 1 + q^-1")
    r = parse_scalar("(1)/(q - 1)")
    assert isinstance(r, RationalQ) and r * (RationalQ.coerce(LaurentZ.parse("q - 1"))) == RationalQ.one()
    with pytest.raises(ParseError):
        parse_scalar("t[1,1]")


def test_division_by_non_scalar_is_rejected():
    with pytest.raises(EvalError):
        evaluate("t[1,1] / t[1,2]", 2)


def test_printed_results_parse_back():
    for text, n in [
        ("t[2,2] t[1,1]", 2),
        ("(t[1,1] + q t[2,1])^2 / (q + 1)", 2),
        ("tb[1,2]^(1) tb[2,1]^(2) + bin[2](-1,2)", 2),
        ("E[1,2] E[2,3] La[2]^-1 F[3,1]", 3),
    ]:
        x = evaluate(text, n)
        assert evaluate(str(x), n) == x


# Round trip on generated trees

atoms = st.one_of(
    st.builds(Num, st.integers(0, 9)),
    st.just(Q()),
    st.builds(lambda i, j: Atom("t", (i, j)), st.integers(1, 3), st.integers(1, 3)),
    st.builds(lambda i, j, m: Atom("tb", (i, j, m)), st.integers(1, 3), st.integers(1, 3), st.integers(0, 4)),
    st.builds(lambda k, c, m: Atom("bin", (k, c, m)), st.integers(1, 3), st.integers(-3, 3), st.integers(0, 3)),
    st.builds(lambda k: Atom("La", (k,)), st.integers(1, 3)),
    st.sampled_from([Atom("Dq"), Atom("Dqinv")]),
)
trees = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(Pow, sub, st.integers(-3, 4)),
        st.builds(BinOp, st.sampled_from("+-*/"), sub, sub),
    ),
    max_leaves=8,
)


@given(trees)
@settings(max_examples=300)
def test_parse_inverts_print(tree):
    assert parse(to_text(tree)) == tree


@given(trees)
@settings(max_examples=100)
def test_print_is_stable(tree):
    text = to_text(tree)
    assert to_text(parse(text)) == text


# Commands and exit codes


def test_normalform_example(capsys):
    assert run(["normalform", "--n", "2", "--algebra", "M", "t[2,1]*t[1,2]"], capsys)[:2] == (0, "t[1,2] t[2,1]")


def test_frobenius_example(capsys):
    assert run(["frobenius", "--n", "2", "--ell", "3", "tb[1,2]^(3)"], capsys)[:2] == (0, "tb[1,2]^(1) @ q=1")
    assert run(["frobenius", "--n", "2", "--ell", "3", "tb[1,2]^(2)"], capsys)[:2] == (0, "0 @ q=1")


def test_verify_relations_passes(capsys):
    code, out, _ = run(["verify", "--suite", "relations", "--n", "2", "--max-exp", "2"], capsys)
    assert code == 0 and out.startswith("relations: PASS")


def test_index_error_exit_code(capsys):
    code, _, err = run(["normalform", "--n", "2", "t[1,3]"], capsys)
    assert code == 2 and "out of range" in err


def test_usage_errors_exit_two(capsys):
    assert run(["nonsense"], capsys)[0] == 2
    assert run(["normalform", "--n", "2", "t[1,2"], capsys)[0] == 2
    assert run(["frobenius", "--ell", "4", "tb[1,2]^(3)"], capsys)[0] == 2
    assert run(["antipode", "--n", "2", "t[1,2]"], capsys)[0] == 2


def test_verification_failure_exits_one(capsys, monkeypatch):
    from qhyper import cli

    def broken(a):
        return cli.SuiteReport("broken", {"n": a.n}, 1, ["forced failure"])

    monkeypatch.setitem(cli.SUITES, "sl2", broken)
    code, out, _ = run(["verify", "--suite", "sl2"], capsys)
    assert code == 1 and "FAIL" in out and "forced failure" in out


def test_json_output_is_exact(capsys):
    code, out, _ = run(["xi", "--n", "2", "--json", "t[1,2]"], capsys)
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and data["ok"]
    assert data["input"] == "t[1,2]"
    assert isinstance(json.dumps(data["result"]), str)


def test_other_commands(capsys):
    assert run(["mul", "--n", "2", "t[2,1]", "t[1,2]"], capsys)[1] == "t[1,2] t[2,1]"
    assert run(["coproduct", "--n", "2", "t[1,2]"], capsys)[1] == "t[1,1] @ t[1,2] + t[1,2] @ t[2,2]"
    assert run(["antipode", "--n", "2", "--algebra", "GL", "t[1,2]"], capsys)[1] == "(-q^-1 t[1,2]) Dqinv"
    assert run(["xi", "--n", "3", "Dq"], capsys)[1] == "La[1]*La[2]*La[3]"
    assert run(["pair", "--n", "2", "--u", "e=1;z=0,1;f=0", "E[1,2]*La[2]"], capsys)[1] == "-q"
    assert run(["pair", "--n", "2", "--u", "e=1,z=0,1,f=0", "E[1,2]*La[2]"], capsys)[1] == "-q"
    assert run(["pair", "--n", "2", "--u", "e=1;z=0;f=0", "E[1,2]*La[2]"], capsys)[0] == 2
    assert run(["pair", "--n", "2", "--u", "nonsense", "E[1,2]*La[2]"], capsys)[0] == 2
    code, out, _ = run(["scan", "--n", "2", "--deg", "2", "--zrange", "1"], capsys)
    assert code == 0 and "0 violations" in out
    assert run(["normalform", "--n", "2", "--algebra", "GL", "Dq Dqinv"], capsys)[1] == "1"


def test_rule_file_normal_form(tmp_path, capsys):
    rules = tmp_path / "rules.txt"
    rules.write_text("# letters: y x\nx y -> (q) y x\n")
    code, out, _ = run(["normalform", "--rules", str(rules), "x x y + 2 y"], capsys)
    assert code == 0 and out == "(q^2) y x x + 2 y"


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qhyper.cli", "normalform", "--n", "2", "t[2,1]*t[1,2]"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "t[1,2] t[2,1]"
