import pytest

from src.errors import LexError
from src.lang.lexer import TokenKind, tokenize


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)[:-1]]


def test_keywords_identifiers_and_primes():
    assert kinds("Sub(e') :- no Reach(s'')") == [
        (TokenKind.IDENT, "Sub"), (TokenKind.PUNCT, "("), (TokenKind.IDENT, "e'"), (TokenKind.PUNCT, ")"),
        (TokenKind.PUNCT, ":-"), (TokenKind.KEYWORD, "no"), (TokenKind.IDENT, "Reach"),
        (TokenKind.PUNCT, "("), (TokenKind.IDENT, "s''"), (TokenKind.PUNCT, ")"),
    ]


def test_longest_punctuation_wins():
    assert [t.text for t in tokenize("State ::= new (id: Integer).")[:-1]] == [
        "State", "::=", "new", "(", "id", ":", "Integer", ")", ".",
    ]
    assert [t.text for t in tokenize("left::CntrMach")[:-1]] == ["left", "::", "CntrMach"]


def test_negative_literal_versus_minus():
    assert kinds("f(-1)")[2] == (TokenKind.INT, "-1")
    assert tokenize("f(-1)")[2].value == -1
    assert kinds("x - 1") == [(TokenKind.IDENT, "x"), (TokenKind.PUNCT, "-"), (TokenKind.INT, "1")]
    assert kinds("x -1")[1] == (TokenKind.PUNCT, "-")


def test_string_escapes_and_comments():
    tokens = tokenize('Event("a\\"b") // trailing comment\nState(1)')
    assert tokens[2].kind is TokenKind.STRING
    assert tokens[2].value == 'a"b'
    assert [t.text for t in tokens[4:-1]] == ["State", "(", "1", ")"]
    assert tokens[4].span.line == 2
    assert tokens[4].span.col == 1


def test_wildcard_is_its_own_kind():
    assert kinds("Init(_)")[2] == (TokenKind.WILDCARD, "_")
    assert kinds("_x")[0] == (TokenKind.IDENT, "_x")


def test_spans_are_one_based():
    tokens = tokenize("domain D {\n  x :- y.\n}")
    x = tokens[3]
    assert (x.text, x.span.line, x.span.col) == ("x", 2, 3)
    assert tokens[-1].kind is TokenKind.EOF


def test_unterminated_string_is_located():
    with pytest.raises(LexError) as info:
        tokenize('model M of D {\n  Event("foo).\n}', "m.4ml")
    err = info.value
    assert (err.path, err.line, err.col) == ("m.4ml", 2, 9)
    assert err.diagnostic.code == "lex"


def test_illegal_character():
    with pytest.raises(LexError, match="illegal character '@'"):
        tokenize("State(@)")
