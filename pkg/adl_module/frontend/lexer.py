from dataclasses import dataclass
from typing import List, Optional

from ply import lex

from adl_module.errors import HeaderParseError


@dataclass(frozen=True)
class DocToken:
    text: str
    lexpos: int
    lineno: int

    @property
    def end(self) -> int:
        return self.lexpos + len(self.text)


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    lineno: int
    lexpos: int
    column: int
    # doc comment seen since the previous token, if any
    doc: Optional[DocToken] = None

    @property
    def end(self) -> int:
        return self.lexpos + len(self.value)


def column_of(text: str, lexpos: int) -> int:
    return lexpos - (text.rfind("\n", 0, lexpos) + 1) + 1


class CppLexer:
    """Tokenizer for the header subset.

    Comments are dropped, except ``/** ... */`` blocks which ride along on
    the next token as ``Token.doc``. Preprocessor lines come through whole
    as ``PREPROC`` tokens.
    """

    tokens = ("ID", "NUMBER", "STRING", "CHAR", "SCOPE", "PREPROC")

    literals = "{}()[];:,<>=~*&+-/.!|^%?"

    t_ignore = " \t\r\f\v"

    t_SCOPE = r"::"

    def t_comment(self, t):
        r"/\*[\s\S]*?\*/"
        t.lexer.lineno += t.value.count("\n")
        if t.value.startswith("/**") and t.value != "/**/":
            self._doc = DocToken(t.value, t.lexpos, t.lineno)

    def t_linecomment(self, t):
        r"//[^\n]*"

    def t_PREPROC(self, t):
        r"\#[^\n]*(?:\\\n[^\n]*)*"
        t.lexer.lineno += t.value.count("\n")
        return t

    def t_ID(self, t):
        r"[A-Za-z_][A-Za-z0-9_]*"
        return t

    def t_NUMBER(self, t):
        r"0[xX][0-9a-fA-F]+[uUlL]*|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[uUlLfF]*"
        return t

    def t_STRING(self, t):
        r'"(?:[^"\\\n]|\\.)*"'
        return t

    def t_CHAR(self, t):
        r"'(?:[^'\\\n]|\\.)*'"
        return t

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)

    def t_error(self, t):
        raise HeaderParseError(
            "unrecognized input",
            path=self.path,
            line=t.lexer.lineno,
            column=column_of(t.lexer.lexdata, t.lexpos),
            token=t.value[:1],
        )

    def __init__(self):
        self.path = ""
        self._doc = None
        self.lexer = lex.lex(module=self, errorlog=lex.NullLogger())

    def tokenize(self, text: str, path: str = "") -> List[Token]:
        self.path = path
        self._doc = None
        self.lexer.lineno = 1
        self.lexer.input(text)
        out = []
        while True:
            t = self.lexer.token()
            if t is None:
                break
            doc, self._doc = self._doc, None
            out.append(
                Token(
                    type=t.type,
                    value=t.value,
                    lineno=t.lineno,
                    lexpos=t.lexpos,
                    column=column_of(text, t.lexpos),
                    doc=doc,
                )
            )
        return out


def tokenize(text: str, path: str = "") -> List[Token]:
    return CppLexer().tokenize(text, path)
