# formal/parser.py

"""Recursive-descent parser for the monomial DSL.

    MONOMIAL := "N^" EXPONENT FACTOR+
    EXPONENT := REAL | "{" AFFINE "}"          AFFINE is affine in α (also a, alpha)
    FACTOR   := "E[" ATOM+ "]"
    ATOM     := "u(" LABEL "," INT ")" | "au(" LABEL "," INT ")"
              | "e(" LABEL "," INT "," IDX "," IDX ")"
    LABEL    := uppercase letter with an optional "*"
    IDX      := "i" INT
"""
import re
from typing import FrozenSet, Iterable, List, Optional, Tuple

from .monomial import AngleUnderline, Atom, Entry, FormalMonomial, Underline

_NUMBER = re.compile(r"[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?")
_INT = re.compile(r"[0-9]+")
_ALPHA = ("alpha", "α", "a")
_LABEL = re.compile(r"[A-Z]\*?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected: FrozenSet[str] = frozenset(expected)
        super().__init__(str(self))

    def __str__(self):
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        return text

    def to_dict(self):
        return {"error": self.message, "line": self.line, "column": self.column,
                "expected": sorted(self.expected)}


class _Parser:
    def __init__(self, text: str, labels: Optional[FrozenSet[str]]):
        self.text = text
        self.pos = 0
        self.labels = labels

    # -- cursor -----------------------------------------------------------

    def where(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def fail(self, message: str, expected: Iterable[str] = (), pos: Optional[int] = None) -> ParseError:
        line, column = self.where(pos)
        return ParseError(message, line, column, expected)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.at(literal):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            raise self.fail(f"unexpected {found!r}", [literal])
        self.pos += len(literal)

    def match(self, pattern: "re.Pattern", what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.fail(f"malformed {what}", [what])
        self.pos = m.end()
        return m.group(0)

    # -- grammar ----------------------------------------------------------

    def monomial(self) -> FormalMonomial:
        self.expect("N^")
        t0, t_alpha = self.exponent()
        factors = [self.factor()]
        while self.at("E["):
            factors.append(self.factor())
        self.skip()
        if self.pos < len(self.text):
            raise self.fail(f"unexpected {self.text[self.pos]!r}", ["E[", "end of input"])
        return FormalMonomial(t0=t0, factors=tuple(factors), t_alpha=t_alpha)

    def signed_number(self) -> float:
        sign = 1.0
        if self.at("-"):
            self.pos += 1
            sign = -1.0
        elif self.at("+"):
            self.pos += 1
        return sign * float(self.match(_NUMBER, "number"))

    def exponent(self) -> Tuple[float, float]:
        if not self.at("{"):
            return self.signed_number(), 0.0
        self.pos += 1
        t0, t_alpha = 0.0, 0.0
        first = True
        while True:
            sign = 1.0
            if self.at("-"):
                self.pos += 1
                sign = -1.0
            elif self.at("+"):
                self.pos += 1
            elif not first:
                break
            c, is_alpha = self.affine_term()
            if is_alpha:
                t_alpha += sign * c
            else:
                t0 += sign * c
            first = False
        self.expect("}")
        return t0, t_alpha

    def alpha(self) -> bool:
        self.skip()
        for name in _ALPHA:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return True
        return False

    def affine_term(self) -> Tuple[float, bool]:
        if self.alpha():
            return 1.0, True
        self.skip()
        if not _NUMBER.match(self.text, self.pos):
            raise self.fail("malformed exponent term", ["number", "α"])
        c = float(self.match(_NUMBER, "number"))
        if self.at("*"):
            self.pos += 1
            if not self.alpha():
                raise self.fail("expected α after '*'", ["α"])
            return c, True
        return (c, True) if self.alpha() else (c, False)

    def factor(self) -> Tuple[Atom, ...]:
        self.expect("E[")
        atoms = [self.atom()]
        while not self.at("]"):
            if self.pos >= len(self.text):
                raise self.fail("unterminated expectation", ["]"])
            atoms.append(self.atom())
        self.expect("]")
        return tuple(atoms)

    def atom(self) -> Atom:
        if self.at("au("):
            self.pos += 3
            label, m = self.label(), self.power()
            self.expect(")")
            return AngleUnderline(label, m)
        if self.at("u("):
            self.pos += 2
            label, m = self.label(), self.power()
            self.expect(")")
            return Underline(label, m)
        if self.at("e("):
            self.pos += 2
            label, m = self.label(), self.power()
            self.expect(",")
            x = self.index()
            self.expect(",")
            y = self.index()
            self.expect(")")
            return Entry(label, m, x, y)
        raise self.fail("expected an atom", ["u(", "au(", "e("])

    def label(self) -> str:
        self.skip()
        start = self.pos
        m = _LABEL.match(self.text, self.pos)
        if not m:
            raise self.fail("malformed label", ["label"])
        self.pos = m.end()
        label = m.group(0)
        if self.labels is not None and label not in self.labels:
            raise self.fail(f"unknown label {label!r}", sorted(self.labels), pos=start)
        return label

    def power(self) -> int:
        self.expect(",")
        self.skip()
        start = self.pos
        if self.at("-"):
            raise self.fail("power m must be at least 1", ["positive integer"])
        m = int(self.match(_INT, "positive integer"))
        if m < 1:
            raise self.fail("power m must be at least 1", ["positive integer"], pos=start)
        return m

    def index(self) -> int:
        self.skip()
        start = self.pos
        if not self.at("i"):
            raise self.fail("malformed index", ["i<INT>"])
        self.pos += 1
        m = _INT.match(self.text, self.pos)
        if not m or int(m.group(0)) < 1:
            raise self.fail("malformed index", ["i<INT>"], pos=start)
        self.pos = m.end()
        return int(m.group(0))


def parse_monomial(text: str, labels: Optional[Iterable[str]] = None) -> FormalMonomial:
    """Parse one monomial; `labels` restricts the label alphabet."""
    allowed = None if labels is None else frozenset(labels)
    return _Parser(text, allowed).monomial()


def parse_lines(lines: Iterable[str], labels: Optional[Iterable[str]] = None) -> List[Tuple[int, object]]:
    """(line number, FormalMonomial or ParseError) for each non-blank, non-comment line."""
    out = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            out.append((number, parse_monomial(stripped, labels)))
        except ParseError as exc:
            exc.line = number
            out.append((number, exc))
    return out
