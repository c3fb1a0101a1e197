"""Text DSL for bundle expressions.

    expr := term ("+" term)*
    term := [int "*"] fb ("#" fb)*
    fb   := "O" "(" int ")" | "S" ["1"|"2"] "(" int ")"
          | "T" ["^" int] "(" int ")" | "Psi" int "(" int ")"

"O(a,b,...)" abbreviates the pure line-bundle term across all factors.
Whitespace is insignificant.  Formatting emits the canonical form, so
parse(format(e)) == e and format(parse(s)) is idempotent.
"""
from __future__ import annotations

from .bundles import (BundleExpr, FactorBundle, LineTwist, PsiSym, SpinorTwist,
                      TangentWedge, make_bundle, validate_on, wedge)
from .errors import ParseError
from .spaces import Space


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, object, int]] = []
        self._scan()
        self.i = 0

    def _scan(self):
        text, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c.isalpha():
                j = i + 1
                while j < n and text[j].isalpha():
                    j += 1
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
            elif c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", int(text[i:j]), i))
                i = j
            elif c in "+*#(),^":
                self.tokens.append((c, c, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", i)
        self.tokens.append(("end", None, n))

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok


def _parse_int_list(tz: _Tokenizer) -> list[int]:
    tz.expect("(")
    vals = [tz.expect("int")[1]]
    while tz.peek()[0] == ",":
        tz.next()
        vals.append(tz.expect("int")[1])
    tz.expect(")")
    return vals


def _parse_fb(tz: _Tokenizer):
    """Returns either a FactorBundle or ('lines', [t1, ...]) for the O-shorthand."""
    kind, name, pos = tz.next()
    if kind != "name":
        raise ParseError(f"expected a bundle symbol, found {name!r}", pos)
    if name == "O":
        vals = _parse_int_list(tz)
        if len(vals) > 1:
            return ("lines", vals)
        return LineTwist(vals[0])
    if name in ("S", "S1", "S2"):
        vals = _parse_int_list(tz)
        if len(vals) != 1:
            raise ParseError("spinor twist takes one integer", pos)
        return SpinorTwist(name, vals[0])
    if name == "T":
        p = 1
        if tz.peek()[0] == "^":
            tz.next()
            p = tz.expect("int")[1]
            if p < 0:
                raise ParseError("wedge power must be nonnegative", pos)
        vals = _parse_int_list(tz)
        if len(vals) != 1:
            raise ParseError("tangent wedge twist takes one integer", pos)
        return wedge(p, vals[0])
    if name.startswith("Psi"):
        suffix = name[3:]
        if suffix:
            j = int(suffix)
        elif tz.peek()[0] == "int":
            j = tz.next()[1]
        else:
            raise ParseError("Psi needs an index", pos)
        if j < 1:
            raise ParseError("Psi index must be positive", pos)
        vals = _parse_int_list(tz)
        if len(vals) != 1:
            raise ParseError("psi twist takes one integer", pos)
        return PsiSym(j, vals[0])
    raise ParseError(f"unknown bundle symbol {name!r}", pos)


def _parse_term(tz: _Tokenizer, X: Space):
    mult = 1
    if tz.peek()[0] == "int" and tz.tokens[tz.i + 1][0] == "*":
        mult = tz.next()[1]
        tz.next()
        if mult < 1:
            raise ParseError("multiplicity must be positive", tz.peek()[2])
    pos = tz.peek()[2]
    fbs = [_parse_fb(tz)]
    while tz.peek()[0] == "#":
        tz.next()
        fbs.append(_parse_fb(tz))
    if any(isinstance(fb, tuple) for fb in fbs):
        if len(fbs) != 1:
            raise ParseError("O(a,b,...) shorthand cannot be combined with '#'", pos)
        vals = fbs[0][1]
        if len(vals) != X.r:
            raise ParseError(
                f"term has {len(vals)} twists, space {X} has {X.r} factors", pos)
        fbs = [LineTwist(t) for t in vals]
    if len(fbs) != X.r:
        raise ParseError(
            f"term has {len(fbs)} factor slots, space {X} has {X.r} factors", pos)
    return mult, tuple(fbs)


def parse_bundle(text: str, X: Space) -> BundleExpr:
    tz = _Tokenizer(text)
    terms = [_parse_term(tz, X)]
    while tz.peek()[0] == "+":
        tz.next()
        terms.append(_parse_term(tz, X))
    tok = tz.peek()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return validate_on(make_bundle(terms), X)


def _format_fb(fb: FactorBundle) -> str:
    if isinstance(fb, LineTwist):
        return f"O({fb.t})"
    if isinstance(fb, SpinorTwist):
        return f"{fb.kind}({fb.t})"
    if isinstance(fb, TangentWedge):
        return f"T({fb.t})" if fb.p == 1 else f"T^{fb.p}({fb.t})"
    return f"Psi{fb.j}({fb.t})"


def format_term(fbs: tuple[FactorBundle, ...]) -> str:
    if len(fbs) > 1 and all(isinstance(fb, LineTwist) for fb in fbs):
        return "O(" + ",".join(str(fb.t) for fb in fbs) + ")"
    return "#".join(_format_fb(fb) for fb in fbs)


def format_bundle(e: BundleExpr, X: Space | None = None) -> str:
    parts = []
    for mult, fbs in e.terms:
        s = format_term(fbs)
        parts.append(f"{mult}*{s}" if mult > 1 else s)
    return " + ".join(parts)
