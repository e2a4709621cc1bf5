"""Sparse multivariate Laurent polynomials over the integers.

Terms are stored as a map from monomials to nonzero arbitrary-precision
integer coefficients; a monomial is a sorted tuple of (variable, nonzero
exponent) pairs. The zero polynomial is the empty map, the unit monomial is
the empty tuple. Canonical text ordering follows a graded-lexicographic
order over the plain string order on variable names.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import DivisionByZero, LaurentParseError, NotDivisible

VarId = str
Monomial = tuple[tuple[VarId, int], ...]

UNIT_MONOMIAL: Monomial = ()


def monomial(exponents: Mapping[VarId, int]) -> Monomial:
    """Build a monomial from a var -> exponent map, dropping zero exponents."""
    return tuple(sorted((v, e) for v, e in exponents.items() if e != 0))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        n = exps.get(v, 0) + e
        if n:
            exps[v] = n
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return monomial_mul(a, tuple((v, -e) for v, e in b))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def grlex_key(m: Monomial):
    """Sort key for the graded-lexicographic order.

    Degree first; ties broken variable-by-variable in ascending VarId order,
    larger exponent on the earlier variable winning. Absent variables count
    as exponent 0, encoded by comparing (var, -exp) pair streams: a smaller
    VarId appearing at all dominates, which matches padding with zeros only
    if exponents are positive -- so we compare explicitly instead.
    """
    # Encode as (degree, tuple of (var, -exp)): for two monomials compared
    # entrywise, at the first differing variable v the one with the larger
    # exponent of v is larger iff its (v, -e) pair is smaller. Missing
    # entries (exponent 0) must sort correctly against negative exponents,
    # so pad explicitly at comparison sites via padded_exponents().
    return (monomial_degree(m), _lex_tail(m))


class _LexTail:
    """Comparison helper: lexicographic on exponents over ascending VarIds."""

    __slots__ = ("mono",)

    def __init__(self, mono: Monomial):
        self.mono = mono

    def _cmp(self, other: "_LexTail") -> int:
        a = dict(self.mono)
        b = dict(other.mono)
        for v in sorted(set(a) | set(b)):
            ea, eb = a.get(v, 0), b.get(v, 0)
            if ea != eb:
                return 1 if ea > eb else -1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return self.mono == other.mono

    def __hash__(self):
        return hash(self.mono)


def _lex_tail(m: Monomial) -> _LexTail:
    return _LexTail(m)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({UNIT_MONOMIAL: 1})

    @classmethod
    def const(cls, n: int) -> "LaurentPoly":
        return cls({UNIT_MONOMIAL: n}) if n else cls()

    @classmethod
    def var(cls, v: VarId, exp: int = 1) -> "LaurentPoly":
        if exp == 0:
            return cls.one()
        return cls({((v, exp),): 1})

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {UNIT_MONOMIAL: 1}

    def as_int(self) -> int | None:
        """The constant value if this is a constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and UNIT_MONOMIAL in self.terms:
            return self.terms[UNIT_MONOMIAL]
        return None

    def variables(self) -> set[VarId]:
        return {v for m in self.terms for v, _ in m}

    def has_nonnegative_coefficients(self) -> bool:
        """True iff every stored coefficient is positive (none are zero)."""
        return all(c > 0 for c in self.terms.values())

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in descending graded-lex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[Monomial, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        big, small = (self.terms, other.terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for m, c in small.items():
            n = out.get(m, 0) + c
            if n:
                out[m] = n
            else:
                del out[m]
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                n = out.get(m, 0) + ca * cb
                if n:
                    out[m] = n
                else:
                    del out[m]
        return LaurentPoly(out)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined; "
                             "invert monomials explicitly")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift(self, m: Monomial) -> "LaurentPoly":
        """Multiply by the (unit) monomial m."""
        if not m:
            return self
        return LaurentPoly({monomial_mul(t, m): c for t, c in self.terms.items()})

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def _extreme_monomial(p: LaurentPoly) -> Monomial:
    """Per-variable minimum exponent over all terms (absent = 0)."""
    mins: dict[VarId, int] = {}
    seen: set[VarId] = set()
    for m in p.terms:
        seen.update(v for v, _ in m)
    for v in seen:
        mins[v] = min(dict(m).get(v, 0) for m in p.terms)
    return monomial(mins)


def lp_exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division in the Laurent ring over the integers.

    Factors the extreme monomial out of both operands so they become
    ordinary polynomials, then divides by leading-term reduction under the
    graded-lex order; any non-divisible step raises NotDivisible.
    """
    if den.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if num.is_zero():
        return LaurentPoly.zero()

    g_num = _extreme_monomial(num)
    g_den = _extreme_monomial(den)
    num_p = num.shift(tuple((v, -e) for v, e in g_num))
    den_p = den.shift(tuple((v, -e) for v, e in g_den))

    lm_d, lc_d = den_p.leading()
    lm_d_map = dict(lm_d)
    quot: dict[Monomial, int] = {}
    rem = num_p
    while not rem.is_zero():
        lm_r, lc_r = rem.leading()
        lm_r_map = dict(lm_r)
        if any(lm_r_map.get(v, 0) < e for v, e in lm_d_map.items()):
            raise NotDivisible(f"{format_poly(num)} is not divisible by {format_poly(den)}")
        if lc_r % lc_d != 0:
            raise NotDivisible(
                f"coefficient {lc_r} not divisible by {lc_d} over the integers"
            )
        t_mono = monomial_div(lm_r, lm_d)
        t_coef = lc_r // lc_d
        quot[t_mono] = quot.get(t_mono, 0) + t_coef
        rem = rem - den_p.shift(t_mono) * LaurentPoly.const(t_coef)
    shift_back = monomial_div(g_num, g_den)
    return LaurentPoly(quot).shift(shift_back)


def lp_has_nonnegative_coefficients(p: LaurentPoly) -> bool:
    return p.has_nonnegative_coefficients()


# -- canonical text form ----------------------------------------------------

_IDENT_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_'/~.()"
)


def _is_ident(tok: str) -> bool:
    return bool(tok) and all(ch in _IDENT_CHARS for ch in tok) and not _is_int(tok)


def _is_int(tok: str) -> bool:
    t = tok[1:] if tok[:1] == "-" else tok
    return t.isdigit()


def format_poly(p: LaurentPoly) -> str:
    """Canonical text: terms in descending graded-lex order."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        mag = abs(c)
        factors = [f"{v}^{e}" if e != 1 else v for v, e in m]
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if i == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^":
            yield (ch, ch, i)
            i += 1
            continue
        if ch in _IDENT_CHARS:
            j = i
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            yield ("atom", text[i:j], i)
            i = j
            continue
        raise LaurentParseError(f"unexpected character {ch!r}", position=i)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical textual form (tolerant of extra whitespace)."""
    tokens = list(_tokenize(text))
    if not tokens:
        raise LaurentParseError("empty polynomial text")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            raise LaurentParseError("unexpected end of input")
        tok = tokens[pos]
        if kind is not None and tok[0] != kind:
            raise LaurentParseError(
                f"expected {kind}, found {tok[1]!r}", position=tok[2]
            )
        pos += 1
        return tok

    def parse_int_atom() -> int:
        tok = take("atom")
        if not _is_int(tok[1]):
            raise LaurentParseError(f"expected integer, found {tok[1]!r}", position=tok[2])
        return int(tok[1])

    def parse_term(sign: int) -> tuple[Monomial, int]:
        coef = sign
        exps: dict[VarId, int] = {}
        first = True
        while True:
            tok = take("atom")
            name = tok[1]
            if _is_int(name):
                if not first:
                    raise LaurentParseError(
                        "integer factor only allowed first", position=tok[2]
                    )
                coef *= int(name)
            else:
                if not _is_ident(name):
                    raise LaurentParseError(
                        f"bad identifier {name!r}", position=tok[2]
                    )
                exp = 1
                nxt = peek()
                if nxt is not None and nxt[0] == "^":
                    take("^")
                    neg = False
                    nxt2 = peek()
                    if nxt2 is not None and nxt2[0] == "-":
                        take("-")
                        neg = True
                    exp = parse_int_atom()
                    if neg:
                        exp = -exp
                exps[name] = exps.get(name, 0) + exp
            first = False
            nxt = peek()
            if nxt is not None and nxt[0] == "*":
                take("*")
                continue
            break
        return monomial(exps), coef

    total = LaurentPoly.zero()
    sign = 1
    tok = peek()
    if tok is not None and tok[0] in "+-":
        take()
        sign = -1 if tok[0] == "-" else 1
    while True:
        m, c = parse_term(sign)
        total = total + LaurentPoly({m: c})
        tok = peek()
        if tok is None:
            break
        if tok[0] not in "+-":
            raise LaurentParseError(
                f"expected '+' or '-', found {tok[1]!r}", position=tok[2]
            )
        take()
        sign = -1 if tok[0] == "-" else 1
    return total


def poly_product(factors: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly.one()
    for f in factors:
        out = out * f
    return out
