"""Sparse multivariate polynomials over radical towers.

A polynomial is a mapping from exponent tuples to nonzero scalars,
together with the tuple of variable names that gives the exponent
positions their meaning.  Coefficients may live in different prefixes of
a common tower; the scalar layer promotes on demand.

Weight data is a tuple of weight vectors.  The weighted degree of a
monomial is the minimum of its values under the vectors, so a single
vector gives the usual weighted grading and several vectors give the
piecewise grading used along a Newton polygon.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .scalars import AlgebraicScalar, format_scalar, from_rational


def _as_scalar(value):
    if isinstance(value, AlgebraicScalar):
        return value
    return from_rational(value)


class SparsePoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        self.vars = vars
        self.terms = terms

    @classmethod
    def build(cls, vars, items):
        vars = tuple(vars)
        terms = {}
        for exps, c in dict(items).items():
            c = _as_scalar(c)
            if not c.is_zero():
                terms[tuple(exps)] = c
        return cls(vars, terms)

    @classmethod
    def zero(cls, vars):
        return cls(tuple(vars), {})

    @classmethod
    def constant(cls, vars, value):
        vars = tuple(vars)
        return cls.build(vars, {(0,) * len(vars): value})

    @classmethod
    def variable(cls, vars, name):
        vars = tuple(vars)
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return cls(vars, {tuple(exps): from_rational(1)})

    @classmethod
    def monomial(cls, vars, exps, coeff=1):
        return cls.build(vars, {tuple(exps): coeff})

    # -- structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, exps):
        return self.terms.get(tuple(exps), from_rational(0))

    def support(self):
        return sorted(self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def num_vars(self):
        return len(self.vars)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __repr__(self):
        return f"SparsePoly({poly_str(self)})"

    # -- arithmetic --------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("polynomials use different variable lists")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicScalar)):
            other = SparsePoly.constant(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            acc = terms.get(exps)
            total = c if acc is None else acc + c
            if total.is_zero():
                terms.pop(exps, None)
            else:
                terms[exps] = total
        return SparsePoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicScalar)):
            other = SparsePoly.constant(self.vars, other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicScalar)):
            c = _as_scalar(other)
            if c.is_zero():
                return SparsePoly.zero(self.vars)
            return SparsePoly(
                self.vars, {e: k * c for e, k in self.terms.items()}
            )
        self._check(other)
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc = terms.get(e)
                terms[e] = ca * cb if acc is None else acc + ca * cb
        return SparsePoly(
            self.vars, {e: c for e, c in terms.items() if not c.is_zero()}
        )

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers take nonnegative integers")
        result = SparsePoly.constant(self.vars, 1)
        for _ in range(k):
            result = result * self
        return result

    def scaled(self, c):
        return self.__mul__(c)


def diff(f, var):
    """Partial derivative with respect to a variable name or index."""
    i = var if isinstance(var, int) else f.vars.index(var)
    terms = {}
    for exps, c in f.terms.items():
        e = exps[i]
        if e:
            ne = list(exps)
            ne[i] = e - 1
            terms[tuple(ne)] = c * e
    return SparsePoly(f.vars, terms)


# -- weighted gradings ----------------------------------------------


def as_weights(w):
    """Normalize weight data to a tuple of weight vectors."""
    w = tuple(w)
    if w and isinstance(w[0], (int, Fraction)):
        return (w,)
    return tuple(tuple(v) for v in w)


def weight_value(weights, exps):
    return min(sum(wi * ei for wi, ei in zip(w, exps)) for w in weights)


def poly_order(f, weights):
    """Smallest weighted degree over the support; None for the zero poly."""
    if not f.terms:
        return None
    weights = as_weights(weights)
    return min(weight_value(weights, e) for e in f.terms)


def wjet(f, weights, bound):
    """Terms of weighted degree at most `bound`."""
    weights = as_weights(weights)
    return SparsePoly(
        f.vars,
        {e: c for e, c in f.terms.items() if weight_value(weights, e) <= bound},
    )


def wlayer(f, weights, d):
    """Terms of weighted degree exactly `d`."""
    weights = as_weights(weights)
    return SparsePoly(
        f.vars,
        {e: c for e, c in f.terms.items() if weight_value(weights, e) == d},
    )


def drop_above(f, weights, bound):
    return wjet(f, weights, bound)


def mul_trunc(a, b, weights, bound):
    """Product with every term of weighted degree beyond `bound` dropped."""
    weights = as_weights(weights)
    if not a.terms or not b.terms:
        return SparsePoly.zero(a.vars)
    bdots = []
    for eb, cb in b.terms.items():
        dots = tuple(sum(wi * ei for wi, ei in zip(w, eb)) for w in weights)
        bdots.append((min(dots), dots, eb, cb))
    bdots.sort(key=lambda item: item[0])
    terms = {}
    for ea, ca in a.terms.items():
        adots = tuple(sum(wi * ei for wi, ei in zip(w, ea)) for w in weights)
        amin = min(adots)
        for bmin, dots, eb, cb in bdots:
            # the per piece minima underestimate the weight of the
            # product term, so once they clear the bound the rest of
            # the sorted list does too
            if amin + bmin > bound:
                break
            if min(x + y for x, y in zip(adots, dots)) > bound:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            acc = terms.get(e)
            terms[e] = ca * cb if acc is None else acc + ca * cb
    return SparsePoly(a.vars, {e: c for e, c in terms.items() if not c.is_zero()})


def substitute(f, images, truncation=None):
    """Evaluate f at polynomial images of its variables.

    `images` maps variable names to polynomials (all over one common
    variable list); names left out are sent to the like-named variable of
    the target list.  Every image must vanish at the origin, so that
    substitution is well defined on power series and respects truncation.
    With `truncation=(weights, bound)` all intermediate products drop
    terms of weighted degree beyond the bound.
    """
    images = dict(images)
    target_vars = None
    for img in images.values():
        if target_vars is None:
            target_vars = img.vars
        elif img.vars != target_vars:
            raise ValueError("images use different variable lists")
    if target_vars is None:
        target_vars = f.vars
    full = []
    for name in f.vars:
        if name in images:
            img = images[name]
        else:
            if name not in target_vars:
                raise ValueError(f"no image given for variable {name}")
            img = SparsePoly.variable(target_vars, name)
        zero_exps = (0,) * len(target_vars)
        if zero_exps in img.terms:
            raise ValueError("substitution images must vanish at the origin")
        full.append(img)

    if truncation is not None:
        weights, bound = truncation
        weights = as_weights(weights)

        def mul(a, b):
            return mul_trunc(a, b, weights, bound)

    else:

        def mul(a, b):
            return a * b

    power_cache = [[SparsePoly.constant(target_vars, 1)] for _ in full]

    def power(i, k):
        cache = power_cache[i]
        while len(cache) <= k:
            cache.append(mul(cache[-1], full[i]))
        return cache[k]

    acc = {}
    for exps, c in sorted(f.terms.items()):
        piece = SparsePoly.constant(target_vars, c)
        for i, e in enumerate(exps):
            if e:
                piece = mul(piece, power(i, e))
        for e, v in piece.terms.items():
            held = acc.get(e)
            acc[e] = v if held is None else held + v
    result = SparsePoly(
        target_vars, {e: c for e, c in acc.items() if not c.is_zero()}
    )
    if truncation is not None:
        result = wjet(result, weights, bound)
    return result


# -- canonical term order and printing -------------------------------


def term_sort_key(exps):
    """Total degree first, then earlier variables with higher exponents."""
    return (sum(exps), tuple(-e for e in exps))


def sorted_terms(f):
    return sorted(f.terms.items(), key=lambda item: term_sort_key(item[0]))


def poly_str(f):
    if not f.terms:
        return "0"
    parts = []
    for exps, c in sorted_terms(f):
        factors = []
        for name, e in zip(f.vars, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if c.is_rational():
            q = c.as_fraction()
            if not mono:
                text = str(q)
            elif q == 1:
                text = mono
            elif q == -1:
                text = "-" + mono
            else:
                text = f"{q}*{mono}"
        else:
            body = f"({format_scalar(c)})"
            text = f"{body}*{mono}" if mono else body
        parts.append(text)
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


# -- parsing ---------------------------------------------------------


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if text.startswith("**", i):
            tokens.append(("op", "^", i))
            i += 2
            continue
        if ch in "+-*^()/":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.pos = 0
        self.vars = vars

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.take()

    def parse_expr(self):
        kind, value, pos = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            self.take()
            negate = value == "-"
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                term = self.parse_term()
                result = result - term if value == "-" else result + term
            else:
                return result

    def parse_term(self):
        result = self.parse_factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.take()
                result = result * self.parse_factor()
            elif kind in ("int", "name") or (kind == "op" and value == "("):
                raise ParseError(
                    "expected an operator; multiplication needs an explicit '*'",
                    pos,
                )
            else:
                return result

    def parse_factor(self):
        base = self.parse_base()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "^":
                self.take()
                kind, value, pos = self.peek()
                if kind != "int":
                    raise ParseError("expected a nonnegative integer exponent", pos)
                self.take()
                base = base ** int(value)
            else:
                return base

    def parse_base(self):
        kind, value, pos = self.take()
        if kind == "int":
            num = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == "op" and value2 == "/":
                self.take()
                kind3, value3, pos3 = self.peek()
                if kind3 != "int":
                    raise ParseError("expected an integer denominator", pos3)
                self.take()
                den = int(value3)
                if den == 0:
                    raise ParseError("zero denominator", pos3)
                return SparsePoly.constant(self.vars, Fraction(num, den))
            return SparsePoly.constant(self.vars, num)
        if kind == "name":
            if value not in self.vars:
                raise ParseError(f"unknown variable {value!r}", pos)
            return SparsePoly.variable(self.vars, value)
        if kind == "op" and value == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if kind == "op" and value == "-":
            return -self.parse_factor()
        raise ParseError("expected a number, variable, or '('", pos)


def parse_poly(text, vars=None):
    """Parse a polynomial with rational coefficients.

    Without an explicit variable list, identifiers found in the text
    become the variables, ordered alphabetically.
    """
    tokens = _tokenize(text)
    if vars is None:
        seen = {v for kind, v, _ in tokens if kind == "name"}
        vars = tuple(sorted(seen)) or ("x",)
    else:
        vars = tuple(vars)
    parser = _Parser(tokens, vars)
    result = parser.parse_expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {value!r}", pos)
    return result
