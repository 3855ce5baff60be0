"""Effective Boolean algebras over integers and Unicode codepoints.

A predicate denotes a set of domain elements.  Two concrete algebra
instances are provided:

* ``INTEGERS`` -- arbitrary-precision integers with closed intervals
  (the upper bound may be infinite), divisibility tests ``div k``
  (residue 0) and singleton ``atom`` predicates.
* ``UNICODE`` -- codepoints 0..0x10FFFF with intervals and atoms.

Satisfiability, witness extraction and cardinality thresholds are decided
exactly by normalising a predicate into disjoint cells: one residue class
per modulus-lcm, each restricted to a finite union of intervals.  No
external solver is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class AlgebraError(ValueError):
    """Raised on malformed predicates or algebra-instance mismatches."""


# ---------------------------------------------------------------------------
# Predicate syntax trees


class Predicate:
    __slots__ = ()


@dataclass(frozen=True)
class TruePred(Predicate):
    pass


@dataclass(frozen=True)
class FalsePred(Predicate):
    pass


@dataclass(frozen=True)
class Interval(Predicate):
    # Closed interval; None means unbounded on that side.
    lo: Optional[int]
    hi: Optional[int]


@dataclass(frozen=True)
class Div(Predicate):
    k: int


@dataclass(frozen=True)
class Atom(Predicate):
    value: int


@dataclass(frozen=True)
class Not(Predicate):
    arg: Predicate


@dataclass(frozen=True)
class And(Predicate):
    args: tuple


@dataclass(frozen=True)
class Or(Predicate):
    args: tuple


TRUE = TruePred()
FALSE = FalsePred()


def conj(parts: Sequence[Predicate]) -> Predicate:
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Sequence[Predicate]) -> Predicate:
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


# ---------------------------------------------------------------------------
# Interval-set machinery.  An "ivs" is a tuple of disjoint, sorted, closed
# integer intervals (lo, hi) where lo=None / hi=None stand for -inf / +inf.


def _iv_norm(ivs: list) -> tuple:
    def key(iv):
        lo = iv[0]
        return -math.inf if lo is None else lo

    ivs = sorted((iv for iv in ivs if not _iv_empty(iv)), key=key)
    out: list = []
    for lo, hi in ivs:
        if out:
            plo, phi = out[-1]
            # merge touching or overlapping intervals
            if phi is None or lo is None or lo <= phi + 1:
                if phi is not None and (hi is None or hi > phi):
                    out[-1] = (plo, hi)
                continue
        out.append((lo, hi))
    return tuple(out)


def _iv_empty(iv) -> bool:
    lo, hi = iv
    return lo is not None and hi is not None and lo > hi


def _iv_inter_one(a, b):
    alo, ahi = a
    blo, bhi = b
    lo = blo if alo is None else alo if blo is None else max(alo, blo)
    hi = bhi if ahi is None else ahi if bhi is None else min(ahi, bhi)
    return (lo, hi)


def iv_intersect(a: tuple, b: tuple) -> tuple:
    out = []
    for x in a:
        for y in b:
            iv = _iv_inter_one(x, y)
            if not _iv_empty(iv):
                out.append(iv)
    return _iv_norm(out)


def iv_union(a: tuple, b: tuple) -> tuple:
    return _iv_norm(list(a) + list(b))


def iv_complement(a: tuple, domain: tuple) -> tuple:
    # complement over all integers, then clipped to the domain
    out = []
    prev = None  # next uncovered point; None = -inf initially
    open_left = True
    for lo, hi in a:
        if lo is None:
            open_left = False
        else:
            if open_left:
                out.append((None, lo - 1))
                open_left = False
            elif prev is not None and prev <= lo - 1:
                out.append((prev, lo - 1))
        if hi is None:
            return iv_intersect(tuple(out), domain)
        prev = hi + 1
    if open_left:
        out.append((None, None))
    else:
        out.append((prev, None))
    return iv_intersect(tuple(out), domain)


def _first_in_class(lo: int, res: int, L: int) -> int:
    """Least x >= lo with x === res (mod L)."""
    return lo + ((res - lo) % L)


def _last_in_class(hi: int, res: int, L: int) -> int:
    """Greatest x <= hi with x === res (mod L)."""
    return hi - ((hi - res) % L)


# ---------------------------------------------------------------------------
# Minterms


@dataclass(frozen=True)
class Minterm:
    """A minimal satisfiable sign-assignment over a source predicate set."""

    conjunction: Predicate
    positives: frozenset
    bits: tuple
    source_set_id: int

    def __repr__(self):  # compact, for debugging normalized automata
        return "m" + "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class MintermSet:
    sources: tuple
    minterms: tuple

    def __iter__(self):
        return iter(self.minterms)

    def __len__(self):
        return len(self.minterms)


# ---------------------------------------------------------------------------
# Algebras


class Algebra:
    """Base class; concrete instances fix the domain and witness order."""

    name = "?"
    _domain_ivs: tuple = ((None, None),)

    def __init__(self):
        self._size_cache: dict = {}

    # -- structural checks -------------------------------------------------

    def check(self, p: Predicate) -> None:
        if isinstance(p, (TruePred, FalsePred)):
            return
        if isinstance(p, Interval):
            for b in (p.lo, p.hi):
                if b is not None and not self._in_domain(b):
                    raise AlgebraError(f"interval bound {b!r} outside {self.name} domain")
            return
        if isinstance(p, Atom):
            if not self._in_domain(p.value):
                raise AlgebraError(f"atom {p.value!r} outside {self.name} domain")
            return
        if isinstance(p, Div):
            self._check_div(p)
            return
        if isinstance(p, Not):
            self.check(p.arg)
            return
        if isinstance(p, (And, Or)):
            for q in p.args:
                self.check(q)
            return
        raise AlgebraError(f"unknown predicate node {p!r}")

    def _check_div(self, p: Div) -> None:
        raise AlgebraError(f"div predicates are not part of the {self.name} algebra")

    def _in_domain(self, a) -> bool:
        raise NotImplementedError

    # -- denotation --------------------------------------------------------

    def denotes(self, p: Predicate, a: int) -> bool:
        """True iff a is in the denotation of p."""
        if not isinstance(a, int) or isinstance(a, bool) or not self._in_domain(a):
            raise AlgebraError(f"{a!r} is not a {self.name} domain element")
        self.check(p)
        return self._eval(p, a)

    def _eval(self, p: Predicate, a: int) -> bool:
        if isinstance(p, TruePred):
            return True
        if isinstance(p, FalsePred):
            return False
        if isinstance(p, Interval):
            return (p.lo is None or a >= p.lo) and (p.hi is None or a <= p.hi)
        if isinstance(p, Div):
            return a % p.k == 0
        if isinstance(p, Atom):
            return a == p.value
        if isinstance(p, Not):
            return not self._eval(p.arg, a)
        if isinstance(p, And):
            return all(self._eval(q, a) for q in p.args)
        if isinstance(p, Or):
            return any(self._eval(q, a) for q in p.args)
        raise AlgebraError(f"unknown predicate node {p!r}")

    # -- connectives -------------------------------------------------------

    def build(self, connective: str, operands: Sequence[Predicate]) -> Predicate:
        operands = tuple(operands)
        for q in operands:
            self.check(q)
        if connective == "not":
            if len(operands) != 1:
                raise AlgebraError("not takes exactly one operand")
            return Not(operands[0])
        if connective == "and":
            if len(operands) < 2:
                raise AlgebraError("and takes at least two operands")
            return And(operands)
        if connective == "or":
            if len(operands) < 2:
                raise AlgebraError("or takes at least two operands")
            return Or(operands)
        raise AlgebraError(f"unknown connective {connective!r}")

    # -- cell decomposition ------------------------------------------------

    def _moduli_lcm(self, p: Predicate) -> int:
        if isinstance(p, Div):
            return p.k
        if isinstance(p, Not):
            return self._moduli_lcm(p.arg)
        if isinstance(p, (And, Or)):
            out = 1
            for q in p.args:
                out = math.lcm(out, self._moduli_lcm(q))
            return out
        return 1

    def _restrict(self, p: Predicate, res: int, L: int) -> tuple:
        """Interval hull of [[p]] within the residue class res (mod L).

        Only elements === res (mod L) inside the returned intervals are
        meant; interval arithmetic never needs to know the class.
        """
        dom = self._domain_ivs
        if isinstance(p, TruePred):
            return dom
        if isinstance(p, FalsePred):
            return ()
        if isinstance(p, Interval):
            return iv_intersect(((p.lo, p.hi),), dom)
        if isinstance(p, Div):
            return dom if res % p.k == 0 else ()
        if isinstance(p, Atom):
            return iv_intersect(((p.value, p.value),), dom) if p.value % L == res else ()
        if isinstance(p, Not):
            return iv_complement(self._restrict(p.arg, res, L), dom)
        if isinstance(p, And):
            out = dom
            for q in p.args:
                out = iv_intersect(out, self._restrict(q, res, L))
            return out
        if isinstance(p, Or):
            out: tuple = ()
            for q in p.args:
                out = iv_union(out, self._restrict(q, res, L))
            return out
        raise AlgebraError(f"unknown predicate node {p!r}")

    def _cells(self, p: Predicate):
        L = self._moduli_lcm(p)
        for res in range(L):
            ivs = self._restrict(p, res, L)
            if ivs:
                yield res, L, ivs

    # -- decision procedures -------------------------------------------------

    def is_sat(self, p: Predicate) -> bool:
        self.check(p)
        for res, L, ivs in self._cells(p):
            for lo, hi in ivs:
                if lo is None or hi is None:
                    return True
                if _first_in_class(lo, res, L) <= hi:
                    return True
        return False

    def has_min_size(self, p: Predicate, k: int) -> bool:
        """True iff the denotation holds at least k distinct elements.

        Counting is capped at k, so infinite denotations are fine.
        """
        if k < 0:
            raise AlgebraError("k must be non-negative")
        if k == 0:
            self.check(p)
            return True
        cached = self._size_cache.get((p, k))
        if cached is not None:
            return cached
        self.check(p)
        result = self._count_at_least(p, k)
        self._size_cache[(p, k)] = result
        return result

    def _count_at_least(self, p: Predicate, k: int) -> bool:
        total = 0
        for res, L, ivs in self._cells(p):
            for lo, hi in ivs:
                if lo is None or hi is None:
                    return True
                first = _first_in_class(lo, res, L)
                if first <= hi:
                    total += (hi - first) // L + 1
                    if total >= k:
                        return True
        return False

    def witness(self, p: Predicate, excluded: Iterable[int] = ()) -> Optional[int]:
        """Deterministic pick from [[p]] minus the excluded set, or None.

        Exclusions are folded into the predicate itself so the cell
        decomposition accounts for them exactly.
        """
        self.check(p)
        parts = [p] + [Not(Atom(e)) for e in sorted(set(excluded)) if self._in_domain(e)]
        return self._least(conj(parts))

    def _least(self, p: Predicate) -> Optional[int]:
        raise NotImplementedError

    def sort_key(self, a: int):
        """Key realizing the canonical witness order of the algebra."""
        return a

    # -- minterms ------------------------------------------------------------

    def minterms(self, predicates: Sequence[Predicate]) -> MintermSet:
        """All satisfiable sign-assignments over the given predicate set.

        Duplicates are removed (keeping first occurrence).  Cells are grown
        one predicate at a time, discarding unsatisfiable branches early, so
        the work is proportional to the number of live minterms rather than
        2^n in typical cases.
        """
        sources: list = []
        for q in predicates:
            self.check(q)
            if q not in sources:
                sources.append(q)
        src = tuple(sources)
        set_id = hash(src)
        cells = [((), ())]  # (literal tuple, bits tuple)
        for q in src:
            grown = []
            for lits, bits in cells:
                pos = lits + (q,)
                if self.is_sat(conj(pos)):
                    grown.append((pos, bits + (1,)))
                neg = lits + (Not(q),)
                if self.is_sat(conj(neg)):
                    grown.append((neg, bits + (0,)))
            cells = grown
        out = []
        for lits, bits in cells:
            positives = frozenset(q for q, b in zip(src, bits) if b)
            out.append(Minterm(conj(lits), positives, bits, set_id))
        return MintermSet(src, tuple(out))

    def minterm_of(self, mts: MintermSet, a: int) -> Minterm:
        """The unique minterm containing the element a."""
        for m in mts.minterms:
            if self.denotes(m.conjunction, a):
                return m
        raise AlgebraError(f"no minterm contains {a!r}")  # pragma: no cover

    # -- concrete syntax -----------------------------------------------------

    def parse(self, text: str) -> Predicate:
        p, pos = self._parse_pred(text, _skip_ws(text, 0))
        pos = _skip_ws(text, pos)
        if pos != len(text):
            raise AlgebraError(f"trailing input at position {pos}: {text[pos:]!r}")
        self.check(p)
        return p

    def _parse_pred(self, s: str, i: int):
        i = _skip_ws(s, i)
        if i >= len(s):
            raise AlgebraError("unexpected end of predicate")
        if s.startswith("true", i):
            return TRUE, i + 4
        if s.startswith("false", i):
            return FALSE, i + 5
        if s.startswith("div", i):
            i = _skip_ws(s, i + 3)
            k, i = _parse_int(s, i)
            if k < 1:
                raise AlgebraError("div modulus must be >= 1")
            return Div(k), i
        if s.startswith("atom", i):
            i = _skip_ws(s, i + 4)
            v, i = self._parse_literal(s, i)
            return Atom(v), i
        c = s[i]
        if c == "[":
            lo, i = self._parse_bound(s, _skip_ws(s, i + 1), low=True)
            if i >= len(s) or s[i] != "-":
                raise AlgebraError(f"expected '-' in interval at position {i}")
            hi, i = self._parse_bound(s, _skip_ws(s, i + 1), low=False)
            i = _skip_ws(s, i)
            if i >= len(s) or s[i] != "]":
                raise AlgebraError(f"expected ']' at position {i}")
            return Interval(lo, hi), i + 1
        if c == "!":
            i = _skip_ws(s, i + 1)
            if i >= len(s) or s[i] != "(":
                raise AlgebraError(f"expected '(' after '!' at position {i}")
            p, i = self._parse_pred(s, i + 1)
            i = _skip_ws(s, i)
            if i >= len(s) or s[i] != ")":
                raise AlgebraError(f"expected ')' at position {i}")
            return Not(p), i + 1
        if c == "(":
            left, i = self._parse_pred(s, i + 1)
            i = _skip_ws(s, i)
            if i >= len(s) or s[i] not in "&|":
                raise AlgebraError(f"expected '&' or '|' at position {i}")
            op = s[i]
            right, i = self._parse_pred(s, i + 1)
            i = _skip_ws(s, i)
            if i >= len(s) or s[i] != ")":
                raise AlgebraError(f"expected ')' at position {i}")
            node = And if op == "&" else Or
            return node((left, right)), i + 1
        raise AlgebraError(f"cannot parse predicate at position {i}: {s[i:]!r}")

    def _parse_bound(self, s: str, i: int, low: bool):
        if low and s.startswith("-inf", i):
            return None, i + 4
        if not low and s.startswith("inf", i):
            return None, i + 3
        return self._parse_literal(s, i)

    def _parse_literal(self, s: str, i: int):
        raise NotImplementedError

    def show(self, p: Predicate) -> str:
        if isinstance(p, TruePred):
            return "true"
        if isinstance(p, FalsePred):
            return "false"
        if isinstance(p, Interval):
            lo = "-inf" if p.lo is None else self._show_literal(p.lo)
            hi = "inf" if p.hi is None else self._show_literal(p.hi)
            return f"[{lo}-{hi}]"
        if isinstance(p, Div):
            return f"div {p.k}"
        if isinstance(p, Atom):
            return f"atom {self._show_literal(p.value)}"
        if isinstance(p, Not):
            return f"!({self.show(p.arg)})"
        if isinstance(p, (And, Or)):
            # n-ary connectives render as left-nested binary pairs
            op = " & " if isinstance(p, And) else " | "
            out = self.show(p.args[0])
            for q in p.args[1:]:
                out = f"({out}{op}{self.show(q)})"
            return out
        raise AlgebraError(f"unknown predicate node {p!r}")

    def _show_literal(self, v: int) -> str:
        raise NotImplementedError


def _skip_ws(s: str, i: int) -> int:
    while i < len(s) and s[i] == " ":
        i += 1
    return i


def _parse_int(s: str, i: int):
    j = i
    if j < len(s) and s[j] == "-":
        j += 1
    k = j
    while k < len(s) and s[k].isdigit():
        k += 1
    if k == j:
        raise AlgebraError(f"expected integer at position {i}")
    return int(s[i:k]), k


class IntegerAlgebra(Algebra):
    """All integers.  The canonical witness order enumerates 0, 1, 2, ...
    and then -1, -2, ..., so every non-empty denotation has a least element
    even when it is unbounded below."""

    name = "int"
    _domain_ivs = ((None, None),)

    def _in_domain(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool)

    def _check_div(self, p: Div) -> None:
        if not isinstance(p.k, int) or p.k < 1:
            raise AlgebraError("div modulus must be a positive integer")

    def _least(self, p: Predicate) -> Optional[int]:
        best_nonneg = None
        best_neg = None
        for res, L, ivs in self._cells(p):
            for lo, hi in ivs:
                # least non-negative element of the cell
                start = 0 if lo is None else max(lo, 0)
                x = _first_in_class(start, res, L)
                if (hi is None or x <= hi) and (lo is None or x >= lo):
                    if best_nonneg is None or x < best_nonneg:
                        best_nonneg = x
                # greatest negative element of the cell
                end = -1 if hi is None else min(hi, -1)
                y = _last_in_class(end, res, L)
                if y <= -1 and (lo is None or y >= lo):
                    if best_neg is None or y > best_neg:
                        best_neg = y
        if best_nonneg is not None:
            return best_nonneg
        return best_neg

    def sort_key(self, a: int):
        return (0, a) if a >= 0 else (1, -a)

    def _parse_literal(self, s: str, i: int):
        return _parse_int(s, i)

    def _show_literal(self, v: int) -> str:
        return str(v)


MAX_CODEPOINT = 0x10FFFF


class UnicodeAlgebra(Algebra):
    """Codepoints 0..0x10FFFF ordered naturally; no divisibility tests."""

    name = "unicode"
    _domain_ivs = ((0, MAX_CODEPOINT),)

    def _in_domain(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a <= MAX_CODEPOINT

    def _least(self, p: Predicate) -> Optional[int]:
        best = None
        for res, L, ivs in self._cells(p):
            for lo, hi in ivs:
                x = _first_in_class(0 if lo is None else lo, res, L)
                if hi is None or x <= hi:
                    if best is None or x < best:
                        best = x
        return best

    def _parse_literal(self, s: str, i: int):
        if s.startswith("U+", i):
            j = i + 2
            k = j
            while k < len(s) and s[k] in "0123456789abcdefABCDEF":
                k += 1
            if k == j:
                raise AlgebraError(f"expected hex digits at position {j}")
            v = int(s[j:k], 16)
            if v > MAX_CODEPOINT:
                raise AlgebraError(f"codepoint U+{s[j:k]} out of range")
            return v, k
        if s[i] == "'":
            if i + 2 >= len(s) or s[i + 2] != "'":
                raise AlgebraError(f"malformed character literal at position {i}")
            return ord(s[i + 1]), i + 3
        raise AlgebraError(f"expected character literal at position {i}")

    def _show_literal(self, v: int) -> str:
        if 0x20 <= v <= 0x7E and v != 0x27:
            return f"'{chr(v)}'"
        return f"U+{v:04X}"


INTEGERS = IntegerAlgebra()
UNICODE = UnicodeAlgebra()

_BY_NAME = {INTEGERS.name: INTEGERS, UNICODE.name: UNICODE}


def algebra_by_name(name: str) -> Algebra:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise AlgebraError(f"unknown algebra {name!r}") from None
