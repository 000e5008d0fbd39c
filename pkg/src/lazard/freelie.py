"""Truncated free associative algebra, exp/log series and the BCH series.

Words are tuples of letter indices (0 = x, 1 = y, ...).  Coefficients are
exact ``Fraction``s; reduction modulo p^e happens only when a series is
evaluated inside a concrete Lie ring or group.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

LETTERS = "xyzuvw"


class NotLieElement(ValueError):
    pass


# ------------------------------------------------------------- Lyndon words

def is_lyndon(word: tuple) -> bool:
    n = len(word)
    if n == 0:
        return False
    return all(word < word[i:] + word[:i] for i in range(1, n))


@lru_cache(maxsize=None)
def lyndon_words(alphabet_size: int, max_weight: int) -> tuple:
    """All Lyndon words of length <= max_weight, length-then-lex order."""
    out = []
    for n in range(1, max_weight + 1):
        out.extend(w for w in product(range(alphabet_size), repeat=n) if is_lyndon(w))
    return tuple(out)


def standard_factorization(word: tuple) -> tuple:
    """w = u v with v the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorization")


@lru_cache(maxsize=None)
def bracketing(word: tuple):
    """Standard bracketing as a nested pair tree with int leaves."""
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (bracketing(u), bracketing(v))


def tree_weight(tree) -> int:
    return 1 if isinstance(tree, int) else tree_weight(tree[0]) + tree_weight(tree[1])


def tree_str(tree, letters: str = LETTERS) -> str:
    if isinstance(tree, int):
        return letters[tree]
    return f"[{tree_str(tree[0], letters)},{tree_str(tree[1], letters)}]"


def word_str(word: tuple, letters: str = LETTERS) -> str:
    return "".join(letters[i] for i in word)


@dataclass(frozen=True)
class LyndonWord:
    word: tuple

    def __post_init__(self):
        if not is_lyndon(self.word):
            raise ValueError(f"{self.word} is not a Lyndon word")

    @property
    def weight(self) -> int:
        return len(self.word)

    @property
    def tree(self):
        return bracketing(self.word)

    def __str__(self):
        return word_str(self.word)


def lyndon_basis(alphabet_size: int, max_weight: int) -> list[LyndonWord]:
    return [LyndonWord(w) for w in lyndon_words(alphabet_size, max_weight)]


def necklace_count(alphabet_size: int, n: int) -> int:
    """Number of Lyndon words of length n (Witt's formula)."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(n // d) * alphabet_size**d
    return total // n


def _mobius(n: int) -> int:
    out, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            out = -out
        k += 1
    return -out if n > 1 else out


# ----------------------------------------------------- free associative alg

class FreeAssocElement:
    """Element of the free associative algebra truncated above ``cutoff``."""

    __slots__ = ("terms", "cutoff")

    def __init__(self, terms=None, cutoff: int = 3):
        self.cutoff = cutoff
        self.terms = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            c = Fraction(c)
            if c and len(w) <= cutoff:
                self.terms[w] = self.terms.get(w, Fraction(0)) + c
        self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def one(cls, cutoff):
        return cls({(): 1}, cutoff)

    @classmethod
    def letter(cls, i, cutoff):
        return cls({(i,): 1}, cutoff)

    def _wrap(self, other):
        if isinstance(other, FreeAssocElement):
            return other
        return FreeAssocElement({(): other}, self.cutoff)

    def __add__(self, other):
        other = self._wrap(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return FreeAssocElement(t, min(self.cutoff, other.cutoff))

    __radd__ = __add__

    def __neg__(self):
        return FreeAssocElement({w: -c for w, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, FreeAssocElement):
            q = Fraction(other)
            return FreeAssocElement({w: c * q for w, c in self.terms.items()}, self.cutoff)
        cut = min(self.cutoff, other.cutoff)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if len(w1) + len(w2) <= cut:
                    w = w1 + w2
                    t[w] = t.get(w, Fraction(0)) + c1 * c2
        return FreeAssocElement(t, cut)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        other = self._wrap(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def homogeneous(self, weight: int) -> "FreeAssocElement":
        return FreeAssocElement({w: c for w, c in self.terms.items() if len(w) == weight}, self.cutoff)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            parts.append(f"{self.terms[w]}*{word_str(w) or '1'}")
        return " + ".join(parts)


def lie_bracket(a: FreeAssocElement, b: FreeAssocElement) -> FreeAssocElement:
    return a * b - b * a


def exp_trunc(a: FreeAssocElement) -> FreeAssocElement:
    if a.constant() != 0:
        raise ValueError("exp_trunc needs zero constant term")
    out = FreeAssocElement.one(a.cutoff)
    power = FreeAssocElement.one(a.cutoff)
    for k in range(1, a.cutoff + 1):
        power = power * a
        if power.is_zero():
            break
        out = out + power * Fraction(1, factorial(k))
    return out


def log_trunc(u: FreeAssocElement) -> FreeAssocElement:
    if u.constant() != 1:
        raise ValueError("log_trunc needs constant term 1")
    a = u - 1
    out = FreeAssocElement({}, u.cutoff)
    power = FreeAssocElement.one(u.cutoff)
    for k in range(1, u.cutoff + 1):
        power = power * a
        if power.is_zero():
            break
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out


@lru_cache(maxsize=None)
def _expand_tree(tree, cutoff):
    if isinstance(tree, int):
        return FreeAssocElement.letter(tree, cutoff)
    return lie_bracket(_expand_tree(tree[0], cutoff), _expand_tree(tree[1], cutoff))


def expand_bracket(tree, cutoff: int) -> FreeAssocElement:
    """Associative expansion of a bracket tree (e.g. [x,y] -> xy - yx)."""
    return _expand_tree(tree, cutoff)


def project_to_lie(a: FreeAssocElement, max_weight: int | None = None) -> dict:
    """Coordinates of ``a`` on standard-bracketed Lyndon words.

    Uses the fact that the bracketing of a Lyndon word w expands to w plus
    lexicographically larger words of the same weight, so the smallest
    surviving monomial must be Lyndon.  Raises ``NotLieElement`` otherwise.
    """
    if a.constant() != 0:
        raise ValueError("project_to_lie needs zero constant term")
    top = a.cutoff if max_weight is None else min(max_weight, a.cutoff)
    out = {}
    for weight in range(1, top + 1):
        comp = dict(a.homogeneous(weight).terms)
        while comp:
            m = min(comp)
            if not is_lyndon(m):
                raise NotLieElement(f"monomial {word_str(m)} cannot lead a Lie element")
            c = comp[m]
            out[m] = c
            for w, d in expand_bracket(bracketing(m), weight).terms.items():
                v = comp.get(w, Fraction(0)) - c * d
                if v:
                    comp[w] = v
                else:
                    comp.pop(w, None)
    return out


def lie_from_coords(coords: dict, cutoff: int) -> FreeAssocElement:
    out = FreeAssocElement({}, cutoff)
    for w, c in coords.items():
        out = out + expand_bracket(bracketing(tuple(w)), cutoff) * c
    return out


# ------------------------------------------------------------------- BCH

@dataclass(frozen=True)
class BchTable:
    """H(x, y) = log(exp x exp y) on standard-bracketed Lyndon words."""

    c: int
    entries: tuple  # (word, tree, Fraction), Lyndon order, nonzero only

    def coefficient(self, word) -> Fraction:
        for w, _, q in self.entries:
            if w == tuple(word):
                return q
        return Fraction(0)

    def as_assoc(self) -> FreeAssocElement:
        return lie_from_coords({w: q for w, _, q in self.entries}, self.c)

    def max_denominator_prime(self) -> int:
        """Largest prime dividing any denominator (1 if none)."""
        best = 1
        for _, _, q in self.entries:
            d = q.denominator
            k = 2
            while d > 1:
                while d % k == 0:
                    best = max(best, k)
                    d //= k
                k += 1
        return best

    def to_json(self) -> list:
        return [
            {
                "word": word_str(w),
                "bracketing": tree_str(t),
                "numerator": q.numerator,
                "denominator": q.denominator,
            }
            for w, t, q in self.entries
        ]


def bch_series(c: int) -> FreeAssocElement:
    x = FreeAssocElement.letter(0, c)
    y = FreeAssocElement.letter(1, c)
    return log_trunc(exp_trunc(x) * exp_trunc(y))


@lru_cache(maxsize=None)
def bch_table(c: int) -> BchTable:
    if c < 1:
        raise ValueError("class must be >= 1")
    coords = project_to_lie(bch_series(c), c)
    entries = tuple(
        (w, bracketing(w), coords[w]) for w in lyndon_words(2, c) if coords.get(w, 0) != 0
    )
    return BchTable(c, entries)


# ---------------------------------------------------- inverse BCH as words

def _group_inv(u):
    return exp_trunc(-log_trunc(u))


def _group_pow(u, q):
    return exp_trunc(log_trunc(u) * Fraction(q))


def commutator_word(tree, gens, mul, inv):
    """Evaluate the group commutator tree with (a, b) = a^-1 b^-1 a b."""
    if isinstance(tree, int):
        return gens[tree]
    a = commutator_word(tree[0], gens, mul, inv)
    b = commutator_word(tree[1], gens, mul, inv)
    return mul(mul(inv(a), inv(b)), mul(a, b))


def _word_value(factors, gens, cutoff):
    out = FreeAssocElement.one(cutoff)
    for tree, q in factors:
        cw = commutator_word(tree, gens, lambda a, b: a * b, _group_inv)
        out = out * _group_pow(cw, q)
    return out


def _solve_word(start, target, c):
    """Append commutator powers to ``start`` until its log matches ``target``."""
    gens = (exp_trunc(FreeAssocElement.letter(0, c)), exp_trunc(FreeAssocElement.letter(1, c)))
    factors = list(start)
    for _ in range(c + 1):
        diff = target - log_trunc(_word_value(factors, gens, c))
        if diff.is_zero():
            return tuple(factors)
        low = min(len(w) for w in diff.terms)
        coords = project_to_lie(diff.homogeneous(low), low)
        for w in lyndon_words(2, low):
            q = coords.get(w, 0)
            if q:
                factors.append((bracketing(w), Fraction(q)))
    raise RuntimeError("inverse BCH word did not stabilise")


@lru_cache(maxsize=None)
def inverse_bch_words(c: int) -> tuple:
    """Group words realising Lie sum and bracket, valid up to class ``c``.

    Returns ``(sum_word, bracket_word)``; each is a tuple of
    ``(commutator tree, rational exponent)`` factors whose ordered product
    equals exp(log a + log b), resp. exp([log a, log b]).
    """
    x = FreeAssocElement.letter(0, c)
    y = FreeAssocElement.letter(1, c)
    h1 = _solve_word(((0, Fraction(1)), (1, Fraction(1))), x + y, c)
    h2 = _solve_word((((0, 1), Fraction(1)),), lie_bracket(x, y), c) if c >= 2 else ()
    return h1, h2


def inverse_bch_identities(c: int) -> dict:
    """Per-weight pass/fail of h1(exp a, exp b) = exp(a+b), h2 = exp([a,b])."""
    x = FreeAssocElement.letter(0, c)
    y = FreeAssocElement.letter(1, c)
    A, B = exp_trunc(x), exp_trunc(y)
    h1 = exp_trunc(log_trunc(A) + log_trunc(B))
    h2 = exp_trunc(lie_bracket(log_trunc(A), log_trunc(B)))
    t1, t2 = exp_trunc(x + y), exp_trunc(lie_bracket(x, y))
    w1, w2 = inverse_bch_words(c)
    v1 = _word_value(w1, (A, B), c)
    v2 = _word_value(w2, (A, B), c) if w2 else FreeAssocElement.one(c)
    report = {"class": c, "weights": []}
    for w in range(0, c + 1):
        report["weights"].append(
            {
                "weight": w,
                "h1": (h1.homogeneous(w) == t1.homogeneous(w)) and (v1.homogeneous(w) == t1.homogeneous(w)),
                "h2": (h2.homogeneous(w) == t2.homogeneous(w)) and (v2.homogeneous(w) == t2.homogeneous(w)),
            }
        )
    report["ok"] = all(r["h1"] and r["h2"] for r in report["weights"])
    return report
