"""Words, substitutions, splits and prefix-suffix decompositions.

Words are plain Python strings whose characters are chr(0..r-1); the
Alphabet maps them to display names.  Applying a substitution is a
str.translate call, so iterating to windows of 10^5..10^7 symbols stays
cheap.  A DottedWord separates the negative part (indices -m..-1) from
the non-negative part (indices 0..l).

A PrefixSuffixSeq stores an ultimately periodic decomposition in the
orientation where the image of each level's center reproduces the triple
one level below, wrapping around the period; ``expand`` turns it into the
central window of the corresponding point.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .events import FixedPointCompletionWarning

Word = str  # characters are chr(letter_index)

_DEFAULT_BUDGET = 10_000_000


class LengthBudgetExceeded(RuntimeError):
    """A word operation would exceed the configured symbol budget."""


class InsufficientGrowth(RuntimeError):
    """A window side cannot be completed even by a fixed-point limit."""


class ParseError(ValueError):
    """Malformed substitution text; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def symbol_budget() -> int:
    raw = os.environ.get("DENJOY_BUDGET_SYMBOLS")
    return int(raw) if raw else _DEFAULT_BUDGET


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite symbol set; index i is written as chr(i) inside words."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate symbol names")

    @property
    def size(self) -> int:
        return len(self.names)

    def letter(self, index: int) -> str:
        return chr(index)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def encode(self, names: Iterable[str]) -> Word:
        return "".join(chr(self.index(n)) for n in names)

    def render(self, word: Word) -> str:
        return " ".join(self.names[ord(c)] for c in word)

    def letters(self) -> Iterator[str]:
        return (chr(i) for i in range(self.size))


@dataclass(frozen=True)
class DottedWord:
    """Finite window of a two-sided sequence; ``neg`` holds indices -m..-1."""

    neg: Word
    pos: Word
    annotations: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.neg) + len(self.pos)

    def __getitem__(self, n: int) -> str:
        if n >= 0:
            return self.pos[n]
        return self.neg[n]

    @property
    def min_index(self) -> int:
        return -len(self.neg)

    @property
    def max_index(self) -> int:
        return len(self.pos) - 1

    def restrict(self, radius: int) -> "DottedWord":
        if radius > len(self.neg) or radius + 1 > len(self.pos):
            raise ValueError("window too small for requested radius")
        return DottedWord(self.neg[len(self.neg) - radius:], self.pos[:radius + 1])

    def render(self, alphabet: Alphabet) -> str:
        left = alphabet.render(self.neg)
        right = alphabet.render(self.pos)
        return (left + " . " + right) if left else ". " + right


@dataclass(frozen=True)
class SplitTriple:
    """One way of writing the image of ``parent`` as prefix + center + suffix."""

    parent: str
    prefix: Word
    center: str
    suffix: Word

    @property
    def word(self) -> Word:
        return self.prefix + self.center + self.suffix

    @property
    def position(self) -> int:
        return len(self.prefix)


class Substitution:
    """Map from letters to nonempty words over the same alphabet."""

    def __init__(self, alphabet: Alphabet, images: Iterable[Word]):
        self.alphabet = alphabet
        self.images = tuple(images)
        if len(self.images) != alphabet.size:
            raise ValueError("one image required per letter")
        if any(not img for img in self.images):
            raise ValueError("images must be nonempty")
        if any(ord(c) >= alphabet.size for img in self.images for c in img):
            raise ValueError("image letter outside alphabet")
        self._table = {i: self.images[i] for i in range(alphabet.size)}

    @classmethod
    def from_names(cls, names: Iterable[str], rules: dict[str, list[str]]):
        alphabet = Alphabet(tuple(names))
        return cls(alphabet, [alphabet.encode(rules[n]) for n in alphabet.names])

    def image(self, letter: str) -> Word:
        return self.images[ord(letter)]

    def __call__(self, word: Word) -> Word:
        return word.translate(self._table)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Substitution)
                and self.alphabet == other.alphabet
                and self.images == other.images)

    def __hash__(self):
        return hash((self.alphabet, self.images))

    def __repr__(self) -> str:
        rules = "; ".join(
            f"{self.alphabet.names[i]} -> {self.alphabet.render(img)}"
            for i, img in enumerate(self.images))
        return f"Substitution({rules})"

    # -- operations ----------------------------------------------------------

    def incidence_matrix(self) -> list[list[int]]:
        """M[a][b] = number of occurrences of b in the image of a."""
        r = self.alphabet.size
        return [[self.images[a].count(chr(b)) for b in range(r)]
                for a in range(r)]

    def is_primitive(self) -> tuple[bool, int | None]:
        from .numfield import is_primitive_matrix

        return is_primitive_matrix(self.incidence_matrix())

    def iterate(self, word: Word, n: int, budget: int | None = None) -> Word:
        if n < 0:
            raise ValueError("n must be nonnegative")
        cap = budget if budget is not None else symbol_budget()
        out = word
        for _ in range(n):
            out = self(out)
            if len(out) > cap:
                raise LengthBudgetExceeded(
                    f"iterate result exceeds {cap} symbols")
        return out

    def splits(self, letter: str) -> list[SplitTriple]:
        img = self.image(letter)
        return [SplitTriple(letter, img[:i], img[i], img[i + 1:])
                for i in range(len(img))]

    def language(self, n: int, budget: int | None = None) -> set[Word]:
        """All length-n factors of the subshift of a primitive substitution.

        Iterates the substitution on every letter until the factor set is
        unchanged for two consecutive rounds; nestedness of the factor
        sets makes that a stabilisation certificate.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        cap = budget if budget is not None else symbol_budget()
        words = {chr(a): chr(a) for a in range(self.alphabet.size)}
        prev: set[Word] | None = None
        while True:
            factors: set[Word] = set()
            for a in words:
                w = words[a]
                if len(w) >= n:
                    factors.update(w[i:i + n] for i in range(len(w) - n + 1))
            if prev is not None and factors == prev and factors:
                return factors
            prev = factors
            total = 0
            for a in words:
                words[a] = self(words[a])
                total += len(words[a])
            if total > cap:
                raise LengthBudgetExceeded(
                    f"language stabilisation exceeds {cap} symbols")

    def compose(self, inner: "Substitution") -> "Substitution":
        """self after inner: (self.compose(inner))(a) = self(inner(a))."""
        if inner.alphabet.size > self.alphabet.size:
            raise ValueError("alphabet mismatch")
        return Substitution(inner.alphabet,
                            [self(inner.images[a])
                             for a in range(inner.alphabet.size)])

    def first_letter_map(self) -> dict[str, str]:
        return {chr(a): self.images[a][0] for a in range(self.alphabet.size)}

    def last_letter_map(self) -> dict[str, str]:
        return {chr(a): self.images[a][-1] for a in range(self.alphabet.size)}


# ---------------------------------------------------------------------------
# prefix-suffix decompositions


@dataclass(frozen=True)
class PrefixSuffixSeq:
    """Ultimately periodic prefix-suffix decomposition.

    ``head`` lists the innermost levels (level 0 first), ``period`` the
    repeating levels after the head.  The chain condition requires each
    level's center to expand, under the substitution, to the triple one
    level below it, including the wrap of the period onto itself.
    """

    substitution: Substitution = field(compare=False)
    head: tuple[SplitTriple, ...]
    period: tuple[SplitTriple, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        sigma = self.substitution
        for deeper, shallower in zip(self.levels(1, len(self.head) + len(self.period)),
                                     self.levels(0, len(self.head) + len(self.period) - 1)):
            if sigma.image(deeper.center) != shallower.word:
                raise ValueError("chain condition violated")
        # period minimality: no proper rotation-divisor reproduces the cycle
        k = len(self.period)
        for d in range(1, k):
            if k % d == 0 and self.period == self.period[d:] + self.period[:d]:
                raise ValueError("period is not minimal")

    def level(self, i: int) -> SplitTriple:
        if i < len(self.head):
            return self.head[i]
        return self.period[(i - len(self.head)) % len(self.period)]

    def levels(self, start: int, count: int) -> list[SplitTriple]:
        return [self.level(i) for i in range(start, start + count)]

    def canonical(self) -> "PrefixSuffixSeq":
        """Absorb a head tail that matches the period into period rotations."""
        head = list(self.head)
        period = list(self.period)
        while head and head[-1] == period[-1]:
            period = [period[-1]] + period[:-1]
            head.pop()
        return PrefixSuffixSeq(self.substitution, tuple(head), tuple(period))

    def triples_json(self) -> dict:
        alph = self.substitution.alphabet

        def enc(t: SplitTriple) -> dict:
            return {"p": alph.render(t.prefix), "c": alph.names[ord(t.center)],
                    "s": alph.render(t.suffix)}

        return {"head": [enc(t) for t in self.head],
                "period": [enc(t) for t in self.period]}


def _limit_extensions(sigma: Substitution, need: int, anchor: str,
                      side: str, budget: int) -> list[tuple[Word, str]]:
    """Fixed-point limits that can complete a stalled side, in policy order.

    For the left side we need a letter b with sigma^q(b) ending in b and
    the pair (b, anchor) admissible; the suffixes of sigma^(nq)(b) then
    stabilise to the left-infinite completion.  Symmetrically on the
    right with first letters.  Several completions can be admissible for
    the same decomposition; callers verify and pick.
    """
    letter_map = (sigma.last_letter_map() if side == "left"
                  else sigma.first_letter_map())
    pairs = sigma.language(2)
    r = sigma.alphabet.size
    out: list[tuple[Word, str]] = []
    seen: set[Word] = set()
    for q in range(1, 2 * r + 1):
        for b in map(chr, range(r)):
            cur = b
            for _ in range(q):
                cur = letter_map[cur]
            if cur != b:
                continue
            pair = (b + anchor) if side == "left" else (anchor + b)
            if pair not in pairs:
                continue
            word = b
            while len(word) < need:
                word = sigma.iterate(word, q, budget=budget)
                word = word[-need:] if side == "left" else word[:need]
            ext = word[-need:] if side == "left" else word[:need]
            if ext in seen:
                continue
            seen.add(ext)
            note = (f"{side} side completed by the sigma^{q} fixed point of "
                    f"{sigma.alphabet.names[ord(b)]}")
            out.append((ext, note))
    if not out:
        raise InsufficientGrowth(f"no admissible fixed-point completion ({side})")
    return out


def _expand_parts(seq: PrefixSuffixSeq, radius: int, cap: int):
    """Grow both window sides level by level; report stalled sides.

    Images are kept suffix-truncated on the left and prefix-truncated on
    the right, which preserves the window exactly while bounding memory.
    """
    sigma = seq.substitution
    r = sigma.alphabet.size
    need_left, need_right = radius, radius + 1

    t0 = seq.level(0)
    left = t0.prefix
    right = t0.center + t0.suffix
    suf_img = {chr(a): chr(a) for a in range(r)}   # suffix-truncated sigma^i
    pre_img = {chr(a): chr(a) for a in range(r)}   # prefix-truncated sigma^i

    head_len = len(seq.head)
    period_p_empty = all(not t.prefix for t in seq.period)
    period_s_empty = all(not t.suffix for t in seq.period)
    left_stalled = right_stalled = False

    i = 0
    while True:
        grow_left = len(left) < need_left and not left_stalled
        grow_right = len(right) < need_right and not right_stalled
        if grow_left and i >= head_len and period_p_empty:
            left_stalled = True
            continue
        if grow_right and i >= head_len and period_s_empty:
            right_stalled = True
            continue
        if not grow_left and not grow_right:
            break
        i += 1
        t = seq.level(i)
        for a in suf_img:
            suf_img[a] = sigma(suf_img[a])[-need_left:] if grow_left else ""
        for a in pre_img:
            pre_img[a] = sigma(pre_img[a])[:need_right] if grow_right else ""
        if grow_left and t.prefix:
            piece = "".join(suf_img[c] for c in t.prefix)
            left = (piece + left)[-need_left:]
        if grow_right and t.suffix:
            piece = "".join(pre_img[c] for c in t.suffix)
            right = (right + piece)[:need_right]
        if len(left) + len(right) > cap:
            raise LengthBudgetExceeded("window exceeds symbol budget")
        if i > head_len + 4 * max(1, len(seq.period)) * (radius.bit_length() + 8):
            raise InsufficientGrowth("window is not reaching the radius")
    return left, right, left_stalled, right_stalled


def expand_all(seq: PrefixSuffixSeq, radius: int,
               budget: int | None = None) -> list[DottedWord]:
    """Every admissible central window [-radius, radius] for ``seq``.

    When neither side stalls there is exactly one window.  A stalled side
    is completed by each admissible fixed-point limit in turn; the
    decomposition genuinely does not determine that side, so callers
    needing a single point must verify and select.
    """
    cap = budget if budget is not None else symbol_budget()
    left, right, left_stalled, right_stalled = _expand_parts(seq, radius, cap)
    sigma = seq.substitution
    need_left, need_right = radius, radius + 1

    left_opts: list[tuple[Word, tuple[str, ...]]] = [(left, ())]
    if left_stalled and len(left) < need_left:
        anchor = (left + right)[0]
        left_opts = [((ext + left), (note,)) for ext, note in
                     _limit_extensions(sigma, need_left - len(left),
                                       anchor, "left", cap)]
        warnings.warn(left_opts[0][1][0], FixedPointCompletionWarning,
                      stacklevel=2)
    right_opts: list[tuple[Word, tuple[str, ...]]] = [(right, ())]
    if right_stalled and len(right) < need_right:
        anchor = (left + right)[-1]
        right_opts = [((right + ext), (note,)) for ext, note in
                      _limit_extensions(sigma, need_right - len(right),
                                        anchor, "right", cap)]
        warnings.warn(right_opts[0][1][0], FixedPointCompletionWarning,
                      stacklevel=2)
    out = []
    for lw, lnotes in left_opts:
        for rw, rnotes in right_opts:
            out.append(DottedWord(lw[-need_left:] if need_left else "",
                                  rw[:need_right], lnotes + rnotes))
    return out


def expand(seq: PrefixSuffixSeq, radius: int,
           budget: int | None = None) -> DottedWord:
    """Central window [-radius, radius] of the point described by ``seq``.

    If a side stalls (all-empty prefixes or suffixes through head and
    period) it is completed by the first admissible fixed-point limit and
    the window is annotated; ``expand_all`` lists the alternatives.
    """
    return expand_all(seq, radius, budget)[0]


# ---------------------------------------------------------------------------
# text format: one rule per line, `a -> a b`, `#` comments


def parse_substitution(text: str) -> Substitution:
    names: list[str] = []
    raw_rules: list[tuple[int, str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) < 3 or toks[1] != "->":
            raise ParseError("expected `symbol -> image...`", lineno)
        lhs, rhs = toks[0], toks[2:]
        if lhs in names:
            raise ParseError(f"duplicate rule for {lhs!r}", lineno)
        names.append(lhs)
        raw_rules.append((lineno, lhs, rhs))
    if not names:
        raise ParseError("no rules found", 1)
    alphabet = Alphabet(tuple(names))
    images = []
    for lineno, _, rhs in raw_rules:
        for sym in rhs:
            if sym not in names:
                raise ParseError(f"symbol {sym!r} has no rule", lineno)
        images.append(alphabet.encode(rhs))
    return Substitution(alphabet, images)


def format_substitution(sigma: Substitution) -> str:
    lines = [f"{sigma.alphabet.names[a]} -> {sigma.alphabet.render(img)}"
             for a, img in enumerate(sigma.images)]
    return "\n".join(lines) + "\n"
