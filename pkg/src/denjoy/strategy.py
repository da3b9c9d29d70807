"""Minimal points of a substitution under the conjugate-eigenvalue weights.

The per-letter weights are the Perron eigenvector coordinates read at the
chosen conjugate embedding th_2; partial sums of a sequence under these
weights form its broken line.  A point is minimal when the line is
nonnegative everywhere and vanishes only at the origin.

Two independent routes compute the optimal discounted prefix value v:
the literal step-by-step best-strategy recursion, and exact policy
iteration on the one-step split graph.  Ultimately periodic candidate
decompositions are assembled from the optimal policy (periodic tails)
and the best-strategy chain maps (finite heads), expanded to central
windows and verified sign-exactly.  A brute-force enumeration over the
factor language provides the oracle the construction is tested against.

Broken-line indexing is the two-sided telescoping convention
gamma_{n+1} - gamma_n = gamma(x_n) with gamma_0 = 0; backward values are
the negated sums of the letters between n and the origin.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .events import (CrossLetterTieWarning, HeadCapWarning,
                     RejectedCandidateWarning)
from .numfield import FieldElement, NumberField
from .substitution import (DottedWord, PrefixSuffixSeq, SplitTriple,
                           Substitution, Word, expand_all, symbol_budget)


class TieDetected(ArithmeticError):
    """Two occurrences of one letter share a partial sum (AH violated)."""


class SymbolAbsent(ValueError):
    """The requested symbol does not occur in the word."""


class NoCandidate(RuntimeError):
    """No policy cycle produced a verified minimal window."""


# ---------------------------------------------------------------------------


class GammaVector:
    """Per-letter weights: eigenvector coordinates read at one embedding.

    The coordinate vector is shared with the Perron eigenvector; only the
    embedding used for sign queries and numeric evaluation differs.
    ``from_rationals`` wraps plain rational weights in the degenerate
    degree-1 field for the word-level operations (those gammas carry no
    discount and cannot drive the value solvers).
    """

    def __init__(self, weights: Sequence[FieldElement], embedding: int):
        self.weights = tuple(weights)
        if not self.weights:
            raise ValueError("empty weight vector")
        self.field: NumberField = self.weights[0].field
        if any(w.field is not self.field for w in self.weights):
            raise ValueError("weights from different fields")
        if not (0 <= embedding < len(self.field.real_roots)):
            raise ValueError("embedding index out of range")
        self.embedding = embedding
        self._mpf_cache: dict[int, list[mpmath.mpf]] = {}

    @classmethod
    def from_eigenvector(cls, lam: Sequence[FieldElement],
                         embedding: int) -> "GammaVector":
        return cls(lam, embedding)

    @classmethod
    def from_rationals(cls, values: Iterable[Fraction | int]) -> "GammaVector":
        nf = NumberField.rationals()
        return cls([nf.from_rational(v) for v in values], 0)

    @property
    def size(self) -> int:
        return len(self.weights)

    def weight(self, letter: str) -> FieldElement:
        return self.weights[ord(letter)]

    def sign(self, elem: FieldElement) -> int:
        return elem.sign_at(self.embedding)

    def theta(self) -> FieldElement:
        """The generator, whose value at ``embedding`` is th_2."""
        return self.field.gen()

    def require_expanding(self):
        """Guard for the value solvers: th_2 must exceed 1."""
        one = self.field.one()
        if self.sign(self.theta() - one) <= 0:
            raise ValueError("the chosen embedding does not satisfy th_2 > 1")

    def mpf_weights(self, prec_bits: int = 256) -> list[mpmath.mpf]:
        vals = self._mpf_cache.get(prec_bits)
        if vals is None:
            vals = [w.mpf_at(self.embedding, prec_bits) for w in self.weights]
            self._mpf_cache[prec_bits] = vals
        return vals

    def validate_eigen(self, sigma: Substitution):
        """Exact eigen-identity M gamma = th gamma, coordinatewise."""
        m = sigma.incidence_matrix()
        th = self.theta()
        for a in range(len(self.weights)):
            lhs = self.field.zero()
            for b in range(len(self.weights)):
                if m[a][b]:
                    lhs = lhs + self.weights[b] * m[a][b]
            if not (lhs - th * self.weights[a]).is_zero():
                raise ValueError("weights are not an exact eigenvector")

    def mixed_signs(self) -> bool:
        signs = {self.sign(w) for w in self.weights}
        return 1 in signs and -1 in signs


def gamma_word(gamma: GammaVector, word: Word) -> FieldElement:
    """Sum of letter weights over a word; the empty word sums to zero."""
    acc = gamma.field.zero()
    for c in word:
        acc = acc + gamma.weight(c)
    return acc


# ---------------------------------------------------------------------------
# broken lines


@dataclass(frozen=True)
class BrokenLine:
    """Partial sums gamma_n over a dotted word, n in [min_index, max+1]."""

    word: DottedWord
    offset: int                      # index of values[0]
    values: tuple[FieldElement, ...]
    min_index: int
    min_value: FieldElement

    def value(self, n: int) -> FieldElement:
        return self.values[n - self.offset]

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + len(self.values))


def partial_sums(gamma: GammaVector, word: DottedWord | Word) -> BrokenLine:
    """Exact broken line of a (dotted) word.

    gamma_0 = 0 and gamma_{n+1} - gamma_n = gamma(x_n) throughout, so the
    backward values are negated letter sums; the minimum is located by
    exact sign comparisons (leftmost on a tie).
    """
    if isinstance(word, str):
        word = DottedWord("", word)
    zero = gamma.field.zero()
    back: list[FieldElement] = [zero]
    acc = zero
    for c in reversed(word.neg):
        acc = acc - gamma.weight(c)
        back.append(acc)
    back.reverse()                   # gamma_{-m} ... gamma_0
    fwd: list[FieldElement] = []
    acc = zero
    for c in word.pos:
        acc = acc + gamma.weight(c)
        fwd.append(acc)              # gamma_1 ... gamma_{l+1}
    values = back + fwd
    offset = -len(word.neg)
    min_i = 0
    for i in range(1, len(values)):
        if gamma.sign(values[i] - values[min_i]) < 0:
            min_i = i
    return BrokenLine(word, offset, tuple(values),
                      offset + min_i, values[min_i])


def best_occurrence(gamma: GammaVector, word: Word, letter: str) -> int:
    """Index of the occurrence of ``letter`` minimising gamma_{i+1}(word).

    Unique under the algebraic hypothesis; an exact tie between two
    occurrences of the same letter is reported as TieDetected.
    """
    best = None
    best_sum = None
    acc = gamma.field.zero()
    for i, c in enumerate(word):
        acc = acc + gamma.weight(c)
        if c != letter:
            continue
        if best is None:
            best, best_sum = i, acc
            continue
        s = gamma.sign(acc - best_sum)
        if s == 0:
            raise TieDetected(
                f"occurrences {best} and {i} of a letter tie exactly")
        if s < 0:
            best, best_sum = i, acc
    if best is None:
        raise SymbolAbsent("symbol does not occur in the word")
    return best


def split_argmin(gamma: GammaVector, sigma: Substitution,
                 letter: str) -> SplitTriple:
    """Split of sigma(letter) at the global minimum of its partial sums.

    The minimum runs over the positions that carry a center letter
    (0 .. |image|-1); ties are broken leftmost, with a warning when the
    tied positions hold different letters.
    """
    img = sigma.image(letter)
    best, best_sum = 0, gamma.field.zero()
    acc = gamma.field.zero()
    for j in range(1, len(img)):
        acc = acc + gamma.weight(img[j - 1])
        s = gamma.sign(acc - best_sum)
        if s == 0 and img[j] != img[best]:
            warnings.warn("cross-letter argmin tie broken leftmost",
                          CrossLetterTieWarning, stacklevel=2)
        if s < 0:
            best, best_sum = j, acc
    return sigma.splits(letter)[best]


# ---------------------------------------------------------------------------
# numeric screening helpers (certified margins, exact fallback)

_MARGIN_BITS = 120


class _Screen:
    """Float-first comparison of field elements with an exact fallback.

    Floats carry at least prec bits; two values closer than the margin
    are re-compared exactly, so decisions are always certified.
    """

    def __init__(self, gamma: GammaVector, prec_bits: int = 256):
        self.gamma = gamma
        self.prec = prec_bits
        self.margin = mpmath.mpf(2) ** (-_MARGIN_BITS)

    def compare(self, ea: FieldElement, fa, eb: FieldElement, fb) -> int:
        with mpmath.workprec(self.prec):
            d = fa - fb
            if abs(d) > self.margin:
                return 1 if d > 0 else -1
        return self.gamma.sign(ea - eb)


# ---------------------------------------------------------------------------
# the best-strategy recursion


class BestStrategyResult:
    """Stepwise output of the best-strategy construction.

    ``choice[k][a]`` is the split position chosen for letter a when the
    level-k minimum of the image partial sums is formed (k >= 1), and
    ``m[k][a]`` that exact minimum.  The strategy list of a at step n is
    reconstructed by walking the chosen centers downward; ``v(n, a)``
    rescales m into the finite value approximations.
    """

    def __init__(self, gamma: GammaVector, sigma: Substitution, steps: int,
                 m, m_flt, choice):
        self.gamma = gamma
        self.sigma = sigma
        self.steps = steps
        self._m = m
        self._m_flt = m_flt
        self._choice = choice
        self._theta_inv = gamma.theta().inv()

    def m_value(self, k: int, letter: str) -> FieldElement:
        return self._m[k][ord(letter)]

    def choice(self, k: int, letter: str) -> int:
        return self._choice[k][ord(letter)]

    def chain(self, k: int, letter: str) -> str:
        """Center letter chosen for ``letter`` at level k."""
        img = self.sigma.image(letter)
        return img[self._choice[k][ord(letter)]]

    def chain_map(self, k: int) -> dict[str, str]:
        return {chr(a): self.chain(k, chr(a))
                for a in range(self.sigma.alphabet.size)}

    def strategy_list(self, letter: str, n: int) -> tuple[SplitTriple, ...]:
        """Triples (level 0 first) of the step-n best strategy for letter."""
        if n + 1 > self.steps:
            raise ValueError("strategy deeper than computed steps")
        out: list[SplitTriple] = []
        c = letter
        for k in range(n + 1, 0, -1):
            img = self.sigma.image(c)
            j = self._choice[k][ord(c)]
            t = SplitTriple(c, img[:j], img[j], img[j + 1:])
            out.append(t)
            c = t.center
        out.reverse()
        return tuple(out)

    def v(self, n: int, letter: str) -> FieldElement:
        """v_n(letter) = th^-(n+1) . m_{n+1}(letter), exact."""
        return (self._theta_inv ** (n + 1)) * self._m[n + 1][ord(letter)]

    def window(self, letter: str, n: int,
               budget: int | None = None) -> DottedWord:
        """sigma^(n+1)(letter) re-centered at the strategy minimum."""
        word = self.sigma.iterate(letter, n + 1, budget=budget)
        triples = self.strategy_list(letter, n)
        lengths = _image_lengths(self.sigma, n + 1)
        dot = 0
        for i, t in enumerate(triples):
            dot += sum(lengths[i][ord(c)] for c in t.prefix)
        return DottedWord(word[:dot], word[dot:])


def _image_lengths(sigma: Substitution, levels: int) -> list[list[int]]:
    """lengths[i][a] = |sigma^i(a)| for i < levels, by matrix row sums."""
    r = sigma.alphabet.size
    m = sigma.incidence_matrix()
    out = [[1] * r]
    row = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(1, levels):
        row = [[sum(row[a][c] * m[c][b] for c in range(r)) for b in range(r)]
               for a in range(r)]
        out.append([sum(row[a]) for a in range(r)])
    return out


def best_strategy(gamma: GammaVector, sigma: Substitution,
                  n_steps: int) -> BestStrategyResult:
    """Run the stepwise minimum recursion for ``n_steps`` strategy steps.

    Level k+1 minima are formed from level k by scanning the image of
    each letter: candidate value th^k gamma_j(sigma(a)) + m_k(letter at
    j).  A tie between two positions holding the same letter contradicts
    the algebraic hypothesis and raises TieDetected; cross-letter ties
    are broken leftmost with a warning.
    """
    gamma.require_expanding()
    screen = _Screen(gamma)
    prec = screen.prec
    r = sigma.alphabet.size
    zero = gamma.field.zero()
    theta = gamma.theta()

    psums: list[list[FieldElement]] = []
    psums_f: list[list[mpmath.mpf]] = []
    wf = gamma.mpf_weights(prec)
    for a in range(r):
        img = sigma.image(chr(a))
        acc, row = zero, [zero]
        with mpmath.workprec(prec):
            facc, frow = mpmath.mpf(0), [mpmath.mpf(0)]
            for c in img[:-1]:
                acc = acc + gamma.weight(c)
                facc = facc + wf[ord(c)]
                row.append(acc)
                frow.append(facc)
        psums.append(row)
        psums_f.append(frow)

    m = [[zero] * r]
    with mpmath.workprec(prec):
        m_flt = [[mpmath.mpf(0)] * r]
    choice: list[list[int] | None] = [None]
    th_pow, th_pow_f = gamma.field.one(), mpmath.mpf(1)
    thf = theta.mpf_at(gamma.embedding, prec)

    for k in range(n_steps + 1):
        new_m, new_mf, new_choice = [], [], []
        for a in range(r):
            img = sigma.image(chr(a))
            best_j = 0
            with mpmath.workprec(prec):
                best_e = th_pow * psums[a][0] + m[k][ord(img[0])]
                best_f = th_pow_f * psums_f[a][0] + m_flt[k][ord(img[0])]
                for j in range(1, len(img)):
                    cand_e = th_pow * psums[a][j] + m[k][ord(img[j])]
                    cand_f = th_pow_f * psums_f[a][j] + m_flt[k][ord(img[j])]
                    s = screen.compare(cand_e, cand_f, best_e, best_f)
                    if s == 0:
                        if img[j] == img[best_j]:
                            raise TieDetected(
                                "same-letter block tie in best strategy")
                        warnings.warn(
                            "cross-letter strategy tie broken leftmost",
                            CrossLetterTieWarning, stacklevel=2)
                    if s < 0:
                        best_j, best_e, best_f = j, cand_e, cand_f
            new_m.append(best_e)
            new_mf.append(best_f)
            new_choice.append(best_j)
        m.append(new_m)
        m_flt.append(new_mf)
        choice.append(new_choice)
        th_pow = th_pow * theta
        with mpmath.workprec(prec):
            th_pow_f = th_pow_f * thf

    return BestStrategyResult(gamma, sigma, n_steps + 1, m, m_flt, choice)


# ---------------------------------------------------------------------------
# exact policy iteration for v


@dataclass(frozen=True)
class ValueTable:
    """Optimal discounted prefix values and an optimal split per letter."""

    gamma: GammaVector
    sigma: Substitution
    values: tuple[FieldElement, ...]
    policy: tuple[SplitTriple, ...]

    def value(self, letter: str) -> FieldElement:
        return self.values[ord(letter)]

    def next_letter(self, letter: str) -> str:
        return self.policy[ord(letter)].center

    def q_value(self, letter: str, position: int) -> FieldElement:
        """One-step value of choosing the given split position."""
        img = self.sigma.image(letter)
        theta_inv = self.gamma.theta().inv()
        pref = gamma_word(self.gamma, img[:position])
        return theta_inv * (pref + self.values[ord(img[position])])

    def bellman_argmins(self, letter: str) -> list[int]:
        """All split positions achieving the Bellman minimum, exactly."""
        img = self.sigma.image(letter)
        vals = [self.q_value(letter, j) for j in range(len(img))]
        best = 0
        for j in range(1, len(img)):
            if self.gamma.sign(vals[j] - vals[best]) < 0:
                best = j
        return [j for j in range(len(img))
                if (vals[j] - vals[best]).is_zero()]

    def verify(self) -> bool:
        """Exact Bellman check: equality at the policy, >= elsewhere."""
        for a in range(self.sigma.alphabet.size):
            letter = chr(a)
            pol = self.policy[a]
            if not (self.q_value(letter, pol.position)
                    - self.values[a]).is_zero():
                return False
            for j in range(len(self.sigma.image(letter))):
                diff = self.q_value(letter, j) - self.values[a]
                if self.gamma.sign(diff) < 0:
                    return False
        return True

    def cycles(self) -> list[list[str]]:
        """Cycles of the optimal policy's letter graph, in first-visit order."""
        nxt = {chr(a): self.policy[a].center
               for a in range(self.sigma.alphabet.size)}
        seen: dict[str, int] = {}
        cycles = []
        for start in sorted(nxt):
            if start in seen:
                continue
            path, pos = [], {}
            c = start
            while c not in seen and c not in pos:
                pos[c] = len(path)
                path.append(c)
                c = nxt[c]
            if c in pos:
                cycles.append(path[pos[c]:])
            for p in path:
                seen[p] = 1
        return cycles

    def to_dict(self) -> dict:
        alph = self.sigma.alphabet
        return {
            alph.names[a]: {
                "v": self.values[a].coord_strings(),
                "policy": {"p": alph.render(self.policy[a].prefix),
                           "c": alph.names[ord(self.policy[a].center)],
                           "s": alph.render(self.policy[a].suffix)},
            }
            for a in range(alph.size)
        }


def _solve_policy(gamma: GammaVector, sigma: Substitution,
                  positions: list[int]) -> list[FieldElement]:
    """Exact v for a fixed policy: v = th^-1 (gamma(p) + v(next))."""
    r = sigma.alphabet.size
    nf = gamma.field
    theta_inv = gamma.theta().inv()
    rows = []
    rhs = []
    for a in range(r):
        img = sigma.image(chr(a))
        j = positions[a]
        row = [nf.one() if i == a else nf.zero() for i in range(r)]
        row[ord(img[j])] = row[ord(img[j])] - theta_inv
        rows.append(row)
        rhs.append(theta_inv * gamma_word(gamma, img[:j]))
    # Gaussian elimination with exact pivots
    for col in range(r):
        piv = next(i for i in range(col, r) if not rows[i][col].is_zero())
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = rows[col][col].inv()
        rows[col] = [e * inv for e in rows[col]]
        rhs[col] = rhs[col] * inv
        for i in range(r):
            if i != col and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
                rhs[i] = rhs[i] - f * rhs[col]
    return rhs


def solve_value(gamma: GammaVector, sigma: Substitution) -> ValueTable:
    """Optimal v by exact policy iteration over the split graph.

    Start from the zero-prefix policy (v = 0), evaluate each policy by an
    exact linear solve, improve greedily with exact sign comparisons, and
    stop at a fixed point; finitely many policies and strict improvement
    guarantee termination with an exact certificate.
    """
    gamma.require_expanding()
    r = sigma.alphabet.size
    positions = [0] * r
    values = _solve_policy(gamma, sigma, positions)
    while True:
        improved = False
        theta_inv = gamma.theta().inv()
        new_positions = list(positions)
        for a in range(r):
            img = sigma.image(chr(a))
            pref = gamma.field.zero()
            best_j, best_val = None, None
            for j in range(len(img)):
                if j > 0:
                    pref = pref + gamma.weight(img[j - 1])
                cand = theta_inv * (pref + values[ord(img[j])])
                if best_val is None:
                    best_j, best_val = j, cand
                    continue
                s = gamma.sign(cand - best_val)
                if s == 0 and img[j] == img[best_j]:
                    raise TieDetected("same-letter Bellman tie")
                if s == 0:
                    warnings.warn("cross-letter Bellman tie broken leftmost",
                                  CrossLetterTieWarning, stacklevel=2)
                if s < 0:
                    best_j, best_val = j, cand
            if gamma.sign(best_val - values[a]) < 0:
                new_positions[a] = best_j
                improved = True
        if not improved:
            break
        positions = new_positions
        values = _solve_policy(gamma, sigma, positions)
    policy = tuple(sigma.splits(chr(a))[positions[a]] for a in range(r))
    return ValueTable(gamma, sigma, tuple(values), policy)


def periodic_chain_value(gamma: GammaVector, head_prefixes: Sequence[Word],
                         period_prefixes: Sequence[Word]) -> FieldElement:
    """Exact v(a; x) of an ultimately periodic chain of prefix words.

    ``head_prefixes`` are p_1 .. p_q of the chain, after which the
    prefixes repeat ``period_prefixes`` forever; the geometric tail is
    summed in closed form.
    """
    theta_inv = gamma.theta().inv()
    acc = gamma.field.zero()
    power = gamma.field.one()
    for p in head_prefixes:
        power = power * theta_inv
        acc = acc + power * gamma_word(gamma, p)
    tail = gamma.field.zero()
    tpow = gamma.field.one()
    for p in period_prefixes:
        tpow = tpow * theta_inv
        tail = tail + tpow * gamma_word(gamma, p)
    k = len(period_prefixes)
    geom = (gamma.field.one() - theta_inv ** k).inv()
    return acc + power * tail * geom


# ---------------------------------------------------------------------------
# window verification (certified screen, exact fallback)


def _window_sums_mpf(gamma: GammaVector, window: DottedWord, prec: int):
    """Floating broken line over the window; error < 2^-(prec-60)."""
    wf = gamma.mpf_weights(prec)
    with mpmath.workprec(prec):
        back = [mpmath.mpf(0)]
        acc = mpmath.mpf(0)
        for c in reversed(window.neg):
            acc = acc - wf[ord(c)]
            back.append(acc)
        back.reverse()
        fwd = []
        acc = mpmath.mpf(0)
        for c in window.pos:
            acc = acc + wf[ord(c)]
            fwd.append(acc)
    return back + fwd               # indices min_index .. max_index+1


def _exact_window_sum(gamma: GammaVector, window: DottedWord, n: int) -> FieldElement:
    acc = gamma.field.zero()
    if n >= 0:
        for i in range(n):
            acc = acc + gamma.weight(window[i])
    else:
        for i in range(n, 0):
            acc = acc - gamma.weight(window[i])
    return acc


def verify_window(gamma: GammaVector, window: DottedWord,
                  radius: int | None = None,
                  prec: int = 256) -> tuple[bool, str | None]:
    """Is the window's broken line >= 0 with equality only at the origin?

    Checks indices n in [-radius, radius].  Values outside the certified
    float margin decide immediately; near-zero values are re-computed as
    exact field elements.
    """
    if radius is None:
        radius = min(-window.min_index, window.max_index)
    if -window.min_index < radius or window.max_index < radius:
        raise ValueError("window smaller than verification radius")
    w = window.restrict(radius)
    sums = _window_sums_mpf(gamma, w, prec)
    margin = mpmath.mpf(2) ** (-_MARGIN_BITS)
    offset = w.min_index
    for n in range(-radius, radius + 1):
        val = sums[n - offset]
        if n == 0:
            continue
        if val > margin:
            continue
        if val < -margin:
            return False, f"gamma_{n} is negative"
        exact = _exact_window_sum(gamma, w, n)
        s = gamma.sign(exact)
        if s < 0:
            return False, f"gamma_{n} is negative"
        if s == 0:
            return False, f"gamma_{n} vanishes away from the origin"
    return True, None


# ---------------------------------------------------------------------------
# minimal point candidates


@dataclass
class MinimalCandidate:
    """A verified ultimately periodic minimal point with its window."""

    seq: PrefixSuffixSeq
    window: DottedWord
    radius: int
    verified: bool
    source: str

    def sort_key(self):
        return (self.window.neg, self.window.pos)

    def to_dict(self) -> dict:
        d = self.seq.triples_json()
        d["radius"] = self.radius
        d["verified"] = self.verified
        d["source"] = self.source
        d["annotations"] = list(self.window.annotations)
        return d


def minimal_points(gamma: GammaVector, sigma: Substitution,
                   radius: int = 2000, head_cap: int | None = None,
                   value_table: ValueTable | None = None) -> list[MinimalCandidate]:
    """Construct and verify the minimal points of the substitution.

    Every minimal point's truncated decomposition coincides with a best
    strategy at each level, so the limit decompositions are read off the
    strategy lists of the letters on optimal-policy cycles: the deep
    levels repeat the reversed cycle and a finite head forms at the
    bottom.  Pure cycle rotations are also tried (the paper notes they
    need not be minimal).  Every candidate window [-radius, radius] is
    verified sign-exactly; failures are reported as warnings and dropped.
    Raises NoCandidate if nothing survives.
    """
    gamma.require_expanding()
    vt = value_table if value_table is not None else solve_value(gamma, sigma)
    r = sigma.alphabet.size
    cap = head_cap if head_cap is not None else 10 * r

    candidates: dict[tuple, tuple[PrefixSuffixSeq, str]] = {}

    def add(seq: PrefixSuffixSeq, source: str):
        seq = seq.canonical()
        key = (seq.head, seq.period)
        if key not in candidates:
            candidates[key] = (seq, source)

    # pure periodic candidates: reversed policy cycles, every rotation
    for cycle in vt.cycles():
        k = len(cycle)
        for rot in range(k):
            period = tuple(vt.policy[ord(cycle[(rot - i) % k])]
                           for i in range(k))
            add(PrefixSuffixSeq(sigma, (), period), "policy-cycle")

    # headed candidates: strategy lists of cycle letters, anchored at the
    # top, which repeats the reversed cycle until the head appears below
    strat = best_strategy(gamma, sigma, cap)
    for cycle in vt.cycles():
        k = len(cycle)
        for pos, b in enumerate(cycle):
            triples = strat.strategy_list(b, cap)

            def expected(i: int) -> SplitTriple:
                return vt.policy[ord(cycle[(pos - (cap - i)) % k])]

            if triples[cap] != expected(cap):
                warnings.warn(
                    f"strategy list of {sigma.alphabet.names[ord(b)]} has "
                    f"not converged to the policy within {cap} levels",
                    HeadCapWarning, stacklevel=2)
                continue
            q = cap
            while q > 0 and triples[q - 1] == expected(q - 1):
                q -= 1
            if cap - q < 2 * k:
                warnings.warn(
                    f"periodic tail evidence too short for "
                    f"{sigma.alphabet.names[ord(b)]} within {cap} levels",
                    HeadCapWarning, stacklevel=2)
                continue
            period = tuple(expected(q + j) for j in range(k))
            try:
                add(PrefixSuffixSeq(sigma, tuple(triples[:q]), period),
                    "strategy-list")
            except ValueError as exc:    # truncation guessed a wrong tail
                warnings.warn(f"detected tail rejected: {exc}",
                              HeadCapWarning, stacklevel=2)
                continue

    accepted: dict[tuple[str, str], MinimalCandidate] = {}
    failures: list[str] = []
    for seq, source in candidates.values():
        windows = expand_all(seq, radius)
        ok_any = False
        for window in windows:
            ok, reason = verify_window(gamma, window, radius)
            if ok:
                ok_any = True
                key = (window.neg, window.pos)
                if key not in accepted:
                    accepted[key] = MinimalCandidate(seq, window, radius,
                                                     True, source)
        if not ok_any:
            failures.append(f"{source}: {reason}")
            warnings.warn(f"candidate failed verification ({reason})",
                          RejectedCandidateWarning, stacklevel=2)
    if not accepted:
        raise NoCandidate("no candidate window verified; failures: "
                          + "; ".join(failures))
    out = sorted(accepted.values(), key=MinimalCandidate.sort_key)
    return out


def brute_force_minimal(gamma: GammaVector, sigma: Substitution,
                        radius: int, prec: int = 256) -> set[DottedWord]:
    """Oracle: all center-dotted (2 radius + 1)-factors with minimal lines.

    Enumerates the factor language directly and keeps the windows whose
    cumulative sums attain a strict minimum exactly at the dot.
    Independent of the policy/strategy machinery.
    """
    n = 2 * radius + 1
    factors = sigma.language(n)
    wf = gamma.mpf_weights(prec)
    margin = mpmath.mpf(2) ** (-_MARGIN_BITS)
    out: set[DottedWord] = set()
    for w in factors:
        with mpmath.workprec(prec):
            sums = [mpmath.mpf(0)]
            acc = mpmath.mpf(0)
            for c in w:
                acc = acc + wf[ord(c)]
                sums.append(acc)
        base = sums[radius]
        ok = True
        for k in range(n):            # cumulative indices 0..2*radius
            if k == radius:
                continue
            d = sums[k] - base
            if d > margin:
                continue
            if d < -margin:
                ok = False
                break
            # exact sign of S_k - S_radius
            if k > radius:
                diff = _exact_word_range(gamma, w, radius, k)
            else:
                diff = -_exact_word_range(gamma, w, k, radius)
            if gamma.sign(diff) <= 0:
                ok = False
                break
        if ok:
            out.add(DottedWord(w[:radius], w[radius:]))
    return out


def _exact_word_range(gamma: GammaVector, word: Word, i: int, j: int) -> FieldElement:
    acc = gamma.field.zero()
    for c in word[i:j]:
        acc = acc + gamma.weight(c)
    return acc


# ---------------------------------------------------------------------------
# growth and series diagnostics


@dataclass(frozen=True)
class GrowthReport:
    """Least-squares growth exponents of the broken line, both directions."""

    target: float
    slope_forward: float
    slope_backward: float
    liminf_forward: float
    liminf_backward: float
    n_max: int

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "slope_forward": self.slope_forward,
            "slope_backward": self.slope_backward,
            "liminf_forward": self.liminf_forward,
            "liminf_backward": self.liminf_backward,
            "n_max": self.n_max,
        }


def window_line_mpf(gamma: GammaVector, window: DottedWord,
                    prec: int = 256) -> tuple[list, list]:
    """(forward, backward) broken-line values gamma_n, n = 1..side length."""
    wf = gamma.mpf_weights(prec)
    with mpmath.workprec(prec):
        fwd, acc = [], mpmath.mpf(0)
        for c in window.pos:
            acc = acc + wf[ord(c)]
            fwd.append(acc)
        bwd, acc = [], mpmath.mpf(0)
        for c in reversed(window.neg):
            acc = acc - wf[ord(c)]
            bwd.append(-acc)        # gamma_{-n} has value -sum = positive
    return fwd, bwd


def growth_exponent(gamma: GammaVector, window: DottedWord,
                    n_max: int | None = None,
                    prec: int = 256) -> GrowthReport:
    """Fit log gamma_n against log n over [n_max/10, n_max], both sides.

    Also reports min gamma_n / n^alpha over the fit range (alpha the
    theoretical exponent log th_2 / log th_1) as a liminf proxy; for a
    minimal point it must be positive.
    """
    import numpy as np

    if n_max is None:
        n_max = min(-window.min_index, window.max_index)
    if -window.min_index < n_max or window.max_index < n_max - 1:
        raise ValueError("window smaller than n_max")
    fwd, bwd = window_line_mpf(gamma, window, prec)
    th1 = gamma.field.root_mpf(gamma.field.perron_index, prec)
    th2 = gamma.field.root_mpf(gamma.embedding, prec)
    target = float(mpmath.log(th2) / mpmath.log(th1))

    def fit(vals):
        lo = max(1, n_max // 10)
        ns, ys, proxy = [], [], None
        for n in range(lo, n_max + 1):
            v = float(vals[n - 1])
            p = v / (n ** target)
            proxy = p if proxy is None else min(proxy, p)
            if v > 0:
                ns.append(float(np.log(n)))
                ys.append(float(np.log(v)))
        slope = float(np.polyfit(ns, ys, 1)[0]) if len(ns) > 1 else float("nan")
        return slope, (proxy if proxy is not None else float("nan"))

    sf, pf = fit(fwd)
    sb, pb = fit(bwd)
    return GrowthReport(target, sf, sb, pf, pb, n_max)


@dataclass(frozen=True)
class TailReport:
    """Truncated normalisation constant and its two exponential tails."""

    n_terms: int
    total: mpmath.mpf
    forward: mpmath.mpf
    backward: mpmath.mpf
    checkpoints: tuple[tuple[int, mpmath.mpf], ...]


def tail_sums(gamma: GammaVector, window: DottedWord, n_terms: int,
              checkpoints: Sequence[int] = (),
              prec: int = 256) -> TailReport:
    """K_N = sum e^(-gamma_{-n}) + 1 + sum e^(-gamma_n), n = 1..N.

    Exponents are broken-line values from certified weights; optional
    checkpoint indices record the running K for Cauchy-increment checks.
    """
    if -window.min_index < n_terms or window.max_index < n_terms:
        raise ValueError("window smaller than n_terms")
    fwd, bwd = window_line_mpf(gamma, window, prec)
    marks = sorted(set(checkpoints))
    recorded: list[tuple[int, mpmath.mpf]] = []
    with mpmath.workprec(prec):
        f_sum = mpmath.mpf(0)
        b_sum = mpmath.mpf(0)
        for n in range(1, n_terms + 1):
            f_sum += mpmath.exp(-fwd[n - 1])
            b_sum += mpmath.exp(-bwd[n - 1])
            if marks and n == marks[0]:
                recorded.append((n, b_sum + 1 + f_sum))
                marks.pop(0)
        total = b_sum + 1 + f_sum
    return TailReport(n_terms, total, f_sum, b_sum, tuple(recorded))
