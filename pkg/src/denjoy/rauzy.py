"""Rauzy induction on interval exchange transformations, exactly.

Permutations are stored 0-based: ``bottom[j]`` is the position taken by
the image of interval j.  One induction step compares the last interval
of the top row with the last interval of the bottom row, subtracts the
loser from the winner and updates the permutation; the per-step
elementary matrix E satisfies E . lambda' = lambda.

The winner/loser and update conventions are pinned operationally by
three invariants rather than by a reference: E . lambda' = lambda per
step, R . lambda = th_1 lambda for the eigenvector of a positive loop
product, and incidence(sigma) = transpose(R) for the induced
substitution.  The tests enforce all three.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .events import EndpointOrbitWarning
from .numfield import (FieldElement, HypothesisReport, NumberField,
                       check_hypotheses, perron_eigenvector, perron_field)
from .substitution import Alphabet, DottedWord, Substitution


class KeaneTie(ArithmeticError):
    """The two competing interval lengths are exactly equal."""


class ConventionMismatch(AssertionError):
    """The induced substitution's incidence does not match the loop matrix."""


Length = FieldElement | Fraction


@dataclass(frozen=True)
class Permutation:
    """Irreducible permutation; bottom[j] is the image position of interval j."""

    bottom: tuple[int, ...]

    def __post_init__(self):
        r = len(self.bottom)
        if sorted(self.bottom) != list(range(r)):
            raise ValueError("not a permutation")

    @property
    def size(self) -> int:
        return len(self.bottom)

    def is_irreducible(self) -> bool:
        top = 0
        for k in range(self.size - 1):
            top = max(top, self.bottom[k])
            if top == k:
                return False
        return True

    def inverse(self) -> tuple[int, ...]:
        inv = [0] * self.size
        for j, m in enumerate(self.bottom):
            inv[m] = j
        return tuple(inv)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """One line of 1-based images, e.g. ``4 3 2 1``."""
        images = [int(t) for t in text.split()]
        return cls(tuple(i - 1 for i in images))

    def format(self) -> str:
        return " ".join(str(m + 1) for m in self.bottom)

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class StepRecord:
    """One induction step: type, winner/loser letters and elementary matrix."""

    kind: str                 # 't' if the top interval wins, 'b' otherwise
    winner: int
    loser: int
    matrix: tuple[tuple[int, ...], ...]
    perm_before: Permutation
    perm_after: Permutation


def _unit_rows(r: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(r)] for i in range(r)]


def _move_perm(perm: Permutation, kind: str) -> Permutation:
    """Combinatorial permutation update for one move type."""
    bottom = perm.bottom
    r = perm.size
    beta = bottom.index(r - 1)
    if kind == "t":
        last = bottom[r - 1]
        new = list(bottom)
        for j in range(r):
            if j == beta:
                new[j] = last + 1
            elif bottom[j] > last:
                new[j] = bottom[j] + 1
        new[r - 1] = last
        return Permutation(tuple(new))
    if kind == "b":
        new = [0] * r
        for j in range(beta + 1):
            new[j] = bottom[j]
        new[beta + 1] = bottom[r - 1]
        for j in range(beta + 2, r):
            new[j] = bottom[j - 1]
        return Permutation(tuple(new))
    raise ValueError(f"unknown move kind {kind!r}")


def _step_matrix(perm: Permutation, kind: str) -> tuple[tuple[int, ...], ...]:
    """Elementary matrix E with E . lambda' = lambda for this move."""
    r = perm.size
    beta = perm.bottom.index(r - 1)
    if kind == "t":
        e = _unit_rows(r)
        e[r - 1][beta] = 1
        return tuple(tuple(row) for row in e)
    # bottom move relabels: interval r-1 becomes label beta+1
    e = [[0] * r for _ in range(r)]
    for j in range(beta + 1):
        e[j][j] = 1
    e[beta][beta + 1] = 1
    e[r - 1][beta + 1] = 1
    for j in range(beta + 1, r - 1):
        e[j][j + 1] = 1
    return tuple(tuple(row) for row in e)


def _step_substitution(perm: Permutation, kind: str, r: int) -> Substitution:
    """Letter substitution translating induced codings to original ones."""
    alphabet = Alphabet(tuple(str(i + 1) for i in range(r)))
    beta = perm.bottom.index(r - 1)
    images = []
    if kind == "t":
        for a in range(r):
            images.append(chr(beta) + chr(r - 1) if a == beta else chr(a))
    else:
        for a in range(r):
            if a <= beta:
                images.append(chr(a))
            elif a == beta + 1:
                images.append(chr(beta) + chr(r - 1))
            else:
                images.append(chr(a - 1))
    return Substitution(alphabet, images)


def _sign(x: Length, embedding: int | None) -> int:
    if isinstance(x, FieldElement):
        idx = embedding if embedding is not None else x.field.perron_index
        return x.sign_at(idx)
    if x > 0:
        return 1
    return -1 if x < 0 else 0


def rauzy_step(lam: Sequence[Length], perm: Permutation,
               embedding: int | None = None):
    """One Rauzy induction step on exact lengths.

    Compares the final top interval with the final bottom interval; the
    longer wins and is shortened by the loser.  Raises KeaneTie on exact
    equality.  Returns (lam', perm', StepRecord).
    """
    r = perm.size
    if len(lam) != r:
        raise ValueError("length vector size mismatch")
    beta = perm.bottom.index(r - 1)
    top_len, bot_len = lam[r - 1], lam[beta]
    s = _sign(top_len - bot_len, embedding)
    if s == 0:
        raise KeaneTie("equal competing lengths; induction undefined")
    kind = "t" if s > 0 else "b"
    if kind == "t":
        new_lam = list(lam)
        new_lam[r - 1] = top_len - bot_len
        winner, loser = r - 1, beta
    else:
        new_lam = list(lam[:beta])
        new_lam.append(bot_len - top_len)
        new_lam.append(top_len)
        new_lam.extend(lam[beta + 1:r - 1])
        winner, loser = beta, r - 1
    new_perm = _move_perm(perm, kind)
    rec = StepRecord(kind, winner, loser, _step_matrix(perm, kind),
                     perm, new_perm)
    return tuple(new_lam), new_perm, rec


# ---------------------------------------------------------------------------
# diagram and loops


@dataclass
class RauzyDiagram:
    """Reachable permutations with the two labeled move types."""

    base: Permutation
    vertices: set[Permutation]
    edges: dict[tuple[Permutation, str], Permutation]

    def neighbors(self, perm: Permutation) -> list[tuple[str, Permutation]]:
        return [(kind, self.edges[(perm, kind)]) for kind in ("t", "b")]


def rauzy_diagram(base: Permutation) -> RauzyDiagram:
    if not base.is_irreducible():
        raise ValueError("permutation is reducible")
    vertices = {base}
    edges = {}
    todo = [base]
    while todo:
        p = todo.pop()
        for kind in ("t", "b"):
            q = _move_perm(p, kind)
            edges[(p, kind)] = q
            if q not in vertices:
                vertices.add(q)
                todo.append(q)
    return RauzyDiagram(base, vertices, edges)


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


@dataclass
class LoopResult:
    """A based loop in the Rauzy diagram with its spectral data.

    ``path`` is the move-type string; ``matrix`` the ordered product of
    the per-step elementary matrices.  ``lam`` is the normalised length
    vector (eigenvector of the loop matrix), while ``m_eigenvector`` is
    the dominant eigenvector of the transposed matrix, the coordinate
    vector whose reading at the conjugate embedding weighs the symbolic
    dynamics.  ``substitution`` is the induced symbolic substitution
    (incidence equal to the transpose of the loop matrix).
    """

    base: Permutation
    path: str
    perms: tuple[Permutation, ...]
    steps: tuple[StepRecord, ...]
    matrix: tuple[tuple[int, ...], ...]
    field: NumberField
    lam: tuple[FieldElement, ...]
    m_eigenvector: tuple[FieldElement, ...]
    report: HypothesisReport
    substitution: Substitution = dc_field(repr=False, default=None)

    @property
    def length(self) -> int:
        return len(self.path)

    def gamma_vector(self):
        from .strategy import GammaVector

        if not self.report.passes:
            raise ValueError("loop does not satisfy the hypotheses")
        return GammaVector.from_eigenvector(self.m_eigenvector,
                                            self.report.conj_index)

    def verify_self_similar(self) -> bool:
        """Walk the loop with the eigenvector: winners must follow the
        path and the final lengths must equal lambda / th_1 exactly."""
        lam = self.lam
        perm = self.base
        theta = self.field.gen()
        for rec in self.steps:
            lam, perm, got = rauzy_step(lam, perm)
            if got.kind != rec.kind:
                return False
        if perm != self.base:
            return False
        for a, b in zip(lam, self.lam):
            if not (a * theta - b).is_zero():
                return False
        return True

    def to_dict(self, prec_digits: int = 30) -> dict:
        import mpmath

        th1 = self.field.root_mpf(self.field.perron_index)
        d = {
            "base": self.base.format(),
            "path": self.path,
            "matrix": [list(row) for row in self.matrix],
            "min_poly": list(self.field.min_poly.coeffs),
            "theta1": mpmath.nstr(th1, prec_digits),
            "hypotheses": self.report.to_dict(),
        }
        if self.report.conj_index is not None:
            th2 = self.field.root_mpf(self.report.conj_index)
            d["theta2"] = mpmath.nstr(th2, prec_digits)
        return d


def loop_substitution(steps: Iterable[StepRecord], r: int,
                      matrix=None) -> Substitution:
    """Substitution induced by a loop: per-step substitutions composed in
    path order (earliest step outermost).  The incidence must equal the
    transpose of the loop matrix; a mismatch is a convention bug."""
    steps = list(steps)
    if not steps:
        raise ValueError("a loop must have length >= 1")
    sigma = None
    for rec in steps:
        tau = _step_substitution(rec.perm_before, rec.kind, r)
        sigma = tau if sigma is None else sigma.compose(tau)
    if matrix is not None:
        inc = sigma.incidence_matrix()
        want = [[matrix[j][i] for j in range(r)] for i in range(r)]
        if inc != want:
            raise ConventionMismatch("incidence(sigma) != transpose(R)")
    return sigma


def loop_search(base: Permutation, max_len: int,
                require_hypotheses: bool = False,
                theta2_policy: str = "largest") -> list[LoopResult]:
    """All based loops of length <= max_len whose product matrix is
    strictly positive, with spectral analysis attached.

    Results are sorted by (length, path string).  With
    ``require_hypotheses`` only loops whose field passes the conjugate
    checks are returned; the empty list is a valid outcome.
    """
    if not base.is_irreducible():
        raise ValueError("permutation is reducible")
    diagram = rauzy_diagram(base)
    raw: list[tuple[str, tuple[Permutation, ...]]] = []

    def dfs(perm: Permutation, path: list[str], perms: list[Permutation]):
        if len(path) >= max_len:
            return
        for kind in ("t", "b"):
            nxt = diagram.edges[(perm, kind)]
            path.append(kind)
            perms.append(nxt)
            if nxt == base:
                raw.append(("".join(path), tuple(perms)))
            dfs(nxt, path, perms)
            path.pop()
            perms.pop()

    dfs(base, [], [base])
    raw.sort(key=lambda t: (len(t[0]), t[0]))

    spectral_cache: dict[tuple, tuple[NumberField, tuple, HypothesisReport]] = {}
    results = []
    for path, perms in raw:
        steps = []
        matrix = None
        for i, kind in enumerate(path):
            rec_m = _step_matrix(perms[i], kind)
            steps.append(StepRecord(kind,
                                    _winner_letter(perms[i], kind),
                                    _loser_letter(perms[i], kind),
                                    rec_m, perms[i], perms[i + 1]))
            matrix = rec_m if matrix is None else _mat_mul(matrix, rec_m)
        if any(e == 0 for row in matrix for e in row):
            continue
        cached = spectral_cache.get(matrix)
        if cached is None:
            nf, lam = perron_field([list(row) for row in matrix])
            report = check_hypotheses(nf, theta2_policy)
            if report.conj_index is not None:
                nf = nf.with_conj(report.conj_index)
                lam = [nf.element(v.coords) for v in lam]
            r = base.size
            transpose = [[matrix[j][i] for j in range(r)] for i in range(r)]
            m_vec = perron_eigenvector(transpose, nf)
            cached = (nf, tuple(lam), tuple(m_vec), report)
            spectral_cache[matrix] = cached
        nf, lam, m_vec, report = cached
        if require_hypotheses and not report.passes:
            continue
        sigma = loop_substitution(steps, base.size, matrix)
        results.append(LoopResult(base, path, perms, tuple(steps), matrix,
                                  nf, lam, m_vec, report, sigma))
    return results


def _winner_letter(perm: Permutation, kind: str) -> int:
    r = perm.size
    beta = perm.bottom.index(r - 1)
    return r - 1 if kind == "t" else beta


def _loser_letter(perm: Permutation, kind: str) -> int:
    r = perm.size
    beta = perm.bottom.index(r - 1)
    return beta if kind == "t" else r - 1


# ---------------------------------------------------------------------------
# exact interval exchange transformations


class IETExact:
    """Interval exchange with exact field-valued lengths on [0, 1).

    Breakpoints, image breakpoints and translation offsets are all field
    elements; orbits and codings are computed without rounding.
    """

    def __init__(self, lengths: Sequence[FieldElement], perm: Permutation):
        self.lengths = tuple(lengths)
        self.perm = perm
        self.field: NumberField = self.lengths[0].field
        r = perm.size
        if len(self.lengths) != r:
            raise ValueError("length vector size mismatch")
        total = self.field.zero()
        breaks = [total]
        for v in self.lengths:
            if v.sign_at(self.field.perron_index) <= 0:
                raise ValueError("lengths must be positive")
            total = total + v
            breaks.append(total)
        if not (total - self.field.one()).is_zero():
            raise ValueError("lengths must sum to one")
        self.breaks = tuple(breaks)                    # a_0 .. a_r
        inv = perm.inverse()
        total = self.field.zero()
        img_breaks = [total]
        for m in range(r):
            total = total + self.lengths[inv[m]]
            img_breaks.append(total)
        self.image_breaks = tuple(img_breaks)          # b_0 .. b_r
        self.offsets = tuple(self.image_breaks[perm.bottom[j]] - self.breaks[j]
                             for j in range(r))

    @classmethod
    def from_loop(cls, loop: LoopResult) -> "IETExact":
        return cls(loop.lam, loop.base)

    @property
    def size(self) -> int:
        return self.perm.size

    def locate(self, x: FieldElement) -> tuple[int, bool]:
        """Interval index of x in [0,1); also whether x is a breakpoint."""
        idx = self.field.perron_index
        on_break = (x.is_zero()
                    or any((x - b).is_zero() for b in self.breaks[1:-1]))
        for j in range(self.size):
            if (x - self.breaks[j + 1]).sign_at(idx) < 0:
                if j == 0 and x.sign_at(idx) < 0:
                    raise ValueError("point below 0")
                return j, on_break
        raise ValueError("point at or above 1")

    def apply(self, x: FieldElement) -> FieldElement:
        j, _ = self.locate(x)
        return x + self.offsets[j]

    def apply_inverse(self, y: FieldElement) -> FieldElement:
        idx = self.field.perron_index
        inv = self.perm.inverse()
        for m in range(self.size):
            if (y - self.image_breaks[m + 1]).sign_at(idx) < 0:
                return y - self.offsets[inv[m]]
        raise ValueError("point at or above 1")

    def coding(self, t: FieldElement, n_steps: int) -> DottedWord:
        """Itinerary letters x_i for |i| <= n_steps, right-continuous.

        Exact orbit points landing on a breakpoint are flagged with an
        EndpointOrbit annotation (both codings exist there; the
        right-continuous one is returned).
        """
        hit_endpoint = False
        pos = t
        fwd = []
        for _ in range(n_steps + 1):
            j, on_break = self.locate(pos)
            hit_endpoint = hit_endpoint or on_break
            fwd.append(chr(j))
            pos = pos + self.offsets[j]
        bwd = []
        pos = t
        for _ in range(n_steps):
            pos = self.apply_inverse(pos)
            j, on_break = self.locate(pos)
            hit_endpoint = hit_endpoint or on_break
            bwd.append(chr(j))
        bwd.reverse()
        notes = ()
        if hit_endpoint:
            notes = ("an orbit point lies on a breakpoint; "
                     "right-continuous coding returned",)
            warnings.warn(notes[0], EndpointOrbitWarning, stacklevel=2)
        return DottedWord("".join(bwd), "".join(fwd), notes)
