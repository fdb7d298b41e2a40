"""Grover walk on the kappa-regular Cayley tree.

Vertices are reduced words in kappa involutions. A word is stored with its
most recent letter first, so left multiplication by a generator either
prepends that letter or cancels ``letters[0]``.

The simulator keeps one dense ``(n_words, kappa)`` amplitude block per word
length. Words of length ``n >= 1`` are indexed from the root outwards: the
oldest letter gives the level-1 index, and each further letter contributes a
base-``(kappa - 1)`` digit counting the letters allowed after its
predecessor. Children of word ``h`` therefore occupy the contiguous block
``h * (kappa - 1) + d`` and the parent of ``h`` is ``h // (kappa - 1)``.
No symmetry of the walk is used to shrink the state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np
from numpy.typing import NDArray

from .core import Case, Distribution, WalkParams, grover_coin

__all__ = [
    "ReducedWord",
    "ClassLabel",
    "TreeState",
    "multiply",
    "classify",
    "initial_tree_state",
    "step_tree",
    "run_tree",
    "distance_distribution",
    "check_lemma1",
    "step_tree_sparse",
    "initial_tree_amplitudes",
]

_CHUNK = 1 << 20


@dataclass(frozen=True, order=True)
class ReducedWord:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(c) for c in self.letters)
        for a, b in zip(letters, letters[1:]):
            if a == b:
                raise ValueError(f"word {letters} is not reduced")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def head(self) -> int | None:
        """Most recently applied generator."""
        return self.letters[0] if self.letters else None

    @property
    def root_letter(self) -> int | None:
        """Generator of the first step away from the root."""
        return self.letters[-1] if self.letters else None

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"e{c}" for c in self.letters)


IDENTITY = ReducedWord()


def multiply(eps: int, g: ReducedWord) -> ReducedWord:
    """Left-multiply ``g`` by the generator ``eps``."""
    if g.head == eps:
        return ReducedWord(g.letters[1:])
    return ReducedWord((eps,) + g.letters)


class ClassLabel(NamedTuple):
    sign: str  # "+" moving away from the root, "-" towards it
    j: int
    x: int


def classify(g: ReducedWord, eps: int) -> ClassLabel:
    """Class ``A_j^(sign)(x)`` containing the pair ``(g, eps)``.

    ``x`` is the length of ``g``, the sign tells whether ``eps g`` is longer
    or shorter than ``g``, and ``j`` is the letter of ``g`` adjacent to the
    root (the first step ever taken along that branch).
    """
    if g.is_identity():
        return ClassLabel("+", eps, 0)
    sign = "-" if eps == g.head else "+"
    return ClassLabel(sign, g.root_letter, len(g))


# --- word indexing ----------------------------------------------------------


def level_size(kappa: int, n: int) -> int:
    if n == 0:
        return 1
    return kappa * (kappa - 1) ** (n - 1)


@lru_cache(maxsize=64)
def first_letters(kappa: int, n: int) -> NDArray[np.int8]:
    """Most recent letter of every word of length ``n >= 1``, in index order."""
    if n < 1:
        raise ValueError("the identity has no letters")
    if n == 1:
        return np.arange(kappa, dtype=np.int8)
    parent = first_letters(kappa, n - 1)
    d = np.tile(np.arange(kappa - 1, dtype=np.int8), len(parent))
    p = np.repeat(parent, kappa - 1)
    out = (d + (d >= p)).astype(np.int8)
    out.flags.writeable = False
    return out


def root_letters(kappa: int, n: int, rows: NDArray[np.intp]) -> NDArray[np.intp]:
    return rows // (kappa - 1) ** (n - 1)


def word_index(word: ReducedWord, kappa: int) -> int:
    if word.is_identity():
        return 0
    letters = word.letters[::-1]
    idx = letters[0]
    for prev, c in zip(letters, letters[1:]):
        idx = idx * (kappa - 1) + (c if c < prev else c - 1)
    return idx


def word_at(index: int, n: int, kappa: int) -> ReducedWord:
    if n == 0:
        return IDENTITY
    digits = []
    for _ in range(n - 1):
        index, d = divmod(index, kappa - 1)
        digits.append(d)
    letters = [index]
    for d in reversed(digits):
        prev = letters[-1]
        letters.append(d if d < prev else d + 1)
    return ReducedWord(tuple(reversed(letters)))


# --- dense state --------------------------------------------------------------


@dataclass
class TreeState:
    """Amplitudes ``alpha_t(g, eps)``; ``levels[n]`` is None when all zero."""

    kappa: int
    levels: list[NDArray[np.complex128] | None]
    time: int = 0
    params: WalkParams | None = field(default=None, repr=False)

    def amplitude(self, g: ReducedWord, eps: int) -> complex:
        n = len(g)
        if n >= len(self.levels) or self.levels[n] is None:
            return 0j
        return complex(self.levels[n][word_index(g, self.kappa), eps])

    def items(self, tol: float = 0.0) -> Iterator[tuple[ReducedWord, int, complex]]:
        """Iterate over stored ``(word, coin, amplitude)`` with ``|amplitude| > tol``."""
        for n, block in enumerate(self.levels):
            if block is None:
                continue
            rows, cols = np.nonzero(np.abs(block) > tol)
            for r, c in zip(rows, cols):
                yield word_at(int(r), n, self.kappa), int(c), complex(block[r, c])

    def to_dict(self, tol: float = 1e-15) -> dict[tuple[ReducedWord, int], complex]:
        return {(g, e): a for g, e, a in self.items(tol)}

    def norm_squared(self) -> float:
        return float(sum(_chunked_sq(b).sum() for b in self.levels if b is not None))

    def vertex_probabilities(self, n: int) -> NDArray[np.float64]:
        """Finding probability of every vertex of length ``n``."""
        if n >= len(self.levels) or self.levels[n] is None:
            return np.zeros(level_size(self.kappa, n))
        return _chunked_sq(self.levels[n])


def _chunked_sq(block: NDArray[np.complex128]) -> NDArray[np.float64]:
    out = np.empty(block.shape[0])
    for s in range(0, block.shape[0], _CHUNK):
        b = block[s : s + _CHUNK]
        out[s : s + _CHUNK] = (b.real**2 + b.imag**2).sum(axis=1)
    return out


def initial_coin(params: WalkParams) -> NDArray[np.complex128]:
    k = params.kappa
    if params.case is Case.A:
        return np.full(k, 1.0 / math.sqrt(k), dtype=np.complex128)
    omega = cmath.exp(2j * math.pi / k)
    return np.array([omega**j / math.sqrt(k) for j in range(k)], dtype=np.complex128)


def initial_tree_state(params: WalkParams) -> TreeState:
    root = initial_coin(params)[None, :].copy()
    return TreeState(params.kappa, [root], 0, params)


def step_tree(state: TreeState, kappa: int | None = None) -> TreeState:
    """One application of ``U|g,eps> = sum_tau (2/kappa - delta) |tau g, tau>``."""
    k = state.kappa if kappa is None else kappa
    if k != state.kappa:
        raise ValueError("kappa does not match the state")
    coin = grover_coin(k)
    coined = [None if b is None else b @ coin for b in state.levels]
    depth = len(coined) + 1
    new: list[NDArray[np.complex128] | None] = []
    for n in range(depth):
        inner = coined[n - 1] if 1 <= n <= len(coined) else None
        outer = coined[n + 1] if n + 1 < len(coined) else None
        if inner is None and outer is None:
            new.append(None)
            continue
        if n == 0:
            # tau e = tau: the root receives coin tau from word (tau) on level 1
            block = np.diagonal(outer).copy()[None, :]
            new.append(block)
            continue
        block = np.zeros((level_size(k, n), k), dtype=np.complex128)
        letters = first_letters(k, n)
        if inner is not None:
            _fill_from_parent(block, inner, letters, k, n)
        if outer is not None:
            _fill_from_children(block, outer, first_letters(k, n + 1), k)
        new.append(block)
    while new and new[-1] is None:
        new.pop()
    return TreeState(k, new, state.time + 1, state.params)


def _fill_from_parent(block, inner, letters, k, n):
    # (h, l0(h)) is reached from (parent(h), l0(h)) by prepending l0(h)
    for s in range(0, block.shape[0], _CHUNK):
        rows = np.arange(s, min(s + _CHUNK, block.shape[0]))
        parents = rows // (k - 1) if n >= 2 else np.zeros_like(rows)
        lt = letters[rows].astype(np.intp)
        block[rows, lt] = inner[parents, lt]


def _fill_from_children(block, outer, child_letters, k):
    # (h, tau) with tau != l0(h) is reached from (tau h, tau) by cancellation
    n_words = block.shape[0]
    c = outer.reshape(n_words, k - 1, k)
    cl = child_letters.reshape(n_words, k - 1).astype(np.intp)
    vals = np.take_along_axis(c, cl[:, :, None], axis=2)[:, :, 0]
    np.put_along_axis(block, cl, vals, axis=1)


def run_tree(params: WalkParams, t: int) -> Iterator[TreeState]:
    """Yield tree states at times 0..t."""
    state = initial_tree_state(params)
    yield state
    for _ in range(t):
        state = step_tree(state)
        yield state


def distance_distribution(state: TreeState) -> Distribution:
    """Distribution of the word length ``|W_t|``."""
    pmf = np.zeros(max(len(state.levels), 1))
    for n, block in enumerate(state.levels):
        if block is not None:
            pmf[n] = _chunked_sq(block).sum()
    return Distribution(pmf, state.time, state.params)


def check_lemma1(state: TreeState, params: WalkParams) -> float:
    """Largest violation of the amplitude symmetry inside the classes.

    In case A every pair in the union over ``j`` of ``A_j^(s)(x)`` must carry
    the same amplitude. In case B an amplitude in ``A_j^(s)(x)`` times
    ``omega^-j`` must be the same for every member of the union. Returns the
    largest distance of a member from the first member of its union.
    """
    k = params.kappa
    omega = cmath.exp(2j * math.pi / k)
    case_b = params.case is Case.B
    worst = 0.0
    for n, block in enumerate(state.levels):
        if block is None:
            continue
        if n == 0:
            vals = block[0].copy()
            if case_b:
                vals *= omega ** -np.arange(k)
            worst = max(worst, float(np.max(np.abs(vals - vals[0]))))
            continue
        letters = first_letters(k, n)
        ref = {}
        for s in range(0, block.shape[0], _CHUNK):
            b = block[s : s + _CHUNK]
            lt = letters[s : s + _CHUNK].astype(np.intp)
            inward = b[np.arange(len(b)), lt]
            mask = np.ones(b.shape, dtype=bool)
            mask[np.arange(len(b)), lt] = False
            outward = b[mask].reshape(len(b), k - 1)
            if case_b:
                rl = root_letters(k, n, np.arange(s, s + len(b)))
                phase = omega ** (-rl.astype(float))
                inward = inward * phase
                outward = outward * phase[:, None]
            for sign, vals in (("-", inward), ("+", outward.ravel())):
                if sign not in ref:
                    ref[sign] = vals[0]
                worst = max(worst, float(np.max(np.abs(vals - ref[sign]))))
    return worst


# --- sparse reference stepper ------------------------------------------------


def initial_tree_amplitudes(params: WalkParams) -> dict[tuple[ReducedWord, int], complex]:
    return {(IDENTITY, j): complex(a) for j, a in enumerate(initial_coin(params))}


def step_tree_sparse(
    amplitudes: dict[tuple[ReducedWord, int], complex], kappa: int, prune: float = 1e-15
) -> dict[tuple[ReducedWord, int], complex]:
    """Literal dictionary implementation of one step, used as a cross-check."""
    out: dict[tuple[ReducedWord, int], complex] = {}
    diag = 2.0 / kappa - 1.0
    off = 2.0 / kappa
    for (g, eps), amp in amplitudes.items():
        for tau in range(kappa):
            key = (multiply(tau, g), tau)
            out[key] = out.get(key, 0j) + amp * (diag if tau == eps else off)
    return {key: a for key, a in out.items() if abs(a) >= prune}
