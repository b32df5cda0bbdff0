"""Finite words over ``{1, ..., N}``, matrix tuples and enumeration of word products."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import InputError, PreconditionError, ResourceError
from .multilinear import as_matrix, is_invertible, operator_norm

DEFAULT_BUDGET = 10**7
BLOCK_WORDS = 4096

Word = tuple[int, ...]


def word_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("AFFLAB_BUDGET")
    if env:
        try:
            value = int(float(env))
        except ValueError:
            raise InputError(f"AFFLAB_BUDGET={env!r} is not a number") from None
        if value < 1:
            raise InputError("AFFLAB_BUDGET must be >= 1")
        return value
    return DEFAULT_BUDGET


def check_budget(n_maps: int, depth: int, budget: int | None = None) -> None:
    limit = word_budget(budget)
    count = n_maps**depth
    if count > limit:
        raise ResourceError(f"enumeration of {n_maps}^{depth} = {count} words exceeds budget {limit}")


@dataclass(frozen=True)
class MatrixTuple:
    """An ordered tuple ``(A_1, ..., A_N)`` of invertible ``d x d`` matrices.

    ``reduced=True`` admits a single map, as left behind by removing one map
    from a pair.
    """

    matrices: tuple[np.ndarray, ...]
    cap: float | None = None
    label: str | None = None
    reduced: bool = False
    stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mats = tuple(as_matrix(A, name=f"A_{i + 1}") for i, A in enumerate(self.matrices))
        if not mats:
            raise InputError("empty matrix tuple")
        d = mats[0].shape[0]
        if any(A.shape != (d, d) for A in mats):
            raise InputError("matrices in a tuple must share one dimension")
        if len(mats) < 2 and not self.reduced:
            raise InputError("a matrix tuple needs N >= 2 maps")
        for i, A in enumerate(mats):
            if not is_invertible(A):
                raise InputError(f"A_{i + 1} is numerically singular")
            A.setflags(write=False)
        if self.cap is not None:
            bad = [i + 1 for i, A in enumerate(mats) if not operator_norm(A) < self.cap]
            if bad:
                raise PreconditionError(f"maps {bad} violate the declared contraction cap {self.cap}")
        stack = np.stack(mats)
        stack.setflags(write=False)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "stack", stack)

    @property
    def d(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def N(self) -> int:
        return len(self.matrices)

    def __len__(self) -> int:
        return self.N

    def __getitem__(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def norms(self) -> np.ndarray:
        return np.linalg.svd(self.stack, compute_uv=False)[:, 0]

    def without(self, j: int) -> "MatrixTuple":
        """Drop map ``j`` (1-based)."""
        if not 1 <= j <= self.N:
            raise InputError(f"map index {j} out of range 1..{self.N}")
        rest = self.matrices[: j - 1] + self.matrices[j:]
        return MatrixTuple(rest, cap=self.cap, label=self.label, reduced=len(rest) < 2)

    def map(self, f: Callable[[np.ndarray], np.ndarray]) -> "MatrixTuple":
        return MatrixTuple(tuple(f(A) for A in self.matrices), reduced=self.reduced)

    def transpose(self) -> "MatrixTuple":
        return self.map(np.transpose)


def validate_word(word: Sequence[int], n_maps: int) -> Word:
    word = tuple(int(i) for i in word)
    for letter in word:
        if not 1 <= letter <= n_maps:
            raise InputError(f"letter {letter} outside 1..{n_maps}")
    return word


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    if "," in text or " " in text:
        return tuple(int(t) for t in text.replace(",", " ").split())
    return tuple(int(c) for c in text)


def word_product(tuple_: MatrixTuple, word: Sequence[int]) -> np.ndarray:
    word = validate_word(word, tuple_.N)
    out = np.eye(tuple_.d)
    for letter in word:
        out = out @ tuple_[letter - 1]
    return out


def shift(word: Sequence[int]) -> Word:
    word = tuple(word)
    if not word:
        raise InputError("cannot shift the empty word")
    return word[1:]


def words(n_maps: int, n: int) -> Iterator[Word]:
    """``Sigma_n`` in lexicographic order."""
    return product(range(1, n_maps + 1), repeat=n)


def word_index(word: Sequence[int], n_maps: int) -> int:
    """Position of ``word`` in the lexicographic order of its length."""
    idx = 0
    for letter in word:
        idx = idx * n_maps + (letter - 1)
    return idx


def index_word(idx: int, n_maps: int, n: int) -> Word:
    letters = []
    for _ in range(n):
        idx, r = divmod(idx, n_maps)
        letters.append(r + 1)
    return tuple(reversed(letters))


def fold_words(tuple_: MatrixTuple, n: int, accumulate: Callable, initial=None,
               budget: int | None = None):
    """Fold ``accumulate(acc, word, A_word)`` over ``Sigma_n`` in lexicographic order.

    Products are built depth first with an explicit prefix stack, one matrix
    multiplication per visited node.
    """
    if n < 1:
        raise InputError("depth n must be >= 1")
    check_budget(tuple_.N, n, budget)
    N = tuple_.N
    mats = tuple_.matrices
    stack = [np.eye(tuple_.d)]
    letters: list[int] = []
    acc = initial
    # letters[-1] is the next letter to try at the current depth
    next_letter = [0]
    while next_letter:
        depth = len(next_letter) - 1
        i = next_letter[-1]
        if i == N:
            next_letter.pop()
            if letters:
                letters.pop()
                stack.pop()
            continue
        next_letter[-1] += 1
        P = stack[depth] @ mats[i]
        if depth + 1 == n:
            acc = accumulate(acc, tuple(letters) + (i + 1,), P)
        else:
            letters.append(i + 1)
            stack.append(P)
            next_letter.append(0)
    return acc


def all_products(tuple_: MatrixTuple, n: int) -> np.ndarray:
    """Stack of all ``A_w`` for ``w`` in ``Sigma_n`` in lexicographic order, shape ``(N^n, d, d)``."""
    out = np.broadcast_to(np.eye(tuple_.d), (1, tuple_.d, tuple_.d))
    for _ in range(n):
        out = np.einsum("pij,qjk->pqik", out, tuple_.stack).reshape(-1, tuple_.d, tuple_.d)
    return out


def product_blocks(tuple_: MatrixTuple, n: int, budget: int | None = None,
                   block_words: int = BLOCK_WORDS) -> Iterator[np.ndarray]:
    """Yield ``A_w`` for ``w`` in ``Sigma_n`` as lexicographically ordered blocks.

    The word is split into a prefix enumerated depth first and a suffix whose
    ``N^m`` products are precomputed once, so memory stays at
    ``O(N^m d^2 + n d^2)``.
    """
    if n < 0:
        raise InputError("depth must be >= 0")
    check_budget(tuple_.N, n, budget)
    N = tuple_.N
    m = n
    while m > 0 and N**m > max(block_words, N):
        m -= 1
    suffixes = all_products(tuple_, m)
    prefix_len = n - m
    if prefix_len == 0:
        yield suffixes
        return
    mats = tuple_.matrices
    stack = [np.eye(tuple_.d)]
    prev: tuple[int, ...] = ()
    for prefix in product(range(N), repeat=prefix_len):
        common = 0
        while common < len(prev) and prev[common] == prefix[common]:
            common += 1
        del stack[common + 1:]
        for i in prefix[common:]:
            stack.append(stack[-1] @ mats[i])
        prev = prefix
        yield np.matmul(stack[-1], suffixes)
