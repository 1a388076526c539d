"""Signed subset shifts with branch-and-bound pruning.

Both the exact volume formula and the finite-interval expectation
formula are alternating sums over subsets ``S`` of the first ``m``
weights, where each subset contributes a function of the shifted
threshold ``t - sum(S)`` and only positive shifts contribute.  Because
the weights are sorted ascending, once a subset's weight sum reaches
``t`` every superset built from later indexes is dead as well, so a
depth-first walk can prune whole subtrees.  This module is the single
implementation of that walk; keeping it shared means the two formulas
cannot drift apart on enumeration order, which the bit-identity tests
rely on.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["SubsetTerm", "signed_shifts"]


class SubsetTerm:
    """One subset's contribution: parity sign and shifted threshold."""

    __slots__ = ("sign", "shift", "size")

    def __init__(self, sign: int, shift: float, size: int) -> None:
        self.sign = sign
        self.shift = shift
        self.size = size


def signed_shifts(
    weights: Sequence[float],
    t: float,
    prune: bool = True,
) -> tuple[list[SubsetTerm], int, int]:
    """Enumerate ``(-1)**|S| * (t - sum(S))`` over subsets of ``weights``.

    Parameters
    ----------
    weights : sequence of float
        Nondecreasing positive weights ``a_1 .. a_m``.
    t : float
        Threshold being shifted.
    prune : bool
        With pruning (default), subsets whose shift is <= 0 are skipped
        along with all their supersets over later indexes and only
        counted; without it every one of the ``2**m`` subsets is visited
        in the same depth-first order and nonpositive shifts appear as
        explicit terms.  Both modes yield the surviving terms in an
        identical order, so downstream accumulation is bit-for-bit
        identical (a nonpositive shift contributes an exact zero).

    Returns
    -------
    (terms, evaluated, pruned)
        ``terms`` in depth-first order, ``evaluated`` counts subsets
        with positive shift, ``pruned`` the rest;
        ``evaluated + pruned == 2**m`` in both modes.
    """
    m = len(weights)
    terms: list[SubsetTerm] = []
    evaluated = 0
    pruned = 0

    def walk(start: int, shift: float, sign: int, size: int) -> None:
        nonlocal evaluated, pruned
        terms.append(SubsetTerm(sign, shift, size))
        evaluated += 1
        for j in range(start, m):
            child = shift - weights[j]
            if child <= 0.0:
                if prune:
                    # weights ascend: index j and everything after it
                    # only push the shift lower, so the whole remainder
                    # of this subtree is nonpositive
                    pruned += (1 << (m - j)) - 1
                    break
                walk_dead(j, child, -sign, size + 1)
            else:
                walk(j + 1, child, -sign, size + 1)

    def walk_dead(start: int, shift: float, sign: int, size: int) -> None:
        # prune=False path: emit the dead subset and its whole subtree
        nonlocal pruned
        terms.append(SubsetTerm(sign, shift, size))
        pruned += 1
        for j in range(start + 1, m):
            walk_dead(j, shift - weights[j], -sign, size + 1)

    if t > 0.0:
        walk(0, float(t), 1, 0)
    elif prune:
        # even the empty subset is dead; count the full power set
        pruned = 1 << m
    else:
        walk_dead(-1, float(t), 1, 0)
    return terms, evaluated, pruned
