"""Character edit lattice with its optimal-path band marked.

Distances here use unit insertions and deletions and a cost-2 substitution.
A substitution is then never cheaper than deleting and inserting, so the
distance always equals the insertion/deletion-only distance; what the
doubled substitution buys is a wider set of cost-optimal paths, and the
lattice below marks every node that lies on at least one of them. Downstream
alignment treats that band as the corridor it should normally stay inside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SUB_COST = 2


def _codes(s: str) -> np.ndarray:
    return np.fromiter((ord(c) for c in s), dtype=np.int32, count=len(s))


def _forward_table(ref: str, hyp: str, sub_cost: int = SUB_COST) -> np.ndarray:
    """Full DP table of prefix distances, shape (len(ref)+1, len(hyp)+1)."""
    m, n = len(ref), len(hyp)
    table = np.empty((m + 1, n + 1), dtype=np.int32)
    cols = np.arange(n + 1, dtype=np.int32)
    table[0] = cols
    hyp_codes = _codes(hyp)
    for i in range(1, m + 1):
        prev = table[i - 1]
        sub = np.where(hyp_codes == ord(ref[i - 1]), 0, sub_cost).astype(np.int32)
        cand = prev + 1                       # delete ref[i-1]
        cand[1:] = np.minimum(cand[1:], prev[:-1] + sub)
        # Fold in insertions with a running minimum of cand[j] - j.
        cand -= cols
        np.minimum.accumulate(cand, out=cand)
        cand += cols
        table[i] = cand
    return table


@dataclass(frozen=True)
class EditGraph:
    """Distance lattice over two delimited character sequences.

    dist[i, j] is the cost of editing ref[:i] into hyp[:j]; in_backtrace
    marks nodes where the forward and backward costs sum to the total, i.e.
    nodes sitting on at least one optimal path. Corners are always marked.
    """

    ref_chars: str
    hyp_chars: str
    dist: np.ndarray
    in_backtrace: np.ndarray

    @property
    def distance(self) -> int:
        return int(self.dist[-1, -1])


def build_graph(ref: str, hyp: str) -> EditGraph:
    """Forward and backward pass over the lattice, band marked by their sum."""
    forward = _forward_table(ref, hyp)
    backward = _forward_table(ref[::-1], hyp[::-1])[::-1, ::-1]
    total = forward[-1, -1]
    in_backtrace = (forward + backward) == total
    return EditGraph(ref_chars=ref, hyp_chars=hyp, dist=forward, in_backtrace=in_backtrace)


def ins_del_distance(a: str, b: str) -> int:
    """Edit distance when only insertions and deletions are allowed.

    Equals len(a) + len(b) - 2 * LCS(a, b), and also equals the lattice
    distance above because the cost-2 substitution never wins.
    """
    if not a or not b:
        return len(a) + len(b)
    b_codes = _codes(b)
    prev = np.zeros(len(b) + 1, dtype=np.int32)
    cur = np.empty_like(prev)
    for ca in a:
        eq = (b_codes == ord(ca)).astype(np.int32)
        cur[0] = 0
        np.maximum(prev[1:], prev[:-1] + eq, out=cur[1:])
        np.maximum.accumulate(cur, out=cur)
        prev, cur = cur, prev
    return len(a) + len(b) - 2 * int(prev[-1])
