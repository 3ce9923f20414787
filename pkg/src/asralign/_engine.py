"""Lockstep numpy beam search over the character edit lattice.

The per-step semantics (transition costs, deviation penalty, closing
rules) are defined scalar-style in beamalign; this module is the same
search flattened into arrays, one row per surviving path, so a round
costs a few dozen numpy calls instead of a Python loop over states.

Two disciplines make every tie-break deterministic without materializing
op traces:

* the active table is kept in trace-lexicographic order (step codes
  DIAG < REF_ONLY < HYP_ONLY); each round expands every parent into
  three consecutive child slots in step order, so the child batch is
  born in trace order and no sort is needed to restore it;
* every later sort is stable, so "first occurrence" always means
  "lexicographically smallest trace".

All arithmetic is integer. Normalized scores n/d are compared through
the exact surrogate key (n << SCALE_BITS) // d, an order embedding while
n < 2**22 and d*d < 2**SCALE_BITS; entry assertions keep inputs far
inside that envelope.
"""

from __future__ import annotations

import numpy as np

DIAG, REF_ONLY, HYP_ONLY = 0, 1, 2
FORBIDDEN = -1

_SCALE_BITS = 40
_LT, _GT = ord("<"), ord(">")


def char_codes(s: str) -> np.ndarray:
    return np.array([ord(c) for c in s], dtype=np.int64)


def single_step_costs(cls: np.ndarray, unit_cost: bool) -> np.ndarray:
    """Cost of consuming one character on one axis; cls 0 means unvoiced."""
    if unit_cost:
        return np.ones(cls.shape, dtype=np.int64)
    return np.where(cls == 0, 1, 2).astype(np.int64)


def diag_cost_table(
    ref_codes: np.ndarray,
    hyp_codes: np.ndarray,
    ref_cls: np.ndarray,
    hyp_cls: np.ndarray,
    unit_cost: bool,
) -> np.ndarray:
    """(|R|, |H|) table of diagonal step costs, FORBIDDEN where disallowed."""
    eq = ref_codes[:, None] == hyp_codes[None, :]
    both_voiced = (ref_cls[:, None] != 0) & (hyp_cls[None, :] != 0)
    if unit_cost:
        mismatch = np.where(both_voiced, 1, FORBIDDEN)
    else:
        same_class = ref_cls[:, None] == hyp_cls[None, :]
        mismatch = np.where(both_voiced, np.where(same_class, 2, 3), FORBIDDEN)
    return np.where(eq, 0, mismatch).astype(np.int64)


class _Table:
    """Per-round snapshot of what reconstruction needs (not vr/vh/co)."""

    __slots__ = ("ur", "uh", "cc", "parent", "step")

    def __init__(self, ur, uh, cc, parent, step):
        self.ur, self.uh, self.cc = ur, uh, cc
        self.parent, self.step = parent, step


def _trace(tables, round_idx, row, final_step):
    steps = [final_step]
    r, p = round_idx, row
    while r > 0:
        steps.append(int(tables[r].step[p]))
        p = int(tables[r].parent[p])
        r -= 1
    steps.reverse()
    return steps


def _chain_segments(tables, round_idx, row, final_cc, sink):
    """Walk one path's close points into (ref_span, hyp_span, cost) drafts."""
    points = [(sink[0], sink[1], final_cc)]
    r, p = round_idx, row
    while r >= 0:
        t = tables[r]
        points.append((int(t.ur[p]), int(t.uh[p]), int(t.cc[p])))
        p = int(t.parent[p])
        r -= 1
    points.reverse()
    drafts = []
    pr, ph, pc = points[0]
    for ur, uh, cc in points[1:]:
        if (ur, uh) != (pr, ph):
            drafts.append(((pr, ur), (ph, uh), cc - pc))
            pr, ph, pc = ur, uh, cc
    return drafts


class _Patterns:
    """Cached per-batch index patterns; they only ever grow."""

    def __init__(self, node_stride: int, node_count: int):
        self.step_base = np.array(
            [0, node_count, 2 * node_count], dtype=np.int64)
        self.target_off = np.array(
            [node_stride + 1, node_stride, 1], dtype=np.int64)
        self._n = 0

    def for_parents(self, n: int):
        if n > self._n:
            self._n = n
            self._bases = np.tile(self.step_base, n)
            self._offs = np.tile(self.target_off, n)
        return self._bases[: 3 * n], self._offs[: 3 * n]


def run_beam(
    ref_d: str,
    hyp_d: str,
    ref_cls: np.ndarray,
    hyp_cls: np.ndarray,
    in_band: np.ndarray,
    *,
    beam_size: int,
    substitution_penalty: bool,
    unit_cost: bool,
    restrict: bool,
):
    """Search the lattice; return (final committed cost, segment drafts).

    Returns None when no path finishes with a closed final segment, which
    only the backtrace restriction can cause; the caller falls back.
    """
    RL, HL = len(ref_d), len(hyp_d)
    assert RL + HL > 0, "degenerate empty pair is the caller's job"
    # Length caps make every packed key fit int64: positions use 15 bits
    # each, and since one step adds at most 4 (worst mismatch 3 plus a
    # deviation) over at most RL+HL steps, with closes at most doubling,
    # cc <= 8*(RL+HL) < 2**22 and co <= 4*(RL+HL) < 2**20.
    assert RL < 1 << 15 and HL < 1 << 15, "inputs too long for packed keys"
    assert beam_size >= 1

    ref_codes, hyp_codes = char_codes(ref_d), char_codes(hyp_d)
    dcost = diag_cost_table(ref_codes, hyp_codes, ref_cls, hyp_cls, unit_cost)
    rcost = single_step_costs(ref_cls, unit_cost)
    hcost = single_step_costs(hyp_cls, unit_cost)
    penalty = bool(substitution_penalty)

    # One flat cost table covering all three steps, padded so that any
    # off-lattice move lands on FORBIDDEN; validity is then one compare.
    stride = HL + 1
    node_count = (RL + 1) * stride
    combined = np.full(3 * node_count, FORBIDDEN, dtype=np.int64)
    grid = combined[:node_count].reshape(RL + 1, stride)
    grid[:RL, :HL] = dcost
    grid = combined[node_count: 2 * node_count].reshape(RL + 1, stride)
    grid[:RL, :] = rcost[:, None]
    grid = combined[2 * node_count:].reshape(RL + 1, stride)
    grid[:, :HL] = hcost[None, :]
    # padded past the sink so off-lattice target gathers stay in bounds
    # (such rows are already invalid via FORBIDDEN cost)
    band_flat = np.concatenate([
        np.ascontiguousarray(in_band, dtype=bool).ravel(),
        np.zeros(stride + 1, dtype=bool),
    ])
    # char-code lookups padded with a non-delimiter so edge rows gather safely
    rcodes_pad = np.concatenate([ref_codes, np.zeros(1, dtype=np.int64)])
    hcodes_pad = np.concatenate([hyp_codes, np.zeros(1, dtype=np.int64)])
    patterns = _Patterns(stride, node_count)

    zero = np.zeros(1, dtype=np.int64)
    vr, vh, ur, uh, cc, co = (zero.copy() for _ in range(6))
    parent = np.full(1, -1, dtype=np.int64)
    step = np.full(1, -1, dtype=np.int64)

    tables: list[_Table] = []
    pool: list[tuple[int, int, int, int]] = []  # (cc, round, parent row, step)
    best = None

    for round_idx in range(RL + HL):
        n = vr.size
        if n == 0:
            break
        # cc + co*open_mult lower-bounds any finished cost this row can
        # still reach: once both axes have advanced since u, only a
        # doubled rule-(a) close remains possible for the open segment.
        # Checking every fourth round trades at most three extra rounds
        # for less per-round overhead; a row whose bound exceeds best can
        # never finish at best, so late pruning changes nothing.
        if best is not None and round_idx & 3 == 3:
            if penalty:
                open_mult = 1 + ((vr > ur) & (vh > uh))
            else:
                open_mult = 1
            if int((cc + co * open_mult).min()) > best:
                break
        tables.append(_Table(ur, uh, cc, parent, step))

        # Parent-major batch: rows 3p, 3p+1, 3p+2 are parent p's DIAG,
        # REF_ONLY, HYP_ONLY children, so the batch is in trace order.
        bases, offs = patterns.for_parents(n)
        node = vr * stride + vh
        node3 = np.repeat(node, 3)
        t_all = combined[node3 + bases]
        valid = t_all >= 0
        if restrict:
            src_ok = band_flat[node]
            tgt_ok = band_flat[node3 + offs]
            valid &= np.repeat(src_ok, 3) & tgt_ok
            deviate = None
        else:
            deviate = ~band_flat[node]
        keep = np.nonzero(valid)[0]
        if keep.size == 0:
            vr = np.zeros(0, dtype=np.int64)
            continue

        pk = keep // 3  # parent row of each survivor
        sk = keep - 3 * pk  # its step code
        tk = t_all[keep]
        wvr, wvh = vr[pk], vh[pk]
        wur, wuh = ur[pk], uh[pk]
        adv_r = sk != HYP_ONLY
        adv_h = sk != REF_ONLY
        v2r = wvr + adv_r
        v2h = wvh + adv_h
        co2 = co[pk] + tk
        if deviate is not None:
            co2 += deviate[pk]

        rc = rcodes_pad[wvr]
        hc = hcodes_pad[wvh]
        w_at_u = (wvr == wur) & (wvh == wuh)
        close_a = adv_r & (rc == _GT)
        close_b = adv_r & (rc == _LT) & ~w_at_u
        close_c = (sk == HYP_ONLY) & (hc == _GT) & (wvr == wur) & (wvh != wuh)
        closing = close_a | close_b | close_c
        at_target = close_a | close_c  # rule (b) closes at the step source
        cr = np.where(at_target, v2r, wvr)
        ch = np.where(at_target, v2h, wvh)
        if penalty:
            closed_cost = co2 * (1 + ((cr > wur) & (ch > wuh)))
        else:
            closed_cost = co2
        cc2 = cc[pk] + np.where(closing, closed_cost, 0)
        co3 = np.where(closing, 0, co2)
        ur2 = np.where(closing, cr, wur)
        uh2 = np.where(closing, ch, wuh)
        # one matrix per round so each later compaction is a single gather
        M = np.empty((8, keep.size), dtype=np.int64)
        M[0], M[1], M[2], M[3] = v2r, v2h, ur2, uh2
        M[4], M[5], M[6], M[7] = cc2, co3, pk, sk

        at_sink = (v2r == RL) & (v2h == HL)
        if at_sink.any():
            fin = at_sink & (ur2 == RL) & (uh2 == HL)
            for i in np.nonzero(fin)[0]:
                fcc = int(cc2[i])
                pool.append((fcc, round_idx, int(pk[i]), int(sk[i])))
                best = fcc if best is None else min(best, fcc)
            M = M[:, ~at_sink]  # drops unclosed sink arrivals too

        if M.shape[1]:
            col_a = (M[0] << 45) | (M[1] << 30) | (M[2] << 15) | M[3]
            col_b = (M[4] << 20) | M[5]
            by_key = np.lexsort((col_b, col_a))
            a_sorted, b_sorted = col_a[by_key], col_b[by_key]
            first = np.ones(by_key.size, dtype=bool)
            first[1:] = (a_sorted[1:] != a_sorted[:-1]) | (b_sorted[1:] != b_sorted[:-1])
            if not first.all():
                M = M[:, np.sort(by_key[first])]

        if M.shape[1] > beam_size:
            v2r, v2h, ur2, uh2, cc2, co3 = M[:6]
            if penalty:
                numerator = cc2 + co3 * (1 + ((v2r > ur2) & (v2h > uh2)))
            else:
                numerator = cc2 + co3
            key = (numerator << _SCALE_BITS) // (v2r + v2h + 1)
            by_score = np.lexsort((co3, cc2, key))
            M = M[:, np.sort(by_score[:beam_size])]

        vr, vh, ur, uh, cc, co, parent, step = M

    if not pool:
        return None
    finalists = [e for e in pool if e[0] == best]
    if len(finalists) > 1:
        finalists.sort(key=lambda e: _trace(tables, e[1], e[2], e[3]))
    fcc, fround, frow, _ = finalists[0]
    drafts = _chain_segments(tables, fround, frow, fcc, (RL, HL))
    return fcc, drafts
