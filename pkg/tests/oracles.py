"""Independent reference implementations used to freeze expected values.

Everything here is deliberately naive: plain-Python DP tables, explicit
path enumeration, and an exhaustive sweep over alignment search states.
The implementations under test never share code with this module.
"""

from __future__ import annotations

from itertools import product

UNVOICED = frozenset("<>#")


def lcs_len(a: str, b: str) -> int:
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                rows[i][j] = rows[i - 1][j - 1] + 1
            else:
                rows[i][j] = max(rows[i - 1][j], rows[i][j - 1])
    return rows[-1][-1]


def ins_del_reference(a: str, b: str) -> int:
    return len(a) + len(b) - 2 * lcs_len(a, b)


def generic_levenshtein(a, b, sub_cost=1, ins_cost=1, del_cost=1):
    """Plain Wagner-Fischer over any two sequences; returns the full table."""
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for j in range(1, len(b) + 1):
        rows[0][j] = rows[0][j - 1] + ins_cost
    for i in range(1, len(a) + 1):
        rows[i][0] = rows[i - 1][0] + del_cost
        for j in range(1, len(b) + 1):
            sub = 0 if a[i - 1] == b[j - 1] else sub_cost
            rows[i][j] = min(
                rows[i - 1][j - 1] + sub,
                rows[i - 1][j] + del_cost,
                rows[i][j - 1] + ins_cost,
            )
    return rows


def optimal_path_nodes(ref: str, hyp: str, sub_cost: int = 2) -> set:
    """Every lattice node on at least one minimum-cost edit path.

    Enumerates all monotone paths; only usable for short strings.
    """
    table = generic_levenshtein(ref, hyp, sub_cost=sub_cost)
    best = table[-1][-1]
    sink = (len(ref), len(hyp))
    nodes: set = set()

    def walk(i: int, j: int, cost: int, visited: tuple) -> None:
        if cost > best:
            return
        if (i, j) == sink:
            if cost == best:
                nodes.update(visited)
            return
        if i < len(ref) and j < len(hyp):
            sub = 0 if ref[i] == hyp[j] else sub_cost
            walk(i + 1, j + 1, cost + sub, visited + ((i + 1, j + 1),))
        if i < len(ref):
            walk(i + 1, j, cost + 1, visited + ((i + 1, j),))
        if j < len(hyp):
            walk(i, j + 1, cost + 1, visited + ((i, j + 1),))

    walk(0, 0, 0, ((0, 0),))
    return nodes


# ---------------------------------------------------------------------------
# Exhaustive alignment-cost oracle.
#
# A search state is (node, last_close, open_cost); its best reachable final
# committed cost does not depend on anything else, so an exhaustive sweep over
# these states, in topological order of the node, evaluates every path and
# every closing decision without re-walking shared suffixes.
# ---------------------------------------------------------------------------

def _char_class(ch: str, vowels: frozenset) -> int:
    if ch in UNVOICED:
        return 0
    return 1 if ch in vowels else 2


def _step_cost_ref(ch, vowels, unit):
    if unit:
        return 1
    return 1 if ch in UNVOICED else 2


def _diag_cost(rc, hc, vowels, unit):
    if rc == hc:
        return 0
    a, b = _char_class(rc, vowels), _char_class(hc, vowels)
    if a == 0 or b == 0:
        return None
    if unit:
        return 1
    return 2 if a == b else 3


def exhaustive_min_cost(
    ref: str,
    hyp: str,
    in_band,
    *,
    beam_irrelevant: bool = True,
    substitution_penalty: bool = True,
    unit_cost: bool = False,
    restrict: bool = False,
    vowels: frozenset = frozenset("aeiou"),
):
    """Minimum committed cost over every path and closing, or None.

    in_band[i][j] says whether lattice node (i, j) is inside the marked
    optimal-path band (indexable like a 2-D array).
    """
    RL, HL = len(ref), len(hyp)
    if RL == 0 and HL == 0:
        return 0

    # states[(i, j)] -> {(ur, uh, open_cost): min_closed_cost}
    states: dict = {(0, 0): {(0, 0, 0): 0}}
    best = None

    def push(store, key, cc):
        old = store.get(key)
        if old is None or cc < old:
            store[key] = cc

    for depth in range(RL + HL):
        for i in range(min(depth, RL), -1, -1):
            j = depth - i
            if j < 0 or j > HL:
                continue
            here = states.pop((i, j), None)
            if not here:
                continue
            for (ur, uh, co), cc in here.items():
                steps = []
                if i < RL and j < HL:
                    t = _diag_cost(ref[i], hyp[j], vowels, unit_cost)
                    if t is not None:
                        steps.append(("d", i + 1, j + 1, t))
                if i < RL:
                    steps.append(("r", i + 1, j, _step_cost_ref(ref[i], vowels, unit_cost)))
                if j < HL:
                    steps.append(("h", i, j + 1, _step_cost_ref(hyp[j], vowels, unit_cost)))
                for kind, ni, nj, t in steps:
                    if restrict:
                        if not (in_band[i][j] and in_band[ni][nj]):
                            continue
                        dev = 0
                    else:
                        dev = 0 if in_band[i][j] else 1
                    co2 = co + t + dev
                    # Closing decisions.
                    if kind in ("d", "r") and ref[i] == ">":
                        nu = (ni, nj)
                    elif kind in ("d", "r") and ref[i] == "<" and (i, j) != (ur, uh):
                        nu = (i, j)
                    elif kind == "h" and hyp[j] == ">" and i == ur and j != uh:
                        nu = (ni, nj)
                    else:
                        nu = None
                    if nu is None:
                        ncc, nco, nur, nuh = cc, co2, ur, uh
                    else:
                        doubled = substitution_penalty and nu[0] > ur and nu[1] > uh
                        ncc = cc + co2 * (2 if doubled else 1)
                        nco, (nur, nuh) = 0, nu
                    if (ni, nj) == (RL, HL):
                        if (nur, nuh) == (RL, HL):
                            if best is None or ncc < best:
                                best = ncc
                        continue
                    target = states.setdefault((ni, nj), {})
                    push(target, (nur, nuh, nco), ncc)
    return best


def enumerate_paths_min_cost(
    ref: str,
    hyp: str,
    in_band,
    *,
    substitution_penalty: bool = True,
    unit_cost: bool = False,
    restrict: bool = False,
    vowels: frozenset = frozenset("aeiou"),
):
    """Pure path-by-path DFS; cross-checks the sweep on very short inputs."""
    RL, HL = len(ref), len(hyp)
    if RL == 0 and HL == 0:
        return 0
    best = [None]

    def walk(i, j, ur, uh, cc, co):
        if (i, j) == (RL, HL):
            if (ur, uh) == (RL, HL) and (best[0] is None or cc < best[0]):
                best[0] = cc
            return
        moves = []
        if i < RL and j < HL:
            t = _diag_cost(ref[i], hyp[j], vowels, unit_cost)
            if t is not None:
                moves.append(("d", i + 1, j + 1, t))
        if i < RL:
            moves.append(("r", i + 1, j, _step_cost_ref(ref[i], vowels, unit_cost)))
        if j < HL:
            moves.append(("h", i, j + 1, _step_cost_ref(hyp[j], vowels, unit_cost)))
        for kind, ni, nj, t in moves:
            if restrict:
                if not (in_band[i][j] and in_band[ni][nj]):
                    continue
                dev = 0
            else:
                dev = 0 if in_band[i][j] else 1
            co2 = co + t + dev
            if kind in ("d", "r") and ref[i] == ">":
                nu = (ni, nj)
            elif kind in ("d", "r") and ref[i] == "<" and (i, j) != (ur, uh):
                nu = (i, j)
            elif kind == "h" and hyp[j] == ">" and i == ur and j != uh:
                nu = (ni, nj)
            else:
                nu = None
            if nu is None:
                walk(ni, nj, ur, uh, cc, co2)
            else:
                doubled = substitution_penalty and nu[0] > ur and nu[1] > uh
                walk(ni, nj, nu[0], nu[1], cc + co2 * (2 if doubled else 1), 0)

    walk(0, 0, 0, 0, 0, 0)
    return best[0]
