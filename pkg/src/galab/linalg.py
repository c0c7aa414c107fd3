"""Sparse exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction


def nullspace(columns: list) -> list:
    """Basis of ``{c : sum_j c_j * columns[j] = 0}``.

    ``columns[j]`` is a sparse vector ``{row_key: Fraction}``.  The basis is
    the reduced one: vector ``k`` has a 1 at its free column ``f_k``, zeros at
    every other free column, and nonzero entries only at columns ``<= f_k``.
    Returned as sparse dicts ``{column_index: Fraction}`` sorted by free column.
    """
    # rows of the transposed problem are processed column by column
    pivots: dict = {}  # row_key -> (column index, reduced column vector)
    relations = []
    for j, col in enumerate(columns):
        vec = {k: Fraction(v) for k, v in col.items() if v}
        combo = {j: Fraction(1)}
        # eliminate against existing pivots in a fixed order
        while vec:
            # earliest pivot first: reducing by it only introduces later pivots
            hits = [k for k in vec if k in pivots]
            if not hits:
                break
            hit = min(hits, key=lambda k: pivots[k][2])
            pj_vec, pj_combo, _ = pivots[hit]
            factor = vec[hit] / pj_vec[hit]
            for k, v in pj_vec.items():
                s = vec.get(k, 0) - factor * v
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
            for k, v in pj_combo.items():
                s = combo.get(k, 0) - factor * v
                if s:
                    combo[k] = s
                else:
                    combo.pop(k, None)
        if vec:
            key = min(vec, key=repr)
            pivots[key] = (vec, combo, len(pivots))
        else:
            relations.append((j, combo))
    # a dependent column's combination only touches pivot columns to its left,
    # so it already vanishes at every other free column
    basis = [dict(sorted(combo.items())) for _, combo in relations]
    return basis


def solve(columns: list, target: dict):
    """One solution ``c`` of ``sum_j c_j * columns[j] = target``, or ``None``."""
    sol = nullspace(list(columns) + [{k: -v for k, v in target.items()}])
    last = len(columns)
    for vec in sol:
        if vec.get(last) == 1:
            return {k: v for k, v in vec.items() if k != last}
    return None


def rank(columns: list) -> int:
    return len(columns) - len(nullspace(columns))
