"""Pure-Python composition sweep (reference and fallback for the compiled kernel).

Walks all compositions d of ``total`` into ``m`` positive parts in
lexicographic order while maintaining a symmetric Schur-complement
elimination of A - diag(d) modulo a prime.  Fixing d_k completes row and
column k; pivots are taken only inside the fixed block, which is kept zero
between levels.  Since the block is zero before row k arrives, one level
needs at most a 2x2 pivot.  The rank mod p never exceeds the rational rank,
so a subtree is pruned once the pivot count makes a defect of at least
``min_defect`` impossible.  Every surviving leaf is a candidate; callers
recheck candidates exactly.
"""

from __future__ import annotations

from typing import Callable, Sequence

PRIME = 2147483647


def sweep(
    structure: Sequence[Sequence[int]],
    total: int,
    min_defect: int,
    callback: Callable[[tuple[int, ...]], bool],
) -> int:
    """Call ``callback(d)`` for each candidate; stop early when it returns True.

    Returns the number of search nodes visited.
    """
    p = PRIME
    m = len(structure)
    if m == 0 or total < m:
        return 0
    max_piv = m - min_defect
    if max_piv < 0:
        return 0
    mat0 = [[x % p for x in row] for row in structure]
    d = [0] * m
    nodes = 0
    stop = False

    def level(k: int, mat: list[list[int]], free: list[int], piv: int, rest: int) -> None:
        nonlocal nodes, stop
        hi = rest - (m - k - 1)
        lo = hi if k == m - 1 else 1
        for dk in range(lo, hi + 1):
            if stop:
                return
            nodes += 1
            d[k] = dk
            c = (mat[k][k] - dk) % p
            i = next((r for r in free if mat[k][r]), -1)
            if i >= 0:
                a = mat[k][i]
                ainv = pow(a, p - 2, p)
                cc = (-c * ainv * ainv) % p
                keep = [r for r in free if r != i] + list(range(k + 1, m))
                new = [row[:] for row in mat]
                for r in keep:
                    ri, rk = mat[r][i], mat[r][k]
                    if not (ri or rk):
                        continue
                    tr = (ri * cc) % p
                    for s in keep:
                        si, sk = mat[i][s], mat[k][s]
                        if si or sk:
                            new[r][s] = (mat[r][s] - tr * si - ainv * (ri * sk + rk * si)) % p
                npiv, nfree = piv + 2, [r for r in free if r != i]
            elif c:
                cinv = pow(c, p - 2, p)
                keep = free + list(range(k + 1, m))
                new = [row[:] for row in mat]
                for r in keep:
                    rk = mat[r][k]
                    if not rk:
                        continue
                    t = (rk * cinv) % p
                    for s in keep:
                        sk = mat[k][s]
                        if sk:
                            new[r][s] = (mat[r][s] - t * sk) % p
                npiv, nfree = piv + 1, free
            else:
                new = [row[:] for row in mat]
                new[k][k] = 0
                npiv, nfree = piv, free + [k]
            if npiv > max_piv:
                continue
            if k == m - 1:
                if callback(tuple(d)):
                    stop = True
                    return
            else:
                level(k + 1, new, nfree, npiv, rest - dk)

    level(0, mat0, [], 0, total)
    return nodes
