"""Exact linear algebra over Z/3^N.

Z/3^N is a local ring whose ideals are the powers of (3), so every matrix has
a canonical Howell normal form: a row-reduced form whose row span determines
membership, and which (unlike a naive echelon form over a field) also spans
every "prefix-zero" section of the row span.  That property is what makes
kernel extraction from an augmented matrix correct over Z/3^N.

All public entry points work with `SparseMatrix`; internally everything is
dense numpy int64, which is the right trade-off at the window sizes used by
the cobar builder (hundreds to a few thousand columns).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np


def _val3(x: int, N: int) -> int:
    """3-adic valuation of x mod 3^N; returns N for x == 0."""
    x = int(x) % (3 ** N)
    if x == 0:
        return N
    v = 0
    while x % 3 == 0:
        x //= 3
        v += 1
    return v


def _inv_unit(u: int, q: int) -> int:
    """Inverse of a unit mod q = 3^N."""
    return pow(int(u), -1, q)


def _valuations(x: np.ndarray, N: int) -> np.ndarray:
    """Elementwise 3-adic valuation mod 3^N (N for zero entries)."""
    v = np.full(x.shape, N, dtype=np.int64)
    y = x % (3 ** N)
    mask = y != 0
    v[mask] = 0
    while mask.any():
        mask = mask & (y % 3 == 0)
        y = np.where(mask, y // 3, y)
        v[mask] += 1
        mask = mask & (v < N)
    return v


def _echelon_sweep(M: np.ndarray, N: int, width: int):
    """One vectorized echelon pass; returns (pivot list, annihilator rows).

    ``width`` is the number of genuine columns (anything beyond is transform
    bookkeeping and never pivoted on).  Pivots are normalized to pure powers
    of 3 and their columns cleared below; annihilator rows (3^(N-v) times a
    pivot row with v > 0) are returned for the caller to fold back in.
    """
    q = 3 ** N
    rows = M.shape[0]
    r = 0
    pivots: List[Tuple[int, int, int]] = []  # (row, col, val)
    anns: List[np.ndarray] = []
    for col in range(width):
        if r >= rows:
            break
        colvals = M[r:, col] % q
        nz = np.nonzero(colvals)[0]
        if len(nz) == 0:
            continue
        vals = _valuations(colvals[nz], N)
        best = int(nz[np.argmin(vals)])
        v = int(vals[np.argmin(vals)])
        i = r + best
        if i != r:
            M[[r, i]] = M[[i, r]]
        u = int(M[r, col]) // (3 ** v)
        M[r] = (M[r] * _inv_unit(u, q)) % q
        below = M[r + 1 :, col]
        factors = below // (3 ** v)
        hit = np.nonzero(factors)[0]
        if len(hit):
            M[r + 1 + hit] = (M[r + 1 + hit] - np.outer(factors[hit], M[r])) % q
        if v > 0:
            anns.append((M[r] * (3 ** (N - v))) % q)
        pivots.append((r, col, v))
        r += 1
    return pivots, anns


def howell_dense(A: np.ndarray, N: int, transform: bool = False):
    """Howell normal form of the row module of A over Z/3^N.

    Returns H (rows with strictly increasing pivot columns, each pivot a pure
    power of 3, entries above a pivot reduced mod the pivot).  With
    ``transform=True`` also returns T with ``T @ A == H`` mod 3^N.

    The form is canonical: two matrices have equal Howell forms iff their row
    spans coincide.
    """
    q = 3 ** N
    A = np.asarray(A, dtype=np.int64) % q
    rows, cols = A.shape
    if transform:
        M = np.hstack([A, np.eye(rows, dtype=np.int64)])
    else:
        M = A.copy()
    # sweep, fold in annihilator rows not already spanned, and re-sweep; each
    # round enlarges the pivot structure, so this terminates
    while True:
        pivots, anns = _echelon_sweep(M, N, cols)
        keep = M[: len(pivots)]
        fresh = []
        for ann in anns:
            row = ann % q
            for (r, col, v) in pivots:
                x = int(row[col]) % q
                if x and x % (3 ** v) == 0:
                    row = (row - (x // (3 ** v)) * keep[r]) % q
            if row[:cols].any():
                fresh.append(row)
        if not fresh:
            M = keep
            break
        M = np.vstack([keep] + fresh)
    # upward reduction: entries above each pivot reduced mod the pivot
    for (r, col, v) in reversed(pivots):
        if r == 0:
            continue
        above = M[:r, col] % q
        factors = above // (3 ** v)
        hit = np.nonzero(factors)[0]
        if len(hit):
            M[hit] = (M[hit] - np.outer(factors[hit], M[r])) % q
    if transform:
        return M[:, :cols], M[:, cols:]
    return M


def _pivots(H: np.ndarray, N: int) -> List[Tuple[int, int]]:
    """(column, valuation) of each pivot row of a Howell form."""
    out = []
    for i in range(H.shape[0]):
        nz = np.nonzero(H[i])[0]
        j = int(nz[0])
        out.append((j, _val3(int(H[i, j]), N)))
    return out


def reduce_against(H: np.ndarray, v: np.ndarray, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Reduce v against a Howell form H; returns (residue, coefficients).

    ``v == coeffs @ H + residue`` mod 3^N, and residue is zero iff v lies in
    the row span of H.
    """
    q = 3 ** N
    v = np.asarray(v, dtype=np.int64).copy() % q
    coeffs = np.zeros(H.shape[0], dtype=np.int64)
    for i, (j, pv) in enumerate(_pivots(H, N)):
        x = int(v[j]) % q
        if x == 0:
            continue
        if _val3(x, N) >= pv:
            mult = x // (3 ** pv)
            v = (v - mult * H[i]) % q
            coeffs[i] = mult % q
    return v, coeffs


def in_span(H: np.ndarray, v: np.ndarray, N: int) -> bool:
    residue, _ = reduce_against(H, v, N)
    return not residue.any()


def kernel_dense(A: np.ndarray, N: int) -> np.ndarray:
    """Rows spanning {x : x @ A == 0 mod 3^N}.

    Works on the Howell form of [A | I]: rows whose A-part vanishes have
    I-parts spanning the kernel, by the Howell span property.
    """
    q = 3 ** N
    A = np.asarray(A, dtype=np.int64) % q
    rows, cols = A.shape
    aug = np.hstack([A, np.eye(rows, dtype=np.int64)])
    H = howell_dense(aug, N)
    mask = ~H[:, :cols].any(axis=1) if H.shape[0] else np.zeros(0, dtype=bool)
    K = H[mask][:, cols:]
    return howell_dense(K, N) if K.shape[0] else np.zeros((0, rows), dtype=np.int64)


def solve_left(A: np.ndarray, v: np.ndarray, N: int) -> Optional[np.ndarray]:
    """One solution x of x @ A == v mod 3^N, or None."""
    q = 3 ** N
    H, T = howell_dense(A, N, transform=True)
    residue, coeffs = reduce_against(H, v, N)
    if residue.any():
        return None
    return (coeffs @ T) % q


def smith_dense(R: np.ndarray, k: int, N: int) -> Tuple[List[int], np.ndarray]:
    """Diagonalize a relation matrix over Z/3^N, tracking the basis change.

    Returns (exponents, W) with ``len(exponents) == k`` where the i-th new
    basis vector (row i of W applied to the old basis) has relation
    3^exponents[i]; an exponent of N means no relation beyond the ambient
    modulus.  W is invertible mod 3^N.
    """
    q = 3 ** N
    R = np.asarray(R, dtype=np.int64).copy() % q
    if R.shape[0] == 0:
        return [N] * k, np.eye(k, dtype=np.int64)
    assert R.shape[1] == k
    W = np.eye(k, dtype=np.int64)
    exps = [N] * k
    r, c = R.shape
    top = 0
    while top < min(r, k):
        sub = R[top:, top:]
        if not sub.any():
            break
        vals = np.where(sub % q == 0, N + 1, 0)
        # find entry of minimal 3-adic valuation in the remaining block
        best = None
        for i in range(sub.shape[0]):
            for j in range(sub.shape[1]):
                x = int(sub[i, j]) % q
                if x == 0:
                    continue
                v = _val3(x, N)
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        v, bi, bj = best
        bi += top
        bj += top
        # move pivot to (top, top)
        R[[top, bi]] = R[[bi, top]]
        if bj != top:
            R[:, [top, bj]] = R[:, [bj, top]]
            W[[top, bj]] = W[[bj, top]]  # column op on R mirrors inverse row op on W
        u = int(R[top, top]) // (3 ** v)
        R[top] = (R[top] * _inv_unit(u, q)) % q
        p = 3 ** v
        # clear column below pivot (row ops, untracked)
        for i in range(top + 1, r):
            x = int(R[i, top]) % q
            if x:
                R[i] = (R[i] - (x // p) * R[top]) % q
        # clear row right of pivot (column ops, tracked in W)
        for j in range(top + 1, k):
            x = int(R[top, j]) % q
            if x:
                m = x // p
                R[:, j] = (R[:, j] - m * R[:, top]) % q
                W[top] = (W[top] + m * W[j]) % q
        exps[top] = v
        top += 1
    return exps, W % q


@dataclass
class Subquotient:
    """A subquotient span(cycles)/span(boundaries) of (Z/3^N)^n.

    ``gens[i]`` is an ambient vector of order ``3**exponents[i]`` and the
    classes of the gens form an independent generating set of the quotient.
    """

    ambient_dim: int
    N: int
    gens: np.ndarray
    exponents: List[int]

    @property
    def orders(self) -> List[int]:
        return [3 ** e for e in self.exponents]

    @property
    def total_order(self) -> int:
        return 3 ** sum(self.exponents)


def subquotient_dense(cycles: np.ndarray, boundaries: np.ndarray, N: int) -> Subquotient:
    """Present span(cycles)/span(boundaries) over Z/3^N.

    Raises ValueError if the boundaries do not lie in the span of the cycles.
    """
    q = 3 ** N
    cycles = np.asarray(cycles, dtype=np.int64) % q
    boundaries = np.asarray(boundaries, dtype=np.int64) % q
    n = cycles.shape[1]
    Hc = howell_dense(cycles, N)
    k = Hc.shape[0]
    Hb = howell_dense(boundaries, N) if boundaries.shape[0] else np.zeros((0, n), dtype=np.int64)
    for row in Hb:
        if not in_span(Hc, row, N):
            raise ValueError("boundaries are not contained in the cycle span")
    if k == 0:
        return Subquotient(n, N, np.zeros((0, n), dtype=np.int64), [])
    # relations on the Howell generators: c with c @ Hc in span(boundaries)
    stacked = np.vstack([Hc, Hb]) if Hb.shape[0] else Hc
    K = kernel_dense(stacked, N)
    R = K[:, :k] if K.shape[0] else np.zeros((0, k), dtype=np.int64)
    exps, W = smith_dense(R, k, N)
    gens_full = (W @ Hc) % q
    keep = [i for i, e in enumerate(exps) if e > 0]
    gens = gens_full[keep] if keep else np.zeros((0, n), dtype=np.int64)
    return Subquotient(n, N, gens, [exps[i] for i in keep])


# ---------------------------------------------------------------------------
# public sparse interface


@dataclass
class SparseMatrix:
    """Sparse integer matrix over Z/3^N, entries keyed by (row, col)."""

    rows: int
    cols: int
    N: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def set(self, i: int, j: int, value: int) -> None:
        q = 3 ** self.N
        value = int(value) % q
        if value:
            self.entries[(i, j)] = value
        else:
            self.entries.pop((i, j), None)

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            A[i, j] = v
        return A

    @classmethod
    def from_dense(cls, A: np.ndarray, N: int) -> "SparseMatrix":
        A = np.asarray(A, dtype=np.int64) % (3 ** N)
        m = cls(A.shape[0], A.shape[1], N)
        for i, j in zip(*np.nonzero(A)):
            m.entries[(int(i), int(j))] = int(A[i, j])
        return m

    def dump(self) -> str:
        """MatrixMarket-style textual dump for debugging."""
        lines = [f"%%modl N={self.N}", f"{self.rows} {self.cols} {len(self.entries)}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"{i} {j} {self.entries[(i, j)]}")
        return "\n".join(lines) + "\n"


def howell_form(m: SparseMatrix) -> SparseMatrix:
    H = howell_dense(m.to_dense(), m.N)
    return SparseMatrix.from_dense(H, m.N)


def kernel(m: SparseMatrix) -> SparseMatrix:
    K = kernel_dense(m.to_dense(), m.N)
    return SparseMatrix.from_dense(K, m.N)


def subquotient(cycles: SparseMatrix, boundaries: SparseMatrix) -> Subquotient:
    if cycles.N != boundaries.N or cycles.cols != boundaries.cols:
        raise ValueError("cycle and boundary matrices must share shape modulus and width")
    return subquotient_dense(cycles.to_dense(), boundaries.to_dense(), cycles.N)
