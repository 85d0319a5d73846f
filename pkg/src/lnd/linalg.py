"""Exact span membership for sparse vectors (polynomials seen as coefficient vectors).

Rows are kept in echelon form keyed by their largest coordinate.  Each row
remembers which input vectors it is made of, so a successful membership test
also returns the linear combination.
"""

from __future__ import annotations

import heapq


class SpanSolver:
    def __init__(self, order=None):
        # order maps a coordinate key to a sortable rank; identity by default
        self.order = order or (lambda k: k)
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vec):
        vec = dict(vec)
        used = {}
        order = self.order
        heap = [(-order(k), k) for k in vec if k in self.rows]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            a = vec.get(k)
            if a is None:
                continue
            row, combo = self.rows[k]
            for rk, rc in row.items():
                s = vec.get(rk)
                if s is None:
                    vec[rk] = -a * rc
                    if rk in self.rows:
                        heapq.heappush(heap, (-order(rk), rk))
                else:
                    s = s - a * rc
                    if s:
                        vec[rk] = s
                    else:
                        del vec[rk]
            for lab, c in combo.items():
                s = used.get(lab)
                used[lab] = a * c if s is None else s + a * c
        return vec, used

    def add(self, vec, label) -> bool:
        """Insert a vector; False when it was already in the span."""
        res, used = self._reduce(vec)
        if not res:
            return False
        pivot = max(res, key=self.order)
        inv = 1 / res[pivot]
        combo = {lab: -c * inv for lab, c in used.items() if c}
        combo[label] = combo.get(label, 0) + inv
        self.rows[pivot] = ({k: c * inv for k, c in res.items()}, combo)
        return True

    def solve(self, target):
        """Coefficients ``{label: c}`` with target = sum c*vec, or None."""
        res, used = self._reduce(target)
        if res:
            return None
        return {lab: c for lab, c in used.items() if c}

    def residual(self, target):
        return self._reduce(target)[0]


def poly_span_solver(ring) -> SpanSolver:
    return SpanSolver(ring.ordkey)


def solve_in_span(target, vectors: dict, ring):
    """Express a polynomial as a combination of labelled polynomials, or None."""
    s = poly_span_solver(ring)
    for lab, v in vectors.items():
        s.add(v._t, lab)
    return s.solve(target._t)
