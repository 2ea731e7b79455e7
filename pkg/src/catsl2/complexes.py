"""Chain complexes of bimodules and their homology with induced actions."""

from __future__ import annotations

import numpy as np

from .algebra import _quotient_maps
from .bimodule import Bimodule, sub_bimodule, zero_bimodule
from .linalg import ColumnSolver, eye, image_pivots, kernel, matmul, mats_equal, rank, zeros


class NotAComplex(Exception):
    pass


class ChainComplex:
    """Bounded complex ... -> C^{d} -> C^{d+1} -> ...

    terms: dict degree -> Bimodule; diffs: dict degree -> matrix of the map
    C^{d} -> C^{d+1}.  All differentials must be bimodule maps and compose
    to zero; `check` certifies both.
    """

    def __init__(self, terms: dict[int, Bimodule], diffs: dict[int, np.ndarray]):
        self.terms = dict(terms)
        self.diffs = dict(diffs)
        degs = sorted(terms)
        self.min_deg = degs[0] if degs else 0
        self.max_deg = degs[-1] if degs else 0

    def term(self, d: int) -> Bimodule | None:
        return self.terms.get(d)

    def diff(self, d: int) -> np.ndarray | None:
        return self.diffs.get(d)

    def check(self) -> dict:
        f = None
        for d, M in self.terms.items():
            f = M.field
            break
        for d, D in self.diffs.items():
            src = self.terms.get(d)
            dst = self.terms.get(d + 1)
            sdim = src.dim if src else 0
            tdim = dst.dim if dst else 0
            if D.shape != (tdim, sdim):
                return {"status": "fail", "reason": f"differential shape at degree {d}"}
            if src and dst:
                for g in src.left_alg.gens_with_unit():
                    if not mats_equal(f, matmul(f, D, src.left(g)),
                                      matmul(f, dst.left(g), D)):
                        return {"status": "fail",
                                "reason": f"d^{d} not left-equivariant"}
                for g in src.right_alg.gens_with_unit():
                    if not mats_equal(f, matmul(f, D, src.right(g)),
                                      matmul(f, dst.right(g), D)):
                        return {"status": "fail",
                                "reason": f"d^{d} not right-equivariant"}
            D2 = self.diffs.get(d + 1)
            if D2 is not None and src and self.terms.get(d + 2):
                prod = matmul(f, D2, D)
                if not all(f.is_zero(x) for x in prod.flat):
                    return {"status": "fail", "reason": f"d.d != 0 at degree {d}"}
        return {"status": "pass"}

    def homology_dims(self) -> dict[int, int]:
        out = {}
        for d, M in self.terms.items():
            f = M.field
            din = self.diffs.get(d - 1)
            dout = self.diffs.get(d)
            r_in = rank(f, din) if din is not None else 0
            r_out = rank(f, dout) if dout is not None else 0
            out[d] = M.dim - r_out - r_in
        return out

    def homology(self, d: int) -> Bimodule:
        """H^d with the induced bimodule actions."""
        M = self.terms.get(d)
        if M is None:
            first = next(iter(self.terms.values()))
            return zero_bimodule(first.left_alg, first.right_alg)
        f = M.field
        dout = self.diffs.get(d)
        Z = kernel(f, dout) if dout is not None else eye(f, M.dim)
        din = self.diffs.get(d - 1)
        if din is None or din.shape[1] == 0:
            Bimg = zeros(f, M.dim, 0)
        else:
            piv = image_pivots(f, din)
            Bimg = din[:, piv]
        if Z.shape[1] == 0:
            return zero_bimodule(M.left_alg, M.right_alg)
        # coordinates of boundaries inside the cycle space, then quotient
        zsolver = ColumnSolver(f, Z)
        Bin = zsolver.coords_mat(Bimg) if Bimg.shape[1] else zeros(f, Z.shape[1], 0)
        if Bin.shape[1] == 0:
            sub, _, _ = sub_bimodule(M, Z, name=f"H^{d}")
            return sub
        q, proj, sect = _quotient_maps(f, Bin)

        def act_left(x):
            return matmul(f, proj, zsolver.coords_mat(matmul(f, M.left(x), matmul(f, Z, sect))))

        def act_right(x):
            return matmul(f, proj, zsolver.coords_mat(matmul(f, M.right(x), matmul(f, Z, sect))))

        return Bimodule(M.left_alg, M.right_alg, q, act_left, act_right, name=f"H^{d}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * M.dim for d, M in self.terms.items())


def homology_all(C: ChainComplex) -> dict[int, Bimodule]:
    return {d: C.homology(d) for d in sorted(C.terms)}
