"""Finite-dimensional associative algebras with exact structure constants.

An `FDAlgebra` is a based algebra: a free module with a distinguished basis
and a multiplication rule giving the product of two basis elements as a
vector.  Group algebras use a monomial fast path (the product of two basis
elements is a basis element).  Radicals are computed by the trace form in
characteristic zero and by chopping the regular module into simples and
intersecting annihilators in characteristic p; both outputs are certified
(nilpotency of the ideal plus a dimension count on the semisimple quotient).
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import linalg
from .field import Field
from .linalg import (
    ColumnSolver,
    eye,
    is_zero_matrix,
    kernel,
    mat_vec,
    matmul,
    rank,
    rref,
    solve_right,
    zeros,
    zeros_vec,
)


class AlgebraError(Exception):
    pass


class FDAlgebra:
    def __init__(self, field: Field, dim: int, mult_basis, unit_vec, labels=None,
                 gens=None, perm_table=None, name=""):
        """mult_basis(i, j) -> vector of e_i * e_j.

        gens: list of element vectors generating the algebra (with the unit);
        perm_table: optional dim x dim int array with e_i e_j = e_{table[i,j]}
        (monomial case), enabling fast regular representation.
        """
        self.field = field
        self.dim = dim
        self._mult_basis = mult_basis
        self.unit = np.array(unit_vec)
        self.labels = labels if labels is not None else [f"e{i}" for i in range(dim)]
        self.perm_table = perm_table
        self.name = name
        self._gens = gens
        self._cache: dict[tuple[int, int], np.ndarray] = {}
        self._lmat_basis: dict[int, np.ndarray] = {}
        self._rmat_basis: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"FDAlgebra({self.name or 'dim=%d' % self.dim})"

    # -- multiplication ----------------------------------------------------

    def mul_basis(self, i: int, j: int) -> np.ndarray:
        if self.perm_table is not None:
            v = zeros_vec(self.field, self.dim)
            v[self.perm_table[i, j]] = self.field.one
            return v
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            out = np.array(self._mult_basis(i, j))
            self._cache[key] = out
        return out

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        f = self.field
        out = zeros_vec(f, self.dim)
        if self.perm_table is not None:
            support = np.nonzero(x)[0] if f.p else [i for i in range(self.dim) if x[i] != 0]
            for i in support:
                targets = self.perm_table[i]
                if f.p:
                    np.add.at(out, targets, int(x[i]) * y)
                else:
                    for j in range(self.dim):
                        if y[j] != 0:
                            out[targets[j]] += x[i] * y[j]
            if f.p:
                out %= f.p
            return out
        xi = [i for i in range(self.dim) if not f.is_zero(x[i])]
        yj = [j for j in range(self.dim) if not f.is_zero(y[j])]
        for i in xi:
            for j in yj:
                if f.p:
                    out += (int(x[i]) * int(y[j])) * self.mul_basis(i, j)
                else:
                    out = out + (x[i] * y[j]) * self.mul_basis(i, j)
        if f.p:
            out %= f.p
        return out

    def lmat_basis(self, i: int) -> np.ndarray:
        """Matrix of left multiplication by e_i."""
        M = self._lmat_basis.get(i)
        if M is None:
            M = zeros(self.field, self.dim, self.dim)
            if self.perm_table is not None:
                for j in range(self.dim):
                    M[self.perm_table[i, j], j] = self.field.one
            else:
                for j in range(self.dim):
                    M[:, j] = self.mul_basis(i, j)
            self._lmat_basis[i] = M
        return M

    def rmat_basis(self, j: int) -> np.ndarray:
        M = self._rmat_basis.get(j)
        if M is None:
            M = zeros(self.field, self.dim, self.dim)
            if self.perm_table is not None:
                for i in range(self.dim):
                    M[self.perm_table[i, j], i] = self.field.one
            else:
                for i in range(self.dim):
                    M[:, i] = self.mul_basis(i, j)
            self._rmat_basis[j] = M
        return M

    def lmat(self, x: np.ndarray) -> np.ndarray:
        f = self.field
        M = zeros(f, self.dim, self.dim)
        for i in range(self.dim):
            if not f.is_zero(x[i]):
                M = M + x[i] * self.lmat_basis(i) if not f.p else M + int(x[i]) * self.lmat_basis(i)
        return M % f.p if f.p else M

    def rmat(self, x: np.ndarray) -> np.ndarray:
        f = self.field
        M = zeros(f, self.dim, self.dim)
        for j in range(self.dim):
            if not f.is_zero(x[j]):
                M = M + x[j] * self.rmat_basis(j) if not f.p else M + int(x[j]) * self.rmat_basis(j)
        return M % f.p if f.p else M

    def basis_vec(self, i: int) -> np.ndarray:
        v = zeros_vec(self.field, self.dim)
        v[i] = self.field.one
        return v

    @property
    def gens(self) -> list[np.ndarray]:
        """Generating elements; defaults to the whole basis."""
        if self._gens is None:
            self._gens = [self.basis_vec(i) for i in range(self.dim)]
        return self._gens

    def gens_with_unit(self) -> list[np.ndarray]:
        return [self.unit] + list(self.gens)

    def power(self, x: np.ndarray, k: int) -> np.ndarray:
        out = self.unit
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def element_from(self, coeffs: dict[int, object]) -> np.ndarray:
        v = zeros_vec(self.field, self.dim)
        for i, c in coeffs.items():
            v[i] = self.field.of(c)
        return v


def algebra_from_table(field, table, unit_index=0, labels=None, gens=None, name="") -> FDAlgebra:
    """Build an FDAlgebra from a dim x dim table of product vectors."""
    dim = len(table)
    arr = [[np.array([field.of(c) for c in table[i][j]]) if not isinstance(table[i][j], np.ndarray)
            else table[i][j] for j in range(dim)] for i in range(dim)]
    unit = zeros_vec(field, dim)
    unit[unit_index] = field.one
    return FDAlgebra(field, dim, lambda i, j: arr[i][j], unit, labels=labels, gens=gens, name=name)


# -- structural checks -----------------------------------------------------

def check_algebra(A: FDAlgebra, rng: random.Random | None = None,
                  full_limit: int = 64, samples: int = 2000) -> dict:
    """Certify unit laws and associativity.

    Unit laws are checked on the whole basis.  Associativity is checked on
    all basis triples when dim <= full_limit (or when a permutation table
    makes products monomial), otherwise on `samples` seeded random triples.
    """
    f = A.field
    for i in range(A.dim):
        e = A.basis_vec(i)
        if not _vec_eq(f, A.mul(A.unit, e), e) or not _vec_eq(f, A.mul(e, A.unit), e):
            return {"status": "fail", "reason": f"unit law fails at basis {i}"}
    mode = "full"
    if A.perm_table is not None:
        t = A.perm_table
        # associativity of a monomial table: t[t[i,j],k] == t[i,t[j,k]]
        ok = np.array_equal(t[t, :][np.arange(A.dim)[:, None, None], np.arange(A.dim)[None, :, None],
                                    np.arange(A.dim)[None, None, :]] if False else t[t][:, :, :],
                            t[:, t]) if False else _monomial_assoc(t)
        if not ok:
            return {"status": "fail", "reason": "monomial table not associative"}
    elif A.dim <= full_limit:
        for i in range(A.dim):
            for j in range(A.dim):
                ij = A.mul_basis(i, j)
                for k in range(A.dim):
                    lhs = A.mul(ij, A.basis_vec(k))
                    rhs = A.mul(A.basis_vec(i), A.mul_basis(j, k))
                    if not _vec_eq(f, lhs, rhs):
                        return {"status": "fail",
                                "reason": f"associativity fails at ({i},{j},{k})"}
    else:
        mode = f"sampled:{samples}"
        rng = rng or random.Random(0)
        for _ in range(samples):
            i = rng.randrange(A.dim)
            j = rng.randrange(A.dim)
            k = rng.randrange(A.dim)
            lhs = A.mul(A.mul_basis(i, j), A.basis_vec(k))
            rhs = A.mul(A.basis_vec(i), A.mul_basis(j, k))
            if not _vec_eq(f, lhs, rhs):
                return {"status": "fail", "reason": f"associativity fails at ({i},{j},{k})"}
    return {"status": "pass", "associativity": mode, "dim": A.dim}


def _monomial_assoc(t: np.ndarray) -> bool:
    n = t.shape[0]
    for i in range(n):
        if not np.array_equal(t[t[i], :], t[i][t]):
            return False
    return True


def _vec_eq(f, a, b) -> bool:
    if f.p:
        return not np.any((a - b) % f.p)
    return all(x == y for x, y in zip(a, b))


def span_closure_is_all(A: FDAlgebra) -> bool:
    """Certify that unit + gens generate A as an algebra."""
    f = A.field
    span = linalg.SpanReducer(f, A.dim)
    frontier = [A.unit] + list(A.gens)
    for v in frontier:
        span.add({i: v[i] for i in range(A.dim) if not f.is_zero(v[i])})
    changed = True
    vecs = list(frontier)
    while changed and span.rank < A.dim:
        changed = False
        new_vecs = []
        for v in vecs:
            for g in A.gens:
                w = A.mul(v, g)
                if span.add({i: w[i] for i in range(A.dim) if not f.is_zero(w[i])}):
                    new_vecs.append(w)
                    changed = True
        vecs = new_vecs
    return span.rank == A.dim


# -- trace form and radical -------------------------------------------------

def trace_vector(A: FDAlgebra) -> np.ndarray:
    """t_a = trace of left multiplication by e_a."""
    f = A.field
    t = zeros_vec(f, A.dim)
    if A.perm_table is not None:
        for a in range(A.dim):
            t[a] = f.of(int(np.sum(A.perm_table[a] == np.arange(A.dim))))
        return t
    for a in range(A.dim):
        s = f.zero
        for c in range(A.dim):
            s = f.add(s, A.mul_basis(a, c)[c])
        t[a] = s
    return t


def gram_matrix(A: FDAlgebra) -> np.ndarray:
    """G[i,j] = tr(L_{e_i e_j}) (uses L_x L_y = L_{xy})."""
    f = A.field
    t = trace_vector(A)
    G = zeros(f, A.dim, A.dim)
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.mul_basis(i, j)
            s = f.zero
            for a in range(A.dim):
                if not f.is_zero(prod[a]):
                    s = f.add(s, f.mul(prod[a], t[a]))
            G[i, j] = s
    return G


def radical(A: FDAlgebra, rng: random.Random | None = None) -> np.ndarray:
    """Basis of the Jacobson radical, columns = basis vectors.

    Characteristic 0: kernel of the trace form (Dickson).  Characteristic p:
    intersection of the annihilators of the simple modules found by chopping
    the regular representation.  In both cases the result is certified: the
    ideal is nilpotent and the quotient dimension matches sum dim(S)^2 /
    dim End(S) over the simples (char p) or the quotient has zero trace
    radical (char 0).
    """
    f = A.field
    if f.p == 0:
        G = gram_matrix(A)
        R = kernel(f, G)
        _certify_nilpotent_ideal(A, R)
        return R
    simples = simple_modules(A, rng=rng)
    # x in radical iff sum_j x_j rho(e_j) = 0 for every simple rho;
    # rows of the condition matrix are indexed by (simple, matrix entry)
    rows = []
    for mats, incl, proj in simples:
        reps = [matmul(f, proj, matmul(f, A.lmat_basis(j), incl)) for j in range(A.dim)]
        d = reps[0].shape[0]
        for r in range(d):
            for c in range(d):
                rows.append([reps[j][r, c] for j in range(A.dim)])
    Cm = linalg.as_matrix(f, rows) if rows else zeros(f, 0, A.dim)
    R = kernel(f, Cm)
    _certify_nilpotent_ideal(A, R)
    # dimension certificate: dim A/R == sum dim(S)^2 / dim End(S)
    total = 0
    for mats, incl, proj in simples:
        d = incl.shape[1]
        e = intertwiner_space(f, mats, mats)
        total += d * d // e.shape[1]
    if A.dim - R.shape[1] != total:
        raise AlgebraError("radical certification failed: quotient dimension mismatch")
    return R


def _certify_nilpotent_ideal(A: FDAlgebra, R: np.ndarray, max_pow: int = 64):
    f = A.field
    cur = R
    for _ in range(max_pow):
        if cur.shape[1] == 0:
            return
        nxt = linalg.SpanReducer(f, A.dim)
        vecs = []
        for a in range(cur.shape[1]):
            for b in range(R.shape[1]):
                v = A.mul(cur[:, a], R[:, b])
                if nxt.add({i: v[i] for i in range(A.dim) if not f.is_zero(v[i])}):
                    vecs.append(v)
        if not vecs:
            return
        cur = np.stack(vecs, axis=1)
    raise AlgebraError("radical certification failed: ideal not nilpotent")


def radical_series_dims(A: FDAlgebra, rng=None) -> list[int]:
    """Dimensions of rad^k(A), k = 1, 2, ... until zero."""
    f = A.field
    R = radical(A, rng=rng)
    dims = []
    cur = R
    while cur.shape[1]:
        dims.append(cur.shape[1])
        span = linalg.SpanReducer(f, A.dim)
        vecs = []
        for a in range(cur.shape[1]):
            for b in range(R.shape[1]):
                v = A.mul(cur[:, a], R[:, b])
                if span.add({i: v[i] for i in range(A.dim) if not f.is_zero(v[i])}):
                    vecs.append(v)
        cur = np.stack(vecs, axis=1) if vecs else zeros(f, A.dim, 0)
    return dims


# -- MeatAxe-style module chopping ------------------------------------------

def spin(field, gen_mats, vectors) -> np.ndarray:
    """Smallest subspace containing `vectors` stable under the matrices."""
    dim = gen_mats[0].shape[0] if gen_mats else len(vectors[0])
    red = linalg.SpanReducer(field, dim)
    basis = []
    frontier = []
    for v in vectors:
        if red.add({i: v[i] for i in range(dim) if not field.is_zero(v[i])}):
            basis.append(v)
            frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            for M in gen_mats:
                w = mat_vec(field, M, v)
                if red.add({i: w[i] for i in range(dim) if not field.is_zero(w[i])}):
                    basis.append(w)
                    nxt.append(w)
        frontier = nxt
    return np.stack(basis, axis=1) if basis else zeros(field, dim, 0)


def _min_poly(field, M: np.ndarray, rng: random.Random) -> list:
    """Minimal polynomial coefficients (low degree first, monic)."""
    import sympy

    n = M.shape[0]
    x = sympy.Symbol("x")
    mp = sympy.Integer(1)
    dom = sympy.GF(field.p) if field.p else sympy.QQ
    trials = 0
    poly = sympy.Poly(1, x, domain=dom)
    seen_degree = 0
    for _ in range(6):
        v = _random_vec(field, n, rng)
        vecs = [v]
        cur = v
        while True:
            Vm = np.stack(vecs, axis=1)
            sol = solve_right(field, Vm, mat_vec(field, M, cur))
            if sol is not None:
                coeffs = [field.neg(c) for c in sol] + [field.one]
                p_v = sympy.Poly([_to_sym(field, c) for c in reversed(coeffs)], x, domain=dom)
                poly = sympy.lcm(poly, p_v)
                break
            cur = mat_vec(field, M, cur)
            vecs.append(cur)
        if poly.degree() == n:
            break
        if poly.degree() == seen_degree:
            trials += 1
            if trials >= 2:
                break
        seen_degree = poly.degree()
    # verify annihilation; if not, fall back to full Krylov on all basis vectors
    if not _poly_annihilates(field, M, poly):
        poly = sympy.Poly(1, x, domain=dom)
        for i in range(n):
            v = zeros_vec(field, n)
            v[i] = field.one
            vecs = [v]
            cur = v
            while True:
                Vm = np.stack(vecs, axis=1)
                sol = solve_right(field, Vm, mat_vec(field, M, cur))
                if sol is not None:
                    coeffs = [field.neg(c) for c in sol] + [field.one]
                    poly = sympy.lcm(poly, sympy.Poly(
                        [_to_sym(field, c) for c in reversed(coeffs)], x, domain=dom))
                    break
                cur = mat_vec(field, M, cur)
                vecs.append(cur)
        assert _poly_annihilates(field, M, poly)
    return poly


def _to_sym(field, c):
    import sympy

    if field.p:
        return int(c)
    return sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Rational(c)


def _from_sym(field, c):
    if field.p:
        return field.of(int(c) % field.p)
    return field.of(Fraction(int(c.p), int(c.q)) if hasattr(c, "p") else Fraction(str(c)))


def _poly_eval_mat(field, M: np.ndarray, coeffs_low_first) -> np.ndarray:
    n = M.shape[0]
    out = zeros(field, n, n)
    power = eye(field, n)
    for c in coeffs_low_first:
        if not field.is_zero(c):
            out = out + (int(c) * power if field.p else c * power)
        power = matmul(field, power, M)
    return out % field.p if field.p else out


def _poly_annihilates(field, M, poly) -> bool:
    coeffs = [_from_sym(field, c) for c in reversed(poly.all_coeffs())]
    return is_zero_matrix(field, _poly_eval_mat(field, M, coeffs))


def _random_vec(field, n, rng: random.Random):
    v = zeros_vec(field, n)
    for i in range(n):
        v[i] = field.of(rng.randrange(field.p)) if field.p else field.of(rng.randrange(-3, 4))
    if all(field.is_zero(x) for x in v):
        v[rng.randrange(n)] = field.one
    return v


def _random_alg_element(field, gen_mats, rng, width=3) -> np.ndarray:
    n = gen_mats[0].shape[0]
    out = zeros(field, n, n)
    for _ in range(width):
        M = gen_mats[rng.randrange(len(gen_mats))]
        N = gen_mats[rng.randrange(len(gen_mats))]
        c = rng.randrange(1, field.p) if field.p else rng.randrange(1, 4)
        out = out + c * matmul(field, M, N)
    out = out + rng.randrange(field.p if field.p else 3) * eye(field, n)
    return out % field.p if field.p else out


def find_proper_submodule(field, gen_mats, rng: random.Random | None = None,
                          tries: int = 12) -> np.ndarray | None:
    """A proper nonzero invariant subspace, or None if irreducible.

    Norton's criterion: for z singular in the enveloping algebra, if every
    nullspace basis vector of z spins to the whole module and one nullspace
    vector of z^T spins (under transposed action) to the whole dual, the
    module is irreducible.
    """
    import sympy

    n = gen_mats[0].shape[0]
    if n == 0:
        raise ValueError("zero module")
    if n == 1:
        return None
    rng = rng or random.Random(1234)
    max_lines = 1000
    # cheap phase: spins of a few random vectors often find submodules
    for _ in range(min(8, 2 + n // 4)):
        v = _random_vec(field, n, rng)
        W = spin(field, gen_mats, [v])
        if 0 < W.shape[1] < n:
            return W
    for trial in range(tries):
        theta = _random_alg_element(field, gen_mats, rng, width=2 + trial % 3)
        mp = _min_poly(field, theta, rng)
        factors = mp.factor_list()[1]
        for fac, _mult in sorted(factors, key=lambda t: t[0].degree()):
            coeffs = [_from_sym(field, c) for c in reversed(fac.all_coeffs())]
            z = _poly_eval_mat(field, theta, coeffs)
            N = kernel(field, z)
            c = N.shape[1]
            if c == 0 or c == n:
                continue
            # Norton: every nonzero nullspace vector must spin to M ...
            if field.p and (field.p**c - 1) // (field.p - 1) > max_lines:
                continue  # nullity too large to enumerate; try another z
            for v in _nullspace_lines(field, N, rng):
                W = spin(field, gen_mats, [v])
                if W.shape[1] < n:
                    return W
            # ... and one nullspace vector of z^T must spin to the dual
            Nt = kernel(field, z.T)
            gen_t = [M.T for M in gen_mats]
            Wt = spin(field, gen_t, [Nt[:, 0]])
            if Wt.shape[1] < n:
                perp = kernel(field, Wt.T)
                assert 0 < perp.shape[1] < n
                return perp
            return None
    raise AlgebraError("meataxe: could not decide irreducibility (increase tries)")


def _nullspace_lines(field, N: np.ndarray, rng):
    """All nonzero vectors of span(N) up to scalar (finite field), or a
    deterministic + random sample over Q (where Norton is used only as a
    splitting heuristic backed by certification downstream)."""
    c = N.shape[1]
    if field.p:
        p = field.p
        out = []
        # vectors with first nonzero coefficient equal to 1
        def rec(prefix, started):
            if len(prefix) == c:
                if started:
                    out.append(prefix)
                return
            if not started:
                rec(prefix + [0], False)
                rec(prefix + [1], True)
            else:
                for a in range(p):
                    rec(prefix + [a], True)
        rec([], False)
        for coeffs in out:
            v = zeros_vec(field, N.shape[0])
            for j, a in enumerate(coeffs):
                if a:
                    v = v + a * N[:, j]
            yield v % p
    else:
        for j in range(c):
            yield N[:, j]
        for _ in range(20):
            v = zeros_vec(field, N.shape[0])
            for j in range(c):
                v = v + field.of(rng.randrange(-2, 3)) * N[:, j]
            if not all(field.is_zero(x) for x in v):
                yield v


def chop(field, gen_mats, rng=None) -> list[tuple[list[np.ndarray], np.ndarray, np.ndarray]]:
    """Composition factors of a module: list of (gen_mats, incl, proj).

    incl : factor -> ambient subquotient chain composed down to the original
    space is not maintained; incl/proj here map between the factor and the
    module they were split from, composed to the original module, so that
    proj . L(g) . incl is the factor action for any algebra element g.
    """
    rng = rng or random.Random(99)
    n = gen_mats[0].shape[0]
    ident = eye(field, n)
    stack = [(gen_mats, ident, ident)]
    out = []
    while stack:
        mats, incl, proj = stack.pop()
        d = mats[0].shape[0]
        if d == 0:
            continue
        W = find_proper_submodule(field, mats, rng=rng)
        if W is None:
            out.append((mats, incl, proj))
            continue
        # submodule
        solver = ColumnSolver(field, W)
        sub_mats = [solver.coords_mat(matmul(field, M, W)) for M in mats]
        sub_incl = matmul(field, incl, W)
        sub_proj = solver.coords_mat(proj) if False else None
        # projection onto submodule coordinates only valid on the subspace;
        # for annihilator purposes we need proj with proj.incl = id:
        sub_proj = matmul(field, _left_inverse(field, W), proj)
        stack.append((sub_mats, sub_incl, sub_proj))
        # quotient
        Q, qproj, qsect = _quotient_maps(field, W)
        quo_mats = [matmul(field, qproj, matmul(field, M, qsect)) for M in mats]
        quo_incl = matmul(field, incl, qsect)
        quo_proj = matmul(field, qproj, proj)
        stack.append((quo_mats, quo_incl, quo_proj))
    return out


def _left_inverse(field, W: np.ndarray) -> np.ndarray:
    solver = ColumnSolver(field, W)
    # rows selected + inverse give a left inverse P with P W = I
    P = zeros(field, W.shape[1], W.shape[0])
    P[:, solver.rows] = solver.Sinv
    return P


def _quotient_maps(field, W: np.ndarray):
    """For a subspace W of k^n: quotient dimension q, proj: k^n -> k^q,
    sect: k^q -> k^n with proj.sect = id and ker(proj) = span(W)."""
    n = W.shape[0]
    R, pivots = rref(field, W.T)
    rk = len(pivots)
    free = [c for c in range(n) if c not in pivots]
    q = len(free)
    sect = zeros(field, n, q)
    for j, c in enumerate(free):
        sect[c, j] = field.one
    # reduce e_i against the reduced rows of R, then read free coordinates
    proj = zeros(field, q, n)
    for j, c in enumerate(free):
        proj[j, c] = field.one
    for i, pc in enumerate(pivots):
        # e_{pc} reduces to -(free part of row i)
        for j, c in enumerate(free):
            proj[j, pc] = field.neg(field.of(R[i, c]))
    if field.p:
        proj %= field.p
    return q, proj, sect


def simple_modules(A: FDAlgebra, rng=None):
    """Pairwise non-isomorphic simple modules as (gen_mats, incl, proj) from
    chopping the regular representation."""
    f = A.field
    gen_mats = [A.lmat(g) for g in A.gens_with_unit()]
    factors = chop(f, gen_mats, rng=rng)
    out = []
    for mats, incl, proj in factors:
        # full action via proj . L . incl, represented on the algebra gens
        rep = [matmul(f, proj, matmul(f, A.lmat(g), incl)) for g in A.gens_with_unit()]
        is_new = True
        for mats2, incl2, proj2 in out:
            if mats2[0].shape[0] != rep[0].shape[0]:
                continue
            rep2 = mats2
            H = intertwiner_space(f, rep, rep2)
            if H.shape[1] > 0:
                is_new = False
                break
        if is_new:
            out.append((rep, incl, proj))
    return out


def intertwiner_space(field, matsA: list[np.ndarray], matsB: list[np.ndarray]) -> np.ndarray:
    """Basis of {F : F A_g = B_g F for all g}; columns are vec'd matrices.

    F has shape (dimB, dimA); vec is row-major flatten.
    """
    dA = matsA[0].shape[0] if matsA else 0
    dB = matsB[0].shape[0] if matsB else 0
    if dA == 0 or dB == 0:
        return zeros(field, dA * dB, 0)
    conds = []
    for Ag, Bg in zip(matsA, matsB):
        # (F Ag - Bg F)[i,j] = sum_k F[i,k] Ag[k,j] - Bg[i,k] F[k,j]
        # unknowns F[i,k] indexed by i*dA + k
        M = zeros(field, dB * dA, dB * dA)
        for i in range(dB):
            for j in range(dA):
                row = i * dA + j
                for k in range(dA):
                    M[row, i * dA + k] = field.add(M[row, i * dA + k], Ag[k, j])
                for k in range(dB):
                    M[row, k * dA + j] = field.sub(M[row, k * dA + j], Bg[i, k])
        conds.append(M)
    big = np.concatenate(conds, axis=0)
    return kernel(field, big)


# -- center and blocks -------------------------------------------------------

def center_basis(A: FDAlgebra) -> np.ndarray:
    """Basis of the center, computed against the generators."""
    f = A.field
    conds = []
    for g in A.gens:
        conds.append(A.lmat(g) - A.rmat(g))
    big = np.concatenate(conds, axis=0)
    if f.p:
        big %= f.p
    return kernel(f, big)


class _Subalgebra:
    """Commutative subalgebra spanned by given vectors, with induced mult."""

    def __init__(self, A: FDAlgebra, basis: np.ndarray):
        self.A = A
        self.field = A.field
        self.basis = basis
        self.dim = basis.shape[1]
        self.solver = ColumnSolver(A.field, basis) if self.dim else None

    def mul(self, x, y):
        v = self.A.mul(self.to_ambient(x), self.to_ambient(y))
        return self.solver.coords(v)

    def to_ambient(self, x):
        return mat_vec(self.field, self.basis, x)

    def mult_matrix(self, x):
        M = zeros(self.field, self.dim, self.dim)
        for j in range(self.dim):
            ej = zeros_vec(self.field, self.dim)
            ej[j] = self.field.one
            M[:, j] = self.mul(x, ej)
        return M


def central_idempotents(A: FDAlgebra, rng=None) -> list[np.ndarray]:
    """Primitive central idempotents (block idempotents), summing to 1."""
    import sympy

    f = A.field
    Z = center_basis(A)
    sub = _Subalgebra(A, Z)
    unit_z = sub.solver.coords(A.unit)
    # radical of the commutative subalgebra
    if f.p:
        k = 1
        while f.p ** k < sub.dim:
            k += 1
        # x -> x^(p^k) is F_p-linear on a commutative algebra
        P = zeros(f, sub.dim, sub.dim)
        for j in range(sub.dim):
            ej = zeros_vec(f, sub.dim)
            ej[j] = f.one
            cur = ej
            for _ in range(k):
                nxt = cur
                acc = cur
                for _i in range(f.p - 1):
                    acc = sub.mul(acc, cur)
                cur = acc
            P[:, j] = cur
        radZ = kernel(f, P)
    else:
        # trace form of the commutative subalgebra
        G = zeros(f, sub.dim, sub.dim)
        tr = zeros_vec(f, sub.dim)
        for a in range(sub.dim):
            ea = zeros_vec(f, sub.dim)
            ea[a] = f.one
            tr[a] = np.trace(sub.mult_matrix(ea)) if f.p == 0 else f.zero
        for i in range(sub.dim):
            ei = zeros_vec(f, sub.dim)
            ei[i] = f.one
            for j in range(sub.dim):
                ej = zeros_vec(f, sub.dim)
                ej[j] = f.one
                prod = sub.mul(ei, ej)
                G[i, j] = sum((prod[a] * tr[a] for a in range(sub.dim)), start=f.zero)
        radZ = kernel(f, G)
    # semisimple commutative quotient
    if radZ.shape[1]:
        q, qproj, qsect = _quotient_maps(f, radZ)
    else:
        q, qproj, qsect = sub.dim, eye(f, sub.dim), eye(f, sub.dim)

    def bar_mul_matrix(xbar):
        return matmul(f, qproj, matmul(f, sub.mult_matrix(mat_vec(f, qsect, xbar)), qsect))

    comps = [eye(f, q)]  # column spans inside the semisimple quotient
    x = sympy.Symbol("x")
    dom = sympy.GF(f.p) if f.p else sympy.QQ
    for bidx in range(q):
        b = zeros_vec(f, q)
        b[bidx] = f.one
        Mb = bar_mul_matrix(b)
        new_comps = []
        for C in comps:
            if C.shape[1] <= 1:
                new_comps.append(C)
                continue
            solver = ColumnSolver(f, C)
            MC = solver.coords_mat(matmul(f, Mb, C))
            mp = _min_poly(f, MC, rng or random.Random(5))
            facs = mp.factor_list()[1]
            if len(facs) == 1 and facs[0][1] == 1:
                new_comps.append(C)
                continue
            for fac, mult in facs:
                coeffs = [_from_sym(f, c) for c in reversed((fac ** mult).all_coeffs())]
                K = kernel(f, _poly_eval_mat(f, MC, coeffs))
                if K.shape[1]:
                    new_comps.append(matmul(f, C, K))
        comps = new_comps
    # unit of each component ideal = primitive idempotent of the quotient
    idems_bar = []
    for C in comps:
        # solve e in C with e * c_j = c_j for all columns c_j of C
        cols = C.shape[1]
        conds = []
        rhs = []
        for j in range(cols):
            Mcj = bar_mul_matrix(C[:, j])
            conds.append(matmul(f, Mcj, C))
            rhs.append(C[:, j])
        big = np.concatenate(conds, axis=0)
        target = np.concatenate(rhs, axis=0)
        sol = solve_right(f, big, target)
        assert sol is not None, "component has no unit"
        idems_bar.append(mat_vec(f, C, sol))
    # lift to Z through the nilpotent radical, then map to A
    out = []
    for ebar in idems_bar:
        e = mat_vec(f, qsect, ebar)
        for _ in range(32):
            if _vec_eq(f, sub.mul(e, e), e):
                break
            e = _newton_step(f, sub, e)
        else:
            raise AlgebraError("idempotent lifting did not converge")
        out.append(sub.to_ambient(e))
    # certify: orthogonal, sum to 1, central
    s = zeros_vec(f, A.dim)
    for e in out:
        s = s + e
    if f.p:
        s %= f.p
    assert _vec_eq(f, s, A.unit), "block idempotents do not sum to 1"
    for i in range(len(out)):
        for j in range(len(out)):
            prod = A.mul(out[i], out[j])
            expect = out[i] if i == j else zeros_vec(f, A.dim)
            assert _vec_eq(f, prod, expect), "block idempotents not orthogonal"
    return out


def _newton_step(f, sub, e):
    e2 = sub.mul(e, e)
    e3 = sub.mul(e2, e)
    out = 3 * e2 - 2 * e3
    if f.p:
        out %= f.p
    return out


def direct_sum_algebras(algebras: list[FDAlgebra], name="") -> tuple[FDAlgebra, list[int]]:
    """Direct sum with block-diagonal multiplication; returns (algebra, offsets)."""
    field = algebras[0].field
    offsets = []
    total = 0
    for B in algebras:
        offsets.append(total)
        total += B.dim

    def mult(i, j):
        for idx, B in enumerate(algebras):
            o = offsets[idx]
            if o <= i < o + B.dim:
                if o <= j < o + B.dim:
                    v = zeros_vec(field, total)
                    v[o:o + B.dim] = B.mul_basis(i - o, j - o)
                    return v
                return zeros_vec(field, total)
        raise IndexError

    unit = zeros_vec(field, total)
    labels = []
    gens = []
    for idx, B in enumerate(algebras):
        o = offsets[idx]
        unit[o:o + B.dim] = B.unit
        labels += [f"{idx}:{lab}" for lab in B.labels]
        for g in B.gens_with_unit():
            gv = zeros_vec(field, total)
            gv[o:o + B.dim] = g
            gens.append(gv)
    return FDAlgebra(field, total, mult, unit, labels=labels, gens=gens, name=name), offsets
