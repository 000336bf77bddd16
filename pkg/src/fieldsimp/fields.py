"""Randomized subfield membership and the operations built on it.

Membership of a candidate f in k(g_1..g_m) is decided at a random point b:
a Jacobian row-span pre-test first, then a normal-form test of
p_f(y) q_f(b) - q_f(y) p_f(b) against the specialized ideal of the
generators augmented with y_j - b_j for the non-pivot variables j.  All
computations run over a word-sized prime field, which stands in for the
sampling-range bounds of the underlying analysis (any fixed error budget is
met by a large enough prime).
"""

from .groebner import groebner
from .interp import FAIL
from .oms import GeneratorSet, _x_ring, gb_ring, specialize_eoms
from .poly import (QQ, MultiPoly, RationalFunction, Ring, gcd_q, lcm_q,
                   try_divexact)


class UnluckyPoint(RuntimeError):
    """Surfaced after repeated degenerate random specializations."""


def _rank_and_pivots(matrix, p):
    """Row echelon over F_p: returns (rank, pivot column indices)."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return r, pivots


def _in_rowspan(matrix, vector, p):
    rank, _ = _rank_and_pivots(matrix, p)
    rank2, _ = _rank_and_pivots(matrix + [vector], p)
    return rank2 == rank


class MembershipContext:
    """Cached point, pivot data, and specialized GB for repeated tests."""

    def __init__(self, genset, field, rng, max_attempts=16):
        self.genset = genset
        self.field = field
        self.rng = rng
        self.x_ring = _x_ring(genset, field)
        self.gb_ring = gb_ring(genset, field, genset.ring.order)
        p = field.p
        derivs = genset.derivatives()
        for _ in range(max_attempts):
            b = tuple(rng.randrange(1, p) for _ in range(genset.ring.arity))
            rows = []
            ok = True
            for grads in derivs:
                row = []
                for d in grads:
                    v = d.evaluate_modp(self.x_ring, b)
                    if v is None:
                        ok = False
                        break
                    row.append(v)
                if not ok:
                    break
                rows.append(row)
            if not ok:
                continue
            qv = genset.common_denominator \
                .map_coefficients(self.x_ring, field.from_fraction) \
                .evaluate(b)
            if qv == 0:
                continue
            self.point = b
            self.jacobian = rows
            self.rank, pivots = _rank_and_pivots(rows, p)
            self.pivots = set(pivots)
            self.nonpivots = [j for j in range(genset.ring.arity)
                              if j not in self.pivots]
            self._gb_cache = {}
            return
        raise UnluckyPoint("no regular evaluation point found")

    def _gb(self, extra_denominator=None):
        key = None if extra_denominator is None else extra_denominator.terms
        if key not in self._gb_cache:
            gens = specialize_eoms(self.genset, self.point, self.gb_ring,
                                   extra_denominator=extra_denominator)
            if gens is FAIL:
                raise UnluckyPoint("cached point hit a pole")
            for j in self.nonpivots:
                gens.append(self.gb_ring.variable(1 + j)
                            - self.gb_ring.constant(self.point[j]))
            self._gb_cache[key] = groebner(self.gb_ring, gens)
        return self._gb_cache[key]

    def _gradient(self, cand):
        out = []
        for i in range(self.genset.ring.arity):
            v = cand.derivative(i).evaluate_modp(self.x_ring, self.point)
            if v is None:
                return None
            out.append(v)
        return out

    def contains(self, candidate, eps=0.001):
        """True iff the candidate lies in the generated subfield (with
        probability controlled by the prime size; eps is nominal)."""
        if isinstance(candidate, MultiPoly):
            candidate = RationalFunction(candidate)
        if candidate.ring != self.genset.ring:
            raise ValueError("candidate from a different ring")
        if candidate.is_constant():
            return True
        grad = self._gradient(candidate)
        if grad is None:
            raise UnluckyPoint("candidate pole at the cached point")
        if not _in_rowspan(self.jacobian, grad, self.field.p):
            return False
        num, den, extra = self._over_common_denominator(candidate)
        gb = self._gb(extra_denominator=extra)
        p = self.field.p
        num_p = num.map_coefficients(self.x_ring, self.field.from_fraction)
        den_p = den.map_coefficients(self.x_ring, self.field.from_fraction)
        qb = den_p.evaluate(self.point)
        pb = num_p.evaluate(self.point)
        if qb == 0:
            raise UnluckyPoint("candidate denominator vanished")
        h = _lift_to_y(num_p, self.gb_ring).scale(qb) \
            - _lift_to_y(den_p, self.gb_ring).scale(pb)
        return gb.normal_form(h).is_zero()

    def _over_common_denominator(self, cand):
        """Rewrite cand as num/den where den is a power of the common
        denominator Q, or report the extra factor to fold into Q."""
        q = self.genset.common_denominator
        if cand.den.is_constant():
            return cand.num, cand.den, None
        if q.is_constant():
            return cand.num, cand.den, cand.den
        rest = cand.den
        e = 0
        while not rest.is_constant():
            g = gcd_q(rest, q)
            if g.is_constant():
                return cand.num, cand.den, cand.den
            rest = try_divexact(rest, g)
            e += 1
        qe = q ** e
        cof = try_divexact(qe, cand.den)
        if cof is None:
            return cand.num, cand.den, cand.den
        return cand.num * cof, qe, None

    def transcendence_rank(self):
        return self.rank


def _lift_to_y(poly, ring):
    return ring.from_dict({(0,) + m: c for m, c in poly.terms})


def contains(genset, candidate, field, rng, eps=0.001, retries=3):
    """One-shot membership test with retry on degenerate points."""
    for _ in range(retries):
        try:
            return MembershipContext(genset, field, rng).contains(candidate, eps)
        except UnluckyPoint:
            continue
    raise UnluckyPoint("membership test kept hitting degenerate points")


def fields_equal(gs_a, gs_b, field, rng, eps=0.001):
    """Mutual containment of the two generating sets (budget eps split
    across the individual checks)."""
    if gs_a.ring != gs_b.ring:
        raise ValueError("generator sets from different rings")
    budget = eps / (len(gs_a) + len(gs_b))
    last = None
    for _ in range(3):
        try:
            ctx_b = MembershipContext(gs_b, field, rng)
            if not all(ctx_b.contains(g, budget) for g in gs_a.generators):
                return False
            ctx_a = MembershipContext(gs_a, field, rng)
            return all(ctx_a.contains(g, budget) for g in gs_b.generators)
        except UnluckyPoint as exc:
            last = exc
    raise last


def minimize(generators, ring, field, rng, eps=0.001):
    """Inclusion-minimal sublist generating the same field; per-step budget
    eps/len(generators)."""
    kept = [g if isinstance(g, RationalFunction) else RationalFunction(g)
            for g in generators]
    # drop duplicates first
    out = []
    for g in kept:
        if not any(g == h for h in out):
            out.append(g)
    kept = out
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if not others:
            break
        rest = GeneratorSet(ring, others)
        try:
            member = MembershipContext(rest, field, rng) \
                .contains(kept[i], eps / max(len(kept), 1))
        except UnluckyPoint:
            member = contains(rest, kept[i], field, rng)
        if member:
            kept.pop(i)
        else:
            i += 1
    return kept


def polynomial_generators(genset, delta, field, rng,
                          include_constants=False, max_iterations=None):
    """Basis of { p in F_p[x] : deg p <= delta, p(x) in the subfield }.

    Iterates the kernel of v -> (normal form of v(y) with constant term
    dropped) at fresh random points until the dimension survives one full
    iteration unchanged.
    """
    ringp = gb_ring(genset, field, genset.ring.order)
    x_ring = _x_ring(genset, field)
    n = genset.ring.arity
    p = field.p
    monomials = _monomials_up_to(n, delta)
    key = x_ring.order.key
    monomials.sort(key=key)
    dim = len(monomials)
    if max_iterations is None:
        # the dimension can drop by as little as one per point
        max_iterations = dim + 8
    # basis of the current candidate space V, as vectors over `monomials`
    basis = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    stable = False
    iterations = 0
    while not stable:
        iterations += 1
        if iterations > max_iterations:
            raise UnluckyPoint("kernel iteration did not stabilize")
        point = tuple(rng.randrange(1, p) for _ in range(n))
        gens = specialize_eoms(genset, point, ringp)
        if gens is FAIL:
            continue
        gb = groebner(ringp, gens)
        # normal forms of the candidate monomials, constant term removed
        nf_cols = {}
        images = []
        for mon in monomials:
            nf = gb.nf_plus(ringp.from_dict({(0,) + mon: 1}))
            images.append(dict(nf.terms))
            for mm in nf.support():
                nf_cols.setdefault(mm, len(nf_cols))
        rows = []
        for vec in basis:
            acc = {}
            for c, img in zip(vec, images):
                if not c:
                    continue
                for mm, cc in img.items():
                    acc[mm] = (acc.get(mm, 0) + c * cc) % p
            rows.append([acc.get(mm, 0) for mm in nf_cols])
        if not nf_cols:
            kernel = basis
        else:
            kernel = _kernel_combinations(rows, basis, p)
        if len(kernel) == len(basis):
            stable = True
        basis = kernel
    polys = []
    for vec in basis:
        poly = x_ring.from_dict({m: c for m, c in zip(monomials, vec) if c})
        if poly.is_zero():
            continue
        if poly.is_constant() and not include_constants:
            continue
        polys.append(poly.monic())
    polys.sort(key=lambda q: key(q.leading_monomial()), reverse=True)
    return polys


def _monomials_up_to(n, delta):
    out = [()]
    for _ in range(n):
        out = [m + (e,) for m in out for e in range(delta + 1 - sum(m))]
    return out


def _kernel_combinations(rows, basis, p):
    """Kernel of the map sending basis[i] to rows[i], expressed as
    combinations of the basis vectors (echelonized over F_p)."""
    k = len(rows)
    cols = len(rows[0]) if rows else 0
    aug = [rows[i] + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, k) if aug[i][c] % p), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
        if r == k:
            break
    kernel = []
    dim = len(basis[0]) if basis else 0
    for i in range(r, k):
        combo = aug[i][cols:]
        vec = [0] * dim
        for c, bvec in zip(combo, basis):
            if not c:
                continue
            for j, x in enumerate(bvec):
                vec[j] = (vec[j] + c * x) % p
        kernel.append(vec)
    # echelonize for a deterministic representation
    return _echelon(kernel, p)


def _echelon(vectors, p):
    if not vectors:
        return []
    m = [v[:] for v in vectors]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return m[:r]
