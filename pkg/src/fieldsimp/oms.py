"""Ideals attached to a generating set and interpolation of the low-degree
coefficients of their specialized reduced Groebner bases.

For generators g_i = p_i/q_i of a subfield of k(x_1..x_n), the specialized
ideal at a point a is

    { p_i(y) q_i(a) - q_i(y) p_i(a) }  +  { t Q(y) - 1 },

with Q the lcm of the q_i and t a fresh variable ordered greatest.  The
reduced GB of this ideal, viewed as a function of a, has coefficients that
are rational functions of a generating the same subfield; each coefficient
is exposed as a blackbox (one traced GB evaluation per point serves all of
them) and interpolated when its degree sum is within the requested cutoff.
"""

from .groebner import TRACE_DIVERGED, gb_apply, gb_learn
from .interp import FAIL, Blackbox, estimate_degrees, interpolate_rational
from .poly import (QQ, DEGREVLEX, MultiPoly, RationalFunction, Ring, lcm_q)

HIGH_DEGREE = "HIGH_DEGREE"


class GeneratorSet:
    """Ambient x-variables plus a list of rational-function generators."""

    def __init__(self, ring, generators):
        if ring.field != QQ:
            raise ValueError("generator sets live over Q")
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, MultiPoly):
                g = RationalFunction(g)
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if not any(g == h for h in gens):
                gens.append(g)
        if not gens:
            raise ValueError("empty generator set")
        self.generators = gens
        q = ring.one()
        for g in gens:
            if not g.den.is_constant():
                q = lcm_q(q, g.den)
        self.common_denominator = q
        self._deriv_cache = {}

    def __len__(self):
        return len(self.generators)

    def derivatives(self):
        """Cached partial derivatives of every generator."""
        if not self._deriv_cache:
            self._deriv_cache["j"] = [
                [g.derivative(i) for i in range(self.ring.arity)]
                for g in self.generators
            ]
        return self._deriv_cache["j"]


def gb_ring(genset, field, order=DEGREVLEX):
    """F_p[t, y_1..y_n] with t greatest."""
    names = ("t_",) + tuple("y_" + v for v in genset.ring.vars)
    return Ring(names, field, order)


def specialize_eoms(genset, point, ring, extra_denominator=None):
    """Generators of the specialized ideal at `point`, or FAIL on a pole.

    The product p_i(y) q_i(a) - q_i(y) p_i(a) is assembled from the sparse
    parts directly (never through the expanded symbolic product).
    """
    field = ring.field

    def lift(poly_mod):
        # embed an x-polynomial (mod p image) into the (t, y) ring
        d = {}
        for m, c in poly_mod.terms:
            d[(0,) + m] = c
        return ring.from_dict(d)

    x_ring = _x_ring(genset, field)
    out = []
    for g in genset.generators:
        num, den = g.modp(x_ring)
        pv = num.evaluate(point)
        qv = den.evaluate(point)
        if qv == 0:
            return FAIL
        h = lift(num).scale(qv) - lift(den).scale(pv)
        if h.is_zero():
            continue
        out.append(h)
    qpoly = genset.common_denominator
    if extra_denominator is not None:
        qpoly = lcm_q(qpoly, extra_denominator)
    qmod = qpoly.map_coefficients(x_ring, field.from_fraction)
    if qmod.evaluate(point) == 0:
        return FAIL
    # sat = t * Q(y) - 1
    sat = ring.from_dict(
        {(m[0] + 1,) + m[1:]: c for m, c in lift(qmod).terms})
    sat = sat - ring.one()
    out.append(sat)
    return out


_x_rings = {}


def _x_ring(genset, field):
    key = (genset.ring.vars, field.p, genset.ring.order.kind)
    if key not in _x_rings:
        _x_rings[key] = Ring(genset.ring.vars, field, genset.ring.order)
    return _x_rings[key]


class EomsEvaluator:
    """Shared traced-GB evaluation of the specialized ideal.

    eval(a) returns {(element index, monomial): coefficient} for the
    non-leading support of the reduced GB, or FAIL; the support discovered
    at the learn point is enforced at every later point.
    """

    def __init__(self, genset, ring, rng, relearn_after=3):
        self.genset = genset
        self.ring = ring
        self.rng = rng
        self.relearn_after = relearn_after
        self.n_evals = 0
        self.cache = {}
        self._consecutive_divergences = 0
        self.trace = None
        self.support = None
        self._learn()

    def _random_point(self):
        p = self.ring.field.p
        return tuple(self.rng.randrange(1, p)
                     for _ in range(self.genset.ring.arity))

    def _learn(self):
        for _ in range(32):
            point = self._random_point()
            gens = specialize_eoms(self.genset, point, self.ring)
            if gens is FAIL:
                continue
            gb, trace = gb_learn(self.ring, gens)
            self.trace = trace
            self.support = tuple(g.support() for g in gb)
            self.learn_point = point
            self.cache.clear()
            self.cache[point] = self._coeff_dict(gb)
            self.n_evals += 1
            return
        raise RuntimeError("could not find a regular specialization point")

    def _coeff_dict(self, gb):
        d = {}
        for i, g in enumerate(gb):
            for m, c in g.terms[1:]:
                d[(i, m)] = c
        return d

    def eval(self, point):
        if point in self.cache:
            return self.cache[point]
        self.n_evals += 1
        gens = specialize_eoms(self.genset, point, self.ring)
        result = FAIL
        if gens is not FAIL:
            gb = gb_apply(self.ring, gens, self.trace)
            if gb is TRACE_DIVERGED:
                self._consecutive_divergences += 1
                if self._consecutive_divergences >= self.relearn_after:
                    self._learn()
                    self._consecutive_divergences = 0
            elif tuple(g.support() for g in gb) == self.support:
                self._consecutive_divergences = 0
                result = self._coeff_dict(gb)
        self.cache[point] = result
        return result

    def coefficient_keys(self):
        keys = []
        for i, supp in enumerate(self.support):
            for m in supp[1:]:
                keys.append((i, m))
        return keys

    def coefficient_blackbox(self, key):
        def fn(point):
            d = self.eval(point)
            if d is FAIL:
                return FAIL
            return d.get(key, 0)
        return Blackbox(self.genset.ring.arity, fn)


class CoefficientReport:
    """Interpolated low-degree GB coefficients plus HIGH_DEGREE markers."""

    __slots__ = ("entries", "support", "n_evals", "degree_cutoff")

    def __init__(self, entries, support, n_evals, degree_cutoff):
        self.entries = entries      # {(i, mon): ("ok", (num, den), degs)
                                    #          or ("high_degree", degs)}
        self.support = support
        self.n_evals = n_evals
        self.degree_cutoff = degree_cutoff

    def interpolated(self):
        return [val[1] for val in self.entries.values() if val[0] == "ok"]

    def has_high_degree(self):
        return any(val[0] == "high_degree" for val in self.entries.values())


def gb_coefficients(genset, degree_cutoff, ring, rng,
                    eval_cap=10 ** 6, evaluator=None):
    """Interpolate every reduced-GB coefficient with degree sum <= cutoff.

    Returns a CoefficientReport, or FAIL when interpolation keeps failing.
    Coefficients are returned mod p (reconstruction to Q is the caller's
    job).  A shared evaluator may be passed in to reuse GB evaluations
    across cutoffs.
    """
    if evaluator is None:
        evaluator = EomsEvaluator(genset, ring, rng)
    x_ring = _x_ring(genset, ring.field)
    entries = {}
    start_evals = evaluator.n_evals
    for key in evaluator.coefficient_keys():
        bb = evaluator.coefficient_blackbox(key)
        est = estimate_degrees(bb, degree_cutoff, ring.field, rng)
        if est is FAIL:
            return FAIL
        if est == "STOPPED":
            entries[key] = ("high_degree", None)
            continue
        dn, dd = est
        got = interpolate_rational(bb, dn, dd, x_ring, rng, eval_cap=eval_cap)
        if got is FAIL:
            return FAIL
        entries[key] = ("ok", got, (dn, dd))
    return CoefficientReport(entries, evaluator.support,
                             evaluator.n_evals - start_evals, degree_cutoff)
