"""Interpolation stack over F_p.

Univariate rational interpolation via the extended Euclidean algorithm,
sparse polynomial interpolation from evaluations at powers of a prime-vector
ratio, blackbox multivariate rational-function recovery (homogenize, shift,
interpolate along lines, then recover each side from its top coefficients),
and blackbox total-degree estimation along a random line.

FAIL is represented by None throughout.
"""

import math

from .arith import PrimeField

FAIL = None


class RootNotSmooth(ArithmeticError):
    """A recovered root does not factor over the ratio primes."""


class EvaluationBudgetExceeded(RuntimeError):
    pass


def first_primes(n):
    out = []
    k = 2
    while len(out) < n:
        if all(k % q for q in out):
            out.append(k)
        k += 1
    return out


def admissible_ratio(n):
    """Evaluation base: the first n primes (exponents recoverable by
    trial division)."""
    return tuple(first_primes(n))


class Blackbox:
    """Evaluation oracle: point in F_p^n -> value or FAIL (None)."""

    __slots__ = ("arity", "fn", "count")

    def __init__(self, arity, fn):
        self.arity = arity
        self.fn = fn
        self.count = 0

    def __call__(self, point):
        self.count += 1
        return self.fn(point)


# ----------------------------------------------------------------------
# dense univariate helpers; polys are lists of coefficients, ascending


def _utrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _udeg(a):
    return len(a) - 1


def _uadd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _utrim(out)


def _uscale(a, c, p):
    return _utrim([x * c % p for x in a])


def _umul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _utrim(out)


def _udivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lb = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lb % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _utrim(a)
    return _utrim(q), a


def _ugcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, r = _udivmod(a, b, p)
        a, b = b, r
    if a:
        a = _uscale(a, pow(a[-1], -1, p), p)
    return a


def _ueval(a, x, p):
    v = 0
    for c in reversed(a):
        v = (v * x + c) % p
    return v


def _lagrange(xs, ys, p):
    """Newton-form interpolation; O(D^2)."""
    n = len(xs)
    coeffs = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = []
    for i in range(n - 1, -1, -1):
        poly = _umul(poly, [-xs[i] % p, 1], p)
        poly = _uadd(poly, [coeffs[i]], p)
    return poly


def cauchy_interpolate(points, values, deg_num, deg_den, field):
    """Rational interpolation with degree bounds via the EEA.

    Returns (num, den) as ascending coefficient lists with den monic, or
    FAIL when no coprime pair within the bounds matches every sample.
    """
    p = field.p
    if len(points) < deg_num + deg_den + 2:
        raise ValueError("need at least deg_num + deg_den + 2 sample points")
    if len(set(points)) != len(points):
        raise ValueError("sample points must be pairwise distinct")
    g = _lagrange(points, values, p)
    m = [1]
    for u in points:
        m = _umul(m, [-u % p, 1], p)
    # EEA rows: r = s*m + t*g; stop at the first remainder within the bound
    r0, t0 = m, []
    r1, t1 = g, [1]
    while r1 and _udeg(r1) > deg_num:
        q, r = _udivmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, _uadd(t0, _uscale(_umul(q, t1, p), p - 1, p), p)
    num, den = r1, t1
    if not den:
        return FAIL
    d = _ugcd(num, den, p) if num else den
    if _udeg(d) > 0:
        num, _ = _udivmod(num, d, p)
        den, _ = _udivmod(den, d, p)
    if _udeg(den) > deg_den or (num and _udeg(num) > deg_num):
        return FAIL
    for u, v in zip(points, values):
        bv = _ueval(den, u, p)
        if bv == 0 or _ueval(num, u, p) != bv * v % p:
            return FAIL
    c = pow(den[-1], -1, p)
    return _uscale(num, c, p), _uscale(den, c, p)


# ----------------------------------------------------------------------
# root finding over F_p (probabilistic equal-degree splitting)


def _uroots(a, p, rng):
    """Distinct roots in F_p of a squarefree-ish univariate polynomial."""
    a = _uscale(a, pow(a[-1], -1, p), p)
    # strip the factor supported on roots only: gcd(a, x^p - x)
    xp = _upowmod([0, 1], p, a, p)
    lin = _ugcd(a, _uadd(xp, [0, p - 1], p), p)
    roots = []
    stack = [lin]
    while stack:
        f = stack.pop()
        if _udeg(f) <= 0:
            continue
        if _udeg(f) == 1:
            roots.append(-f[0] * pow(f[1], -1, p) % p)
            continue
        while True:
            b = rng.randrange(p)
            h = _upowmod([b, 1], (p - 1) // 2, f, p)
            g = _ugcd(f, _uadd(h, [p - 1], p), p)
            if 0 < _udeg(g) < _udeg(f):
                stack.append(g)
                q, _ = _udivmod(f, g, p)
                stack.append(q)
                break
    roots.sort()
    return roots


def _upowmod(base, e, mod, p):
    result = [1]
    base = _udivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _udivmod(_umul(result, base, p), mod, p)[1]
        base = _udivmod(_umul(base, base, p), mod, p)[1]
        e >>= 1
    return result


# ----------------------------------------------------------------------
# sparse interpolation from a geometric evaluation sequence


def _prony(evals, field, rng):
    """Recover {(root, coefficient)} with the sequence e_i = sum c_k root_k^i.

    Returns None when the sequence is not explained by <= len(evals)/2
    distinct nonzero roots (caller enlarges the sequence).
    """
    p = field.p
    two_t = len(evals)
    t_bound = two_t // 2
    if all(v == 0 for v in evals):
        return []
    # Pade approximation of sum e_i z^i mod z^(2T) via the EEA
    r0 = [0] * two_t + [1]                      # z^(2T)
    r1 = _utrim(list(evals))
    t0, t1 = [], [1]
    while r1 and _udeg(r1) >= t_bound:
        q, r = _udivmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, _uadd(t0, _uscale(_umul(q, t1, p), p - 1, p), p)
    lam = t1                                    # Lambda~(z) = prod(1 - root*z)
    if not lam or lam[0] == 0:
        return None
    lam = _uscale(lam, pow(lam[0], -1, p), p)
    t = _udeg(lam)
    if t > t_bound:
        return None
    if t == 0:
        return None
    mono = list(reversed(lam))                  # prod(z - root), monic
    roots = _uroots(mono, p, rng)
    if len(roots) != t or 0 in roots:
        return None
    # transposed Vandermonde solve, O(t^2): c_k = (sum_i L_k[i] e_i) / L_k(m_k)
    out = []
    for m in roots:
        lk, rem = _udivmod(mono, [-m % p, 1], p)
        assert not rem
        s = 0
        for i, c in enumerate(lk):
            s = (s + c * evals[i]) % p
        denom = _ueval(lk, m, p)
        if denom == 0:
            return None
        out.append((m, s * pow(denom, -1, p) % p))
    return out


def _exponent_from_root(root, ratio, degree_bound):
    """Factor an integer root over the ratio primes by trial division."""
    e = []
    r = root
    for q in ratio:
        k = 0
        while r % q == 0 and k < degree_bound + 1:
            r //= q
            k += 1
        if k > degree_bound:
            raise RootNotSmooth("exponent above degree bound")
        e.append(k)
    if r != 1:
        raise RootNotSmooth("root %d not a product of ratio primes" % root)
    return tuple(e)


def ben_or_tiwari(evals, ratio, degree_bound, ring, rng):
    """Sparse interpolation from f(ratio^0), ..., f(ratio^(2T-1)).

    Exact when T is at least the number of terms of f; with smaller T the
    result is wrong and the caller must verify.  Raises RootNotSmooth when
    a recovered root does not factor over the ratio primes.
    """
    field = ring.field
    sol = _prony(list(evals), field, rng)
    if sol is None:
        raise RootNotSmooth("sequence has no sparse explanation at this T")
    d = {}
    for root, coeff in sol:
        d[_exponent_from_root(root, ratio, degree_bound)] = coeff
    return ring.from_dict(d)


# ----------------------------------------------------------------------
# degree estimation (restriction to a random line)


def estimate_degrees(bb, cutoff, field, rng, max_attempts=8):
    """Total degrees (deg num, deg den) of the blackbox function.

    Returns (d_num, d_den), or "STOPPED" when their sum exceeds the cutoff,
    or FAIL on persistently unlucky evaluations.
    """
    p = field.p
    for _ in range(max_attempts):
        base = [rng.randrange(p) for _ in range(bb.arity)]
        direction = [rng.randrange(1, p) for _ in range(bb.arity)]

        def line(u):
            return tuple((a + u * b) % p for a, b in zip(base, direction))

        u0 = rng.randrange(p)
        v0 = bb(line(u0))
        if v0 is FAIL:
            continue
        cache = {}

        def sample(u):
            if u not in cache:
                cache[u] = bb(line(u))
            return cache[u]

        failed = False
        for t in range(cutoff + 1):
            points, values = [], []
            u = 1
            while len(points) < 2 * t + 2:
                if u != u0:
                    v = sample(u)
                    if v is FAIL:
                        failed = True
                        break
                    points.append(u)
                    values.append(v)
                u += 1
            if failed:
                break
            got = cauchy_interpolate(points, values, t, t, field)
            if got is FAIL:
                continue
            num, den = got
            if _ueval(den, u0, p) == 0:
                continue
            if _ueval(num, u0, p) != _ueval(den, u0, p) * v0 % p:
                continue
            dn = _udeg(num) if num else 0
            dd = _udeg(den)
            if dn + dd > cutoff:
                return "STOPPED"
            return (dn, dd)
        if not failed:
            return "STOPPED"
    return FAIL


# ----------------------------------------------------------------------
# multivariate rational interpolation (homogenize + shift + lines)


def interpolate_rational(bb, deg_num, deg_den, ring, rng,
                         eval_cap=10 ** 6, max_attempts=4):
    """Recover (num, den) in `ring` from a blackbox with known total degrees.

    Homogenizes with an extra coordinate, shifts by a random vector, runs
    univariate rational interpolation along lines u -> gamma*omega^i*u + sigma,
    and recovers each side's (homogeneous) form from the top u-coefficients
    via sparse interpolation with a doubling term-count guess.  Accepts only
    after a fresh-point consistency check; returns FAIL otherwise.
    """
    field = ring.field
    p = field.p
    n = bb.arity
    ratio = admissible_ratio(n + 1)
    num_points = deg_num + deg_den + 2
    guard = math.comb(n + deg_num + deg_den, n)

    def hat_eval(xi):
        # F_hat(xi) = xi_0^(deg_num - deg_den) * F(xi_1/xi_0, ..., xi_n/xi_0)
        x0 = xi[0]
        if x0 == 0:
            return FAIL
        ix0 = pow(x0, -1, p)
        v = bb(tuple(x * ix0 % p for x in xi[1:]))
        if v is FAIL:
            return FAIL
        return v * pow(x0, deg_num - deg_den, p) % p

    for _ in range(max_attempts):
        if bb.count > eval_cap:
            return FAIL
        gamma = [rng.randrange(1, p) for _ in range(n + 1)]
        sigma = [rng.randrange(1, p) for _ in range(n + 1)]
        rows = {}          # i -> (top num coeff, top den coeff), normalized
        bad_attempt = False

        def row(i):
            if i in rows:
                return rows[i]
            scale = [g * pow(w, i, p) % p for g, w in zip(gamma, ratio)]
            points, values = [], []
            u = 1
            while len(points) < num_points:
                xi = tuple((s * u + o) % p for s, o in zip(scale, sigma))
                v = hat_eval(xi)
                if v is not FAIL:
                    points.append(u)
                    values.append(v)
                u += 1
                if u > num_points + 32:
                    return FAIL
            got = cauchy_interpolate(points, values, deg_num, deg_den, field)
            if got is FAIL:
                return FAIL
            unum, uden = got
            c0 = _ueval(uden, 0, p)
            if c0 == 0:
                return FAIL
            ic0 = pow(c0, -1, p)     # normalize den(0) = B_hat(sigma) to 1
            a_top = unum[deg_num] * ic0 % p if _udeg(unum) == deg_num else 0
            b_top = uden[deg_den] * ic0 % p if _udeg(uden) == deg_den else 0
            rows[i] = (a_top, b_top)
            return rows[i]

        t_guess = 1
        while True:
            if bb.count > eval_cap:
                return FAIL
            seq_a, seq_b = [], []
            for i in range(2 * t_guess):
                r = row(i)
                if r is FAIL:
                    bad_attempt = True
                    break
                seq_a.append(r[0])
                seq_b.append(r[1])
            if bad_attempt:
                break
            try:
                hom_ring = _hom_ring(ring)
                pn = ben_or_tiwari(seq_a, ratio, deg_num, hom_ring, rng)
                qn = ben_or_tiwari(seq_b, ratio, deg_den, hom_ring, rng)
            except RootNotSmooth:
                pn = None
            if pn is not None:
                cand = _descale_dehomogenize(pn, qn, gamma, deg_num, deg_den,
                                             ring)
                if cand is not None and _verify(bb, cand, field, rng):
                    return cand
            if t_guess >= guard:
                break
            t_guess = min(2 * t_guess, guard)
    return FAIL


_hom_rings = {}


def _hom_ring(ring):
    key = (ring.vars, ring.field.p, ring.order.kind)
    if key not in _hom_rings:
        from .poly import Ring
        _hom_rings[key] = Ring(("_h",) + ring.vars, ring.field, ring.order)
    return _hom_rings[key]


def _descale_dehomogenize(pn, qn, gamma, deg_num, deg_den, ring):
    p = ring.field.p
    out = []
    for poly, deg in ((pn, deg_num), (qn, deg_den)):
        d = {}
        for m, c in poly.terms:
            if sum(m) != deg:
                return None          # not homogeneous: wrong sparsity guess
            scale = 1
            for g, e in zip(gamma, m):
                if e:
                    scale = scale * pow(g, e, p) % p
            d[m[1:]] = c * pow(scale, -1, p) % p
        out.append(ring.from_dict(d))
    num, den = out
    if den.is_zero():
        return None
    lc = den.leading_coefficient()
    ilc = pow(lc, -1, p)
    return num.scale(ilc), den.scale(ilc)


def _verify(bb, cand, field, rng, trials=2):
    num, den = cand
    p = field.p
    checked = 0
    attempts = 0
    while checked < trials and attempts < 16:
        attempts += 1
        point = tuple(rng.randrange(p) for _ in range(bb.arity))
        v = bb(point)
        dv = den.evaluate(point)
        if v is FAIL or dv == 0:
            continue
        if num.evaluate(point) != v * dv % p:
            return False
        checked += 1
    return checked == trials
