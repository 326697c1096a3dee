"""Symbolic closure tables for the reconstructed velocity and pressure.

Each closure is a sum of monomials

    R^a * cot(alpha)^b * (W/sin(alpha))^c * delta^dpow * P(y) * J,

with P a polynomial with rational coefficients and J a product of jet
entries of the surface (eta, eta_x, eta_t, ...).  The table is not
hard-coded: it is derived here, in exact Fraction arithmetic, by solving
the wall-normal boundary-value hierarchy order by order,

    order 0:  u0_yy = 0,              2 p0_y = 0
    order 1:  u1_yy = R(u0_t + ub u0_x + ub_y v0) + 2 p0_x + 2 eta u0_yy
              2 p1_y = v0_yy + 2 eta p0_y
    order 2:  u2_yy = R(u1_t + ub u1_x + ub_y v1) + 2 p1_x + 2 eta u1_yy
                      - u0_xx - R f1(eta, u0, v0, p0)
              2 p2_y = v1_yy + 2 eta p1_y - R(v0_t + ub v0_x)
                      + R f2(eta, u0, p0)

with ub = 2y - y^2, no slip at y = 0, the stress conditions at y = 1, and
v_k = -d/dx int_0^y u_k (so incompressibility holds coefficientwise).
Keeping the table symbolic makes the long order-2 polynomials machine
checkable: exact d/dy, exact evaluation at y = 1, and exact d/dt by
shifting jet indices.

Weber-regime variants add surface-tension corrections carrying explicit
powers of delta (field ``dpow``); regimes I and II truncate at order 1,
regimes III and IV at order 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .params import Regime, RegimeError

__all__ = ["ClosureTerm", "ClosureTable", "build_closure_table", "table_signature"]

_F = Fraction
_ONE = (_F(1),)


# ---------------------------------------------------------------------------
# polynomial and expression helpers (module-private)
#
# Expr: dict mapping ((rpow, cotpow, wpow), jet) -> y-polynomial, where jet
# is a sorted tuple of (j_x, j_t) factors and the polynomial is a tuple of
# Fractions indexed by the power of y.

def _trim(p):
    p = tuple(p)
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _padd(p, q):
    n = max(len(p), len(q))
    return _trim(tuple((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                       for i in range(n)))


def _pmul(p, q):
    out = [_F(0)] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _pdiff(p):
    return _trim(tuple(p[i] * i for i in range(1, len(p))))


def _pint(p):
    """Antiderivative vanishing at y = 0."""
    return _trim((_F(0),) + tuple(p[i] / (i + 1) for i in range(len(p))))


def _pat1(p):
    return sum(p, _F(0))


def _poly(*coeffs):
    return _trim(tuple(_F(c) for c in coeffs))


def _norm(e):
    return {k: v for k, v in e.items() if v}


def _e_term(poly, param=(0, 0, 0), jet=()):
    poly = _trim(poly)
    return {(param, tuple(sorted(jet))): poly} if poly else {}


def _e_jet(jx, jt, coeff=_F(1)):
    return _e_term((coeff,), jet=((jx, jt),))


def _e_add(*exprs):
    out = {}
    for e in exprs:
        for k, p in e.items():
            out[k] = _padd(out.get(k, ()), p)
    return _norm(out)


def _e_scale(e, c):
    c = _F(c)
    return _norm({k: _trim(tuple(c * a for a in p)) for k, p in e.items()})


def _e_neg(e):
    return _e_scale(e, -1)


def _e_pshift(e, dr=0, dc=0, dw=0):
    return {((pr + dr, pc + dc, pw + dw), jet): p
            for ((pr, pc, pw), jet), p in e.items()}


def _e_mulpoly(e, poly):
    poly = _trim(tuple(_F(c) for c in poly))
    return _norm({k: _pmul(p, poly) for k, p in e.items()})


def _e_mul(a, b):
    out = {}
    for (pa, ja), qa in a.items():
        for (pb, jb), qb in b.items():
            key = (tuple(x + y for x, y in zip(pa, pb)), tuple(sorted(ja + jb)))
            out[key] = _padd(out.get(key, ()), _pmul(qa, qb))
    return _norm(out)


def _jet_bump(jet, i, axis):
    jx, jt = jet[i]
    new = jet[:i] + ((jx + 1, jt) if axis == 0 else (jx, jt + 1),) + jet[i + 1:]
    return tuple(sorted(new))


def _e_dx(e, axis=0):
    """Leibniz derivative over the jet factors (axis 0 = x, 1 = t)."""
    out = {}
    for (param, jet), p in e.items():
        for i in range(len(jet)):
            key = (param, _jet_bump(jet, i, axis))
            out[key] = _padd(out.get(key, ()), p)
    return _norm(out)


def _e_dt(e):
    return _e_dx(e, axis=1)


def _e_dy(e):
    return _norm({k: _pdiff(p) for k, p in e.items()})


def _e_int_y(e):
    return _norm({k: _pint(p) for k, p in e.items()})


def _e_at1(e):
    out = {}
    for k, p in e.items():
        v = _pat1(p)
        if v:
            out[k] = _padd(out.get(k, ()), (v,))
    return _norm(out)


# ---------------------------------------------------------------------------
# the wall-normal hierarchy

_UBAR = _poly(0, 2, -1)        # 2y - y^2
_UBAR_Y = _poly(2, -2)         # 2 - 2y


def _solve_velocity(uyy, uy_at_1):
    """u with u_yy given, u_y(1) = uy_at_1, u(0) = 0."""
    g = _e_int_y(uyy)
    uy = _e_add(g, uy_at_1, _e_neg(_e_at1(g)))
    return _e_int_y(uy)


def _solve_pressure(py, p_at_1):
    """p with p_y given and p(1) = p_at_1."""
    g = _e_int_y(py)
    return _e_add(g, p_at_1, _e_neg(_e_at1(g)))


def _f1_source(eta, u, v, p):
    """Quadratic interior source feeding the first momentum equation."""
    u_x, u_y, p_x, p_y = _e_dx(u), _e_dy(u), _e_dx(p), _e_dy(p)
    u_yy = _e_dy(u_y)
    eta_x, eta_t = _e_dx(eta), _e_dt(eta)
    eta2 = _e_mul(eta, eta)
    over_r = _e_add(
        _e_scale(_e_mul(eta2, u_yy), 3),
        _e_scale(_e_mul(eta, p_x), -2),
        _e_mulpoly(_e_mul(eta_x, p_y), _poly(0, 2)),
    )
    return _e_add(
        _e_pshift(over_r, dr=-1),
        _e_mul(eta_t, u),
        _e_mulpoly(_e_mul(eta_t, u_y), _poly(0, 1)),
        _e_mulpoly(_e_mul(eta_x, u), _poly(0, 0, 1)),
        _e_mulpoly(_e_mul(eta, u_x), _poly(0, -2, 2)),
        _e_mulpoly(_e_mul(eta_x, u_y), _poly(0, 0, 2, -1)),
        _e_neg(_e_mul(u, u_x)),
        _e_neg(_e_mul(v, u_y)),
        _e_mulpoly(_e_mul(eta, v), _poly(-2, 4)),
    )


def _f2_source(eta, u, p):
    """Quadratic interior source feeding the second momentum equation."""
    over_r = _e_add(
        _e_scale(_e_mul(_e_mul(eta, eta), _e_dy(p)), -2),
        _e_scale(_e_mul(_e_dx(eta), _e_dy(u)), 2),
        _e_scale(_e_mul(eta, _e_dx(_e_dy(u))), 2),
    )
    return _e_pshift(over_r, dr=-1)


@lru_cache(maxsize=1)
def _base_closures():
    eta = _e_jet(0, 0)
    eta_x = _e_jet(1, 0)
    eta_xx = _e_jet(2, 0)
    eta2 = _e_mul(eta, eta)
    eta3 = _e_mul(eta2, eta)

    # order 0
    u0 = _solve_velocity({}, _e_scale(eta, 2))
    p0 = _solve_pressure({}, _e_pshift(eta, dc=1))
    v0 = _e_neg(_e_dx(_e_int_y(u0)))

    # order 1
    u1yy = _e_add(
        _e_pshift(_e_add(_e_dt(u0),
                         _e_mulpoly(_e_dx(u0), _UBAR),
                         _e_mulpoly(v0, _UBAR_Y)), dr=1),
        _e_scale(_e_dx(p0), 2),
        _e_scale(_e_mul(eta, _e_dy(_e_dy(u0))), 2),
    )
    u1 = _solve_velocity(u1yy, _e_scale(eta2, 4))
    p1y = _e_scale(_e_add(_e_dy(_e_dy(v0)),
                          _e_scale(_e_mul(eta, _e_dy(p0)), 2)), _F(1, 2))
    p1 = _solve_pressure(p1y, _e_neg(_e_at1(_e_dx(u0))))
    v1 = _e_neg(_e_dx(_e_int_y(u1)))

    # order 2
    u2yy = _e_add(
        _e_pshift(_e_add(_e_dt(u1),
                         _e_mulpoly(_e_dx(u1), _UBAR),
                         _e_mulpoly(v1, _UBAR_Y)), dr=1),
        _e_scale(_e_dx(p1), 2),
        _e_scale(_e_mul(eta, _e_dy(_e_dy(u1))), 2),
        _e_neg(_e_dx(_e_dx(u0))),
        _e_neg(_e_pshift(_f1_source(eta, u0, v0, p0), dr=1)),
    )
    u2 = _solve_velocity(u2yy, _e_add(_e_neg(_e_at1(_e_dx(v0))),
                                      _e_scale(eta3, 2)))
    p2y = _e_scale(_e_add(
        _e_dy(_e_dy(v1)),
        _e_scale(_e_mul(eta, p1y), 2),
        _e_neg(_e_pshift(_e_add(_e_dt(v0), _e_mulpoly(_e_dx(v0), _UBAR)), dr=1)),
        _e_pshift(_f2_source(eta, u0, p0), dr=1),
    ), _F(1, 2))
    # dynamic condition: p2(1) = -u1_x(1) + (2 eta eta_x + eta_x u0(1)
    #                     + eta u0_x(1)) - (W/sin) eta_xx
    h22_at_1 = _e_add(_e_scale(_e_mul(eta, eta_x), 2),
                      _e_mul(eta_x, _e_at1(u0)),
                      _e_mul(eta, _e_at1(_e_dx(u0))))
    p2_at_1 = _e_add(_e_neg(_e_at1(_e_dx(u1))), h22_at_1,
                     _e_neg(_e_pshift(eta_xx, dw=1)))
    p2 = _solve_pressure(p2y, p2_at_1)
    v2 = _e_neg(_e_dx(_e_int_y(u2)))

    return {"u": (u0, u1, u2), "v": (v0, v1, v2), "p": (p0, p1, p2)}


# ---------------------------------------------------------------------------
# closure tables

@dataclass(frozen=True)
class ClosureTerm:
    """One closure monomial: param * delta^dpow * ypoly(y) * prod(jet)."""

    field: str                 # "u", "v" or "p"
    order: int                 # power of delta from the expansion (0..2)
    dpow: int                  # extra explicit power of delta (Weber terms)
    rpow: int
    cotpow: int
    wpow: int                  # power of W/sin(alpha)
    ypoly: tuple
    jet: tuple

    def coefficient(self, params):
        """Numeric prefactor excluding the delta weights."""
        return (float(params.R) ** self.rpow
                * params.cot_alpha ** self.cotpow
                * (params.W / params.sin_alpha) ** self.wpow)


@dataclass(frozen=True)
class ClosureTable:
    """All closure monomials of one Weber regime.

    The assembled field is sum_k delta^(k + dpow) * (order-k monomials)
    for k up to ``order`` (1 for regimes I/II, 2 for III/IV).
    """

    regime: Regime
    order: int
    terms: tuple

    def field_terms(self, field, max_order=None):
        mo = self.order if max_order is None else max_order
        return [t for t in self.terms if t.field == field and t.order <= mo]

    def jet_requirements(self):
        """Largest (j_x, j_t) any monomial consumes."""
        jx = max((i[0] for t in self.terms for i in t.jet), default=0)
        jt = max((i[1] for t in self.terms for i in t.jet), default=0)
        return jx, jt


def _terms_from_expr(field, order, expr, dpow=0):
    out = []
    for ((rp, cp, wp), jet), poly in sorted(expr.items()):
        out.append(ClosureTerm(field, order, dpow, rp, cp, wp, poly, jet))
    return out


def _merge(terms):
    acc = {}
    for t in terms:
        key = (t.field, t.order, t.dpow, t.rpow, t.cotpow, t.wpow, t.jet)
        acc[key] = _padd(acc.get(key, ()), t.ypoly)
    out = [ClosureTerm(k[0], k[1], k[2], k[3], k[4], k[5], p, k[6])
           for k, p in sorted(acc.items()) if p]
    return tuple(out)


@lru_cache(maxsize=None)
def build_closure_table(regime) -> ClosureTable:
    """Closure table for one of the regimes I-IV.

    Regime I adds -(delta W/sin) eta_xx to the order-1 pressure; regime II
    moves the surface-tension term into the order-0 pressure (with the
    matching order-1 velocity corrections); regime IV carries it at order 1
    and cancels the order-2 copy.  The KdV models have no closures.
    """
    regime = Regime(regime)
    if regime.is_kdv:
        raise RegimeError("regime", f"no field closures for {regime.value}")
    base = _base_closures()
    order = regime.closure_order
    terms = []
    for fld in ("u", "v", "p"):
        for k in range(order + 1):
            terms.extend(_terms_from_expr(fld, k, base[fld][k]))

    minus_xx = _e_neg(_e_pshift(_e_jet(2, 0), dw=1))          # -(W/sin) eta_xx
    u_corr = _e_pshift(_e_term(_poly(0, 2, -1), jet=((3, 0),)), dw=1)
    v_corr = _e_pshift(_e_term(_poly(0, 0, -1, _F(1, 3)), jet=((4, 0),)), dw=1)
    if regime is Regime.I:
        terms.extend(_terms_from_expr("p", 1, minus_xx, dpow=1))
    elif regime is Regime.II:
        terms.extend(_terms_from_expr("p", 0, minus_xx, dpow=2))
        terms.extend(_terms_from_expr("u", 1, u_corr, dpow=2))
        terms.extend(_terms_from_expr("v", 1, v_corr, dpow=2))
    elif regime is Regime.IV:
        terms.extend(_terms_from_expr("p", 1, minus_xx, dpow=1))
        terms.extend(_terms_from_expr("u", 2, u_corr, dpow=1))
        terms.extend(_terms_from_expr("v", 2, v_corr, dpow=1))
        terms.extend(_terms_from_expr("p", 2, _e_pshift(_e_jet(2, 0), dw=1), dpow=0))
    return ClosureTable(regime, order, _merge(terms))


# exact term-level transforms ------------------------------------------------

def term_dx(t: ClosureTerm):
    """d/dx by Leibniz over the jet factors (exact)."""
    out = []
    for i in range(len(t.jet)):
        jet = _jet_bump(t.jet, i, 0)
        out.append(ClosureTerm(t.field, t.order, t.dpow, t.rpow, t.cotpow,
                               t.wpow, t.ypoly, jet))
    return out


def term_dt(t: ClosureTerm):
    """d/dt by shifting jet time indices (exact)."""
    out = []
    for i in range(len(t.jet)):
        jet = _jet_bump(t.jet, i, 1)
        out.append(ClosureTerm(t.field, t.order, t.dpow, t.rpow, t.cotpow,
                               t.wpow, t.ypoly, jet))
    return out


def term_dy(t: ClosureTerm):
    p = _pdiff(t.ypoly)
    if not p:
        return None
    return ClosureTerm(t.field, t.order, t.dpow, t.rpow, t.cotpow, t.wpow,
                       p, t.jet)


def transform_terms(terms, dt=0, dy=0):
    """Apply d/dt ``dt`` times and d/dy ``dy`` times to a term list."""
    out = list(terms)
    for _ in range(dt):
        out = [s for t in out for s in term_dt(t)]
    for _ in range(dy):
        out = [t2 for t in out if (t2 := term_dy(t)) is not None]
    return _merge(out)


def table_signature(table: ClosureTable):
    """JSON-able exact representation, used by the golden-table test."""
    sig = {}
    for fld in ("u", "v", "p"):
        per_order = {}
        for k in range(table.order + 1):
            entries = []
            for t in table.field_terms(fld):
                if t.order != k:
                    continue
                entries.append({
                    "dpow": t.dpow,
                    "param": [t.rpow, t.cotpow, t.wpow],
                    "jet": [list(ix) for ix in t.jet],
                    "ypoly": [str(c) for c in t.ypoly],
                })
            per_order[str(k)] = entries
        sig[fld] = per_order
    return sig
