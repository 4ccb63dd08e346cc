"""Term-group expansion of the rank-6 Einstein identity in dimension 6.

Substituting the Weyl part W = R - (rho wedge g)/4 + tau (g wedge g)/20
into the r=2 antisymmetrization identity and collecting produces 34 term
groups; each group has a raw left side (in R and rho) and a simplified
right side obtained with the Einstein condition rho = (tau/6) g.  The
group equalities hold exactly iff the input is Einstein, and the sum of
the 34 simplified groups equals 8 times the assembled rank-6 identity
form.  Both facts are exercised by the test suite and the "appendix34"
identity id.

All nine quadratic-times-metric groups share one rank-4 kernel, all
eighteen norm-type groups one rank-2 kernel, and the six pure-metric
groups one scalar kernel, so the transcription below stays close to the
displayed term tables.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Scalar
from .tensor import Tensor, ShapeError, ein
from .curvature import CurvatureTensor
from .identities import einstein6_residual

# (sign, g-pair labels) for the six pure-metric groups, items 1-6
_ITEMS_G = (
    (1, ("ij", "hk", "lm")),
    (-1, ("ij", "hm", "lk")),
    (-1, ("ik", "hj", "lm")),
    (1, ("ik", "hm", "lj")),
    (1, ("im", "hj", "lk")),
    (-1, ("im", "hk", "lj")),
)

# (sign, kernel labels, g labels, g labels) for items 7-24
_ITEMS_K2 = (
    (1, "ij", "hk", "lm"),
    (-1, "ij", "hm", "lk"),
    (-1, "ik", "hj", "lm"),
    (1, "ik", "hm", "lj"),
    (1, "im", "hj", "lk"),
    (-1, "im", "hk", "lj"),
    (-1, "hj", "ik", "lm"),
    (1, "hj", "im", "lk"),
    (1, "hk", "ij", "lm"),
    (-1, "hk", "im", "lj"),
    (-1, "hm", "ij", "lk"),
    (1, "hm", "ik", "lj"),
    (1, "lj", "ik", "hm"),
    (-1, "lj", "im", "hk"),
    (-1, "lk", "ij", "hm"),
    (1, "lk", "im", "hj"),
    (1, "lm", "ij", "hk"),
    (-1, "lm", "ik", "hj"),
)

# (sign, kernel labels, g labels) for items 25-33
_ITEMS_K4 = (
    (1, "ihjk", "lm"),
    (-1, "iljk", "hm"),
    (-1, "ihjm", "lk"),
    (1, "iljm", "hk"),
    (1, "ihkm", "lj"),
    (-1, "ilkm", "hj"),
    (-1, "hljm", "ik"),
    (1, "hljk", "im"),
    (1, "hlkm", "ij"),
)

# item 34: (sign, A labels) with A_pqrstu = R_apqr R_astu, and
# (sign, R labels, partner labels) for the rho/metric tail
_ITEM34_A = (
    (1, "hjkmil"),
    (-1, "ljkmih"),
    (-1, "ijkmhl"),
    (1, "ijmkhl"),
    (-1, "hjmkil"),
    (1, "ljmkih"),
    (-1, "ikmjhl"),
    (1, "hkmjil"),
    (-1, "lkmjih"),
)
_ITEM34_TAIL = (
    (-1, "ilkm", "hj"),
    (1, "iljm", "hk"),
    (1, "hljk", "im"),
    (1, "ihjk", "lm"),
    (1, "ihkm", "lj"),
    (-1, "ihjm", "lk"),
    (-1, "iljk", "hm"),
    (1, "hlkm", "ij"),
    (-1, "hljm", "ik"),
)


def _kernels(R: CurvatureTensor):
    t = R.tensor
    g = Tensor.identity(6)
    ricci = ein("iaaj->ij", t)
    tau = ein("ii->", ricci).to_scalar()
    tt = ein("xabc,yabc->xy", t, t)
    rn2 = ein("ijkl,ijkl->", t, t).to_scalar()
    rho2 = ein("ij,ij->", ricci, ricci).to_scalar()

    k0 = rn2 - Scalar(4) * rho2 + tau * tau
    k0r = rn2 + tau * tau * Fraction(1, 3)

    k2 = (
        tt.scale(-4)
        + ein("xa,ya->xy", ricci, ricci).scale(8)
        + ein("xaby,ab->xy", t, ricci).scale(8)
        + ricci.scale(tau * Fraction(-4, 1))
    )
    k2r = tt.scale(-4) + g.scale(tau * tau * Fraction(-2, 9))

    quad = (
        ein("pabr,sabq->pqrs", t, t).scale(-8)
        + ein("pabs,rabq->pqrs", t, t).scale(8)
        + ein("abpq,abrs->pqrs", t, t).scale(4)
    )
    k4 = (
        quad
        + ein("aprs,aq->pqrs", t, ricci).scale(-8)
        + ein("aspq,ar->pqrs", t, ricci).scale(8)
        + ein("arpq,as->pqrs", t, ricci).scale(-8)
        + ein("aqrs,ap->pqrs", t, ricci).scale(8)
        + ein("pr,qs->pqrs", ricci, ricci).scale(8)
        + ein("ps,qr->pqrs", ricci, ricci).scale(-8)
        + t.scale(tau * Fraction(-4, 1))
    )
    k4r = (
        quad
        + t.scale(tau * Fraction(4, 3))
        + (ein("pr,qs->pqrs", g, g) - ein("ps,qr->pqrs", g, g)).scale(
            tau * tau * Fraction(2, 9)
        )
    )
    return t, g, ricci, tau, k0, k0r, k2, k2r, k4, k4r


def term_groups(R: CurvatureTensor) -> list:
    """All 34 (group number, raw lhs, simplified rhs) rank-6 tensors,
    free indices ordered (i,h,j,k,l,m)."""
    if R.dim != 6:
        raise ShapeError("the term-group expansion needs dim 6")
    t, g, ricci, tau, k0, k0r, k2, k2r, k4, k4r = _kernels(R)
    groups = []

    for sign, (p1, p2, p3) in _ITEMS_G:
        base = ein(f"{p1},{p2},{p3}->ihjklm", g, g, g)
        if sign < 0:
            base = -base
        groups.append((base.scale(k0), base.scale(k0r)))

    for sign, xy, a, b in _ITEMS_K2:
        lhs = ein(f"{xy},{a},{b}->ihjklm", k2, g, g)
        rhs = ein(f"{xy},{a},{b}->ihjklm", k2r, g, g)
        groups.append((lhs, rhs) if sign > 0 else (-lhs, -rhs))

    for sign, pqrs, xy in _ITEMS_K4:
        lhs = ein(f"{pqrs},{xy}->ihjklm", k4, g)
        rhs = ein(f"{pqrs},{xy}->ihjklm", k4r, g)
        groups.append((lhs, rhs) if sign > 0 else (-lhs, -rhs))

    rr_sum = None
    for sign, labels in _ITEM34_A:
        term = ein(f"a{labels[:3]},a{labels[3:]}->ihjklm", t, t)
        term = term if sign > 0 else -term
        rr_sum = term if rr_sum is None else rr_sum + term
    rho_tail = None
    tau_tail = None
    for sign, rl, pl in _ITEM34_TAIL:
        tr = ein(f"{rl},{pl}->ihjklm", t, ricci)
        tg = ein(f"{rl},{pl}->ihjklm", t, g)
        if sign < 0:
            tr, tg = -tr, -tg
        rho_tail = tr if rho_tail is None else rho_tail + tr
        tau_tail = tg if tau_tail is None else tau_tail + tg
    lhs34 = (rr_sum + rho_tail).scale(8)
    rhs34 = rr_sum.scale(8) + tau_tail.scale(tau * Fraction(4, 3))
    groups.append((lhs34, rhs34))

    return [(i + 1, lhs, rhs) for i, (lhs, rhs) in enumerate(groups)]


def group_sum_check(R: CurvatureTensor, groups=None, residual_form=None):
    """(sum of the 34 simplified groups, 8 x the assembled rank-6 identity
    form); the two must be componentwise identical.  Precomputed term
    groups / residual may be passed to avoid recomputation."""
    if groups is None:
        groups = term_groups(R)
    total = groups[0][2]
    for _, _, rhs in groups[1:]:
        total = total + rhs
    if residual_form is None:
        residual_form = einstein6_residual(R).residual
    return total, residual_form.scale(8)
