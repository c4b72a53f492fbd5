"""Strongly parabolic Higgs fixed points and the C*-limit of flat triples.

The limit of ``(E, L, c * nabla)`` as ``c -> 0`` is computed by the
gauge-family construction: finitely many candidate degenerations are built
from the off-diagonal residue data (keep the upper part, keep the lower part,
or degenerate onto a degree -1 inclusion) and the unique Higgs-stable
candidate is returned.  The fixed locus for ``sum(w) < 1`` has two components:
the single point F0 on the (-1, 2) split and the family F1 of nilpotent Higgs
fields on the (0, 1) split, modeled as two glued blown-up planes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .connection import FlatTriple, LogConnection, solve_connection_space
from .exactnum import (
    INF,
    Mat,
    Poly,
    ProjectivePoint,
    Scalar,
    monic_from_roots,
    sc,
)
from .parastruct import (
    B,
    BPRIME,
    NPOINTS,
    MarkedConfiguration,
    ParabolicStructure,
    bprime_generic_representative,
)
from .spectra import SpectrumRank2
from .stability import OnWallError, WeightVector, is_stable, s_value, weight_is_non_special


class HiggsError(ValueError):
    """Raised on malformed Higgs data or failed limit preconditions."""


def _sqrt_rational(num: int, den: int) -> tuple[int, int] | None:
    if num < 0 or den <= 0:
        return None
    sn, sd = isqrt(num), isqrt(den)
    if sn * sn == num and sd * sd == den:
        return sn, sd
    return None


def gaussian_sqrt(s: Scalar) -> Scalar | None:
    """An exact square root in the Gaussian rationals, or None."""
    if s.is_zero():
        return sc(0)
    rn, rd = s.re_pair
    imn, imd = s.im_pair
    if imn == 0:
        if rn > 0:
            root = _sqrt_rational(rn, rd)
            return Scalar.rational(*root) if root else None
        root = _sqrt_rational(-rn, rd)
        return Scalar.rational(*root) * Scalar(0, 1) if root else None
    # |s| must be rational: common denominator form (a + b i)/d
    a_num, a_den = rn, rd
    b_num, b_den = imn, imd
    d = a_den * b_den
    a = a_num * b_den
    b = b_num * a_den
    n2 = a * a + b * b
    m = isqrt(n2)
    if m * m != n2:
        return None
    half = Scalar.rational(a + m, 2 * d)
    hn, hd = half.re_pair
    root = _sqrt_rational(hn, hd)
    if root is None:
        return None
    p = Scalar.rational(*root)
    if p.is_zero():
        return None
    q = Scalar.rational(b, d) / (2 * p)
    cand = p + q * Scalar(0, 1)
    return cand if cand * cand == s else None


def quadratic_roots(theta: Poly) -> tuple[ProjectivePoint, ProjectivePoint] | None:
    """Zero divisor of a section of O(2) given by a degree <= 2 polynomial:
    two points of the projective line, infinity absorbing the degree drop.
    None when the roots do not lie in the scalar field."""
    deg = theta.degree()
    if deg < 0:
        raise HiggsError("zero section has no zero divisor")
    if deg == 0:
        return (INF, INF)
    if deg == 1:
        return (ProjectivePoint.finite(-theta.coeff(0) / theta.coeff(1)), INF)
    c2, c1, c0 = theta.coeff(2), theta.coeff(1), theta.coeff(0)
    disc = c1 * c1 - 4 * c2 * c0
    root = gaussian_sqrt(disc)
    if root is None:
        return None
    r1 = (-c1 + root) / (2 * c2)
    r2 = (-c1 - root) / (2 * c2)
    return (ProjectivePoint.finite(r1), ProjectivePoint.finite(r2))


class StronglyParabolicHiggs:
    """Nilpotent upper-triangular Higgs datum on B or B'.

    ``theta`` is the cleared (12) numerator, degree <= 2 on B and constant on
    B'.  Strong parabolicity pins the flag to the lower summand fiber wherever
    theta does not vanish.
    """

    __slots__ = ("bundle", "structure", "theta", "cfg")

    def __init__(self, bundle, structure, theta: Poly, cfg: MarkedConfiguration):
        if bundle not in (B, BPRIME):
            raise HiggsError("Higgs data supported on B and B' only")
        if structure.bundle != bundle:
            raise HiggsError("structure lives on a different bundle")
        bound = 2 if bundle == B else 0
        self.theta = theta.shrink(bound)
        self.bundle = bundle
        self.structure = structure
        self.cfg = cfg
        for i in range(NPOINTS):
            if not self.theta(cfg.z[i]).is_zero():
                u = structure.flags[i]
                if u.is_infinity() or not u.value.is_zero():
                    raise HiggsError(
                        f"flag at point {i + 1} must lie on the lower summand "
                        "where theta is nonzero"
                    )

    def marked_zero_indices(self) -> list[int]:
        return [i for i in range(NPOINTS) if self.theta(self.cfg.z[i]).is_zero()]

    def is_nilpotent_nonzero(self) -> bool:
        return not self.theta.is_zero()

    def to_json(self):
        return {
            "bundle": self.bundle.name,
            "structure": self.structure.to_json(),
            "theta": [str(c) for c in self.theta.coeffs],
        }


def higgs_is_stable(
    h: StronglyParabolicHiggs, cfg: MarkedConfiguration, w: WeightVector
) -> bool:
    """Stability over Higgs-invariant line subbundles only.

    A nonzero nilpotent field leaves exactly one line subbundle invariant,
    the lower summand; its margin decides.  A zero field imposes no
    invariance constraint and the decision reduces to parabolic stability.
    """
    if h.theta.is_zero():
        return is_stable(h.structure, cfg, w).stable
    margin = _lower_factor_margin(h.bundle, h.structure, w)
    if margin.is_zero():
        raise OnWallError("invariant-subbundle margin vanishes")
    return margin > sc(0)


def _lower_factor_margin(bundle, structure, w) -> Scalar:
    contact = {
        i
        for i, u in enumerate(structure.flags)
        if not u.is_infinity() and u.value.is_zero()
    }
    return s_value(bundle.degree, bundle.d0, contact, w)


def theta_from_connection(conn: LogConnection, cfg: MarkedConfiguration) -> Poly:
    """The cleared (12) numerator of a connection, bounded by the Higgs
    degree of its bundle (2 on B, 0 on B'); holomorphy of the input makes the
    higher coefficients vanish."""
    raw = conn.offdiag_upper(cfg)
    bound = 3 + conn.bundle.d0 - conn.bundle.d1
    return raw.shrink(max(bound, -1))


def xi_from_connection(conn: LogConnection, cfg: MarkedConfiguration) -> Poly:
    """The cleared (21) numerator, tail included."""
    return conn.offdiag_lower(cfg)


@dataclass(frozen=True)
class FixedLocusPoint:
    """A point of the two-component fixed locus.

    F0 carries no coordinates.  F1 points live on one of two charts (two
    copies of the plane of Higgs zero divisors blown up at the five double
    marked points): either a plain quadratic ``theta`` (projectively
    normalized coefficients) or an exceptional datum at a marked index with a
    tangent coordinate, the virtual second zero.  ``flag_choice`` records the
    lower/upper choice at every marked zero of theta.
    """

    component: str
    chart: str = "top"
    theta: tuple[Scalar, ...] | None = None
    exceptional_index: int | None = None
    tangent: ProjectivePoint | None = None
    flag_choice: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if self.component not in ("F0", "F1"):
            raise HiggsError("component must be F0 or F1")
        if self.component == "F1":
            if self.chart not in ("top", "bottom"):
                raise HiggsError("chart must be top or bottom")
            if (self.exceptional_index is None) == (self.theta is None):
                raise HiggsError(
                    "an F1 point carries either a quadratic or an exceptional datum"
                )
            if self.exceptional_index is not None and self.tangent is None:
                raise HiggsError("exceptional points carry a tangent coordinate")

    def zeros(self, cfg: MarkedConfiguration):
        """The unordered zero pair, or None when it does not split over the
        scalar field."""
        if self.component != "F1":
            return None
        if self.exceptional_index is not None:
            zi = ProjectivePoint.finite(cfg.z[self.exceptional_index])
            return (zi, self.tangent)
        return quadratic_roots(Poly(list(self.theta), bound=2))

    def theta_poly(self, cfg: MarkedConfiguration) -> Poly:
        if self.component != "F1":
            raise HiggsError("F0 carries no Higgs coordinates")
        if self.exceptional_index is None:
            return Poly(list(self.theta), bound=2)
        zi = cfg.z[self.exceptional_index]
        if self.tangent.is_infinity():
            return Poly([-zi, 1], bound=2)
        return monic_from_roots([zi, self.tangent.value]).shrink(2)

    def to_json(self, cfg: MarkedConfiguration | None = None):
        out = {"component": self.component}
        if self.component == "F1":
            out["chart"] = self.chart
            if self.exceptional_index is not None:
                out["exceptional_at"] = self.exceptional_index + 1
                out["tangent"] = str(self.tangent)
            else:
                out["theta"] = [str(c) for c in self.theta]
            if cfg is not None:
                zs = self.zeros(cfg)
                out["zeros"] = [str(z) for z in zs] if zs else None
            out["flagChoice"] = {
                str(i + 1): choice for i, choice in self.flag_choice
            }
        return out

    @classmethod
    def from_json(cls, data) -> "FixedLocusPoint":
        if data["component"] == "F0":
            return cls("F0")
        choices = tuple(
            sorted((int(k) - 1, v) for k, v in data.get("flagChoice", {}).items())
        )
        if "exceptional_at" in data:
            return cls(
                "F1",
                data["chart"],
                None,
                int(data["exceptional_at"]) - 1,
                ProjectivePoint.parse(data["tangent"]),
                choices,
            )
        theta = tuple(Scalar.parse(s) for s in data["theta"])
        return cls("F1", data["chart"], theta, None, None, choices)


def _normalize_theta(theta: Poly) -> tuple[Scalar, ...]:
    coeffs = [theta.coeff(k) for k in range(3)]
    for c in coeffs:
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in coeffs)
    raise HiggsError("zero quadratic")


def fixedpoint_from_higgs(h: StronglyParabolicHiggs) -> FixedLocusPoint:
    """Chart datum of a Higgs fixed point, before canonicalization.

    Convention: the top chart carries the all-lower flag choices; an upper
    choice at a marked zero is recorded through the exceptional datum at that
    index (the bottom chart for a double marked zero).
    """
    if h.bundle == BPRIME:
        return FixedLocusPoint("F0")
    theta = h.theta
    if theta.is_zero():
        raise HiggsError("zero Higgs field is not an F1 datum")
    marked = h.marked_zero_indices()
    choices = []
    for i in marked:
        u = h.structure.flags[i]
        choices.append((i, "upper" if u.is_infinity() else "lower"))
    choice_map = dict(choices)
    uppers = [i for i in marked if choice_map[i] == "upper"]
    zi_double = _double_marked_zero(theta, h.cfg, marked)
    if zi_double is not None:
        chart = "bottom" if choice_map[zi_double] == "upper" else "top"
        return FixedLocusPoint(
            "F1",
            chart,
            None,
            zi_double,
            ProjectivePoint.finite(h.cfg.z[zi_double]),
            tuple(sorted(choices)),
        )
    if uppers:
        i = min(uppers)
        other = _other_zero(theta, h.cfg.z[i])
        return FixedLocusPoint(
            "F1", "top", None, i, other, tuple(sorted(choices))
        )
    return FixedLocusPoint(
        "F1", "top", _normalize_theta(theta), None, None, tuple(sorted(choices))
    )


def _double_marked_zero(theta: Poly, cfg, marked) -> int | None:
    for i in marked:
        zi = cfg.z[i]
        # double root at z_i: theta proportional to (z - z_i)^2
        d = Poly([(k + 1) * c for k, c in enumerate(theta.coeffs[1:])], bound=1)
        if d(zi).is_zero():
            return i
    return None


def _other_zero(theta: Poly, zi: Scalar) -> ProjectivePoint:
    """The second zero of a quadratic with a known root at z_i."""
    if theta.degree() == 2:
        # sum of roots = -c1/c2
        return ProjectivePoint.finite(-theta.coeff(1) / theta.coeff(2) - zi)
    return INF


def fixedpoint_canonicalize(p: FixedLocusPoint, cfg: MarkedConfiguration) -> FixedLocusPoint:
    """Canonical representative under the three gluing identifications.

    The rules are chart-asymmetric.  Top-chart lines through a marked zero
    are glued to bottom-chart exceptional curves whatever the second zero is;
    bottom-chart lines are glued to top-chart exceptional data only when the
    second zero avoids every marked point.  Exceptional points whose tangent
    is the center (the strict-transform intersection) or, on the top chart, a
    marked point, match no rule and stay as they are; the bottom-chart
    exceptional points with marked tangents are merged with their
    smaller-index partner through the top-chart line they both glue to.
    """
    if p.component == "F0":
        return p
    if p.exceptional_index is not None:
        i = p.exceptional_index
        zi = cfg.z[i]
        if not p.tangent.is_infinity() and p.tangent.value == zi:
            return p  # the excluded intersection point
        tangent_marked = _marked_index(p.tangent, cfg)
        if (
            p.chart == "bottom"
            and tangent_marked is not None
            and tangent_marked < i
        ):
            return FixedLocusPoint(
                "F1",
                "bottom",
                None,
                tangent_marked,
                ProjectivePoint.finite(zi),
                p.flag_choice,
            )
        return p
    # line form: hunt for marked zeros
    theta = Poly(list(p.theta), bound=2)
    marked = [i for i in range(NPOINTS) if theta(cfg.z[i]).is_zero()]
    if not marked:
        return FixedLocusPoint(
            "F1", "top", _normalize_theta(theta), None, None, p.flag_choice
        )
    if _double_marked_zero(theta, cfg, marked) is not None:
        raise HiggsError(
            "a double marked zero must be presented by its exceptional datum"
        )
    i = min(marked)
    if p.chart == "top":
        return FixedLocusPoint(
            "F1", "bottom", None, i, _other_zero(theta, cfg.z[i]), p.flag_choice
        )
    # bottom-chart line: glued only when the second zero is unmarked
    if len(marked) == 1:
        return FixedLocusPoint(
            "F1", "top", None, i, _other_zero(theta, cfg.z[i]), p.flag_choice
        )
    return FixedLocusPoint(
        "F1", "bottom", _normalize_theta(theta), None, None, p.flag_choice
    )


def _marked_index(pt: ProjectivePoint, cfg) -> int | None:
    if pt.is_infinity():
        return None
    for i, zi in enumerate(cfg.z):
        if pt.value == zi:
            return i
    return None


def in_removed_locus(p: FixedLocusPoint, cfg: MarkedConfiguration) -> bool:
    """Membership in the removed curve classes: the glued images of the
    strict transforms minus their special points, canonically the bottom-chart
    exceptional data with non-marked tangent distinct from the center."""
    q = fixedpoint_canonicalize(p, cfg)
    if q.component != "F1" or q.exceptional_index is None or q.chart != "bottom":
        return False
    if not q.tangent.is_infinity() and q.tangent.value == cfg.z[q.exceptional_index]:
        return False
    return _marked_index(q.tangent, cfg) is None


@dataclass(frozen=True)
class SpecialLoci:
    points: dict
    lines: dict


def tau_point(p: ProjectivePoint, q: ProjectivePoint) -> tuple[Scalar, ...]:
    """Image of an unordered pair of line points in the plane of zero
    divisors: the projective coefficient triple of the quadratic vanishing on
    the pair."""
    if p.is_infinity() and q.is_infinity():
        theta = Poly([1], bound=2)
    elif p.is_infinity() or q.is_infinity():
        val = q.value if p.is_infinity() else p.value
        theta = Poly([-val, 1], bound=2)
    else:
        theta = monic_from_roots([p.value, q.value]).shrink(2)
    return _normalize_theta(theta)


def special_loci(cfg: MarkedConfiguration) -> SpecialLoci:
    """The 10 + 5 special points and the five special lines of the plane of
    zero divisors."""
    points = {}
    for i in range(NPOINTS):
        for j in range(i, NPOINTS):
            points[(i, j)] = tau_point(
                ProjectivePoint.finite(cfg.z[i]), ProjectivePoint.finite(cfg.z[j])
            )
    lines = {}
    for i in range(NPOINTS):
        zi = cfg.z[i]
        lines[i] = {
            "dual": (sc(1), zi, zi * zi),
            "parametrization": lambda z, zi=zi: tau_point(
                ProjectivePoint.finite(zi),
                z if isinstance(z, ProjectivePoint) else ProjectivePoint.finite(z),
            ),
        }
    return SpecialLoci(points, lines)


@dataclass(frozen=True)
class LimitCandidate:
    name: str
    margin: Scalar
    stable: bool
    higgs: StronglyParabolicHiggs | None


@dataclass(frozen=True)
class LimitResult:
    point: FixedLocusPoint
    higgs: StronglyParabolicHiggs
    candidates: tuple[LimitCandidate, ...]


def cstar_limit(t: FlatTriple, w: WeightVector) -> LimitResult:
    """The C*-limit of a stable flat triple for a non-special weight with
    ``sum(w) < 1``.

    The gauge-family candidates (keep the upper off-diagonal data, keep the
    lower, or degenerate onto one of the five degree -1 inclusions) are all
    constructed and ranked by Higgs stability; exactly one must survive.
    """
    cfg = t.cfg
    bundle = t.connection.bundle
    if bundle not in (B, BPRIME):
        raise HiggsError("limits are taken on B and B' triples")
    if not weight_is_non_special(w, bundle.degree):
        raise OnWallError("weight is not non-special")
    if not (w.total() < sc(1)):
        raise HiggsError("the two-component regime requires sum(w) < 1")
    if not t.spectrum.predicates()["non_special"]:
        raise HiggsError("limit requires a non-special spectrum")

    candidates = []
    winner = None

    theta = theta_from_connection(t.connection, cfg)
    if theta.is_zero():
        raise HiggsError(
            "upper off-diagonal data vanishes: the triple is reducible"
        )
    drop_flags = [
        INF if u.is_infinity() else ProjectivePoint.finite(0)
        for u in t.structure.flags
    ]
    e0 = StronglyParabolicHiggs(
        bundle, ParabolicStructure(bundle, drop_flags), theta, cfg
    )
    m0 = _lower_factor_margin(bundle, e0.structure, w)
    candidates.append(LimitCandidate("E0", m0, m0 > sc(0), e0))

    # E1 keeps the lower off-diagonal data; its only invariant subbundle is
    # the higher-degree factor, contacting the flags away from zero
    contact_e1 = {
        i
        for i, u in enumerate(t.structure.flags)
        if u.is_infinity() or not u.value.is_zero()
    }
    m1 = s_value(bundle.degree, bundle.d1, contact_e1, w)
    candidates.append(LimitCandidate("E1", m1, m1 > sc(0), None))

    if bundle == B:
        for j in range(NPOINTS):
            cand = _degenerate_candidate(t, w, j)
            if cand is not None:
                candidates.append(cand)

    for cand in candidates:
        if cand.margin.is_zero():
            raise OnWallError(f"candidate {cand.name} margin vanishes")
    stable_ones = [c for c in candidates if c.stable]
    if len(stable_ones) != 1:
        raise HiggsError(
            f"expected a unique stable candidate, found {len(stable_ones)}"
        )
    winner = stable_ones[0]
    if winner.higgs is None:
        raise HiggsError(f"candidate {winner.name} has no normal-form datum")
    point = fixedpoint_canonicalize(fixedpoint_from_higgs(winner.higgs), cfg)
    return LimitResult(point, winner.higgs, tuple(candidates))


def _degenerate_candidate(t: FlatTriple, w: WeightVector, j: int):
    """The degeneration onto a degree -1 inclusion whose non-contact set is
    exactly the j-th marked point; None when no such inclusion exists."""
    from itertools import product as _product

    from .stability import _is_saturated

    cfg = t.cfg
    rows = []
    for i in range(NPOINTS):
        if i == j:
            continue
        zi = cfg.z[i]
        u = t.structure.flags[i]
        if u.is_infinity():
            rows.append([sc(1), zi, sc(0), sc(0), sc(0)])
        else:
            rows.append([-u.value, -u.value * zi, sc(1), zi, zi * zi])
    basis = Mat(rows).nullspace()
    found = None
    for coeffs in _product(range(4), repeat=len(basis)):
        if all(c == 0 for c in coeffs):
            continue
        vec = [sc(0)] * 5
        for c, bvec in zip(coeffs, basis):
            if c:
                vec = [v + sc(c) * b for v, b in zip(vec, bvec)]
        q = Poly(vec[:2], bound=1)
        r = Poly(vec[2:], bound=2)
        if not _is_saturated(q, r, 1, 2):
            continue
        # contact at z_j must fail
        u = t.structure.flags[j]
        qv, rv = q(cfg.z[j]), r(cfg.z[j])
        if u.is_infinity():
            hits = qv.is_zero()
        else:
            hits = rv == u.value * qv
        if not hits:
            found = (q, r)
            break
    if found is None:
        return None
    margin = s_value(1, 2, {j}, w)
    return LimitCandidate(f"E-1({j + 1})", margin, margin > sc(0), None)


def fixed_component(
    h: StronglyParabolicHiggs, cfg: MarkedConfiguration, w: WeightVector
) -> str:
    """Component classification in the ``sum(w) < 1`` regime: F0 for the
    B' datum, F1 for a B datum with nonzero field and summand flags,
    NotFixed otherwise."""
    flags_split = all(
        u.is_infinity() or u.value.is_zero() for u in h.structure.flags
    )
    if h.theta.is_zero():
        return "NotFixed"
    if not flags_split:
        return "NotFixed"
    if h.bundle == BPRIME:
        return "F0"
    return "F1"


def fiber_dimension(
    p: FixedLocusPoint, cfg: MarkedConfiguration, nu: SpectrumRank2
) -> int:
    """Dimension of the fiber of the limit map over a fixed point.

    For F0 this is the dimension of the connection space on the unique
    indecomposable structure of the (-1, 2) split (the two tail
    coefficients).  For F1 the flags vary with the upper residue data pinned
    by the Higgs field: per marked point one parameter survives, the diagonal
    trace-sum cuts one dimension and the effective gauge group two more.
    """
    if nu.d != 1:
        raise HiggsError("fiber dimensions are computed at degree 1")
    if p.component == "F0":
        space = solve_connection_space(bprime_generic_representative(cfg), cfg, nu)
        if space is None:
            raise HiggsError("empty connection space over the F0 structure")
        return space.dim
    theta = p.theta_poly(cfg)
    choice = dict(p.flag_choice)
    weights = []  # coefficient of each unknown in the trace-sum constraint
    const = sc(0)
    for i in range(NPOINTS):
        zi = cfg.z[i]
        wprod = Poly([1], bound=0)
        for k in range(NPOINTS):
            if k != i:
                wprod = wprod * Poly([-cfg.z[k], 1], bound=1)
        a12 = theta(zi) / wprod(zi)
        if choice.get(i) == "upper":
            # infinite flag: the surviving unknown is the (21) residue,
            # absent from the trace sum
            const = const + nu.minus(i)
            weights.append(sc(0))
        else:
            const = const + nu.plus(i)
            weights.append(-a12)
    rank = 1 if any(not c.is_zero() for c in weights) else 0
    if rank == 0 and not const.is_zero():
        raise HiggsError("empty fiber: trace constraint is inconsistent")
    gauge = 2  # automorphism directions acting effectively on the fiber
    return NPOINTS - rank - gauge
