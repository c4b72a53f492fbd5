"""Weighted stability of parabolic structures on B and B'.

The decision procedure enumerates, degree by degree, every inclusion-maximal
contact set achievable by an actual saturated line subbundle, with an explicit
witness pair ``(q, r)`` found by exact linear algebra.  The closed-form
criteria of the three case analyses (full-contact determinant, the unique
higher-degree factor, maximal collinear subsets) fall out as special cases and
serve as the independent test oracle, not as the decision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .exactnum import ExactError, Mat, Poly, Scalar, sc
from .parastruct import (
    B,
    BPRIME,
    NPOINTS,
    BundleSplitType,
    MarkedConfiguration,
    ParabolicStructure,
    StratumError,
    StratumId,
)


class OnWallError(ValueError):
    """A stability margin vanished: the weight sits on a wall."""


class WeightVector:
    """Five rational weights in [0, 1)."""

    __slots__ = ("w",)

    def __init__(self, w):
        ws = tuple(sc(x) for x in w)
        if len(ws) != NPOINTS:
            raise ExactError(f"expected {NPOINTS} weights")
        for x in ws:
            if not x.is_real():
                raise ExactError("weights must be real")
            if x < sc(0) or x >= sc(1):
                raise ExactError(f"weight {x} outside [0, 1)")
        self.w = ws

    @classmethod
    def uniform(cls, value) -> "WeightVector":
        return cls([value] * NPOINTS)

    def total(self) -> Scalar:
        return sum(self.w, sc(0))

    def is_non_resonant(self) -> bool:
        return all(x > sc(0) for x in self.w)

    def to_json(self):
        return {"w": [str(x) for x in self.w]}

    @classmethod
    def from_json(cls, data) -> "WeightVector":
        return cls([Scalar.parse(s) for s in data["w"]])

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.w == other.w

    def __hash__(self):
        return hash(self.w)

    def __repr__(self):
        return f"WeightVector({[str(x) for x in self.w]})"


def weight_is_kostov_generic(w: WeightVector, d: int) -> bool:
    """No sign pattern makes ``(d + sum eps_i w_i) / 2`` an integer."""
    for eps in product((1, -1), repeat=NPOINTS):
        total = sum((sc(e) * x for e, x in zip(eps, w.w)), sc(d))
        if (total / 2).is_integer():
            return False
    return True


def weight_is_non_special(w: WeightVector, d: int) -> bool:
    return w.is_non_resonant() and weight_is_kostov_generic(w, d)


def s_value(d: int, deg_f: int, contact, w: WeightVector) -> Scalar:
    """Stability margin ``d - 2 deg F + sum_{off} w_i - sum_{on} w_i``."""
    contact = set(contact)
    total = sc(d - 2 * deg_f)
    for i, wi in enumerate(w.w):
        total = total - wi if i in contact else total + wi
    return total


@dataclass(frozen=True)
class LineSubbundleWitness:
    """A saturated line subbundle of the split bundle.

    The embedding is ``(q, r)`` with formal degree bounds determined by the
    bundle and the subbundle degree; ``q`` or ``r`` is None when the relevant
    Hom space is zero.  ``contact`` lists the marked points where the image
    fiber equals the flag.
    """

    degree: int
    q: Poly | None
    r: Poly | None
    contact: frozenset[int]

    def fiber_at(self, z) -> tuple[Scalar, Scalar]:
        qv = self.q(z) if self.q is not None else sc(0)
        rv = self.r(z) if self.r is not None else sc(0)
        return qv, rv


def formal_resultant(q_coeffs, dq: int, r_coeffs, dr: int) -> Scalar:
    """Resultant of q and r at formal degrees (dq, dr).

    Vanishes exactly when the degree-(dq, dr) homogenizations share a
    projective root; a root "at infinity" appears when both top coefficients
    vanish, which is how saturation failure at the last chart is detected.
    """
    if dq < 0 or dr < 0:
        raise ExactError("formal degrees must be nonnegative")
    n = dq + dr
    if n == 0:
        return sc(1)
    qs = [q_coeffs[k] if k < len(q_coeffs) else sc(0) for k in range(dq + 1)]
    rs = [r_coeffs[k] if k < len(r_coeffs) else sc(0) for k in range(dr + 1)]
    rows = []
    for shift in range(dr):
        row = [sc(0)] * n
        for k in range(dq + 1):
            row[shift + k] = qs[dq - k]
        rows.append(row)
    for shift in range(dq):
        row = [sc(0)] * n
        for k in range(dr + 1):
            row[shift + k] = rs[dr - k]
        rows.append(row)
    return Mat(rows).det()


def _hom_degrees(bundle: BundleSplitType, k: int) -> tuple[int, int]:
    # formal degree bounds of (q, r) for a map O(k) -> O(d0) + O(d1)
    return bundle.d0 - k, bundle.d1 - k


def _witness_from_vector(vec, dq, dr) -> tuple[Poly | None, Poly | None]:
    nq = dq + 1 if dq >= 0 else 0
    q = Poly(vec[:nq], bound=dq) if dq >= 0 else None
    r = Poly(vec[nq:], bound=dr) if dr >= 0 else None
    return q, r


def _is_saturated(q: Poly | None, r: Poly | None, dq: int, dr: int) -> bool:
    if dq < 0:
        return r is not None and dr == 0 and not r.is_zero()
    if dr < 0:
        return q is not None and dq == 0 and not q.is_zero()
    if q.is_zero() and r.is_zero():
        return False
    res = formal_resultant(list(q.coeffs), dq, list(r.coeffs), dr)
    return not res.is_zero()


def _contact_of(
    q: Poly | None, r: Poly | None, structure: ParabolicStructure, cfg
) -> frozenset[int]:
    out = set()
    for i, u in enumerate(structure.flags):
        qv = q(cfg.z[i]) if q is not None else sc(0)
        rv = r(cfg.z[i]) if r is not None else sc(0)
        if u.is_infinity():
            if qv.is_zero():
                out.add(i)
        else:
            if rv == u.value * qv and not (qv.is_zero() and rv.is_zero()):
                out.add(i)
    return frozenset(out)


def _find_saturated(basis, dq: int, dr: int):
    """A saturated member of the span, or None (certified by grid exhaustion).

    The saturation locus is cut out by the formal resultant, a polynomial of
    total degree <= dq + dr in the span coordinates, so by the finite-grid
    Schwartz-Zippel lemma a full search over {0..dq+dr}^m is conclusive.
    """
    m = len(basis)
    if m == 0:
        return None
    ncols = len(basis[0])
    width = max(dq, 0) + max(dr, 0) + 1
    for coeffs in product(range(width), repeat=m):
        if all(c == 0 for c in coeffs):
            continue
        vec = [sc(0)] * ncols
        for c, bvec in zip(coeffs, basis):
            if c:
                vec = [v + sc(c) * b for v, b in zip(vec, bvec)]
        q, r = _witness_from_vector(vec, dq, dr)
        if _is_saturated(q, r, dq, dr):
            return q, r
    return None


def _candidate_degrees(bundle: BundleSplitType) -> list[int]:
    if bundle == B:
        return [1, 0, -1]
    if bundle == BPRIME:
        return [2, -1]
    raise StratumError("stability enumeration defined for B and B' only")


def destabilizing_candidates(
    structure: ParabolicStructure, cfg: MarkedConfiguration
) -> list[LineSubbundleWitness]:
    """Every inclusion-maximal contact set of a saturated line subbundle, per
    relevant degree, with explicit witnesses.

    Lower degrees than the returned ones satisfy
    ``s >= 5 - sum(w) > 0`` for every admissible weight and are omitted.
    """
    out = []
    for k in _candidate_degrees(structure.bundle):
        out.extend(_candidates_at_degree(structure, cfg, k))
    return out


def _b_degree_zero_candidates(structure, cfg) -> list[LineSubbundleWitness]:
    """Degree-0 subbundles of B: sections ``(1, r)`` with r of degree <= 1.

    The inclusion-maximal contact sets are the maximal collinear subsets of
    the finite flags, each found from the line through one of its pairs.
    """
    fin = structure.finite_indices()
    vals = structure.finite_values()
    if len(fin) <= 1:
        r = Poly([vals[fin[0]]], bound=1) if fin else Poly.zero(1)
        return [
            LineSubbundleWitness(0, Poly([1], bound=0), r, frozenset(fin))
        ]
    contacts: dict[frozenset, Poly] = {}
    for i, j in combinations(fin, 2):
        zi, zj = cfg.z[i], cfg.z[j]
        slope = (vals[j] - vals[i]) / (zj - zi)
        r = Poly([vals[i] - slope * zi, slope], bound=1)
        hit = frozenset(k for k in fin if r(cfg.z[k]) == vals[k])
        contacts.setdefault(hit, r)
    maximal = [
        (hit, r)
        for hit, r in contacts.items()
        if not any(hit < other for other in contacts)
    ]
    return [
        LineSubbundleWitness(0, Poly([1], bound=0), r, hit) for hit, r in maximal
    ]


def _candidates_at_degree(structure, cfg, k) -> list[LineSubbundleWitness]:
    if structure.bundle == B and k == 0:
        return _b_degree_zero_candidates(structure, cfg)
    dq, dr = _hom_degrees(structure.bundle, k)
    if dq < 0:
        # the section lives in the higher summand: its saturation is the
        # canonical factor, contacting exactly the infinite flags
        if dr != 0:
            return []
        r = Poly([1], bound=0)
        contact = frozenset(structure.infinity_indices())
        return [LineSubbundleWitness(k, None, r, contact)]
    nq, nr = dq + 1, dr + 1
    ncols = nq + nr

    def contact_row(i):
        zi = cfg.z[i]
        u = structure.flags[i]
        if u.is_infinity():
            return [zi**p for p in range(nq)] + [sc(0)] * nr
        return [-u.value * zi**p for p in range(nq)] + [zi**p for p in range(nr)]

    contactable = [
        i
        for i in range(NPOINTS)
        if not structure.flags[i].is_infinity() or dq >= 1
    ]
    maximal: list[tuple[frozenset, LineSubbundleWitness]] = []
    for size in range(len(contactable), -1, -1):
        for T in combinations(contactable, size):
            tset = frozenset(T)
            if any(tset <= m for m, _ in maximal):
                continue
            rows = [contact_row(i) for i in T]
            if rows:
                basis = Mat(rows).nullspace()
            else:
                basis = [
                    [sc(1) if j == c else sc(0) for j in range(ncols)]
                    for c in range(ncols)
                ]
            if not basis:
                continue
            found = _find_saturated(basis, dq, dr)
            if found is None:
                continue
            q, r = found
            contact = _contact_of(q, r, structure, cfg)
            if not any(contact <= m for m, _ in maximal):
                maximal.append((contact, LineSubbundleWitness(k, q, r, contact)))
    return [w for _, w in maximal]


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    worst: LineSubbundleWitness
    margin: Scalar

    def to_json(self):
        return {
            "stable": self.stable,
            "worst": {
                "deg": self.worst.degree,
                "contact": sorted(i + 1 for i in self.worst.contact),
                "margin": str(self.margin),
            },
        }


def is_stable(
    structure: ParabolicStructure,
    cfg: MarkedConfiguration,
    w: WeightVector,
    require_non_special: bool = True,
    quick: bool = False,
) -> StabilityReport:
    """Exact stability decision with the minimizing witness and margin.

    Raises OnWallError when some candidate margin vanishes (the weight is
    special for this structure).  With ``quick`` the first negative margin
    short-circuits the remaining degrees: the verdict is unchanged but the
    reported witness need not be the global minimizer.
    """
    if require_non_special and not weight_is_non_special(w, structure.bundle.degree):
        raise OnWallError("weight is not non-special")
    worst = None
    worst_s = None
    for k in _candidate_degrees(structure.bundle):
        for cand in _candidates_at_degree(structure, cfg, k):
            s = s_value(structure.bundle.degree, cand.degree, cand.contact, w)
            if s.is_zero():
                raise OnWallError(
                    f"margin vanishes on degree {cand.degree} "
                    f"contact {sorted(cand.contact)}"
                )
            if worst_s is None or s < worst_s:
                worst, worst_s = cand, s
        if quick and worst_s is not None and worst_s < sc(0):
            return StabilityReport(False, worst, worst_s)
    if worst is None:
        raise StratumError("no candidates found; bundle unsupported")
    return StabilityReport(worst_s > sc(0), worst, worst_s)


def stabilizing_weight(stratum: StratumId) -> WeightVector:
    """The witness chamber center stabilizing every indecomposable structure
    of the stratum: uniform 4/15 for U2, uniform 7/15 for Ui, and the
    11/15-pattern with 4/15 at the second infinite index for Uij."""
    if stratum.decomposable:
        raise StratumError("no stabilizing weight for decomposable strata")
    if stratum.family == "U2":
        return WeightVector.uniform(Scalar.rational(4, 15))
    if stratum.family == "Ui":
        return WeightVector.uniform(Scalar.rational(7, 15))
    if stratum.family in ("UijDoublePrime", "BprimeGenericIndec"):
        j = stratum.indices[1] if stratum.indices else 1
        w = [Scalar.rational(11, 15)] * NPOINTS
        w[j] = Scalar.rational(4, 15)
        return WeightVector(w)
    raise StratumError(f"no stabilizing weight for stratum {stratum.label()}")


def no_stable_structure(w: WeightVector, bundle: BundleSplitType) -> bool:
    """The closed-form emptiness conditions: when one of them holds, no
    parabolic structure on the bundle is w-stable."""
    total = w.total()
    if bundle == B:
        if total < sc(1):
            return True
        for j in range(NPOINTS):
            if total - 2 * w.w[j] > sc(3):
                return True
        for i, j in combinations(range(NPOINTS), 2):
            if 2 * (w.w[i] + w.w[j]) - total > sc(1):
                return True
        return False
    if bundle == BPRIME:
        if total < sc(3):
            return True
        for j in range(NPOINTS):
            if total - 2 * w.w[j] > sc(3):
                return True
        return False
    raise StratumError("emptiness conditions defined for B and B' only")


@dataclass(frozen=True)
class ChamberDescriptor:
    """The strict side of every integrality wall, recorded as readable
    inequalities ``eps1..eps5 : sum eps*w <s> M``."""

    d: int
    inequalities: tuple[str, ...]

    def to_json(self):
        return {"d": self.d, "inequalities": list(self.inequalities)}


def chamber_classify(w: WeightVector, d: int) -> ChamberDescriptor:
    """Record the side of every wall ``sum eps_i w_i = 2m - d``; error when a
    functional vanishes (the weight lies on a wall)."""
    ineqs = []
    for eps in product((1, -1), repeat=NPOINTS):
        total = sum((sc(e) * x for e, x in zip(eps, w.w)), sc(0))
        for m2 in range(-5, 6):
            if (m2 - d) % 2 != 0:
                continue
            diff = total - sc(m2)
            if diff.is_zero():
                raise OnWallError(
                    f"wall {''.join('+' if e > 0 else '-' for e in eps)} = {m2}"
                )
            side = "<" if diff < sc(0) else ">"
            ineqs.append(
                f"{''.join('+' if e > 0 else '-' for e in eps)} {side} {m2}"
            )
    return ChamberDescriptor(d, tuple(ineqs))
