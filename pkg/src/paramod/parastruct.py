"""Parabolic structures on split rank-2 bundles over the five-punctured line.

A flag at a marked point is a point of the projective line: the finite value
``u`` stands for the line through ``e(z_i) + u*f(z_i)`` (``e`` spanning the
lower-degree summand, ``f`` the higher one), and ``inf`` for the fiber of the
higher-degree summand itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .exactnum import (
    INF,
    ExactError,
    Mat,
    Poly,
    ProjectivePoint,
    Scalar,
    divided_difference_weights,
    interpolate,
    sc,
)

NPOINTS = 5


class StratumError(ValueError):
    """Raised when an operation is applied to the wrong stratum or bundle."""


class MarkedConfiguration:
    """Five pairwise distinct finite real marked points on the affine line."""

    __slots__ = ("z",)

    def __init__(self, z):
        zs = tuple(sc(x) for x in z)
        if len(zs) != NPOINTS:
            raise ExactError(f"expected {NPOINTS} marked points, got {len(zs)}")
        if any(not x.is_real() for x in zs):
            raise ExactError("marked points must be real")
        if len(set(zs)) != NPOINTS:
            raise ExactError("marked points must be pairwise distinct")
        self.z = zs

    def to_json(self):
        return {"z": [str(x) for x in self.z]}

    @classmethod
    def from_json(cls, data) -> "MarkedConfiguration":
        return cls([Scalar.parse(s) for s in data["z"]])

    def __eq__(self, other):
        if not isinstance(other, MarkedConfiguration):
            return NotImplemented
        return self.z == other.z

    def __hash__(self):
        return hash(self.z)

    def __repr__(self):
        return f"MarkedConfiguration({[str(x) for x in self.z]})"


@dataclass(frozen=True)
class BundleSplitType:
    """Split type O(d0) + O(d1) with d0 <= d1."""

    d0: int
    d1: int

    def __post_init__(self):
        if self.d0 > self.d1:
            raise ExactError("split type requires d0 <= d1")

    @property
    def degree(self) -> int:
        return self.d0 + self.d1

    @property
    def name(self) -> str:
        if (self.d0, self.d1) == (0, 1):
            return "B"
        if (self.d0, self.d1) == (-1, 2):
            return "Bprime"
        return f"O({self.d0})+O({self.d1})"

    @classmethod
    def parse(cls, text: str) -> "BundleSplitType":
        t = text.strip()
        if t == "B":
            return B
        if t in ("Bprime", "B'"):
            return BPRIME
        raise ExactError(f"unknown bundle {text!r}")


B = BundleSplitType(0, 1)
BPRIME = BundleSplitType(-1, 2)

# degree bound of a section of the lower summand interpolating the flags:
# Hom(O(d0), O(d1)) has sections of degree <= d1 - d0
_SECTION_BOUND = {B: 1, BPRIME: 3}


class ParabolicStructure:
    """A choice of flag at each of the five marked points of a split bundle."""

    __slots__ = ("bundle", "flags")

    def __init__(self, bundle: BundleSplitType, flags):
        fl = []
        for u in flags:
            if isinstance(u, ProjectivePoint):
                fl.append(u)
            elif isinstance(u, str):
                fl.append(ProjectivePoint.parse(u))
            else:
                fl.append(ProjectivePoint.finite(sc(u)))
        if len(fl) != NPOINTS:
            raise ExactError(f"expected {NPOINTS} flags, got {len(fl)}")
        self.bundle = bundle
        self.flags = tuple(fl)

    def infinity_indices(self) -> tuple[int, ...]:
        return tuple(i for i, u in enumerate(self.flags) if u.is_infinity())

    def finite_indices(self) -> tuple[int, ...]:
        return tuple(i for i, u in enumerate(self.flags) if not u.is_infinity())

    def finite_values(self) -> dict[int, Scalar]:
        return {i: u.value for i, u in enumerate(self.flags) if not u.is_infinity()}

    def to_json(self):
        return {"bundle": self.bundle.name, "u": [str(u) for u in self.flags]}

    @classmethod
    def from_json(cls, data) -> "ParabolicStructure":
        return cls(
            BundleSplitType.parse(data["bundle"]),
            [ProjectivePoint.parse(s) for s in data["u"]],
        )

    def __eq__(self, other):
        if not isinstance(other, ParabolicStructure):
            return NotImplemented
        return self.bundle == other.bundle and self.flags == other.flags

    def __hash__(self):
        return hash((self.bundle, self.flags))

    def __repr__(self):
        return f"ParabolicStructure({self.bundle.name}, {[str(u) for u in self.flags]})"


@dataclass(frozen=True)
class StratumId:
    """Label of an automorphism-orbit stratum, with quotient coordinates where
    the stratum has moduli.

    Families over B: ``U2`` (all flags finite), ``Ui`` (one infinite flag),
    ``UijPrime``/``UijDoublePrime`` (two infinite flags, degenerate and generic
    halves), ``Uplus`` (three or more).  Over B' the 33 rigid orbit labels.
    """

    family: str
    indices: tuple[int, ...] = ()
    coords: tuple[Scalar, ...] | None = None
    decomposable: bool = False

    def label(self) -> str:
        idx = ",".join(str(i + 1) for i in self.indices)
        if self.family == "U2":
            return "U2" + ("-dec" if self.decomposable else "")
        if self.family == "Ui":
            return f"U({idx})" + ("-dec" if self.decomposable else "")
        if self.family == "UijPrime":
            return f"U'({idx})"
        if self.family == "UijDoublePrime":
            return f"U''({idx})"
        if self.family == "Uplus":
            return f"U+({idx})"
        if self.family == "BprimeGenericIndec":
            return "Bprime-generic-indecomposable"
        if self.family == "BprimeGenericDec":
            return "Bprime-generic-decomposable"
        if self.family == "BprimeInf":
            return f"Bprime-inf({idx})"
        raise StratumError(f"unknown family {self.family}")

    def coords_str(self) -> list[str] | None:
        if self.coords is None:
            return None
        return [str(c) for c in self.coords]


def act(
    bundle: BundleSplitType,
    params,
    structure: ParabolicStructure,
    cfg: MarkedConfiguration,
) -> ParabolicStructure:
    """Apply a bundle automorphism to the flags.

    For B the parameters are ``(a, b, c)`` acting by
    ``u -> (b*z + c + u) / a``; for B' they are ``(a, b, c, g, h)`` acting by
    ``u -> (b*z^3 + c*z^2 + g*z + h + u) / a``.  Infinite flags are fixed.
    """
    if structure.bundle != bundle:
        raise StratumError("structure lives on a different bundle")
    a, shift = act_params_shift(bundle, params)
    new_flags = []
    for zi, u in zip(cfg.z, structure.flags):
        if u.is_infinity():
            new_flags.append(INF)
        else:
            new_flags.append(ProjectivePoint.finite((shift(zi) + u.value) / a))
    return ParabolicStructure(bundle, new_flags)


def act_params_shift(bundle: BundleSplitType, params) -> tuple[Scalar, Poly]:
    """Normalize automorphism parameters to ``(a, shift polynomial)``.

    B: params ``(a, b, c)``, shift ``b*z + c``.  B': ``(a, b, c, g, h)``,
    shift ``b*z^3 + c*z^2 + g*z + h``.  A finite flag moves by
    ``u -> (shift(z_i) + u) / a``; infinite flags are fixed.
    """
    ps = [sc(p) for p in params]
    if bundle == B:
        if len(ps) != 3:
            raise ExactError("B automorphism takes (a, b, c)")
        a, b, c = ps
        shift = Poly([c, b])
    elif bundle == BPRIME:
        if len(ps) != 5:
            raise ExactError("B' automorphism takes (a, b, c, g, h)")
        a, b, c, g, h = ps
        shift = Poly([h, g, c, b])
    else:
        raise StratumError("action defined for B and B' only")
    if a.is_zero():
        raise ExactError("automorphism scale a must be nonzero")
    return a, shift


def is_decomposable(
    structure: ParabolicStructure, cfg: MarkedConfiguration
) -> tuple[bool, Poly | None]:
    """Decide decomposability; the witness is the section of the lower summand
    through all finite flags (infinite flags sit on the higher summand).

    For B the witness is a polynomial of degree <= 1, for B' degree <= 3.
    Returns ``(True, witness)`` or ``(False, None)``.
    """
    bound = _SECTION_BOUND.get(structure.bundle)
    if bound is None:
        raise StratumError("decomposability implemented for B and B' only")
    pts = [(cfg.z[i], u) for i, u in structure.finite_values().items()]
    witness = interpolate(pts, bound)
    if witness is None:
        return False, None
    return True, witness


def quotient_coords(
    structure: ParabolicStructure, cfg: MarkedConfiguration
) -> tuple[Scalar, ...]:
    """Action-invariant projective coordinates of an all-finite or one-infinity
    B-structure.

    All finite: ``[L(1) : L(z) : L(z^2)]`` with
    ``L(p) = sum_i u_i p(z_i) / prod_{j != i}(z_i - z_j)``; the divided
    difference identity makes the tuple invariant up to the scale ``1/a``.
    One infinite flag: the analogous degree-1 functional over the four finite
    flags.  The tuple vanishes identically exactly on decomposable structures,
    which are rejected.
    """
    if structure.bundle != B:
        raise StratumError("quotient coordinates live on B strata")
    inf_idx = structure.infinity_indices()
    vals = structure.finite_values()
    if len(inf_idx) == 0:
        nodes = list(cfg.z)
        us = [vals[i] for i in range(NPOINTS)]
        npow = 3
    elif len(inf_idx) == 1:
        keep = [i for i in range(NPOINTS) if i != inf_idx[0]]
        nodes = [cfg.z[i] for i in keep]
        us = [vals[i] for i in keep]
        npow = 2
    else:
        raise StratumError("quotient coordinates require at most one infinite flag")
    w = divided_difference_weights(nodes)
    coords = tuple(
        sum((u * (z**k) * wi for u, z, wi in zip(us, nodes, w)), sc(0))
        for k in range(npow)
    )
    if all(c.is_zero() for c in coords):
        raise StratumError("decomposable structure has no quotient coordinates")
    return coords


def _normalize_projective(coords) -> tuple[Scalar, ...]:
    for c in coords:
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in coords)
    raise ExactError("zero tuple is not projective")


def classify(structure: ParabolicStructure, cfg: MarkedConfiguration) -> StratumId:
    """Stratum/orbit label of a parabolic structure on B or B'."""
    dec, _ = is_decomposable(structure, cfg)
    inf_idx = structure.infinity_indices()
    n_inf = len(inf_idx)
    if structure.bundle == B:
        if n_inf == 0:
            coords = None if dec else _normalize_projective(quotient_coords(structure, cfg))
            return StratumId("U2", (), coords, dec)
        if n_inf == 1:
            coords = None if dec else _normalize_projective(quotient_coords(structure, cfg))
            return StratumId("Ui", inf_idx, coords, dec)
        if n_inf == 2:
            # U' and U'' split by collinearity of the three finite flags
            family = "UijPrime" if dec else "UijDoublePrime"
            return StratumId(family, inf_idx, None, dec)
        return StratumId("Uplus", inf_idx, None, True)
    if structure.bundle == BPRIME:
        if n_inf == 0:
            if dec:
                return StratumId("BprimeGenericDec", (), None, True)
            return StratumId("BprimeGenericIndec", (), None, False)
        return StratumId("BprimeInf", inf_idx, None, True)
    raise StratumError("classification defined for B and B' only")


def uij_split_invariant(
    structure: ParabolicStructure, cfg: MarkedConfiguration
) -> Scalar:
    """The U'/U'' separating quantity for a two-infinity B-structure.

    With finite indices k < l < m this is
    ``(u_k - u_l)(z_m - z_k)/(z_k - z_l) + (u_k - u_m)``; it vanishes exactly
    on the degenerate (collinear, hence decomposable) half U'.
    """
    if len(structure.infinity_indices()) != 2:
        raise StratumError("invariant defined for two infinite flags")
    k, l, m = structure.finite_indices()
    vals = structure.finite_values()
    uk, ul, um = vals[k], vals[l], vals[m]
    zk, zl, zm = cfg.z[k], cfg.z[l], cfg.z[m]
    return (uk - ul) * (zm - zk) / (zk - zl) + (uk - um)


def find_automorphism(
    s1: ParabolicStructure, s2: ParabolicStructure, cfg: MarkedConfiguration
):
    """Explicit automorphism parameters carrying s1 to s2, or None.

    Solves the linear action equations exactly: ``shift(z_i) - a*u'_i = -u_i``
    at the finite flags, after matching the infinity patterns.
    """
    if s1.bundle != s2.bundle:
        raise StratumError("structures live on different bundles")
    bundle = s1.bundle
    if bundle not in (B, BPRIME):
        raise StratumError("orbit search defined for B and B' only")
    if s1.infinity_indices() != s2.infinity_indices():
        return None
    shift_deg = _SECTION_BOUND[bundle]
    v1, v2 = s1.finite_values(), s2.finite_values()
    # unknowns: shift coefficients (low to high) then a
    rows, rhs = [], []
    for i in v1:
        zi = cfg.z[i]
        rows.append([zi**k for k in range(shift_deg + 1)] + [-v2[i]])
        rhs.append(-v1[i])
    if not rows:
        return _identity_params(bundle)
    sol = Mat(rows).solve_affine(rhs)
    if sol is None:
        return None
    particular, basis = sol
    a_col = shift_deg + 1
    candidate = None
    if not particular[a_col].is_zero():
        candidate = particular
    else:
        for vec in basis:
            if not vec[a_col].is_zero():
                candidate = [p + v for p, v in zip(particular, vec)]
                break
    if candidate is None:
        return None
    a = candidate[a_col]
    shift = candidate[:a_col]
    if bundle == B:
        return (a, shift[1], shift[0])
    return (a, shift[3], shift[2], shift[1], shift[0])


def _identity_params(bundle: BundleSplitType):
    return (sc(1), sc(0), sc(0)) if bundle == B else (sc(1), sc(0), sc(0), sc(0), sc(0))


def orbit_equal(
    s1: ParabolicStructure, s2: ParabolicStructure, cfg: MarkedConfiguration
) -> bool:
    """True when the two structures lie on the same automorphism orbit."""
    if s1.bundle != s2.bundle:
        raise StratumError("structures live on different bundles")
    c1, c2 = classify(s1, cfg), classify(s2, cfg)
    if (c1.family, c1.indices, c1.decomposable) != (c2.family, c2.indices, c2.decomposable):
        return False
    if c1.coords is not None:
        return c1.coords == c2.coords
    # rigid strata: the residual finite cases; decide by solving the action
    # equations explicitly
    return find_automorphism(s1, s2, cfg) is not None


def stabilizer_dim(structure: ParabolicStructure, cfg: MarkedConfiguration) -> int:
    """Dimension of the stabilizer of the flags in the automorphism group,
    scalars included (so the answer is at least 1).

    For a strictly split bundle the automorphisms are triangular with a shift
    of degree ``d1 - d0``; for an even split they are all of GL2, acting on
    the flags by Moebius transformations.
    """
    bundle = structure.bundle
    if bundle.d0 == bundle.d1:
        distinct = len(set(structure.flags))
        return 1 + max(0, 3 - distinct)
    shift_deg = bundle.d1 - bundle.d0
    vals = structure.finite_values()
    # fixed-flag equations: shift(z_i) = (a - 1) u_i, unknowns (shift, a - 1)
    rows = []
    for i in vals:
        zi = cfg.z[i]
        rows.append([zi**k for k in range(shift_deg + 1)] + [-vals[i]])
    ncols = shift_deg + 2
    if not rows:
        return 1 + ncols  # every parameter direction fixes the flags
    m = Mat(rows)
    return 1 + (ncols - m.rank())


def is_simple(structure: ParabolicStructure, cfg: MarkedConfiguration) -> bool:
    """True when only scalar automorphisms preserve every flag."""
    return stabilizer_dim(structure, cfg) == 1


def stabilizer_witness(structure: ParabolicStructure, cfg: MarkedConfiguration):
    """A non-scalar automorphism fixing the flags, or None if simple."""
    bundle = structure.bundle
    shift_deg = _SECTION_BOUND[bundle]
    vals = structure.finite_values()
    ncols = shift_deg + 2
    rows = []
    for i in vals:
        zi = cfg.z[i]
        rows.append([zi**k for k in range(shift_deg + 1)] + [-vals[i]])
    if rows:
        basis = Mat(rows).nullspace()
    else:
        basis = [
            [sc(1) if j == k else sc(0) for j in range(ncols)] for k in range(ncols)
        ]
    for vec in basis:
        alpha = vec[ncols - 1]
        a = sc(1) + alpha
        if a.is_zero():
            vec = [sc(2) * x for x in vec]
            alpha = vec[ncols - 1]
            a = sc(1) + alpha
        shift = vec[: ncols - 1]
        if bundle == B:
            return (a, shift[1], shift[0])
        return (a, shift[3], shift[2], shift[1], shift[0])
    return None


def bprime_generic_representative(cfg: MarkedConfiguration) -> ParabolicStructure:
    """The canonical indecomposable B'-structure ``u_i = z_i^4``."""
    return ParabolicStructure(BPRIME, [zi**4 for zi in cfg.z])


def all_bprime_orbit_labels(cfg: MarkedConfiguration) -> list[str]:
    """Labels of all 33 B'-orbits via explicit representatives."""
    labels = []
    labels.append(classify(bprime_generic_representative(cfg), cfg).label())
    labels.append(
        classify(ParabolicStructure(BPRIME, [0, 0, 0, 0, 0]), cfg).label()
    )
    for size in range(1, NPOINTS + 1):
        for pattern in combinations(range(NPOINTS), size):
            flags = [INF if i in pattern else ProjectivePoint.finite(0) for i in range(NPOINTS)]
            labels.append(classify(ParabolicStructure(BPRIME, flags), cfg).label())
    return labels
