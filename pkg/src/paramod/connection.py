"""Explicit logarithmic connections on split bundles over the affine chart.

A connection is ``d + sum_i A_i/(z - z_i) dz + G(z) dz`` in the split frame;
holomorphy at infinity pins the diagonal residue sums to minus the summand
degrees and bounds the degrees of the cleared off-diagonal numerators
``N12 = sum A12_i prod_{j != i}(z - z_j)`` (by ``3 + d0 - d1``) and
``N21 + G21 * prod (z - z_j)`` (by ``3 + d1 - d0``).  Only the (21) entry of
``G`` can be nonzero, a polynomial tail of degree at most ``d1 - d0 - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .exactnum import ExactError, Poly, ProjectivePoint, Scalar, monic_from_roots, sc
from .parastruct import (
    NPOINTS,
    BundleSplitType,
    MarkedConfiguration,
    ParabolicStructure,
    stabilizer_dim,
)
from .spectra import SpectrumRank2, elm_spectrum


class ConnectionError(ValueError):
    """Raised on malformed connection data."""


@dataclass(frozen=True)
class DegreeBounds:
    """Subbundle-degree window and admissible splits of an irreducible
    degree-d logarithmic flat bundle: ``lo <= deg F <= hi`` and the splits
    ``(d0, d1)`` with ``d1 - d0 <= 3``."""

    lo: int
    hi: int
    splits: tuple[BundleSplitType, ...]


def degree_bounds(d: int) -> DegreeBounds:
    hi = (d + 3) // 2
    lo = d - hi
    splits = []
    for d0 in range(lo, d // 2 + 1):
        d1 = d - d0
        if d0 <= d1 and d1 - d0 <= 3:
            splits.append(BundleSplitType(d0, d1))
    return DegreeBounds(lo, hi, tuple(splits))


class RationalEntry:
    """One matrix entry of a connection: simple poles at the marked points
    plus a polynomial tail.  Supports the exact frame-change algebra used by
    elementary transformations and gauge conjugation."""

    __slots__ = ("cfg", "residues", "tail")

    def __init__(self, cfg: MarkedConfiguration, residues, tail: Poly | None = None):
        self.cfg = cfg
        self.residues = tuple(sc(r) for r in residues)
        if len(self.residues) != NPOINTS:
            raise ExactError("one residue per marked point")
        self.tail = tail if tail is not None else Poly.zero(-1)

    @classmethod
    def zero(cls, cfg) -> "RationalEntry":
        return cls(cfg, [0] * NPOINTS)

    def __add__(self, other: "RationalEntry") -> "RationalEntry":
        return RationalEntry(
            self.cfg,
            [a + b for a, b in zip(self.residues, other.residues)],
            self.tail + other.tail,
        )

    def __sub__(self, other: "RationalEntry") -> "RationalEntry":
        return RationalEntry(
            self.cfg,
            [a - b for a, b in zip(self.residues, other.residues)],
            self.tail - other.tail,
        )

    def __neg__(self) -> "RationalEntry":
        return RationalEntry(self.cfg, [-a for a in self.residues], -self.tail)

    def scale(self, c) -> "RationalEntry":
        c = sc(c)
        return RationalEntry(self.cfg, [c * a for a in self.residues], c * self.tail)

    def add_pole(self, j: int, amount=1) -> "RationalEntry":
        res = list(self.residues)
        res[j] = res[j] + sc(amount)
        return RationalEntry(self.cfg, res, self.tail)

    def mul_poly(self, p: Poly) -> "RationalEntry":
        """Multiply by a polynomial: residues scale by p(z_i) and the
        regular part of ``r_i (p(z) - p(z_i))/(z - z_i)`` joins the tail."""
        zs = self.cfg.z
        res = [r * p(zi) for r, zi in zip(self.residues, zs)]
        tail = self.tail * p
        for r, zi in zip(self.residues, zs):
            if r.is_zero():
                continue
            quot, rem = _divide_linear(p, zi)
            if not rem == p(zi):
                raise ConnectionError("polynomial division inconsistency")
            tail = tail + r * quot
        return RationalEntry(self.cfg, res, tail)

    def div_root(self, j: int) -> "RationalEntry":
        """Divide by ``(z - z_j)``; requires the residue at z_j to vanish
        (otherwise the quotient would carry a double pole)."""
        zs = self.cfg.z
        if not self.residues[j].is_zero():
            raise ConnectionError("division would create a double pole")
        res = [sc(0)] * NPOINTS
        at_j = self.tail(zs[j])
        for i in range(NPOINTS):
            if i == j or self.residues[i].is_zero():
                continue
            res[i] = self.residues[i] / (zs[i] - zs[j])
            at_j = at_j - res[i]
        res[j] = at_j
        quot, _ = _divide_linear(self.tail, zs[j])
        return RationalEntry(self.cfg, res, quot)

    def residue_sum(self) -> Scalar:
        return sum(self.residues, sc(0))

    def cleared_numerator(self) -> Poly:
        """``entry * prod (z - z_j)`` as a polynomial."""
        zs = self.cfg.z
        total = self.tail * monic_from_roots(zs)
        for i, r in enumerate(self.residues):
            if r.is_zero():
                continue
            total = total + r * monic_from_roots([zs[k] for k in range(NPOINTS) if k != i])
        return total

    def __eq__(self, other):
        if not isinstance(other, RationalEntry):
            return NotImplemented
        return (
            self.cfg == other.cfg
            and self.residues == other.residues
            and self.tail == other.tail
        )


def _divide_linear(p: Poly, a: Scalar) -> tuple[Poly, Scalar]:
    """Synthetic division ``p = (z - a) q + rem``."""
    d = p.degree()
    if d < 0:
        return Poly.zero(-1), sc(0)
    out = [sc(0)] * d
    carry = sc(0)
    for k in range(d, -1, -1):
        carry = p.coeff(k) + carry * a
        if k > 0:
            out[k - 1] = carry
    return Poly(out, bound=max(d - 1, -1)), carry


class LogConnection:
    """Residue matrices at the five marked points plus the (21) tail."""

    __slots__ = ("bundle", "residues", "tail")

    def __init__(self, bundle: BundleSplitType, residues, tail: Poly | None = None):
        self.bundle = bundle
        mats = []
        for m in residues:
            ((a11, a12), (a21, a22)) = m
            mats.append(((sc(a11), sc(a12)), (sc(a21), sc(a22))))
        if len(mats) != NPOINTS:
            raise ExactError("one residue matrix per marked point")
        self.residues = tuple(mats)
        max_tail = bundle.d1 - bundle.d0 - 2
        if tail is None:
            tail = Poly.zero(max(max_tail, -1))
        if tail.degree() > max(max_tail, -1):
            raise ConnectionError(
                f"tail degree {tail.degree()} exceeds bound {max_tail}"
            )
        self.tail = Poly(
            list(tail.coeffs[: max(max_tail + 1, 0)]), bound=max(max_tail, -1)
        )

    def entry(self, r: int, c: int, cfg: MarkedConfiguration) -> RationalEntry:
        res = [self.residues[i][r][c] for i in range(NPOINTS)]
        tail = self.tail if (r, c) == (1, 0) else Poly.zero(-1)
        return RationalEntry(cfg, res, tail)

    def a(self, i: int, r: int, c: int) -> Scalar:
        return self.residues[i][r][c]

    def offdiag_upper(self, cfg) -> Poly:
        """Cleared (12) numerator; degree <= 3 + d0 - d1 for a valid
        connection."""
        return self.entry(0, 1, cfg).cleared_numerator()

    def offdiag_lower(self, cfg) -> Poly:
        return self.entry(1, 0, cfg).cleared_numerator()

    def to_json(self):
        return {
            "A": [
                [[str(m[0][0]), str(m[0][1])], [str(m[1][0]), str(m[1][1])]]
                for m in self.residues
            ],
            "G21": [str(c) for c in self.tail.coeffs],
            "bundle": self.bundle.name,
        }

    @classmethod
    def from_json(cls, data) -> "LogConnection":
        bundle = BundleSplitType.parse(data["bundle"])
        residues = [
            ((Scalar.parse(m[0][0]), Scalar.parse(m[0][1])),
             (Scalar.parse(m[1][0]), Scalar.parse(m[1][1])))
            for m in data["A"]
        ]
        coeffs = [Scalar.parse(s) for s in data.get("G21", [])]
        tail = Poly(coeffs, bound=max(bundle.d1 - bundle.d0 - 2, -1)) if coeffs else None
        return cls(bundle, residues, tail)

    def __eq__(self, other):
        if not isinstance(other, LogConnection):
            return NotImplemented
        return (
            self.bundle == other.bundle
            and self.residues == other.residues
            and self.tail == other.tail
        )


@dataclass(frozen=True)
class FlatTriple:
    """A parabolic structure, a residue spectrum and a compatible connection
    over a fixed marked configuration."""

    structure: ParabolicStructure
    spectrum: SpectrumRank2
    connection: LogConnection
    cfg: MarkedConfiguration

    def to_json(self):
        return {
            "structure": self.structure.to_json(),
            "spectrum": self.spectrum.to_json(),
            "connection": self.connection.to_json(),
            "cfg": self.cfg.to_json(),
        }


def _flag_vector(u: ProjectivePoint) -> tuple[Scalar, Scalar]:
    return (u.kappa, u.lam)


def validate_triple(t: FlatTriple) -> tuple[bool, list[str]]:
    """Exact check of every invariant: residue characteristic polynomials,
    flag eigenlines, diagonal sums, off-diagonal numerator degree bounds and
    the tail bound.  Returns (ok, violations)."""
    v: list[str] = []
    bundle = t.connection.bundle
    d0, d1 = bundle.d0, bundle.d1
    if t.structure.bundle != bundle:
        v.append("structure and connection bundles differ")
    if t.spectrum.d != d0 + d1:
        v.append(f"spectrum degree {t.spectrum.d} != bundle degree {d0 + d1}")
    for i in range(NPOINTS):
        ((a11, a12), (a21, a22)) = t.connection.residues[i]
        p, m = t.spectrum.nu[i]
        if a11 + a22 != p + m:
            v.append(f"trace at point {i + 1} is not nu+ + nu-")
        if a11 * a22 - a12 * a21 != p * m:
            v.append(f"determinant at point {i + 1} is not nu+ * nu-")
        k, l = _flag_vector(t.structure.flags[i])
        if (a11 * k + a12 * l != p * k) or (a21 * k + a22 * l != p * l):
            v.append(f"flag at point {i + 1} is not a nu+ eigenline")
    e11 = t.connection.entry(0, 0, t.cfg)
    e22 = t.connection.entry(1, 1, t.cfg)
    if e11.residue_sum() != sc(-d0):
        v.append(f"sum of A11 residues is {e11.residue_sum()}, expected {-d0}")
    if e22.residue_sum() != sc(-d1):
        v.append(f"sum of A22 residues is {e22.residue_sum()}, expected {-d1}")
    n12 = t.connection.offdiag_upper(t.cfg)
    if n12.degree() > 3 + d0 - d1:
        v.append(
            f"(12) numerator degree {n12.degree()} exceeds {3 + d0 - d1}"
        )
    n21 = t.connection.offdiag_lower(t.cfg)
    if n21.degree() > 3 + d1 - d0:
        v.append(
            f"(21) numerator degree {n21.degree()} exceeds {3 + d1 - d0}"
        )
    return (not v, v)


class _Affine:
    """Affine-linear expression in the solver unknowns."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const, coeffs):
        self.const = sc(const)
        self.coeffs = list(coeffs)

    @classmethod
    def constant(cls, c, n):
        return cls(c, [sc(0)] * n)

    @classmethod
    def unknown(cls, k, n, scale=1):
        coeffs = [sc(0)] * n
        coeffs[k] = sc(scale)
        return cls(0, coeffs)

    def __add__(self, other):
        return _Affine(
            self.const + other.const,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __sub__(self, other):
        return _Affine(
            self.const - other.const,
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def scale(self, c):
        c = sc(c)
        return _Affine(c * self.const, [c * a for a in self.coeffs])

    def at(self, values) -> Scalar:
        return sum((c * x for c, x in zip(self.coeffs, values)), self.const)


class ConnectionSpace:
    """Affine parameterization of every connection making the inputs a flat
    triple.

    ``dim`` is the honest affine dimension.  ``dim_before_gauge`` counts the
    residue parameters modulo only the diagonal trace-sum constraints (the
    count appearing in the fiber-dimension proof), and ``dim_mod_gauge``
    subtracts the positive-dimensional part of the flag stabilizer from the
    honest dimension; for structures with scalar stabilizer the two gauge
    numbers bracket the same two-dimensional fiber.
    """

    def __init__(self, structure, cfg, nu, labels, particular, basis, dim_before_gauge):
        self.structure = structure
        self.cfg = cfg
        self.nu = nu
        self.labels = labels
        self.particular = particular
        self.basis = basis
        self.dim_before_gauge = dim_before_gauge
        self.stab_dim = stabilizer_dim(structure, cfg)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dim_mod_gauge(self) -> int:
        return self.dim - (self.stab_dim - 1)

    def free_tail_only(self) -> bool:
        """True when every free direction is supported on tail coordinates."""
        tail_idx = {k for k, lab in enumerate(self.labels) if lab[0] == "g"}
        for vec in self.basis:
            for k, val in enumerate(vec):
                if not val.is_zero() and k not in tail_idx:
                    return False
        return True

    def vector_at(self, params) -> list[Scalar]:
        params = [sc(p) for p in params]
        if len(params) != self.dim:
            raise ExactError(f"expected {self.dim} free parameters")
        vec = list(self.particular)
        for p, bvec in zip(params, self.basis):
            vec = [v + p * b for v, b in zip(vec, bvec)]
        return vec

    def connection_at(self, params) -> LogConnection:
        return self._build(self.vector_at(params))

    def basis_connections(self) -> list[LogConnection]:
        out = [self._build(list(self.particular))]
        for bvec in self.basis:
            out.append(self._build([p + b for p, b in zip(self.particular, bvec)]))
        return out

    def triple_at(self, params) -> FlatTriple:
        return FlatTriple(self.structure, self.nu, self.connection_at(params), self.cfg)

    def _build(self, values) -> LogConnection:
        mats = []
        for i in range(NPOINTS):
            exprs = self._matrices[i]
            mats.append(
                (
                    (exprs[0][0].at(values), exprs[0][1].at(values)),
                    (exprs[1][0].at(values), exprs[1][1].at(values)),
                )
            )
        bundle = self.structure.bundle
        ntail = max(bundle.d1 - bundle.d0 - 1, 0)
        tail_vals = []
        for k, lab in enumerate(self.labels):
            if lab[0] == "g":
                tail_vals.append(values[k])
        tail = Poly(tail_vals, bound=ntail - 1) if ntail else None
        return LogConnection(bundle, mats, tail)


def solve_connection_space(
    structure: ParabolicStructure,
    cfg: MarkedConfiguration,
    nu: SpectrumRank2,
) -> ConnectionSpace | None:
    """Solve the full residue-constraint system exactly.

    Per point one parameter survives the eigenline and trace conditions (the
    (12) entry at a finite flag, the (21) entry at an infinite one); the tail
    coefficients are additional unknowns.  The holomorphy constraints are the
    diagonal sums and the off-diagonal numerator degree bounds.  Returns None
    when the system is infeasible (decomposable structures with
    Kostov-generic spectra).
    """
    bundle = structure.bundle
    d0, d1 = bundle.d0, bundle.d1
    if nu.d != d0 + d1:
        raise ConnectionError(
            f"spectrum degree {nu.d} does not match bundle degree {d0 + d1}"
        )
    ntail = max(d1 - d0 - 1, 0)
    labels = [("x", i) for i in range(NPOINTS)] + [("g", k) for k in range(ntail)]
    n = len(labels)

    zero = _Affine.constant(0, n)
    matrices = []
    a12_exprs, a21_exprs = [], []
    for i in range(NPOINTS):
        p, m = nu.nu[i]
        u = structure.flags[i]
        x = _Affine.unknown(i, n)
        if u.is_infinity():
            a11 = _Affine.constant(m, n)
            a12 = zero
            a21 = x
            a22 = _Affine.constant(p, n)
        else:
            t = u.value
            a11 = _Affine.constant(p, n) - x.scale(t)
            a12 = x
            a21 = _Affine.constant(t * (p - m), n) - x.scale(t * t)
            a22 = _Affine.constant(m, n) + x.scale(t)
        matrices.append(((a11, a12), (a21, a22)))
        a12_exprs.append(a12)
        a21_exprs.append(a21)

    rows_diag = []
    s11 = zero
    s22 = zero
    for (r1, r2) in matrices:
        s11 = s11 + r1[0]
        s22 = s22 + r2[1]
    rows_diag.append((s11, sc(-d0)))
    rows_diag.append((s22, sc(-d1)))

    rows_inf = []
    # (12) numerator: degree bound 3 + d0 - d1
    n12 = _numerator_coeffs(a12_exprs, [zero] * 0, cfg, n)
    for k in range(len(n12) - 1, 3 + d0 - d1, -1):
        rows_inf.append((n12[k], sc(0)))
    # (21) numerator with the tail: degree bound 3 + d1 - d0
    tail_exprs = [_Affine.unknown(NPOINTS + k, n) for k in range(ntail)]
    n21 = _numerator_coeffs(a21_exprs, tail_exprs, cfg, n)
    for k in range(len(n21) - 1, 3 + d1 - d0, -1):
        rows_inf.append((n21[k], sc(0)))

    def solve(rows):
        from .exactnum import Mat

        if not rows:
            ident = [[sc(1) if j == k else sc(0) for j in range(n)] for k in range(n)]
            return [sc(0)] * n, ident
        mat = Mat([[e.coeffs[k] for k in range(n)] for e, _ in rows])
        rhs = [target - e.const for e, target in rows]
        return mat.solve_affine(rhs)

    before = solve(rows_diag)
    dim_before = len(before[1]) if before is not None else -1
    full = solve(rows_diag + rows_inf)
    if full is None:
        return None
    particular, basis = full
    space = ConnectionSpace(structure, cfg, nu, labels, particular, basis, dim_before)
    space._matrices = matrices
    return space


def _numerator_coeffs(entry_exprs, tail_exprs, cfg, n):
    """Coefficient expressions of ``sum_i e_i prod_{j != i}(z - z_j) +
    tail(z) prod_j (z - z_j)`` in the solver unknowns."""
    zs = cfg.z
    deg = NPOINTS - 1 + len(tail_exprs)
    coeffs = [_Affine.constant(0, n) for _ in range(deg + 1)]
    for i, e in enumerate(entry_exprs):
        partial = monic_from_roots([zs[k] for k in range(NPOINTS) if k != i])
        for k in range(partial.degree() + 1):
            if not partial.coeff(k).is_zero():
                coeffs[k] = coeffs[k] + e.scale(partial.coeff(k))
    if tail_exprs:
        full = monic_from_roots(zs)
        for t_k, texpr in enumerate(tail_exprs):
            for k in range(full.degree() + 1):
                if not full.coeff(k).is_zero():
                    coeffs[t_k + k] = coeffs[t_k + k] + texpr.scale(full.coeff(k))
    return coeffs


def irreducibility_screen(t: FlatTriple):
    """Sound screen from residue integrality: an invariant line forces some
    sign-pattern eigenvalue sum to be minus an admissible subbundle degree.

    Returns ("irreducible", []) or ("unknown", patterns) where each pattern is
    (signs, forced degree).
    """
    bounds = degree_bounds(t.spectrum.d)
    patterns = []
    for sigma in product((0, 1), repeat=NPOINTS):
        total = sum((t.spectrum.nu[i][s] for i, s in enumerate(sigma)), sc(0))
        if not total.is_integer():
            continue
        deg = -total.re_pair[0]
        if bounds.lo <= deg <= bounds.hi:
            patterns.append(("".join("+" if s == 0 else "-" for s in sigma), deg))
    if patterns:
        return "unknown", patterns
    return "irreducible", []


def verify_invariant_line(t: FlatTriple, q: Poly | None, r: Poly | None) -> bool:
    """Exact check that the section ``s = (q, r)`` spans a connection-invariant
    line: the cleared ``(nabla s) wedge s`` vanishes identically."""
    if (q is None or q.is_zero()) and (r is None or r.is_zero()):
        raise ConnectionError("zero section is not a line")
    cfg = t.cfg
    qp = q if q is not None else Poly.zero(-1)
    rp = r if r is not None else Poly.zero(-1)
    prod_all = monic_from_roots(cfg.z)
    dq = Poly([(k + 1) * c for k, c in enumerate(qp.coeffs[1:])], bound=max(qp.bound - 1, -1)) if qp.bound >= 1 else Poly.zero(-1)
    dr = Poly([(k + 1) * c for k, c in enumerate(rp.coeffs[1:])], bound=max(rp.bound - 1, -1)) if rp.bound >= 1 else Poly.zero(-1)
    w1 = prod_all * dq
    w2 = prod_all * dr
    for i in range(NPOINTS):
        ((a11, a12), (a21, a22)) = t.connection.residues[i]
        partial = monic_from_roots([cfg.z[k] for k in range(NPOINTS) if k != i])
        w1 = w1 + partial * (a11 * qp + a12 * rp)
        w2 = w2 + partial * (a21 * qp + a22 * rp)
    w2 = w2 + prod_all * (t.connection.tail * qp)
    wedge = w1 * rp - w2 * qp
    return wedge.is_zero()


def _entries(t: FlatTriple) -> dict[tuple[int, int], RationalEntry]:
    return {
        (r, c): t.connection.entry(r, c, t.cfg)
        for r in (0, 1)
        for c in (0, 1)
    }


def _connection_from_entries(bundle, cfg, e) -> LogConnection:
    for key in ((0, 0), (0, 1), (1, 1)):
        if not e[key].tail.is_zero():
            raise ConnectionError(f"entry {key} acquired a polynomial part")
    mats = []
    for i in range(NPOINTS):
        mats.append(
            (
                (e[(0, 0)].residues[i], e[(0, 1)].residues[i]),
                (e[(1, 0)].residues[i], e[(1, 1)].residues[i]),
            )
        )
    max_tail = bundle.d1 - bundle.d0 - 2
    tail = e[(1, 0)].tail
    if tail.degree() > max(max_tail, -1):
        raise ConnectionError("tail degree exceeds the new bound")
    if max_tail >= 0:
        tail_poly = Poly(list(tail.coeffs[: max_tail + 1]), bound=max_tail)
    else:
        tail_poly = None
    return LogConnection(bundle, mats, tail_poly)


def elm_triple(t: FlatTriple, j: int) -> FlatTriple:
    """Elementary transformation at the j-th marked point.

    The new frame is ``(e1, (z - z_j) e2)`` with ``e1`` spanning the flag;
    the degree drops by one, the flag at z_j moves to the complementary
    summand fiber, and the spectrum transforms by ``elm_spectrum``.
    """
    cfg = t.cfg
    bundle = t.connection.bundle
    zj = cfg.z[j]
    lin = Poly([-zj, 1])
    e = _entries(t)
    u = t.structure.flags[j]
    if u.is_infinity():
        # frame ((z - z_j) e, f): lower summand degree drops
        new_bundle = BundleSplitType(bundle.d0 - 1, bundle.d1)
        ne = {
            (0, 0): e[(0, 0)].add_pole(j),
            (0, 1): e[(0, 1)].div_root(j),
            (1, 0): e[(1, 0)].mul_poly(lin),
            (1, 1): e[(1, 1)],
        }
        new_flags = []
        for i, ui in enumerate(t.structure.flags):
            if i == j:
                new_flags.append(ProjectivePoint.finite(0))
            elif ui.is_infinity():
                new_flags.append(ProjectivePoint.infinity())
            else:
                new_flags.append(ProjectivePoint.finite(ui.value * (cfg.z[i] - zj)))
        swap = False
    else:
        tval = u.value
        new_bundle_raw = (bundle.d0, bundle.d1 - 1)
        o11, o12, o21, o22 = e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]
        ne = {
            (0, 0): o11 + o12.scale(tval),
            (0, 1): o12.mul_poly(lin),
            (1, 0): (o21 + (o22 - o11).scale(tval) - o12.scale(tval * tval)).div_root(j),
            (1, 1): (o22 - o12.scale(tval)).add_pole(j),
        }
        new_flags = []
        for i, ui in enumerate(t.structure.flags):
            if i == j:
                new_flags.append(ProjectivePoint.infinity())
            elif ui.is_infinity():
                new_flags.append(ProjectivePoint.infinity())
            else:
                new_flags.append(
                    ProjectivePoint.finite((ui.value - tval) / (cfg.z[i] - zj))
                )
        swap = new_bundle_raw[0] > new_bundle_raw[1]
        if swap:
            ne = {
                (0, 0): ne[(1, 1)],
                (0, 1): ne[(1, 0)],
                (1, 0): ne[(0, 1)],
                (1, 1): ne[(0, 0)],
            }
            new_flags = [
                ProjectivePoint(f.lam, f.kappa) for f in new_flags
            ]
            new_bundle = BundleSplitType(new_bundle_raw[1], new_bundle_raw[0])
        else:
            new_bundle = BundleSplitType(*new_bundle_raw)
    conn = _connection_from_entries(new_bundle, cfg, ne)
    structure = ParabolicStructure(new_bundle, new_flags)
    return FlatTriple(structure, elm_spectrum(t.spectrum, j), conn, cfg)


def gauge_transform(t: FlatTriple, params) -> FlatTriple:
    """Push the triple forward along the automorphism with reduced parameters
    ``(a, b, c)`` on B or ``(a, b, c, g, h)`` on B'.

    Flags move by ``u -> (shift(z) + u)/a`` (the parastruct action) and the
    connection by the matching conjugation, so the result is an isomorphic
    flat triple and validates.
    """
    from .parastruct import act, act_params_shift

    bundle = t.connection.bundle
    a, shift = act_params_shift(bundle, params)
    cfg = t.cfg
    e = _entries(t)
    o11, o12, o21, o22 = e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]
    inv_a = a.inverse()
    n11 = o11 - o12.mul_poly(shift)
    n12 = o12.scale(a)
    n21 = (
        o21 + (o11 - o22).mul_poly(shift) - o12.mul_poly(shift * shift)
    ).scale(inv_a)
    # derivative of the shift joins the (21) polynomial part
    dshift = Poly(
        [(k + 1) * c for k, c in enumerate(shift.coeffs[1:])],
        bound=max(shift.bound - 1, 0),
    )
    n21 = RationalEntry(cfg, n21.residues, n21.tail - inv_a * dshift)
    n22 = o22 + o12.mul_poly(shift)
    conn = _connection_from_entries(
        bundle, cfg, {(0, 0): n11, (0, 1): n12, (1, 0): n21, (1, 1): n22}
    )
    structure = act(bundle, params, t.structure, cfg)
    return FlatTriple(structure, t.spectrum, conn, cfg)
