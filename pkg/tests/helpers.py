"""Shared samplers and the closed-form stability oracle used by the tests.

The oracle transcribes the case analysis for line subbundles of B and B'
(full-contact determinant test at degree -1, the unique higher-degree factor,
maximal collinear subsets at degree 0) and is kept independent of the
enumeration-based decision path in paramod.stability.
"""

from itertools import combinations

from paramod.exactnum import INF, Mat, ProjectivePoint, Scalar, sc
from paramod.parastruct import (
    B,
    BPRIME,
    MarkedConfiguration,
    NPOINTS,
    ParabolicStructure,
)
from paramod.spectra import SpectrumRank2
from paramod.stability import WeightVector, weight_is_non_special


def rand_rational(rng, lo=-40, hi=40, max_den=8):
    return Scalar.rational(rng.randrange(lo, hi + 1), rng.randrange(1, max_den + 1))


def rand_config(rng) -> MarkedConfiguration:
    while True:
        zs = [rand_rational(rng, -12, 12, 4) for _ in range(NPOINTS)]
        if len(set(zs)) == NPOINTS:
            return MarkedConfiguration(zs)


def rand_structure(rng, bundle=B, n_inf=None) -> ParabolicStructure:
    if n_inf is None:
        n_inf = rng.choice([0, 0, 0, 1, 1, 2, 3])
    pattern = set(rng.sample(range(NPOINTS), n_inf))
    flags = [
        INF if i in pattern else ProjectivePoint.finite(rand_rational(rng))
        for i in range(NPOINTS)
    ]
    return ParabolicStructure(bundle, flags)


def rand_weight(rng, max_den=16) -> WeightVector:
    return WeightVector(
        [Scalar.rational(rng.randrange(0, d), d) for d in [rng.randrange(2, max_den + 1) for _ in range(NPOINTS)]]
    )


def rand_nonspecial_weight(rng, d=1, max_den=16, total_below=None) -> WeightVector:
    while True:
        if total_below is not None:
            # numerators capped so the total stays below the bound
            dens = [rng.randrange(7, max(8, max_den) + 1) for _ in range(NPOINTS)]
            w = WeightVector(
                [Scalar.rational(rng.randrange(1, max(2, den // 6)), den) for den in dens]
            )
            if not (w.total() < sc(total_below)):
                continue
        else:
            w = WeightVector(
                [
                    Scalar.rational(rng.randrange(1, den), den)
                    for den in [rng.randrange(3, max_den + 1) for _ in range(NPOINTS)]
                ]
            )
        if not weight_is_non_special(w, d):
            continue
        return w


def rand_nonspecial_spectrum(rng, d=0, max_den=9) -> SpectrumRank2:
    while True:
        nu = []
        for _ in range(NPOINTS):
            nu.append((rand_rational(rng, -6, 6, max_den), rand_rational(rng, -6, 6, max_den)))
        # repair the Fuchs relation on the last slot
        total = sum((a + b for a, b in nu[:4]), nu[4][0])
        nu[4] = (nu[4][0], -sc(d) - total)
        try:
            spec = SpectrumRank2(nu, d)
        except Exception:
            continue
        preds = spec.predicates()
        if preds["non_special"]:
            return spec


def rand_u2_indecomposable(rng, cfg) -> ParabolicStructure:
    from paramod.parastruct import is_decomposable

    while True:
        s = rand_structure(rng, B, n_inf=0)
        if not is_decomposable(s, cfg)[0]:
            return s


def rand_ui_indecomposable(rng, cfg, i: int) -> ParabolicStructure:
    from paramod.parastruct import is_decomposable

    while True:
        flags = [
            INF if k == i else ProjectivePoint.finite(rand_rational(rng))
            for k in range(NPOINTS)
        ]
        s = ParabolicStructure(B, flags)
        if not is_decomposable(s, cfg)[0]:
            return s


def rand_uij_indecomposable(rng, cfg, i: int, j: int) -> ParabolicStructure:
    from paramod.parastruct import is_decomposable

    while True:
        flags = [
            INF if k in (i, j) else ProjectivePoint.finite(rand_rational(rng))
            for k in range(NPOINTS)
        ]
        s = ParabolicStructure(B, flags)
        if not is_decomposable(s, cfg)[0]:
            return s


def oracle_is_stable(structure, cfg, w) -> bool:
    """Closed-form case analysis for B and B'; returns the stability verdict."""
    if structure.bundle == B:
        return _oracle_b(structure, cfg, w)
    if structure.bundle == BPRIME:
        return _oracle_bprime(structure, cfg, w)
    raise ValueError("oracle defined for B and B' only")


def _delta_matrix(structure, cfg) -> Mat:
    rows = []
    for zi, u in zip(cfg.z, structure.flags):
        if u.is_infinity():
            rows.append([sc(0), sc(0), sc(0), sc(1), zi])
        else:
            rows.append([sc(1), zi, zi**2, u.value, u.value * zi])
    return Mat(rows)


def _oracle_b(structure, cfg, w) -> bool:
    inf_idx = set(structure.infinity_indices())
    fin_idx = [i for i in range(NPOINTS) if i not in inf_idx]
    total = w.total()
    # Case I: degree -1
    if _delta_matrix(structure, cfg).det().is_zero():
        if not (total < sc(3)):
            return False
    else:
        for j in range(NPOINTS):
            if not (total - 2 * w.w[j] < sc(3)):
                return False
    # Case II: degree 1, the unique higher-degree factor
    s = sum((w.w[i] for i in inf_idx), sc(1)) - sum((w.w[i] for i in fin_idx), sc(0))
    if not (s < sc(0)):
        return False
    # Case III: degree 0
    if len(inf_idx) >= 4:
        return True
    m_inf = 0
    for size in range(len(fin_idx), 1, -1):
        found = False
        for sub in combinations(fin_idx, size):
            rows = [[sc(1), cfg.z[i], structure.flags[i].value] for i in sub]
            if Mat(rows).rank() == 2:
                found = True
                break
        if found:
            m_inf = size
            break
    if m_inf == 0:
        m_inf = min(1, len(fin_idx))
    for sub in combinations(fin_idx, m_inf):
        rows = [[sc(1), cfg.z[i], structure.flags[i].value] for i in sub]
        if len(sub) >= 2 and Mat(rows).rank() != 2:
            continue
        inside = sum((w.w[i] for i in sub), sc(0))
        if not (inside - (total - inside) < sc(1)):
            return False
    return True


def _oracle_bprime(structure, cfg, w) -> bool:
    inf_idx = set(structure.infinity_indices())
    fin_idx = [i for i in range(NPOINTS) if i not in inf_idx]
    total = w.total()
    n_inf = len(inf_idx)
    # Case I: degree -1
    if n_inf == 1:
        (j,) = inf_idx
        if not (total - 2 * w.w[j] < sc(3)):
            return False
    elif n_inf == 0:
        rows = [
            [sc(1), zi, zi**2, zi**3, u.value]
            for zi, u in zip(cfg.z, structure.flags)
        ]
        rk = Mat(rows).rank()
        if rk == 4:
            if not (total < sc(3)):
                return False
        else:
            for j in range(NPOINTS):
                if not (total - 2 * w.w[j] < sc(3)):
                    return False
    # n_inf >= 2: degree -1 subbundles never destabilize
    # Case II: degree 2, the O(2) factor
    s = sum((w.w[i] for i in inf_idx), sc(3)) - sum((w.w[i] for i in fin_idx), sc(0))
    if not (s < sc(0)):
        return False
    return True
