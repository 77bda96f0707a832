"""Named example functions and the coset machinery for a microperiodic lift.

Three functions are bundled: ``psi`` (a discontinuous three-slope extreme
function), ``pi_prime_psi`` (built from it) and ``kzh`` (a discontinuous minimal
function whose only perturbations are microperiodic on two intervals).

The lift of ``kzh`` adds ``+s`` / ``-s`` on a partition of ``(l, u)`` into
cosets of the dense group ``T = <t1, t2>``, and the opposite offset on the
mirror interval ``(f - u, f - l)``.  It is not piecewise linear, so it is
represented by a :class:`PerturbationDescriptor` and analysed symbolically.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .analysis import Inclusion, minimality_check
from .complex2d import Face, build_delta_complex, face_slacks, n_f, sans_limits_part, zero_set_of_values
from .exactnum import ONE, ZERO, QNum, floor_frac, frac, parse, qnum
from .pwl import PwlFunction, loads_function

__all__ = [
    "C",
    "CPLUS",
    "CMINUS",
    "OUTSIDE",
    "GroupT",
    "CosetClassifier",
    "LiftedFunction",
    "PerturbationDescriptor",
    "PaperDataError",
    "FaceClassification",
    "KZH_L",
    "KZH_U",
    "KZH_X39",
    "KZH_S",
    "coset_classify",
    "eval_lifted",
    "check_conditions",
    "classify_faces_ab",
    "load_paper_function",
    "load_data_file",
    "build_pi_prime_psi",
    "s_identity",
    "kzh_data_problems",
    "kzh_group",
    "kzh_classifier",
    "kzh_descriptor",
    "kzh_lifted",
    "compare_additivity_lifted",
    "pinning_check",
    "lifted_differs_witness",
    "dumps_descriptor",
    "loads_descriptor",
]

C, CPLUS, CMINUS, OUTSIDE = "C", "Cplus", "Cminus", "Outside"

KZH_L = qnum(Fraction(219, 800))
KZH_U = qnum(Fraction(269, 800))
KZH_X39 = qnum(Fraction(4899, 5000))
KZH_F = qnum(Fraction(4, 5))
KZH_S = qnum(Fraction(19, 23998))


class PaperDataError(ValueError):
    """A bundled data file is missing, corrupt or fails a required identity."""


# the group T ------------------------------------------------------------------


def _mod(a: Fraction, m: Fraction) -> Fraction:
    return a - m * (a // m)


@dataclass(frozen=True)
class GroupT:
    """``T = Z t1 + Z t2`` with ``t1 = tau*sqrt2`` and ``t2`` rational.

    Since 1 and sqrt2 are rationally independent, ``p + q sqrt2`` lies in
    ``T`` iff ``p`` is a multiple of ``t2`` and ``q`` a multiple of ``tau``.
    """

    tau: Fraction
    t2_rat: Fraction

    @property
    def t1(self) -> QNum:
        return QNum(0, self.tau)

    @property
    def t2(self) -> QNum:
        return QNum(self.t2_rat)

    def reduce(self, x: QNum) -> tuple[Fraction, Fraction]:
        """Reduced coordinates ``(p mod t2, q mod tau)`` of ``x = p + q sqrt2``."""
        x = qnum(x)
        return _mod(x.rat, self.t2_rat), _mod(x.coef_sqrt2, self.tau)

    def contains(self, x: QNum) -> bool:
        return self.reduce(x) == (0, 0)

    def element(self, m: int, n: int) -> QNum:
        return self.t1 * n + self.t2 * m


def kzh_group() -> GroupT:
    return GroupT(Fraction(77, 7752), Fraction(77, 2584))


# coset classification ----------------------------------------------------------


@dataclass(frozen=True)
class CosetClassifier:
    """Splits ``(l, u)`` into the classes C, C+ and C- by reduced coordinates around the midpoint."""

    l: QNum
    u: QNum
    group: GroupT

    @property
    def center(self) -> QNum:
        return (self.l + self.u) / 2

    def phi(self, x: QNum) -> QNum:
        return self.l + self.u - x

    def coords(self, x: QNum) -> tuple[Fraction, Fraction]:
        return self.group.reduce(qnum(x) - self.center)

    def classify_coords(self, p: Fraction, q: Fraction) -> str:
        half_t2, half_tau = self.group.t2_rat / 2, self.group.tau / 2
        if q == 0 or q == half_tau:
            if p == 0 or p == half_t2:
                return C
            return CPLUS if p < half_t2 else CMINUS
        return CPLUS if q < half_tau else CMINUS

    def classify(self, x) -> str:
        x = frac(qnum(x))
        if not self.l < x < self.u:
            return OUTSIDE
        return self.classify_coords(*self.coords(x))

    def representative(self, p: Fraction, q: Fraction) -> QNum:
        """A point of ``(l, u)`` with the given reduced coordinates, close to the midpoint."""
        t2, tau = self.group.t2_rat, self.group.tau
        p = p - t2 * round(p / t2)
        q = q - tau * round(q / tau)
        x = self.center + QNum(p, q)
        if not self.l < x < self.u:
            raise ValueError("interval too short for the group's fundamental domain")
        return x


def coset_classify(cl: CosetClassifier, x) -> str:
    return cl.classify(x)


def kzh_classifier() -> CosetClassifier:
    return CosetClassifier(KZH_L, KZH_U, kzh_group())


# descriptor and lifted function ------------------------------------------------


@dataclass(frozen=True)
class PerturbationDescriptor:
    """A perturbation supported on ``(l, u)`` and its mirror ``(f-u, f-l)``.

    On ``(l, u)`` the value is ``offsets[class(x)]``; on the mirror interval
    it is ``mirror_sign * offsets[class(f - x)]``; elsewhere it is 0.
    """

    classifier: CosetClassifier
    f: QNum
    s: QNum
    offsets: dict
    mirror_sign: int = -1

    @property
    def interval(self) -> tuple[QNum, QNum]:
        return self.classifier.l, self.classifier.u

    @property
    def mirror(self) -> tuple[QNum, QNum]:
        return self.f - self.classifier.u, self.f - self.classifier.l

    def offset(self, cls: str) -> QNum:
        return qnum(self.offsets.get(cls, 0)) if cls != OUTSIDE else ZERO

    def signed_coordinate(self, x) -> tuple[int, QNum] | None:
        """``(mu, d)`` with ``bar(x) = mu * offset(class(center + d))``; None off the support."""
        x = frac(qnum(x))
        l, u = self.interval
        ml, mu_ = self.mirror
        if l < x < u:
            return 1, x - self.classifier.center
        if ml < x < mu_:
            return self.mirror_sign, self.f - x - self.classifier.center
        return None

    def __call__(self, x) -> QNum:
        sc = self.signed_coordinate(x)
        if sc is None:
            return ZERO
        mu, d = sc
        cls = self.classifier.classify_coords(*self.classifier.group.reduce(d))
        return self.offset(cls) * mu


@dataclass(frozen=True)
class LiftedFunction:
    base: PwlFunction
    bar: PerturbationDescriptor

    @property
    def s(self) -> QNum:
        return self.bar.s

    def __call__(self, x) -> QNum:
        return eval_lifted(self, x)


def eval_lifted(lf: LiftedFunction, x) -> QNum:
    return lf.base(x) + lf.bar(x)


def kzh_descriptor() -> PerturbationDescriptor:
    return PerturbationDescriptor(kzh_classifier(), KZH_F, KZH_S, {C: ZERO, CPLUS: KZH_S, CMINUS: -KZH_S})


def kzh_lifted(base: PwlFunction | None = None) -> LiftedFunction:
    return LiftedFunction(base if base is not None else load_paper_function("kzh"), kzh_descriptor())


def dumps_descriptor(d: PerturbationDescriptor) -> str:
    cl = d.classifier
    obj = {
        "kind": "coset_perturbation",
        "f": str(d.f),
        "l": str(cl.l),
        "u": str(cl.u),
        "s": str(d.s),
        "tau": str(cl.group.tau),
        "t2": str(cl.group.t2_rat),
        "offsets": {k: str(qnum(v)) for k, v in sorted(d.offsets.items())},
        "mirror_sign": d.mirror_sign,
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads_descriptor(text: str) -> PerturbationDescriptor:
    try:
        obj = json.loads(text)
        group = GroupT(Fraction(obj["tau"]), Fraction(obj["t2"]))
        cl = CosetClassifier(parse(obj["l"]), parse(obj["u"]), group)
        offsets = {k: parse(v) for k, v in obj["offsets"].items()}
        return PerturbationDescriptor(cl, parse(obj["f"]), parse(obj["s"]), offsets, int(obj.get("mirror_sign", -1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise PaperDataError(f"bad descriptor: {exc}") from exc


# conditions (i)-(v) --------------------------------------------------------------

# reduced coordinates of the phi-fixed cosets (all of them land in class C)
def _fixed_coords(group: GroupT) -> list[tuple[Fraction, Fraction]]:
    h2, ht = group.t2_rat / 2, group.tau / 2
    return [(Fraction(0), Fraction(0)), (h2, Fraction(0)), (Fraction(0), ht), (h2, ht)]


def _sample_coords(group: GroupT, rng: random.Random, n: int) -> list[tuple[Fraction, Fraction]]:
    t2, tau = group.t2_rat, group.tau
    pts = list(_fixed_coords(group))
    for a in (0, Fraction(1, 2)):
        for b in (Fraction(1, 7), Fraction(3, 7), Fraction(4, 7), Fraction(6, 7)):
            pts.append((t2 * a, tau * b))
            pts.append((t2 * b, tau * a))
    for _ in range(n):
        pts.append((t2 * Fraction(rng.randrange(1, 997), 997), tau * Fraction(rng.randrange(1, 991), 991)))
    return pts


def check_conditions(bar: PerturbationDescriptor, samples: int = 200, seed: int = 0) -> dict[str, bool]:
    """Check conditions (i) to (v) for a coset perturbation descriptor.

    (i)   support inside ``(l,u)`` and its mirror, which must be disjoint
          subsets of ``(0,1)``;
    (ii)  constant on cosets of ``T`` (the value only depends on reduced
          coordinates; spot-checked on translates);
    (iii) ``bar(x) + bar(y) = 0`` when ``x + y`` is ``l+u``, ``l+u-t1`` or
          ``l+u-t2``; all three say that reduced coordinates are negated,
          so this is a check on the class table;
    (iv)  ``bar(x) + bar(f-x) = 0``;
    (v)   ``|bar| <= s``.
    """
    cl = bar.classifier
    g = cl.group
    rng = random.Random(seed)
    l, u = bar.interval
    ml, mu = bar.mirror
    cond_i = ZERO < l < u < ONE and ZERO < ml < mu < ONE and (u <= ml or mu <= l)

    coords = _sample_coords(g, rng, samples)
    cond_ii = True
    for p, q in coords:
        x = cl.representative(p, q)
        base = bar(x)
        for m, n in ((1, 0), (0, 1), (-1, 1), (2, -3)):
            y = x + g.element(m, n)
            if l < y < u and bar(y) != base:
                cond_ii = False

    cond_iii = True
    for p, q in coords:
        x = cl.representative(p, q)
        for shift in (ZERO, g.t1, g.t2):
            y = cl.phi(x) - shift
            # y may leave (l, u); move it back by a group element with the same coset
            y = cl.representative(*cl.coords(y))
            if bar(x) + bar(y) != 0:
                cond_iii = False

    cond_iv = True
    for p, q in coords:
        x = cl.representative(p, q)
        if bar(x) + bar(bar.f - x) != 0:
            cond_iv = False

    cond_v = all(abs(bar.offset(k)) <= bar.s for k in (C, CPLUS, CMINUS))
    return {"i": cond_i, "ii": cond_ii, "iii": cond_iii, "iv": cond_iv, "v": cond_v}


def pinning_check(bar: PerturbationDescriptor) -> dict[str, bool]:
    """Why any decomposition ``bar = (bar1 + bar2)/2`` into admissible perturbations is trivial.

    Class C cosets are fixed by ``phi``, so (iii) forces 0 there.  On C+ and
    C- the offsets sit on the boundary of ``[-s, s]``, so two values in that
    interval averaging to ``+-s`` must both equal it.
    """
    g = bar.classifier.group
    cl = bar.classifier
    fixed_ok = all(
        cl.classify_coords(p, q) == C and g.reduce(QNum(-p, -q)) == (p, q) for p, q in _fixed_coords(g)
    )
    return {
        "C_fixed_by_phi": fixed_ok,
        "C_offset_zero": bar.offset(C) == 0,
        "Cplus_tight": abs(bar.offset(CPLUS)) == bar.s,
        "Cminus_tight": abs(bar.offset(CMINUS)) == bar.s,
        "pinned": fixed_ok and bar.offset(C) == 0 and abs(bar.offset(CPLUS)) == bar.s == abs(bar.offset(CMINUS)),
    }


def lifted_differs_witness(lf: LiftedFunction) -> QNum | None:
    """A point where the lift differs from its base (any C+ point with nonzero offset)."""
    cl = lf.bar.classifier
    x = cl.representative(cl.group.t2_rat / 3, Fraction(0))
    return x if eval_lifted(lf, x) != lf.base(x) else None


# face classification ------------------------------------------------------------


@dataclass
class FaceClassification:
    tags: list[tuple[Face, str]]
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for _, t in self.tags:
            out[t] = out.get(t, 0) + 1
        return out


def classify_faces_ab(pi: PwlFunction, s, special: Sequence[tuple[QNum, QNum]], fail_fast: bool = False) -> FaceClassification:
    """Tag each face ``a`` (slack 0 at every vertex), ``b`` (slack >= n_F*s, strict somewhere), ``n0`` or ``FAIL``."""
    s = qnum(s)
    if not s > 0:
        raise ValueError("s must be positive")
    special = [(qnum(a), qnum(b)) for a, b in special]
    out = FaceClassification([])
    for F in build_delta_complex(pi):
        n = n_f(F, special)
        if n == 0:
            out.tags.append((F, "n0"))
            continue
        vals = face_slacks(pi, F)
        bound = s * n
        if n == 3:
            tag = "FAIL"
            why = "n_F = 3"
        elif all(v == 0 for v in vals):
            tag, why = "a", None
        elif all(v >= bound for v in vals) and any(v > bound for v in vals):
            tag, why = "b", None
        else:
            tag = "FAIL"
            why = "neither all zero nor bounded by n_F*s"
        out.tags.append((F, tag))
        if tag == "FAIL":
            bad = min(range(len(vals)), key=lambda i: vals[i])
            out.failures.append(
                {"face": repr(F), "n_F": n, "reason": why, "vertex": [str(c) for c in F.vertices[bad]], "slack": str(vals[bad])}
            )
            if fail_fast:
                break
    return out


# additivity comparison with a lifted function ----------------------------------


def _special_cells(bar: PerturbationDescriptor, F: Face) -> list[int]:
    """Indices (0, 1, 2) of the terms whose cell lies in the support of ``bar``."""
    idx = []
    for i, (lo, hi) in enumerate(F.projections()):
        mid = (lo + hi) / 2
        if bar.signed_coordinate(mid) is not None:
            idx.append(i)
    return idx


def _delta_bar_vanishes(bar: PerturbationDescriptor, F: Face, zs_vertices, is_point: bool) -> bool:
    g = bar.classifier.group
    if is_point:
        (x, y), = zs_vertices
        k = F.K.shift
        return bar(x) + bar(y) - bar(x + y - k) == 0
    idx = _special_cells(bar, F)
    if not idx:
        return True
    if len(idx) != 2:
        return False
    combos = []
    sig = (1, 1, -1)
    lo, hi = bar.interval
    for x, y in zs_vertices:
        # closure vertices may sit on the support boundary; use each cell's side
        ws = (x - F.I.shift, y - F.J.shift, x + y - F.K.shift)
        terms = []
        for i in idx:
            if lo <= ws[i] <= hi:
                terms.append((sig[i], ws[i] - bar.classifier.center))
            else:
                terms.append((sig[i] * bar.mirror_sign, bar.f - ws[i] - bar.classifier.center))
        (a, da), (b, db) = terms
        combos.append((a == b, da + db if a == b else da - db))
    same = {c[0] for c in combos}
    if len(same) != 1:
        return False
    vals = {c[1] for c in combos}
    return len(vals) == 1 and g.contains(vals.pop())


def compare_additivity_lifted(pi1, pi2, mode: str = "sans_limits") -> Inclusion:
    """Compare ``E`` of a :class:`LiftedFunction` with ``E`` of its base.

    ``E(lift)`` is inside ``E(base)`` when every face meeting the support is
    tagged (a) or (b); ``E(base)`` is inside ``E(lift)`` when on each face of
    type (a) the offsets cancel, i.e. the signed coordinates of the two
    special terms differ (or add up) to a constant element of ``T``.
    Both tests are sufficient conditions; a failed test is reported as a
    missing inclusion.
    """
    if mode != "sans_limits":
        raise ValueError("limits of a lifted function are not defined; use mode='sans_limits'")
    swap = False
    if isinstance(pi1, LiftedFunction) and isinstance(pi2, LiftedFunction):
        if pi1 == pi2:
            return Inclusion.EQUAL
        raise ValueError("comparison of two different lifted functions is not supported")
    if isinstance(pi1, PwlFunction) and isinstance(pi2, LiftedFunction):
        base, lf = pi1, pi2
    elif isinstance(pi1, LiftedFunction) and isinstance(pi2, PwlFunction):
        base, lf, swap = pi2, pi1, True
    else:
        raise TypeError("expected a PwlFunction and a LiftedFunction")
    if not lf.base.same_as(base):
        raise ValueError("lifted function is compared against a different base")
    bar = lf.bar
    fc = classify_faces_ab(base, bar.s, [bar.interval, bar.mirror])
    lift_in_base = fc.ok
    base_in_lift = True
    for F, tag in fc.tags:
        if tag == "n0":
            continue
        zs = sans_limits_part(F, zero_set_of_values(F.vertices, face_slacks(base, F)))
        if not zs:
            continue
        verts = F.vertices if zs.kind == "all" else zs.vertices
        if not _delta_bar_vanishes(bar, F, verts, zs.kind == "point" or F.dim == 0):
            base_in_lift = False
            break
    # base \subseteq lift and lift \subseteq base, seen from the base's side
    if lift_in_base and base_in_lift:
        return Inclusion.EQUAL
    sub_base_lift = base_in_lift
    sub_lift_base = lift_in_base
    first_in_second = sub_lift_base if swap else sub_base_lift
    second_in_first = sub_base_lift if swap else sub_lift_base
    if first_in_second:
        return Inclusion.STRICT_SUBSET
    if second_in_first:
        return Inclusion.STRICT_SUPERSET
    return Inclusion.INCOMPARABLE


# bundled data ---------------------------------------------------------------------


_FILES = {"psi": "psi.fun", "kzh": "kzh.fun", "pi_prime_psi": "pi_prime_psi.fun"}


def load_data_file(name: str, data_dir=None) -> PwlFunction:
    """Parse a bundled function file without validation."""
    if name not in _FILES:
        raise PaperDataError(f"unknown function {name!r}")
    try:
        if data_dir is None:
            text = resources.files("gjfacets").joinpath("data").joinpath(_FILES[name]).read_text()
        else:
            text = (Path(data_dir) / _FILES[name]).read_text()
    except OSError as exc:
        raise PaperDataError(f"cannot read data file for {name}: {exc}") from exc
    try:
        return loads_function(text, source=_FILES[name])
    except ValueError as exc:
        raise PaperDataError(str(exc)) from exc


def s_identity(pi: PwlFunction, l=KZH_L, x39=KZH_X39) -> QNum:
    """``pi(x39^-) + pi(1 + l - x39) - pi(l)``."""
    return pi.limit(x39, "minus") + pi(1 + l - x39) - pi(l)


def kzh_data_problems(pi: PwlFunction) -> list[str]:
    problems = []
    if pi.f != KZH_F:
        problems.append(f"f = {pi.f}, expected 4/5")
    for name, x in (("l", KZH_L), ("u", KZH_U), ("x39", KZH_X39)):
        if x not in pi.breakpoints:
            problems.append(f"{name} = {x} is not a breakpoint")
    if not problems and s_identity(pi) != KZH_S:
        problems.append(f"s-identity gives {s_identity(pi)}, expected 19/23998")
    return problems


@lru_cache(maxsize=None)
def _load_validated(name: str, data_dir: str | None) -> PwlFunction:
    pi = load_data_file(name, data_dir)
    rep = minimality_check(pi)
    if not rep.minimal:
        raise PaperDataError(f"{name}: not minimal ({rep.failure})")
    if name == "kzh":
        problems = kzh_data_problems(pi)
        if problems:
            raise PaperDataError(f"kzh: {'; '.join(problems)}")
    return pi


def load_paper_function(name: str, data_dir=None) -> PwlFunction:
    """Load ``psi``, ``kzh`` or ``pi_prime_psi`` and validate it."""
    return _load_validated(name, None if data_dir is None else str(data_dir))


def build_pi_prime_psi(psi: PwlFunction) -> PwlFunction:
    """``2x`` on ``[0, 1/2]`` and ``psi`` on ``(1/2, 1)``."""
    half = qnum(Fraction(1, 2))
    xs = [ZERO, half]
    left = [psi.limit(ZERO, "minus"), ONE]
    value = [ZERO, ONE]
    right = [ZERO, psi.limit(half, "plus")]
    for x, l, v, r in psi.triples():
        if half < x:
            xs.append(x)
            left.append(l)
            value.append(v)
            right.append(r)
    pi = PwlFunction(xs, left, value, right, psi.f)
    if pi(pi.f) != 1:
        raise ValueError("construction needs pi'(f) = 1")
    rep = minimality_check(pi)
    if not rep.minimal:
        raise ValueError(f"constructed function is not minimal ({rep.failure})")
    return pi
