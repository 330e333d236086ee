"""Certified sign proofs for the package's scheme-margin functions.

Five one- and two-variable rational functions control when the quota-scheme
and cut pipelines succeed.  This module proves their sign over exact
rational domains by adaptive bisection: every box must carry a rigorous
interval bound of the right sign (natural extension first, mean-value form
second), and boxes hugging a singular locus are closed out by divergence
collars: the offending factor is bounded through the reciprocal of its upper
endpoint, certifying that the function blows up to +infinity there.

Certificates serialize to JSON with hex-float endpoints and the bisection
path of every leaf, so a replay can rebuild the exact tree, re-evaluate
every box bit-for-bit, and confirm full coverage of the domain.

Function ids (the CLI vocabulary) and what they mean here:

  g    -- the guaranteed combined size fraction of the three independent
          sets, 1 / (3 (1 - 2c)).
  h    -- scheme-system margin when all three pairwise part-size sums reach
          one half ("three pairs"); positive on [1/4, 0.297].
  k    -- margin when no pairwise sum reaches one half ("zero pairs");
          negative on [1/4, 5/18].
  ell  -- margin with two pairwise sums over one half ("two pairs");
          exceeds 0.003 on c in [1/4, 1/3], x in (0, 1/2).
  m    -- margin with exactly one pairwise sum over one half ("one pair");
          exceeds 0.099 on x in [1/2, 1], c in [1/4, 1/3].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import PreconditionError
from .intervals import Interval, mean_value_enclosure, recip_pole_upper

F = Fraction

# -- the closed forms, polymorphic over Fraction / Interval / Dual ------------


def indep_triple_fraction(c):
    """Combined size fraction of the three independent sets: 1/(3(1-2c))."""
    return 1 / (3 * (1 - 2 * c))


def margin_three_pairs(c):
    g = indep_triple_fraction(c)
    return g / (3 * (3 - 2 * g)) + 2 * c * (1 - g) - (c + (1 - g) ** 2 / 3)


def margin_zero_pairs(c):
    g = indep_triple_fraction(c)
    return c + (1 - g) / 6 - (g / (18 * (1 - g)) + (1 - g) / (3 - 2 * g))


def margin_two_pairs(c, x):
    g = indep_triple_fraction(c)
    return (
        ((g - x) ** 2 + 2 * (1 - g) ** 2) / (18 * x * (1 - 2 * x))
        - (1 - g) ** 2 / (6 * x)
        + F(1, 6)
        - c
    )


def margin_one_pair(x, c):
    """Literal published form of the one-pair margin."""
    g = indep_triple_fraction(c)
    d = 1 - 2 * (g - x)
    return (
        (1 + 1 / d - 1 / x) * (x / (1 - x))
        + 1 / d
        + 2 * (1 - g) / (x * (1 - x))
        + 1
        - 3 * (1 - x) * (1 - g) / x
        - 18 * c
    )


def margin_one_pair_compact(x, c):
    """Same function, algebraically collapsed: fewer correlated occurrences,
    so interval evaluation is much tighter.  Exact equality with the literal
    form is asserted by the test suite over random rationals."""
    g = indep_triple_fraction(c)
    d = 1 - 2 * (g - x)
    return (
        1 / (d * (1 - x))
        + 2 * (1 - g) / (x * (1 - x))
        - 3 * (1 - x) * (1 - g) / x
        - 18 * c
    )


# -- independently transcribed high-precision evaluators ----------------------


def _mp_g(c):
    return 1 / (3 * (1 - 2 * c))


def _mp_h(c):
    g = _mp_g(c)
    return g / (3 * (3 - 2 * g)) + 2 * c * (1 - g) - (c + (1 - g) ** 2 / 3)


def _mp_k(c):
    g = _mp_g(c)
    return c + (1 - g) / 6 - (g / (18 * (1 - g)) + (1 - g) / (3 - 2 * g))


def _mp_ell(c, x):
    g = _mp_g(c)
    num = (g - x) ** 2 + 2 * (1 - g) ** 2
    return num / (18 * x * (1 - 2 * x)) - (1 - g) ** 2 / (6 * x) + mpmath.mpf(1) / 6 - c


def _mp_m(x, c):
    g = _mp_g(c)
    d = 1 - 2 * (g - x)
    return (
        (1 + 1 / d - 1 / x) * (x / (1 - x))
        + 1 / d
        + 2 * (1 - g) / (x * (1 - x))
        + 1
        - 3 * (1 - x) * (1 - g) / x
        - 18 * c
    )


def highprec_value(fid, *points, dps=60):
    """Pointwise value from the independently transcribed mpmath formulas."""
    fn = {"g": _mp_g, "h": _mp_h, "k": _mp_k, "ell": _mp_ell, "m": _mp_m}[fid]
    with mpmath.workdps(dps):
        args = [mpmath.mpf(p.numerator) / p.denominator for p in map(Fraction, points)]
        return fn(*args)


# -- collar rules ---------------------------------------------------------------

COLLAR_WIDTH = F(1, 10000)


def _ell_left_bound(box):
    # ell = P/(18x) + 1/6 - c with P = ((g-x)^2 + 2(1-g)^2)/(1-2x) - 3(1-g)^2,
    # and P stays positive near x = 0 because it tends to 2g - 1 >= 1/3
    c, x = box
    g = indep_triple_fraction(c)
    p = ((g - x) ** 2 + 2 * (1 - g) ** 2) / (1 - 2 * x) - 3 * (1 - g) ** 2
    if not p.lo > 0.0:
        return None
    lead = p * recip_pole_upper(18 * x)
    return (lead + (F(1, 6) - c)).lo


def _ell_right_bound(box):
    # the numerator is bounded away from 0 while 18x(1-2x) vanishes from above
    c, x = box
    g = indep_triple_fraction(c)
    num = (g - x) ** 2 + 2 * (1 - g) ** 2
    if not num.lo > 0.0:
        return None
    lead = num * recip_pole_upper(18 * x * (1 - 2 * x))
    return (lead - (1 - g) ** 2 / (6 * x) + (F(1, 6) - c)).lo


def _m_right_bound(box):
    # m = N/(1-x) + R with N = x + x/d - 1 + 2(1-g)/x positive near x = 1
    x, c = box
    g = indep_triple_fraction(c)
    d = 1 - 2 * (g - x)
    if not d.lo > 0.0:
        return None
    u = 1 / d
    n_part = x + x * u - 1 + 2 * (1 - g) / x
    if not n_part.lo > 0.0:
        return None
    r_part = u + 1 - 3 * (1 - x) * (1 - g) / x - 18 * c
    return (n_part * recip_pole_upper(1 - x) + r_part).lo


def _m_denominator_bound(box):
    # near the corner where 1 - 2(g - x) vanishes: m = 1/(d(1-x)) + rest
    x, c = box
    g = indep_triple_fraction(c)
    d = 1 - 2 * (g - x)
    prod = d * (1 - x)
    if not prod.hi > 0.0:
        return None
    rest = 2 * (1 - g) / (x * (1 - x)) - 3 * (1 - x) * (1 - g) / x - 18 * c
    return (recip_pole_upper(prod) + rest).lo


@dataclass(frozen=True)
class DenominatorCollar:
    """Dynamic collar: fires when the singular factor's upper bound drops
    under the collar width, certifying divergence off the factor's
    nonpositive locus (inside the exact domain that locus is a single
    boundary point)."""

    tag: str
    factor: callable = field(repr=False)
    bound: callable = field(repr=False)
    width: Fraction = COLLAR_WIDTH

    def applies(self, box):
        f = self.factor(*box)
        return f.hi <= float(self.width)

    def describe(self):
        return {
            "kind": "factor",
            "tag": self.tag,
            "width": str(self.width),
            "divergence": "+inf",
            "excludes": "zero locus of the factor",
        }


# -- function registry -----------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """One independently bisected piece of a function's domain.

    Collar-strip regions carry a specialized divergence bound that is tried
    first; its claim excludes the singular boundary itself (where the
    function is undefined), which is recorded in the certificate.
    """

    name: str
    domain: tuple
    strip_bound: callable | None = field(default=None, repr=False)
    excludes: str | None = None

    def describe(self):
        out = {"name": self.name, "domain": [[str(a), str(b)] for a, b in self.domain]}
        if self.excludes:
            out["kind"] = "strip"
            out["divergence"] = "+inf"
            out["excludes"] = self.excludes
        return out


@dataclass(frozen=True)
class CertifiedFunction:
    fid: str
    name: str
    arity: int
    domain: tuple
    expr: callable = field(repr=False)
    work_expr: callable = field(repr=False)
    regions: tuple = ()
    dynamic_collars: tuple = ()
    default_sign: str = "positive"
    default_margin: Fraction | None = None


_D = COLLAR_WIDTH
_ELL_DOMAIN = ((F(1, 4), F(1, 3)), (F(0), F(1, 2)))
_M_DOMAIN = ((F(1, 2), F(1)), (F(1, 4), F(1, 3)))


def _whole_region(domain):
    return (Region("main", domain),)


FUNCTIONS = {
    "g": CertifiedFunction(
        "g",
        "indep_triple_fraction",
        1,
        ((F(1, 4), F(1, 3)),),
        indep_triple_fraction,
        indep_triple_fraction,
        regions=_whole_region(((F(1, 4), F(1, 3)),)),
        default_sign="positive",
    ),
    "h": CertifiedFunction(
        "h",
        "margin_three_pairs",
        1,
        ((F(1, 4), F(297, 1000)),),
        margin_three_pairs,
        margin_three_pairs,
        regions=_whole_region(((F(1, 4), F(297, 1000)),)),
        default_sign="positive",
    ),
    "k": CertifiedFunction(
        "k",
        "margin_zero_pairs",
        1,
        ((F(1, 4), F(5, 18)),),
        margin_zero_pairs,
        margin_zero_pairs,
        regions=_whole_region(((F(1, 4), F(5, 18)),)),
        default_sign="negative",
    ),
    "ell": CertifiedFunction(
        "ell",
        "margin_two_pairs",
        2,
        _ELL_DOMAIN,
        margin_two_pairs,
        margin_two_pairs,
        regions=(
            Region(
                "collar:x_zero",
                ((F(1, 4), F(1, 3)), (F(0), _D)),
                _ell_left_bound,
                excludes="x = 0",
            ),
            Region("main", ((F(1, 4), F(1, 3)), (_D, F(1, 2) - _D))),
            Region(
                "collar:x_half",
                ((F(1, 4), F(1, 3)), (F(1, 2) - _D, F(1, 2))),
                _ell_right_bound,
                excludes="x = 1/2",
            ),
        ),
        default_sign="positive",
        default_margin=F(3, 1000),
    ),
    "m": CertifiedFunction(
        "m",
        "margin_one_pair",
        2,
        _M_DOMAIN,
        margin_one_pair,
        margin_one_pair_compact,
        regions=(
            Region("main", ((F(1, 2), F(1) - _D), (F(1, 4), F(1, 3)))),
            Region(
                "collar:x_one",
                ((F(1) - _D, F(1)), (F(1, 4), F(1, 3))),
                _m_right_bound,
                excludes="x = 1",
            ),
        ),
        dynamic_collars=(
            DenominatorCollar(
                "pair_gap",
                factor=lambda x, c: 1 - 2 * (indep_triple_fraction(c) - x),
                bound=_m_denominator_bound,
            ),
        ),
        default_sign="positive",
        default_margin=F(99, 1000),
    ),
}


def interval_eval(f: CertifiedFunction, box) -> Interval:
    """Range enclosure of f on the box via the natural interval extension of
    the literal closed form."""
    return f.expr(*box)


# -- certification ------------------------------------------------------------------


@dataclass(frozen=True)
class CertBox:
    path: str
    lo: tuple
    hi: tuple
    kind: str
    bound: float


@dataclass
class SignCertificate:
    function: str
    name: str
    domain: tuple
    sign: str
    margin: Fraction | None
    regions: list  # (region description, [CertBox, ...]) pairs
    collars: list
    status: str
    undecided: list
    stats: dict

    @property
    def proved(self):
        return self.status == "proved"

    @property
    def boxes(self):
        return [b for _, leaves in self.regions for b in leaves]

    def to_json(self):
        return {
            "format": "sparsehalves-cert-1",
            "function": self.function,
            "name": self.name,
            "domain": [[str(a), str(b)] for a, b in self.domain],
            "sign": self.sign,
            "margin": None if self.margin is None else str(self.margin),
            "collars": self.collars,
            "status": self.status,
            "regions": [
                {
                    "region": desc,
                    "boxes": [
                        {
                            "path": b.path,
                            "lo": [x.hex() for x in b.lo],
                            "hi": [x.hex() for x in b.hi],
                            "kind": b.kind,
                            "bound": b.bound.hex(),
                        }
                        for b in leaves
                    ],
                }
                for desc, leaves in self.regions
            ],
            "undecided": [
                {"lo": [x.hex() for x in lo], "hi": [x.hex() for x in hi]}
                for lo, hi in self.undecided
            ],
            "stats": self.stats,
        }

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


def root_box(domain):
    out = []
    for a, b in domain:
        lo_iv = Interval.from_fraction(a)
        hi_iv = Interval.from_fraction(b)
        out.append(Interval(lo_iv.lo, hi_iv.hi))
    return tuple(out)


def split_dimension(box, root):
    """Widest dimension relative to the root widths; ties to the lowest."""
    best, best_rel = 0, -1.0
    for i, (iv, r) in enumerate(zip(box, root)):
        rw = r.width() or 1.0
        rel = iv.width() / rw
        if rel > best_rel:
            best, best_rel = i, rel
    return best


def _passes(value, sign, margin_f):
    if value is None:
        return None
    if sign == "positive":
        lo = value.lo if isinstance(value, Interval) else value
        return lo if lo > margin_f else None
    hi = value.hi if isinstance(value, Interval) else value
    return hi if hi < -margin_f else None


def _evaluate_box(f, region, box, sign, margin_f):
    """(kind, certified bound) or None if the box needs splitting."""
    if region.strip_bound is not None and sign == "positive":
        got = region.strip_bound(box)
        if got is not None and got > margin_f:
            return region.name, got
    got = _passes(f.work_expr(*box), sign, margin_f)
    if got is not None:
        return "direct", got
    mv = mean_value_enclosure(f.work_expr, box)
    got = _passes(mv, sign, margin_f)
    if got is not None:
        return "meanvalue", got
    if sign == "positive":
        for collar in f.dynamic_collars:
            if collar.applies(box):
                got = collar.bound(box)
                if got is not None and got > margin_f:
                    return f"collar:{collar.tag}", got
    return None


def certify_sign(fid, sign=None, margin=None, budget=10 ** 6):
    """Adaptive-bisection sign certificate for one registered function.

    Each declared region (the main body and any collar strips) is bisected
    independently.  Never returns a false "proved": a box enters the
    certificate only with a rigorous bound of the requested sign (clearing
    the margin), and the status is "proved" only when the leaves tile every
    region.  Budget exhaustion and undecidable (atomically small) boxes are
    reported as distinct non-proved statuses with the frontier attached.
    """
    f = FUNCTIONS[fid]
    sign = sign or f.default_sign
    if sign not in ("positive", "negative"):
        raise PreconditionError(f"unknown sign {sign!r}")
    margin = f.default_margin if margin is None else Fraction(margin)
    margin_f = 0.0 if margin is None else float(Interval.from_fraction(margin).hi)
    regions_out = []
    undecided = []
    evals = 0
    status = "proved"
    max_depth = 0
    for region in f.regions:
        root = root_box(region.domain)
        stack = [(root, "")]
        leaves = []
        while stack:
            box, path = stack.pop()
            evals += 1
            if evals > budget:
                status = "budget"
                undecided.append(
                    (tuple(iv.lo for iv in box), tuple(iv.hi for iv in box))
                )
                undecided.extend(
                    (tuple(iv.lo for iv in b), tuple(iv.hi for iv in b))
                    for b, _ in stack
                )
                stack = []
                break
            verdict = _evaluate_box(f, region, box, sign, margin_f)
            if verdict is not None:
                kind, bound = verdict
                leaves.append(
                    CertBox(
                        path,
                        tuple(iv.lo for iv in box),
                        tuple(iv.hi for iv in box),
                        kind,
                        float(bound),
                    )
                )
                max_depth = max(max_depth, len(path))
                continue
            d = split_dimension(box, root)
            iv = box[d]
            mid = iv.mid()
            if not (iv.lo < mid < iv.hi):
                status = "failed"
                undecided.append((tuple(i.lo for i in box), tuple(i.hi for i in box)))
                continue
            lo_child = tuple(
                Interval(iv.lo, mid) if i == d else b for i, b in enumerate(box)
            )
            hi_child = tuple(
                Interval(mid, iv.hi) if i == d else b for i, b in enumerate(box)
            )
            stack.append((hi_child, path + "1"))
            stack.append((lo_child, path + "0"))
        regions_out.append((region.describe(), leaves))
        if status == "budget":
            break
    collars = [r.describe() for r in f.regions if r.excludes] + [
        c.describe() for c in f.dynamic_collars
    ]
    return SignCertificate(
        function=fid,
        name=f.name,
        domain=f.domain,
        sign=sign,
        margin=margin,
        regions=regions_out,
        collars=collars,
        status=status,
        undecided=undecided,
        stats={
            "boxes": sum(len(leaves) for _, leaves in regions_out),
            "evaluations": evals,
            "max_depth": max_depth,
        },
    )


# -- replay -------------------------------------------------------------------------


def load_certificate(path):
    with open(path) as fh:
        raw = json.load(fh)
    if raw.get("format") != "sparsehalves-cert-1":
        raise PreconditionError("not a recognized certificate file")
    return raw


def replay(raw) -> dict:
    """Re-validate a serialized certificate.

    Per region: rebuilds every leaf box from its bisection path (the split
    rule is deterministic), demands bit-identical endpoints, re-runs the box
    rule, and checks the paths tile the region exactly (prefix-free, dyadic
    measure one).  Also checks the region domains partition the declared
    function domain.  Returns a report; ok means 'proved reproduces'.
    """
    if isinstance(raw, (str, bytes)) or hasattr(raw, "__fspath__"):
        raw = load_certificate(raw)
    fid = raw["function"]
    f = FUNCTIONS[fid]
    sign = raw["sign"]
    margin = None if raw["margin"] is None else Fraction(raw["margin"])
    margin_f = 0.0 if margin is None else float(Interval.from_fraction(margin).hi)
    report = {
        "function": fid,
        "boxes": sum(len(r["boxes"]) for r in raw["regions"]),
        "ok": False,
        "problems": [],
    }
    problems = report["problems"]
    if raw["status"] != "proved":
        problems.append(f"stored status is {raw['status']!r}, not proved")
        return report
    declared = {r.name: r for r in f.regions}
    stored_names = [r["region"]["name"] for r in raw["regions"]]
    if sorted(stored_names) != sorted(declared):
        problems.append(f"regions {stored_names} differ from declared {list(declared)}")
        return report

    for stored in raw["regions"]:
        name = stored["region"]["name"]
        region = declared[name]
        dom = tuple(
            (Fraction(a), Fraction(b)) for a, b in stored["region"]["domain"]
        )
        if dom != tuple(region.domain):
            problems.append(f"region {name} domain mismatch")
            continue
        root = root_box(dom)
        paths = set()
        for entry in stored["boxes"]:
            path = entry["path"]
            if path in paths:
                problems.append(f"{name}: duplicate path {path!r}")
                continue
            paths.add(path)
            box = root
            for bit in path:
                d = split_dimension(box, root)
                iv = box[d]
                mid = iv.mid()
                child = Interval(iv.lo, mid) if bit == "0" else Interval(mid, iv.hi)
                box = tuple(child if i == d else b for i, b in enumerate(box))
            lo = tuple(float.fromhex(x) for x in entry["lo"])
            hi = tuple(float.fromhex(x) for x in entry["hi"])
            if tuple(iv.lo for iv in box) != lo or tuple(iv.hi for iv in box) != hi:
                problems.append(f"{name}: path {path!r} rebuilds a different box")
                continue
            verdict = _evaluate_box(f, region, box, sign, margin_f)
            if verdict is None:
                problems.append(f"{name}: box {path!r} no longer certifies")
                continue
            kind, bound = verdict
            if kind != entry["kind"] or float(bound).hex() != entry["bound"]:
                problems.append(
                    f"{name}: box {path!r} certifies differently "
                    f"({kind}, {float(bound).hex()})"
                )
        # coverage: prefix-free set of dyadic cells with total measure one
        measure = sum(Fraction(1, 2 ** len(p)) for p in paths)
        ordered = sorted(paths)
        for a, b in zip(ordered, ordered[1:]):
            if b.startswith(a):
                problems.append(f"{name}: path {a!r} is a prefix of {b!r}")
        if measure != 1:
            problems.append(f"{name}: leaves cover measure {measure}, not 1")

    if not _regions_partition_domain(f):
        problems.append("declared regions do not partition the function domain")
    report["ok"] = not problems
    return report


def _regions_partition_domain(f):
    """Region domains must tile f.domain: equal on all but one axis and
    chained end to end on the split axis (or a single whole region)."""
    regions = list(f.regions)
    if len(regions) == 1:
        return tuple(regions[0].domain) == tuple(f.domain)
    split_dims = set()
    for r in regions:
        for i, span in enumerate(r.domain):
            if span != f.domain[i]:
                split_dims.add(i)
    if len(split_dims) != 1:
        return False
    d = split_dims.pop()
    spans = sorted(r.domain[d] for r in regions)
    if spans[0][0] != f.domain[d][0] or spans[-1][1] != f.domain[d][1]:
        return False
    return all(spans[i][1] == spans[i + 1][0] for i in range(len(spans) - 1))


# -- exact rational closed-form checks --------------------------------------------


class ClosedFormCheckFailed(AssertionError):
    pass


def closed_form_checks():
    """Exact-rational verification of the cut-route algebra.

    (i) the mixing quadratic x^2 - Bx + C with B = (2 - 3L/2)/(4L) and
        C = (1-L)/(4L) has global minimum (88L - 73L^2 - 16)/(256 L^2),
        as an identity in L (checked at 8/13 and random rationals);
    (ii) (4/13) c + (111/104) c^2 > (9/4) c^2 exactly iff c < 32/123;
    (iii) the zero-pairs regime guard: 1/(3(1-2c)) < 3/4 iff c < 5/18.
    """
    import random

    report = {}
    lam0 = F(8, 13)

    def quad_min(lam):
        b = (2 - F(3, 2) * lam) / (4 * lam)
        c = (1 - lam) / (4 * lam)
        return c - b * b / 4

    def quad_min_closed(lam):
        return (88 * lam - 73 * lam ** 2 - 16) / (256 * lam ** 2)

    rng = random.Random(20240801)
    sample = [lam0] + [
        F(rng.randint(1, 200), rng.randint(201, 400)) for _ in range(25)
    ]
    for lam in sample:
        if quad_min(lam) != quad_min_closed(lam):
            raise ClosedFormCheckFailed(f"quadratic minimum identity fails at {lam}")
    report["quadratic_minimum"] = {
        "at_8_13": str(quad_min(lam0)),
        "value_float": float(quad_min(lam0)),
        "identity_samples": len(sample),
    }

    def cut_gap(c):
        return F(4, 13) * c + F(111, 104) * c * c - F(9, 4) * c * c

    root = F(32, 123)
    if cut_gap(root) != 0:
        raise ClosedFormCheckFailed("32/123 is not the cut-polynomial root")
    for c in [F(1, 1000), F(1, 4), F(26, 100), root - F(1, 10 ** 9)]:
        if not cut_gap(c) > 0:
            raise ClosedFormCheckFailed(f"cut polynomial not positive at {c}")
    for c in [root + F(1, 10 ** 9), F(1, 3)]:
        if not cut_gap(c) < 0:
            raise ClosedFormCheckFailed(f"cut polynomial not negative at {c}")
    report["cut_polynomial"] = {"root": str(root), "positive_iff": f"0 < c < {root}"}

    if indep_triple_fraction(F(5, 18)) != F(3, 4):
        raise ClosedFormCheckFailed("g(5/18) != 3/4")
    for c in [F(1, 4), F(5, 18) - F(1, 10 ** 6)]:
        if not indep_triple_fraction(c) < F(3, 4):
            raise ClosedFormCheckFailed(f"g({c}) not under 3/4")
    if not indep_triple_fraction(F(5, 18) + F(1, 10 ** 6)) > F(3, 4):
        raise ClosedFormCheckFailed("g not above 3/4 past 5/18")
    report["three_quarters_guard"] = {"g_at_5_18": "3/4"}
    return report
