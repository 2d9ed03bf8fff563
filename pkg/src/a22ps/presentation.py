"""Relations R0, the ideals I_{k,i}, and ideal membership.

Ideals are handled through their image in M = U / U n+, see
:mod:`a22ps.graded`.  Every generator is a truncated formal sum, normal
ordered, with plus-class monomials discarded, and split into bihomogeneous
components.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Element, NormalMonomial, monomial_sort_key, order_word_fold, render_monomial
from .exact import QuarterInt, format_fraction
from .graded import Box, GradedSubmodule, TruncationError, default_box, drop_plus, negative_monomials


class Convention(str, enum.Enum):
    """Which quantity the truncated relation requires to be negative."""

    MNeg = "MNeg"      # the seeds m_j
    ArgNeg = "ArgNeg"  # the operator arguments m_j + i_j


class Weighting(str, enum.Enum):
    """Multiplicity attached to each shift vector of a mixed relation."""

    Uniform = "Uniform"        # every admissible shift vector once
    Tournament = "Tournament"  # coefficient of the shift monomial in prod_{i<j} (x_i^(1/2) + x_j^(1/2))


class ExtraForm(str, enum.Enum):
    SumFamily = "SumFamily"
    PowerForm = "PowerForm"


class Family(str, enum.Enum):
    MixedR = "MixedR"
    PureA12 = "PureA12"


@dataclass(frozen=True)
class RelationId:
    family: Family
    t: QuarterInt
    r: int | None = None

    @classmethod
    def mixed(cls, r: int, t) -> "RelationId":
        return cls(Family.MixedR, QuarterInt.of(t), r)

    @classmethod
    def pure(cls, t) -> "RelationId":
        return cls(Family.PureA12, QuarterInt.of(t), None)

    @property
    def t4(self) -> int:
        return self.t.numerator

    def charge(self, k: int) -> int:
        return k + 1 + self.r if self.family is Family.MixedR else 2 * (k + 1)

    def lower_bound4(self, k: int) -> int:
        return k + 1 + 3 * self.r if self.family is Family.MixedR else 4 * (k + 1)

    def valid_for(self, k: int) -> bool:
        if self.family is Family.MixedR:
            if self.r is None or not 0 <= self.r <= k:
                return False
        elif not self.t.is_integer():
            return False
        return self.t4 >= self.lower_bound4(k)

    def __str__(self):
        if self.family is Family.MixedR:
            return f"MixedR(r={self.r}, t={self.t})"
        return f"PureA12(t={self.t})"


@dataclass(frozen=True)
class IdealSpec:
    k: int
    i: int
    convention: Convention = Convention.MNeg
    extra_form: ExtraForm = ExtraForm.SumFamily
    weighting: Weighting = Weighting.Tournament

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"level k must be a positive integer, got {self.k!r}")
        if not isinstance(self.i, int) or not 0 <= self.i <= self.k:
            raise ValueError(f"i must lie in 0..{self.k}, got {self.i!r}")
        object.__setattr__(self, "convention", Convention(self.convention))
        object.__setattr__(self, "extra_form", ExtraForm(self.extra_form))
        object.__setattr__(self, "weighting", Weighting(self.weighting))

    def with_i(self, i: int) -> "IdealSpec":
        return IdealSpec(self.k, i, self.convention, self.extra_form, self.weighting)

    def descriptor(self) -> dict:
        return {"k": self.k, "i": self.i, "convention": self.convention.value,
                "extra_form": self.extra_form.value, "weighting": self.weighting.value}

    def key(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)


# ---------------------------------------------------------------------------
# R0 generators

def _ordered_sums(parts: int, total: int, step: int, top: int):
    """Ordered tuples of ``parts`` ints ``<= top``, congruent to top mod step, summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    slack = parts * top - total
    if slack < 0 or slack % step:
        return
    units = slack // step
    for cut in itertools.combinations(range(units + parts - 1), parts - 1):
        prev, gaps = -1, []
        for c in cut:
            gaps.append(c - prev - 1)
            prev = c
        gaps.append(units + parts - 2 - prev)
        yield tuple(top - step * g for g in gaps)


def shift_vectors(k: int, r: int) -> list[tuple[int, ...]]:
    """Shift tuples in quarter units: entries in {0, 2, ..., 2(k-r)}, sum (k-r)(k-r+1)."""
    n = k + 1 - r
    top = 2 * (k - r)
    total = (k - r) * (k - r + 1)
    return [s for s in itertools.product(range(0, top + 1, 2), repeat=n) if sum(s) == total]


@lru_cache(maxsize=None)
def tournament_count(scores: tuple[int, ...]) -> int:
    """Number of labelled tournaments whose out-degree sequence is ``scores``."""
    n = len(scores)
    if n <= 1:
        return int(all(s == 0 for s in scores))
    if sum(scores) != n * (n - 1) // 2 or min(scores) < 0:
        return 0
    first, rest = scores[0], scores[1:]
    total = 0
    # vertex 0 beats the vertices in `beaten`; every other vertex spends one win on it
    for beaten in itertools.combinations(range(n - 1), first):
        nxt = [s if j in beaten else s - 1 for j, s in enumerate(rest)]
        if min(nxt, default=0) >= 0:
            total += tournament_count(tuple(sorted(nxt)))
    return total


def shift_weights(k: int, r: int, weighting: Weighting) -> list[tuple[tuple[int, ...], int]]:
    """Shift vectors with their multiplicities under ``weighting``."""
    out = []
    for s in shift_vectors(k, r):
        w = 1 if weighting is Weighting.Uniform else tournament_count(tuple(sorted(x // 2 for x in s)))
        if w:
            out.append((s, w))
    return out


@lru_cache(maxsize=None)
def _r0_vector(k: int, family: Family, r: int | None, t4: int, convention: Convention,
               weighting: Weighting = Weighting.Tournament) -> tuple:
    """Negative part of the normal-ordered truncated relation, as sorted (monomial, Fraction) pairs."""
    words: dict = {}
    if family is Family.PureA12:
        for seeds in _ordered_sums(k + 1, -t4, 4, -4):
            key = tuple((True, m) for m in seeds)
            words[key] = words.get(key, 0) + 1
    else:
        n = k + 1 - r
        shifts = shift_weights(k, r, weighting)
        shift_total = (k - r) * (k - r + 1)
        if convention is Convention.MNeg:
            target = -t4 - shift_total
            for split in range(target, 0):
                for a12 in _ordered_sums(r, target - split, 4, -4):
                    for seeds in _ordered_sums(n, split, 2, -1):
                        for s, mult in shifts:
                            key = tuple((False, m + i) for m, i in zip(seeds, s)) + tuple((True, m) for m in a12)
                            words[key] = words.get(key, 0) + mult
        else:
            target = -t4
            for split in range(target, 0):
                for a12 in _ordered_sums(r, target - split, 4, -4):
                    for args in _ordered_sums(n, split, 2, -1):
                        key = tuple((False, a) for a in args) + tuple((True, m) for m in a12)
                        words[key] = words.get(key, 0) + sum(mult for _, mult in shifts)
    out: dict = {}
    for word, mult in words.items():
        for mono, c in order_word_fold(word).items():
            if not mono.is_plus_class():
                out[mono] = out.get(mono, 0) + mult * c
    return tuple(sorted(((m, c) for m, c in out.items() if c), key=lambda mc: monomial_sort_key(mc[0])))


def r0_generator(k: int, rid: RelationId, convention: Convention = Convention.MNeg,
                 weighting: Weighting = Weighting.Tournament) -> list[Element]:
    """Bihomogeneous components of the truncated relation ``rid`` at level ``k``.

    Returns ``[]`` when the relation is not valid for ``k`` or its index set
    yields nothing after discarding plus-class monomials.
    """
    if not rid.valid_for(k):
        return []
    vec = dict(_r0_vector(k, rid.family, rid.r, rid.t4, Convention(convention), Weighting(weighting)))
    if not vec:
        return []
    return list(Element.from_real(vec).components().values())


def extra_generators(spec: IdealSpec) -> list[Element]:
    e = spec.k + 1 - spec.i
    if spec.i == 0:
        return []
    if spec.extra_form is ExtraForm.PowerForm:
        return [Element.monomial(NormalMonomial((-1,) * e, ()))]
    return [Element.monomial(NormalMonomial((-1,) * l, (-4,) * (e - l))) for l in range(e + 1)]


def relation_ids(k: int, box: Box) -> list[RelationId]:
    """Every R0 family member whose charge and weight fit the box."""
    out = []
    for r in range(k + 1):
        if k + 1 + r <= box.max_charge:
            out.extend(RelationId.mixed(r, QuarterInt(t4)) for t4 in range(k + 1 + 3 * r, box.max_w4 + 1))
    if 2 * (k + 1) <= box.max_charge:
        out.extend(RelationId.pure(QuarterInt(t4)) for t4 in range(4 * (k + 1), box.max_w4 + 1, 4))
    return out


def generators(spec: IdealSpec, box: Box) -> list[tuple[str, Element]]:
    """All bihomogeneous generators of I_{k,i} inside ``box``, labelled."""
    out = []
    for rid in relation_ids(spec.k, box):
        for comp in r0_generator(spec.k, rid, spec.convention, spec.weighting):
            out.append((str(rid), comp))
    for g in extra_generators(spec):
        if next(iter(g.bidegrees())) in box:
            out.append(("extra", g))
    return out


def _terms_json(e: Element) -> list:
    return [[render_monomial(m), format_fraction(c.re), format_fraction(c.im)] for m, c in e]


def generators_json(spec: IdealSpec, box: Box) -> str:
    records = []
    for rid in relation_ids(spec.k, box):
        comps = r0_generator(spec.k, rid, spec.convention, spec.weighting)
        if comps:
            records.append({"family": rid.family.value, "r": rid.r, "t": rid.t4,
                            "components": [{"bidegree": list(next(iter(c.bidegrees()))), "terms": _terms_json(c)}
                                           for c in comps]})
    for g in extra_generators(spec):
        records.append({"family": "Extra", "r": None, "t": g.bidegrees().pop()[1],
                        "components": [{"bidegree": list(g.bidegrees().pop()), "terms": _terms_json(g)}]})
    return json.dumps({"spec": spec.descriptor(), "box": box.as_list(), "generators": records},
                      sort_keys=True, indent=1)


# ---------------------------------------------------------------------------
# ideals as submodules of M

_SUBMODULES: dict = {}


def ideal_submodule(spec: IdealSpec, box: Box | None = None) -> GradedSubmodule:
    """Image of I_{k,i} in M, truncated to ``box`` (default box when omitted).

    The piece at a bidegree depends only on generators of smaller or equal
    bidegree, so a submodule built for a larger box serves smaller ones.
    """
    box = box or default_box(spec.k)
    held = _SUBMODULES.get(spec)
    if held is not None and box.max_charge <= held.box.max_charge and box.max_w4 <= held.box.max_w4:
        return held
    if held is not None:
        box = Box(max(box.max_charge, held.box.max_charge), max(box.max_w4, held.box.max_w4))
    seeds: dict = {}
    for _, g in generators(spec, box):
        for b, comp in g.components().items():
            re_part, im_part = comp.negative_part().real_parts()
            for part in (re_part, im_part):
                if part:
                    seeds.setdefault(b, []).append(part)
    sub = GradedSubmodule(seeds, box)
    _SUBMODULES[spec] = sub
    return sub


def clear_caches() -> None:
    _SUBMODULES.clear()


def _bidegree_of(charge: int, weight) -> tuple[int, int]:
    return charge, QuarterInt.of(weight).numerator


def ideal_span_in_bidegree(spec: IdealSpec, charge: int, weight, box: Box | None = None) -> list[Element]:
    """Spanning elements u*g of the ideal at (charge, weight), for u all-negative.

    The plus-class monomials of the ideal are implicit: the piece of U n+ at a
    bidegree is spanned by every plus-class monomial, an infinite set, and it
    is never listed.  Only the multiples of generators are returned.
    """
    b = _bidegree_of(charge, weight)
    box = box or default_box(spec.k)
    box.require(b)
    out = []
    for _, g in generators(spec, box):
        gb = next(iter(g.bidegrees()))
        rest = (b[0] - gb[0], b[1] - gb[1])
        if rest[0] < 0 or rest[1] < 0:
            continue
        for u in negative_monomials(*rest):
            prod = (Element.monomial(u) * g).negative_part()
            if prod:
                out.append(prod)
    return out


def real_components(e: Element) -> list[tuple[tuple[int, int], dict]]:
    out = []
    for b, comp in e.components().items():
        re_part, im_part = comp.negative_part().real_parts()
        out.extend((b, part) for part in (re_part, im_part) if part)
    return out


def member_of_ideal(spec: IdealSpec, e: Element, box: Box | None = None) -> bool:
    box = box or default_box(spec.k)
    for b in e.bidegrees():
        box.require(b)
    sub = ideal_submodule(spec, box)
    return all(sub.contains(b, part) for b, part in real_components(e))


# ---------------------------------------------------------------------------
# lemma checks on a box

def _basis_elements(sub: GradedSubmodule, b) -> list[Element]:
    return [Element.from_real(row) for row in sub.basis(b).rows.values()]


def check_tau_lemma(k: int, box: Box, convention=Convention.MNeg, extra_form=ExtraForm.SumFamily) -> list[str]:
    """tau maps I_{k,k} onto I_{k,0}; returns a list of failures (empty on success)."""
    from .algebra import tau
    src = ideal_submodule(IdealSpec(k, k, convention, extra_form), box)
    dst = ideal_submodule(IdealSpec(k, 0, convention, extra_form), box)
    failures = []
    for c, w4 in box.bidegrees():
        target = (c, w4 - 2 * c)
        if target[1] < 0:
            if src.quotient_dim((c, w4)) != 0:
                failures.append(f"{(c, w4)}: quotient of I_{{k,k}} nonzero below the shifted range")
            continue
        for g in _basis_elements(src, (c, w4)):
            img = tau(g, "forward")
            if not all(dst.contains(b, part) for b, part in real_components(img)):
                failures.append(f"{(c, w4)}: tau image of {g} not in I_{{k,0}}")
                break
        if src.quotient_dim((c, w4)) != dst.quotient_dim(target):
            failures.append(f"{(c, w4)}: quotient dimensions differ")
    return failures


def check_psi_tau_lemma(k: int, box: Box, convention=Convention.MNeg, extra_form=ExtraForm.SumFamily) -> list[str]:
    """psi(tau(I_{k,k})) lies in I_{k,k-1}."""
    from .algebra import psi, tau
    src = ideal_submodule(IdealSpec(k, k, convention, extra_form), box)
    dst = ideal_submodule(IdealSpec(k, k - 1, convention, extra_form), box)
    failures = []
    for c, w4 in box.bidegrees():
        if (c + 1, w4 + 1) not in box:
            continue
        for g in _basis_elements(src, (c, w4)):
            img = psi(tau(g, "forward"))
            if not all(dst.contains(b, part) for b, part in real_components(img)):
                failures.append(f"{(c, w4)}: psi tau image of {g} not in I_{{k,k-1}}")
                break
    return failures


def check_inclusion_lemma(k: int, box: Box, convention=Convention.MNeg, extra_form=ExtraForm.SumFamily) -> list[str]:
    """g * x1(-1/4)^(k-i-s) x12(-1)^s lies in I_{k,i} for g in I_{k,k} and i + s <= k."""
    src = ideal_submodule(IdealSpec(k, k, convention, extra_form), box)
    failures = []
    for i in range(k + 1):
        dst = ideal_submodule(IdealSpec(k, i, convention, extra_form), box)
        for s in range(k - i + 1):
            tail = Element.monomial(NormalMonomial((-1,) * (k - i - s), (-4,) * s))
            dc, dw = next(iter(tail.bidegrees()))
            for c, w4 in box.bidegrees():
                if (c + dc, w4 + dw) not in box:
                    continue
                for g in _basis_elements(src, (c, w4)):
                    img = g * tail
                    if not all(dst.contains(b, part) for b, part in real_components(img)):
                        failures.append(f"i={i} s={s} {(c, w4)}: {g} times tail not in I_{{k,i}}")
                        break
    return failures


__all__ = [
    "Convention", "ExtraForm", "Family", "RelationId", "IdealSpec", "r0_generator", "extra_generators",
    "relation_ids", "generators", "generators_json", "ideal_submodule", "ideal_span_in_bidegree",
    "member_of_ideal", "check_tau_lemma", "check_psi_tau_lemma", "check_inclusion_lemma",
    "TruncationError", "shift_vectors",
]
