"""Module side: level-1 cyclic modules, tensor products, virtual subspaces and maps.

Level-1 factors are the quotients M / N of M = U / U n+ by the proven
level-1 ideals.  A factor vector is a dict on non-pivot monomials of its
native bidegree; a tensor vector is a dict on tuples of such monomials.
Every grading here is normalized so that the cyclic tensor vector sits at
(0, 0).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import NormalMonomial, bracket_coeff, left_mul
from .graded import Box, DimTable, TruncationError, negative_monomials
from .linalg import EchelonBasis
from .presentation import Convention, IdealSpec, ideal_submodule


class FactorKind(str, enum.Enum):
    Vacuum = "Vacuum"
    EAlpha = "EAlpha"
    X12Vec = "X12Vec"


_X12_NATIVE = (2, 4)


class FactorModule:
    """A level-1 cyclic module realized as a graded quotient of M."""

    def __init__(self, kind: FactorKind, box: Box):
        self.kind = FactorKind(kind)
        i = 1 if self.kind is FactorKind.EAlpha else 0
        # factors always use the level-1 ideals in their default reading
        self.sub = ideal_submodule(IdealSpec(1, i, Convention.MNeg), box)
        self.box = box
        if self.kind is FactorKind.X12Vec:
            self.offset = _X12_NATIVE
            self.cyclic = NormalMonomial((), (-4,))
        else:
            self.offset = (0, 0)
            self.cyclic = NormalMonomial((), ())
        self._act: dict = {}

    def cyclic_vector(self) -> dict:
        return self.sub.basis(self.offset).reduce({self.cyclic: Fraction(1)})

    def act_monomial(self, is_a12: bool, q: int, mono: NormalMonomial) -> dict:
        """Mode x(q/4) applied to the class of ``mono``, reduced to normal form."""
        key = (is_a12, q, mono)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        c, w4 = mono.bidegree
        target = (c + (2 if is_a12 else 1), w4 - q)
        if target[1] < 0:
            out: dict = {}
        else:
            if target not in self.box:
                raise TruncationError(f"factor action leaves box {self.box} at {target}")
            raw = {m: v for m, v in left_mul(is_a12, q, mono) if not m.is_plus_class()}
            out = self.sub.basis(target).reduce(raw)
        self._act[key] = out
        return out

    def act(self, is_a12: bool, q: int, vec: dict) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            for m, v in self.act_monomial(is_a12, q, mono).items():
                x = out.get(m, 0) + c * v
                if x:
                    out[m] = x
                else:
                    out.pop(m, None)
        return out

    def basis(self, b) -> list[NormalMonomial]:
        """Basis of the piece at v-normalized bidegree ``b``."""
        native = (b[0] + self.offset[0], b[1] + self.offset[1])
        return self.sub.quotient_basis(native)


_FACTORS: dict = {}


def build_factor(kind: FactorKind, box: Box) -> FactorModule:
    # X12Vec shares its underlying quotient with Vacuum but needs headroom for the offset
    native = Box(box.max_charge + 2, box.max_w4 + 4)
    key = (FactorKind(kind), native)
    fm = _FACTORS.get(key)
    if fm is None:
        fm = FactorModule(kind, native)
        _FACTORS[key] = fm
    return fm


def action_matrix(fm: FactorModule, is_a12: bool, q: int, b) -> tuple[list, list, list[list[Fraction]]]:
    """Matrix of a mode from the native piece ``b`` to its target piece (rows: source basis)."""
    src = fm.sub.quotient_basis(b)
    tgt_b = (b[0] + (2 if is_a12 else 1), b[1] - q)
    tgt = fm.sub.quotient_basis(tgt_b) if tgt_b[1] >= 0 else []
    index = {m: j for j, m in enumerate(tgt)}
    rows = []
    for m in src:
        row = [Fraction(0)] * len(tgt)
        for m2, v in fm.act_monomial(is_a12, q, m).items():
            row[index[m2]] = v
        rows.append(row)
    return src, tgt, rows


def check_bracket_relations(fm: FactorModule, window: int, box: Box) -> list[str]:
    """For x1 modes a, b with |degree| <= window/4, check [M_a, M_b] = M_[a,b] on every native piece of ``box``."""
    failures = []
    degrees = [d for d in range(-window, window + 1) if d % 2]
    for b in box.bidegrees():
        basis = fm.sub.quotient_basis(b)
        if not basis:
            continue
        for a in degrees:
            for c in degrees:
                if a >= c:
                    continue
                end = (b[0] + 2, b[1] - a - c)
                if end[1] < 0 or (b[0] + 1, b[1] - a) not in fm.box or (b[0] + 1, b[1] - c) not in fm.box \
                        or end not in fm.box:
                    continue
                coeff = bracket_coeff(a, c)
                for m in basis:
                    v = {m: Fraction(1)}
                    lhs = _sub(fm.act(False, a, fm.act(False, c, v)), fm.act(False, c, fm.act(False, a, v)))
                    rhs = {}
                    if coeff:
                        rhs = {k: coeff * x for k, x in fm.act(True, a + c, v).items()}
                    if _sub(lhs, rhs):
                        failures.append(f"{fm.kind.value} {b} modes {a}/4,{c}/4 on {m}")
    return failures


def _sub(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) - x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# tensor products

class TensorState:
    """The cyclic subspace U(n-) . v inside a tensor product of level-1 factors."""

    def __init__(self, kinds: list[FactorKind], box: Box, label: str = ""):
        self.kinds = [FactorKind(k) for k in kinds]
        self.box = box
        self.label = label
        self.factors = [build_factor(k, box) for k in self.kinds]
        cyc = tuple(f.cyclic for f in self.factors)
        self.cyclic = {cyc: Fraction(1)}
        self.offset = (sum(f.offset[0] for f in self.factors), sum(f.offset[1] for f in self.factors))
        self._vec = {NormalMonomial((), ()): self.cyclic}
        self._bases: dict = {}
        self.words: dict = {}

    def act(self, is_a12: bool, q: int, vec: dict) -> dict:
        """Diagonal action: the sum over factors of the factor-local action."""
        out: dict = {}
        for key, c in vec.items():
            for slot, fm in enumerate(self.factors):
                for m, v in fm.act_monomial(is_a12, q, key[slot]).items():
                    new = key[:slot] + (m,) + key[slot + 1:]
                    x = out.get(new, 0) + c * v
                    if x:
                        out[new] = x
                    else:
                        out.pop(new, None)
        return out

    def vector(self, u: NormalMonomial) -> dict:
        """u . v for a negative canonical monomial u."""
        hit = self._vec.get(u)
        if hit is not None:
            return hit
        if u.a1:
            is_a12, q, rest = False, u.a1[0], NormalMonomial(u.a1[1:], u.a12)
        else:
            is_a12, q, rest = True, u.a12[0], NormalMonomial((), u.a12[1:])
        out = self.act(is_a12, q, self.vector(rest))
        self._vec[u] = out
        return out

    def basis(self, b) -> EchelonBasis:
        b = tuple(b)
        hit = self._bases.get(b)
        if hit is None:
            self.box.require(b)
            hit = EchelonBasis()
            words = []
            for u in negative_monomials(*b):
                if hit.add(self.vector(u)):
                    words.append(u)
            self._bases[b] = hit
            self.words[b] = words
        return hit

    def dim(self, b) -> int:
        c, w4 = b
        if c < 0 or w4 < 0:
            return 0
        return self.basis(b).rank

    def table(self, descriptor: dict) -> DimTable:
        return DimTable(descriptor, self.box, {b: self.dim(b) for b in self.box.bidegrees()})


def factor_kinds(k: int, i: int, j: int = 0) -> list[FactorKind]:
    if not (0 <= i and 0 <= j and i + j <= k):
        raise ValueError(f"need i, j >= 0 and i + j <= k, got k={k} i={i} j={j}")
    return [FactorKind.Vacuum] * (k - i - j) + [FactorKind.EAlpha] * i + [FactorKind.X12Vec] * j


_STATES: dict = {}


def tensor_state(k: int, i: int, j: int, box: Box) -> TensorState:
    key = (k, i, j, box)
    st = _STATES.get(key)
    if st is None:
        st = TensorState(factor_kinds(k, i, j), box, f"W[{k},{i},{j}]")
        _STATES[key] = st
    return st


def clear_caches() -> None:
    _FACTORS.clear()
    _STATES.clear()


def module_descriptor(k: int, i: int, j: int = 0) -> dict:
    return {"side": "module", "k": k, "i": i, "j": j}


def span_virtual(k: int, i: int, j: int, box: Box) -> tuple[DimTable, TensorState]:
    st = tensor_state(k, i, j, box)
    return st.table(module_descriptor(k, i, j)), st


def diagonal_act(state: TensorState, mode, vec: dict) -> dict:
    from .algebra import Root
    return state.act(mode.root is Root.A12, mode.q, vec)


# ---------------------------------------------------------------------------
# reports

@dataclass
class Report:
    check: str
    k: int
    i: int | None
    j: int | None
    box: Box
    status: str = "pass"
    mismatches: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "conjecture-pass")

    def to_dict(self) -> dict:
        out = {"check": self.check, "k": self.k, "i": self.i, "j": self.j, "box": self.box.as_list(),
               "status": self.status, "mismatches": self.mismatches}
        out.update(self.extra)
        return out


def verify_presentation(k: int, i: int, box: Box, spec: IdealSpec | None = None) -> Report:
    """Compare the module-side table of W_{k,i} with the quotient of M by I_{k,i}."""
    from .engine import dim_table
    spec = spec or IdealSpec(k, i)
    mod, _ = span_virtual(k, i, 0, box)
    pres = dim_table(spec, box)
    report = Report("presentation", k, i, 0, box, extra={"convention": spec.convention.value,
                                                         "extra_form": spec.extra_form.value})
    for b in box.bidegrees():
        if mod[b] != pres[b]:
            report.mismatches.append({"bidegree": list(b), "module": mod[b], "presentation": pres[b]})
    report.status = "fail" if report.mismatches else "pass"
    return report


def _tau_inverse_times(u: NormalMonomial, tail_a1: int) -> tuple[NormalMonomial, int]:
    """tau^{-1}(u) * x1(-1/4)^tail as a canonical monomial with a real sign.

    tau^{-1} multiplies u by i^(#x1 letters) = i^charge * (-1)^(#x12 letters);
    the factor i^charge is common to a whole bidegree and is dropped.
    """
    a1 = tuple(d - 2 for d in u.a1) + (-1,) * tail_a1
    a12 = tuple(d - 4 for d in u.a12)
    return NormalMonomial(a1, a12), (-1) ** len(u.a12)


def _map_ranks(src: TensorState, b_src, images: list[dict]) -> tuple[int, int, int]:
    """(rank S, rank T, rank [S|T]) for S = source vectors u.v, T = their images."""
    us = negative_monomials(*b_src)
    s_basis, t_basis, st_basis = EchelonBasis(), EchelonBasis(), EchelonBasis()
    for u, img in zip(us, images):
        s = src.vector(u)
        s_basis.add(s)
        t_basis.add(img)
        joint = {("s",) + (key,): c for key, c in s.items()}
        joint.update({("t",) + (key,): c for key, c in img.items()})
        st_basis.add(joint)
    return s_basis.rank, t_basis.rank, st_basis.rank


def _first_map_images(src_unused, tgt: TensorState, b_src, tail: int) -> list[dict]:
    out = []
    for u in negative_monomials(*b_src):
        mono, sign = _tau_inverse_times(u, tail)
        vec = tgt.vector(mono)
        out.append(vec if sign == 1 else {key: -c for key, c in vec.items()})
    return out


def _check_short_sequence(report: Report, k: int, box: Box, left: TensorState, mid: TensorState,
                          right: TensorState, tail: int) -> None:
    """0 -> left --(tau^{-1}(.) x1(-1/4)^tail)--> mid --(u.v -> u.v')--> right -> 0 on every target bidegree."""
    for r, w4 in box.bidegrees():
        b = (r, w4)
        b_src = (r - tail, w4 - 2 * r + tail)
        probs = []
        mid_dim, right_dim = mid.dim(b), right.dim(b)
        # second map: well-defined and onto
        us = negative_monomials(*b)
        s2 = EchelonBasis()
        for u in us:
            joint = {("s", key): c for key, c in mid.vector(u).items()}
            joint.update({("t", key): c for key, c in right.vector(u).items()})
            s2.add(joint)
        if s2.rank != mid_dim:
            probs.append("second map not well defined")
        image_dim = 0
        if b_src[0] >= 0 and b_src[1] >= 0:
            images = _first_map_images(left, mid, b_src, tail)
            rs, rt, rst = _map_ranks(left, b_src, images)
            if rst != rs:
                probs.append("first map not well defined")
            if rt != rs:
                probs.append(f"first map not injective (rank {rt} < {rs})")
            image_dim = rt
            comp = EchelonBasis()
            for u in negative_monomials(*b_src):
                mono, _ = _tau_inverse_times(u, tail)
                comp.add(right.vector(mono))
            if comp.rank:
                probs.append("composition is nonzero")
        if mid_dim - right_dim != image_dim:
            probs.append(f"not exact in the middle: dim ker = {mid_dim - right_dim}, dim im = {image_dim}")
        if probs:
            report.mismatches.append({"bidegree": list(b), "problems": probs,
                                      "dims": [left.dim(b_src), mid_dim, right_dim]})


def verify_sequence_one(k: int, box: Box) -> Report:
    report = Report("sequence1", k, 0, 0, box)
    w0 = tensor_state(k, 0, 0, box)
    w1 = tensor_state(k, 1, 0, box)
    _check_short_sequence(report, k, box, w0, w0, w1, k)
    report.status = "fail" if report.mismatches else "pass"
    return report


def verify_sequence_two(k: int, box: Box) -> Report:
    """0 -> W_{k,0} -> W_{k,k} -> 0 via u.v_{k,0} -> tau^{-1}(u).v_{k,k}."""
    report = Report("sequence2", k, k, 0, box)
    w0 = tensor_state(k, 0, 0, box)
    wk = tensor_state(k, k, 0, box)
    for r, w4 in box.bidegrees():
        b_tgt = (r, w4 + 2 * r)
        if b_tgt not in box:
            continue
        images = _first_map_images(w0, wk, (r, w4), 0)
        rs, rt, rst = _map_ranks(w0, (r, w4), images)
        probs = []
        if rst != rs:
            probs.append("map not well defined")
        if rt != rs:
            probs.append("map not injective")
        if rt != wk.dim(b_tgt):
            probs.append("map not onto")
        if probs:
            report.mismatches.append({"bidegree": [r, w4], "problems": probs})
    # W_{k,k} vanishes where the shifted source would have negative weight
    for r, w4 in box.bidegrees():
        if w4 - 2 * r < 0 and wk.dim((r, w4)):
            report.mismatches.append({"bidegree": [r, w4], "problems": ["target nonzero below the shifted range"]})
    report.status = "fail" if report.mismatches else "pass"
    return report


def verify_conjectured_sequence(k: int, i: int, box: Box) -> Report:
    """0 -> W_{k,i,0} -> W_{k,0,i} -> W_{k,1,i} -> 0; recorded as evidence, never asserted."""
    if not 0 <= i <= k - 1:
        raise ValueError("the conjectured sequences need 0 <= i <= k-1")
    report = Report("conjectured-sequence", k, i, None, box)
    left = tensor_state(k, i, 0, box)
    mid = tensor_state(k, 0, i, box)
    right = tensor_state(k, 1, i, box)
    _check_short_sequence(report, k, box, left, mid, right, k - i)
    report.status = "conjecture-fail" if report.mismatches else "conjecture-pass"
    return report


def verify_exact_sequences(k: int, box: Box, conjectured: bool = True) -> list[Report]:
    reports = [verify_sequence_one(k, box), verify_sequence_two(k, box)]
    if conjectured:
        reports.extend(verify_conjectured_sequence(k, i, box) for i in range(1, k))
    return reports
