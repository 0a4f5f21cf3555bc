"""Buchberger's algorithm, full reduction and ideal membership."""

from __future__ import annotations

import heapq
import operator
from dataclasses import dataclass, field
from typing import Sequence

from .ring import MonomialOrder, Polynomial

__all__ = [
    "IdealSpec",
    "GroebnerBasis",
    "GroebnerBudgetExceeded",
    "normal_form",
    "s_polynomial",
    "buchberger",
    "ideal_member",
    "is_groebner",
    "is_reduced",
]

DEFAULT_MAX_PAIRS = 10**6


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when Buchberger processes more S-pairs than allowed."""

    def __init__(self, stats: dict[str, int]):
        self.stats = dict(stats)
        super().__init__(
            "S-pair budget exceeded after {pairs_processed} pairs "
            "(basis size {basis_size}, pending pairs {pairs_pending})".format(**self.stats)
        )


@dataclass(frozen=True)
class IdealSpec:
    generators: tuple[Polynomial, ...]
    order: MonomialOrder

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not any(gens):
            raise ValueError("an ideal specification needs at least one nonzero generator")
        fields = {g.field for g in gens}
        if len(fields) != 1:
            raise ValueError("generators must share one coefficient field")
        for g in gens:
            if g.order != self.order:
                raise ValueError("generators must use the ideal's monomial order")

    @property
    def field(self):
        return self.generators[0].field

    def __len__(self) -> int:
        return len(self.generators)


@dataclass
class GroebnerBasis:
    elements: list[Polynomial]
    order: MonomialOrder
    reduced: bool = True
    stats: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.elements, self.order)

    def contains(self, f: Polynomial) -> bool:
        return ideal_member(f, self)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()


def normal_form(
    f: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder | None = None,
    *,
    reducer: str = "first",
) -> Polynomial:
    """Fully reduce ``f`` modulo ``basis``.

    ``reducer`` picks among divisors of the current term: ``"first"`` or
    ``"last"`` in basis order, or ``"shortest"`` (fewest terms, then first).
    The remainder is unique when ``basis`` is a Groebner basis.
    """
    order = order or f.order
    if f.order != order:
        raise ValueError("polynomial order differs from the requested order")
    reducers = []
    for g in basis:
        if g.order != order or g.field != f.field:
            raise ValueError("basis element is incompatible with the polynomial")
        if g:
            lm = g.lm
            lc = g.lc
            inv = g.field.one / lc
            tail = [(e, c * inv) for e, c in g.coefficient_map().items() if e != lm]
            reducers.append((lm, tail, len(g)))
    if reducer == "last":
        reducers.reverse()
    elif reducer == "shortest":
        reducers.sort(key=lambda r: r[2])
    elif reducer != "first":
        raise ValueError(f"unknown reducer selection {reducer!r}")

    key = order.key
    add = operator.add
    fsum = f.field.sum
    # pending contributions per monomial, summed once when the monomial is popped:
    # every contribution to a monomial arrives before it reaches the top of the heap
    rem = {e: [c] for e, c in f.coefficient_map().items()}
    heap = [(tuple(-k for k in key(e)), e) for e in rem]
    heapq.heapify(heap)
    out = {}
    while heap:
        _, e = heapq.heappop(heap)
        parts = rem.pop(e, None)
        if parts is None:
            continue
        c = parts[0] if len(parts) == 1 else fsum(parts)
        if not c:
            continue
        for lm, tail, _ in reducers:
            if all(map(operator.le, lm, e)):
                q = tuple(map(operator.sub, e, lm))
                for te, tc in tail:
                    m = tuple(map(add, te, q))
                    v = rem.get(m)
                    if v is None:
                        rem[m] = [-(c * tc)]
                        heapq.heappush(heap, (tuple(-k for k in key(m)), m))
                    else:
                        v.append(-(c * tc))
                break
        else:
            out[e] = c
    return Polynomial(order, f.field, out)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    """Leading-term-cancelling combination of ``f`` and ``g``."""
    order = order or f.order
    if not f or not g:
        raise ValueError("S-polynomial of a zero polynomial is undefined")
    f, g = f.reorder(order), g.reorder(order)
    lf, lg = f.lm, g.lm
    lcm = tuple(map(max, lf, lg))
    one = f.field.one
    return f.mul_term(tuple(map(operator.sub, lcm, lf)), one / f.lc) - g.mul_term(
        tuple(map(operator.sub, lcm, lg)), one / g.lc
    )


def _lcm(a, b):
    return tuple(map(max, a, b))


def _divides(a, b):
    return all(map(operator.le, a, b))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


class _Buchberger:
    """State of one basis computation; pairs are (i, j) indices into ``polys``."""

    def __init__(self, order: MonomialOrder, criteria: bool, max_pairs: int):
        self.order = order
        self.criteria = criteria
        self.max_pairs = max_pairs
        self.polys: list[Polynomial] = []
        self.lms: list[tuple[int, ...]] = []
        self.active: list[int] = []
        self.pairs: list[tuple[int, int, int, int]] = []  # heap of (lcm degree, seq, i, j)
        self.pair_set: dict[tuple[int, int], tuple[int, ...]] = {}
        self.seq = 0
        self.stats = {
            "pairs_processed": 0,
            "pairs_pruned": 0,
            "zero_reductions": 0,
            "basis_size": 0,
            "pairs_pending": 0,
        }

    def _push_pair(self, i: int, j: int, lcm: tuple[int, ...]) -> None:
        self.pair_set[(i, j)] = lcm
        heapq.heappush(self.pairs, (sum(lcm), self.seq, i, j))
        self.seq += 1

    def add(self, h: Polynomial) -> None:
        k = len(self.polys)
        self.polys.append(h)
        lh = h.lm
        self.lms.append(lh)
        if not self.criteria:
            for i in self.active:
                self._push_pair(i, k, _lcm(self.lms[i], lh))
            self.active.append(k)
            return
        self._gebauer_moeller(k, lh)

    def _gebauer_moeller(self, k: int, lh: tuple[int, ...]) -> None:
        lms = self.lms
        cand = [(i, _lcm(lms[i], lh)) for i in self.active]
        # chain criterion among new pairs: keep (i,k) unless another new lcm properly divides it
        kept = []
        for idx, (i, l) in enumerate(cand):
            if _coprime(lms[i], lh):
                kept.append((i, l))
                continue
            dominated = False
            for jdx, (j, l2) in enumerate(cand):
                if jdx == idx:
                    continue
                if _divides(l2, l) and (l2 != l or jdx < idx or _coprime(lms[j], lh)):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, l))
        # coprime criterion
        new_pairs = []
        for i, l in kept:
            if _coprime(lms[i], lh):
                self.stats["pairs_pruned"] += 1
            else:
                new_pairs.append((i, l))
        self.stats["pairs_pruned"] += len(cand) - len(kept)
        # chain criterion on old pairs
        for (i, j), l in list(self.pair_set.items()):
            if _divides(lh, l) and _lcm(lms[i], lh) != l and _lcm(lms[j], lh) != l:
                del self.pair_set[(i, j)]
                self.stats["pairs_pruned"] += 1
        for i, l in new_pairs:
            self._push_pair(i, k, l)
        self.active = [i for i in self.active if not _divides(lh, lms[i])] + [k]

    def run(self) -> None:
        order = self.order
        while self.pairs:
            _, _, i, j = heapq.heappop(self.pairs)
            if (i, j) not in self.pair_set:
                continue
            del self.pair_set[(i, j)]
            if self.stats["pairs_processed"] >= self.max_pairs:
                self.stats["basis_size"] = len(self.active)
                self.stats["pairs_pending"] = len(self.pair_set) + 1
                raise GroebnerBudgetExceeded(self.stats)
            self.stats["pairs_processed"] += 1
            s = s_polynomial(self.polys[i], self.polys[j], order)
            r = normal_form(s, [self.polys[a] for a in self.active], order)
            if not r:
                self.stats["zero_reductions"] += 1
                continue
            r = r.monic()
            if r.is_constant():
                self.polys.append(r)
                self.lms.append(r.lm)
                self.active = [len(self.polys) - 1]
                self.pairs.clear()
                self.pair_set.clear()
                return
            self.add(r)


def _minimal_basis(polys: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    key = order.key
    polys = sorted((p.monic() for p in polys if p), key=lambda p: key(p.lm))
    minimal = []
    for p in polys:
        if not any(_divides(q.lm, p.lm) for q in minimal):
            minimal.append(p)
    return minimal


def _reduce_basis(polys: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    key = order.key
    minimal = _minimal_basis(polys, order)
    reduced = []
    for idx, p in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        reduced.append(normal_form(p, others, order).monic())
    reduced.sort(key=lambda p: key(p.lm), reverse=True)
    return reduced


def buchberger(
    spec: IdealSpec,
    *,
    criteria: bool = True,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    reduce: bool = True,
) -> GroebnerBasis:
    """Reduced Groebner basis of ``spec`` under its order.

    With ``reduce=False`` the final interreduction is skipped and a minimal
    (monic, but not tail-reduced) basis is returned; normal forms with
    respect to it are the same.

    Pairs are selected by the normal strategy (smallest lcm degree, ties in
    creation order).  ``criteria`` enables the coprime-leading-monomial and
    chain criteria (Gebauer-Moeller); switch it off for differential tests.
    Raises :class:`GroebnerBudgetExceeded` after ``max_pairs`` S-pairs.
    """
    order = spec.order
    bb = _Buchberger(order, criteria, max_pairs)
    gens = [g.monic() for g in spec.generators if g]
    one = Polynomial.constant(order, spec.field, 1)
    if any(g.is_constant() for g in gens):
        return GroebnerBasis([one], order, True, dict(bb.stats, basis_size=1))
    for g in gens:
        bb.add(g)
    bb.run()
    polys = [bb.polys[i] for i in bb.active]
    if reduce:
        final = _reduce_basis(polys, order)
    else:
        final = _minimal_basis(polys, order)
        final.sort(key=lambda p: order.key(p.lm), reverse=True)
    bb.stats["basis_size"] = len(final)
    bb.stats["pairs_pending"] = 0
    return GroebnerBasis(final, order, reduce, bb.stats)


def ideal_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    """True iff ``f`` lies in the ideal generated by ``gb``."""
    return not normal_form(f.reorder(gb.order), gb.elements, gb.order)


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    elems = [g for g in basis if g]
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            if normal_form(s_polynomial(elems[a], elems[b], order), elems, order):
                return False
    return True


def is_reduced(basis: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Monic elements, and no term of one is divisible by another's leading monomial."""
    for a, g in enumerate(basis):
        if g.lc != 1:
            return False
        for b, other in enumerate(basis):
            if a != b and any(_divides(other.lm, e) for e in g.coefficient_map()):
                return False
    return True
