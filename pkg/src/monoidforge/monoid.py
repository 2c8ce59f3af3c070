"""Cancellative monoids with torsion, partially cancellative quotients, and
their structural operations.

Monoid elements are reduced tuples over the ambient group Z^r x prod Z/d_i;
the ambient AbelianGroupShape does all coordinate arithmetic.  Membership is
exact: for positive monoids a strictly positive grading bounds the search,
otherwise lattice reduction plus a budgeted branch search is used and
"inconclusive" is a first-class outcome.
"""

from dataclasses import dataclass

from .lattice import (
    AbelianGroupShape,
    diagonal_of,
    element_in_subgroup,
    grading_for,
    nonneg_solve,
    smith_normal_form,
    solve_integer,
    subgroup_shape,
)


class InconclusiveError(Exception):
    """A membership search hit its budget where an exact answer was required."""


def _env_budget():
    import os

    try:
        return int(os.environ.get("MONOIDFORGE_BUDGET", "200000"))
    except ValueError:
        return 200000


DEFAULT_BUDGET = _env_budget()


def set_default_budget(n):
    global DEFAULT_BUDGET
    DEFAULT_BUDGET = int(n)


@dataclass
class Membership:
    status: str  # "yes" | "no" | "inconclusive"
    witness: tuple = None
    note: str = ""

    @property
    def is_yes(self):
        return self.status == "yes"

    def __bool__(self):
        return self.is_yes


_INTERN = {}


class CancellativeMonoid:
    """Finitely generated submonoid of Z^r x (finite abelian group).

    Instances are interned on (ambient, generators) so per-monoid caches
    (slices, gradings, quotients) are shared.
    """

    def __new__(cls, ambient, generators):
        gens = tuple(sorted({ambient.reduce(g) for g in generators if any(ambient.reduce(g))}))
        key = (ambient, gens)
        inst = _INTERN.get(key)
        if inst is not None:
            return inst
        inst = super().__new__(cls)
        inst.ambient = ambient
        inst.generators = gens
        inst._cache = {}
        _INTERN[key] = inst
        return inst

    def __eq__(self, other):
        return self is other or (
            isinstance(other, CancellativeMonoid)
            and (self.ambient, self.generators) == (other.ambient, other.generators)
        )

    def __hash__(self):
        return hash((self.ambient, self.generators))

    def __repr__(self):
        return f"CancellativeMonoid({self.ambient.free_rank},{self.ambient.torsion},gens={list(self.generators)})"

    def zero(self):
        return self.ambient.zero()

    # -- group completion ---------------------------------------------------

    def gp_shape(self):
        if "gp_shape" not in self._cache:
            self._cache["gp_shape"] = subgroup_shape(list(self.generators), self.ambient)
        return self._cache["gp_shape"]

    def in_gp(self, a):
        """Whether a lies in gp(M) inside the ambient group."""
        return element_in_subgroup(self.ambient.reduce(a), list(self.generators), self.ambient) is not None

    # -- grading and slices --------------------------------------------------

    def grading(self):
        """Strictly positive integer grading covector, or None."""
        if "grading" not in self._cache:
            self._cache["grading"] = grading_for(list(self.generators), self.ambient)
        return self._cache["grading"]

    def degree(self, a):
        w = self.grading()
        if w is None:
            raise ValueError("monoid admits no strictly positive grading")
        r = self.ambient.free_rank
        return sum(x * y for x, y in zip(w, a[:r]))

    def _slice_data(self, bound):
        """Incrementally maintained map element -> (witness, degree) covering
        every monoid element of degree <= bound."""
        w = self.grading()
        if w is None:
            raise ValueError("slice enumeration needs a positive monoid")
        amb = self.ambient
        gens = self.generators
        degs = [self.degree(g) for g in gens]
        old_bound, seen = self._cache.get("slice", (-1, None))
        if seen is None:
            seen = {amb.zero(): ((0,) * len(gens), 0)}
            old_bound = 0
        if old_bound >= bound:
            return seen
        dmax = max(degs, default=1)
        frontier = {el: v for el, v in seen.items() if v[1] > old_bound - dmax}
        while frontier:
            new = {}
            for el, (coeffs, d) in frontier.items():
                for i, g in enumerate(gens):
                    nd = d + degs[i]
                    if nd <= bound:
                        nxt = amb.add(el, g)
                        if nxt not in seen and nxt not in new:
                            wit = list(coeffs)
                            wit[i] += 1
                            new[nxt] = (tuple(wit), nd)
            seen.update(new)
            frontier = new
        self._cache["slice"] = (bound, seen)
        return seen

    def slice(self, bound):
        """All monoid elements of grading degree <= bound, mapped to a witness
        coefficient vector over the generators.  Positive monoids only."""
        data = self._slice_data(bound)
        return {el: wit for el, (wit, d) in data.items() if d <= bound}

    def filtration_weight(self, a):
        """Subadditive weight usable on non-positive hosts: sum of |free coords|."""
        r = self.ambient.free_rank
        return sum(abs(x) for x in a[:r])

    def filtered_elements(self, bound):
        """All monoid elements with filtration weight <= bound (exact, via an
        ambient box scan plus membership); intended for small ranks."""
        r = self.ambient.free_rank
        if r > 3:
            raise ValueError("filtered enumeration limited to rank <= 3 ambients")
        out = []
        from itertools import product

        tor = self.ambient.torsion_elements()
        for free in product(range(-bound, bound + 1), repeat=r):
            if sum(abs(x) for x in free) > bound:
                continue
            for t in tor:
                el = self.ambient.reduce(free + t[r:])
                if member(self, el).is_yes:
                    out.append(el)
        return sorted(set(out))

    # -- torsion quotient -----------------------------------------------------

    def torsion_quotient(self):
        if "tq" not in self._cache:
            self._cache["tq"] = TorsionQuotient(self)
        return self._cache["tq"]


class TorsionQuotient:
    """Mbar = image of M in gp(M)/t(M), coordinatized as Z^r, with an explicit
    splitting gp(M) = gp(Mbar) x t(M)."""

    def __init__(self, M):
        self.M = M
        amb = M.ambient
        k = amb.free_rank
        gens = list(M.generators)
        frees = [list(g[:k]) for g in gens]
        if not gens:
            self.rank = 0
            self.Mbar = CancellativeMonoid(AbelianGroupShape(0), [])
            self._basis = []
            self._sections = []
            self.torsion_elements = [amb.zero()]
            return
        # lattice spanned by the free parts, basis from the Smith form
        A = [[frees[j][i] for j in range(len(gens))] for i in range(k)]  # k x s
        U, D, V = smith_normal_form(A)
        diag = diagonal_of(D)
        r = sum(1 for d in diag if d)
        # columns of U^{-1} scaled by the elementary divisors span the lattice
        Uinv = _unimodular_inverse(U)
        basis = []
        for j in range(r):
            basis.append(tuple(Uinv[i][j] * diag[j] for i in range(k)))
        self.rank = r
        self._basis = basis
        bmat = [[basis[j][i] for j in range(r)] for i in range(k)]  # k x r
        self._bmat = bmat
        bar_gens = []
        for f in frees:
            c = solve_integer(bmat, f)
            assert c is not None, "generator free part escapes its own lattice"
            bar_gens.append(tuple(c))
        self._bar_images = bar_gens
        self.Mbar = CancellativeMonoid(AbelianGroupShape(r), bar_gens)
        # section: write each basis vector as an integer combination of the
        # generators' free parts, then lift with the full torsion data
        sections = []
        for b in basis:
            c = solve_integer(A, list(b))
            assert c is not None
            lift = amb.zero()
            for ci, g in zip(c, gens):
                lift = amb.add(lift, amb.scale(ci, g))
            sections.append(lift)
        self._sections = sections
        # t(M) = gp(M) cap torsion, generated by g - section(project(g))
        tgens = []
        for g in gens:
            t = amb.sub(g, self.section(self.project(g)))
            assert not any(t[:k])
            tgens.append(t)
        self.torsion_elements = _group_closure(tgens, amb)

    def project(self, a):
        """Coordinates of a's free part in gp(Mbar) = Z^r."""
        k = self.M.ambient.free_rank
        c = solve_integer(self._bmat, list(a[:k])) if self.rank else ()
        if c is None:
            raise ValueError(f"{a} has free part outside the generator lattice")
        return tuple(c) if self.rank else ()

    def section(self, v):
        """Splitting gp(Mbar) -> gp(M); project(section(v)) == v."""
        amb = self.M.ambient
        out = amb.zero()
        for c, s in zip(v, self._sections):
            out = amb.add(out, amb.scale(c, s))
        return out

    def torsion_shape(self):
        return subgroup_shape(
            [t for t in self.torsion_elements if any(t)] or [],
            self.M.ambient,
        )


def _unimodular_inverse(U):
    n = len(U)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        sol = solve_integer(U, e)
        assert sol is not None
        cols.append(sol)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _group_closure(gens, ambient):
    """All elements of the finite group generated by gens (must be torsion)."""
    elems = {ambient.zero()}
    frontier = [ambient.zero()]
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                for h in (g, ambient.neg(g)):
                    x = ambient.add(e, h)
                    if x not in elems:
                        if any(x[: ambient.free_rank]):
                            raise ValueError("non-torsion element in torsion closure")
                        elems.add(x)
                        new.append(x)
        frontier = new
        if len(elems) > 100000:
            raise ValueError("torsion closure too large")
    return sorted(elems)


# ---------------------------------------------------------------------------
# membership and unit groups


def member(M, a, budget=None):
    """Exact membership of a in M with a verifiable witness.

    Positive monoids are decided exhaustively through the grading; otherwise
    the search may return "inconclusive" at budget exhaustion (never a false
    "no").
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    amb = M.ambient
    a = amb.reduce(a)
    if a == amb.zero():
        return Membership("yes", (0,) * len(M.generators))
    if not M.generators:
        return Membership("no", note="trivial monoid")
    w = M.grading()
    if w is not None:
        d = M.degree(a)
        if d <= 0:
            return Membership("no", note="nonpositive grading degree")
        data = M._slice_data(d)
        hit = data.get(a)
        if hit is not None:
            return Membership("yes", hit[0])
        return Membership("no", note=f"exhausted graded slice to degree {d}")
    res = nonneg_solve(a, list(M.generators), amb, budget=budget)
    return Membership(
        {"witness": "yes", "no": "no", "inconclusive": "inconclusive"}[res.status],
        res.coeffs,
        res.note,
    )


def units_submonoid(M):
    """Generators of U(M): exactly the monoid generators whose negatives lie
    in M (every unit is a non-negative combination of these)."""
    units = []
    for g in M.generators:
        res = member(M, M.ambient.neg(g))
        if res.status == "inconclusive":
            raise InconclusiveError(f"unit check for generator {g} hit the budget")
        if res.is_yes:
            units.append(g)
    return units


def is_positive(M):
    return not units_submonoid(M)


def is_torsion_free(M):
    return not M.gp_shape().torsion


def rank(M):
    return M.gp_shape().free_rank


def torsion_quotient(M):
    """Mbar with projection/section data; see TorsionQuotient."""
    return M.torsion_quotient()


# ---------------------------------------------------------------------------
# ideals as raw generator data (the ideals module wraps this)


def ideal_contains(host, ideal_gens, x, budget=None):
    """x in the ideal generated by ideal_gens: exists g with x - g in host."""
    amb = host.ambient
    x = amb.reduce(x)
    inconclusive = False
    for g in ideal_gens:
        res = member(host, amb.sub(x, g), budget=budget)
        if res.is_yes:
            return Membership("yes", (g, res.witness))
        if res.status == "inconclusive":
            inconclusive = True
    if inconclusive:
        return Membership("inconclusive", note="a membership subquery hit the budget")
    return Membership("no")


def validate_ideal(host, ideal_gens):
    for g in ideal_gens:
        res = member(host, g)
        if not res.is_yes:
            raise ValueError(f"ideal generator {g} is not an element of the host monoid")


# ---------------------------------------------------------------------------
# partially cancellative monoids


COLLAPSED = "*"  # the single absorbing class of a pc monoid


class PcMonoid:
    """Quotient N/I of a cancellative monoid by a finitely generated ideal.

    Elements are base elements outside I, plus the single collapsed class
    (present iff I is nonempty).  Addition lands on the class as soon as the
    base sum falls into I.
    """

    def __init__(self, base, collapse_gens=()):
        validate_ideal(base, collapse_gens)
        self.base = base
        self.collapse_gens = tuple(sorted({base.ambient.reduce(g) for g in collapse_gens}))

    @property
    def has_collapse(self):
        return bool(self.collapse_gens)

    def is_singleton(self):
        """Whether I = N, i.e. the quotient is the constant singleton monoid."""
        return self.has_collapse and ideal_contains(self.base, self.collapse_gens, self.base.zero()).is_yes

    def collapsed(self, x):
        if not self.has_collapse:
            return False
        return ideal_contains(self.base, self.collapse_gens, x).is_yes

    def member(self, x):
        """Membership of an ambient element as a non-collapsed class."""
        res = member(self.base, x)
        if not res.is_yes:
            return res
        if self.collapsed(x):
            return Membership("no", note="element collapsed to the basepoint class")
        return res

    def add(self, x, y):
        """Addition of classes; returns COLLAPSED when the sum lands in I."""
        if x == COLLAPSED or y == COLLAPSED:
            return COLLAPSED
        s = self.base.ambient.add(x, y)
        return COLLAPSED if self.collapsed(s) else s

    def classes_slice(self, bound):
        """Non-collapsed classes of grading degree <= bound."""
        return sorted(
            el for el in self.base.slice(bound) if not self.collapsed(el)
        )

    def __eq__(self, other):
        return (
            isinstance(other, PcMonoid)
            and self.base == other.base
            and self.collapse_gens == other.collapse_gens
        )

    def __hash__(self):
        return hash((self.base, self.collapse_gens))

    def __repr__(self):
        return f"PcMonoid({self.base!r}, collapse={list(self.collapse_gens)})"


INFINITY = "inf"


class AugmentedMonoid:
    """M_+ = M with an adjoined absorbing basepoint."""

    def __init__(self, underlying):
        self.underlying = underlying

    def add(self, x, y):
        if x == INFINITY or y == INFINITY:
            return INFINITY
        if isinstance(self.underlying, PcMonoid):
            s = self.underlying.add(x, y)
            return s
        return self.underlying.ambient.add(x, y)


def quotient_by_ideal(N, ideal_gens):
    """N/I with the unique addition rule collapsing I to one class."""
    return PcMonoid(N, ideal_gens)


# ---------------------------------------------------------------------------
# derived monoids


class StarSubmonoid:
    """I_* = I cup {0} as a submonoid of the host.

    Not finitely generated in general; exposes exact membership, graded
    slices, and minimal generators up to a degree bound with an honest
    completeness flag.
    """

    def __init__(self, host, ideal_gens):
        validate_ideal(host, ideal_gens)
        self.host = host
        self.ideal_gens = tuple(sorted({host.ambient.reduce(g) for g in ideal_gens}))

    def contains(self, x):
        x = self.host.ambient.reduce(x)
        if x == self.host.ambient.zero():
            return Membership("yes", ())
        return ideal_contains(self.host, self.ideal_gens, x)

    def slice_elements(self, bound):
        """Ideal elements of grading degree <= bound (0 excluded)."""
        return sorted(
            el
            for el in self.host.slice(bound)
            if any(el) and ideal_contains(self.host, self.ideal_gens, el).is_yes
        )

    def generators_up_to(self, bound):
        """Minimal monoid generators of I_* with degree <= bound.

        Returns (generators, complete): x is kept iff x in I \\ (I + I); the
        flag is False when a minimal element appears in the top degree band,
        i.e. the stream has not visibly stabilized within the bound.
        """
        elems = self.slice_elements(bound)
        eset = set(elems)
        amb = self.host.ambient
        mins = []
        for x in elems:
            reducible = False
            for g in self.ideal_gens:
                for h in self.ideal_gens:
                    rest = amb.sub(amb.sub(x, g), h)
                    if member(self.host, rest).is_yes:
                        reducible = True
                        break
                if reducible:
                    break
            if not reducible:
                mins.append(x)
        band = max((self.host.degree(g) for g in self.host.generators), default=1)
        complete = all(self.host.degree(x) <= bound - band for x in mins)
        return mins, complete


def star_submonoid(ideal_host, ideal_gens):
    if not ideal_gens:
        return StarSubmonoid(ideal_host, ())
    return StarSubmonoid(ideal_host, ideal_gens)


def smash(L, N):
    """L smash N: pairs (l, n) with l = 0 forcing n = 0.

    Finitely generated iff N is finite (all elements torsion) or L is
    trivial; raises otherwise.  Generators: (g, n) over L-generators g and all
    n in N, minimalized.
    """
    ambL, ambN = L.ambient, N.ambient
    amb = AbelianGroupShape(ambL.free_rank + ambN.free_rank, ambL.torsion + ambN.torsion)

    def pair(l, n):
        return (
            l[: ambL.free_rank]
            + n[: ambN.free_rank]
            + l[ambL.free_rank :]
            + n[ambN.free_rank :]
        )

    if not L.generators:
        return CancellativeMonoid(amb, [])
    if not N.generators:
        return CancellativeMonoid(amb, [pair(g, ambN.zero()) for g in L.generators])
    # need every element of N; only finite N qualifies
    n_shape = subgroup_shape(list(N.generators), ambN)
    if n_shape.free_rank:
        raise ValueError(
            "smash generators are only finite when the second factor is a finite "
            "torsion monoid; L smash N is not finitely generated here"
        )
    n_elems = _monoid_closure_finite(N)
    gens = [pair(g, n) for g in L.generators for n in n_elems]
    return CancellativeMonoid(amb, _minimalize_generators(gens, amb))


def _monoid_closure_finite(N):
    elems = {N.ambient.zero()}
    frontier = [N.ambient.zero()]
    while frontier:
        new = []
        for e in frontier:
            for g in N.generators:
                x = N.ambient.add(e, g)
                if x not in elems:
                    elems.add(x)
                    new.append(x)
        frontier = new
        if len(elems) > 100000:
            raise ValueError("second smash factor is too large")
    return sorted(elems)


def _minimalize_generators(gens, ambient):
    """Drop generators that are non-negative combinations of the others."""
    gens = sorted({ambient.reduce(g) for g in gens if any(ambient.reduce(g))})
    kept = list(gens)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(kept):
            others = kept[:i] + kept[i + 1 :]
            if not others:
                continue
            res = member(CancellativeMonoid(ambient, others), g)
            if res.is_yes:
                kept = others
                changed = True
                break
    return kept


def minimalize(M):
    """The same monoid presented by a minimal generating set."""
    return CancellativeMonoid(M.ambient, _minimalize_generators(list(M.generators), M.ambient))
