"""Monoid ideals: exact membership, primes, radicals, prime decomposition of
radical ideals, and the face filtration of positive seminormal monoids.

Every derived ideal is certified on an explicit bounded slice; certification
failures raise, naming the offending element, rather than returning silently.
"""

from dataclasses import dataclass, field

from .monoid import (
    Membership,
    PcMonoid,
    ideal_contains,
    member,
    units_submonoid,
    validate_ideal,
)
from .cones import _cone_of, face_lattice, face_locate, face_submonoid
from .closure import is_seminormal


class CertificationError(RuntimeError):
    """A bounded certificate could not be established."""


class MonoidIdeal:
    """Finitely generated ideal of a cancellative or pc monoid.

    pc-hosted ideals are represented by their pullback to the base monoid
    (generators plus the collapse generators), which restores exactness.
    """

    def __init__(self, host, generators, membership_fn=None):
        if isinstance(host, PcMonoid):
            self.pc_host = host
            base = host.base
            gens = list(generators) + list(host.collapse_gens)
        else:
            self.pc_host = None
            base = host
            gens = list(generators)
        validate_ideal(base, gens)
        self.host = base
        self.generators = tuple(sorted({base.ambient.reduce(g) for g in gens}))
        self._membership_fn = membership_fn

    def member(self, x):
        if self._membership_fn is not None:
            ok = self._membership_fn(x)
            return Membership("yes" if ok else "no")
        return ideal_contains(self.host, self.generators, x)

    def is_empty(self):
        return not self.generators

    def is_proper(self):
        return not self.member(self.host.ambient.zero()).is_yes

    def contains_ideal(self, other):
        """other subset self, exactly (generator-level)."""
        return all(self.member(g).is_yes for g in other.generators)

    def same_as(self, other):
        return self.contains_ideal(other) and other.contains_ideal(self)

    def minimal_generators(self):
        """Generators that are not reachable from the others: the unique
        minimal generating set of a generated ideal is a subset of any
        generating set."""
        amb = self.host.ambient
        keep = []
        for g in self.generators:
            others = [h for h in self.generators if h != g]
            if not ideal_contains(self.host, others, g).is_yes:
                keep.append(g)
        return keep

    def __repr__(self):
        return f"MonoidIdeal(gens={list(self.generators)})"

    def to_json(self):
        return {"generators": [list(g) for g in self.generators]}


def ideal_member(I, x):
    return I.member(x)


def _faces_avoiding(host, ideal_gens):
    """Faces F of the cone with M cap pi^{-1}(F) disjoint from the ideal:
    exactly those containing no ideal generator (extremality pushes any
    deeper intersection down to a generator)."""
    cone = _cone_of(host)
    faces = face_lattice(host)
    gen_vanish = [set(cone.vanishing_set(cone.tq.project(g))) for g in ideal_gens]
    out = []
    for f in faces:
        need = set(f.normal_indices)
        if not any(v >= need for v in gen_vanish):
            out.append(f)
    return out


def is_prime(I, definitional_bound=3):
    """Complement-is-a-submonoid test, decided exactly through the face
    geometry: prime iff no ideal generator maps into the minimal face
    spanned by the non-ideal monoid generators.

    The face decision is exact (the complement of a prime is an extremal
    submonoid, hence a face preimage); a bounded definitional scan double
    checks a positive answer.  Violations of non-primes can sit arbitrarily
    deep, so the scan is only ever a consistency check, never the decision.
    """
    if not I.is_proper():
        raise ValueError("is_prime requires a proper ideal (got I = M)")
    host = I.host
    cone = _cone_of(host)
    outside = [g for g in host.generators if not I.member(g).is_yes]
    vanish = set(range(len(cone.normals)))
    for g in outside:
        vanish &= set(cone.vanishing_set(cone.tq.project(g)))
    for g in I.generators:
        if set(cone.vanishing_set(cone.tq.project(g))) >= vanish:
            return False
    if definitional_bound and host.grading() is not None:
        amb = host.ambient
        els = sorted(host.slice(definitional_bound))
        in_i = {x: I.member(x).is_yes for x in els}
        for x in els:
            for y in els:
                if in_i[x] or in_i[y]:
                    continue
                if I.member(amb.add(x, y)).is_yes:
                    raise AssertionError(
                        f"face test claims prime but {x} + {y} lies in the ideal"
                    )
    return True


def _predicate_ideal_generators(host, pred, bound):
    """Minimal elements of {x in M : pred(x)} on the degree <= bound slice,
    certified by a lookahead window: every predicate element one generator
    band above the bound must already reduce to the found generators."""
    amb = host.ambient
    elems = [x for x in sorted(host.slice(bound)) if any(x) and pred(x)]
    mins = []
    for x in elems:
        reducible = False
        for g in host.generators:
            y = amb.sub(x, g)
            if member(host, y).is_yes and pred(y):
                reducible = True
                break
        if not reducible:
            mins.append(x)
    band = max((host.degree(g) for g in host.generators), default=1)
    lookahead = [
        x
        for x in sorted(host.slice(bound + band))
        if any(x) and host.degree(x) > bound and pred(x)
    ]
    for x in lookahead:
        if not ideal_contains(host, mins, x).is_yes:
            raise CertificationError(
                f"ideal generator stream not stabilized within degree {bound}: "
                f"element {x} above the bound is not generated"
            )
    return mins


@dataclass
class RadicalResult:
    ideal: MonoidIdeal
    method: str  # "faces" | "slice"
    bound: int
    power_certificates: dict

    def to_json(self):
        return {
            "generators": [list(g) for g in self.ideal.generators],
            "method": self.method,
            "bound": self.bound,
            "power_certificates": {
                str(list(g)): n for g, n in sorted(self.power_certificates.items())
            },
        }


def radical(I, degree_bound=12, power_bound=64):
    """sqrt(I) = {x : nx in I for some n > 0}.

    Candidate: intersection of the face-complement primes containing I; it
    always contains sqrt(I).  Generator-level power certificates (n*g in I)
    then force candidate subset sqrt(I) globally, since n(g+m) = ng + nm
    stays in I + M.  If a certificate fails (possible only for torsion hosts,
    where the face argument is not a theorem), a direct bounded-slice
    construction is used and reported as such.
    """
    if I.pc_host is not None:
        inner = MonoidIdeal(I.host, I.generators)
        res = radical(inner, degree_bound, power_bound)
        wrapped = MonoidIdeal(I.pc_host, res.ideal.generators)
        return RadicalResult(wrapped, res.method, res.bound, res.power_certificates)
    host = I.host
    if not I.is_proper():
        raise ValueError("radical requires a proper ideal")
    if I.is_empty():
        return RadicalResult(MonoidIdeal(host, []), "faces", degree_bound, {})
    cone = _cone_of(host)
    avoid = _faces_avoiding(host, I.generators)

    def in_candidate(x):
        if not member(host, x).is_yes:
            return False
        v = set(cone.vanishing_set(cone.tq.project(x)))
        return not any(v >= set(f.normal_indices) for f in avoid)

    gens = _predicate_ideal_generators(host, in_candidate, degree_bound)
    certs = {}
    ok = True
    for g in gens:
        n = _power_in_ideal(I, g, power_bound)
        if n is None:
            ok = False
            break
        certs[g] = n
    if ok:
        for g in I.generators:
            assert in_candidate(g), f"ideal generator {g} escapes its own radical"
        return RadicalResult(MonoidIdeal(host, gens), "faces", degree_bound, certs)
    # fallback: direct bounded construction {x : nx in I, n <= power_bound}
    def by_power(x):
        return member(host, x).is_yes and _power_in_ideal(I, x, power_bound) is not None

    gens = _predicate_ideal_generators(host, by_power, degree_bound)
    certs = {g: _power_in_ideal(I, g, power_bound) for g in gens}
    if any(n is None for n in certs.values()):
        bad = next(g for g, n in certs.items() if n is None)
        raise CertificationError(f"radical certification failed for element {bad}")
    return RadicalResult(MonoidIdeal(host, gens), "slice", degree_bound, certs)


def _power_in_ideal(I, x, power_bound):
    amb = I.host.ambient
    for n in range(1, power_bound + 1):
        if I.member(amb.scale(n, x)).is_yes:
            return n
    return None


def is_radical(I, degree_bound=12):
    return radical(I, degree_bound).ideal.same_as(I)


@dataclass
class PrimeDecomposition:
    ideal: MonoidIdeal
    primes: list  # of (MonoidIdeal, complement CancellativeMonoid, Face)
    degree_bound: int
    irredundancy_witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "ideal": self.ideal.to_json(),
            "primes": [
                {
                    "generators": [list(g) for g in p.generators],
                    "complement_generators": [list(g) for g in c.generators],
                    "face": f.to_json(),
                }
                for p, c, f in self.primes
            ],
            "degree_bound": self.degree_bound,
        }


def prime_decomposition(I, degree_bound=12):
    """Write a proper radical ideal as an irredundant intersection of primes:
    complements of the maximal face submonoids disjoint from I, certified
    exhaustively on the bounded slice."""
    host = I.host if I.pc_host is None else I.pc_host.base
    inner = MonoidIdeal(host, I.generators)
    if not inner.is_proper():
        raise ValueError("prime_decomposition requires a proper ideal")
    if not is_radical(inner, degree_bound):
        raise ValueError("prime_decomposition requires a radical ideal")
    cone = _cone_of(host)
    avoid = _faces_avoiding(host, inner.generators)
    maximal = [
        f
        for f in avoid
        if not any(
            set(f.gen_indices) < set(g.gen_indices) for g in avoid if g is not f
        )
    ]
    primes = []
    for f in maximal:
        comp = face_submonoid(host, f)

        def outside_face(x, f=f):
            v = set(cone.vanishing_set(cone.tq.project(x)))
            return not (v >= set(f.normal_indices))

        pgens = _predicate_ideal_generators(host, outside_face, degree_bound)
        P = MonoidIdeal(host, pgens)
        if not is_prime(P):
            raise CertificationError(f"face complement for face {f.index} is not prime")
        primes.append((P, comp, f))
    # exhaustive certificate on the slice: intersection of primes equals I
    for x in sorted(host.slice(degree_bound)):
        in_all = all(P.member(x).is_yes for P, _, _ in primes)
        in_ideal = inner.member(x).is_yes
        if in_all != in_ideal:
            raise CertificationError(
                f"intersection certificate fails at {x}: "
                f"in all primes={in_all}, in ideal={in_ideal}"
            )
    witnesses = {}
    for i, (_, comp, f) in enumerate(primes):
        amb = host.ambient
        s = amb.zero()
        for g in comp.generators:
            s = amb.add(s, g)
        witnesses[i] = s  # lies in every other prime but not in this one
    return PrimeDecomposition(inner, primes, degree_bound, witnesses)


@dataclass
class FiltrationIdeal:
    """I_k: elements whose face index is at least k, with certified
    generators; membership is decided by face location."""

    host: object
    k: int
    ideal: MonoidIdeal
    degree_bound: int

    def member(self, x):
        if not member(self.host, x).is_yes:
            return Membership("no")
        return Membership(
            "yes" if face_locate(self.host, x).index >= self.k else "no"
        )

    @property
    def generators(self):
        return self.ideal.generators

    def to_json(self):
        return {
            "k": self.k,
            "generators": [list(g) for g in self.generators],
            "degree_bound": self.degree_bound,
        }


def ideal_filtration(M, degree_bound=12, require_seminormal=False):
    """The chain I_0 = M >= I_1 = M\\{0} >= ... >= I_r of face-filtration
    ideals of a positive cancellative monoid.

    Face location makes the chain well-defined for any positive host (the
    index is monotone under addition since a proper face has strictly
    smaller dimension); seminormality, which the interior-piece description
    needs, is only enforced on request.
    """
    if units_submonoid(M):
        raise ValueError("ideal_filtration requires a positive monoid")
    if require_seminormal and not is_seminormal(M):
        raise ValueError("ideal_filtration requires a seminormal monoid")
    faces = face_lattice(M)
    r = len(faces) - 1
    chain = []
    for k in range(r + 1):
        if k == 0:
            chain.append(
                FiltrationIdeal(M, 0, MonoidIdeal(M, [M.ambient.zero()]), degree_bound)
            )
            continue

        def at_least_k(x, k=k):
            return face_locate(M, x).index >= k

        gens = _predicate_ideal_generators(M, at_least_k, degree_bound)
        ideal = MonoidIdeal(M, gens)
        # certify on the slice: the generated ideal matches the predicate
        for x in sorted(M.slice(degree_bound)):
            want = any(x) and at_least_k(x)
            got = ideal.member(x).is_yes
            if want != got:
                raise CertificationError(
                    f"filtration certificate fails at {x} for k={k}"
                )
        chain.append(FiltrationIdeal(M, k, ideal, degree_bound))
    # I_1 = M \ {0}: its generators are exactly the monoid generators
    if r >= 1:
        one = set(chain[1].generators)
        assert one == set(
            MonoidIdeal(M, list(M.generators)).minimal_generators()
        ), "I_1 is not the maximal ideal"
    return chain


def prime_pullback(Mpc, P):
    """Pull a prime of N/I0 back to a prime of N containing I0."""
    if not isinstance(Mpc, PcMonoid):
        raise ValueError("prime_pullback expects a pc monoid host")
    if Mpc.is_singleton():
        raise ValueError("the singleton quotient has no proper prime ideals")
    base = Mpc.base
    gens = list(P.generators) + list(Mpc.collapse_gens)
    pulled = MonoidIdeal(base, gens)
    if not pulled.is_proper():
        raise ValueError("pullback is not proper")
    if not is_prime(pulled):
        raise ValueError("input ideal is not prime (pullback fails the face test)")
    return pulled
