"""The Lie algebra Q[H] of an abelian group with an alternating form.

Q[H] is the rational vector space with basis the elements of H, written
[x].  The bracket is the bilinear extension of

    [[x], [y]] = <x, y> [x + y],

which is skew because the pairing alternates and satisfies Jacobi
because <.,.> is bilinear and x + y + z is symmetric in the three
summands.  Beware that the bracket mixes the two structures on H: the
basis label x + y uses the group law while coefficients live in Q, so
c[x] and [cx] are different vectors.

K is the linear map Q[H] -> Q (x) H sending [x] to 1 (x) x.  Torsion
dies in Q (x) H, so K reads off the free canonical coordinates of each
basis label.  Its kernel g_K is a Lie subalgebra: the pairing factors
through Q (x) H, so K([a, b]) collects terms weighted by the pairing of
each label against K(b) or K(a), and both weights vanish on g_K.  Note
K does not kill brackets in general: K([[x], [y]]) = <x, y>(xbar + ybar).

>>> from goldman.groups import GroupSpec
>>> z2 = GroupSpec(2, form=[[0, 1], [-1, 0]])
>>> x, y = (AlgebraVector.basis(g) for g in z2.generators())
>>> bracket(x, y).to_pairs()
[(Fraction(1, 1), (1, 1))]
>>> bracket(x, x).is_zero()
True
>>> k_map(x - x).is_zero()
True
>>> u = AlgebraVector.basis(z2.canonical([2, 0])) - 2 * AlgebraVector.basis(z2.canonical([1, 0]))
>>> in_gk(u)
True
"""

from fractions import Fraction

__all__ = [
    "AlgebraVector",
    "TensorVector",
    "bracket",
    "k_map",
    "in_gk",
]


class AlgebraVector:
    """An element of Q[H]: a finite rational combination of basis labels.

    ``terms`` maps GroupElement to a nonzero Fraction.  Instances are
    treated as immutable; all arithmetic returns new vectors with zero
    coefficients dropped.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms=()):
        self.spec = spec
        clean = {}
        for element, coeff in (terms.items() if hasattr(terms, "items") else terms):
            if element.spec is not spec:
                raise ValueError("term label belongs to a different group")
            coeff = Fraction(coeff)
            if coeff:
                acc = clean.get(element, 0) + coeff
                if acc:
                    clean[element] = acc
                else:
                    del clean[element]
        self.terms = clean

    @classmethod
    def basis(cls, element, coeff=1):
        """The vector coeff * [element]."""
        return cls(element.spec, [(element, coeff)])

    @classmethod
    def zero(cls, spec):
        return cls(spec)

    def is_zero(self):
        return not self.terms

    def coefficient(self, element):
        return self.terms.get(element, Fraction(0))

    def items(self):
        """Deterministic (element, coefficient) pairs, sorted by label."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].coords)

    def to_pairs(self):
        """Serialization as (coefficient, canonical-coordinates) pairs."""
        return [(coeff, element.coords) for element, coeff in self.items()]

    def __add__(self, other):
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        if other.spec is not self.spec:
            raise ValueError("vectors belong to different groups")
        merged = dict(self.terms)
        for element, coeff in other.terms.items():
            acc = merged.get(element, 0) + coeff
            if acc:
                merged[element] = acc
            else:
                del merged[element]
        out = AlgebraVector(self.spec)
        out.terms = merged
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = AlgebraVector(self.spec)
        out.terms = {element: -coeff for element, coeff in self.terms.items()}
        return out

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        scalar = Fraction(scalar)
        out = AlgebraVector(self.spec)
        if scalar:
            out.terms = {element: scalar * coeff for element, coeff in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, AlgebraVector)
                and other.spec is self.spec
                and other.terms == self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for element, coeff in self.items():
            bits.append("%s*[%r]" % (coeff, element))
        return " + ".join(bits)


class TensorVector:
    """An element of Q (x) H: rational coordinates on the free part of H.

    Torsion canonical coordinates contribute nothing (Q (x) Z/d = 0), so
    the vector has one entry per free canonical index of the spec.
    """

    __slots__ = ("spec", "coords")

    def __init__(self, spec, coords=None):
        self.spec = spec
        if coords is None:
            coords = (Fraction(0),) * spec.free_rank
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != spec.free_rank:
            raise ValueError("expected %d free coordinates" % spec.free_rank)
        self.coords = coords

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        if other.spec is not self.spec:
            raise ValueError("vectors belong to different groups")
        return TensorVector(self.spec, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorVector(self.spec, [-c for c in self.coords])

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return TensorVector(self.spec, [Fraction(scalar) * c for c in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, TensorVector)
                and other.spec is self.spec
                and other.coords == self.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def bracket(a, b):
    """The bracket on Q[H], extended bilinearly from [[x],[y]] = <x,y>[x+y]."""
    if a.spec is not b.spec:
        raise ValueError("vectors belong to different groups")
    spec = a.spec
    acc = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            p = spec.pairing(x, y)
            if p:
                label = x + y
                total = acc.get(label, 0) + cx * cy * p
                if total:
                    acc[label] = total
                else:
                    del acc[label]
    out = AlgebraVector(spec)
    out.terms = acc
    return out


def k_map(a):
    """K: Q[H] -> Q (x) H, the linear extension of [x] |-> 1 (x) x."""
    spec = a.spec
    free = spec.free_indices
    coords = [Fraction(0)] * len(free)
    for element, coeff in a.terms.items():
        for slot, j in enumerate(free):
            c = element.coords[j]
            if c:
                coords[slot] += coeff * c
    return TensorVector(spec, coords)


def in_gk(a):
    """Membership in g_K = ker K."""
    return k_map(a).is_zero()
