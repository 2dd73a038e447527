"""
Programmatic builders for the worked examples shipped with the package:
single loop, double loop, Kronecker quiver, the three-vertex quiver with a
degree-two generator (in its two embeddings), and the finite-window block
quiver with back-and-forth arrows and degree-two relations.

Matching `.cov` workspace files live in covol/fixtures/.
"""

from .coalgebra import PathIndex, SparseVector, full_subcoalgebra, \
    subcoalgebra_closure
from .groups import FgAbelian, FreeGroup
from .quiver import Quiver, spanning_tree_pi1
from .voltage import ArrowWeighting, window_ball


class Fixture:
    def __init__(self, name, quiver, group, weighting, pindex, basis,
                 base_vertex=0):
        self.name = name
        self.quiver = quiver
        self.group = group
        self.weighting = weighting
        self.pindex = pindex
        self.basis = basis
        self.base_vertex = base_vertex
        self._pres = None

    @property
    def pres(self):
        if self._pres is None:
            self._pres = spanning_tree_pi1(self.quiver, self.base_vertex)
        return self._pres

    def window(self, radius):
        return window_ball(self.group, radius)

    def __repr__(self):
        return "Fixture(%s)" % self.name


def loop_fixture(n=5):
    """Single loop; subcoalgebra spanned by the paths of length < n."""
    q = Quiver(["x"], [("a", "x", "x")])
    group = FgAbelian(1)
    w = ArrowWeighting.by_name(q, group, {"a": group.element(free=[1])})
    pindex = PathIndex(q, n - 1)
    return Fixture("loop", q, group, w, pindex, full_subcoalgebra(pindex))


def double_loop_fixture(truncation=3):
    """Two loops at one vertex; full truncated path coalgebra."""
    q = Quiver(["x"], [("a", "x", "x"), ("b", "x", "x")])
    group = FreeGroup(2, names=["a", "b"])
    w = ArrowWeighting.by_name(q, group, {"a": group.generator(0),
                                          "b": group.generator(1)})
    pindex = PathIndex(q, truncation)
    return Fixture("dbl", q, group, w, pindex, full_subcoalgebra(pindex))


def kronecker_fixture(truncation=2):
    """Two parallel arrows x -> y; full path coalgebra (max length 1)."""
    q = Quiver(["x", "y"], [("a", "x", "y"), ("b", "x", "y")])
    group = FgAbelian(1)
    w = ArrowWeighting.by_name(q, group, {"a": group.element(free=[0]),
                                          "b": group.element(free=[1])})
    pindex = PathIndex(q, truncation)
    return Fixture("kron", q, group, w, pindex, full_subcoalgebra(pindex))


def tri_fixture(generator="ac", truncation=2):
    """x -c-> y with parallel a, b: y -> z, plus one degree-two generator:
    either the path a.c or the sum a.c + b.c.  The two subcoalgebras are
    isomorphic but sit differently inside the path coalgebra."""
    q = Quiver(["x", "y", "z"],
               [("c", "x", "y"), ("a", "y", "z"), ("b", "y", "z")])
    group = FgAbelian(1)
    w = ArrowWeighting.by_name(q, group, {"a": group.element(free=[0]),
                                          "b": group.element(free=[1]),
                                          "c": group.element(free=[0])})
    pindex = PathIndex(q, truncation)
    ac = SparseVector.unit(pindex.from_names(["a", "c"]))
    bc = SparseVector.unit(pindex.from_names(["b", "c"]))
    if generator == "ac":
        gen, name = ac, "tri_ac"
    elif generator == "ac+bc":
        gen, name = ac + bc, "tri_acbc"
    else:
        raise ValueError("generator must be 'ac' or 'ac+bc'")
    return Fixture(name, q, group, w, pindex, subcoalgebra_closure(pindex, [gen]))


def sl2_fixture(m=5, truncation=2):
    """Block quiver x0 <-> x1 <-> ... <-> x_{m-1} with forward arrows a_i
    and backward arrows b_i, spanned by vertices, arrows, the path b0.a0,
    and the degree-two sums a_i.b_i + b_{i+1}.a_{i+1}."""
    vertices = ["x%d" % i for i in range(m)]
    arrows = []
    for i in range(m - 1):
        arrows.append(("a%d" % i, "x%d" % i, "x%d" % (i + 1)))
        arrows.append(("b%d" % i, "x%d" % (i + 1), "x%d" % i))
    q = Quiver(vertices, arrows)
    group = FgAbelian(1)
    named = {}
    for i in range(m - 1):
        named["a%d" % i] = group.element(free=[0])
        named["b%d" % i] = group.element(free=[-1])
    w = ArrowWeighting.by_name(q, group, named)
    pindex = PathIndex(q, truncation)
    gens = [SparseVector.unit(pindex.from_names(["b0", "a0"]))]
    for i in range(m - 2):
        first = SparseVector.unit(pindex.from_names(["a%d" % i, "b%d" % i]))
        second = SparseVector.unit(
            pindex.from_names(["b%d" % (i + 1), "a%d" % (i + 1)]))
        gens.append(first + second)
    return Fixture("sl2", q, group, w, pindex, subcoalgebra_closure(pindex, gens))


def all_fixtures():
    return [loop_fixture(), double_loop_fixture(), kronecker_fixture(),
            tri_fixture("ac"), tri_fixture("ac+bc"), sl2_fixture()]
