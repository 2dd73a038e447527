"""
Length-truncated path coalgebras, admissible subcoalgebras, minimal
elements, homogeneity under an arrow weighting, smash coproduct
coalgebras, and the explicit basis-level coalgebra isomorphisms between
a smash coproduct and the path coalgebra of the smash coproduct quiver.

A coalgebra-with-basis exposes `symbols()`, `coproduct(sym)` returning
(terms, truncated) with terms a list of (coeff, left, right), and
`counit(sym)`.  Window-truncated coproduct terms are flagged, never
silently dropped: every verifier skips symbols whose expansion hits the
window boundary.
"""

from fractions import Fraction

from .exactlin import SparseVector, rref, intersect_coordinates, \
    finest_block_partition
from .quiver import QuiverError, Walk, lift_walk
from .voltage import path_weight, twist_weighting, weighting_from_lifting


class CoalgebraError(ValueError):
    pass


class PathIndex:
    """Stable enumeration of all paths of length <= truncation.

    Paths are (source, target, arrows) with arrows in traversal order;
    vertices are the length-0 paths and come first, then arrows, then
    longer paths generated in enumeration order.
    """

    def __init__(self, quiver, truncation):
        self.quiver = quiver
        self.truncation = truncation
        self.paths = []
        self._index = {}
        self.by_pair = {}
        for v in range(quiver.num_vertices()):
            self._append(v, v, ())
        frontier = list(range(len(self.paths)))
        for _ in range(truncation):
            nxt = []
            for i in frontier:
                src, tgt, arrows = self.paths[i]
                for a in quiver.out_arrows[tgt]:
                    nxt.append(self._append(src, quiver.target(a), arrows + (a,)))
            frontier = nxt

    def _append(self, src, tgt, arrows):
        idx = len(self.paths)
        self.paths.append((src, tgt, arrows))
        key = arrows if arrows else ("v", src)
        self._index[key] = idx
        self.by_pair.setdefault((src, tgt), []).append(idx)
        return idx

    def __len__(self):
        return len(self.paths)

    def source(self, i):
        return self.paths[i][0]

    def target(self, i):
        return self.paths[i][1]

    def arrows(self, i):
        return self.paths[i][2]

    def length(self, i):
        return len(self.paths[i][2])

    def vertex_path(self, v):
        if isinstance(v, str):
            v = self.quiver.vertex_index[v]
        return self._index[("v", v)]

    def arrow_path(self, a):
        if isinstance(a, str):
            a = self.quiver.arrow_index[a]
        return self._index[(a,)]

    def path_of(self, arrows):
        """Index of the path with the given traversal-order arrows, or None."""
        return self._index.get(tuple(arrows))

    def from_names(self, names, start=None):
        """Path from arrow names in right-to-left display order; a bare
        vertex label (with start=None) gives the length-0 path."""
        if not names:
            raise CoalgebraError("empty path expression")
        if len(names) == 1 and names[0] in self.quiver.vertex_index:
            return self.vertex_path(names[0])
        arrows = [self.quiver.arrow_index[n] for n in reversed(names)]
        idx = self.path_of(arrows)
        if idx is None:
            raise CoalgebraError("path %s exceeds truncation %d" %
                                 (".".join(names), self.truncation))
        return idx

    def label(self, i):
        src, _, arrows = self.paths[i]
        if not arrows:
            return self.quiver.vertices[src]
        return ".".join(self.quiver.arrow_name(a) for a in reversed(arrows))

    def weight(self, weighting, i):
        return path_weight(weighting, self.paths[i][2])


def delta_terms(pindex, i):
    """Splittings of a path: all (later part, earlier part) pairs including
    the two vertex boundary terms; a vertex is group-like."""
    src, tgt, arrows = pindex.paths[i]
    if not arrows:
        return [(i, i)]
    out = [(pindex.vertex_path(tgt), i), (i, pindex.vertex_path(src))]
    for k in range(1, len(arrows)):
        early = pindex.path_of(arrows[:k])
        late = pindex.path_of(arrows[k:])
        out.append((late, early))
    return out


def delta_vector(pindex, vec):
    """Coproduct of a path vector as a dict (left, right) -> coefficient."""
    out = {}
    for i, c in vec.items():
        for left, right in delta_terms(pindex, i):
            key = (left, right)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def counit_vector(pindex, vec):
    return sum((c for i, c in vec.items() if pindex.length(i) == 0), Fraction(0))


def endpoints(pindex, vec):
    """(source, target) if the vector is endpoint-homogeneous, else None."""
    pairs = {(pindex.source(i), pindex.target(i)) for i in vec.support()}
    if len(pairs) == 1:
        return next(iter(pairs))
    return None


class TruncatedPathCoalgebra:
    """The full path coalgebra truncated by length; symbols are path indices."""

    def __init__(self, pindex):
        self.pindex = pindex

    def symbols(self):
        return list(range(len(self.pindex)))

    def coproduct(self, sym):
        return [(Fraction(1), l, r) for l, r in delta_terms(self.pindex, sym)], False

    def counit(self, sym):
        return Fraction(1 if self.pindex.length(sym) == 0 else 0)

    def label(self, sym):
        return self.pindex.label(sym)

    @property
    def dimension(self):
        return len(self.pindex)


class SubcoalgebraBasis:
    """Admissible subcoalgebra of a truncated path coalgebra.

    Stored as per-(source, target) RREF subspaces in global path
    coordinates.  Symbols are 0..dim-1 in (source, target, row) order; the
    coproduct is expanded in the tensor basis through pivot coordinates.
    """

    def __init__(self, pindex, spaces):
        self.pindex = pindex
        self.spaces = {k: v for k, v in spaces.items() if v.dimension}
        self.basis_rows = []
        for pair in sorted(self.spaces):
            for k in range(self.spaces[pair].dimension):
                self.basis_rows.append((pair, k))
        self._coproduct_cache = {}

    @property
    def dimension(self):
        return len(self.basis_rows)

    def symbols(self):
        return list(range(self.dimension))

    def row_vector(self, sym):
        pair, k = self.basis_rows[sym]
        return self.spaces[pair].rows[k]

    def row_endpoints(self, sym):
        return self.basis_rows[sym][0]

    def label(self, sym):
        vec = self.row_vector(sym)
        parts = []
        for i in sorted(vec.support()):
            c = vec[i]
            txt = self.pindex.label(i)
            parts.append(txt if c == 1 else "%s*%s" % (c, txt))
        return "+".join(parts)

    def member(self, vec):
        residual = vec
        for pair, space in self.spaces.items():
            residual = space.reduce(residual)
        return residual.is_zero()

    def coordinates(self, vec):
        """Coefficients in the global basis order, or None if not a member."""
        coeffs = {}
        residual = vec
        for sym in range(self.dimension):
            pair, k = self.basis_rows[sym]
            space = self.spaces[pair]
            c = residual[space.pivots[k]]
            if c:
                coeffs[sym] = c
                residual = residual - space.rows[k].scale(c)
        if residual.is_zero():
            return coeffs
        return None

    def coproduct(self, sym):
        if sym in self._coproduct_cache:
            return self._coproduct_cache[sym]
        matrix = delta_vector(self.pindex, self.row_vector(sym))
        pivot_of = {}
        for s in range(self.dimension):
            pair, k = self.basis_rows[s]
            pivot_of[self.spaces[pair].pivots[k]] = s
        terms = []
        rebuilt = {}
        for (pl, pr), c in matrix.items():
            if pl in pivot_of and pr in pivot_of:
                sl, sr = pivot_of[pl], pivot_of[pr]
                coeff = c
                terms.append((coeff, sl, sr))
        for coeff, sl, sr in terms:
            lvec, rvec = self.row_vector(sl), self.row_vector(sr)
            for i, a in lvec.items():
                for j, b in rvec.items():
                    key = (i, j)
                    s = rebuilt.get(key, 0) + coeff * a * b
                    if s:
                        rebuilt[key] = s
                    else:
                        del rebuilt[key]
        if rebuilt != matrix:
            raise CoalgebraError("coproduct escapes the subcoalgebra at %r"
                                 % self.label(sym))
        out = (terms, False)
        self._coproduct_cache[sym] = out
        return out

    def counit(self, sym):
        return counit_vector(self.pindex, self.row_vector(sym))

    def all_path_symbols(self):
        """Path indices whose unit vectors lie in the subcoalgebra."""
        out = []
        for pair, space in sorted(self.spaces.items()):
            for i in self.pindex.by_pair.get(pair, []):
                if space.member(SparseVector.unit(i)):
                    out.append(i)
        return out


def subcoalgebra_closure(pindex, generators):
    """Smallest admissible subcoalgebra containing the generators: adds all
    vertices and arrows, then closes under one-sided coproduct components
    (rows and columns of the coproduct matrices) to a fixpoint."""
    vectors = [SparseVector.unit(pindex.vertex_path(v))
               for v in range(pindex.quiver.num_vertices())]
    vectors += [SparseVector.unit(pindex.arrow_path(a))
                for a in range(pindex.quiver.num_arrows())]
    vectors += list(generators)
    space = rref(vectors)
    while True:
        new_vectors = list(space.rows)
        for row in space.rows:
            matrix = delta_vector(pindex, row)
            rows, cols = {}, {}
            for (l, r), c in matrix.items():
                rows.setdefault(l, {})[r] = c
                cols.setdefault(r, {})[l] = c
            for profile in list(rows.values()) + list(cols.values()):
                new_vectors.append(SparseVector(profile))
        bigger = rref(new_vectors)
        if bigger.dimension == space.dimension:
            break
        space = bigger
    by_pair = {}
    for row in space.rows:
        pair = endpoints(pindex, row)
        if pair is None:
            raise CoalgebraError("closure produced a mixed-endpoint element")
        by_pair.setdefault(pair, []).append(row)
    sub = SubcoalgebraBasis(pindex, {p: rref(rs) for p, rs in by_pair.items()})
    for sym in sub.symbols():
        sub.coproduct(sym)  # raises if the span is not a subcoalgebra
    return sub


def full_subcoalgebra(pindex):
    return subcoalgebra_closure(
        pindex, [SparseVector.unit(i) for i in range(len(pindex))])


def minimal_partition(basis):
    """Per-(source, target) finest block partition of the supported paths,
    with one representative minimal element for every block of size >= 2
    (the lowest-index RREF row supported inside the block)."""
    out = {}
    for pair in sorted(basis.spaces):
        space = basis.spaces[pair]
        blocks = []
        for block in finest_block_partition(space):
            rep = None
            if len(block) >= 2:
                blockset = set(block)
                for row in space.rows:
                    if row.support() <= blockset:
                        rep = row
                        break
            blocks.append((block, rep))
        out[pair] = blocks
    return out


def minimal_elements(basis):
    """All representative minimal elements with their endpoint pairs."""
    out = []
    for pair, blocks in minimal_partition(basis).items():
        for block, rep in blocks:
            if rep is not None:
                out.append((pair, block, rep))
    return out


def minimal_rows(basis):
    """Every RREF row with support of size >= 2, as (endpoint pair, row).

    Each such row is a minimal element: a member supported inside a row's
    support reduces to a multiple of that row, so no proper subsum lies in
    the subcoalgebra.  A block can carry several of these.
    """
    out = []
    for sym in basis.symbols():
        row = basis.row_vector(sym)
        if len(row.support()) >= 2:
            out.append((basis.row_endpoints(sym), row))
    return out


def is_homogeneous(basis, weighting, return_witness=False):
    """Homogeneity of a subcoalgebra under an arrow weighting.

    Primary test: the dimension of the subcoalgebra equals the sum over
    (source, target, weight) of the dimensions of its intersections with
    the fixed-weight coordinate spans.  The witness on failure is a basis
    row whose support mixes weights.
    """
    total = 0
    witness = None
    for pair, space in sorted(basis.spaces.items()):
        supported = set()
        for row in space.rows:
            supported |= row.support()
        by_weight = {}
        for i in sorted(supported):
            w = basis.pindex.weight(weighting, i)
            by_weight.setdefault(w, set()).add(i)
        for w in by_weight:
            total += intersect_coordinates(space, by_weight[w]).dimension
        if witness is None:
            for row in space.rows:
                weights = {basis.pindex.weight(weighting, i) for i in row.support()}
                if len(weights) > 1:
                    witness = row
                    break
    homogeneous = total == basis.dimension
    if return_witness:
        return homogeneous, (None if homogeneous else witness)
    return homogeneous


def row_weight(basis, weighting, sym):
    """Weight of a basis row of a homogeneous subcoalgebra."""
    weights = {basis.pindex.weight(weighting, i)
               for i in basis.row_vector(sym).support()}
    if len(weights) != 1:
        raise CoalgebraError("basis row %r is not weight-homogeneous"
                             % basis.label(sym))
    return next(iter(weights))


class SmashCoalgebra:
    """Smash coproduct of a graded coalgebra-with-basis and a group window.

    Symbols are (base symbol, window element).  The coproduct of (c, g) is
    the sum over base coproduct terms (c1, c2) of (c1, w(c2) g) tensor
    (c2, g); terms whose shifted window element escapes the window are
    dropped and the symbol is flagged truncated.
    """

    def __init__(self, base, weight_of, group, window):
        self.base = base
        self.weight_of = weight_of
        self.group = group
        self.window = list(window)
        self.window_pos = {g: i for i, g in enumerate(self.window)}
        self._symbols = [(c, g) for g in self.window for c in base.symbols()]
        self._symbol_pos = {s: i for i, s in enumerate(self._symbols)}

    def symbols(self):
        return list(self._symbols)

    def has_symbol(self, sym):
        return sym in self._symbol_pos

    def coproduct(self, sym):
        c, g = sym
        terms = []
        truncated = False
        base_terms, base_truncated = self.base.coproduct(c)
        truncated |= base_truncated
        for coeff, c1, c2 in base_terms:
            shifted = self.group.multiply(self.weight_of(c2), g)
            if shifted in self.window_pos:
                terms.append((coeff, (c1, shifted), (c2, g)))
            else:
                truncated = True
        return terms, truncated

    def counit(self, sym):
        return self.base.counit(sym[0])

    def is_interior(self, sym):
        return not self.coproduct(sym)[1]

    def label(self, sym):
        return "%s#%s" % (self.base.label(sym[0]), self.group.format(sym[1]))

    @property
    def dimension(self):
        return len(self._symbols)


def smash_coalgebra(basis, weighting, window):
    """Smash coproduct coalgebra of a homogeneous subcoalgebra."""
    ok, witness = is_homogeneous(basis, weighting, return_witness=True)
    if not ok:
        raise CoalgebraError("subcoalgebra is not homogeneous; witness %r"
                             % {basis.pindex.label(i): str(witness[i])
                                for i in sorted(witness.support())})
    weights = {sym: row_weight(basis, weighting, sym) for sym in basis.symbols()}
    return SmashCoalgebra(basis, lambda s: weights[s], weighting.group, window)


def smash_path_coalgebra(pindex, weighting, window):
    """Smash coproduct of the full truncated path coalgebra."""
    base = TruncatedPathCoalgebra(pindex)
    return SmashCoalgebra(base, lambda i: pindex.weight(weighting, i),
                          weighting.group, window)


# ---------------------------------------------------------------------------
# linear maps between coalgebras-with-basis


def apply_map(linmap, vec):
    out = {}
    for sym, c in vec.items():
        image = linmap.get(sym)
        if image is None:
            return None
        for t, d in image.items():
            s = out.get(t, 0) + c * d
            if s:
                out[t] = s
            else:
                del out[t]
    return out


def compose_maps(second, first):
    out = {}
    for sym, image in first.items():
        acc = apply_map(second, image)
        if acc is not None:
            out[sym] = acc
    return out


def basis_map(pairs):
    """Linear map sending each symbol to a single symbol with coefficient 1."""
    return {src: {dst: Fraction(1)} for src, dst in pairs}


def is_identity_map(linmap):
    return all(image == {sym: Fraction(1)} for sym, image in linmap.items())


def coproduct_of_vector(coalgebra, vec):
    """Coproduct of a symbol-coefficient dict; (tensor dict, truncated)."""
    out = {}
    truncated = False
    for sym, c in vec.items():
        terms, t = coalgebra.coproduct(sym)
        truncated |= t
        for coeff, l, r in terms:
            key = (l, r)
            s = out.get(key, 0) + c * coeff
            if s:
                out[key] = s
            else:
                del out[key]
    return out, truncated


def verify_coalgebra_map(linmap, source, target, symbols=None):
    """Check (f tensor f) . Delta = Delta . f and counit preservation on
    every symbol whose expansions avoid the window boundary on both sides.

    Returns (ok, witness symbol, checked count).
    """
    if symbols is None:
        symbols = [s for s in source.symbols() if s in linmap]
    checked = 0
    for sym in symbols:
        terms, truncated = source.coproduct(sym)
        if truncated:
            continue
        image = linmap.get(sym)
        if image is None:
            continue
        lhs, t2 = coproduct_of_vector(target, image)
        if t2:
            continue
        rhs = {}
        skip = False
        for coeff, l, r in terms:
            il, ir = linmap.get(l), linmap.get(r)
            if il is None or ir is None:
                skip = True
                break
            for a, ca in il.items():
                for b, cb in ir.items():
                    key = (a, b)
                    s = rhs.get(key, 0) + coeff * ca * cb
                    if s:
                        rhs[key] = s
                    else:
                        del rhs[key]
        if skip:
            continue
        if lhs != rhs:
            return False, sym, checked
        eps = sum((c * target.counit(t) for t, c in image.items()), Fraction(0))
        if eps != source.counit(sym):
            return False, sym, checked
        checked += 1
    return True, None, checked


def coassociativity_ok(coalgebra, symbols=None):
    """Exact coassociativity and counit laws, skipping symbols whose
    two-level expansion hits the window boundary.  Returns (ok, witness,
    checked count)."""
    if symbols is None:
        symbols = coalgebra.symbols()
    checked = 0
    for sym in symbols:
        terms, truncated = coalgebra.coproduct(sym)
        if truncated:
            continue
        left, right = {}, {}
        skip = False
        for coeff, l, r in terms:
            lt, t1 = coalgebra.coproduct(l)
            rt, t2 = coalgebra.coproduct(r)
            if t1 or t2:
                skip = True
                break
            for c2, a, b in lt:
                key = (a, b, r)
                s = left.get(key, 0) + coeff * c2
                if s:
                    left[key] = s
                else:
                    del left[key]
            for c2, a, b in rt:
                key = (l, a, b)
                s = right.get(key, 0) + coeff * c2
                if s:
                    right[key] = s
                else:
                    del right[key]
        if skip:
            continue
        if left != right:
            return False, sym, checked
        # counit laws: (eps x id) Delta = id = (id x eps) Delta
        lsum, rsum = {}, {}
        for coeff, l, r in terms:
            e = coalgebra.counit(l)
            if e:
                lsum[r] = lsum.get(r, 0) + coeff * e
            e = coalgebra.counit(r)
            if e:
                rsum[l] = rsum.get(l, 0) + coeff * e
        ident = {sym: Fraction(1)}
        if {k: v for k, v in lsum.items() if v} != ident:
            return False, sym, checked
        if {k: v for k, v in rsum.items() if v} != ident:
            return False, sym, checked
        checked += 1
    return True, None, checked


# ---------------------------------------------------------------------------
# explicit isomorphisms


def smash_to_cover_paths(smash_q, base_pindex, cover_pindex):
    """Basis bijection from the smash coproduct of the full truncated path
    coalgebra onto the path coalgebra of the smash coproduct quiver:
    (p, g) becomes the unique lift of p through the window fiber g.

    Partial where the lift leaves the window; total on interior symbols.
    Returns the map as a symbol-to-symbol dict wrapped in coefficients.
    """
    weighting = smash_q.weighting
    group = smash_q.group
    pairs = []
    for g in smash_q.window:
        for i in range(len(base_pindex)):
            src, _, arrows = base_pindex.paths[i]
            if not arrows:
                v = smash_q.vertex_of(src, g)
                if v is not None:
                    pairs.append(((i, g), cover_pindex.vertex_path(v)))
                continue
            cover_arrows = []
            cur = g
            ok = True
            for a in arrows:
                ca = smash_q.arrow_of(a, cur)
                if ca is None:
                    ok = False
                    break
                cover_arrows.append(ca)
                cur = group.multiply(weighting.of(a), cur)
            if not ok:
                continue
            idx = cover_pindex.path_of(cover_arrows)
            if idx is not None:
                pairs.append(((i, g), idx))
    return basis_map(pairs)


def cover_projection_map(cover_pindex, base_pindex, morphism):
    """Path-coalgebra map induced by a quiver covering: arrow-wise image."""
    pairs = []
    for i in range(len(cover_pindex)):
        src, _, arrows = cover_pindex.paths[i]
        if not arrows:
            img = base_pindex.vertex_path(morphism.vertex_map[src])
        else:
            img = base_pindex.path_of(tuple(morphism.arrow_map[a] for a in arrows))
        pairs.append((i, img))
    return basis_map(pairs)


def smash_projection_map(smash_coalg):
    """Canonical coalgebra map of a smash coproduct onto its base: forget
    the window coordinate."""
    return basis_map([(sym, sym[0]) for sym in smash_coalg.symbols()])


def covering_coalgebra_iso(cover, lifting, base_pindex, cover_pindex, window):
    """The mutually inverse coalgebra isomorphisms between the truncated
    path coalgebra of a Galois cover and the smash coproduct built from a
    lifting.

    Returns (psi, phi, smash_coalgebra, induced weighting) where
    psi: cover paths -> smash symbols sends a path to (its projection,
    deck displacement of its start from the lifted start), and
    phi: smash symbols -> cover paths lifts a path at the deck translate
    of the lifted source.  Both are partial near the window boundary.
    """
    group = cover.group
    base = cover.morphism.codomain
    induced = weighting_from_lifting(cover, lifting)
    smash_coalg = smash_path_coalgebra(base_pindex, induced, window)
    window_set = set(window)

    psi_pairs = []
    for i in range(len(cover_pindex)):
        src, _, arrows = cover_pindex.paths[i]
        base_src = cover.morphism.vertex_map[src]
        sigma = group.multiply(group.inverse(cover.deck_of(lifting[base_src])),
                               cover.deck_of(src))
        if sigma not in window_set:
            continue
        if arrows:
            img = base_pindex.path_of(tuple(cover.morphism.arrow_map[a]
                                            for a in arrows))
        else:
            img = base_pindex.vertex_path(base_src)
        psi_pairs.append((i, (img, sigma)))
    psi = basis_map(psi_pairs)

    phi_pairs = []
    for g in window:
        for i in range(len(base_pindex)):
            src, _, arrows = base_pindex.paths[i]
            start = cover.act_vertex(lifting[src], g)
            if start is None:
                continue
            if not arrows:
                phi_pairs.append(((i, g), cover_pindex.vertex_path(start)))
                continue
            try:
                walk = Walk(base, src, tuple((a, 1) for a in arrows))
                lifted = lift_walk(cover.morphism, walk, start)
            except QuiverError:
                continue
            idx = cover_pindex.path_of(tuple(a for a, _ in lifted.steps))
            if idx is not None:
                phi_pairs.append(((i, g), idx))
    phi = basis_map(phi_pairs)
    return psi, phi, smash_coalg, induced


def twist_iso(base_pindex, weighting, vertex_weighting, window):
    """Coalgebra isomorphism between the smash coproducts over a weighting
    and its twist: (p, g) maps to (p, gamma(s(p))^-1 g).

    Returns (map, source smash, target smash, twisted weighting).
    """
    group = weighting.group
    source = smash_path_coalgebra(base_pindex, weighting, window)
    twisted = twist_weighting(weighting, vertex_weighting)
    target = smash_path_coalgebra(base_pindex, twisted, window)
    pairs = []
    for sym in source.symbols():
        i, g = sym
        shifted = group.multiply(
            group.inverse(vertex_weighting.of(base_pindex.source(i))), g)
        if target.has_symbol((i, shifted)):
            pairs.append((sym, (i, shifted)))
    return basis_map(pairs), source, target, twisted


# ---------------------------------------------------------------------------
# JSON

def rational_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (
        c.numerator, c.denominator)


def subcoalgebra_to_json(basis):
    spaces = []
    for pair in sorted(basis.spaces):
        space = basis.spaces[pair]
        rows = []
        for row in space.rows:
            rows.append([{"path": list(basis.pindex.arrows(i)),
                          "coeff": rational_str(row[i])}
                         for i in sorted(row.support())])
        spaces.append({
            "source": basis.pindex.quiver.vertices[pair[0]],
            "target": basis.pindex.quiver.vertices[pair[1]],
            "rows": rows,
        })
    return {
        "schema": 1,
        "truncation": basis.pindex.truncation,
        "dimension": basis.dimension,
        "spaces": spaces,
    }
