"""Structural identities of the bracket calculus behind the stu2 families."""

from jacobitrees import braidlie
from jacobitrees.lie import GradedConfig, expand, expand_graded, to_lyndon_coordinates
from jacobitrees.trees import TreeVector, enumerate_trees

MODELS = (braidlie.MODEL_ODD_DIM, braidlie.MODEL_EVEN_DIM)


def element_to_tree_vector(elem, n, model):
    """Multilinear top-layer part as a tree vector (with the odd-model
    leaf-permutation sign), mirroring the extraction in doubling_image."""
    terms = {}
    for mono, c in elem.items():
        if braidlie.layer(mono) != n + 1 or not braidlie._is_pure(mono, n + 1):
            continue
        targets = braidlie._leaf_targets(mono)
        if sorted(targets) != list(range(1, n + 1)):
            continue
        sign = braidlie._leaf_order_sign(mono) if model.gamma else 1
        t = braidlie._mono_to_tree(mono)
        terms[t] = terms.get(t, 0) + sign * c
    terms = {k: v for k, v in terms.items() if v}
    return TreeVector.from_dict(terms) if terms else TreeVector.zero(n)


def test_yang_baxter_annihilation_in_coordinates():
    # [p(a,b), p(z,a) + p(z,b)] = 0 for every third point z, in both models
    n = 2
    for model in MODELS:
        calc = braidlie.BraidCalculus(model)
        for (a, b, z) in [(2, 1, 3), (3, 1, 2), (3, 2, 1)]:
            gab, s0 = braidlie.gen(a, b, model)
            gza, s1 = braidlie.gen(z, a, model)
            gzb, s2 = braidlie.gen(z, b, model)
            acc = {}
            for m, c in calc.normalize(("b", gab, gza)).items():
                acc[m] = acc.get(m, 0) + s0 * s1 * c
            for m, c in calc.normalize(("b", gab, gzb)).items():
                acc[m] = acc.get(m, 0) + s0 * s2 * c
            v = element_to_tree_vector({m: c for m, c in acc.items() if c}, n, model)
            coords = to_lyndon_coordinates(v, n) if not v.is_zero else [0]
            assert not any(coords), (model, a, b, z)


def _word_sign(w):
    s = 1
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if w[i] > w[j]:
                s = -s
    return s


def test_koszul_sign_bridge():
    # twisting each word of the odd-graded expansion by its permutation sign
    # gives the plain expansion times the leaf-order sign of the tree; this
    # is the identity that lets odd-model monomials be read as trees
    cfg = GradedConfig(generator_degree=1)
    for n in (2, 3, 4):
        for t in enumerate_trees(n):
            graded = expand_graded(t, cfg).copy_terms()
            twisted = {w: _word_sign(w) * c for w, c in graded.items()}
            seq = []

            def leaves(node):
                if node.is_leaf:
                    seq.append(node.label)
                else:
                    leaves(node.left)
                    leaves(node.right)

            leaves(t)
            psi = _word_sign(tuple(seq))
            plain = {w: psi * c for w, c in expand(t).copy_terms().items()}
            assert twisted == plain


def test_disjoint_generators_commute():
    for model in MODELS:
        calc = braidlie.BraidCalculus(model)
        g1, _ = braidlie.gen(4, 3, model)
        g2, _ = braidlie.gen(2, 1, model)
        assert calc.normalize(("b", g1, g2)) == {}


def test_doubling_image_degree_and_mode():
    for model, parity in ((braidlie.MODEL_ODD_DIM, "odd"), (braidlie.MODEL_EVEN_DIM, "even")):
        for w in braidlie.source_words(4):
            v = braidlie.doubling_image(w, 4, model)
            if v.is_zero:
                continue
            assert v.degree == 4 and not v.decorated


def _random_bracket(rng, letters, mover):
    if len(letters) == 1:
        return ("g", mover, letters[0])
    k = rng.randint(1, len(letters) - 1)
    sh = letters[:]
    rng.shuffle(sh)
    return ("b", _random_bracket(rng, sh[:k], mover), _random_bracket(rng, sh[k:], mover))


def test_arbitrary_bracketings_stay_in_lattice(rng):
    # the Lyndon source words are a basis, so by linearity the image of any
    # bracketing of the source letters lies in the lattice they span; this
    # exercises the positional copy assignment end to end
    import math

    from jacobitrees.intlinalg import IntLattice
    from jacobitrees.lie import lyndon_basis, straighten_vector

    n = 4
    for model in MODELS:
        index = {w: i for i, (w, _) in enumerate(lyndon_basis(n))}
        lat = IntLattice(math.factorial(n - 1))
        for w in braidlie.source_words(n):
            v = braidlie.doubling_image(w, n, model)
            if not v.is_zero:
                lat.add({index[k]: c for k, c in straighten_vector(v).items()})
        for _ in range(25):
            doubled = rng.randint(1, n - 1)
            letters = sorted(list(range(1, n)) + [doubled])
            b = _random_bracket(rng, letters, n)
            v = braidlie.bracket_doubling_image(b, doubled, n, model)
            if v.is_zero:
                continue
            row = {index[k]: c for k, c in straighten_vector(v).items()}
            assert lat.contains(row)
