import random

import pytest

from varword.colorings import Coloring
from varword.errors import (
    InvalidWord,
    NotFoundWithinHorizon,
)
from varword.largeness import (
    FiniteFamily,
    PwSyndeticDecomposition,
    is_syndetic,
    is_thick,
    random_piecewise_syndetic,
)
from varword.search import (
    LineLetterCertificate,
    d_super_s,
    h_embed,
    iterate_builder,
    line_letter_from_dim2,
    search_line_with_letter,
    step_lemma_search,
    verify_line_letter,
)
from varword.trees import generator_from_tree, level, tree_from_generator
from varword.words import Word, format_word, letter_words, parse_word, substitute

K = 2


def full_dec(k, n, ell=1):
    return PwSyndeticDecomposition(FiniteFamily.full(k, n), FiniteFamily.full(k, n), ell)


class TestLineSearch:
    def test_constant_coloring(self):
        c = Coloring.constant(K, 4, 0, 2)
        cert = search_line_with_letter(c)
        assert format_word(cert.line.generator) == "x0"
        assert cert.letter == 0

    def test_unary_parity_small_horizon(self):
        # certificates need f(p) == f(L+1); the blocking colorings are the
        # ones constant on {0,1} and differently constant on {2,..}
        c = Coloring.from_function(1, 3, 0, 2, lambda w: 0 if len(w) <= 1 else 1)
        with pytest.raises(NotFoundWithinHorizon):
            search_line_with_letter(c)

    def test_oracle_agreement_k1(self):
        # independent oracle: a certificate exists iff f(p) == f(L+1) for
        # some p < L <= N-1
        for n_hor in range(1, 6):
            for bits in range(2 ** (n_hor + 1)):
                f = [(bits >> i) & 1 for i in range(n_hor + 1)]
                c = Coloring.from_function(1, n_hor, 0, 2, lambda w: f[len(w)])
                expect = any(
                    f[p] == f[L + 1] for L in range(1, n_hor) for p in range(L)
                )
                try:
                    cert = search_line_with_letter(c)
                    found = True
                    verify_line_letter(cert, c)
                except NotFoundWithinHorizon:
                    found = False
                assert found == expect, (n_hor, f)

    def test_lex_least_witness(self):
        c = Coloring.from_function(K, 4, 0, 2, lambda w: 1 if len(w) == 1 else 0)
        cert = search_line_with_letter(c)
        # S(0) = {eps} color 0, S(1).a must 2-length color 0: generator x0 works
        assert format_word(cert.line.generator) == "x0"
        assert cert.color == 0

    def test_worker_independence(self):
        rng = random.Random(9)
        tbl = {w: rng.randrange(2) for w in letter_words(K, 5)}
        c = Coloring(K, 5, 0, 2, tbl)
        results = []
        for workers in (1, 2, 8):
            try:
                results.append(search_line_with_letter(c, workers=workers))
            except NotFoundWithinHorizon:
                results.append(None)
        assert results[0] == results[1] == results[2]

    def test_verifier_rejects_tampered(self):
        c = Coloring.constant(K, 4, 0, 2)
        cert = search_line_with_letter(c)
        bad = LineLetterCertificate(cert.line, cert.letter, 1 - cert.color, cert.checked)
        with pytest.raises(InvalidWord):
            verify_line_letter(bad, c)


class TestFromDim2:
    @pytest.mark.parametrize("gen", ["x0x1", "x0[0]x1", "0x0x1[1]"])
    def test_extraction(self, gen):
        tree = tree_from_generator(parse_word(gen, K))
        c = Coloring.constant(K, 8, 0, 2)
        cert, connector = line_letter_from_dim2(tree, c)
        verify_line_letter(cert, c)
        assert len(connector) >= 1
        assert cert.letter == connector.symbols[-1]
        # S(1).a really lands in T(2)
        top = set(level(tree, 2))
        for w in level(cert.line, 1):
            assert Word(K, w.symbols + (cert.letter,)) in top

    def test_rejects_wrong_dimension(self):
        tree = tree_from_generator(parse_word("x0", K))
        with pytest.raises(InvalidWord):
            line_letter_from_dim2(tree, Coloring.constant(K, 4, 0, 2))

    def test_rejects_non_monochromatic(self):
        tree = tree_from_generator(parse_word("x0x1", K))
        c = Coloring.from_function(K, 4, 0, 2, lambda w: len(w) % 2)
        with pytest.raises(InvalidWord):
            line_letter_from_dim2(tree, c)


class TestHEmbed:
    def test_single_identity_block(self):
        h = h_embed([parse_word("x0", K)])
        for a in range(K):
            assert h(Word(K, (a,))) == Word(K, (a,))
        assert h(Word(K, ())) == Word(K, ())

    def test_example(self):
        h = h_embed([parse_word("x0[0]", K), parse_word("x0", K)])
        assert format_word(h(parse_word("10", K))) == "100"

    def test_injective(self):
        h = h_embed([parse_word("x0[0]", K), parse_word("x0x0", K), parse_word("x0", K)])
        seen = {}
        for m in range(4):
            for u in letter_words(K, m, min_len=m):
                img = h(u)
                assert img not in seen
                seen[img] = u

    def test_image_of_line_is_line(self):
        h = h_embed([parse_word("x0[0]", K), parse_word("x0x0", K)])
        tree = tree_from_generator(parse_word("x0", K))
        img = h.image_of_tree(tree)
        assert img.dimension == 1

    def test_image_of_tree_is_tree(self):
        h = h_embed([parse_word("x0[0]", K), parse_word("x0", K)])
        tree = tree_from_generator(parse_word("x0x1", K))
        img = h.image_of_tree(tree)
        assert img.dimension == 2
        assert generator_from_tree(img.elements) == img.generator

    def test_coloring_pullback_monochromatic(self):
        # a set monochromatic for f.h maps to a set monochromatic for f
        h = h_embed([parse_word("x0[0]", K), parse_word("x0", K)])
        f = Coloring.from_function(K, 8, 0, 2, lambda w: w.symbols.count(1) % 2)
        y = {u: f(h(u)) for m in range(3) for u in letter_words(K, m, min_len=m)}
        mono = [u for u in y if y[u] == 0]
        assert all(f(h(u)) == 0 for u in mono)

    def test_rejects_non_left_blocks(self):
        with pytest.raises(InvalidWord):
            h_embed([parse_word("0x0", K)])


class TestResidue:
    def test_full_family(self):
        line = tree_from_generator(parse_word("x0", K))
        fam = FiniteFamily.full(K, 8)
        out = d_super_s(fam, line)
        assert out.N == 7 and len(out) == out.universe_size

    def test_empty_family(self):
        line = tree_from_generator(parse_word("x0", K))
        out = d_super_s(FiniteFamily.empty(K, 8), line)
        assert len(out) == 0

    def test_matches_per_sigma_check(self, rng):
        line = tree_from_generator(parse_word("0x0", K))
        s1 = level(line, 1)
        for _ in range(20):
            mask = rng.getrandbits(FiniteFamily.full(K, 6).universe_size)
            fam = FiniteFamily(K, 6, mask)
            out = d_super_s(fam, line)
            for sigma in letter_words(K, out.N):
                want = all(w.concat(sigma) in fam for w in s1)
                assert (sigma in out) == want


class TestDensityStep:
    def test_full_family(self):
        from fractions import Fraction

        from varword.search import density_step_search

        full = FiniteFamily.full(K, 8)
        res = density_step_search(full, Fraction(1, 2), 2)
        assert format_word(res.line.generator) == "x0"
        assert res.line_pool_size == 6
        assert res.threshold == Fraction(1, 192)

    def test_residue_densities_reverify(self):
        from fractions import Fraction

        from varword.search import density_step_search

        even = FiniteFamily.from_words(
            K, 8, [w for w in letter_words(K, 8) if len(w) % 2 == 0]
        )
        res = density_step_search(even, Fraction(1, 2), 3)
        for e in res.line.elements:
            assert e in even
        residue = d_super_s(even, res.line)
        for r in res.lengths:
            m = r - len(res.line.generator)
            dens = Fraction(residue.band(m).bit_count(), K**m)
            assert dens > res.threshold

    def test_not_found(self):
        from fractions import Fraction

        from varword.search import density_step_search

        with pytest.raises(NotFoundWithinHorizon):
            density_step_search(FiniteFamily.empty(K, 6), Fraction(1, 2), 2)


class TestStepLemma:
    def test_full(self):
        res = step_lemma_search(full_dec(K, 8))
        assert format_word(res.line.generator) == "x0"
        q = res.residue.decomposition.part
        assert q.mask == FiniteFamily.full(K, 6).mask

    def test_even_lengths(self):
        even = FiniteFamily.from_words(
            K, 8, [w for w in letter_words(K, 8) if len(w) % 2 == 0]
        )
        dec = PwSyndeticDecomposition(even, FiniteFamily.full(K, 8), 1)
        res = step_lemma_search(dec)
        p = dec.part
        s0 = substitute(res.line.generator, ())
        assert s0 in p
        gen_len = len(res.line.generator)
        for sigma in res.residue.decomposition.part.words():
            assert (gen_len + len(sigma)) % 2 == 0
            for w in level(res.line, 1):
                glued = w.concat(sigma)
                if len(glued) <= p.N:
                    assert glued in p

    def test_not_found_on_empty(self):
        dec = PwSyndeticDecomposition(
            FiniteFamily.empty(K, 6), FiniteFamily.full(K, 6), 1
        )
        with pytest.raises(NotFoundWithinHorizon):
            step_lemma_search(dec)


class TestBuilder:
    def test_full_universe(self):
        trace = iterate_builder(full_dec(K, 8), 2)
        assert [st.tree.dimension for st in trace.stages] == [0, 1, 2]
        assert all(st.claim1_ok and st.claim2_ok for st in trace.stages)
        assert format_word(trace.tree.generator) == "x0x1"

    def test_even_family(self):
        even = FiniteFamily.from_words(
            K, 12, [w for w in letter_words(K, 12) if len(w) % 2 == 0]
        )
        dec = PwSyndeticDecomposition(even, FiniteFamily.full(K, 12), 1)
        trace = iterate_builder(dec, 2)
        for e in trace.tree.elements:
            assert len(e) % 2 == 0

    def test_random_inputs_claims_always_hold(self, rng):
        successes = 0
        for _ in range(25):
            dec = random_piecewise_syndetic(
                rng, K, 12, 1, 2, rng.uniform(0.8, 0.98), rng.uniform(0.8, 0.98)
            )
            try:
                trace = iterate_builder(dec, 2)
            except NotFoundWithinHorizon:
                continue
            successes += 1
            for st in trace.stages:
                assert st.claim1_ok and st.claim2_ok
        assert successes >= 3

    def test_trace_reverifies_independently(self, rng):
        dec = random_piecewise_syndetic(rng, K, 12, 1, 2, 0.95, 0.95)
        trace = iterate_builder(dec, 2)
        p = trace.part
        for st in trace.stages:
            for e in st.tree.elements:
                if len(e) <= p.N:
                    assert e in p
            tops = level(st.tree, st.tree.dimension)
            for t in tops:
                for a in range(K):
                    head = t.concat(substitute(st.block, (a,)))
                    for sigma in st.residue.decomposition.part.words():
                        glued = head.concat(sigma)
                        if len(glued) <= p.N:
                            assert glued in p

    def test_residues_recertify(self, rng):
        dec = random_piecewise_syndetic(rng, K, 12, 1, 2, 0.9, 0.9)
        try:
            trace = iterate_builder(dec, 1)
        except NotFoundWithinHorizon:
            pytest.skip("no tree for this sample")
        for st in trace.stages:
            rdec = st.residue.decomposition
            assert is_syndetic(rdec.syndetic, rdec.ell).ok
            assert is_thick(rdec.thick, rdec.ell).ok
