from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cayley_embed import (
    ALL_PARASTROPHES,
    EmptyInput,
    LatinConflict,
    ParameterOutOfRange,
    Parastrophe,
    SizeLimitExceeded,
    SpeciesKey,
    TRANSPOSE,
    canonical_form,
    enumerate_species,
    fixtures,
    format_grid,
    format_species_file,
    format_triples,
    gen_delta,
    gen_diagonal,
    gen_evans,
    gen_row_cycle,
    parastrophe,
    parse_grid,
    parse_pls,
    parse_species_file,
    parse_triples,
    row_cycle_length,
    sub_species_contains,
    validate_pls,
)
from cayley_embed.verify import random_pls, scramble


@st.composite
def pls_strategy(draw, max_size=6):
    size = draw(st.integers(1, max_size))
    triples = []
    rc, rs, cs = set(), set(), set()
    rows = cols = syms = 0
    for _ in range(4 * size):
        if len(triples) == size:
            break
        r = draw(st.integers(1, rows + 1))
        c = draw(st.integers(1, cols + 1))
        s = draw(st.integers(1, syms + 1))
        if (r, c) in rc or (r, s) in rs or (c, s) in cs:
            continue
        triples.append((r, c, s))
        rc.add((r, c))
        rs.add((r, s))
        cs.add((c, s))
        rows, cols, syms = max(rows, r), max(cols, c), max(syms, s)
    return validate_pls(triples)


class TestValidate:
    def test_single_cell(self):
        p = validate_pls([(1, 1, 1)])
        assert p.size == 1 and p.order == 1

    def test_repeated_symbol_in_row(self):
        with pytest.raises(LatinConflict) as exc:
            validate_pls([(1, 1, 1), (1, 2, 1)])
        assert exc.value.pair == ("row", "sym")

    def test_duplicate_cell(self):
        with pytest.raises(LatinConflict):
            validate_pls([(1, 1, 1), (1, 1, 2)])

    def test_column_symbol_clash(self):
        with pytest.raises(LatinConflict) as exc:
            validate_pls([(1, 1, 1), (2, 1, 1)])
        assert exc.value.pair == ("col", "sym")

    def test_empty(self):
        with pytest.raises(EmptyInput):
            validate_pls([])

    def test_bad_ids(self):
        with pytest.raises(ValueError):
            validate_pls([(0, 1, 1)])

    def test_quadcrit_shape(self):
        # 3 rows, 3 columns, 4 symbols: order 4
        qa = fixtures()["quadcrit_a"]
        assert qa.size == 7
        assert (qa.n_rows, qa.n_cols, qa.n_syms) == (3, 3, 4)
        assert qa.order == 4

    def test_dense_relabelling_first_appearance(self):
        p = validate_pls([(5, 7, 9), (5, 2, 4)])
        assert p.triples == ((1, 1, 1), (1, 2, 2))

    @given(pls_strategy())
    def test_revalidation_preserves_shape_and_species(self, p):
        q = validate_pls(p.triples)
        assert (q.n_rows, q.n_cols, q.n_syms, q.size) == (p.n_rows, p.n_cols, p.n_syms, p.size)
        assert canonical_form(q) == canonical_form(p)


class TestParastrophe:
    def test_identity(self):
        p = fixtures()["nonab"]
        assert parastrophe(p, ALL_PARASTROPHES[0]) == p

    def test_transpose_keeps_species(self):
        c2 = gen_row_cycle(2)
        assert canonical_form(parastrophe(c2, TRANSPOSE)) == canonical_form(c2)

    def test_row_sym_involution(self):
        p = fixtures()["interesting"]
        sigma = Parastrophe((2, 1, 0))
        assert parastrophe(parastrophe(p, sigma), sigma) == p

    def test_composition_is_s3(self):
        perms = {s.perm for s in ALL_PARASTROPHES}
        assert len(perms) == 6
        for a, b in product(ALL_PARASTROPHES, repeat=2):
            assert (a * b).perm in perms
        ident = ALL_PARASTROPHES[0]
        for a in ALL_PARASTROPHES:
            assert (a * ident).perm == a.perm == (ident * a).perm

    @given(pls_strategy())
    def test_apply_matches_composition(self, p):
        a, b = ALL_PARASTROPHES[3], ALL_PARASTROPHES[4]
        assert parastrophe(parastrophe(p, b), a) == parastrophe(p, a * b)


class TestCanonicalForm:
    def test_invariance_samples(self, rng):
        for _ in range(300):
            p = random_pls(rng)
            assert canonical_form(scramble(rng, p)) == canonical_form(p)

    def test_evans_mirror_species(self):
        assert canonical_form(gen_evans(6, 2)) == canonical_form(gen_evans(6, 4))
        assert canonical_form(gen_evans(6, 1)) != canonical_form(gen_evans(6, 2))

    def test_key_roundtrip_idempotent(self):
        for size, reps in enumerate_species(4).items():
            for rep in reps:
                key = canonical_form(rep)
                assert canonical_form(key.to_pls()) == key

    def test_key_hex_roundtrip(self):
        key = canonical_form(gen_diagonal(3))
        assert SpeciesKey.from_hex(key.hex()) == key


class TestEnumeration:
    def test_counts_to_five(self):
        counts = {m: len(v) for m, v in enumerate_species(5).items()}
        assert counts == {1: 1, 2: 2, 3: 5, 4: 18, 5: 59}

    def test_size_guard(self):
        with pytest.raises(SizeLimitExceeded):
            enumerate_species(9)
        with pytest.raises(ValueError):
            enumerate_species(0)

    def test_representatives_are_canonical_and_sorted(self):
        reps = enumerate_species(3)[3]
        keys = [canonical_form(p) for p in reps]
        assert keys == sorted(keys)
        assert all(k.to_pls() == p for k, p in zip(keys, reps))

    def test_brute_force_cross_check_small(self):
        # every PLS with <= 3 cells inside a 3x3 grid on <= 3 symbols
        cells = [(r, c) for r in range(1, 4) for c in range(1, 4)]
        seen = {1: set(), 2: set(), 3: set()}
        for k in range(1, 4):
            for chosen in combinations(cells, k):
                for syms in product(range(1, 4), repeat=k):
                    triples = [(r, c, s) for (r, c), s in zip(chosen, syms)]
                    try:
                        p = validate_pls(triples)
                    except LatinConflict:
                        continue
                    seen[k].add(canonical_form(p))
        assert {k: len(v) for k, v in seen.items()} == {1: 1, 2: 2, 3: 5}


class TestSubSpecies:
    def test_quadcrit_contains_nonab(self):
        fx = fixtures()
        assert sub_species_contains(fx["quadcrit_a"], fx["nonab"])

    def test_reflexive(self):
        p = fixtures()["quadcrit_a"]
        assert sub_species_contains(p, p)

    def test_c2_does_not_contain_quadcrit(self):
        assert not sub_species_contains(gen_row_cycle(2), fixtures()["quadcrit_a"])

    def test_quadcrit_has_no_intercalate(self):
        assert not sub_species_contains(fixtures()["quadcrit_a"], gen_row_cycle(2))


class TestGenerators:
    def test_evans_structure(self):
        p = gen_evans(6, 2)
        assert p.size == 6 and p.n_syms == 6
        cells = p.cell_map()
        # row 1 carries symbols 1..2; the last column carries 3..6
        assert cells[(1, 1)] == 1 and cells[(1, 2)] == 2
        last = p.n_cols
        assert sorted(cells[(r, c)] for (r, c) in cells if c == last) == [3, 4, 5, 6]

    def test_sizes(self):
        assert gen_evans(7, 3).size == 7
        assert gen_diagonal(4).size == 4
        assert gen_row_cycle(5).size == 10
        assert gen_delta(9).size == 9

    def test_diagonal_distinct_symbols(self):
        p = gen_diagonal(4)
        assert p.n_rows == p.n_cols == p.n_syms == 4

    def test_row_cycle_shape(self):
        c2 = gen_row_cycle(2)
        assert c2.triples == ((1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1))

    def test_delta_multiplicities(self):
        p = gen_delta(8)
        from collections import Counter

        assert sorted(Counter(t.sym for t in p.triples).values()) == [3, 5]

    def test_parameter_guards(self):
        with pytest.raises(ParameterOutOfRange):
            gen_evans(5, 5)
        with pytest.raises(ParameterOutOfRange):
            gen_evans(5, 0)
        with pytest.raises(ParameterOutOfRange):
            gen_diagonal(0)
        with pytest.raises(ParameterOutOfRange):
            gen_row_cycle(1)
        with pytest.raises(ParameterOutOfRange):
            gen_delta(3)


class TestRowCycleDetection:
    def test_direct(self):
        assert row_cycle_length(gen_row_cycle(3)) == 3

    def test_transpose_detected(self):
        assert row_cycle_length(parastrophe(gen_row_cycle(4), TRANSPOSE)) == 4

    def test_non_cycle(self):
        assert row_cycle_length(fixtures()["nonab"]) is None
        assert row_cycle_length(gen_diagonal(4)) is None


class TestFixtures:
    def test_sixteen_valid_entries(self):
        fx = fixtures()
        assert len(fx) == 16
        for name, p in fx.items():
            assert validate_pls(p.triples) == p, name

    def test_known_shapes(self):
        fx = fixtures()
        assert fx["nonab"].size == 6 and fx["nonab"].order == 4
        assert fx["order4"].size == 7
        assert fx["noninterc"].size == 4
        assert fx["interesting"].n_cols == 6


class TestFormats:
    def test_triples_roundtrip(self):
        p = fixtures()["quadcrit_b"]
        assert parse_triples(format_triples(p)) == p

    def test_grid_roundtrip(self):
        p = fixtures()["interesting"]
        assert canonical_form(parse_grid(format_grid(p))) == canonical_form(p)

    def test_auto_detect(self):
        grid = "a b .\n. a b\n"
        assert parse_pls(grid) == parse_grid(grid)
        tl = "1 1 1\n2 2 2\n"
        assert parse_pls(tl) == parse_triples(tl)

    def test_species_file_roundtrip(self):
        reps = enumerate_species(3)[3]
        text = format_species_file(reps)
        assert parse_species_file(text) == reps

    def test_ragged_grid_rejected(self):
        with pytest.raises(ValueError):
            parse_grid("a b\nc\n")

    @given(pls_strategy())
    def test_both_formats_preserve_species(self, p):
        key = canonical_form(p)
        assert canonical_form(parse_triples(format_triples(p))) == key
        assert canonical_form(parse_grid(format_grid(p))) == key
