import itertools
import random

import pytest

from sse_graphs.matrix import DimensionError, Matrix, is_regular, multiply, permute, trace_power
from sse_graphs.search import (
    EsseWitness,
    NotRegularError,
    SearchBounds,
    SseChain,
    Status,
    chain_from_witnesses,
    iter_factorizations,
    search_chain,
    search_esse,
    state_key,
    verify_chain,
    verify_esse,
)

from conftest import A_E, A_F, R, S


def all_matrices(rows, cols, max_entry):
    for t in itertools.product(range(max_entry + 1), repeat=rows * cols):
        yield Matrix(rows, cols, t)


def brute_witnesses(a, b, max_entry):
    """Every regular (R, S) with a = RS, b = SR, by plain enumeration."""
    n, m = a.rows, b.rows
    return sorted(
        (r.entries, s.entries)
        for r in all_matrices(n, m, max_entry) if is_regular(r)
        for s in all_matrices(m, n, max_entry) if is_regular(s)
        and multiply(r, s) == a and multiply(s, r) == b)


def random_regular(rng, rows, cols, max_entry):
    out = []
    for _ in range(rows):
        row = [0] * cols
        while not any(row):
            row = [rng.randint(0, max_entry) for _ in range(cols)]
        out.append(row)
    return Matrix.from_rows(out)


def random_square_regular(rng, max_dim=3, max_entry=2):
    n = rng.randint(1, max_dim)
    return random_regular(rng, n, n, max_entry)


def failed_names(rep):
    return [c.name for c in rep.failures]


class TestVerifyEsse:
    def test_example_accepts(self, witness):
        assert verify_esse(A_E, A_F, witness).ok

    def test_identity_witness(self):
        rng = random.Random(0)
        for _ in range(30):
            a = random_square_regular(rng)
            assert verify_esse(a, a, EsseWitness(a, Matrix.identity(a.rows))).ok

    def test_swapped_sides_rejects(self, witness):
        rep = verify_esse(A_F, A_E, witness)
        assert not rep.ok
        assert "witness shapes" in failed_names(rep)

    def test_wrong_product(self):
        w = EsseWitness(Matrix.from_rows([[1, 1]]), Matrix.from_rows([[1], [1]]))
        rep = verify_esse(Matrix.from_rows([[3]]), Matrix.from_rows([[1, 1], [1, 1]]), w)
        assert failed_names(rep) == ["A = RS"]

    def test_zero_row_in_s(self):
        s = Matrix.from_rows([[1, 0], [0, 1], [0, 0]])
        rep = verify_esse(A_E, multiply(s, R), EsseWitness(R, s))
        assert not rep.ok
        assert "S regular" in failed_names(rep)
        assert any("zero rows [2]" in c.detail for c in rep.failures)

    def test_non_square_reported(self, witness):
        rep = verify_esse(R, A_F, witness)
        assert "A square" in failed_names(rep)

    def test_trace_note_on_reject(self):
        w = EsseWitness(Matrix.from_rows([[1]]), Matrix.from_rows([[1]]))
        rep = verify_esse(Matrix.from_rows([[1]]), Matrix.from_rows([[2]]), w)
        assert not rep.ok
        assert any("k=1" in n for n in rep.notes)


class TestSearchEsse:
    def test_example(self):
        res = search_esse(A_E, A_F, SearchBounds(max_inner_dim=3, max_entry=1))
        assert res.status is Status.FOUND
        assert verify_esse(A_E, A_F, res.witness).ok

    def test_example_first_witness_is_the_known_one(self):
        # the only 0-1 witness, by brute force
        assert brute_witnesses(A_E, A_F, 1) == [(R.entries, S.entries)]
        res = search_esse(A_E, A_F, SearchBounds(max_entry=1))
        assert res.witness == EsseWitness(R, S)

    def test_two_to_full_two_by_two(self):
        a, b = Matrix.from_rows([[2]]), Matrix.from_rows([[1, 1], [1, 1]])
        brute = brute_witnesses(a, b, 1)
        assert brute == [((1, 1), (1, 1))]
        res = search_esse(a, b, SearchBounds(max_inner_dim=2, max_entry=1))
        assert res.witness == EsseWitness(Matrix.from_rows([[1, 1]]), Matrix.from_rows([[1], [1]]))

    def test_trace_refutation(self):
        res = search_esse(Matrix.from_rows([[1]]), Matrix.from_rows([[2]]))
        assert res.status is Status.REFUTED
        assert (res.refutation.k, res.refutation.trace_a, res.refutation.trace_b) == (1, 1, 2)
        assert str(res.refutation) == "trace mismatch at k=1 (1 != 2)"

    def test_inner_dimension_out_of_bounds(self):
        res = search_esse(A_E, A_F, SearchBounds(max_inner_dim=2))
        assert res.status is Status.UNKNOWN

    def test_entry_bound_respected(self):
        a, b = Matrix.from_rows([[4]]), Matrix.from_rows([[4]])
        res = search_esse(a, b, SearchBounds(max_entry=1))
        assert res.status is Status.UNKNOWN
        assert search_esse(a, b, SearchBounds(max_entry=2)).witness == EsseWitness(
            Matrix.from_rows([[2]]), Matrix.from_rows([[2]]))

    def test_non_regular_rejected(self):
        with pytest.raises(NotRegularError):
            search_esse(Matrix.from_rows([[1, 1], [0, 0]]), A_E)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            search_esse(R, A_E)

    def test_agrees_with_brute_force_small(self):
        regs = [m for n in (1, 2) for m in all_matrices(n, n, 2) if is_regular(m)]
        rng = random.Random(5)
        for a, b in rng.sample(list(itertools.product(regs, regs)), 200):
            brute = brute_witnesses(a, b, 2)
            res = search_esse(a, b, SearchBounds(max_inner_dim=2, max_entry=2))
            assert res.found == bool(brute)
            if brute:
                # tie-breaking: the lexicographically first witness
                assert (res.witness.r.entries, res.witness.s.entries) == brute[0]

    def test_soundness_fuzz(self):
        rng = random.Random(11)
        found = 0
        for _ in range(500):
            a, b = random_square_regular(rng), random_square_regular(rng)
            res = search_esse(a, b)
            if res.found:
                found += 1
                assert verify_esse(a, b, res.witness).ok
            elif res.status is Status.REFUTED:
                k = res.refutation.k
                assert trace_power(a, k) != trace_power(b, k)
        assert found > 0

    def test_bounded_completeness(self):
        rng = random.Random(12)
        for _ in range(200):
            n, m = rng.randint(1, 3), rng.randint(1, 3)
            r, s = random_regular(rng, n, m, 2), random_regular(rng, m, n, 2)
            a, b = multiply(r, s), multiply(s, r)
            res = search_esse(a, b, SearchBounds(max_inner_dim=m, max_entry=2))
            assert res.found, (r, s)
            assert verify_esse(a, b, res.witness).ok

    def test_symmetry(self):
        rng = random.Random(13)
        for _ in range(150):
            a, b = random_square_regular(rng, 2), random_square_regular(rng, 3)
            fwd = search_esse(a, b, SearchBounds(max_entry=2))
            back = search_esse(b, a, SearchBounds(max_entry=2))
            assert fwd.found == back.found
            if fwd.found:
                assert verify_esse(b, a, fwd.witness.swapped()).ok

    def test_deterministic(self):
        b = SearchBounds(max_entry=2)
        assert search_esse(A_E, A_F, b) == search_esse(A_E, A_F, b)


class TestFactorizations:
    def brute(self, c, m, max_entry):
        """SR classes of every regular factorization, up to relabelling the inner index."""
        out = set()
        for r in all_matrices(c.rows, m, max_entry):
            if not is_regular(r):
                continue
            for s in all_matrices(m, c.rows, max_entry):
                if is_regular(s) and multiply(r, s) == c:
                    out.add(state_key(multiply(s, r)))
        return out

    @pytest.mark.parametrize("rows", [[[2]], [[1, 1], [0, 1]], [[1, 1], [1, 1]], [[2, 1], [1, 0]]])
    def test_covers_every_class(self, rows):
        c = Matrix.from_rows(rows)
        for m in (1, 2, 3):
            got = set()
            for w in iter_factorizations(c, m, 2):
                assert multiply(w.r, w.s) == c
                assert is_regular(w.r) and is_regular(w.s)
                got.add(state_key(multiply(w.s, w.r)))
            assert got == self.brute(c, m, 2)

    def test_no_duplicate_orderings(self):
        c = Matrix.from_rows([[1, 1], [1, 1]])
        ws = list(iter_factorizations(c, 2, 1))
        # the multiset of (column k of R, row k of S) terms identifies a factorization
        # up to relabelling; each must appear once
        terms = {tuple(sorted((w.r.column(k), w.s.row(k)) for k in range(2))) for w in ws}
        assert len(terms) == len(ws)


class TestStateKey:
    def test_conjugation_invariant(self):
        rng = random.Random(14)
        for _ in range(100):
            a = random_square_regular(rng, 5, 2)
            k = state_key(a)
            for p in itertools.islice(itertools.permutations(range(a.rows)), 30):
                assert state_key(permute(a, p)) == k

    def test_separates_non_conjugate(self):
        assert state_key(Matrix.from_rows([[1, 1], [0, 1]])) != state_key(Matrix.from_rows([[1, 1], [1, 0]]))


class TestVerifyChain:
    def test_single_link(self, witness):
        assert verify_chain(SseChain((A_E, A_F), (witness,))).ok

    def test_reflexive(self):
        assert verify_chain(SseChain((A_E,), ())).ok

    def test_corrupted_entry_names_the_link(self, witness):
        w2 = EsseWitness(A_F, Matrix.identity(3))
        good = SseChain((A_E, A_F, A_F), (witness, w2))
        assert verify_chain(good).ok
        bad_s = Matrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
        bad = SseChain((A_E, A_F, A_F), (witness, EsseWitness(A_F, bad_s)))
        rep = verify_chain(bad)
        assert not rep.ok
        assert failed_names(rep) == ["link 2 (C2 -> C3)"]
        assert "A = RS" in rep.failures[0].detail

    def test_mutate_and_check(self, witness):
        w2 = EsseWitness(A_F, Matrix.identity(3))
        chain = SseChain((A_E, A_F, A_F), (witness, w2))
        rng = random.Random(15)
        for _ in range(50):
            link = rng.randrange(2)
            w = chain.witnesses[link]
            ents = list(w.r.entries)
            i = rng.randrange(len(ents))
            ents[i] += 1
            mutated = list(chain.witnesses)
            mutated[link] = EsseWitness(Matrix(w.r.rows, w.r.cols, tuple(ents)), w.s)
            rep = verify_chain(SseChain(chain.matrices, tuple(mutated)))
            assert not rep.ok
            assert failed_names(rep) == [f"link {link + 1} (C{link + 1} -> C{link + 2})"]

    def test_link_count(self, witness):
        rep = verify_chain(SseChain((A_E, A_F, A_F), (witness,)))
        assert "link count" in failed_names(rep)

    def test_chain_from_witnesses(self, witness):
        chain = chain_from_witnesses(A_E, [witness, witness.swapped()])
        assert chain.matrices == (A_E, A_F, A_E)
        assert verify_chain(chain).ok


class TestSearchChain:
    def test_example(self):
        res = search_chain(A_E, A_F)
        assert res.found and len(res.chain.matrices) == 2
        assert verify_chain(res.chain).ok

    def test_reflexive(self):
        res = search_chain(A_F, A_F)
        assert res.chain.matrices == (A_F,)

    def test_refuted(self):
        res = search_chain(Matrix.from_rows([[1]]), Matrix.from_rows([[2]]))
        assert res.status is Status.REFUTED

    def test_needs_an_intermediate(self):
        a = Matrix.from_rows([[2]])
        b = Matrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, 1]])
        # no single step: the only 1x4 / 4x1 candidates are exhausted directly
        assert not search_esse(a, b, SearchBounds(max_entry=2)).found
        res = search_chain(a, b)
        assert res.found
        assert len(res.chain.matrices) == 3
        assert verify_chain(res.chain).ok

    def test_length_bound(self):
        a = Matrix.from_rows([[2]])
        b = Matrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, 1]])
        assert search_chain(a, b, SearchBounds(max_chain_length=2)).status is Status.UNKNOWN

    def test_unknown_within_budget(self):
        # equal traces, different Bowen-Franks groups: never SSE, never refuted by traces
        a = Matrix.from_rows([[4, 1], [1, 0]])
        b = Matrix.from_rows([[3, 2], [2, 1]])
        res = search_chain(a, b, SearchBounds(max_work=50_000))
        assert res.status is Status.UNKNOWN

    def test_soundness_fuzz(self):
        rng = random.Random(16)
        bounds = SearchBounds(max_chain_length=3, max_intermediate_dim=3, max_work=20_000)
        for _ in range(60):
            a, b = random_square_regular(rng, 2, 1), random_square_regular(rng, 2, 1)
            res = search_chain(a, b, bounds)
            if res.found:
                assert verify_chain(res.chain).ok
                assert len(res.chain.matrices) <= 3
                assert all(m.rows <= 3 for m in res.chain.matrices)

    def test_bounds_validated(self):
        with pytest.raises(ValueError):
            SearchBounds(max_chain_length=0)
