"""Tests for the abstention-aware alignment core."""

import random
from functools import lru_cache

import pytest

from src.alignment import (
    Delete,
    InsertWord,
    Match,
    PhAbsorb,
    PhInsert,
    Substitute,
    count_placeholders,
    normalize_hypothesis,
    trace_cost,
    wer_align,
    weighted_edit_distance,
    weighted_edit_distance_fast,
)
from src.config import PH_TOKEN
from src.errors import (
    EmptyReferenceError,
    InvalidAlphaError,
    InvalidTokenError,
    PlaceholderInPlainAlignmentError,
    PlaceholderInReferenceError,
)

PH = PH_TOKEN
ALPHAS = (0.25, 0.5064, 0.75)
GOLDEN_REF = "chronic disease of hair follicles and sebaceous gland".split()
GOLDEN_HYP = "the chronic disease of her and spoculus gland".split()


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

def enumerate_alignments(ref, hyp):
    """Yield (unit edits, alpha units, matches) for every valid alignment."""
    n, m = len(ref), len(hyp)

    def walk(i, j):
        if i == n and j == m:
            yield 0, 0, 0
            return
        if i < n:
            for u, q, c in walk(i + 1, j):
                yield u + 1, q, c
        if j < m and hyp[j] != PH:
            if i < n:
                same = ref[i] == hyp[j]
                for u, q, c in walk(i + 1, j + 1):
                    yield u + (0 if same else 1), q, c + (1 if same else 0)
            for u, q, c in walk(i, j + 1):
                yield u + 1, q, c
        if j < m and hyp[j] == PH:
            for k in range(i + 1, n + 1):
                for u, q, c in walk(k, j + 1):
                    yield u, q + (k - i), c
            for u, q, c in walk(i, j + 1):
                yield u, q + 1, c

    yield from walk(0, 0)


def exhaustive_best(ref, hyp, alpha):
    """(min cost, max matches among minimum-cost alignments) by enumeration."""
    costs = [(u + alpha * q, c) for u, q, c in enumerate_alignments(ref, hyp)]
    best = min(cost for cost, _ in costs)
    return best, max(c for cost, c in costs if abs(cost - best) < 1e-9)


def prefix_oracle(ref, hyp, alpha):
    """Minimum cost via memoized recursion over prefixes ref[:i], hyp[:j]."""

    @lru_cache(maxsize=None)
    def g(i, j):
        if i == 0 and j == 0:
            return 0.0
        options = []
        if i > 0:
            options.append(g(i - 1, j) + 1)
        if j > 0 and hyp[j - 1] != PH:
            options.append(g(i, j - 1) + 1)
            if i > 0:
                options.append(g(i - 1, j - 1) + (0 if ref[i - 1] == hyp[j - 1] else 1))
        if j > 0 and hyp[j - 1] == PH:
            options.append(g(i, j - 1) + alpha)
            options.extend(g(k, j - 1) + alpha * (i - k) for k in range(i))
        return min(options)

    return g(len(ref), len(hyp))


def random_instance(rng, max_ref=6, max_hyp=6, alphabet="abc", ph_prob=0.3):
    ref = [rng.choice(alphabet) for _ in range(rng.randint(1, max_ref))]
    hyp = [PH if rng.random() < ph_prob else rng.choice(alphabet) for _ in range(rng.randint(0, max_hyp))]
    return ref, list(normalize_hypothesis(hyp))


def replay(trace, n, m):
    """Check monotone coverage: every ref and hyp index exactly once, in order."""
    ref_seen, hyp_seen = [], []
    for op in trace:
        if isinstance(op, (Match, Substitute)):
            ref_seen.append(op.ref_idx)
            hyp_seen.append(op.hyp_idx)
        elif isinstance(op, Delete):
            ref_seen.append(op.ref_idx)
        elif isinstance(op, (InsertWord, PhInsert)):
            hyp_seen.append(op.hyp_idx)
        elif isinstance(op, PhAbsorb):
            ref_seen.extend(range(op.ref_start, op.ref_end))
            hyp_seen.append(op.hyp_idx)
    return ref_seen == list(range(n)) and hyp_seen == list(range(m))


@pytest.fixture(scope="module")
def instances():
    rng = random.Random(20240917)
    return [(*random_instance(rng), rng.choice(ALPHAS)) for _ in range(10_000)]


# ---------------------------------------------------------------------------
# normalize_hypothesis / count_placeholders
# ---------------------------------------------------------------------------

class TestNormalizeHypothesis:
    def test_merges_run(self):
        assert normalize_hypothesis(["a", PH, PH, "b"]) == ("a", PH, "b")

    def test_identity_without_placeholder(self):
        assert normalize_hypothesis(["a", "b", "c"]) == ("a", "b", "c")

    def test_all_placeholders_collapse(self):
        assert normalize_hypothesis([PH, PH, PH]) == (PH,)

    def test_separate_runs_kept(self):
        assert normalize_hypothesis([PH, "a", PH, PH]) == (PH, "a", PH)

    def test_count_placeholders_counts_runs(self):
        assert count_placeholders([PH, PH, "a", PH, "b"]) == 2
        assert count_placeholders(["a"]) == 0


# ---------------------------------------------------------------------------
# weighted_edit_distance examples
# ---------------------------------------------------------------------------

class TestWeightedEditDistance:
    def test_identity(self):
        r = weighted_edit_distance(["a", "b", "c"], ["a", "b", "c"], 0.5)
        assert r.cost == 0
        assert r.matches == 3

    def test_absorb_tail(self):
        r = weighted_edit_distance(["a", "b", "c", "d"], ["a", PH], 0.5)
        assert r.cost == pytest.approx(1.5, abs=1e-9)
        assert r.matches == 1
        assert r.trace == (Match(0, 0), PhAbsorb(1, 4, 1))

    def test_substitution(self):
        r = weighted_edit_distance(["a", "b"], ["x", "b"], 0.5)
        assert r.cost == pytest.approx(1.0)
        assert r.matches == 1
        assert r.trace[0] == Substitute(0, 0)

    def test_placeholder_insert_then_match(self):
        r = weighted_edit_distance(["a"], [PH, "a"], 0.5)
        assert r.cost == pytest.approx(0.5)
        assert r.matches == 1
        assert r.trace == (PhInsert(0), Match(0, 1))

    def test_fast_single_match(self):
        assert weighted_edit_distance_fast(["a"], ["a"], 0.9).cost == 0

    def test_unmerged_hypothesis_is_normalized(self):
        merged = weighted_edit_distance(["a", "b", "c"], ["a", PH, "c"], 0.5)
        raw = weighted_edit_distance(["a", "b", "c"], ["a", PH, PH, PH, "c"], 0.5)
        assert raw.cost == merged.cost
        assert raw.trace == merged.trace

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_all_placeholder_costs_alpha_n(self, alpha):
        ref = ["a", "b", "c", "d", "e"]
        r = weighted_edit_distance_fast(ref, [PH], alpha)
        assert r.cost == pytest.approx(alpha * len(ref), abs=1e-12)
        assert r.matches == 0

    def test_empty_hypothesis(self):
        r = weighted_edit_distance(["a", "b", "c"], [], 0.5)
        assert r.cost == 3
        assert r.matches == 0
        assert all(isinstance(op, Delete) for op in r.trace)

    def test_cost_split_into_units(self):
        r = weighted_edit_distance(["a", "b", "c"], ["x", PH], 0.5)
        assert r.cost == pytest.approx(r.unit_errors + 0.5 * r.ph_units)


class TestAlignmentErrors:
    def test_empty_reference(self):
        with pytest.raises(EmptyReferenceError):
            weighted_edit_distance([], ["a"], 0.5)

    def test_placeholder_in_reference(self):
        with pytest.raises(PlaceholderInReferenceError):
            weighted_edit_distance_fast(["a", PH], ["a"], 0.5)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_alpha_outside_open_interval(self, alpha):
        with pytest.raises(InvalidAlphaError):
            weighted_edit_distance(["a"], ["a"], alpha)

    def test_whitespace_token(self):
        with pytest.raises(InvalidTokenError):
            weighted_edit_distance(["a b"], ["a"], 0.5)

    def test_record_id_in_message(self):
        with pytest.raises(EmptyReferenceError, match="utt-7"):
            weighted_edit_distance_fast([], [], 0.5, record_id="utt-7")

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            weighted_edit_distance([], [], 0.5)


# ---------------------------------------------------------------------------
# Oracle equivalence
# ---------------------------------------------------------------------------

class TestOracleEquivalence:
    def test_exhaustive_enumeration_small(self):
        rng = random.Random(7)
        for _ in range(400):
            ref, hyp = random_instance(rng, max_ref=4, max_hyp=4)
            alpha = rng.choice(ALPHAS)
            best, best_matches = exhaustive_best(ref, hyp, alpha)
            r = weighted_edit_distance(ref, hyp, alpha)
            assert abs(r.cost - best) < 1e-9, (ref, hyp, alpha)
            assert r.matches == best_matches, (ref, hyp, alpha)

    def test_prefix_recursion_oracle(self, instances):
        for ref, hyp, alpha in instances:
            r = weighted_edit_distance_fast(ref, hyp, alpha)
            assert abs(r.cost - prefix_oracle(tuple(ref), tuple(hyp), alpha)) < 1e-9, (ref, hyp, alpha)

    def test_fast_equals_slow(self, instances):
        for ref, hyp, alpha in instances:
            slow = weighted_edit_distance(ref, hyp, alpha)
            fast = weighted_edit_distance_fast(ref, hyp, alpha)
            assert fast.cost == slow.cost
            assert fast.matches == slow.matches
            assert fast.trace == slow.trace

    def test_fast_equals_slow_longer(self):
        rng = random.Random(99)
        for _ in range(300):
            ref, hyp = random_instance(rng, max_ref=8, max_hyp=8, alphabet="abcd")
            alpha = rng.uniform(0.01, 0.99)
            slow = weighted_edit_distance(ref, hyp, alpha)
            fast = weighted_edit_distance_fast(ref, hyp, alpha)
            assert (fast.cost, fast.matches, fast.trace) == (slow.cost, slow.matches, slow.trace)

    def test_trace_is_valid(self, instances):
        for ref, hyp, alpha in instances[:2000]:
            r = weighted_edit_distance_fast(ref, hyp, alpha)
            assert replay(r.trace, len(ref), len(hyp))
            assert abs(trace_cost(r.trace, alpha) - r.cost) < 1e-9
            assert r.matches == sum(isinstance(op, Match) for op in r.trace)
            for op in r.trace:
                if isinstance(op, (PhAbsorb, PhInsert)):
                    assert hyp[op.hyp_idx] == PH
                elif isinstance(op, (Match, Substitute, InsertWord)):
                    assert hyp[op.hyp_idx] != PH


class TestAlphaShape:
    def test_monotone_and_concave(self):
        rng = random.Random(3)
        grid = [round(0.05 * k, 2) for k in range(1, 20)]
        checked = 0
        while checked < 100:
            ref, hyp = random_instance(rng, ph_prob=0.4)
            if PH not in hyp:
                continue
            checked += 1
            costs = [weighted_edit_distance_fast(ref, hyp, a).cost for a in grid]
            for c1, c2 in zip(costs, costs[1:]):
                assert c2 >= c1 - 1e-9
            for a1, c1 in zip(grid, costs):
                for a2, c2 in zip(grid, costs):
                    if a1 < a2:
                        mid = weighted_edit_distance_fast(ref, hyp, (a1 + a2) / 2).cost
                        assert mid >= (c1 + c2) / 2 - 1e-9


# ---------------------------------------------------------------------------
# wer_align
# ---------------------------------------------------------------------------

class TestWerAlign:
    def test_perfect(self):
        counts, _ = wer_align(["a", "b"], ["a", "b"])
        assert (counts.substitutions, counts.deletions, counts.insertions, counts.hits) == (0, 0, 0, 2)

    def test_empty_hypothesis(self):
        counts, trace = wer_align(["a"], [])
        assert counts.deletions == 1
        assert counts.hits == 0
        assert trace == (Delete(0),)

    def test_fig3_alignment(self):
        counts, trace = wer_align(GOLDEN_REF, GOLDEN_HYP)
        assert counts.insertions == 1
        assert counts.substitutions == 2
        assert counts.deletions == 1
        assert counts.hits == 5
        assert trace == (
            InsertWord(0),
            Match(0, 1), Match(1, 2), Match(2, 3),
            Substitute(3, 4),
            Delete(4),
            Match(5, 5),
            Substitute(6, 6),
            Match(7, 7),
        )

    def test_substitute_preferred_over_delete_insert(self):
        _, trace = wer_align(["a"], ["b"])
        assert trace == (Substitute(0, 0),)

    def test_rejects_placeholder(self):
        with pytest.raises(PlaceholderInPlainAlignmentError):
            wer_align(["a"], [PH])

    def test_rejects_empty_reference(self):
        with pytest.raises(EmptyReferenceError):
            wer_align([], ["a"])

    def test_counts_consistent(self):
        rng = random.Random(11)
        for _ in range(500):
            ref, hyp = random_instance(rng, ph_prob=0.0)
            counts, _ = wer_align(ref, hyp)
            assert counts.hits + counts.substitutions + counts.deletions == len(ref)
            assert counts.hits + counts.substitutions + counts.insertions == len(hyp)

    def test_no_placeholder_reduction(self):
        rng = random.Random(12)
        for _ in range(500):
            ref, hyp = random_instance(rng, ph_prob=0.0)
            counts, _ = wer_align(ref, hyp)
            r = weighted_edit_distance(ref, hyp, 0.5064)
            assert r.cost == counts.errors
            assert r.matches == counts.hits
