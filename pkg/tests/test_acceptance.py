"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
Criterion corpora are fully seeded; nothing here is randomized between
runs.
"""

import itertools
import re
import time

import pytest

from wincert.explain import extract_structure, regenerate_support, render_text
from wincert.model import Rule, WeightedTournament
from wincert.necessary import is_necessary_winner, is_necessary_winner_bruteforce
from wincert.oracle import (
    build_setcover_tournament,
    enumerate_smallest_supports,
    min_set_cover,
    oracle_sms_size,
    random_partial_tournament,
    random_setcover_instance,
    random_tournament,
)
from wincert.sms import (
    SizeFormulaInput,
    compute_sms,
    sms_borda,
    sms_mm,
    sms_size_formula,
    sms_tc,
    sms_uc,
    verify_support,
)
from wincert.solutions import winners

from conftest import load_fixture

UNIT_RULES = (Rule.TC, Rule.UC, Rule.COP)
WEIGHTED_RULES = (Rule.BORDA, Rule.MM, Rule.WUC)


def report(num: int, name: str, failures: list, extra: str = "") -> None:
    status = "PASS" if not failures else f"FAIL ({len(failures)} violations)"
    suffix = f" [{extra}]" if extra else ""
    print(f"\n[criterion {num}] {name}: {status}{suffix}")
    assert not failures, f"criterion {num} ({name}): " + "; ".join(
        str(f) for f in failures[:5]
    )


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# ---------------------------------------------------------------------------
# Shared corpus: 500 seeded tournaments per rule, m <= 8, n <= 7
# ---------------------------------------------------------------------------


def build_corpus(rule: Rule):
    cases = []
    seed = 0
    for count in range(500):
        if rule in UNIT_RULES:
            m, n = 2 + count % 7, 1
        elif rule is Rule.WUC:
            m, n = 3 + count % 6, 1 + count % 7
        else:
            m, n = 2 + count % 7, 1 + count % 7
        t = random_tournament(m, n, seed)
        seed += 1
        for w in winners(rule, t).winners:
            cases.append((t, w, compute_sms(t, w, rule)))
    return cases


@pytest.fixture(scope="module")
def corpus():
    return {rule: build_corpus(rule) for rule in Rule}


# ---------------------------------------------------------------------------
# Criterion 1: exact values on the committed fixtures
# ---------------------------------------------------------------------------


def test_criterion_1_fixture_values():
    started = time.monotonic()
    u4 = load_fixture("u4.trn").as_complete()
    w5a = load_fixture("w5a.trn").as_complete()
    w5b = load_fixture("w5b.trn").as_complete()
    failures = []
    checks = [
        ("tc size", sms_tc(u4, 0).size, 3),
        ("uc size", sms_uc(u4, 0).size, 3),
        ("cop size", compute_sms(u4, 0, Rule.COP).size, 3),
        ("mm size (sweep instance)", sms_mm(w5a, 0).size, 9),
        ("borda size", sms_borda(w5b, 0).size, 18),
        ("mm size (close instance)", sms_mm(w5b, 0).size, 11),
        # The source table presents a size-9 certificate as smallest, but a
        # size-8 minimal support exists (pin a's 4-0 lead over d, then d
        # covers b and c for 2 each); exhaustive enumeration over all
        # sub-weightings confirms 8.  Asserted as specified; expected red.
        ("wuc exact size", compute_sms(w5b, 0, Rule.WUC).size, 9),
    ]
    for name, got, expected in checks:
        if got != expected:
            failures.append(f"{name}: got {got}, expected {expected}")
    elapsed = time.monotonic() - started
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s exceeds 1s")
    report(1, "fixtures exact", failures, f"{elapsed:.2f}s")


# ---------------------------------------------------------------------------
# Criterion 2: oracle equivalence, exhaustive and random
# ---------------------------------------------------------------------------


def all_unit_tournaments_m4():
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for bits in itertools.product([0, 1], repeat=6):
        matrix = [[0] * 4 for _ in range(4)]
        for (i, j), bit in zip(pairs, bits):
            if bit:
                matrix[i][j] = 1
            else:
                matrix[j][i] = 1
        yield WeightedTournament.from_rows("abcd", 1, matrix)


def test_criterion_2_oracle_equivalence():
    started = time.monotonic()
    failures = []
    # Exhaustive: all 64 labelled tournaments with m=4, n=1, with the
    # completion-enumeration engine deciding necessity inside the oracle.
    for idx, t in enumerate(all_unit_tournaments_m4()):
        for rule in UNIT_RULES:
            for w in winners(rule, t).winners:
                algo = compute_sms(t, w, rule).size
                truth = oracle_sms_size(t, w, rule, nw=is_necessary_winner_bruteforce)
                if algo != truth:
                    failures.append(f"m4#{idx} {rule.value} w={w}: {algo} != {truth}")
    # Random: 200 seeded 2-weighted tournaments on 3 candidates.  The
    # characterization engine is oracle-validated separately (criterion 3).
    for seed in range(200):
        t = random_tournament(3, 2, seed)
        for rule in WEIGHTED_RULES:
            for w in winners(rule, t).winners:
                algo = compute_sms(t, w, rule).size
                truth = oracle_sms_size(t, w, rule)
                if algo != truth:
                    failures.append(f"rand#{seed} {rule.value} w={w}: {algo} != {truth}")
    elapsed = time.monotonic() - started
    if elapsed >= 300:
        failures.append(f"runtime {elapsed:.1f}s exceeds 5min")
    report(2, "oracle equivalence", failures, f"{elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 3: necessary-winner characterization vs completion brute force
# ---------------------------------------------------------------------------


def test_criterion_3_necessary_winner_equivalence():
    started = time.monotonic()
    failures = []
    instances = 0
    for seed in range(1000):
        m = 2 + seed % 3  # 2..4
        n = 1 + seed % 2  # 1..2
        g = random_partial_tournament(m, n, seed, max_open_pairs=4)
        instances += 1
        rules = Rule if n == 1 else WEIGHTED_RULES
        for rule in rules:
            for w in range(m):
                fast = is_necessary_winner(g, w, rule)
                slow = is_necessary_winner_bruteforce(g, w, rule)
                if fast != slow:
                    failures.append(f"seed={seed} {rule.value} w={w}: {fast} != {slow}")
    assert instances >= 1000
    report(3, "necessary-winner characterization", failures, f"{time.monotonic() - started:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 4: size bounds and closed forms on the corpus
# ---------------------------------------------------------------------------


def closed_form(t, w, rule):
    if rule in (Rule.TC, Rule.UC):
        return sms_size_formula(SizeFormulaInput(rule, t.n, t.m))
    if rule is Rule.COP:
        sigma = sum(1 for x in t.weights[w] if x)
        return sms_size_formula(SizeFormulaInput(rule, t.n, t.m, sigma_w=sigma))
    if rule is Rule.BORDA:
        outs = tuple(t.weights[w][c] for c in range(t.m) if c != w)
        return sms_size_formula(SizeFormulaInput(rule, t.n, t.m, out_weights=outs))
    sigma = min(t.weights[w][c] for c in range(t.m) if c != w)
    level = min(sigma, t.n // 2)
    k = sum(1 for c in range(t.m) if c != w and t.weights[w][c] >= t.n - level)
    return sms_size_formula(SizeFormulaInput(rule, t.n, t.m, sigma_w=sigma, k=k))


def size_interval(rule, m, n):
    """Table of proven size bounds; the cop/borda rows assume m >= 3
    (their upper-bound expressions are ill-formed at m = 2)."""
    if rule in (Rule.TC, Rule.UC):
        return m - 1, m - 1
    if rule is Rule.COP:
        return (m - 1, (m - 1) * ((m - 1) // 2)) if m >= 3 else None
    if rule is Rule.BORDA:
        if m < 3:
            return None
        return ceil_div(n * (m - 1) ** 2, m), (m - 1) * (n * (m - 1) // 2)
    if rule is Rule.MM:
        return ceil_div(n, 2) * (m - 1), n * (m - 1)
    return (n + m - 2, (n + 1) * (m - 1)) if m >= 3 else None


def test_criterion_4_bounds_and_closed_forms(corpus):
    started = time.monotonic()
    failures = []
    for rule, cases in corpus.items():
        for t, w, res in cases:
            if t.m == 1:
                continue
            interval = size_interval(rule, t.m, t.n)
            if interval is not None:
                low, high = interval
                if not low <= res.size <= high:
                    failures.append(
                        f"{rule.value} m={t.m} n={t.n} w={w}: size {res.size} outside [{low},{high}]"
                    )
            if rule is not Rule.WUC and res.size != closed_form(t, w, rule):
                failures.append(
                    f"{rule.value} m={t.m} n={t.n} w={w}: size {res.size} != formula"
                )
    report(4, "size bounds and closed forms", failures, f"{time.monotonic() - started:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 5: structure invariants and full verification
# ---------------------------------------------------------------------------


def tree_shape_violation(res):
    g = res.support.partial
    root = res.support.winner
    in_deg = [0] * g.m
    for _, j, _ in g.pairs():
        in_deg[j] += 1
    if in_deg[root] != 0:
        return "root has incoming weight"
    if any(d > 1 for d in in_deg):
        return "in-degree above 1"
    depth = {root: 0}
    frontier = [root]
    while frontier:
        new = []
        for u in frontier:
            for v in range(g.m):
                if g.weights[u][v] and v not in depth:
                    depth[v] = depth[u] + 1
                    new.append(v)
        frontier = new
    if len(depth) != g.m:
        return "not connected from the root"
    if res.support.rule in (Rule.UC, Rule.WUC) and max(depth.values()) > 2:
        return "depth above 2"
    return None


def test_criterion_5_structure_and_verification(corpus):
    # The weighted-uncovered-set tree claim is asserted as stated, and is
    # expected red: weight caps routinely (about 10% of this corpus) force
    # an intermediate to carry a hub edge from the winner on top of its
    # own covering edge, so the smallest support has a node of in-degree
    # 2.  Those supports still verify as valid minimal supports below,
    # and each is strictly smaller than every tree-shaped alternative
    # (see the weak-hub cases in test_sms.py).
    started = time.monotonic()
    failures = []
    for rule in (Rule.TC, Rule.UC, Rule.WUC):
        for t, w, res in corpus[rule]:
            problem = tree_shape_violation(res)
            if problem:
                failures.append(f"{rule.value} seedcase m={t.m} n={t.n} w={w}: {problem}")
    for rule, cases in corpus.items():
        for t, w, res in cases:
            verdict = verify_support(t, res.support)
            if verdict.kind != "valid-MS":
                failures.append(
                    f"{rule.value} m={t.m} n={t.n} w={w}: verify says {verdict.kind}"
                )
    report(5, "structure invariants and verification", failures, f"{time.monotonic() - started:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 6: Borda win-count spread
# ---------------------------------------------------------------------------


def test_criterion_6_borda_win_count_spread():
    started = time.monotonic()
    failures = []
    instances = [(3, n, seed) for n in (1, 2, 3, 4, 5) for seed in range(10)]
    # seeded corpus plus the regime where the winner's strongest win
    # exceeds the per-opponent loss bar (out-weights (5, 1) at n=5)
    extra = [WeightedTournament.from_rows("wxy", 5, [[0, 5, 1], [0, 0, 4], [4, 1, 0]])]
    for m, n, seed in instances:
        t = random_tournament(m, n, seed)
        cases = [t] + (extra if (m, n, seed) == (3, 5, 0) else [])
        for t in cases:
            _check_wc_spread(t, failures, m, n, seed)
    report(6, "borda win-count spread", failures, f"{time.monotonic() - started:.1f}s")


def _check_wc_spread(t, failures, m, n, seed):
    for w in winners(Rule.BORDA, t).winners:
        smallest = enumerate_smallest_supports(t, w, Rule.BORDA)
        wcs = [sum(s.partial.weights[w]) for s in smallest]
        spread = max(wcs) - min(wcs)
        if 2 * spread > max(2, n):  # spread <= max(1, n/2)
            failures.append(f"m{m} n{n} seed{seed} w={w}: spread {spread}")
        res = sms_borda(t, w)
        if res.size != smallest[0].size():
            failures.append(f"m{m} n{n} seed{seed} w={w}: algorithm not smallest")
        if res.win_count != max(wcs):
            failures.append(
                f"m{m} n{n} seed{seed} w={w}: wc {res.win_count} < max {max(wcs)}"
            )


# ---------------------------------------------------------------------------
# Criterion 7: set-cover reduction
# ---------------------------------------------------------------------------


def test_criterion_7_setcover_reduction():
    started = time.monotonic()
    failures = []
    combos = [(p, q) for p in (2, 3, 4, 5) for q in (2, 3, 4, 5)]
    cases = 0
    for idx, (p, q) in enumerate(itertools.cycle(combos)):
        if cases >= 24:
            break
        inst = random_setcover_instance(p, q, seed=idx)
        t, w = build_setcover_tournament(inst)
        res = compute_sms(t, w, Rule.WUC)
        expected = p + q + min_set_cover(inst)
        if res.size != expected or not res.optimal:
            failures.append(f"p={p} q={q} seed={idx}: {res.size} != {expected}")
        cases += 1
    elapsed = time.monotonic() - started
    if elapsed >= 120:
        failures.append(f"runtime {elapsed:.1f}s exceeds 2min")
    report(7, "set-cover reduction", failures, f"{elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 8: performance envelopes
# ---------------------------------------------------------------------------


def test_criterion_8_performance():
    failures = []
    big = random_tournament(200, 10**6, 3)
    w = winners(Rule.BORDA, big).winners[0]
    t0 = time.monotonic()
    sms_borda(big, w)
    borda_s = time.monotonic() - t0
    w = winners(Rule.MM, big).winners[0]
    t0 = time.monotonic()
    sms_mm(big, w)
    mm_s = time.monotonic() - t0
    huge = random_tournament(2000, 1, 4)
    w = winners(Rule.TC, huge).winners[0]
    t0 = time.monotonic()
    sms_tc(huge, w)
    tc_s = time.monotonic() - t0
    t0 = time.monotonic()
    sms_uc(huge, w)
    uc_s = time.monotonic() - t0
    for name, secs in [("borda", borda_s), ("mm", mm_s), ("tc", tc_s), ("uc", uc_s)]:
        if secs >= 2.0:
            failures.append(f"sms_{name} took {secs:.2f}s")
    report(
        8,
        "performance",
        failures,
        f"borda {borda_s:.2f}s, mm {mm_s:.2f}s, tc {tc_s:.2f}s, uc {uc_s:.2f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 9: explanation fidelity
# ---------------------------------------------------------------------------

UC_REFERENCE = """\
a is part of the uncovered set because
- a is not covered by b since a is preferred to b ((a,b) in X)
- a is not covered by c since a is preferred to b ((a,b) in X) and b is preferred to c ((b,c) in X)
- a is not covered by d since a is preferred to d ((a,d) in X)
"""

MM_REFERENCE = """\
a is part of the maximin set because
- a wins at least 2 pairwise comparisons in each head-to-head (mu_X(a,b)=3, mu_X(a,c)=2, mu_X(a,d)=3)
- b wins at most 2=5-3 pairwise comparisons against a (mu_X(a,b)=3)
- c wins at most 2=5-3 pairwise comparisons against b (mu_X(b,c)=3)
- d wins at most 2=5-3 pairwise comparisons against a (mu_X(a,d)=3)
"""

ARITHMETIC = re.compile(r"(\d+)=([\d+*-]+)")


def eval_arithmetic(expr: str) -> int:
    total, sign = 0, 1
    for part in re.split(r"([+-])", expr):
        if part == "+":
            sign = 1
        elif part == "-":
            sign = -1
        else:
            value = 1
            for factor in part.split("*"):
                value *= int(factor)
            total += sign * value
    return total


def test_criterion_9_explanation_fidelity(corpus):
    started = time.monotonic()
    failures = []
    u4 = load_fixture("u4.trn").as_complete()
    w5b = load_fixture("w5b.trn").as_complete()
    uc_text = render_text(extract_structure(sms_uc(u4, 0)))
    if uc_text != UC_REFERENCE:
        failures.append("uncovered-set text drifted from the committed template")
    mm_text = render_text(extract_structure(sms_mm(w5b, 0)))
    if mm_text != MM_REFERENCE:
        failures.append("maximin text drifted from the committed template")
    for total, expr in ARITHMETIC.findall(mm_text):
        if int(total) != eval_arithmetic(expr):
            failures.append(f"arithmetic {total}={expr} does not check out")
    # losslessness across the full corpus
    for rule, cases in corpus.items():
        for t, w, res in cases:
            cert = extract_structure(res)
            if regenerate_support(cert) != res.support.partial:
                failures.append(f"{rule.value} m={t.m} n={t.n} w={w}: regenerate mismatch")
            text = render_text(cert)
            for total, expr in ARITHMETIC.findall(text):
                if int(total) != eval_arithmetic(expr):
                    failures.append(f"{rule.value} arithmetic {total}={expr}")
    report(9, "explanation fidelity", failures, f"{time.monotonic() - started:.1f}s")
