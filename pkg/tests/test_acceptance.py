"""Acceptance suite: ten oracle- and property-based criteria at desk scale.

Each test prints one PASS line with the measured figures so a transcript
of this module doubles as an acceptance report.
"""

import json
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from conftest import oracle_linksets, random_diagram, random_types

import stringcalc
from stringcalc import diagram as dg
from stringcalc.diagram import identity
from stringcalc.pregroup import grammar_diagram, lexicon_from_json, parse
from stringcalc.resources import (conversion_rate, convertible,
                                  presentation_from_json)
from stringcalc.rewrite import normalize
from stringcalc.tensors import (Model, entropy, evaluate, random_payloads)
from stringcalc.types import WireType

DATA = Path(stringcalc.__file__).parent / "data"


def nested_snake(base: str, depth: int, chirality: str):
    """A zig-zag of `depth` nested cup/cap pairs on one open wire."""
    t = WireType(base)
    d = identity((t,))
    w = [t]
    if chirality == "left":
        zs = list(range(depth))
        cup_pos = [z + 1 for z in zs]
        cap_pos = [z for z in zs]
    else:
        zs = [-(z + 1) for z in range(depth)]
        cup_pos = [abs(z) - 1 for z in zs]
        cap_pos = [abs(z) for z in zs]
    for z, p in zip(zs, cup_pos):
        c = dg.cup(base, z)
        d = d >> (identity(tuple(w[:p])) @ c @ identity(tuple(w[p:])))
        w[p:p] = list(c.cod)
    for z, p in zip(reversed(zs), reversed(cap_pos)):
        c = dg.cap(base, z)
        d = d >> (identity(tuple(w[:p])) @ c @ identity(tuple(w[p + 2:])))
        del w[p:p + 2]
    return d


def test_criterion_1_yanking():
    start = time.perf_counter()
    count = 0
    for dim in (1, 2, 3, 4):
        model = Model(dims={"a": dim})
        for chirality in ("left", "right"):
            for depth in (1, 2, 3):
                snake = nested_snake("a", depth, chirality)
                nf = normalize(snake)
                assert nf.diagram == identity((WireType("a"),))
                arr = evaluate(snake, model).to_array()
                assert np.max(np.abs(arr - np.eye(dim))) < 1e-9
                count += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\n[PASS] criterion 1: {count} snakes (dims 1-4, depth <= 3, both "
          f"chiralities) normalize and evaluate to identity in {elapsed:.3f}s")


def test_criterion_2_structural_tautologies():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    instances = 0
    while instances < 1000:
        ts = [random_types(rng, int(rng.integers(0, 3))) for _ in range(4)]
        f = dg.make_generator("f", ts[0], ts[1])
        g = dg.make_generator("g", ts[1], ts[2])
        h = dg.make_generator("h", ts[2], ts[3])
        law = instances % 3
        if law == 0:
            assert (f >> g) >> h == f >> (g >> h)
        elif law == 1:
            assert identity(ts[0]) >> f == f == f >> identity(ts[1])
            assert f @ identity(()) == f == identity(()) @ f
        else:
            f2 = dg.make_generator("f2", ts[1], ts[2])
            g2 = dg.make_generator("g2", ts[3], ts[0])
            g1 = dg.make_generator("g1", ts[2], ts[3])
            assert (f @ g1) >> (f2 @ g2) == (f >> f2) @ (g1 >> g2)
        instances += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"[PASS] criterion 2: {instances} associativity/unit/interchange "
          f"instances structurally equal in {elapsed:.3f}s")


def test_criterion_3_parser_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    target = (WireType("s"),)
    lexicons = 0
    while lexicons < 200:
        n_bases = int(rng.integers(1, 6))
        bases = [f"b{k}" for k in range(n_bases - 1)] + ["s"]
        vocab = {}
        for k in range(int(rng.integers(1, 5))):
            tlen = int(rng.integers(1, 3))
            vocab[f"w{k}"] = tuple(
                WireType(str(rng.choice(bases)), int(rng.integers(-2, 3)))
                for _ in range(tlen))
        words = list(rng.choice(list(vocab), size=int(rng.integers(1, 7))))
        flat = tuple(t for w in words for t in vocab[w])
        if len(flat) > 10:
            continue
        lexicon = lexicon_from_json({
            "bases": {b: 2 for b in bases},
            "words": [{"word": w, "type": " ".join(str(t) for t in ts),
                       "payload": "dense", "data": [0.5] * (2 ** len(ts))}
                      for w, ts in vocab.items()],
        })
        witnesses = parse(lexicon, words, target=target)
        got = {w.links for w in witnesses}
        want = oracle_linksets(flat, target)
        assert got == want, (words, flat)
        assert bool(witnesses) == bool(want)
        for w in witnesses:
            assert w.replay()
        lexicons += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"[PASS] criterion 3: {lexicons} random lexicons, DP witness sets "
          f"== brute-force non-crossing enumeration in {elapsed:.3f}s")


ALICE_LEXICON = {
    "bases": {"n": 2, "s": 2},
    "words": [
        {"word": "Alice", "type": "n", "payload": "dense",
         "data": [0.9, 0.3]},
        {"word": "Bob", "type": "n", "payload": "dense",
         "data": [0.2, 0.8]},
        {"word": "hates", "type": "n.L s n.R", "payload": "dense",
         "data": [0.9, 0.1, 0.4, 0.3, 0.3, 0.6, 0.2, 0.1]},
    ],
}


def test_criterion_4_alice_hates_bob():
    lexicon = lexicon_from_json(ALICE_LEXICON)
    words = ["Alice", "hates", "Bob"]
    witnesses = parse(lexicon, words)
    assert len(witnesses) == 1
    w = witnesses[0]
    assert w.links == frozenset({(0, 1), (3, 4)})
    assert w.residual_types() == (WireType("s"),)
    vec = evaluate(grammar_diagram(words, w, lexicon),
                   lexicon.model()).to_array()
    alice = np.array([0.9, 0.3])
    bob = np.array([0.2, 0.8])
    hates = np.array(ALICE_LEXICON["words"][2]["data"]).reshape(2, 2, 2)
    expected = np.zeros(2, dtype=complex)
    for i in range(2):
        for s in range(2):
            for j in range(2):
                expected[s] += alice[i] * hates[i, s, j] * bob[j]
    assert np.max(np.abs(vec - expected)) < 1e-12
    print("[PASS] criterion 4: unique witness links {(0,1),(3,4)}, residual "
          "s, vector == brute-force sum within 1e-12")


def test_criterion_5_negation_identity():
    checked = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        verb = rng.standard_normal(8)
        neg = rng.standard_normal((2, 2))
        lexicon = lexicon_from_json({
            "bases": {"n": 2, "s": 2},
            "words": [
                {"word": "Alice", "type": "n", "payload": "dense",
                 "data": list(rng.standard_normal(2))},
                {"word": "Bob", "type": "n", "payload": "dense",
                 "data": list(rng.standard_normal(2))},
                {"word": "like", "type": "n.L s n.R", "payload": "dense",
                 "data": list(verb)},
                {"word": "likes", "type": "n.L s n.R", "payload": "dense",
                 "data": list(verb)},
                {"word": "does", "type": "n.L s s.R n",
                 "payload": "structural:copula"},
                {"word": "not", "type": "n.L s s.R n",
                 "payload": "structural:negation",
                 "data": list(neg.flatten())},
            ],
        })

        def vec(sentence):
            words = sentence.split()
            (w,) = parse(lexicon, words)
            return evaluate(grammar_diagram(words, w, lexicon),
                            lexicon.model()).to_array()

        negated = vec("Alice does not like Bob")
        plain = vec("Alice likes Bob")
        assert np.max(np.abs(negated - neg @ plain)) < 1e-9
        checked += 1
    print(f"[PASS] criterion 5: negated sentence == negation-matrix @ plain "
          f"sentence within 1e-9 for {checked} random payload sets")


def test_criterion_6_teleportation():
    from stringcalc.protocols import verify_teleportation
    start = time.perf_counter()
    for dim in (2, 3):
        reports = verify_teleportation(dim, trials=25, tolerance=1e-9, seed=0)
        assert len(reports) == dim * dim
        for r in reports:
            assert r.fidelity >= 1 - 1e-9
            assert abs(r.probability - 1 / dim ** 2) <= 1e-9
        assert abs(sum(r.probability for r in reports) - 1.0) <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"[PASS] criterion 6: d in {{2,3}}, all branches fidelity >= 1-1e-9,"
          f" probabilities 1/d^2 summing to 1, in {elapsed:.3f}s")


def test_criterion_7_anti_cartesian_witness():
    for d in (2, 3, 4):
        model = Model(dims={"a": d})
        cup_matrix = evaluate(dg.cup("a", 0), model).to_array()
        assert np.linalg.matrix_rank(cup_matrix) == d
    # death-theorem boundary: with every dimension 1, any two evaluations
    # of the same shape are proportional
    rng = np.random.default_rng(77)
    ones_model = Model(dims={"a": 1, "b": 1})
    pairs = 0
    while pairs < 20:
        d1 = random_diagram(rng, max_nodes=6)
        d2 = random_diagram(rng, max_nodes=6)
        m = random_payloads(ones_model, (d1, d2), seed=pairs)
        v1 = evaluate(d1, m).to_array().ravel()
        v2 = evaluate(d2, m).to_array().ravel()
        if v1.shape != v2.shape:
            continue
        stacked = np.vstack([v1, v2])
        assert np.linalg.matrix_rank(stacked, tol=1e-9) <= 1
        pairs += 1
    print("[PASS] criterion 7: cup rank d for d in {2,3,4}; at all dims 1, "
          f"{pairs} same-shape evaluation pairs are proportional")


def test_criterion_8_ambiguity_and_disambiguation():
    from stringcalc.pregroup import load_lexicon, word_state
    lexicon = load_lexicon(DATA / "language.json")
    model = lexicon.model(doubling="thick")
    state = word_state(lexicon.lookup("queen")[0], lexicon)
    before = entropy(evaluate(state, model))
    assert abs(before - np.log2(3)) < 1e-6
    demos = json.loads((DATA / "language.json").read_text())[
        "disambiguation_demos"]
    afters = []
    for context in demos:
        words = ["queen"] + list(context)
        (w,) = parse(lexicon, words, target="n")
        t = evaluate(grammar_diagram(words, w, lexicon), model)
        after = entropy(t)
        assert after < before
        afters.append(after)
    print(f"[PASS] criterion 8: entropy(queen) == log2(3) +/- 1e-6; all "
          f"{len(demos)} demo contexts strictly decrease it "
          f"(to {', '.join(f'{a:.3f}' for a in afters)})")


def test_criterion_9_resource_demos():
    start = time.perf_counter()
    plumber = presentation_from_json(
        {"atoms": ["A"], "rules": [{"from": ["A", "A"], "to": ["A"]}]})
    w = convertible(("A", "A"), ("A",), plumber)
    assert w is not None and len(w.steps) == 1 and w.replay(plumber)
    catalyst = presentation_from_json(
        {"atoms": ["A", "B", "C"],
         "rules": [{"from": ["A", "C"], "to": ["B", "C"]}]})
    assert convertible(("A",), ("B",), catalyst) is None
    doubler = presentation_from_json(
        {"atoms": ["A", "B"], "rules": [{"from": ["A"], "to": ["B", "B"]}]})
    r = conversion_rate("A", "B", doubler, n_max=3)
    assert r.rate == Fraction(2, 1) and (r.n, r.m) == (1, 2)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"[PASS] criterion 9: plumber 1-step witness, catalyst refusal, "
          f"doubler rate 2/1 at (1,2), in {elapsed:.3f}s")


def test_criterion_10_rewrite_soundness():
    rng = np.random.default_rng(10**6 + 7)
    checked = 0
    while checked < 500:
        dims = {"a": int(rng.integers(1, 5)), "b": int(rng.integers(1, 5))}
        d = random_diagram(rng, max_nodes=12, max_width=5)
        model = random_payloads(Model(dims=dims), (d,), seed=checked)
        before = evaluate(d, model)
        after = evaluate(normalize(d).diagram, model)
        assert before.shape == after.shape
        scale = max(before.norm(), after.norm(), 1.0)
        assert np.max(np.abs(before.to_array() - after.to_array())) \
            <= 1e-9 * scale
        checked += 1
    print(f"[PASS] criterion 10: {checked} random diagrams (<= 12 nodes, "
          f"dims <= 4) evaluate identically before/after normalize "
          f"within 1e-9 relative")
