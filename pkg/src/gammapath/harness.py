"""Batch verification harness: seeded random suites and machine-readable reports.

Each check returns PASS, FAIL (with a replayable reproducer), or SKIPPED with
a reason.  Checks are independent and may run in parallel; the merged report
is deterministic for a fixed seed and scale.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .chains import CycleChain, reachable_weights, reroute_to_weight, sharpness_witness
from .errors import DEFAULT_LIMITS, Limits, GammapathError
from .frame import frame_pack_or_cover, validate_frame_cover
from .gadgets import (
    build_integer_gadget,
    build_quotient_gadget,
    build_subgroup_escape_gadget,
    verify_gadget,
)
from .graphs import (
    DIRECTED,
    UNDIRECTED,
    LabelledGraph,
    apply_shifts,
    enumerate_terminal_paths,
    normalize_to_zero,
)
from .groups import (
    CayleyGroup,
    CyclicProduct,
    elements_of_order_at_most_2,
    find_halving,
    has_weight_ep,
    has_zero_path_ep,
    iter_abelian_groups,
    sumset,
)
from .packing import (
    ABA,
    NONZERO,
    ODD,
    WEIGHT,
    PathFamilySpec,
    TerminalEdgeWarning,
    duality_report,
    max_packing,
    min_cover,
    reduce_weight_to_zero,
)


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    limits: Limits = DEFAULT_LIMITS
    scale: str = "full"  # "small" trims the randomized suite sizes
    threads: int | None = None
    budget_s: float | None = None

    def counts(self, full: int) -> int:
        return max(10, full // 10) if self.scale == "small" else full


def _threads(config: RunConfig) -> int:
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get("GAMMAPATH_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def make_s3() -> CayleyGroup:
    """Symmetric group on three points, composed left to right."""
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(b[a[x]] for x in range(3))] for b in perms] for a in perms]
    return CayleyGroup(table, identity=idx[(0, 1, 2)], name="S3")


def random_labelled_graph(rng: random.Random, group, model: str, n_max: int, a_max: int = 4):
    n = rng.randint(4, n_max)
    vertices = list(range(n))
    possible = list(itertools.combinations(vertices, 2))
    m = rng.randint(n - 1, min(len(possible), 2 * n))
    chosen = rng.sample(possible, m)
    elems = group.elements()
    edges = []
    for u, v in chosen:
        if model == DIRECTED:
            tail = u if rng.random() < 0.5 else v
            edges.append((u, v, rng.choice(elems), tail))
        else:
            edges.append((u, v, rng.choice(elems)))
    terminals = rng.sample(vertices, rng.randint(2, min(a_max, n)))
    return LabelledGraph.build(group, model, edges, terminals, extra_vertices=vertices)


def random_three_connected(rng: random.Random, group, n: int):
    """K4 grown by degree-3 attachments, labelled by a random involution potential."""
    vertices = list(range(n))
    pairs = set(itertools.combinations(range(4), 2))
    for v in range(4, n):
        for u in rng.sample(range(v), 3):
            pairs.add((u, v))
    flips = sorted(elements_of_order_at_most_2(group), key=group.elem_sort_key)
    phi = {v: rng.choice(flips) for v in vertices}
    edges = [(u, v, phi[u] + phi[v]) for u, v in sorted(pairs)]
    return LabelledGraph.build(group, UNDIRECTED, edges, (), extra_vertices=vertices), phi


def _naive_max_packing(members) -> int:
    sets = [frozenset(m.vertices) for m in members]
    best = 0
    for r in range(len(sets), 0, -1):
        if r <= best:
            break
        for combo in itertools.combinations(range(len(sets)), r):
            union: set = set()
            ok = True
            for i in combo:
                if sets[i] & union:
                    ok = False
                    break
                union |= sets[i]
            if ok:
                best = r
                break
    return best


def _naive_min_cover(members) -> int:
    sets = [frozenset(m.vertices) for m in members]
    if not sets:
        return 0
    universe = sorted(set().union(*sets), key=repr)
    for r in range(0, len(universe) + 1):
        for combo in itertools.combinations(universe, r):
            chosen = set(combo)
            if all(chosen & s for s in sets):
                return r
    raise AssertionError("unreachable")


# --- individual checks -------------------------------------------------------


def check_frame_random(config: RunConfig) -> dict:
    rng = random.Random(config.seed * 1009 + 1)
    groups = [CyclicProduct((2,)), CyclicProduct((3,)), CyclicProduct((5,)), make_s3()]
    total = config.counts(500)
    packings = covers = 0
    for i in range(total):
        group = groups[i % len(groups)]
        g = random_labelled_graph(rng, group, DIRECTED, n_max=14)
        k = rng.randint(1, 3)
        result = frame_pack_or_cover(g, k, config.limits)
        if result.outcome.kind == "packing":
            packings += 1
            used: set = set()
            for p in result.outcome.paths:
                p.validate(g)
                if p.weight != group.zero() or used & set(p.vertices):
                    return _fail("frame-random", g, {"k": k, "instance_index": i})
                used |= set(p.vertices)
        else:
            covers += 1
            checks = validate_frame_cover(g, k, result.outcome.vertices, config.limits)
            if not (checks["bound_ok"] and checks["verified_empty"]):
                return _fail("frame-random", g, {"k": k, "instance_index": i, "checks": checks})
    return _pass("frame-random", {"instances": total, "packings": packings, "covers": covers})


def check_duality_random(config: RunConfig) -> dict:
    rng = random.Random(config.seed * 1009 + 2)
    total = config.counts(500)
    per_kind = {NONZERO: 0, ODD: 0, ABA: 0}
    for i in range(total):
        kind = (NONZERO, ODD, ABA)[i % 3]
        if kind == NONZERO:
            group = rng.choice([CyclicProduct((2,)), CyclicProduct((3,)), CyclicProduct((5,))])
            g = random_labelled_graph(rng, group, DIRECTED, n_max=12)
            spec = PathFamilySpec(NONZERO, g)
        else:
            group = CyclicProduct((2,))
            g = random_labelled_graph(rng, group, UNDIRECTED, n_max=12)
            if kind == ODD:
                spec = PathFamilySpec(ODD, g)
            else:
                through = frozenset(rng.sample(list(g.vertices), rng.randint(1, 3)))
                spec = PathFamilySpec(ABA, g, through=through)
        report = duality_report(spec, config.limits)
        if report["tau"] > 2 * report["nu"]:
            return _fail("duality-random", g, {"kind": kind, "instance_index": i, "report": {
                "nu": report["nu"], "tau": report["tau"]}})
        per_kind[kind] += 1
    return _pass("duality-random", {"instances": total, **{f"kind_{k}": v for k, v in per_kind.items()}})


def check_chain_exhaustive(config: RunConfig) -> dict:
    detail = {}
    for p in (3, 5, 7):
        group = CyclicProduct((p,))
        full = frozenset(group.elements())
        vectors = 0
        for deltas in itertools.product(range(1, p), repeat=p - 1):
            chain = CycleChain.abstract(group, 0, deltas)
            if reachable_weights(chain) != full:
                return _fail(
                    "chain-exhaustive",
                    None,
                    {"p": p, "deltas": list(deltas), "reason": "missed weight"},
                )
            vectors += 1
        detail[f"p{p}_vectors"] = vectors
        # witness-level spot checks along the diagonal of the vector space
        rng = random.Random(config.seed * 1009 + 3 + p)
        for _ in range(25):
            deltas = [rng.randint(1, p - 1) for _ in range(p - 1)]
            core = rng.randrange(p)
            target = rng.randrange(p)
            chain = CycleChain.abstract(group, core, deltas)
            out = reroute_to_weight(chain, group.element(target))
            if out is None:
                return _fail("chain-exhaustive", None, {"p": p, "deltas": deltas, "core": core, "target": target})
            total = group.element(core)
            for i in out.subset:
                total = total + group.element(deltas[i])
            if total != group.element(target):
                return _fail("chain-exhaustive", None, {"p": p, "deltas": deltas, "reason": "bad witness"})
        sharp = sharpness_witness(p)
        if reroute_to_weight(sharp, group.zero()) is not None:
            return _fail("chain-exhaustive", None, {"p": p, "reason": "sharpness family reached zero"})
        detail[f"p{p}_sharp_unreachable"] = True
    return _pass("chain-exhaustive", detail)


def check_cauchy_davenport(config: RunConfig) -> dict:
    z5 = CyclicProduct((5,))
    elems5 = z5.elements()
    pairs = 0
    subsets5 = []
    for r in range(1, 6):
        subsets5.extend(frozenset(c) for c in itertools.combinations(elems5, r))
    for xs in subsets5:
        for ys in subsets5:
            out = sumset(xs, ys)
            if len(out) < min(len(xs) + len(ys) - 1, 5):
                return _fail("cauchy-davenport", None, {"p": 5})
            pairs += 1
    z7 = CyclicProduct((7,))
    elems7 = z7.elements()
    subsets7 = []
    for r in range(1, 5):
        subsets7.extend(frozenset(c) for c in itertools.combinations(elems7, r))
    for xs in subsets7:
        for ys in subsets7:
            out = sumset(xs, ys)
            if len(out) < min(len(xs) + len(ys) - 1, 7):
                return _fail("cauchy-davenport", None, {"p": 7})
            pairs += 1
    return _pass("cauchy-davenport", {"pairs": pairs})


def check_gadgets(config: RunConfig) -> dict:
    z4 = CyclicProduct((4,))
    z8 = CyclicProduct((8,))
    detail: dict = {}
    for n in (2, 3):
        checks = verify_gadget(build_subgroup_escape_gadget(n, z4, 1, 2), config.limits)
        detail[f"subgroup_escape_n{n}"] = {"nu": checks["nu"], "tau": checks["tau"]}
        if not (checks["nu"] == 1 and checks["uses_top_row"] and checks["endpoints_cross"]):
            return _fail("gadgets", None, {"variant": "gamma-double-prime", "n": n, "checks": checks})
    for n in (2, 3):
        checks = verify_gadget(build_quotient_gadget(n, z8, 1, 4), config.limits)
        detail[f"quotient_n{n}"] = {"nu": checks["nu"], "tau": checks["tau"]}
        if not (checks["nu"] == 1 and checks["uses_top_row"] and checks["endpoints_cross"]):
            return _fail("gadgets", None, {"variant": "gamma-prime", "n": n, "checks": checks})
    checks = verify_gadget(build_integer_gadget(2, 0), config.limits)
    detail["integer_n2"] = {"nu": checks["nu"], "tau": checks["tau"]}
    if not (checks["nu"] == 1 and checks["antidiagonal_pairing"] and checks["tau"] == 2):
        return _fail("gadgets", None, {"variant": "gamma", "n": 2, "checks": checks})
    # best-effort larger instance within the time budget
    budget = config.budget_s if config.budget_s is not None else config.limits.budget_s
    start = time.monotonic()
    if budget > 60:
        try:
            checks = verify_gadget(build_subgroup_escape_gadget(4, z4, 1, 2), config.limits)
            detail["subgroup_escape_n4"] = {
                "nu": checks["nu"],
                "tau": checks["tau"],
                "elapsed_s": round(time.monotonic() - start, 2),
            }
            if checks["nu"] != 1:
                return _fail("gadgets", None, {"variant": "gamma-double-prime", "n": 4, "checks": checks})
        except GammapathError as exc:
            detail["subgroup_escape_n4"] = f"SKIPPED ({exc})"
    else:
        detail["subgroup_escape_n4"] = "SKIPPED (budget)"
    return _pass("gadgets", detail)


def check_classification(config: RunConfig) -> dict:
    groups = 0
    pairs = 0
    for group in iter_abelian_groups(32):
        zero_ok = has_zero_path_ep(group)  # internally cross-checked
        factors = group.invariant_factors()
        quoted = (
            (factors and all(f == 2 for f in factors))
            or factors == ()
            or (len(factors) == 1 and (factors[0] == 4 or _prime(factors[0])))
        )
        if bool(zero_ok) != bool(quoted):
            return _fail("classification", None, {"group": group.to_json()})
        for ell in group.elements():
            has_weight_ep(group, ell)  # raises on list/replay disagreement
            pairs += 1
        groups += 1
    return _pass("classification", {"groups": groups, "pairs": pairs})


def _prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, n))


def check_normalization(config: RunConfig) -> dict:
    rng = random.Random(config.seed * 1009 + 7)
    total = config.counts(200)
    groups = [CyclicProduct((2,)), CyclicProduct((2, 2)), CyclicProduct((4,))]
    for i in range(total):
        group = groups[i % len(groups)]
        g, _ = random_three_connected(rng, group, rng.randint(4, 10))
        shifts, normalized = normalize_to_zero(g, config.limits.cycle_cap)
        if any(e.label != group.zero() for e in normalized.edges):
            return _fail("normalization", g, {"instance_index": i})
        replay = apply_shifts(g, shifts)
        if any(e.label != group.zero() for e in replay.edges):
            return _fail("normalization", g, {"instance_index": i, "reason": "replay"})
        back = apply_shifts(replay, shifts)
        if [e.label for e in back.edges] != [e.label for e in g.edges]:
            return _fail("normalization", g, {"instance_index": i, "reason": "round-trip"})
    return _pass("normalization", {"instances": total})


def check_reduction(config: RunConfig) -> dict:
    import warnings

    rng = random.Random(config.seed * 1009 + 8)
    total = config.counts(200)
    cases = [(CyclicProduct((9,)), list(range(9))), (CyclicProduct((4,)), [0, 2])]
    for i in range(total):
        group, targets = cases[i % 2]
        g = random_labelled_graph(rng, group, UNDIRECTED, n_max=10)
        ell = group.element(rng.choice(targets))
        half = find_halving(group, ell)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TerminalEdgeWarning)
            reduced = reduce_weight_to_zero(g, ell, half)
        before = {p.vertices for p in enumerate_terminal_paths(g, weight=ell, limits=config.limits)}
        after = {
            p.vertices
            for p in enumerate_terminal_paths(reduced, weight=group.zero(), limits=config.limits)
        }
        if before != after:
            return _fail("reduction", g, {"instance_index": i, "ell": ell.to_json()})
    return _pass("reduction", {"instances": total})


def check_oracle_soundness(config: RunConfig) -> dict:
    rng = random.Random(config.seed * 1009 + 9)
    corpus = 0
    attempts = 0
    while corpus < 40 and attempts < 400:
        attempts += 1
        group = rng.choice([CyclicProduct((2,)), CyclicProduct((3,)), CyclicProduct((4,))])
        model = rng.choice([DIRECTED, UNDIRECTED])
        g = random_labelled_graph(rng, group, model, n_max=9)
        kind = rng.choice([WEIGHT, NONZERO, ODD])
        spec = (
            PathFamilySpec(WEIGHT, g, weight=rng.choice(group.elements()))
            if kind == WEIGHT
            else PathFamilySpec(kind, g)
        )
        members = spec.members(config.limits)
        if not 0 < len(members) <= 12:
            continue
        corpus += 1
        if max_packing(members, config.limits)[0] != _naive_max_packing(members):
            return _fail("oracle-soundness", g, {"kind": kind, "side": "packing"})
        if min_cover(members, config.limits)[0] != _naive_min_cover(members):
            return _fail("oracle-soundness", g, {"kind": kind, "side": "cover"})
    return _pass("oracle-soundness", {"corpus": corpus})


ALL_CHECKS = {
    "frame-random": check_frame_random,
    "duality-random": check_duality_random,
    "chain-exhaustive": check_chain_exhaustive,
    "cauchy-davenport": check_cauchy_davenport,
    "gadgets": check_gadgets,
    "classification": check_classification,
    "normalization": check_normalization,
    "reduction": check_reduction,
    "oracle-soundness": check_oracle_soundness,
}


def _pass(check_id: str, detail: dict) -> dict:
    return {"id": check_id, "status": "PASS", "detail": detail}


def _fail(check_id: str, graph, extra: dict) -> dict:
    reproducer = dict(extra)
    if graph is not None:
        reproducer["instance"] = graph.to_json()
    return {"id": check_id, "status": "FAIL", "reproducer": reproducer}


def run_suite(config: RunConfig, only: list[str] | None = None) -> dict:
    """Run the verification checks and merge a deterministic report."""
    ids = sorted(ALL_CHECKS) if only is None else [i for i in sorted(ALL_CHECKS) if i in only]
    budget = config.budget_s if config.budget_s is not None else config.limits.budget_s
    started = time.monotonic()
    results: dict[str, dict] = {}

    def run_one(check_id: str) -> dict:
        if time.monotonic() - started > budget:
            return {"id": check_id, "status": "SKIPPED", "detail": {"reason": "budget exhausted"}}
        t0 = time.monotonic()
        try:
            out = ALL_CHECKS[check_id](config)
        except GammapathError as exc:
            out = {"id": check_id, "status": "FAIL", "reproducer": {"error": str(exc)}}
        out["elapsed_s"] = round(time.monotonic() - t0, 3)
        if out["status"] == "FAIL":
            out.setdefault("reproducer", {})["seed"] = config.seed
        return out

    workers = _threads(config)
    if workers == 1:
        for check_id in ids:
            results[check_id] = run_one(check_id)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for check_id, out in zip(ids, pool.map(run_one, ids)):
                results[check_id] = out
    ordered = [results[i] for i in ids]
    summary = {
        "pass": sum(1 for r in ordered if r["status"] == "PASS"),
        "fail": sum(1 for r in ordered if r["status"] == "FAIL"),
        "skipped": sum(1 for r in ordered if r["status"] == "SKIPPED"),
    }
    return {
        "config": {
            "seed": config.seed,
            "scale": config.scale,
            "budget_s": budget,
            "threads": workers,
            "limits": {
                "max_len": config.limits.max_len,
                "max_paths": config.limits.max_paths,
                "cycle_cap": config.limits.cycle_cap,
            },
        },
        "checks": ordered,
        "summary": summary,
        "elapsed_s": round(time.monotonic() - started, 3),
    }
