"""Countermodel probe for the fault-threshold validities.

For each f, random hope update vectors are drawn and four implications are
searched for countermodels: the threshold condition guaranteeing at most f
faults after the update (with and without the assumption beforehand), the
pigeonhole implication from f+1 believers, and the repair of one agent
lowering the fault bound to f-1. Finding nothing is evidence, not proof.

    python scripts/probe_byz.py --agents a,b,c --models 20000
"""
import argparse
import random
import time
from dataclasses import dataclass

from hopelogic.checker import SearchBounds, find_countermodel
from hopelogic.formula import (
    Conj, PubUpdate, b_at_least, byz, correct, faulty, implies, lor, threshold, upd_single,
)
from hopelogic.generate import random_vector
from hopelogic.syntax import to_text


@dataclass(frozen=True)
class ProbeConfig:
    agents: tuple = ("a", "b", "c")
    props: tuple = ("p",)
    vectors: int = 3
    vector_depth: int = 2
    max_worlds: int = 4
    exhaustive_worlds: int = 2
    models: int = 20000
    seed: int = 0


def candidates(cfg: ProbeConfig, rng: random.Random, f: int):
    A, n = cfg.agents, len(cfg.agents)
    for _ in range(cfg.vectors):
        vec = random_vector(rng, A, cfg.props, cfg.vector_depth)
        yield "threshold", implies(threshold(A, vec, n - f), PubUpdate(vec, byz(A, f)))
        yield "threshold+byz", implies(Conj(byz(A, f), threshold(A, vec, n - f)), PubUpdate(vec, byz(A, f)))
    if f + 1 <= n:
        pigeon = Conj(byz(A, f), b_at_least(A, f + 1, faulty(A[0])))
        yield "pigeonhole", implies(pigeon, faulty(A[0]))
        if f >= 1:
            fix = lor(correct(A[0]), b_at_least(A, f + 1, faulty(A[0])))
            yield "repair", implies(pigeon, upd_single(A, A[0], fix, byz(A, f - 1)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--agents", default="a,b,c")
    ap.add_argument("--props", default="p")
    ap.add_argument("--models", type=int, default=ProbeConfig.models)
    ap.add_argument("--max-worlds", type=int, default=ProbeConfig.max_worlds)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-v", "--verbose", action="store_true", help="print each formula")
    a = ap.parse_args()
    cfg = ProbeConfig(agents=tuple(a.agents.split(",")), props=tuple(a.props.split(",")),
                      models=a.models, max_worlds=a.max_worlds, seed=a.seed)
    rng = random.Random(cfg.seed)
    bounds = SearchBounds(max_worlds=cfg.max_worlds, max_agents=len(cfg.agents), max_models=cfg.models,
                          seed=cfg.seed, exhaustive_worlds=cfg.exhaustive_worlds)
    print(f"{'f':>2} {'schema':<14} {'result':<12} {'models':>7} {'exh.':>4} {'secs':>6}")
    for f in range(len(cfg.agents) + 1):
        for name, phi in candidates(cfg, rng, f):
            t0 = time.perf_counter()
            res = find_countermodel(phi, cfg.agents, cfg.props, bounds)
            verdict = f"REFUTED@{res.world}" if res.found else "none found"
            print(f"{f:>2} {name:<14} {verdict:<12} {res.examined:>7} {res.exhaustive_up_to:>4} "
                  f"{time.perf_counter() - t0:6.2f}")
            if a.verbose:
                print("   ", to_text(phi))


if __name__ == "__main__":
    main()
