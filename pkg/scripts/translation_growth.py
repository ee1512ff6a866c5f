"""How big do translations get?

Draws random dynamic formulas at increasing nesting depth and reports the
median and maximum size of the input, the static output, the number of
rewrite steps, and the complexity of the input.

    python scripts/translation_growth.py --samples 200 --max-depth 4
"""
import argparse
import random
import statistics
import time
from dataclasses import dataclass

from hopelogic.formula import complexity, size
from hopelogic.generate import FormulaConfig, random_dynamic_formula
from hopelogic.translate import translate


@dataclass(frozen=True)
class GrowthConfig:
    agents: tuple = ("a", "b")
    props: tuple = ("p", "q")
    samples: int = 200
    max_depth: int = 4
    update_prob: float = 0.5
    seed: int = 0


def row(cfg: GrowthConfig, depth: int, rng: random.Random):
    fc = FormulaConfig(depth=depth, update_prob=cfg.update_prob)
    sizes_in, sizes_out, steps, cs = [], [], [], []
    t0 = time.perf_counter()
    for _ in range(cfg.samples):
        phi = random_dynamic_formula(rng, cfg.agents, cfg.props, fc)
        out, trace = translate(phi, cfg.agents)
        sizes_in.append(size(phi))
        sizes_out.append(size(out))
        steps.append(len(trace))
        cs.append(complexity(phi))
    ms = 1000 * (time.perf_counter() - t0) / cfg.samples
    med = statistics.median
    return (depth, med(sizes_in), med(sizes_out), max(sizes_out), med(steps), max(steps), med(cs), ms)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=GrowthConfig.samples)
    ap.add_argument("--max-depth", type=int, default=GrowthConfig.max_depth)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = GrowthConfig(samples=a.samples, max_depth=a.max_depth, seed=a.seed)
    rng = random.Random(cfg.seed)
    print(f"{'depth':>5} {'in':>6} {'out':>8} {'out max':>9} {'steps':>6} {'steps max':>9} "
          f"{'c(phi)':>8} {'ms/formula':>10}")
    for d in range(1, cfg.max_depth + 1):
        print("{:>5} {:>6} {:>8} {:>9} {:>6} {:>9} {:>8} {:>10.2f}".format(*row(cfg, d, rng)))


if __name__ == "__main__":
    main()
