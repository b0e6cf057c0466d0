"""Generate formulae of both syntactic classes and tally how the engine does.

    python3 demos/class_survey.py [count]
"""
import sys
import time
from collections import Counter

from sqema import gen_formula, is_monadic_inductive, run, verify_correspondence


def survey(cls, count):
    tally = Counter()
    t = time.perf_counter()
    for seed in range(count):
        phi = gen_formula(cls, seed)
        res = run(phi)
        tally["success" if res.success else res.reason.value] += 1
        if res.success and not verify_correspondence(phi, res.local_fo, 2).ok:
            tally["refuted"] += 1
        rep = is_monadic_inductive(phi)
        tally["also sahlqvist"] += rep.sahlqvist
        tally["also inductive"] += rep.monadic_inductive
    print(f"{cls:<10} {dict(tally)}  {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    for cls in ("sahlqvist", "inductive"):
        survey(cls, n)
