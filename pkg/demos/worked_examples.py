"""Walk through three small correspondence computations, printing each trace.

    python3 demos/worked_examples.py
"""
from sqema import EngineConfig, parse_formula, run, verify_correspondence
from sqema import fol

CASES = [
    ("dia box p -> box dia p", None),
    ("p & box(dia p -> box q) -> dia box box q", ("q", "p")),
    ("box(box p <-> q) -> p", None),
    ("box dia p -> dia box p", None),
]


def show(text, order):
    phi = parse_formula(text)
    res = run(phi, EngineConfig(elimination_order=order))
    print("=" * 72)
    print(text, "" if order is None else f"(order {','.join(order)})")
    for br in res.branches:
        for a in br.attempts:
            tag = "ok" if a.success else f"stuck on {a.failed_on}"
            print(f"  attempt {','.join(a.order)}: {tag}")
            for line in a.final.lines():
                print("     ", line)
    if not res.success:
        print("  failure:", res.reason.value)
        return
    print("  local :", fol.pretty(res.local_fo))
    print("  global:", fol.pretty(res.global_fo))
    print("  check :", verify_correspondence(phi, res.local_fo, 3))


if __name__ == "__main__":
    for text, order in CASES:
        show(text, order)
