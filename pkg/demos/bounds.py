"""The six bounds next to the proof oracle for a single instance."""

from fracineq.bounds import evaluate_instance
from fracineq.preinvex import IDENTITY, Instance, get_function

inst = Instance(get_function("exp"), IDENTITY, 0.5, 1.5, alpha=0.5, lam=0.25, q=2.0)
print(inst.key)
print(f"{'':<4}{'mode':<18}{'gap':>12}{'oracle':>12}{'printed':>12}{'slack':>8}  status")
for rep in evaluate_instance(inst):
    slack = "" if rep.slack_ratio is None else f"{rep.slack_ratio:.3f}"
    print(f"{rep.theorem:<4}{rep.mode:<18}{rep.gap:12.4e}{rep.oracle_bound:12.4e}"
          f"{rep.paper_bound:12.4e}{slack:>8}  {rep.status}")
    for note in rep.notes:
        print(f"      note: {note}")
