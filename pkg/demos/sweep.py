"""Run a small sweep and a seeded falsification search through the harness."""

from fracineq.harness import parse_config, run_falsify, run_verify_theorems

cfg = parse_config("""\
schema_version: 1
instances:
  - functions: [square, exp, pow32]
    maps: [identity, "scaled:0.7"]
    a: 0.5
    b: 1.5
    alpha: [0.5, 2.0]
    lambda: [0.25]
    q: [2.0, 4.0]
""")

report = run_verify_theorems(cfg)
print("theorem sweep:", report.summary, "exit code", report.exit_code)
flags = {}
for row in report.results:
    if row["status"] == "flag":
        reason = row.get("notes") or [row["kind"]]
        flags[reason[0]] = flags.get(reason[0], 0) + 1
for reason, n in sorted(flags.items()):
    print(f"  {n:3d} flagged: {reason}")

falsify = run_falsify(cfg, trials=200, seed=1)
print("\nfalsification:", falsify.extra["falsify"])
print("tightest pair:", falsify.results[0]["key"], falsify.results[0]["theorem"],
      f"slack {falsify.results[0]['slack_ratio']:.3f}")
