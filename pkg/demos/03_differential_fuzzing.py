"""Differential testing: random instances, two independent deciders.

`gen_fuzz` produces small array formulas whose state space stays within
exhaustive-enumeration reach.  Each instance is decided twice — by the
lemma-refinement solver and by the brute-force oracle — and every model
the solver returns is additionally evaluated back against the original
assertions.  Any disagreement or failed assert-back would be a bug in
one of the two deciders; they are implemented independently on purpose.

Run:  python3 demos/03_differential_fuzzing.py
"""

from collections import Counter

from caext import check_sat, oracle_solve, print_script, validate_model
from caext.benchgen import gen_fuzz

SEEDS = 100


def main():
    verdicts = Counter()
    disagreements = 0
    validated = 0
    for seed in range(SEEDS):
        manager, assertions = gen_fuzz(seed)
        result = check_sat(manager, assertions)
        reference = oracle_solve(assertions)
        if result.verdict != reference.verdict:
            disagreements += 1
            print(f"seed {seed}: solver={result.verdict} "
                  f"oracle={reference.verdict}  <-- BUG")
        verdicts[result.verdict] += 1
        if result.verdict == "sat":
            assert validate_model(result.model, assertions)
            validated += 1

    print(f"{SEEDS} random instances: "
          f"{SEEDS - disagreements} agree, {disagreements} disagree")
    print(f"verdict mix: {verdicts['sat']} sat, {verdicts['unsat']} unsat, "
          f"{verdicts['unknown']} unknown")
    print(f"models validated against their assertions: {validated}")

    print()
    print("what one generated instance looks like (seed 7):")
    manager, assertions = gen_fuzz(7)
    print(print_script(assertions))


if __name__ == "__main__":
    main()
