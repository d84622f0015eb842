"""Generate crafted benchmark files and solve them through the CLI path.

The crafted family chains stores over a row of base arrays: a constant
array on each end, `z` free arrays in between, and a configurable
number of store updates per chain.  Every instance is written in two
encodings:

  * native    — uses `((as const ...) v)` constant-array terms;
  * quantified — replaces each constant array by a fresh array constant
    axiomatized with one `forall`, for consumers without const arrays.

Run:  python3 demos/04_benchmark_generation.py
"""

import tempfile
from pathlib import Path

from caext import TermManager, check_sat, parse
from caext.benchgen import CraftedParams, gen_crafted, write_crafted
from caext.cli import main as cli_main


def main():
    out = Path(tempfile.mkdtemp(prefix="caext_demo_"))
    m = TermManager()
    params = CraftedParams(z=1, update_counts=(1, 1, 1),
                           index_sort=m.bv_sort(2),
                           element_sort=m.bool_sort)

    native = write_crafted(params, out)
    quantified = write_crafted(params, out, quantified=True)
    print(f"wrote {native.name} and {quantified.name} to {out}")
    print()
    print("native encoding:")
    print(native.read_text())
    print("quantified encoding (same instance, no constant-array terms):")
    print(quantified.read_text())

    script = parse(native.read_text())
    verdict = check_sat(script.manager, script.assertions).verdict
    print(f"parsed back and solved: {verdict}")
    print()

    print("the same file through the command line (caext solve):")
    code = cli_main(["solve", str(native)])
    print(f"exit code {code}")
    print()

    print("a family sweep only varies the parameters:")
    for z, counts in [(0, (0, 0)), (0, (2, 2)), (2, (1, 2, 2, 1))]:
        mm = TermManager()
        p = CraftedParams(z=z, update_counts=counts,
                          index_sort=mm.bv_sort(2),
                          element_sort=mm.bv_sort(1))
        phi = gen_crafted(mm, p)
        verdict = check_sat(mm, phi).verdict
        print(f"  z={z} updates={counts}: {len(phi)} chain equalities, "
              f"verdict {verdict}")


if __name__ == "__main__":
    main()
