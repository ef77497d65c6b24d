"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Each row times one kernel call on both backends (best of N) and prints the
speedup.  The end-to-end row runs the theorem pipeline over a group list
in a subprocess per backend, since the backend is chosen at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

from normspec import kernels
from normspec.catalog import catalog
from normspec.group import from_permutation_generators
from normspec.lattice import enumerate_normal_subgroups
from normspec.topology import v_set

E2E_GROUPS = ["S4", "S5", "A5", "D8", "Q8", "Z60", "Z64", "S3 x Z2"]


def _cases():
    s5 = catalog("S5")
    s6 = from_permutation_generators(6, [[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]])
    lat = enumerate_normal_subgroups(catalog("Z2 x Z2 x Z4"))
    sub = [v_set(lat, s).members for s in range(len(lat))]
    a5 = catalog("A5")
    return [
        ("associativity S5 (120)", "find_nonassociative", (s5.table,)),
        ("associativity S6 (720)", "find_nonassociative", (s6.table,)),
        ("subgroup closure S6", "subgroup_closure", (s6.table, [1, 2])),
        ("product closed S5", "is_product_closed",
         (s5.table, list(range(s5.order)))),
        ("intersections Z2xZ2xZ4", "close_family", (sub, sub, False, 1 << 20)),
        ("unions Z2xZ2xZ4", "close_family", (sub, sub, True, 1 << 20)),
        ("subgroup closure A5", "subgroup_closure", (a5.table, [1, 2, 3])),
    ]


def _e2e(pure):
    env = dict(os.environ)
    if pure:
        env["NORMSPEC_PURE_PYTHON"] = "1"
    else:
        env.pop("NORMSPEC_PURE_PYTHON", None)
    code = (
        "import time\n"
        "from normspec.catalog import catalog\n"
        "from normspec.verify import verify_theorem_main\n"
        f"names = {E2E_GROUPS!r}\n"
        "t = time.perf_counter()\n"
        "for n in names: verify_theorem_main(catalog(n), n)\n"
        "print(time.perf_counter() - t)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':32s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}")
    for label, fn, call_args in _cases():
        times = []
        for mod in (kernels.compiled, kernels.python):
            f = getattr(mod, fn)
            assert f(*call_args) == getattr(kernels.compiled, fn)(*call_args)
            times.append(min(timeit.repeat(lambda: f(*call_args), number=1,
                                           repeat=args.repeat)) * 1e3)
        print(f"{label:32s} {times[0]:10.2f} {times[1]:10.2f} {times[1] / times[0]:7.1f}x")
    if not args.skip_e2e:
        c, p = _e2e(False), _e2e(True)
        print(f"{'end-to-end ' + str(len(E2E_GROUPS)) + ' groups':32s} "
              f"{c * 1e3:10.0f} {p * 1e3:10.0f} {p / c:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
