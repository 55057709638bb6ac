"""Compare the compiled and pure-Python word-signature kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

from bratteli import _kernels_py

try:
    from bratteli import _kernels as _compiled
except ImportError:
    _compiled = None

ROWS = [
    (3, 3, 2),
    (2, 2, 2, 2),
    (3, 2, 2, 1),
    (4, 3, 2),
]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _compiled is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    print(f"{'row':>14} {'words':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for row in ROWS:
        ref = _kernels_py.word_signatures(list(row))
        words = sum(ref.values())
        t_py = min(timeit.repeat(lambda: _kernels_py.word_signatures(list(row)), number=1, repeat=args.repeat))
        if _compiled is None:
            print(f"{str(row):>14} {words:>8} {t_py:>10.4f} {'-':>10} {'-':>8}")
            continue
        assert _compiled.word_signatures(list(row)) == ref
        t_cy = min(timeit.repeat(lambda: _compiled.word_signatures(list(row)), number=1, repeat=args.repeat))
        print(f"{str(row):>14} {words:>8} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
