"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import importlib
import timeit

CASES = [
    ("normal_cdf", "k.normal_cdf(0.37)"),
    ("reg_lower_gamma", "k.reg_lower_gamma(2.5, 3.1)"),
    ("inc_beta_xy", "k.inc_beta_xy(2.5, 4.0, 0.3, 0.7)"),
    ("student_cdf", "k.student_cdf(9.0, 1.7)"),
    ("ncbeta_cdf", "k.ncbeta_cdf(2.0, 3.0, 8.0, 1.5, 1e-13, 10000)"),
    ("anova_series", "k.anova_series(1.5, 5.0, 3.0, 5.0, 10.0, 1e-12, 10000)"),
    ("chi2_one_series", "k.chi2_one_series(2.0, 4.7, 1e-13, 10000)"),
]


def bench(module, stmt, repeat):
    timer = timeit.Timer(stmt, globals={"k": module})
    number, _ = timer.autorange()
    best = min(timer.repeat(repeat=repeat, number=number))
    return best / number


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    py = importlib.import_module("expertvote._pycore")
    try:
        cy = importlib.import_module("expertvote._core")
    except ImportError:
        cy = None
        print("compiled core not built; timing the fallback only")
    print(f"{'kernel':<18}{'python (us)':>14}{'cython (us)':>14}{'speedup':>10}")
    for name, stmt in CASES:
        t_py = bench(py, stmt, args.repeat) * 1e6
        if cy is None:
            print(f"{name:<18}{t_py:>14.2f}")
            continue
        t_cy = bench(cy, stmt, args.repeat) * 1e6
        print(f"{name:<18}{t_py:>14.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
