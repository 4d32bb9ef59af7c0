import argparse
import logging

from subdfo.constants import SubspaceKind
from subdfo.driver import SolverOptions, minimize
from subdfo.problem import make_problem
from subdfo.reporter import Reporter

problems_list = [
    "arwhead",
    "brybnd",
    "chrosen",
    "dqrtic",
    "engval1",
    "eg2",
    "liarwhd",
    "nondia",
    "power",
    "rosenbrock",
    "sparsqur",
    "woods",
]


class LargeScaleRun:
    """
    Runs the twelve large-scale problems with three-digit truncated values
    and prints f(x0), f(x_fin) and the number of evaluations for each.
    """

    def __init__(self, n: int, subspace_kind: SubspaceKind, reporter: Reporter):
        self.n = n
        self.options = SolverOptions(truncation_digits=3, subspace_kind=subspace_kind)
        self.reporter = reporter

    def run(self):
        rows = []
        for name in problems_list:
            n = self.n - self.n % 4 if name == "woods" else self.n
            self.reporter.info(f"Running {name} with n={n}")
            result = minimize(make_problem(name, n), self.options, reporter=self.reporter)
            rows.append((name, n, result.f0, result.f, result.nf))
        return rows


def print_table(rows):
    print(f"{'Problem':<12}{'n':>8}{'f(x0)':>12}{'f(x_fin)':>12}{'NF':>10}")
    for name, n, f0, f_fin, nf in rows:
        print(f"{name:<12}{n:>8}{f0:>12.2E}{f_fin:>12.2E}{nf:>10}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Large-scale summary table.")
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument(
        "--subspace",
        choices=[kind.value for kind in SubspaceKind],
        default=SubspaceKind.LMQN.value,
    )
    args = parser.parse_args()

    reporter = Reporter(level=logging.INFO)
    rows = LargeScaleRun(args.n, SubspaceKind(args.subspace), reporter).run()
    print_table(rows)
