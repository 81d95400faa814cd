"""Base-b digits of integers given by straight-line programs."""

from ._core import (
    ContractViolation,
    DigitReport,
    ExtractionPlan,
    InfeasiblePlan,
    MalformedProgram,
    NotInvertible,
    Op,
    ParseError,
    SizeCapExceeded,
    SlpProgram,
    Step,
    ValueNotPositive,
    coeff_crt,
    coeff_direct,
    extract_digits,
    gen_power_slp,
    make_plan,
    parse_slp,
    plan_violations,
    run_cli,
    serialize_slp,
)

__version__ = "0.1.0"


def digit_count(n, base=10):
    """Number of base-`base` digits of the positive integer n."""
    count = 0
    while n:
        n //= base
        count += 1
    return max(count, 1)


def digit(program, m, base=10, level=4, digits_approx=None, workers=1):
    """Extract the m-th base-`base` digit of the program's value.

    Returns the full DigitReport; `report.digit` is the digit and
    `report.ambiguous` tells whether it sits on a digit boundary.
    """
    if isinstance(program, str):
        program = parse_slp(program)
    if digits_approx is None:
        digits_approx = digit_count(program.eval_exact(), base)
    plan = make_plan(base, m, level, digits_approx)
    return extract_digits(plan, program, workers)
