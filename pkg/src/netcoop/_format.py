from fractions import Fraction


def exact(x: Fraction) -> str:
    """``num/den`` rendering, denominator always present."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def approx(x: Fraction) -> str:
    return f"{float(x):.12g}"


def parse_exact(s: str) -> Fraction:
    return Fraction(s)
