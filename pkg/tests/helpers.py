"""Small builders shared by the test modules."""

from fractions import Fraction

from clusteratlas.laurent import LaurentPoly, evaluate


def poly(rank, terms):
    """``poly(2, {(1, 0): 1, (0, 0): 1})`` is ``x1 + 1``."""
    return LaurentPoly(rank, dict(terms))


def xs(rank):
    return [LaurentPoly.var(rank, i) for i in range(rank)]


def dense_eval(p, point):
    """Independent oracle: evaluate term by term with Fractions."""
    total = Fraction(0)
    for exp, c in p.terms.items():
        t = Fraction(c)
        for e, x in zip(exp, point):
            t *= Fraction(x) ** e
        total += t
    return total


def random_poly(rng, rank, terms=4, lo=-2, hi=2, coeff=5):
    out = {}
    for _ in range(terms):
        exp = tuple(rng.randint(lo, hi) for _ in range(rank))
        c = rng.randint(-coeff, coeff)
        if c:
            out[exp] = out.get(exp, 0) + c
    return LaurentPoly(rank, {e: c for e, c in out.items() if c})


def nonzero_point(rng, rank):
    return [rng.choice([-1, 1]) * rng.randint(1, 9) for _ in range(rank)]


__all__ = ["poly", "xs", "dense_eval", "random_poly", "nonzero_point", "evaluate"]
