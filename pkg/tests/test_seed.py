from fractions import Fraction

import pytest

from clusteratlas.laurent import LaurentPoly, den_vector, div_exact
from clusteratlas.quiver import BMatrix, mutate_matrix, preset
from clusteratlas.seed import (
    DivisionNotExact,
    Seed,
    canonical_form,
    canonical_key,
    exchange_binomial,
    initial_seed,
    mutate_seed,
)

from helpers import dense_eval, xs

x1, x2 = xs(2)


def test_initial_seed():
    S = initial_seed(preset("a2"))
    assert S.vars == (x1, x2)
    assert [den_vector(v) for v in S.vars] == [(-1, 0), (0, -1)]
    assert canonical_key(S) == canonical_key(initial_seed(preset("a2")))


def test_a2_exchange():
    S = initial_seed(preset("a2"))
    T = mutate_seed(S, 0)
    assert T.vars == (div_exact(x2 + 1, x1), x2)
    assert T.matrix == mutate_matrix(S.matrix, 0)
    U = mutate_seed(T, 1)
    third = U.vars[1]
    assert third == div_exact(x1 + x2 + 1, x1 * x2)
    for point in ([1, 1], [2, 3], [-5, 7]):
        a, b = point
        assert dense_eval(third, point) == Fraction(a + b + 1, a * b)


def test_kronecker_exchange():
    S = initial_seed(preset("kronecker"))
    assert mutate_seed(S, 0).vars == (div_exact(x2 ** 2 + 1, x1), x2)


def test_exchange_relation_identity(rng):
    for name in ("a3", "d4", "atilde12"):
        S = initial_seed(preset(name))
        for _ in range(6):
            k = rng.randrange(S.n)
            T = mutate_seed(S, k)
            assert S.vars[k] * T.vars[k] == exchange_binomial(S.vars, S.matrix, k)
            S = T


def test_non_laurent_input_raises():
    # x1 replaced by x1 + x2 makes the exchange quotient non-Laurent
    S = Seed((x1 + x2, x2), preset("a2"))
    with pytest.raises(DivisionNotExact):
        mutate_seed(S, 0)


def test_index_out_of_range():
    with pytest.raises(IndexError):
        mutate_seed(initial_seed(preset("a2")), 2)


def random_walk(rng, name, steps):
    S = initial_seed(preset(name))
    for _ in range(steps):
        S = mutate_seed(S, rng.randrange(S.n))
    return S


def test_mutation_involution(rng):
    names = ["a2", "a3", "a4", "d4", "kronecker", "atilde12"]
    for _ in range(1000):
        name = rng.choice(names)
        S = random_walk(rng, name, rng.randint(0, 5))
        k = rng.randrange(S.n)
        assert mutate_seed(mutate_seed(S, k), k) == S


def test_positivity_along_walks(rng):
    for name in ("a4", "d4", "kronecker", "atilde12"):
        for _ in range(20):
            S = random_walk(rng, name, 6)
            assert all(c > 0 for v in S.vars for c in v.coefficients())


def test_canonical_key_permutation_invariant(rng):
    S = random_walk(rng, "d4", 4)
    for _ in range(10):
        perm = list(range(S.n))
        rng.shuffle(perm)
        T = Seed(tuple(S.vars[p] for p in perm), S.matrix.permuted(perm))
        assert canonical_key(T) == canonical_key(S)
    C, perm = canonical_form(S)
    assert list(C.vars) == sorted(S.vars, key=LaurentPoly.sort_key)
    assert canonical_key(C) == canonical_key(S)


def test_canonical_keys_distinguish():
    S = initial_seed(preset("a2"))
    # the two seeds containing x1
    assert canonical_key(S) != canonical_key(mutate_seed(S, 1))
    flipped = Seed(S.vars, S.matrix.transpose())
    assert canonical_key(flipped) != canonical_key(S)


def test_repeated_variables_rejected():
    with pytest.raises(ValueError):
        canonical_key(Seed((x1, x1), preset("a2")))


def test_seed_json_round_trip(rng):
    S = random_walk(rng, "atilde12", 4)
    assert Seed.from_json(S.to_json()) == S
    assert set(S.to_json()) == {"matrix", "vars"}


def test_seed_validation():
    with pytest.raises(ValueError):
        Seed((x1,), preset("a2"))
    with pytest.raises(ValueError):
        Seed((x1, LaurentPoly.var(3, 1)), preset("a2"))
