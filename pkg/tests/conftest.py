import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sqema.formula import (
    BOT, TOP, And, Box, BoxInv, Dia, DiaInv, Iff, Imp, Nom, Not, Or, Var,
    nominals, variables,
)
from sqema.oracle import extension

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("p", "q")


def _tree(leaves, unary, binary, max_leaves=12):
    def extend(children):
        return st.one_of(
            *[children.map(u) for u in unary],
            *[st.tuples(children, children).map(lambda ab, b=b: b(*ab)) for b in binary],
        )
    return st.recursive(leaves, extend, max_leaves=max_leaves)


_ATOMS = st.sampled_from([Var(n) for n in NAMES])
_CONSTS = st.sampled_from([TOP, BOT])
_NOMS = st.integers(0, 2).map(Nom)

basic_formulae = _tree(
    st.one_of(_ATOMS, _CONSTS),
    [Not, Box, Dia],
    [lambda a, b: And((a, b)) if a != b else a,
     lambda a, b: Or((a, b)) if a != b else a, Imp, Iff],
)

hybrid_formulae = _tree(
    st.one_of(_ATOMS, _CONSTS, _NOMS),
    [Not, Box, Dia, BoxInv, DiaInv],
    [lambda a, b: And((a, b)) if a != b else a,
     lambda a, b: Or((a, b)) if a != b else a, Imp, Iff],
    max_leaves=10,
)


def all_models(n, names, noms):
    """Every frame, valuation and nominal assignment on ``n`` worlds, batched.

    Returns (adj, env) with leading axes (frames, valuations, assignments).
    """
    adjs = ((np.arange(1 << (n * n))[:, None] >> np.arange(n * n)) & 1).astype(bool).reshape(-1, n, n)
    k = len(names)
    vals = ((np.arange(1 << (n * k))[:, None] >> np.arange(n * k)) & 1).astype(bool).reshape(1 << (n * k), k, n)
    picks = np.array(list(itertools.product(range(n), repeat=len(noms))), dtype=int).reshape(n ** len(noms), len(noms))
    eye = np.eye(n, dtype=bool)
    env = {p: vals[None, :, None, j, :] for j, p in enumerate(names)}
    for j, m in enumerate(noms):
        env[m] = eye[picks[:, j]][None, None, :, :]
    return adjs[:, None, None, :, :], env


def equivalent(f, g, max_n=2):
    """Same truth set in every model with up to ``max_n`` worlds."""
    names = sorted(variables(f) | variables(g))
    noms = sorted(nominals(f) | nominals(g))
    for n in range(1, max_n + 1):
        adj, env = all_models(n, names, noms)
        a = extension(f, adj, env, {})
        b = extension(g, adj, env, {})
        if not np.array_equal(*np.broadcast_arrays(a, b)):
            return False
    return True


@pytest.fixture
def eq():
    return equivalent
