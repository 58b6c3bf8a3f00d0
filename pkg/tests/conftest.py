import random
from fractions import Fraction

import pytest

from futakizero.catalog import load_catalog
from futakizero.polyring import AmbientSpace, MultiPoly, ParamField
from futakizero.symmetry import MonomialAutomorphism


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def random_fraction(rng, span=6, allow_zero=True):
    num = rng.randint(-span, span)
    if not allow_zero:
        while num == 0:
            num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def random_ambient(rng):
    nfactors = rng.randint(1, 3)
    factors = []
    used = 0
    for f in range(nfactors):
        dim = rng.randint(1, 2)
        names = tuple(f"c{used + i}" for i in range(dim + 1))
        used += dim + 1
        factors.append(names)
    return AmbientSpace.product(*factors)


def random_multidegree(rng, ambient):
    return tuple(rng.randint(0, 2) for _ in range(ambient.nfactors))


def random_poly(rng, ambient, params=None, degree=None, max_terms=4):
    """Random multihomogeneous polynomial of the given (or random) degree."""
    params = params or ParamField()
    degree = degree if degree is not None else random_multidegree(rng, ambient)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        expo = []
        for f in range(ambient.nfactors):
            block = list(ambient.block(f))
            part = [0] * len(block)
            for _ in range(degree[f]):
                part[rng.randrange(len(block))] += 1
            expo.extend(part)
        coeff = random_fraction(rng, allow_zero=False)
        key = tuple(expo)
        terms[key] = params.const(coeff)
    return MultiPoly(ambient, params, terms)


def random_automorphism(rng, ambient, params=None):
    """Random monomial automorphism: factor bijection among equal-dimension
    factors, per-factor coordinate bijections, random nonzero scalars."""
    params = params or ParamField()
    dims = [d for d, _ in ambient.factors]
    by_dim = {}
    for f, d in enumerate(dims):
        by_dim.setdefault(d, []).append(f)
    source_of = [None] * len(dims)
    for group in by_dim.values():
        shuffled = group[:]
        rng.shuffle(shuffled)
        for img, src in zip(group, shuffled):
            source_of[img] = src
    perm = [None] * len(ambient.coords)
    for f in range(len(dims)):
        image_block = list(ambient.block(f))
        source_block = list(ambient.block(source_of[f]))
        rng.shuffle(source_block)
        for i, j in zip(image_block, source_block):
            perm[i] = j
    scalars = tuple(params.const(random_fraction(rng, allow_zero=False))
                    for _ in perm)
    return MonomialAutomorphism(ambient, tuple(perm), scalars, params)
