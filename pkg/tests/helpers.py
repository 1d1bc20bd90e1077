"""Shared fuzzing utilities: random untyped terms and random strategies."""

import random

from polykernel.weca import UApp, UConst, ULam, UVar, reducts


def random_uterm(rng, depth=0, size=8, constants=()):
    """A random (possibly open-under-depth) untyped term."""
    leaves = [UVar(i) for i in range(depth)] + [UConst(c) for c in constants]
    if size <= 1:
        if leaves:
            return rng.choice(leaves)
        return ULam("x", UVar(0))
    pick = rng.random()
    if pick < 0.45:
        return ULam("x", random_uterm(rng, depth + 1, size - 1, constants))
    if pick < 0.9 and size >= 3:
        left = rng.randrange(1, size - 1)
        return UApp(
            random_uterm(rng, depth, left, constants),
            random_uterm(rng, depth, size - 1 - left, constants),
        )
    if leaves:
        return rng.choice(leaves)
    return ULam("x", UVar(0))


def random_strategy_normalize(t, config, rng, max_steps=300):
    """Contract uniformly random redexes; None when fuel runs out."""
    for _ in range(max_steps):
        options = reducts(t, config)
        if not options:
            return t
        t = rng.choice(options)
    return None
