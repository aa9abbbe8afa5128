"""Contexts, sort-carrying de Bruijn variables and renamings.

A context is a tuple of ground sorts whose head (index 0) is the most
recently bound variable.  Renamings are positional: ``ren.map[i]`` is the
target index assigned to source variable ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContextError, SoasError

Ctx = tuple


@dataclass(frozen=True)
class Var:
    """Variable ``index`` of sort ``sort``; also the variable term node."""

    index: int
    sort: object

    def __str__(self):
        return f"x{self.index}"


def concat(gamma: Ctx, delta: Ctx) -> Ctx:
    return tuple(gamma) + tuple(delta)


def lookup_sort(gamma: Ctx, i: int):
    if not 0 <= i < len(gamma):
        raise SoasError(f"index {i} out of bounds for context of length {len(gamma)}",
                        kind="out-of-bounds")
    return gamma[i]


def var_in(gamma: Ctx, v: Var) -> bool:
    return 0 <= v.index < len(gamma) and gamma[v.index] == v.sort


@dataclass(frozen=True)
class Renaming:
    source: Ctx
    target: Ctx
    map: tuple

    def __post_init__(self):
        if len(self.map) != len(self.source):
            raise ContextError(
                f"renaming has {len(self.map)} entries for a source of length {len(self.source)}"
            )
        for i, j in enumerate(self.map):
            if not 0 <= j < len(self.target) or self.target[j] != self.source[i]:
                raise ContextError(
                    f"renaming sends x{i} : {self.source[i]} to an invalid or ill-sorted target x{j}"
                )

    def __call__(self, v: Var) -> Var:
        return Var(self.map[v.index], v.sort)


def id_ren(gamma: Ctx) -> Renaming:
    gamma = tuple(gamma)
    return Renaming(gamma, gamma, tuple(range(len(gamma))))


def compose_ren(rho: Renaming, varrho: Renaming) -> Renaming:
    """Apply ``rho`` first, then ``varrho``."""
    if rho.target != varrho.source:
        raise ContextError("cannot compose renamings: target and source contexts differ")
    return Renaming(rho.source, varrho.target, tuple(varrho.map[j] for j in rho.map))


def inl_ren(gamma: Ctx, delta: Ctx) -> Renaming:
    return Renaming(tuple(gamma), concat(gamma, delta), tuple(range(len(gamma))))


def inr_ren(gamma: Ctx, delta: Ctx) -> Renaming:
    n = len(gamma)
    return Renaming(tuple(delta), concat(gamma, delta), tuple(n + j for j in range(len(delta))))


def copair_ren(rho1: Renaming, rho2: Renaming) -> Renaming:
    if rho1.target != rho2.target:
        raise ContextError("cannot copair renamings with different targets")
    return Renaming(concat(rho1.source, rho2.source), rho1.target, rho1.map + rho2.map)


def lift_ren(theta: Ctx, rho: Renaming) -> Renaming:
    """Extend ``rho`` over ``theta`` freshly bound variables at the head."""
    k = len(theta)
    if k == 0:
        return rho
    return Renaming(
        concat(theta, rho.source),
        concat(theta, rho.target),
        tuple(range(k)) + tuple(k + j for j in rho.map),
    )
