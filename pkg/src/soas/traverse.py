"""Renaming, substitution and the generic fold.

``ren`` and ``sub`` are plain structural recursions that push a renaming or
substitution under binders with :func:`~soas.ctx.lift_ren` / :func:`lift_sub`.
:func:`fold` is the catamorphism into an arbitrary :class:`MetaAlgebra`; the
syntactic algebra makes it the identity.
"""

from __future__ import annotations

from typing import Callable

from .ctx import (Ctx, Renaming, Var, concat, copair_ren, id_ren, inl_ren, inr_ren,
                  lift_ren)
from .errors import ContextError
from .term import Arg, Con, MVar, Sub, id_sub, lookup, tabulate


def ren(t, rho: Renaming):
    if isinstance(t, Var):
        if t.index >= len(rho.source) or rho.source[t.index] != t.sort:
            raise ContextError(f"x{t.index} : {t.sort} is not a variable of the renaming's source")
        return Var(rho.map[t.index], t.sort)
    if isinstance(t, MVar):
        return MVar(t.name, tuple(ren(e, rho) for e in t.env))
    if isinstance(t, Con):
        return Con(t.op, t.inst, tuple(
            Arg(a.bound, ren(a.body, lift_ren(a.bound, rho))) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def wkl(t, gamma: Ctx, delta: Ctx):
    """Weaken ``t`` from ``gamma`` into ``gamma + delta`` (indices unchanged)."""
    return ren(t, inl_ren(gamma, delta))


def wkr(t, gamma: Ctx, theta: Ctx):
    """Weaken ``t`` from ``gamma`` into ``theta + gamma`` (indices shift by ``|theta|``)."""
    return ren(t, inr_ren(theta, gamma))


def contr(t, gamma: Ctx):
    """Merge the two copies of ``gamma`` in ``gamma + gamma``."""
    i = id_ren(gamma)
    return ren(t, copair_ren(i, i))


def lift_sub(theta: Ctx, sigma: Sub) -> Sub:
    if not theta:
        return sigma
    theta = tuple(theta)
    shift = inr_ren(theta, sigma.target)
    head = tuple(Var(i, s) for i, s in enumerate(theta))
    return Sub(concat(theta, sigma.source), concat(theta, sigma.target),
               head + tuple(ren(e, shift) for e in sigma.entries))


def sub(t, sigma: Sub):
    if isinstance(t, Var):
        if t.index >= len(sigma.source) or sigma.source[t.index] != t.sort:
            raise ContextError(f"x{t.index} : {t.sort} is not a variable of the substitution's source")
        return lookup(sigma, t)
    if isinstance(t, MVar):
        return MVar(t.name, tuple(sub(e, sigma) for e in t.env))
    if isinstance(t, Con):
        return Con(t.op, t.inst, tuple(
            Arg(a.bound, sub(a.body, lift_sub(a.bound, sigma))) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def _prepend(entries, sorts, gamma):
    gamma = tuple(gamma)
    ident = id_sub(gamma)
    return Sub(tuple(sorts) + gamma, gamma, tuple(entries) + ident.entries)


def sub1(s, t, s_sort, gamma: Ctx = ()):
    """``t[s/x0]`` for ``t`` in ``s_sort . gamma`` and ``s`` in ``gamma``."""
    return sub(t, _prepend([s], [s_sort], gamma))


def sub2(s1, s2, t, sorts, gamma: Ctx = ()):
    """Substitute ``s1`` for x0 and ``s2`` for x1 in ``t``."""
    return sub(t, _prepend([s1, s2], sorts, gamma))


def map_sub(f: Callable, sigma: Sub, target: Ctx | None = None) -> Sub:
    """Apply ``f`` to every entry of ``sigma``."""
    return Sub(sigma.source, sigma.target if target is None else tuple(target),
               tuple(f(e) for e in sigma.entries))


def ren_as_sub(rho: Renaming) -> Sub:
    return tabulate(rho, rho.source, rho.target)


# ---------------------------------------------------------------------------
# generic fold


class MetaAlgebra:
    """Handlers for the three term formers.

    ``on_con`` receives the operator name, its instantiation (a sorted tuple of
    pairs) and a list of ``(bound, value)`` pairs, one per argument.
    """

    def on_con(self, op, inst, args):
        raise NotImplementedError

    def on_var(self, v: Var):
        raise NotImplementedError

    def on_mvar(self, name, values):
        raise NotImplementedError


def fold(alg: MetaAlgebra, t):
    if isinstance(t, Var):
        return alg.on_var(t)
    if isinstance(t, MVar):
        return alg.on_mvar(t.name, [fold(alg, e) for e in t.env])
    if isinstance(t, Con):
        return alg.on_con(t.op, t.inst, [(a.bound, fold(alg, a.body)) for a in t.args])
    raise TypeError(f"not a term: {t!r}")


class SyntacticAlgebra(MetaAlgebra):
    """Rebuilds the term; folding with it is the identity."""

    def on_con(self, op, inst, args):
        return Con(op, inst, tuple(Arg(b, v) for b, v in args))

    def on_var(self, v):
        return v

    def on_mvar(self, name, values):
        return MVar(name, tuple(values))


class SizeAlgebra(MetaAlgebra):
    def on_con(self, op, inst, args):
        return 1 + sum(v for _, v in args)

    def on_var(self, v):
        return 1

    def on_mvar(self, name, values):
        return 1 + sum(values)
