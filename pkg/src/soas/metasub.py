"""Metasubstitution: replacing parametrised metavariables by terms.

A :class:`MetaMap` sends every metavariable ``m : (Π) τ`` of its source
context to a term of sort ``τ`` over the target metavariable context, living
in ``Π + Γ``: the parameters come first (x0 is the first parameter) followed
by the ambient context ``Γ``.  Substituting into a binder weakens the entries
in the middle, leaving parameters in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .ctx import Ctx, Var, concat, inr_ren, lift_ren
from .errors import CheckError, SoasError
from .term import Arg, Con, MCtx, MVar, Sub, check
from .traverse import ren, sub


@dataclass(frozen=True)
class MetaMap:
    source: MCtx
    target: MCtx
    glob: Ctx
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != len(self.source):
            raise SoasError(
                f"metasubstitution has {len(self.entries)} entries for "
                f"{len(self.source)} metavariables", kind="missing-metavariable")

    def __getitem__(self, name):
        for d, e in zip(self.source, self.entries):
            if d.name == name:
                return e
        raise SoasError(f"metavariable {name!r} is not mapped", kind="missing-metavariable")

    def items(self):
        return zip(self.source, self.entries)


def metamap(source: MCtx, target: MCtx, glob: Ctx, mapping: Mapping) -> MetaMap:
    """Build a total MetaMap from a name-keyed mapping."""
    missing = [d.name for d in source if d.name not in mapping]
    if missing:
        raise SoasError(f"no term given for {', '.join(missing)}", kind="missing-metavariable")
    extra = sorted(set(mapping) - set(source.names))
    if extra:
        raise SoasError(f"{', '.join(extra)} not in the metavariable context",
                        kind="unknown-metavariable")
    return MetaMap(source, target, tuple(glob), tuple(mapping[d.name] for d in source))


def check_metamap(sig, zeta: MetaMap):
    for i, (d, e) in enumerate(zeta.items()):
        try:
            s = check(sig, zeta.target, concat(d.params, zeta.glob), e)
        except CheckError as err:
            raise err.under(d.name)
        if s != d.sort:
            raise CheckError(f"entry for {d.name} has sort {s}, expected {d.sort}",
                             kind="sort-mismatch", path=(d.name,))


def id_metamap(mctx: MCtx, glob: Ctx) -> MetaMap:
    entries = tuple(MVar(d.name, tuple(Var(i, s) for i, s in enumerate(d.params)))
                    for d in mctx)
    return MetaMap(mctx, mctx, tuple(glob), entries)


def wk_metamap(zeta: MetaMap, theta: Ctx) -> MetaMap:
    """Move ``zeta`` under ``theta`` fresh binders (global context ``theta + Γ``)."""
    if not theta:
        return zeta
    theta = tuple(theta)
    shift = inr_ren(theta, zeta.glob)
    entries = tuple(ren(e, lift_ren(d.params, shift)) for d, e in zeta.items())
    return MetaMap(zeta.source, zeta.target, concat(theta, zeta.glob), entries)


def msub(t, zeta: MetaMap):
    if isinstance(t, Var):
        return t
    if isinstance(t, Con):
        return Con(t.op, t.inst, tuple(
            Arg(a.bound, msub(a.body, wk_metamap(zeta, a.bound))) for a in t.args))
    if isinstance(t, MVar):
        d = zeta.source[t.name]
        if len(t.env) != len(d.params):
            raise CheckError(f"{t.name} takes {len(d.params)} argument(s), given {len(t.env)}",
                             kind="env-length-mismatch")
        return sub(zeta[t.name], mvar_sub(zeta, d.params, [msub(e, zeta) for e in t.env]))
    raise TypeError(f"not a term: {t!r}")


def mvar_sub(zeta: MetaMap, params: Ctx, env) -> Sub:
    """Copair of the (already metasubstituted) environment with the identity on Γ."""
    g = zeta.glob
    ident = tuple(Var(i, s) for i, s in enumerate(g))
    return Sub(concat(params, g), g, tuple(env) + ident)


def compose(zeta: MetaMap, xi: MetaMap) -> MetaMap:
    """Kleisli composite: first ``zeta``, then ``xi``."""
    if zeta.target != xi.source or zeta.glob != xi.glob:
        raise SoasError("cannot compose metasubstitutions over different contexts",
                        kind="context-mismatch")
    entries = tuple(msub(e, wk_metamap(xi, d.params)) for d, e in zeta.items())
    return MetaMap(zeta.source, xi.target, zeta.glob, entries)
