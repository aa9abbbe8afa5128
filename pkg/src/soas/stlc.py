"""Denotational and call-by-value semantics of the simply typed λ-calculus.

Works over any signature providing ``app``, ``lam``, ``ze`` and ``su`` with
their usual arities (the bundled ``stlc.soas``).  The evaluator is a fold into
an environment model: a term denotes a function from environments (tuples of
values, x0 first) to values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .ctx import Var
from .errors import SoasError
from .generate import gen_term
from .term import Arg, Con, MCtx
from .traverse import MetaAlgebra, fold, sub1


@dataclass(frozen=True)
class Nat:
    n: int

    def __str__(self):
        return str(self.n)


@dataclass(frozen=True, eq=False)
class Fun:
    fn: Callable
    desc: str = "<fun>"

    def __call__(self, v):
        return self.fn(v)

    def __str__(self):
        return self.desc


class EvalAlgebra(MetaAlgebra):
    def on_var(self, v):
        i = v.index
        return lambda env: env[i]

    def on_mvar(self, name, values):
        raise SoasError(f"cannot evaluate metavariable {name}", kind="open-term")

    def on_con(self, op, inst, args):
        if op == "lam":
            (_, body), = args
            return lambda env: Fun(lambda a: body((a,) + env), f"<fun/{len(env)}>")
        if op == "app":
            (_, f), (_, a) = args
            return lambda env: _apply(f(env), a(env))
        if op == "ze":
            return lambda env: Nat(0)
        if op == "su":
            (_, n), = args
            return lambda env: Nat(_nat(n(env)).n + 1)
        raise SoasError(f"no semantics for operator {op!r}", kind="unknown-operator")


def _apply(f, a):
    if not isinstance(f, Fun):
        raise SoasError(f"applying a non-function value {f}", kind="shape-mismatch")
    return f(a)


def _nat(v):
    if not isinstance(v, Nat):
        raise SoasError(f"expected a numeral, found {v}", kind="shape-mismatch")
    return v


_ALG = EvalAlgebra()


def evaluate(t, env=()):
    """Denotation of ``t`` in environment ``env`` (``env[i]`` interprets x``i``)."""
    return fold(_ALG, t)(tuple(env))


# ---------------------------------------------------------------------------
# small-step call-by-value reduction


class Stuck(SoasError):
    kind = "stuck"


def is_val(t) -> bool:
    if isinstance(t, Con):
        if t.op in ("lam", "ze"):
            return True
        if t.op == "su":
            return is_val(t.args[0].body)
    return False


def step(t):
    """One leftmost call-by-value step; ``None`` on values."""
    if is_val(t):
        return None
    if isinstance(t, Var):
        raise SoasError(f"open term: free variable x{t.index}", kind="open-term")
    if isinstance(t, Con) and t.op == "app":
        f, a = t.args[0].body, t.args[1].body
        if not is_val(f):
            return Con(t.op, t.inst, (Arg((), step(f)), t.args[1]))
        if not is_val(a):
            return Con(t.op, t.inst, (t.args[0], Arg((), step(a))))
        if isinstance(f, Con) and f.op == "lam":
            return sub1(a, f.args[0].body, f.args[0].bound[0])
    if isinstance(t, Con) and t.op == "su":
        return Con(t.op, t.inst, (Arg((), step(t.args[0].body)),))
    raise Stuck(f"no reduction rule applies to {t}")


def multistep(t, fuel):
    """Iterate :func:`step` at most ``fuel`` times: ``(term, steps, reached_value)``."""
    n = 0
    while n < fuel:
        s = step(t)
        if s is None:
            return t, n, True
        t, n = s, n + 1
    return t, n, is_val(t)


def trace(t, fuel):
    """Every term visited by :func:`multistep`, starting with ``t``."""
    out = [t]
    while len(out) <= fuel:
        s = step(out[-1])
        if s is None:
            break
        out.append(s)
    return out


def numeral(t):
    """Integer denoted by a closed numeral ``su(...su(ze))``, else ``None``."""
    n = 0
    while isinstance(t, Con) and t.op == "su":
        t, n = t.args[0].body, n + 1
    return n if isinstance(t, Con) and t.op == "ze" else None


# ---------------------------------------------------------------------------
# comparing values


def sample_value(sig, sort, rng: random.Random, budget=6):
    """A value of ``sort``: the denotation of a random closed term."""
    return evaluate(gen_term(sig, MCtx(), (), sort, budget, rng))


def value_eq(sig, v1, v2, sort, rng: random.Random, samples=5, depth=3) -> bool:
    """Equality at base sort; pointwise on sampled arguments at arrow sorts."""
    if isinstance(v1, Nat) or isinstance(v2, Nat):
        return v1 == v2
    if depth == 0:
        return True
    dom, cod = sort.args
    for _ in range(samples):
        a = sample_value(sig, dom, rng)
        if not value_eq(sig, v1(a), v2(a), cod, rng, samples, depth - 1):
            return False
    return True
