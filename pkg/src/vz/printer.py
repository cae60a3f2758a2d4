"""Canonical pretty-printer for terms and formulas.

The printed form is whitespace-normalized, deterministic, and
re-parseable: parse(print(f)) is alpha-equal to f. Bound variables print
bare (their binder carries the sort); free variables print with a ``?``
prefix.
"""
from __future__ import annotations

from .terms import (And, Application, Atom, Constant, Exists, ForAll, Iff,
                    Implies, Modal, ModalOp, Not, Or, Ought, Sort,
                    SymbolVariable, Variable)


def print_real(x: float) -> str:
    s = repr(float(x))
    if "e" in s or "E" in s:
        # canonical format forbids scientific notation
        s = format(float(x), "f").rstrip("0")
        if s.endswith("."):
            s += "0"
    return s


def print_term(t, bound=frozenset()) -> str:
    if isinstance(t, Variable):
        return t.name if t in bound else f"?{t.name}"
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Application):
        name = t.symbol.name
        if isinstance(t.symbol, SymbolVariable):
            name = f"?{name}"
        if not t.args:
            return f"({name})"
        return f"({name} {' '.join(print_term(a, bound) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f, bound=frozenset()) -> str:
    if isinstance(f, Atom):
        return print_term(f.pred, bound)
    if isinstance(f, Not):
        return f"(not {print_formula(f.body, bound)})"
    if isinstance(f, And):
        return f"(and {' '.join(print_formula(p, bound) for p in f.parts)})"
    if isinstance(f, Or):
        return f"(or {' '.join(print_formula(p, bound) for p in f.parts)})"
    if isinstance(f, Implies):
        return f"(implies {print_formula(f.lhs, bound)} {print_formula(f.rhs, bound)})"
    if isinstance(f, Iff):
        return f"(iff {print_formula(f.lhs, bound)} {print_formula(f.rhs, bound)})"
    if isinstance(f, (ForAll, Exists)):
        kw = "forall" if isinstance(f, ForAll) else "exists"
        binders = " ".join(f"({v.name} {v.sort.value})" for v in f.vars)
        return f"({kw} ({binders}) {print_formula(f.body, bound | set(f.vars))})"
    if isinstance(f, Modal):
        parts = [f.op.value]
        parts += [print_term(a, bound) for a in f.agents]
        parts.append(print_term(f.time, bound))
        parts.append(print_formula(f.body, bound))
        return f"({' '.join(parts)})"
    if isinstance(f, Ought):
        return (f"(ought {print_term(f.agent, bound)} {print_term(f.time, bound)} "
                f"{print_formula(f.condition, bound)} {print_formula(f.body, bound)})")
    raise TypeError(f"not a formula: {f!r}")
