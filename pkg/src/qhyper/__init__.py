"""Exact computations with quantum matrices, their integral forms and the dual quantum group."""

from .qring import CycloZ, LaurentZ, RationalQ, gauss_binom, qint
from .qmatrix import GLElem, QMatElem, antipode, coproduct, qdet, qminor, sl_project
from .hyper import HyperElem, basis, contract, gen_binom, gen_tb, hyper_coproduct
from .dualside import DualElem, UMonomial, pairing, xi

__version__ = "0.1.0"

_CLI_EXPORTS = ("evaluate", "parse", "run_suite")


def __getattr__(name):
    # loaded lazily so ``python -m qhyper.cli`` does not import the module twice
    if name in _CLI_EXPORTS:
        from . import cli

        return getattr(cli, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "CycloZ",
    "DualElem",
    "GLElem",
    "HyperElem",
    "LaurentZ",
    "QMatElem",
    "RationalQ",
    "UMonomial",
    "antipode",
    "basis",
    "contract",
    "coproduct",
    "evaluate",
    "gauss_binom",
    "gen_binom",
    "gen_tb",
    "hyper_coproduct",
    "pairing",
    "parse",
    "qdet",
    "qint",
    "qminor",
    "run_suite",
    "sl_project",
    "xi",
]
