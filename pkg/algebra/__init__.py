"""
algebra/
═══════════════════════════════════════════════════════════════════
The LTS algebra every other stage is built on.

  compose.py      synchronous parallel composition, left folds
  hiding.py       channel filtering (relabel to tau)
  determinize.py  tau-closure subset construction
  minimize.py     partition refinement
  equivalence.py  observable trace equivalence with shortest witness
  deadlock.py     reachable non-final sinks and witness paths
  relabel.py      channel renaming and kind assignment

All functions are pure: inputs are never modified.
"""
from algebra.compose import compose_all, parallel_compose
from algebra.deadlock import deadlock_states, trace_to
from algebra.determinize import determinize, tau_closure
from algebra.equivalence import trace_equivalent
from algebra.hiding import hide
from algebra.minimize import minimize
from algebra.relabel import assign_kinds, relabel_channels

__all__ = [
    "assign_kinds",
    "compose_all",
    "deadlock_states",
    "determinize",
    "hide",
    "minimize",
    "parallel_compose",
    "relabel_channels",
    "tau_closure",
    "trace_equivalent",
    "trace_to",
]
