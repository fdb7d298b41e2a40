"""Grover walk on the Cayley tree, its half-line reduction and limit laws."""

from .core import Case, Distribution, Parity, WalkParams, grover_coin, h_kappa, wall_coin
from .linewalk import classical_walk, run_line, step_line
from .treewalk import ReducedWord, distance_distribution, run_tree, step_tree

__all__ = [
    "Case",
    "Distribution",
    "Parity",
    "WalkParams",
    "ReducedWord",
    "grover_coin",
    "h_kappa",
    "wall_coin",
    "run_line",
    "step_line",
    "classical_walk",
    "run_tree",
    "step_tree",
    "distance_distribution",
]

__version__ = "0.1.0"
